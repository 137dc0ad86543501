"""Python-facing smoke tests for the sleepnet extension module.

Runs under pytest or directly: python3 tests/python/test_smoke.py
(the built module must be on PYTHONPATH, e.g. build/python).
"""

import math
import os
import sys
import tempfile

import sleepnet as sn


def test_patches_roundtrip_and_shapes():
    ds = sn.gen_patches(10, 4, 15, 25, seed=3)
    ds.validate()
    assert len(ds) == 4
    assert ds.n_classes == 4
    for img in ds.inputs:
        assert sum(1 for v in img if v == 1.0) == 25

    net = sn.init_network([100, 4], seed=1)
    assert net.arch == [100, 4]
    assert len(net.weights) == 1
    assert len(net.weights[0]) == 4


def test_train_sleep_evaluate_pipeline():
    cfg = sn.patches_incremental_preset()
    ds = sn.gen_patches(10, 4, 15, 25, seed=2)
    t1 = sn.filter_classes(ds, [0, 1])
    t2 = sn.filter_classes(ds, [2, 3])

    net = sn.init_network([100, 4], seed=5)
    stats = sn.ActivationStats.zero([100, 4])
    tc = cfg.train
    tc.seed = 11
    net, stats = sn.train_task(net, t1, tc, stats)
    assert stats.n_examples_seen == 2

    sc = cfg.sleep
    sc.seed = 7
    slept = sn.run_sleep(net, stats, sc)
    assert slept.arch == net.arch
    acc = sn.evaluate(slept, t1).accuracy
    assert 0.0 <= acc <= 1.0

    # zero plasticity leaves the network unchanged (within conversion noise)
    sc.inc_factor = 0.0
    sc.dec_factor = 0.0
    frozen = sn.run_sleep(net, stats, sc)
    for wl, fl in zip(net.weights, frozen.weights):
        for wr, fr in zip(wl, fl):
            for a, b in zip(wr, fr):
                assert abs(a - b) < 1e-12


def test_conversion_roundtrip():
    net = sn.init_network([6, 5, 3], seed=9)
    stats = sn.ActivationStats.zero([6, 5, 3])
    ds = sn.gen_patches(10, 3, 0, 4, 1)  # placeholder data, wrong dim; build stats by hand
    cfg = sn.SleepConfig()
    cfg.thresholds = [1.0, 1.0]
    cfg.synaptic_scales = [1.0, 1.0]

    # drive stats via a quick training pass on matching-dimension data
    data = sn.Dataset()
    data.n_classes = 3
    data.name = "toy"
    data.inputs = [[0.1 * (i + j) % 1.0 or 0.05 for j in range(6)] for i in range(9)]
    data.labels = [i % 3 for i in range(9)]
    tc = sn.TrainConfig()
    tc.learning_rate = 0.05
    tc.seed = 3
    net, stats = sn.train_task(net, data, tc, stats)

    snn = sn.ann_to_snn(net, stats, cfg)
    back = sn.snn_to_ann(snn)
    for wl, bl in zip(net.weights, back.weights):
        for wr, br in zip(wl, bl):
            for a, b in zip(wr, br):
                assert abs(a - b) < 1e-12


def test_forward_and_metrics():
    net = sn.init_network([3, 2], seed=0)
    trace = sn.forward(net, [0.5, 0.25, 1.0])
    assert len(trace.layers) == 2
    assert trace.predicted in (0, 1)

    ds = sn.Dataset()
    ds.n_classes = 2
    ds.inputs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    ds.labels = [0, 1]
    m = sn.evaluate(net, ds)
    assert 0.0 <= m.accuracy <= 1.0
    assert sum(sum(row) for row in m.confusion) == 2


def test_serialization(tmp_path=None):
    path = os.path.join(tempfile.mkdtemp(), "net.snet")
    net = sn.init_network([4, 3], seed=8)
    sn.save_network(net, path)
    assert sn.load_network(path) == net


def test_corruption():
    ds = sn.gen_patches(10, 2, 5, 20, 4)
    noisy = sn.corrupt(ds, "gaussian_noise", 0.2, seed=1)
    assert noisy.labels == ds.labels
    assert all(0.0 <= v <= 1.0 for img in noisy.inputs for v in img)
    same = sn.corrupt(ds, "gaussian_blur", 0.0, seed=1)
    assert same.inputs == ds.inputs


def test_analysis_entry_points():
    ds = sn.gen_patches(10, 4, 15, 25, seed=6)
    net = sn.init_network([100, 4], seed=6)
    spread = sn.weight_spread(net, ds)
    assert len(spread.spread) == 4
    assert math.isfinite(spread.mean_spread)

    net2 = sn.init_network([10, 30, 2], seed=2)
    rep = sn.hidden_partition(net2, [1.0] * 5 + [0.0] * 5, [0.0] * 5 + [1.0] * 5)
    assert len(rep.A) + len(rep.B) + len(rep.C) + len(rep.D) == 30


def test_run_incremental_report():
    cfg = sn.patches_incremental_preset()
    cfg.n_trials = 2
    cfg.seed = 4
    cfg.sleep.n_steps = 200
    rep = sn.run_incremental(cfg)
    assert rep.phase_labels == ["T1", "S1", "T2", "S2"]
    assert rep.row_labels[-1] == "overall"
    assert all(0.0 <= v <= 1.0 for row in rep.accuracy for v in row)
    assert "accuracy_mean" in rep.to_json()


def main():
    fns = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for fn in fns:
        fn()
        print(f"ok {fn.__name__}")
    print(f"{len(fns)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
