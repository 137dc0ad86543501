#include <pybind11/pybind11.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include "sleepnet/analysis.hpp"
#include "sleepnet/config.hpp"
#include "sleepnet/presets.hpp"
#include "sleepnet/report.hpp"
#include "sleepnet/serialize.hpp"

namespace py = pybind11;
using namespace sleepnet;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.emplace_back(m.row(r), m.row(r) + m.cols());
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sleep-phase consolidation for feedforward networks";

  py::class_<Matrix>(m, "Matrix")
      .def(py::init<std::size_t, std::size_t, double>(), py::arg("rows"),
           py::arg("cols"), py::arg("fill") = 0.0)
      .def_property_readonly("rows", &Matrix::rows)
      .def_property_readonly("cols", &Matrix::cols)
      .def("__getitem__",
           [](const Matrix& mat, std::pair<std::size_t, std::size_t> idx) {
             if (idx.first >= mat.rows() || idx.second >= mat.cols())
               throw py::index_error();
             return mat(idx.first, idx.second);
           })
      .def("tolist", &matrix_rows);

  py::class_<Network>(m, "Network")
      .def_readonly("arch", &Network::arch)
      .def_property_readonly(
          "weights",
          [](const Network& net) {
            std::vector<std::vector<std::vector<double>>> out;
            for (const Matrix& w : net.weights) out.push_back(matrix_rows(w));
            return out;
          })
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; });

  py::class_<ActivationStats>(m, "ActivationStats")
      .def_readonly("max_activation", &ActivationStats::max_activation)
      .def_readonly("mean_input", &ActivationStats::mean_input)
      .def_readonly("n_examples_seen", &ActivationStats::n_examples_seen)
      .def_static("zero", &ActivationStats::zero, py::arg("arch"));

  py::enum_<Loss>(m, "Loss")
      .value("SquaredError", Loss::SquaredError)
      .value("CrossEntropy", Loss::CrossEntropy);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("dropout", &TrainConfig::dropout)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("loss", &TrainConfig::loss)
      .def_readwrite("seed", &TrainConfig::seed);

  py::enum_<SleepInputMode>(m, "SleepInputMode")
      .value("FullMean", SleepInputMode::FullMean)
      .value("MaskedMean", SleepInputMode::MaskedMean)
      .value("ActiveUnion", SleepInputMode::ActiveUnion);

  py::class_<SleepConfig>(m, "SleepConfig")
      .def(py::init<>())
      .def_readwrite("input_rate", &SleepConfig::input_rate)
      .def_readwrite("dt", &SleepConfig::dt)
      .def_readwrite("thresholds", &SleepConfig::thresholds)
      .def_readwrite("synaptic_scales", &SleepConfig::synaptic_scales)
      .def_readwrite("inc_factor", &SleepConfig::inc_factor)
      .def_readwrite("dec_factor", &SleepConfig::dec_factor)
      .def_readwrite("n_steps", &SleepConfig::n_steps)
      .def_readwrite("decay", &SleepConfig::decay)
      .def_readwrite("stdp_beta", &SleepConfig::stdp_beta)
      .def_readwrite("w_bound", &SleepConfig::w_bound)
      .def_readwrite("input_mode", &SleepConfig::input_mode)
      .def_readwrite("seed", &SleepConfig::seed);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("inputs", &Dataset::inputs)
      .def_readwrite("labels", &Dataset::labels)
      .def_readwrite("n_classes", &Dataset::n_classes)
      .def_readwrite("name", &Dataset::name)
      .def("__len__", &Dataset::size)
      .def("validate", &Dataset::validate);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("accuracy", &Metrics::accuracy)
      .def_readonly("confusion", &Metrics::confusion)
      .def_readonly("per_class_accuracy", &Metrics::per_class_accuracy);

  py::class_<ActivationTrace>(m, "ActivationTrace")
      .def_readonly("layers", &ActivationTrace::layers)
      .def_readonly("predicted", &ActivationTrace::predicted);

  m.def("init_network", &init_network, py::arg("arch"), py::arg("seed") = 0);
  m.def("forward", &forward, py::arg("net"), py::arg("input"));
  m.def("predict", &predict, py::arg("net"), py::arg("input"));
  m.def("train_task", &train_task, py::arg("net"), py::arg("data"), py::arg("config"),
        py::arg("stats"));
  m.def("evaluate", &evaluate, py::arg("net"), py::arg("data"));
  m.def("mean_loss", &mean_loss, py::arg("net"), py::arg("data"),
        py::arg("loss") = Loss::SquaredError);

  m.def("gen_patches", &gen_patches, py::arg("n_side"), py::arg("n_images"),
        py::arg("overlap"), py::arg("on_count"), py::arg("seed") = 0);
  m.def("load_mnist", &load_mnist, py::arg("images_path"), py::arg("labels_path"));
  m.def(
      "corrupt",
      [](const Dataset& ds, const std::string& kind, double level, std::uint64_t seed) {
        CorruptionSpec spec;
        spec.kind = kind == "gaussian_blur" ? CorruptionKind::GaussianBlur
                                            : CorruptionKind::GaussianNoise;
        spec.level = level;
        spec.seed = seed;
        return corrupt(ds, spec);
      },
      py::arg("dataset"), py::arg("kind"), py::arg("level"), py::arg("seed") = 0);
  m.def("filter_classes", &filter_classes, py::arg("dataset"), py::arg("classes"));

  m.def("run_sleep", &run_sleep, py::arg("net"), py::arg("stats"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("ann_to_snn", &ann_to_snn, py::arg("net"), py::arg("stats"), py::arg("config"));
  m.def("snn_to_ann", &snn_to_ann, py::arg("snn"));
  py::class_<SpikingNetwork>(m, "SpikingNetwork")
      .def_readonly("arch", &SpikingNetwork::arch)
      .def_readonly("scale_record", &SpikingNetwork::scale_record);

  m.def("save_network", &save_network, py::arg("net"), py::arg("path"));
  m.def("load_network", &load_network, py::arg("path"));
  m.def("save_stats", &save_stats, py::arg("stats"), py::arg("path"));
  m.def("load_stats", &load_stats, py::arg("stats_path"));

  py::class_<SpreadStats>(m, "SpreadStats")
      .def_readonly("on_mean", &SpreadStats::on_mean)
      .def_readonly("off_mean", &SpreadStats::off_mean)
      .def_readonly("spread", &SpreadStats::spread)
      .def_readonly("mean_spread", &SpreadStats::mean_spread);
  m.def("weight_spread", &weight_spread, py::arg("net"), py::arg("patches"));

  py::class_<CorrelationResult>(m, "CorrelationResult")
      .def_property_readonly("matrix",
                             [](const CorrelationResult& r) { return matrix_rows(r.corr); })
      .def_readonly("skipped_pairs", &CorrelationResult::skipped_pairs)
      .def("mean_diagonal", &CorrelationResult::mean_diagonal)
      .def("mean_off_diagonal", &CorrelationResult::mean_off_diagonal);
  m.def(
      "activation_correlation",
      [](const Network& net, const Dataset& data, std::size_t layer,
         std::size_t max_examples, std::size_t max_pairs, std::uint64_t seed) {
        CorrelationOptions opt;
        if (max_examples) opt.max_examples_per_class = max_examples;
        if (max_pairs) opt.max_pairs_per_cell = max_pairs;
        opt.seed = seed;
        return activation_correlation(net, data, layer, opt);
      },
      py::arg("net"), py::arg("data"), py::arg("layer"), py::arg("max_examples") = 0,
      py::arg("max_pairs") = 0, py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());

  py::class_<PartitionReport>(m, "PartitionReport")
      .def_readonly("A", &PartitionReport::A)
      .def_readonly("B", &PartitionReport::B)
      .def_readonly("C", &PartitionReport::C)
      .def_readonly("D", &PartitionReport::D)
      .def_readonly("a", &PartitionReport::a)
      .def_readonly("b", &PartitionReport::b)
      .def_readonly("p", &PartitionReport::p)
      .def_readonly("q", &PartitionReport::q)
      .def_readonly("out1_fires_p1", &PartitionReport::out1_fires_p1)
      .def_readonly("out2_fires_p2", &PartitionReport::out2_fires_p2)
      .def_readonly("predicted_p1", &PartitionReport::predicted_p1)
      .def_readonly("predicted_p2", &PartitionReport::predicted_p2);
  m.def("hidden_partition", &hidden_partition, py::arg("net"), py::arg("cat1"),
        py::arg("cat2"));

  py::class_<ForgettingSetup>(m, "ForgettingSetup")
      .def(py::init<>())
      .def_readwrite("n_dims", &ForgettingSetup::n_dims)
      .def_readwrite("hidden", &ForgettingSetup::hidden)
      .def_readwrite("overlap", &ForgettingSetup::overlap)
      .def_readwrite("on_count", &ForgettingSetup::on_count)
      .def_readwrite("learning_rate", &ForgettingSetup::learning_rate)
      .def_readwrite("epochs", &ForgettingSetup::epochs)
      .def_readwrite("seed", &ForgettingSetup::seed);
  m.def("forgetting_rate", &forgetting_rate, py::arg("trials"), py::arg("setup"),
        py::call_guard<py::gil_scoped_release>());

  py::enum_<SleepSchedule>(m, "SleepSchedule")
      .value("AfterEachTask", SleepSchedule::AfterEachTask)
      .value("FinalOnly", SleepSchedule::FinalOnly)
      .value("None_", SleepSchedule::None);

  py::class_<DatasetSpec>(m, "DatasetSpec")
      .def(py::init<>())
      .def_readwrite("n_side", &DatasetSpec::n_side)
      .def_readwrite("n_images", &DatasetSpec::n_images)
      .def_readwrite("overlap", &DatasetSpec::overlap)
      .def_readwrite("on_count", &DatasetSpec::on_count)
      .def_readwrite("seed", &DatasetSpec::seed);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("name", &ExperimentConfig::name)
      .def_readwrite("dataset", &ExperimentConfig::dataset)
      .def_readwrite("arch", &ExperimentConfig::arch)
      .def_readwrite("task_groups", &ExperimentConfig::task_groups)
      .def_readwrite("train", &ExperimentConfig::train)
      .def_readwrite("sleep", &ExperimentConfig::sleep)
      .def_readwrite("n_trials", &ExperimentConfig::n_trials)
      .def_readwrite("schedule", &ExperimentConfig::schedule)
      .def_readwrite("seed", &ExperimentConfig::seed);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("row_labels", &RunReport::row_labels)
      .def_readonly("phase_labels", &RunReport::phase_labels)
      .def_property_readonly("accuracy",
                             [](const RunReport& r) { return matrix_rows(r.acc_mean); })
      .def_property_readonly("final_overall", &RunReport::final_overall)
      .def("to_json", [](const RunReport& r) { return to_json(r).dump(); });

  m.def("run_incremental", &run_incremental, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<ForwardTransferResult>(m, "ForwardTransferResult")
      .def_readonly("task1_acc_mean", &ForwardTransferResult::task1_acc_mean)
      .def_readonly("task2_acc_mean", &ForwardTransferResult::task2_acc_mean)
      .def_readonly("task2_acc_std", &ForwardTransferResult::task2_acc_std)
      .def_readonly("chance_mean", &ForwardTransferResult::chance_mean);
  m.def("run_forward_transfer", &run_forward_transfer, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def("patches_incremental_preset", &presets::patches_incremental);
  m.def("patches_forward_transfer_preset", &presets::patches_forward_transfer);
  m.def("mnist_incremental_preset", &presets::mnist_incremental, py::arg("data_dir"));
  m.def("mnist_generalization_preset", &presets::mnist_generalization,
        py::arg("data_dir"));
  m.def("find_mnist_dir", &presets::find_mnist_dir);
}
