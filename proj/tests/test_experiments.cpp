#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sleepnet/config.hpp"
#include "sleepnet/presets.hpp"
#include "sleepnet/report.hpp"

using namespace sleepnet;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_patches_cfg() {
  ExperimentConfig cfg = presets::patches_incremental();
  cfg.n_trials = 3;
  cfg.sleep.n_steps = 300;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("run_incremental phase bookkeeping") {
  ExperimentConfig cfg = small_patches_cfg();
  const RunReport rep = run_incremental(cfg);

  // 2 tasks, sleep after each: T1 S1 T2 S2
  CHECK(rep.phase_labels == std::vector<std::string>{"T1", "S1", "T2", "S2"});
  CHECK(rep.row_labels == std::vector<std::string>{"task1", "task2", "overall"});
  CHECK(rep.acc_mean.rows() == 3);
  CHECK(rep.acc_mean.cols() == 4);
  CHECK(rep.confusion.size() == 4);
  for (std::size_t r = 0; r < rep.acc_mean.rows(); ++r)
    for (std::size_t c = 0; c < rep.acc_mean.cols(); ++c) {
      CHECK(rep.acc_mean(r, c) >= 0.0);
      CHECK(rep.acc_mean(r, c) <= 1.0);
    }

  // deterministic with fixed seeds
  CHECK(rep == run_incremental(cfg));

  // schedule variants change the phase layout
  cfg.schedule = SleepSchedule::FinalOnly;
  CHECK(run_incremental(cfg).phase_labels ==
        std::vector<std::string>{"T1", "T2", "S"});
  cfg.schedule = SleepSchedule::None;
  CHECK(run_incremental(cfg).phase_labels == std::vector<std::string>{"T1", "T2"});
}

TEST_CASE("baseline and sleep runs share training seeds") {
  // with zero plasticity, the sleep run must reproduce the baseline exactly
  ExperimentConfig cfg = small_patches_cfg();
  cfg.sleep.inc_factor = 0.0;
  cfg.sleep.dec_factor = 0.0;
  const RunReport sleep_rep = run_incremental(cfg);
  cfg.schedule = SleepSchedule::None;
  const RunReport base = run_incremental(cfg);
  // compare training phases only (T1, T2 columns)
  for (std::size_t r = 0; r < base.acc_mean.rows(); ++r) {
    CHECK(base.acc_mean(r, 0) == sleep_rep.acc_mean(r, 0));   // T1
    CHECK(base.acc_mean(r, 1) == sleep_rep.acc_mean(r, 2));   // T2
  }
}

TEST_CASE("run_overlap_sweep skips infeasible points") {
  ExperimentConfig cfg = small_patches_cfg();
  cfg.n_trials = 1;
  cfg.overlap_values = {0, 15, 24, 26};  // 26 > on_count -> skipped
  const OverlapSweepResult res = run_overlap_sweep(cfg);
  CHECK(res.points.size() == 3);
  CHECK(res.skipped == std::vector<int>{26});
  for (const OverlapPoint& p : res.points) {
    CHECK(p.sleep_each.phase_labels.size() == 4);
    CHECK(p.sleep_final.phase_labels.size() == 3);
    CHECK(p.baseline.phase_labels.size() == 2);
  }

  // overlap 0 (disjoint supports): even the baseline keeps task 1
  CHECK(res.points[0].baseline.acc_mean(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("run_generalization identity level and layout") {
  ExperimentConfig cfg = small_patches_cfg();
  cfg.task_groups = {{0, 1, 2, 3}};
  cfg.schedule = SleepSchedule::FinalOnly;
  cfg.n_trials = 2;
  cfg.noise_levels = {0.0, 0.3};
  cfg.blur_levels = {0.0, 0.8};
  const GeneralizationResult res = run_generalization(cfg);
  REQUIRE(res.curves.size() == 2);
  for (const GeneralizationCurve& c : res.curves) {
    REQUIRE(c.levels.size() == 2);
    // level 0 equals the clean accuracy for both before and after
    CHECK(c.before_mean[0] == doctest::Approx(res.clean_before));
    CHECK(c.after_mean[0] == doctest::Approx(res.clean_after));
  }
}

TEST_CASE("run_forward_transfer reports chance from untrained nets") {
  ExperimentConfig cfg = small_patches_cfg();
  cfg.n_trials = 20;
  const ForwardTransferResult res = run_forward_transfer(cfg);
  CHECK(res.n_trials == 20);
  // untrained 4-way argmax on 2 classes sits loosely around 1/4
  CHECK(res.chance_mean > 0.05);
  CHECK(res.chance_mean < 0.45);
  CHECK(res.task1_acc_mean >= 0.0);
  CHECK(res.task2_acc_mean <= 1.0);
}

TEST_CASE("sleep field access by name") {
  SleepConfig cfg;
  cfg.thresholds = {1.0, 2.0};
  cfg.synaptic_scales = {3.0, 4.0};
  set_sleep_field(cfg, "inc_factor", 0.42);
  CHECK(get_sleep_field(cfg, "inc_factor") == 0.42);
  set_sleep_field(cfg, "thresholds[1]", 9.0);
  CHECK(cfg.thresholds[1] == 9.0);
  CHECK(get_sleep_field(cfg, "synaptic_scales[0]") == 3.0);
  set_sleep_field(cfg, "n_steps", 1234.4);
  CHECK(cfg.n_steps == 1234);
  CHECK_THROWS_AS(get_sleep_field(cfg, "thresholds[7]"), std::invalid_argument);
  CHECK_THROWS_AS(set_sleep_field(cfg, "nope", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(set_sleep_field(cfg, "decay[0]", 1.0), std::invalid_argument);
}

TEST_CASE("ga_search on a known-optimum toy fitness") {
  SleepConfig base = presets::patches_incremental().sleep;
  const double target = 0.42;
  FitnessFn fitness = [&](const SleepConfig& cfg) {
    const double x = cfg.decay;
    return -(x - target) * (x - target);
  };
  std::vector<GeneSpec> space{{"decay", 0.01, 0.99}};
  GaConfig ga;
  ga.population = 20;
  ga.budget = 20 * 21;  // 20 generations after the initial population
  ga.seed = 3;
  const GaResult res = ga_search(base, space, fitness, ga);
  CHECK(std::abs(res.best.decay - target) / target < 0.05);

  // elitism: best fitness never decreases
  for (std::size_t g = 1; g < res.best_per_generation.size(); ++g)
    CHECK(res.best_per_generation[g] >= res.best_per_generation[g - 1]);

  // constant fitness: flat trace, a member of the search box returned
  FitnessFn flat = [](const SleepConfig&) { return 7.0; };
  const GaResult fres = ga_search(base, space, flat, ga);
  CHECK(fres.best_fitness == 7.0);
  for (double v : fres.best_per_generation) CHECK(v == 7.0);
  CHECK(fres.best.decay >= 0.01);
  CHECK(fres.best.decay <= 0.99);

  // determinism
  const GaResult again = ga_search(base, space, fitness, ga);
  CHECK(again.best.decay == res.best.decay);

  // budget below one population is rejected
  GaConfig tiny = ga;
  tiny.budget = 10;
  CHECK_THROWS_AS(ga_search(base, space, fitness, tiny), std::invalid_argument);
  CHECK_THROWS_AS(ga_search(base, {}, fitness, ga), std::invalid_argument);
  CHECK_THROWS_AS(ga_search(base, {{"decay", 0.9, 0.2}}, fitness, ga),
                  std::invalid_argument);
}

TEST_CASE("report writers emit the documented files") {
  ExperimentConfig cfg = small_patches_cfg();
  cfg.n_trials = 1;
  const RunReport rep = run_incremental(cfg);
  const fs::path dir = fs::temp_directory_path() / "sleepnet_test_report";
  fs::remove_all(dir);
  write_run_report(rep, cfg, dir.string());
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "accuracy_matrix.csv"));
  CHECK(fs::exists(dir / "accuracy_vs_phase.svg"));
  CHECK(fs::exists(dir / "confusion_T1.csv"));

  // accuracy CSV header row matches the phases
  std::ifstream csv(dir / "accuracy_matrix.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "row,T1,S1,T2,S2");

  // byte-identical on rerun (determinism of the whole artifact)
  std::stringstream first;
  first << std::ifstream((dir / "report.json")).rdbuf();
  write_run_report(run_incremental(cfg), cfg, dir.string());
  std::stringstream second;
  second << std::ifstream((dir / "report.json")).rdbuf();
  CHECK(first.str() == second.str());
  fs::remove_all(dir);
}
