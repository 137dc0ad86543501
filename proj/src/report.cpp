#include "sleepnet/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sleepnet/svg.hpp"

namespace sleepnet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string confusion_csv(const std::vector<std::vector<std::size_t>>& confusion) {
  std::ostringstream os;
  os << "true\\pred";
  for (std::size_t j = 0; j < confusion.size(); ++j) os << ',' << j;
  os << '\n';
  for (std::size_t i = 0; i < confusion.size(); ++i) {
    os << i;
    for (std::size_t j = 0; j < confusion[i].size(); ++j) os << ',' << confusion[i][j];
    os << '\n';
  }
  return os.str();
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.push_back(std::vector<double>(m.row(r), m.row(r) + m.cols()));
  return rows;
}

}  // namespace

std::string accuracy_matrix_csv(const RunReport& rep) {
  std::ostringstream os;
  os << "row";
  for (const std::string& p : rep.phase_labels) os << ',' << p;
  os << '\n';
  for (std::size_t r = 0; r < rep.acc_mean.rows(); ++r) {
    os << rep.row_labels[r];
    for (std::size_t c = 0; c < rep.acc_mean.cols(); ++c)
      os << ',' << num(rep.acc_mean(r, c));
    os << '\n';
  }
  return os.str();
}

json to_json(const RunReport& rep) {
  return json{{"row_labels", rep.row_labels},
              {"phase_labels", rep.phase_labels},
              {"accuracy_mean", matrix_to_json(rep.acc_mean)},
              {"accuracy_std", matrix_to_json(rep.acc_std)},
              {"confusion_per_phase", rep.confusion},
              {"n_trials", rep.n_trials},
              {"trial_seeds", rep.trial_seeds}};
}

json to_json(const Metrics& metrics) {
  return json{{"accuracy", metrics.accuracy},
              {"confusion", metrics.confusion},
              {"per_class_accuracy", metrics.per_class_accuracy}};
}

json to_json(const SpreadStats& stats) {
  return json{{"on_mean", stats.on_mean},
              {"off_mean", stats.off_mean},
              {"spread", stats.spread},
              {"mean_spread", stats.mean_spread}};
}

json to_json(const CorrelationResult& res) {
  return json{{"correlation", matrix_to_json(res.corr)},
              {"skipped_pairs", res.skipped_pairs},
              {"mean_diagonal", res.mean_diagonal()},
              {"mean_off_diagonal", res.mean_off_diagonal()}};
}

json to_json(const PartitionReport& rep) {
  return json{{"A", rep.A},       {"B", rep.B},
              {"C", rep.C},       {"D", rep.D},
              {"a", rep.a},       {"b", rep.b},
              {"p", rep.p},       {"q", rep.q},
              {"out1_fires_p1", rep.out1_fires_p1},
              {"out2_fires_p2", rep.out2_fires_p2},
              {"predicted_p1", rep.predicted_p1},
              {"predicted_p2", rep.predicted_p2}};
}

void write_manifest(const json& manifest, const std::string& out_dir) {
  write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

void write_run_report(const RunReport& rep, const ExperimentConfig& cfg,
                      const std::string& out_dir) {
  const fs::path dir(out_dir);
  json j = to_json(rep);
  j["config"] = to_json(cfg);
  write_text(dir / "report.json", j.dump(2) + "\n");
  write_text(dir / "accuracy_matrix.csv", accuracy_matrix_csv(rep));
  for (std::size_t ph = 0; ph < rep.confusion.size(); ++ph)
    write_text(dir / ("confusion_" + rep.phase_labels[ph] + ".csv"),
               confusion_csv(rep.confusion[ph]));

  std::vector<Series> series;
  for (std::size_t r = 0; r < rep.acc_mean.rows(); ++r) {
    Series s;
    s.label = rep.row_labels[r];
    for (std::size_t c = 0; c < rep.acc_mean.cols(); ++c) {
      s.x.push_back(static_cast<double>(c));
      s.y.push_back(rep.acc_mean(r, c));
    }
    series.push_back(std::move(s));
  }
  write_text(dir / "accuracy_vs_phase.svg",
             line_chart_svg(cfg.name, "phase index", "accuracy", series));
}

void write_overlap_sweep(const OverlapSweepResult& res, const ExperimentConfig& cfg,
                         const std::string& out_dir) {
  const fs::path dir(out_dir);
  std::ostringstream csv;
  csv << "overlap,schedule,phase,task1,task2,overall\n";
  json points = json::array();
  for (const OverlapPoint& p : res.points) {
    const std::vector<std::pair<std::string, const RunReport*>> rows = {
        {"after_each_task", &p.sleep_each},
        {"final_only", &p.sleep_final},
        {"none", &p.baseline}};
    for (const auto& [sched, rep] : rows)
      for (std::size_t c = 0; c < rep->phase_labels.size(); ++c)
        csv << p.overlap << ',' << sched << ',' << rep->phase_labels[c] << ','
            << num(rep->acc_mean(0, c)) << ',' << num(rep->acc_mean(1, c)) << ','
            << num(rep->acc_mean(rep->acc_mean.rows() - 1, c)) << '\n';
    points.push_back(json{{"overlap", p.overlap},
                          {"after_each_task", to_json(p.sleep_each)},
                          {"final_only", to_json(p.sleep_final)},
                          {"none", to_json(p.baseline)}});
  }
  write_text(dir / "overlap_sweep.csv", csv.str());
  json j{{"points", points}, {"skipped", res.skipped}, {"config", to_json(cfg)}};
  write_text(dir / "report.json", j.dump(2) + "\n");

  // final-phase task-1 accuracy per schedule
  auto curve = [&](auto pick, const std::string& label) {
    Series s;
    s.label = label;
    for (const OverlapPoint& p : res.points) {
      s.x.push_back(p.overlap);
      s.y.push_back(pick(p));
    }
    return s;
  };
  std::vector<Series> series{
      curve([](const OverlapPoint& p) {
        return p.sleep_each.acc_mean(0, p.sleep_each.acc_mean.cols() - 1);
      }, "task1, sleep each"),
      curve([](const OverlapPoint& p) {
        return p.sleep_final.acc_mean(0, p.sleep_final.acc_mean.cols() - 1);
      }, "task1, final sleep"),
      curve([](const OverlapPoint& p) {
        return p.baseline.acc_mean(0, p.baseline.acc_mean.cols() - 1);
      }, "task1, no sleep")};
  write_text(dir / "overlap_sweep.svg",
             line_chart_svg(cfg.name, "overlapping pixels", "accuracy", series));
}

void write_generalization(const GeneralizationResult& res, const ExperimentConfig& cfg,
                          const std::string& out_dir) {
  const fs::path dir(out_dir);
  std::ostringstream csv;
  csv << "kind,level,before_mean,before_std,after_mean,after_std\n";
  json curves = json::array();
  for (const GeneralizationCurve& c : res.curves) {
    const std::string kind = c.kind == CorruptionKind::GaussianNoise ? "noise" : "blur";
    for (std::size_t i = 0; i < c.levels.size(); ++i)
      csv << kind << ',' << num(c.levels[i]) << ',' << num(c.before_mean[i]) << ','
          << num(c.before_std[i]) << ',' << num(c.after_mean[i]) << ','
          << num(c.after_std[i]) << '\n';
    curves.push_back(json{{"kind", kind},
                          {"levels", c.levels},
                          {"before_mean", c.before_mean},
                          {"before_std", c.before_std},
                          {"after_mean", c.after_mean},
                          {"after_std", c.after_std},
                          {"best_level_index", c.best_level_index},
                          {"confusion_before", c.confusion_before},
                          {"confusion_after", c.confusion_after}});

    std::vector<Series> series{{"before sleep", c.levels, c.before_mean},
                               {"after sleep", c.levels, c.after_mean}};
    write_text(dir / ("generalization_" + kind + ".svg"),
               line_chart_svg(cfg.name + " (" + kind + ")", "degradation level",
                              "accuracy", series));
    write_text(dir / ("confusion_" + kind + "_before.csv"),
               confusion_csv(c.confusion_before));
    write_text(dir / ("confusion_" + kind + "_after.csv"), confusion_csv(c.confusion_after));
  }
  write_text(dir / "generalization.csv", csv.str());
  json j{{"curves", curves},
         {"clean_before", res.clean_before},
         {"clean_after", res.clean_after},
         {"n_trials", res.n_trials},
         {"config", to_json(cfg)}};
  write_text(dir / "report.json", j.dump(2) + "\n");
}

void write_forward_transfer(const ForwardTransferResult& res, const ExperimentConfig& cfg,
                            const std::string& out_dir) {
  const fs::path dir(out_dir);
  json j{{"task1_acc_mean", res.task1_acc_mean},
         {"task2_acc_mean", res.task2_acc_mean},
         {"task2_acc_std", res.task2_acc_std},
         {"chance_mean", res.chance_mean},
         {"n_trials", res.n_trials},
         {"config", to_json(cfg)}};
  write_text(dir / "report.json", j.dump(2) + "\n");
  std::ostringstream csv;
  csv << "metric,value\n"
      << "task1_acc_mean," << num(res.task1_acc_mean) << '\n'
      << "task2_acc_mean," << num(res.task2_acc_mean) << '\n'
      << "task2_acc_std," << num(res.task2_acc_std) << '\n'
      << "chance_mean," << num(res.chance_mean) << '\n';
  write_text(dir / "forward_transfer.csv", csv.str());
}

void write_ga_result(const GaResult& res, const ExperimentConfig& cfg,
                     const std::string& out_dir) {
  const fs::path dir(out_dir);
  json j{{"best_sleep_config", to_json(res.best)},
         {"best_fitness", res.best_fitness},
         {"best_per_generation", res.best_per_generation},
         {"evaluations", res.evaluations},
         {"config", to_json(cfg)}};
  write_text(dir / "report.json", j.dump(2) + "\n");

  Series trace;
  trace.label = "best fitness";
  for (std::size_t g = 0; g < res.best_per_generation.size(); ++g) {
    trace.x.push_back(static_cast<double>(g));
    trace.y.push_back(res.best_per_generation[g]);
  }
  write_text(dir / "ga_trace.svg",
             line_chart_svg(cfg.name, "generation", "fitness", {trace}));
}

}  // namespace sleepnet
