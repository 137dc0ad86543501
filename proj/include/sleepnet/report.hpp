#pragma once

#include <string>

#include "sleepnet/analysis.hpp"
#include "sleepnet/config.hpp"
#include "sleepnet/experiments.hpp"

namespace sleepnet {

/// Writers emit report.json plus CSV matrices and SVG charts into out_dir,
/// and a manifest.json capturing the resolved config and seeds.
void write_run_report(const RunReport& rep, const ExperimentConfig& cfg,
                      const std::string& out_dir);
void write_overlap_sweep(const OverlapSweepResult& res, const ExperimentConfig& cfg,
                         const std::string& out_dir);
void write_generalization(const GeneralizationResult& res, const ExperimentConfig& cfg,
                          const std::string& out_dir);
void write_forward_transfer(const ForwardTransferResult& res, const ExperimentConfig& cfg,
                            const std::string& out_dir);
void write_ga_result(const GaResult& res, const ExperimentConfig& cfg,
                     const std::string& out_dir);

void write_manifest(const nlohmann::json& manifest, const std::string& out_dir);

nlohmann::json to_json(const RunReport& rep);
nlohmann::json to_json(const Metrics& metrics);
nlohmann::json to_json(const SpreadStats& stats);
nlohmann::json to_json(const CorrelationResult& res);
nlohmann::json to_json(const PartitionReport& rep);

std::string accuracy_matrix_csv(const RunReport& rep);

}  // namespace sleepnet
