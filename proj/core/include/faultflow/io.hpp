#pragma once

#include <string>
#include <vector>

#include "faultflow/pipeline.hpp"

namespace faultflow::io {

inline constexpr int schema_version = 1;

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

// Ensemble: long-format CSV (member, grid index, s_d, K, Pc, S, Krw, Krnw).
void write_ensemble_csv(const std::string& path, const std::vector<FlowFunctionSample>& ensemble,
                        const SdGrid& grid);
std::vector<FlowFunctionSample> read_ensemble_csv(const std::string& path, SdGrid* grid = nullptr);

std::string facies_config_to_json(const FaciesModelConfig& cfg);
FaciesModelConfig facies_config_from_json(const std::string& text);

std::string proxy_config_to_json(const ProxyConfig& cfg);
/// Missing keys keep their defaults.
ProxyConfig proxy_config_from_json(const std::string& text);

std::string reduced_model_to_json(const ReducedModelFit& fit);
ReducedModelFit reduced_model_from_json(const std::string& text);

std::string vine_to_json(const VineModel& vine);
VineModel vine_from_json(const std::string& text);

std::string artifacts_to_json(const CaseArtifacts& a);
CaseArtifacts artifacts_from_json(const std::string& text);

std::string stratification_to_json(const Stratification& s);

void write_flow_functions_csv(const std::string& path, const FlowFunctionSample& f, const SdGrid& grid);

/// Time series CSV and JSON summary of one proxy run.
void write_sim_result(const std::string& csv_path, const std::string& json_path, const SimResult& r);

/// summary.json, samples.csv and histogram.csv in `dir`.
void write_study(const std::string& dir, const StudyReport& rep);
std::string study_summary_json(const StudyReport& rep);
std::string samples_csv(const StudyReport& rep);
std::string histogram_csv(const Histogram& h);

struct SampleLog {
  std::vector<Evaluation> samples;
  std::vector<double> weights;
};
SampleLog read_samples_csv(const std::string& path);

}  // namespace faultflow::io
