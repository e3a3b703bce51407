#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faultflow/facies.hpp"
#include "faultflow/proxy.hpp"
#include "faultflow/reduced_model.hpp"
#include "faultflow/sampling.hpp"
#include "faultflow/vine.hpp"

namespace faultflow {

/// Fitted inputs shared by the six cases for one clay permeability.
struct CaseArtifacts {
  double k_clay = 0.0;
  std::optional<LognormalFit> fault_k;     // mD
  FlowFunctionSample reference;            // ensemble mean curves
  ReducedModelFit reduced;
  VineModel vine;                          // over (Y1..Y5)
  std::optional<LognormalFit> troll_k;     // mD, arithmetic facies average
  std::array<LognormalFit, 6> layers{};    // mD
  bool layers_set = false;
};

struct ArtifactOptions {
  std::size_t n_ref = 10000;
  std::size_t n_troll = 10000;
  std::size_t grid_points = 21;
  double grid_lower = 1e-6;
  std::uint64_t seed = 20240501;
  FaciesModelConfig facies;  // k_clay is overridden
  /// Troll connection: SGR profile segment from this depth range.
  double troll_top = 1500.0, troll_bottom = 1600.0;
  VineFitOptions vine;
  std::array<double, 6> layer_means{1000, 50, 1000, 50, 850, 25};
  double layer_std = 100.0;
};

/// Upscaled ensemble, lognormal fits, reduced model, vine and Troll model.
CaseArtifacts build_artifacts(double k_clay, const ArtifactOptions& opts = {});
/// Same as build_artifacts but from an existing ensemble.
CaseArtifacts build_artifacts(double k_clay, const std::vector<FlowFunctionSample>& ensemble, const SdGrid& grid,
                              const ArtifactOptions& opts = {});

struct CaseSpec {
  int case_id = 1;  // 1..6
  double k_clay = 0.0;
  std::size_t n_dims = 0;
  std::vector<std::string> dim_names;
};

/// Number of stochastic dimensions of a case: 1, 7, 5, 6, 11, 12.
std::size_t case_dimensions(int case_id);
std::string case_name(int case_id);
/// Parses "I".."VI" or "1".."6".
int parse_case(const std::string& s);

/// Proxy inputs produced by a case for one point of the unit cube.
struct ProxyInputs {
  FlowFunctionSample fault;
  std::array<double, 6> layer_perms{};
  double k_troll = 0.0;
};

class CaseModel {
 public:
  CaseModel(int case_id, const CaseArtifacts& artifacts, ProxyConfig proxy = {});

  const CaseSpec& spec() const { return spec_; }
  const ProxyConfig& proxy_config() const { return proxy_; }
  /// Routes u to the proxy inputs.  Order: fault/copula dims, then the six
  /// layers, then Troll.
  ProxyInputs inputs(std::span<const double> u) const;
  SimResult simulate(std::span<const double> u) const;
  /// Total leaked CO2 (tonnes) at the end of the run.
  double leakage(std::span<const double> u) const;

 private:
  CaseSpec spec_;
  CaseArtifacts art_;
  ProxyConfig proxy_;
  double k_troll_ref_ = 0.0;
};

struct Histogram {
  double lower = 0.0, upper = 0.0;
  std::vector<double> edges;   // bins + 1
  std::vector<double> counts;  // weighted counts
};

/// Equal-width bins over [min, max] of the values; weights default to 1.
Histogram make_histogram(std::span<const double> values, std::size_t bins = 40,
                         std::span<const double> weights = {});

struct Percentiles {
  double p10 = 0.0, p50 = 0.0, p90 = 0.0;
};
Percentiles percentiles(std::span<const double> values, std::span<const double> weights = {});

enum class StudyMethod { smc, adss };
std::string to_string(StudyMethod m);
StudyMethod study_method_from_string(const std::string& s);

struct StudyOptions {
  StudyMethod method = StudyMethod::smc;
  std::size_t budget = 1000;
  std::size_t repeats = 1;  // > 1 with adss: repeated runs for the empirical variance
  std::size_t batch = 50;
  double alpha = 0.5;
  std::uint64_t seed = 1;
  std::size_t bins = 40;
};

struct StudyReport {
  static constexpr int schema_version = 1;
  CaseSpec spec;
  StudyOptions options;
  double estimate = 0.0;
  double variance = 0.0;            // nominal
  double empirical_variance = 0.0;  // over repeats (adss, repeats > 1)
  std::vector<double> estimates;    // one per repeat
  std::vector<Evaluation> samples;  // log of the first run
  std::vector<double> weights;      // probability weight of each sample
  Histogram histogram;
  Percentiles pct;
  double max_mass_balance_error = 0.0;
  std::size_t n_strata = 1;
  Stratification stratification;  // final strata of the first run
  std::optional<double> speedup;
  std::optional<double> smc_variance;
};

StudyReport run_study(const CaseModel& model, const StudyOptions& opts);

/// Paired study: one SMC run for the variance and `repeats` ADSS runs.
StudyReport run_speedup_study(const CaseModel& model, const StudyOptions& opts);

/// Sample weights p_S / N_S of a stratified log.
std::vector<double> sample_weights(const Stratification& s, std::size_t n_log);

}  // namespace faultflow
