#pragma once

#include <span>
#include <string>
#include <vector>

#include "faultflow/random.hpp"

namespace faultflow {

/// Mean SGR (percent) as a piecewise-linear function of depth (m), constant
/// beyond the table ends.
class SgrProfile {
 public:
  SgrProfile() = default;
  SgrProfile(std::vector<double> depth_m, std::vector<double> sgr_pct);

  /// Built-in synthetic profile: ~25 % at 700 m rising to 60 % at 1200 m and
  /// 65-70 % over 1500-1600 m.
  static SgrProfile default_profile();
  /// Reads a CSV file with header `depth_m,sgr_mean_pct`.
  static SgrProfile from_csv(const std::string& path);

  double mean_at(double depth_m) const;

  const std::vector<double>& depths() const { return depth_; }
  const std::vector<double>& values() const { return sgr_; }

 private:
  std::vector<double> depth_;
  std::vector<double> sgr_;
};

struct FaciesModelConfig {
  int n_facies = 20;
  double depth_top = 700.0;      // m
  double depth_bottom = 1200.0;  // m
  SgrProfile sgr_profile = SgrProfile::default_profile();
  double sgr_std = 14.0;         // percent points
  double k_clay = 1e-4;          // mD
  double k_sand = 1000.0;        // mD
  double p_entry_sand = 2.5;     // kPa
  double bc_exponent = 0.67;

  double height() const { return depth_bottom - depth_top; }
  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct FaciesRealization {
  std::vector<double> heights;  // m, top to bottom
  std::vector<double> sgr;      // percent
  std::vector<double> perms;    // mD
};

/// Number of uniforms consumed per realization: n-1 boundaries, n SGR values.
inline std::size_t draws_per_realization(const FaciesModelConfig& cfg) {
  return static_cast<std::size_t>(2 * cfg.n_facies - 1);
}

/// Realization from explicit uniforms: the first n-1 place the interior
/// boundaries, the remaining n drive the Gaussian SGR draws (inverse CDF).
FaciesRealization realization_from_uniforms(const FaciesModelConfig& cfg, std::span<const double> u);
FaciesRealization sample_realization(const FaciesModelConfig& cfg, Rng& rng);

/// log-linear interpolation between sand (SGR 0) and clay (SGR 100).
double sgr_to_perm(double sgr, double k_clay, double k_sand);

/// Weighted harmonic mean of facies permeabilities (flow across the layering).
double upscale_permeability(const FaciesRealization& real);
/// Weighted arithmetic mean (flow along the layering).
double upscale_permeability_arithmetic(const FaciesRealization& real);

struct LognormalFit {
  double mu = 0.0;     // mean of log
  double sigma = 0.0;  // std of log

  double quantile(double u) const;
  double cdf(double x) const;
  double median() const;
  double mean() const;
};

/// Moment fit in log space (population std).
LognormalFit fit_lognormal(std::span<const double> samples);

/// Lognormal with prescribed arithmetic mean and standard deviation.
LognormalFit lognormal_from_moments(double mean, double stddev);

}  // namespace faultflow
