#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace faultflow {

/// Integrand on the unit hypercube.  Must be safe to call concurrently.
using Integrand = std::function<double(std::span<const double>)>;

/// Axis-aligned box [low, high) with the samples that fell into it.
struct Stratum {
  std::vector<double> low, high;
  double p = 1.0;  // volume
  std::size_t n_samples = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations (Welford)
  std::vector<std::size_t> members;  // indices into Stratification::samples

  void add(double q);
  /// Sample variance (n - 1); only meaningful when n_samples >= 2.
  double variance() const;
  double sigma() const;
  bool has_sigma() const { return n_samples >= 2; }
  bool contains(std::span<const double> u) const;
};

struct Sample {
  std::vector<double> point;
  double q = 0.0;
};

struct Stratification {
  std::vector<Stratum> strata;
  double alpha = 0.5;
  std::size_t batch = 50;
  std::vector<Sample> samples;

  /// Single stratum covering [0,1]^dims.
  static Stratification whole(std::size_t dims, double alpha = 0.5, std::size_t batch = 50);
  /// Regular grid with `per_dim` equal slices along every axis.
  static Stratification grid(std::size_t dims, std::size_t per_dim, double alpha = 0.5,
                             std::size_t batch = 50);
  std::size_t dims() const { return strata.empty() ? 0 : strata.front().low.size(); }
  std::size_t total_samples() const { return samples.size(); }
  /// Throws std::logic_error if the strata do not partition the cube.
  void validate() const;
  /// Adds a sample to stratum `s` (which must contain it).
  void add_sample(std::size_t s, std::vector<double> point, double q);
};

/// Real-valued hybrid targets (1 - alpha) N p_S + alpha N p_S sigma_S / sum(p sigma),
/// before rounding.  Strata without a variance estimate take their
/// proportional share of the optimal part.
std::vector<double> hybrid_targets(const Stratification& s, std::size_t n_new);

/// Largest-remainder rounding of non-negative targets to integers summing to
/// n.  Equal remainders go to the larger target, then the lower index.
std::vector<std::size_t> round_largest_remainder(const std::vector<double>& targets, std::size_t n);

/// Counts per stratum for the next n_new samples.  Strata with fewer than two
/// samples are topped up to two first; if that alone exceeds n_new, the
/// samples are spread over those strata in proportion to their volume.
std::vector<std::size_t> allocate_hybrid(const Stratification& s, std::size_t n_new);

/// sum_S p_S mean_S.  Throws if a stratum has no samples.
double estimate(const Stratification& s);

/// (1/N) sum_S p_S sigma_S^2 / (1 + alpha (sigmabar_S - 1)),
/// sigmabar_S = sigma_S / sum_T p_T sigma_T.
double estimator_variance(const Stratification& s, std::size_t n_total);

/// Best midpoint bisection by decrease of sum p sigma; unchanged if no
/// candidate improves.  `split_dim` (optional) receives the split axis or -1.
Stratification adapt(const Stratification& s, int* split_dim = nullptr);

struct Evaluation {
  std::size_t iteration = 0;
  std::size_t stratum = 0;
  std::vector<double> point;
  double q = 0.0;
};

struct EstimatorResult {
  double estimate = 0.0;
  double variance = 0.0;  // nominal estimator variance
  std::size_t n_evaluations = 0;
  Stratification stratification;
  std::vector<Evaluation> log;
  std::vector<int> splits;  // axis of each executed split
};

struct AdaptiveOptions {
  double alpha = 0.5;
  std::size_t batch = 50;
  bool adapt = true;
};

/// Draws counts[s] uniform points in each stratum, evaluates f in parallel
/// and folds the results into `s` in stratum order.  Points come from one
/// generator seeded by `seed`, so results are independent of the worker count.
std::vector<Evaluation> sample_strata(Stratification& s, const std::vector<std::size_t>& counts,
                                      const Integrand& f, std::uint64_t seed, std::size_t iteration = 0);

EstimatorResult run_adaptive(const Integrand& f, std::size_t dims, std::size_t budget,
                             const AdaptiveOptions& opts, std::uint64_t seed);
/// Same loop starting from a given stratification.
EstimatorResult run_adaptive(const Integrand& f, Stratification initial, std::size_t budget,
                             const AdaptiveOptions& opts, std::uint64_t seed);

/// Plain Monte Carlo; variance is sigma^2 / N.
EstimatorResult run_smc(const Integrand& f, std::size_t dims, std::size_t budget, std::uint64_t seed);

struct SpeedupResult {
  double speedup = 0.0;
  double var_smc = 0.0;        // sigma^2 / N from one SMC run
  double var_adaptive = 0.0;   // empirical variance over repeats
  double mean_adaptive = 0.0;  // mean of the repeated estimates
  double nominal_variance = 0.0;  // mean of the per-run formula variances
  EstimatorResult smc;
  std::vector<double> estimates;
};

/// Var(SMC) / Var(adaptive) with the adaptive variance taken empirically over
/// `repeats` independent runs (repeats >= 20).
SpeedupResult measure_speedup(const Integrand& f, std::size_t dims, std::size_t budget, std::size_t repeats,
                              std::uint64_t seed, const AdaptiveOptions& opts = {});

}  // namespace faultflow
