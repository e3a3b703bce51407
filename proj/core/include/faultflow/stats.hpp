#pragma once

#include <span>
#include <vector>

namespace faultflow::stats {

double normal_cdf(double x);
double normal_quantile(double p);

double mean(std::span<const double> x);
/// Unbiased (n-1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> x);

/// Kendall's tau-b, O(n log n) (Knight's merge-sort algorithm).
double kendall_tau(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based, ties averaged).
std::vector<double> ranks(std::span<const double> x);
/// Rank / (n + 1): pseudo-observations on the open unit interval.
std::vector<double> pseudo_observations(std::span<const double> x);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Percentile of a sorted sample by linear interpolation of order statistics
/// at position p * (n - 1).
double percentile_sorted(std::span<const double> sorted, double p);

/// Weighted percentile: smallest value whose cumulative normalised weight
/// reaches p, interpolated between neighbouring mid-points.
double weighted_percentile(std::span<const double> values, std::span<const double> weights,
                           double p);

/// Continuous empirical distribution built from a sample.  The CDF uses the
/// plotting position (k + 1) / (n + 1) at the k-th order statistic and is
/// linear in between; the quantile is its inverse, constant beyond the
/// extreme order statistics.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> sample);

  double cdf(double y) const;
  double quantile(double p) const;
  double median() const { return quantile(0.5); }

  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

}  // namespace faultflow::stats
