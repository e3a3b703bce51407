#include "faultflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace faultflow::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("normal_quantile: probability outside [0,1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

namespace {

// Number of strict inversions of v, sorting v in place.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi), v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

template <class Eq>
std::uint64_t tied_pairs(std::size_t n, Eq eq) {
  std::uint64_t ties = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && eq(i - 1, i)) {
      ++run;
    } else {
      ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[idx[i]];
    ys[i] = y[idx[i]];
  }

  const std::uint64_t x_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b]; });
  const std::uint64_t joint_ties = tied_pairs(
      n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b] && ys[a] == ys[b]; });

  std::vector<double> buf(n);
  const std::uint64_t discordant = count_inversions(ys, buf, 0, n);  // ys now sorted
  const std::uint64_t y_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double denom_x = total - static_cast<double>(x_ties);
  const double denom_y = total - static_cast<double>(y_ties);
  if (denom_x <= 0.0 || denom_y <= 0.0) return 0.0;
  const double con_minus_dis = total - static_cast<double>(x_ties) - static_cast<double>(y_ties) +
                               static_cast<double>(joint_ties) - 2.0 * static_cast<double>(discordant);
  return con_minus_dis / std::sqrt(denom_x) / std::sqrt(denom_y);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: size mismatch");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[idx[j]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

std::vector<double> pseudo_observations(std::span<const double> x) {
  auto r = ranks(x);
  const double scale = 1.0 / static_cast<double>(x.size() + 1);
  for (double& v : r) v *= scale;
  return r;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile_sorted: empty sample");
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(k);
  return sorted[k] + frac * (sorted[k + 1] - sorted[k]);
}

double weighted_percentile(std::span<const double> values, std::span<const double> weights,
                           double p) {
  if (values.size() != weights.size() || values.empty())
    throw std::invalid_argument("weighted_percentile: bad input");
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  // Mid-point cumulative weights, then linear interpolation in p.
  std::vector<double> mid(idx.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double w = weights[idx[i]] / total;
    mid[i] = acc + 0.5 * w;
    acc += w;
  }
  if (p <= mid.front()) return values[idx.front()];
  if (p >= mid.back()) return values[idx.back()];
  const auto it = std::upper_bound(mid.begin(), mid.end(), p);
  const auto k = static_cast<std::size_t>(it - mid.begin());
  const double t = (p - mid[k - 1]) / (mid[k] - mid[k - 1]);
  return values[idx[k - 1]] + t * (values[idx[k]] - values[idx[k - 1]]);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalDistribution: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double y) const {
  const double n1 = static_cast<double>(sorted_.size() + 1);
  if (y <= sorted_.front()) return 1.0 / n1;
  if (y >= sorted_.back()) return static_cast<double>(sorted_.size()) / n1;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  const auto k = static_cast<std::size_t>(it - sorted_.begin()) - 1;
  const double lo = sorted_[k], hi = sorted_[k + 1];
  const double frac = hi > lo ? (y - lo) / (hi - lo) : 0.0;
  return (static_cast<double>(k) + 1.0 + frac) / n1;
}

double EmpiricalDistribution::quantile(double p) const {
  const double pos = p * static_cast<double>(sorted_.size() + 1) - 1.0;
  if (pos <= 0.0) return sorted_.front();
  if (pos >= static_cast<double>(sorted_.size() - 1)) return sorted_.back();
  const auto k = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(k);
  return sorted_[k] + frac * (sorted_[k + 1] - sorted_[k]);
}

}  // namespace faultflow::stats
