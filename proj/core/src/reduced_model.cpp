#include "faultflow/reduced_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace faultflow {

namespace {

std::vector<std::size_t> stable_order(const std::vector<std::vector<double>>& v, std::size_t g) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a][g] < v[b][g]; });
  return idx;
}

double safe_log(double x) { return std::log(std::max(x, 1e-300)); }

}  // namespace

RankMaps fit_rank_maps(const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw std::invalid_argument("fit_rank_maps: empty data");
  const std::size_t n = values.size();
  const std::size_t ng = values.front().size();
  const auto ref_order = stable_order(values, 0);
  RankMaps maps;
  maps.perm.assign(ng, std::vector<std::size_t>(n));
  maps.perm_inv.assign(ng, std::vector<std::size_t>(n));
  std::vector<std::size_t> target_rank(n);
  for (std::size_t g = 0; g < ng; ++g) {
    const auto order = stable_order(values, g);
    for (std::size_t r = 0; r < n; ++r) target_rank[order[r]] = r;
    for (std::size_t r = 0; r < n; ++r) {
      maps.perm[g][r] = target_rank[ref_order[r]];
      maps.perm_inv[g][maps.perm[g][r]] = r;
    }
  }
  return maps;
}

double empirical_position(const std::vector<double>& sorted, double y) {
  if (sorted.empty()) throw std::invalid_argument("empirical_position: empty table");
  if (y <= sorted.front()) return 0.0;
  if (y >= sorted.back()) return static_cast<double>(sorted.size() - 1);
  // Ties resolve to the first occurrence so reference values map to their own rank.
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), y);
  const auto k = static_cast<std::size_t>(it - sorted.begin());
  if (*it == y) return static_cast<double>(k);
  const double lo = sorted[k - 1], hi = sorted[k];
  return static_cast<double>(k - 1) + (y - lo) / (hi - lo);
}

ReducedModelFit fit_reduced_model(const std::vector<FlowFunctionSample>& ens, const SdGrid& grid) {
  if (ens.empty()) throw std::invalid_argument("fit_reduced_model: empty ensemble");
  grid.validate();
  const std::size_t n = ens.size();
  const std::size_t ng = grid.size();
  for (const auto& f : ens)
    if (f.pc.size() != ng || f.sat.size() != ng || f.krw.size() != ng || f.krnw.size() != ng)
      throw std::invalid_argument("fit_reduced_model: ensemble tabulation does not match grid");

  ReducedModelFit fit;
  fit.grid = grid.values;
  fit.sd0 = grid.values.front();

  // Ordinary least squares of the ensemble-mean log Pc against log s_d.
  std::vector<double> x(ng), y(ng, 0.0);
  for (std::size_t g = 0; g < ng; ++g) {
    x[g] = std::log(grid.values[g]);
    for (const auto& f : ens) y[g] += std::log(f.pc[g]);
    y[g] /= static_cast<double>(n);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(ng);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(ng);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t g = 0; g < ng; ++g) {
    sxy += (x[g] - mx) * (y[g] - my);
    sxx += (x[g] - mx) * (x[g] - mx);
  }
  fit.b_pc = sxy / sxx;
  fit.a_pc = my - fit.b_pc * mx;

  // Initial Krnw slope per member.
  std::vector<double> slope(n);
  for (std::size_t m = 0; m < n; ++m) slope[m] = (ens[m].krnw[0] - 1.0) / fit.sd0;
  fit.a_knw = std::accumulate(slope.begin(), slope.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double s : slope) ss += (s - fit.a_knw) * (s - fit.a_knw);
  fit.b_knw = std::sqrt(ss / static_cast<double>(n));
  if (!(fit.b_knw > 0.0)) {
    fit.b_knw = 1.0;
    fit.degenerate[4] = true;
  }
  fit.sd_cut = fit.a_knw < 0.0 ? std::clamp(-1.0 / fit.a_knw, fit.sd0, 1.0) : 1.0;

  std::vector<std::vector<double>> ls(n, std::vector<double>(ng)), lk(n, std::vector<double>(ng));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t g = 0; g < ng; ++g) {
      ls[m][g] = safe_log(ens[m].sat[g]);
      lk[m][g] = safe_log(ens[m].krw[g]);
    }
  auto sat_maps = fit_rank_maps(ls);
  auto krw_maps = fit_rank_maps(lk);
  fit.perm_sat = std::move(sat_maps.perm);
  fit.perm_sat_inv = std::move(sat_maps.perm_inv);
  fit.perm_krw = std::move(krw_maps.perm);
  fit.perm_krw_inv = std::move(krw_maps.perm_inv);

  fit.sorted_log_sat.assign(ng, std::vector<double>(n));
  fit.sorted_log_krw.assign(ng, std::vector<double>(n));
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t m = 0; m < n; ++m) {
      fit.sorted_log_sat[g][m] = ls[m][g];
      fit.sorted_log_krw[g][m] = lk[m][g];
    }
    std::sort(fit.sorted_log_sat[g].begin(), fit.sorted_log_sat[g].end());
    std::sort(fit.sorted_log_krw[g].begin(), fit.sorted_log_krw[g].end());
  }

  fit.y_ref = extract_y(ens, fit);
  for (int c = 0; c < 5; ++c) {
    const double first = fit.y_ref.front()[c];
    bool constant = true;
    for (const auto& row : fit.y_ref) constant = constant && row[c] == first;
    fit.degenerate[c] = fit.degenerate[c] || constant;
  }
  return fit;
}

std::vector<std::array<double, 5>> extract_y(const std::vector<FlowFunctionSample>& ens,
                                             const ReducedModelFit& fit) {
  if (ens.empty()) throw std::invalid_argument("extract_y: empty ensemble");
  const double lsd0 = std::log(fit.sd0);
  std::vector<std::array<double, 5>> y(ens.size());
  for (std::size_t m = 0; m < ens.size(); ++m) {
    const auto& f = ens[m];
    if (f.pc.size() != fit.grid.size()) throw std::invalid_argument("extract_y: grid mismatch");
    y[m][0] = std::log(f.k_abs);
    y[m][1] = std::log(f.pc[0]) - (fit.a_pc + fit.b_pc * lsd0);
    y[m][2] = safe_log(f.sat[0]);
    y[m][3] = safe_log(f.krw[0]);
    y[m][4] = ((f.krnw[0] - 1.0) / fit.sd0 - fit.a_knw) / fit.b_knw;
  }
  return y;
}

namespace {

// Value at grid point g of the reference path selected by y through the
// empirical distribution at sd0 and the rank permutation for g.
double mapped_value(const std::vector<std::vector<double>>& sorted,
                    const std::vector<std::vector<std::size_t>>& perm, std::size_t g, double y) {
  const auto& ref = sorted[0];
  const double pos = empirical_position(ref, y);
  if (g == 0) {
    // Continuous at the reference point: linear interpolation between order statistics.
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= ref.size()) return ref.back();
    return ref[k] + (pos - static_cast<double>(k)) * (ref[k + 1] - ref[k]);
  }
  const auto n = static_cast<long>(ref.size());
  const long k = std::clamp(std::lround(pos), 0L, n - 1);
  return sorted[g][perm[g][static_cast<std::size_t>(k)]];
}

}  // namespace

FlowFunctionSample evaluate_flow_functions(const std::array<double, 5>& y, const ReducedModelFit& fit) {
  if (fit.empty()) throw std::invalid_argument("evaluate_flow_functions: fit is empty");
  const std::size_t ng = fit.grid.size();
  FlowFunctionSample f;
  f.k_abs = std::exp(y[0]);
  f.pc.resize(ng);
  f.sat.resize(ng);
  f.krw.resize(ng);
  f.krnw.resize(ng);
  const double slope = fit.a_knw + fit.b_knw * y[4];
  for (std::size_t g = 0; g < ng; ++g) {
    const double sd = fit.grid[g];
    f.pc[g] = std::exp(fit.a_pc + fit.b_pc * std::log(sd) + y[1]);
    f.sat[g] = std::clamp(std::exp(mapped_value(fit.sorted_log_sat, fit.perm_sat, g, y[2])), 0.0, 1.0);
    f.krw[g] = std::clamp(std::exp(mapped_value(fit.sorted_log_krw, fit.perm_krw, g, y[3])), 0.0, 1.0);
    f.krnw[g] = (g == 0 || sd <= fit.sd_cut) ? std::clamp(1.0 + slope * sd, 0.0, 1.0) : 0.0;
  }
  // Keep the tabulated curves monotone even when g = 0 is interpolated.
  for (std::size_t g = 1; g < ng; ++g) {
    f.sat[g] = std::max(f.sat[g], f.sat[g - 1]);
    f.krw[g] = std::max(f.krw[g], f.krw[g - 1]);
  }
  return f;
}

}  // namespace faultflow
