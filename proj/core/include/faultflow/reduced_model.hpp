#pragma once

#include <array>
#include <vector>

#include "faultflow/twophase.hpp"

namespace faultflow {

/// Five-variable reduced model of the coarse flow functions.
///   Y1 = log K
///   Y2 = log Pc(sd0) - (a_pc + b_pc log sd0)
///   Y3 = log S(sd0),  Y4 = log Krw(sd0)
///   Y5 = standardised initial slope of Krnw
/// S and Krw at other s_d are obtained from Y3/Y4 through per-s_d empirical
/// distributions and rank permutations.
struct ReducedModelFit {
  static constexpr int schema_version = 1;

  std::vector<double> grid;  // s_d values; grid[0] is sd0
  double sd0 = 0.0;
  double a_pc = 0.0, b_pc = 0.0;
  double a_knw = 0.0, b_knw = 1.0;
  double sd_cut = 1.0;
  /// Sorted log S / log Krw per grid point (index [g][rank]).
  std::vector<std::vector<double>> sorted_log_sat;
  std::vector<std::vector<double>> sorted_log_krw;
  /// perm[g][r]: rank at s_d = grid[g] of the member whose rank at sd0 is r.
  /// perm_inv[g] is its inverse.
  std::vector<std::vector<std::size_t>> perm_sat, perm_sat_inv;
  std::vector<std::vector<std::size_t>> perm_krw, perm_krw_inv;
  /// Y values of the reference ensemble, one row per member.
  std::vector<std::array<double, 5>> y_ref;
  /// Columns of y_ref with zero variance (degenerate ensemble).
  std::array<bool, 5> degenerate{};

  std::size_t n_ref() const { return y_ref.size(); }
  bool empty() const { return y_ref.empty(); }
};

struct RankMaps {
  std::vector<std::vector<std::size_t>> perm, perm_inv;
};

/// Rank permutations of `values[m][g]` between grid index 0 and every other
/// index; ties are broken by member index.
RankMaps fit_rank_maps(const std::vector<std::vector<double>>& values);

/// Fits every coefficient and table of the reduced model.
ReducedModelFit fit_reduced_model(const std::vector<FlowFunctionSample>& ensemble, const SdGrid& grid);

/// Y matrix (n_ref x 5) of an ensemble under `fit`.
std::vector<std::array<double, 5>> extract_y(const std::vector<FlowFunctionSample>& ensemble,
                                             const ReducedModelFit& fit);

/// Flow functions for one Y vector on the fit's grid.
FlowFunctionSample evaluate_flow_functions(const std::array<double, 5>& y, const ReducedModelFit& fit);

/// Interpolated position of y among sorted values, in [0, n-1].
double empirical_position(const std::vector<double>& sorted, double y);

}  // namespace faultflow
