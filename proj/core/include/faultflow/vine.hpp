#pragma once

#include <span>
#include <vector>

#include "faultflow/copula.hpp"
#include "faultflow/stats.hpp"

namespace faultflow {

/// One pair copula of a regular vine: couples F(v1 | cond) and F(v2 | cond).
/// In tree 0 the inputs are the uniforms themselves; otherwise input for v1
/// comes from edge `p1` of the previous tree and input for v2 from `p2`.
struct VineEdge {
  int v1 = 0, v2 = 1;
  std::vector<int> cond;
  int p1 = -1, p2 = -1;
  BivariateCopula copula;
};

struct VineFitOptions {
  BivariateFitOptions pair;
  /// Fixed D-vine (path 0-1-...-d-1 in the first tree) instead of
  /// maximum-spanning-tree selection.
  bool dvine = false;
  /// Passes of whole-vine AIC family refinement after the greedy fit
  /// (0 keeps the plain sequential selection).
  int refine_sweeps = 1;
};

class VineModel {
 public:
  static constexpr int schema_version = 1;

  VineModel() = default;
  /// Validates the structure and derives the sampling order.
  VineModel(int dim, std::vector<std::vector<VineEdge>> trees,
            std::vector<stats::EmpiricalDistribution> marginals = {});

  /// Every pair independent.
  static VineModel independence(int dim);

  int dim() const { return dim_; }
  const std::vector<std::vector<VineEdge>>& trees() const { return trees_; }
  const std::vector<stats::EmpiricalDistribution>& marginals() const { return marginals_; }
  /// Variables in the order the (inverse) Rosenblatt transform treats them.
  const std::vector<int>& order() const { return order_; }

  double log_density(std::span<const double> u) const;
  double density(std::span<const double> u) const;
  /// Dependent uniforms -> independent uniforms.
  std::vector<double> rosenblatt(std::span<const double> u_hat) const;
  /// Independent uniforms -> dependent uniforms.
  std::vector<double> inverse_rosenblatt(std::span<const double> u) const;
  /// Independent uniforms -> values on the original scale via the marginals.
  std::vector<double> sample_y(std::span<const double> u) const;

  double loglik(const std::vector<std::vector<double>>& u_rows) const;
  std::size_t edge_count() const;

 private:
  struct Cache;
  double input(Cache& c, int tree, int edge, int var) const;
  double output(Cache& c, int tree, int edge, int var) const;

  int dim_ = 0;
  std::vector<std::vector<VineEdge>> trees_;
  std::vector<stats::EmpiricalDistribution> marginals_;
  std::vector<int> order_;
  // chain_[k][t]: edge in tree t carrying order_[k] on its way to the top.
  std::vector<std::vector<int>> chain_;
};

/// Dissmann-style sequential fit on pseudo-observations (rows of length d).
VineModel fit_vine(const std::vector<std::vector<double>>& u_rows, const VineFitOptions& opts = {});

/// Convenience: pseudo-observations of the data columns, fit, and attach
/// empirical marginals.
VineModel fit_vine_to_data(const std::vector<std::vector<double>>& y_rows, const VineFitOptions& opts = {});

/// Kendall tau matrix of the columns of a row-major sample.
std::vector<std::vector<double>> kendall_matrix(const std::vector<std::vector<double>>& rows);

}  // namespace faultflow
