#pragma once

#include <span>
#include <string>
#include <vector>

namespace faultflow {

enum class CopulaFamily { independence, gaussian, student_t, clayton, gumbel, frank, checkerboard };

std::string to_string(CopulaFamily f);
CopulaFamily copula_family_from_string(const std::string& s);

/// Bivariate copula C(u1, u2).  Rotations (degrees, counter-clockwise) apply
/// to Clayton and Gumbel; the other families carry the sign in their
/// parameter.  Arguments are clamped to [1e-12, 1 - 1e-12].
///
///   h1(u1, u2) = dC/du1 = P(U2 <= u2 | U1 = u1)
///   h2(u1, u2) = dC/du2 = P(U1 <= u1 | U2 = u2)
class BivariateCopula {
 public:
  static constexpr int checkerboard_bins = 16;

  BivariateCopula() = default;
  static BivariateCopula independence();
  static BivariateCopula gaussian(double rho);
  static BivariateCopula student_t(double rho, double nu);
  static BivariateCopula clayton(double theta, int rotation = 0);
  static BivariateCopula gumbel(double theta, int rotation = 0);
  static BivariateCopula frank(double theta);
  /// Piecewise-constant density on a bins x bins grid, row-major with the
  /// row indexed by the u1 bin.  Rows and columns must each average to 1.
  static BivariateCopula checkerboard(std::vector<double> density);

  CopulaFamily family() const { return family_; }
  int rotation() const { return rotation_; }
  double par() const { return par_; }
  double par2() const { return par2_; }
  const std::vector<double>& cells() const { return cells_; }

  double pdf(double u1, double u2) const;
  double log_pdf(double u1, double u2) const;
  double h1(double u1, double u2) const;
  double h2(double u1, double u2) const;
  /// Inverse of h1 in u2: returns u2 with h1(u1, u2) = p.
  double h1_inverse(double u1, double p) const;
  /// Inverse of h2 in u1: returns u1 with h2(u1, u2) = p.
  double h2_inverse(double p, double u2) const;

  /// Kendall's tau implied by the model.
  double tau() const;
  /// Number of free parameters (for AIC).
  int n_params() const;
  double loglik(std::span<const double> u1, std::span<const double> u2) const;

 private:
  BivariateCopula(CopulaFamily f, double par, double par2, int rotation)
      : family_(f), rotation_(rotation), par_(par), par2_(par2) {}

  // Unrotated family: hb(a, b) = P(U1 <= a | U2 = b).
  double base_log_pdf(double a, double b) const;
  double base_h(double a, double b) const;
  double base_h_inverse(double p, double b) const;

  double cb_h1(double u1, double u2) const;
  double cb_h2(double u1, double u2) const;
  double cb_h1_inverse(double u1, double p) const;
  double cb_h2_inverse(double p, double u2) const;

  CopulaFamily family_ = CopulaFamily::independence;
  int rotation_ = 0;
  double par_ = 0.0;
  double par2_ = 0.0;
  std::vector<double> cells_;
};

/// Sample-size based independence test on Kendall's tau (two-sided, 5 %).
bool kendall_independence(double tau, std::size_t n);

struct BivariateFitOptions {
  bool allow_gaussian = true;
  bool allow_student_t = true;
  bool allow_clayton = true;
  bool allow_gumbel = true;
  bool allow_frank = true;
  bool allow_checkerboard = true;
  bool independence_test = true;
  /// Student-t degrees of freedom; 0 searches the built-in grid.
  double student_t_nu = 0.0;

  static BivariateFitOptions gaussian_only() {
    BivariateFitOptions o;
    o.allow_student_t = o.allow_clayton = o.allow_gumbel = o.allow_frank = o.allow_checkerboard = false;
    o.independence_test = false;
    return o;
  }
};

struct BivariateFitResult {
  BivariateCopula copula;
  double loglik = 0.0;
  double aic = 0.0;
};

/// Selects family and rotation by AIC after tau-initialised maximum
/// likelihood; independence when the Kendall test does not reject.
BivariateFitResult fit_bivariate(std::span<const double> u1, std::span<const double> u2,
                                 const BivariateFitOptions& opts = {});

/// Frank tau as a function of theta (Debye function of order one).
double frank_tau(double theta);

}  // namespace faultflow
