#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "faultflow/copula.hpp"
#include "faultflow/stats.hpp"

namespace faultflow {

namespace {

constexpr double kEps = 1e-12;
constexpr double kMaxTau = 0.995;
constexpr double kMaxFrank = 100.0;
constexpr int kBins = BivariateCopula::checkerboard_bins;

double clamp_u(double u) {
  if (std::isnan(u)) throw std::domain_error("copula argument is NaN");
  return std::clamp(u, kEps, 1.0 - kEps);
}

// log(exp(a) + exp(b))
double log_add(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log(1 + exp(q))
double softplus(double q) { return q > 0.0 ? q + std::log1p(std::exp(-q)) : std::log1p(std::exp(q)); }

// log(a^-theta + b^-theta - 1) for the Clayton generator, a, b in (0,1).
double clayton_log_s(double la, double lb, double theta) {
  const double A = -theta * la, B = -theta * lb;
  const double M = std::max(A, B);
  if (M < 30.0) return std::log1p(std::expm1(A) + std::expm1(B));
  return M + std::log(std::exp(A - M) + std::exp(B - M) - std::exp(-M));
}

// Root of an increasing function f on [lo, hi]; clamps to the ends when the
// target lies outside the range of f.
template <class F>
double invert_increasing(F f, double lo, double hi) {
  const double flo = f(lo), fhi = f(hi);
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

const boost::math::students_t_distribution<double>& t_dist(double nu) {
  // One cached distribution object per thread is enough: nu changes rarely.
  thread_local boost::math::students_t_distribution<double> d(4.0);
  if (d.degrees_of_freedom() != nu) d = boost::math::students_t_distribution<double>(nu);
  return d;
}

double t_cdf(double x, double nu) { return boost::math::cdf(t_dist(nu), x); }
double t_quantile(double p, double nu) { return boost::math::quantile(t_dist(nu), p); }

double t_log_const(double nu) {
  return std::lgamma(0.5 * (nu + 2.0)) + std::lgamma(0.5 * nu) - 2.0 * std::lgamma(0.5 * (nu + 1.0));
}

double t_log_pdf_xy(double x, double y, double rho, double nu, double log_const) {
  const double r2 = 1.0 - rho * rho;
  const double q = (x * x + y * y - 2.0 * rho * x * y) / (nu * r2);
  return log_const - 0.5 * std::log(r2) - 0.5 * (nu + 2.0) * std::log1p(q) +
         0.5 * (nu + 1.0) * (std::log1p(x * x / nu) + std::log1p(y * y / nu));
}

double gauss_log_pdf_xy(double x, double y, double rho) {
  const double r2 = 1.0 - rho * rho;
  return -0.5 * std::log(r2) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2);
}

}  // namespace

std::string to_string(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::independence: return "independence";
    case CopulaFamily::gaussian: return "gaussian";
    case CopulaFamily::student_t: return "student_t";
    case CopulaFamily::clayton: return "clayton";
    case CopulaFamily::gumbel: return "gumbel";
    case CopulaFamily::frank: return "frank";
    case CopulaFamily::checkerboard: return "checkerboard";
  }
  return "unknown";
}

CopulaFamily copula_family_from_string(const std::string& s) {
  for (auto f : {CopulaFamily::independence, CopulaFamily::gaussian, CopulaFamily::student_t,
                 CopulaFamily::clayton, CopulaFamily::gumbel, CopulaFamily::frank, CopulaFamily::checkerboard})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown copula family: " + s);
}

BivariateCopula BivariateCopula::independence() { return {CopulaFamily::independence, 0.0, 0.0, 0}; }

BivariateCopula BivariateCopula::gaussian(double rho) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("gaussian copula: |rho| must be < 1");
  return {CopulaFamily::gaussian, rho, 0.0, 0};
}

BivariateCopula BivariateCopula::student_t(double rho, double nu) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("student_t copula: |rho| must be < 1");
  if (!(nu > 2.0)) throw std::invalid_argument("student_t copula: nu must exceed 2");
  return {CopulaFamily::student_t, rho, nu, 0};
}

namespace {
void check_rotation(int r) {
  if (r != 0 && r != 90 && r != 180 && r != 270) throw std::invalid_argument("copula rotation must be 0, 90, 180 or 270");
}
}  // namespace

BivariateCopula BivariateCopula::clayton(double theta, int rotation) {
  check_rotation(rotation);
  if (!(theta > 0.0)) throw std::invalid_argument("clayton copula: theta must be positive");
  return {CopulaFamily::clayton, theta, 0.0, rotation};
}

BivariateCopula BivariateCopula::gumbel(double theta, int rotation) {
  check_rotation(rotation);
  if (!(theta >= 1.0)) throw std::invalid_argument("gumbel copula: theta must be >= 1");
  return {CopulaFamily::gumbel, theta, 0.0, rotation};
}

BivariateCopula BivariateCopula::frank(double theta) {
  if (!(std::abs(theta) <= kMaxFrank)) throw std::invalid_argument("frank copula: |theta| must be <= 100");
  return {CopulaFamily::frank, theta, 0.0, 0};
}

BivariateCopula BivariateCopula::checkerboard(std::vector<double> density) {
  if (density.size() != static_cast<std::size_t>(kBins * kBins))
    throw std::invalid_argument("checkerboard copula: expected 16x16 cells");
  for (double d : density)
    if (!(d > 0.0)) throw std::invalid_argument("checkerboard copula: cells must be positive");
  BivariateCopula c{CopulaFamily::checkerboard, 0.0, 0.0, 0};
  c.cells_ = std::move(density);
  return c;
}

// ---------------------------------------------------------------------------
// Unrotated families

double BivariateCopula::base_log_pdf(double a, double b) const {
  switch (family_) {
    case CopulaFamily::independence: return 0.0;
    case CopulaFamily::gaussian:
      return gauss_log_pdf_xy(stats::normal_quantile(a), stats::normal_quantile(b), par_);
    case CopulaFamily::student_t:
      return t_log_pdf_xy(t_quantile(a, par2_), t_quantile(b, par2_), par_, par2_, t_log_const(par2_));
    case CopulaFamily::clayton: {
      const double th = par_, la = std::log(a), lb = std::log(b);
      return std::log1p(th) - (th + 1.0) * (la + lb) - (1.0 / th + 2.0) * clayton_log_s(la, lb, th);
    }
    case CopulaFamily::gumbel: {
      const double th = par_, x = -std::log(a), y = -std::log(b);
      const double lx = std::log(x), ly = std::log(y);
      const double S = log_add(th * lx, th * ly);
      const double w = std::exp(S / th);
      return -w + x + y + (th - 1.0) * (lx + ly) + (1.0 / th - 2.0) * S + std::log(w + th - 1.0);
    }
    case CopulaFamily::frank: {
      const double th = par_;
      if (std::abs(th) < 1e-10) return 0.0;
      const double ea = std::expm1(-th * a), eb = std::expm1(-th * b), e1 = std::expm1(-th);
      return std::log(-th * e1) - th * (a + b) - 2.0 * std::log(std::abs(e1 + ea * eb));
    }
    case CopulaFamily::checkerboard: break;
  }
  throw std::logic_error("base_log_pdf: unsupported family");
}

double BivariateCopula::base_h(double a, double b) const {
  switch (family_) {
    case CopulaFamily::independence: return a;
    case CopulaFamily::gaussian: {
      const double x = stats::normal_quantile(a), y = stats::normal_quantile(b);
      return stats::normal_cdf((x - par_ * y) / std::sqrt(1.0 - par_ * par_));
    }
    case CopulaFamily::student_t: {
      const double nu = par2_;
      const double x = t_quantile(a, nu), y = t_quantile(b, nu);
      const double scale = std::sqrt((nu + y * y) * (1.0 - par_ * par_) / (nu + 1.0));
      return t_cdf((x - par_ * y) / scale, nu + 1.0);
    }
    case CopulaFamily::clayton: {
      const double th = par_, la = std::log(a), lb = std::log(b);
      return std::exp(-(th + 1.0) * lb - (1.0 / th + 1.0) * clayton_log_s(la, lb, th));
    }
    case CopulaFamily::gumbel: {
      const double th = par_, x = -std::log(a), y = -std::log(b);
      const double lx = std::log(x), ly = std::log(y);
      const double S = log_add(th * lx, th * ly);
      const double w = std::exp(S / th);
      return std::exp(-w + (1.0 / th - 1.0) * S + (th - 1.0) * ly + y);
    }
    case CopulaFamily::frank: {
      const double th = par_;
      if (std::abs(th) < 1e-10) return a;
      const double ea = std::expm1(-th * a), eb = std::expm1(-th * b), e1 = std::expm1(-th);
      return (eb + 1.0) * ea / (e1 + ea * eb);
    }
    case CopulaFamily::checkerboard: break;
  }
  throw std::logic_error("base_h: unsupported family");
}

double BivariateCopula::base_h_inverse(double p, double b) const {
  switch (family_) {
    case CopulaFamily::independence: return p;
    case CopulaFamily::gaussian: {
      const double y = stats::normal_quantile(b);
      return stats::normal_cdf(stats::normal_quantile(p) * std::sqrt(1.0 - par_ * par_) + par_ * y);
    }
    case CopulaFamily::student_t: {
      const double nu = par2_;
      const double y = t_quantile(b, nu);
      const double scale = std::sqrt((nu + y * y) * (1.0 - par_ * par_) / (nu + 1.0));
      return t_cdf(t_quantile(p, nu + 1.0) * scale + par_ * y, nu);
    }
    case CopulaFamily::clayton: {
      const double th = par_;
      const double t = -th / (1.0 + th) * std::log(p);
      const double em = std::expm1(t);
      if (em <= 0.0) return 1.0;
      const double q = -th * std::log(b) + std::log(em);
      return std::exp(-softplus(q) / th);
    }
    case CopulaFamily::gumbel: {
      auto f = [&](double a) { return base_h(a, b) - p; };
      return invert_increasing(f, kEps, 1.0 - kEps);
    }
    case CopulaFamily::frank: {
      const double th = par_;
      if (std::abs(th) < 1e-10) return p;
      const double eb = std::expm1(-th * b), e1 = std::expm1(-th);
      const double ea = p * e1 / (p + (eb + 1.0) * (1.0 - p));
      return -std::log1p(ea) / th;
    }
    case CopulaFamily::checkerboard: break;
  }
  throw std::logic_error("base_h_inverse: unsupported family");
}

// ---------------------------------------------------------------------------
// Checkerboard

namespace {
int bin_of(double u) { return std::min(kBins - 1, static_cast<int>(u * kBins)); }
}  // namespace

double BivariateCopula::cb_h2(double u1, double u2) const {
  const int j = bin_of(u2), i1 = bin_of(u1);
  double acc = 0.0;
  for (int i = 0; i < i1; ++i) acc += cells_[i * kBins + j];
  acc /= kBins;
  return std::clamp(acc + cells_[i1 * kBins + j] * (u1 - static_cast<double>(i1) / kBins), 0.0, 1.0);
}

double BivariateCopula::cb_h1(double u1, double u2) const {
  const int i = bin_of(u1), j2 = bin_of(u2);
  double acc = 0.0;
  for (int j = 0; j < j2; ++j) acc += cells_[i * kBins + j];
  acc /= kBins;
  return std::clamp(acc + cells_[i * kBins + j2] * (u2 - static_cast<double>(j2) / kBins), 0.0, 1.0);
}

double BivariateCopula::cb_h2_inverse(double p, double u2) const {
  const int j = bin_of(u2);
  double acc = 0.0;
  for (int i = 0; i < kBins; ++i) {
    const double mass = cells_[i * kBins + j] / kBins;
    if (acc + mass >= p || i == kBins - 1)
      return std::clamp(static_cast<double>(i) / kBins + (p - acc) / cells_[i * kBins + j], 0.0, 1.0);
    acc += mass;
  }
  return 1.0;
}

double BivariateCopula::cb_h1_inverse(double u1, double p) const {
  const int i = bin_of(u1);
  double acc = 0.0;
  for (int j = 0; j < kBins; ++j) {
    const double mass = cells_[i * kBins + j] / kBins;
    if (acc + mass >= p || j == kBins - 1)
      return std::clamp(static_cast<double>(j) / kBins + (p - acc) / cells_[i * kBins + j], 0.0, 1.0);
    acc += mass;
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// Rotated public interface

double BivariateCopula::log_pdf(double u1, double u2) const {
  u1 = clamp_u(u1);
  u2 = clamp_u(u2);
  if (family_ == CopulaFamily::checkerboard) return std::log(cells_[bin_of(u1) * kBins + bin_of(u2)]);
  switch (rotation_) {
    case 90: return base_log_pdf(1.0 - u1, u2);
    case 180: return base_log_pdf(1.0 - u1, 1.0 - u2);
    case 270: return base_log_pdf(u1, 1.0 - u2);
    default: return base_log_pdf(u1, u2);
  }
}

double BivariateCopula::pdf(double u1, double u2) const { return std::exp(log_pdf(u1, u2)); }

double BivariateCopula::h1(double u1, double u2) const {
  u1 = clamp_u(u1);
  u2 = clamp_u(u2);
  if (family_ == CopulaFamily::checkerboard) return cb_h1(u1, u2);
  switch (rotation_) {
    case 90: return base_h(u2, 1.0 - u1);
    case 180: return 1.0 - base_h(1.0 - u2, 1.0 - u1);
    case 270: return 1.0 - base_h(1.0 - u2, u1);
    default: return base_h(u2, u1);
  }
}

double BivariateCopula::h2(double u1, double u2) const {
  u1 = clamp_u(u1);
  u2 = clamp_u(u2);
  if (family_ == CopulaFamily::checkerboard) return cb_h2(u1, u2);
  switch (rotation_) {
    case 90: return 1.0 - base_h(1.0 - u1, u2);
    case 180: return 1.0 - base_h(1.0 - u1, 1.0 - u2);
    case 270: return base_h(u1, 1.0 - u2);
    default: return base_h(u1, u2);
  }
}

double BivariateCopula::h1_inverse(double u1, double p) const {
  u1 = clamp_u(u1);
  p = clamp_u(p);
  if (family_ == CopulaFamily::checkerboard) return cb_h1_inverse(u1, p);
  switch (rotation_) {
    case 90: return base_h_inverse(p, 1.0 - u1);
    case 180: return 1.0 - base_h_inverse(1.0 - p, 1.0 - u1);
    case 270: return 1.0 - base_h_inverse(1.0 - p, u1);
    default: return base_h_inverse(p, u1);
  }
}

double BivariateCopula::h2_inverse(double p, double u2) const {
  u2 = clamp_u(u2);
  p = clamp_u(p);
  if (family_ == CopulaFamily::checkerboard) return cb_h2_inverse(p, u2);
  switch (rotation_) {
    case 90: return 1.0 - base_h_inverse(1.0 - p, u2);
    case 180: return 1.0 - base_h_inverse(1.0 - p, 1.0 - u2);
    case 270: return base_h_inverse(p, 1.0 - u2);
    default: return base_h_inverse(p, u2);
  }
}

double frank_tau(double theta) {
  if (theta == 0.0) return 0.0;
  const double a = std::abs(theta);
  if (a < 1e-4) return std::copysign(a / 9.0, theta);
  auto f = [](double t) { return t < 1e-12 ? 1.0 : t / std::expm1(t); };
  const double d1 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, a, 10, 1e-14) / a;
  return std::copysign(1.0 - 4.0 / a * (1.0 - d1), theta);
}

double BivariateCopula::tau() const {
  double t = 0.0;
  switch (family_) {
    case CopulaFamily::independence: return 0.0;
    case CopulaFamily::gaussian:
    case CopulaFamily::student_t: return 2.0 / std::numbers::pi * std::asin(par_);
    case CopulaFamily::clayton: t = par_ / (par_ + 2.0); break;
    case CopulaFamily::gumbel: t = 1.0 - 1.0 / par_; break;
    case CopulaFamily::frank: return frank_tau(par_);
    case CopulaFamily::checkerboard: {
      // tau = 1 - 4 * integral of h1 * h2 over the unit square (midpoint rule).
      constexpr int m = 256;
      double acc = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double a = (i + 0.5) / m, b = (j + 0.5) / m;
          acc += cb_h1(a, b) * cb_h2(a, b);
        }
      return 1.0 - 4.0 * acc / (m * m);
    }
  }
  return (rotation_ == 90 || rotation_ == 270) ? -t : t;
}

int BivariateCopula::n_params() const {
  switch (family_) {
    case CopulaFamily::independence: return 0;
    case CopulaFamily::student_t: return 2;
    case CopulaFamily::checkerboard: return (kBins - 1) * (kBins - 1);
    default: return 1;
  }
}

double BivariateCopula::loglik(std::span<const double> u1, std::span<const double> u2) const {
  if (u1.size() != u2.size()) throw std::invalid_argument("loglik: size mismatch");
  double ll = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) ll += log_pdf(u1[i], u2[i]);
  return ll;
}

// ---------------------------------------------------------------------------
// Fitting

bool kendall_independence(double tau, std::size_t n) {
  if (n < 2) return true;
  const double nd = static_cast<double>(n);
  const double z = 3.0 * tau * std::sqrt(nd * (nd - 1.0)) / std::sqrt(2.0 * (2.0 * nd + 5.0));
  return std::abs(z) <= 1.959963984540054;
}

namespace {

constexpr std::array<double, 7> kNuGrid{2.5, 3.0, 4.0, 6.0, 10.0, 20.0, 30.0};

double frank_theta_from_tau(double tau) {
  if (tau == 0.0) return 0.0;
  const double target = std::abs(tau);
  const double tmax = frank_tau(kMaxFrank);
  if (target >= tmax) return std::copysign(kMaxFrank, tau);
  auto f = [&](double th) { return frank_tau(th) - target; };
  return std::copysign(invert_increasing(f, 1e-8, kMaxFrank), tau);
}

// Maximises ll(tau) on [lo, hi] starting from a window around tau0.
template <class LL>
std::pair<double, double> maximise_over_tau(LL ll, double tau0, double lo, double hi) {
  auto neg = [&](double t) {
    const double v = ll(t);
    return std::isfinite(v) ? -v : 1e300;
  };
  auto run = [&](double a, double b) { return boost::math::tools::brent_find_minima(neg, a, b, 40); };
  const double a = std::max(lo, tau0 - 0.2), b = std::min(hi, tau0 + 0.2);
  auto best = run(a, b);
  const double edge_tol = 1e-3 * (b - a);
  if ((best.first - a < edge_tol && a > lo) || (b - best.first < edge_tol && b < hi)) {
    const auto wide = run(lo, hi);
    if (wide.second < best.second) best = wide;
  }
  return {best.first, -best.second};
}

BivariateCopula fit_checkerboard(std::span<const double> u1, std::span<const double> u2) {
  std::vector<double> p(kBins * kBins, 0.5);
  for (std::size_t k = 0; k < u1.size(); ++k) p[bin_of(clamp_u(u1[k])) * kBins + bin_of(clamp_u(u2[k]))] += 1.0;
  // Sinkhorn scaling to uniform margins.
  for (int it = 0; it < 2000; ++it) {
    double worst = 0.0;
    for (int i = 0; i < kBins; ++i) {
      double s = 0.0;
      for (int j = 0; j < kBins; ++j) s += p[i * kBins + j];
      worst = std::max(worst, std::abs(s * kBins - 1.0));
      for (int j = 0; j < kBins; ++j) p[i * kBins + j] /= s * kBins;
    }
    for (int j = 0; j < kBins; ++j) {
      double s = 0.0;
      for (int i = 0; i < kBins; ++i) s += p[i * kBins + j];
      worst = std::max(worst, std::abs(s * kBins - 1.0));
      for (int i = 0; i < kBins; ++i) p[i * kBins + j] /= s * kBins;
    }
    if (worst < 1e-14) break;
  }
  for (double& v : p) v *= kBins * kBins;
  return BivariateCopula::checkerboard(std::move(p));
}

}  // namespace

BivariateFitResult fit_bivariate(std::span<const double> u1, std::span<const double> u2,
                                 const BivariateFitOptions& opts) {
  if (u1.size() != u2.size()) throw std::invalid_argument("fit_bivariate: size mismatch");
  const std::size_t n = u1.size();
  BivariateFitResult best{BivariateCopula::independence(), 0.0, 0.0};
  if (n < 2) return best;
  const bool ties_only = std::all_of(u1.begin(), u1.end(), [&](double v) { return v == u1[0]; }) ||
                         std::all_of(u2.begin(), u2.end(), [&](double v) { return v == u2[0]; });
  if (ties_only) return best;

  const double tau = stats::kendall_tau(u1, u2);
  if (opts.independence_test && kendall_independence(tau, n)) return best;

  bool have = false;
  const bool independence_allowed = opts.independence_test;
  if (independence_allowed) have = true;  // independence competes with AIC 0
  auto consider = [&](const BivariateCopula& c, double ll) {
    if (!std::isfinite(ll)) return;
    const double aic = 2.0 * c.n_params() - 2.0 * ll;
    if (!have || aic < best.aic) {
      best = {c, ll, aic};
      have = true;
    }
  };

  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = clamp_u(u1[i]);
    b[i] = clamp_u(u2[i]);
  }
  const double tau0 = std::clamp(tau, -kMaxTau, kMaxTau);
  auto rho_of = [](double t) { return std::sin(std::numbers::pi / 2.0 * t); };

  if (opts.allow_gaussian) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = stats::normal_quantile(a[i]);
      y[i] = stats::normal_quantile(b[i]);
    }
    auto ll = [&](double t) {
      const double r = rho_of(t);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += gauss_log_pdf_xy(x[i], y[i], r);
      return s;
    };
    const auto [t, v] = maximise_over_tau(ll, tau0, -kMaxTau, kMaxTau);
    consider(BivariateCopula::gaussian(rho_of(t)), v);
  }

  if (opts.allow_student_t) {
    std::vector<double> x(n), y(n);
    const std::vector<double> grid =
        opts.student_t_nu > 0.0 ? std::vector<double>{opts.student_t_nu} : std::vector<double>(kNuGrid.begin(), kNuGrid.end());
    for (double nu : grid) {
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = t_quantile(a[i], nu);
        y[i] = t_quantile(b[i], nu);
      }
      const double lc = t_log_const(nu);
      auto ll = [&](double t) {
        const double r = rho_of(t);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += t_log_pdf_xy(x[i], y[i], r, nu, lc);
        return s;
      };
      const auto [t, v] = maximise_over_tau(ll, tau0, -kMaxTau, kMaxTau);
      consider(BivariateCopula::student_t(rho_of(t), nu), v);
    }
  }

  const std::array<int, 2> rotations = tau >= 0.0 ? std::array<int, 2>{0, 180} : std::array<int, 2>{90, 270};
  const double abs_tau0 = std::clamp(std::abs(tau0), 1e-4, kMaxTau);
  if (opts.allow_clayton) {
    for (int rot : rotations) {
      auto make = [&](double t) { return BivariateCopula::clayton(2.0 * t / (1.0 - t), rot); };
      auto ll = [&](double t) { return make(t).loglik(a, b); };
      const auto [t, v] = maximise_over_tau(ll, abs_tau0, 1e-4, kMaxTau);
      consider(make(t), v);
    }
  }
  if (opts.allow_gumbel) {
    for (int rot : rotations) {
      auto make = [&](double t) { return BivariateCopula::gumbel(1.0 / (1.0 - t), rot); };
      auto ll = [&](double t) { return make(t).loglik(a, b); };
      const auto [t, v] = maximise_over_tau(ll, abs_tau0, 1e-4, kMaxTau);
      consider(make(t), v);
    }
  }
  if (opts.allow_frank) {
    const double tmax = frank_tau(kMaxFrank);
    auto make = [&](double t) { return BivariateCopula::frank(frank_theta_from_tau(t)); };
    auto ll = [&](double t) { return make(t).loglik(a, b); };
    const auto [t, v] = maximise_over_tau(ll, std::clamp(tau0, -tmax, tmax), -tmax, tmax);
    consider(make(t), v);
  }
  if (opts.allow_checkerboard) {
    const auto c = fit_checkerboard(a, b);
    consider(c, c.loglik(a, b));
  }
  return best;
}

}  // namespace faultflow
