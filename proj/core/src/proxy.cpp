#include "faultflow/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "faultflow/units.hpp"

namespace faultflow {

double transmissibility(double k_a, double k_b, double area, double d_a, double d_b) {
  if (k_a < 0.0 || k_b < 0.0 || !(area > 0.0 && d_a > 0.0 && d_b > 0.0))
    throw std::invalid_argument("transmissibility: negative permeability or non-positive geometry");
  const double ta = k_a * area / d_a, tb = k_b * area / d_b;
  if (ta == 0.0 || tb == 0.0) return 0.0;
  return ta * tb / (ta + tb);
}

double aquifer_transmissibility(double t_r, double k_f, double a_f, double l_f, bool* assumption_violated) {
  if (t_r < 0.0 || k_f < 0.0 || !(a_f > 0.0 && l_f > 0.0))
    throw std::invalid_argument("aquifer_transmissibility: invalid input");
  const double t_aq = 2.0 * k_f * a_f / l_f;
  if (assumption_violated) *assumption_violated = t_aq > 0.1 * t_r;
  if (t_r == 0.0 || t_aq == 0.0) return 0.0;
  return t_r * t_aq / (t_r + t_aq);
}

void ProxyConfig::validate() const {
  for (int i = 0; i < 6; ++i) {
    if (!(layer_perms[i] > 0.0)) throw std::invalid_argument("proxy: layer permeabilities must be positive");
    if (!(layer_thickness[i] > 0.0)) throw std::invalid_argument("proxy: layer thicknesses must be positive");
  }
  if (!(cell_dx > 0.0 && cell_dy > 0.0 && porosity > 0.0 && fault_porosity > 0.0))
    throw std::invalid_argument("proxy: cell geometry and porosities must be positive");
  if (!(fault_area > 0.0 && fault_half_length > 0.0)) throw std::invalid_argument("proxy: fault area and length must be positive");
  if (!(kv_kh > 0.0)) throw std::invalid_argument("proxy: kv/kh must be positive");
  if (!(farfield_width >= 0.0 && farfield_distance > 0.0)) throw std::invalid_argument("proxy: invalid far-field geometry");
  if (!(duration > 0.0)) throw std::invalid_argument("proxy: duration must be positive");
  if (!(timestep > 0.0 && min_timestep > 0.0)) throw std::invalid_argument("proxy: timestep must be positive");
  if (!(injection_rate >= 0.0)) throw std::invalid_argument("proxy: injection rate must be non-negative");
  if (!(aquifer_porosity_factor > 0.0)) throw std::invalid_argument("proxy: aquifer porosity factor must be positive");
  if (!(sand_perm > 0.0 && sand_entry_pressure > 0.0 && bc_exponent > 0.0))
    throw std::invalid_argument("proxy: invalid sand saturation parameters");
}

double SimResult::leaked_total() const {
  if (leaked_top.empty()) return 0.0;
  return leaked_top.back() + leaked_troll.back();
}

double SimResult::max_mass_balance_error() const {
  double m = 0.0;
  for (double e : mass_balance_error) m = std::max(m, e);
  return m;
}

namespace {

// Forward-mode dual number with N derivative directions.
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double x) : v(x) {}  // NOLINT: implicit constants are intended
  static Dual var(double x, int i) {
    Dual r(x);
    r.d[i] = 1.0;
    return r;
  }
};

template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { a.v += b.v; for (int i = 0; i < N; ++i) a.d[i] += b.d[i]; return a; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { a.v -= b.v; for (int i = 0; i < N; ++i) a.d[i] -= b.d[i]; return a; }
template <int N> Dual<N> operator-(Dual<N> a) { a.v = -a.v; for (int i = 0; i < N; ++i) a.d[i] = -a.d[i]; return a; }
template <int N> Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
template <int N> Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v / b.v);
  const double ib = 1.0 / b.v;
  for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * ib;
  return r;
}
template <int N> Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N> Dual<N> operator+(double b, Dual<N> a) { a.v += b; return a; }
template <int N> Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N> Dual<N> operator-(double b, const Dual<N>& a) { return -a + b; }
template <int N> Dual<N> operator*(Dual<N> a, double b) { a.v *= b; for (auto& x : a.d) x *= b; return a; }
template <int N> Dual<N> operator*(double b, Dual<N> a) { return a * b; }
template <int N> Dual<N> operator/(Dual<N> a, double b) { return a * (1.0 / b); }

template <int N> Dual<N> exp(const Dual<N>& a) {
  Dual<N> r(std::exp(a.v));
  for (int i = 0; i < N; ++i) r.d[i] = r.v * a.d[i];
  return r;
}
template <int N> Dual<N> log(const Dual<N>& a) {
  Dual<N> r(std::log(a.v));
  const double inv = 1.0 / a.v;
  for (int i = 0; i < N; ++i) r.d[i] = inv * a.d[i];
  return r;
}
inline double value(double x) { return x; }
template <int N> double value(const Dual<N>& x) { return x.v; }
using std::exp;
using std::log;

// Saturation functions in terms of brine saturation sw.
struct SatFunc {
  bool tabulated = false;
  // Brooks-Corey
  double pe = 0.0;  // Pa
  double n = 0.67;
  double sw_floor = 0.05;
  // Tabulated (fault)
  std::vector<double> s, log_pc, krw, krnw;

  template <class T>
  void eval(const T& sw, T& kw, T& kg, T& pc) const {
    if (!tabulated) {
      // Exponents (2 + 3 lambda) / lambda = 2n + 3 and (2 + lambda) / lambda = 2n + 1.
      const T sg = 1.0 - sw;
      if (value(sw) <= 0.0) {
        kw = T(0.0);
        kg = sg * sg;
      } else {
        const T ls = log(sw);
        const T s_2n1 = exp((2.0 * n + 1.0) * ls);
        kw = s_2n1 * sw * sw;
        kg = sg * sg * (1.0 - s_2n1);
      }
      pc = value(sw) > sw_floor ? pe * exp(-n * log(sw)) : T(pe * std::pow(sw_floor, -n));
      return;
    }
    const double x = value(sw);
    if (x <= s.front()) {
      kw = T(krw.front());
      kg = T(krnw.front());
      pc = T(std::exp(log_pc.front()));
      return;
    }
    if (x >= s.back()) {
      kw = T(krw.back());
      kg = T(krnw.back());
      pc = T(std::exp(log_pc.back()));
      return;
    }
    const auto k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) - 1;
    const double w = 1.0 / (s[k + 1] - s[k]);
    const T t = (sw - s[k]) * w;
    kw = krw[k] + t * (krw[k + 1] - krw[k]);
    kg = krnw[k] + t * (krnw[k + 1] - krnw[k]);
    pc = exp(log_pc[k] + t * (log_pc[k + 1] - log_pc[k]));
  }
};

SatFunc brooks_corey(double pe_pa, double n) {
  SatFunc f;
  f.pe = pe_pa;
  f.n = n;
  return f;
}

// Re-parameterises the fault's tabulated curves by saturation; entries with
// equal saturation are averaged.
SatFunc fault_table(const FlowFunctionSample& ff) {
  const std::size_t ng = ff.sat.size();
  if (ng == 0 || ff.pc.size() != ng || ff.krw.size() != ng || ff.krnw.size() != ng)
    throw std::invalid_argument("simulate: fault flow functions are empty or inconsistent");
  std::vector<std::size_t> idx(ng);
  for (std::size_t i = 0; i < ng; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ff.sat[a] < ff.sat[b]; });
  SatFunc f;
  f.tabulated = true;
  std::size_t i = 0;
  while (i < ng) {
    std::size_t j = i;
    double lp = 0.0, kw = 0.0, kg = 0.0;
    while (j < ng && std::abs(ff.sat[idx[j]] - ff.sat[idx[i]]) <= 1e-14) {
      if (!(ff.pc[idx[j]] > 0.0)) throw std::invalid_argument("simulate: fault Pc must be positive");
      lp += std::log(ff.pc[idx[j]] * units::kilopascal);
      kw += ff.krw[idx[j]];
      kg += ff.krnw[idx[j]];
      ++j;
    }
    const double c = static_cast<double>(j - i);
    f.s.push_back(ff.sat[idx[i]]);
    f.log_pc.push_back(lp / c);
    f.krw.push_back(std::clamp(kw / c, 0.0, 1.0));
    f.krnw.push_back(std::clamp(kg / c, 0.0, 1.0));
    i = j;
  }
  if (f.s.size() == 1) {
    // Degenerate table: constant functions.
    f.s.push_back(f.s.front() + 1e-12);
    f.log_pc.push_back(f.log_pc.front());
    f.krw.push_back(f.krw.front());
    f.krnw.push_back(f.krnw.front());
  }
  return f;
}

struct Node {
  std::string name;
  double depth = 0.0;
  double pv = 0.0;  // m^3
  int sat = 0;      // index into saturation functions
  int unknown = -1; // -1: frozen boundary node
  double p0 = 0.0;
};

struct Connection {
  int a, b;
  double trans;  // m^3
};

constexpr int kCells = 7;  // six layers + fault core
constexpr int kUnknowns = 2 * kCells;
using Vec = Eigen::Matrix<double, kUnknowns, 1>;
using Mat = Eigen::Matrix<double, kUnknowns, kUnknowns>;

class Proxy {
 public:
  Proxy(const ProxyConfig& cfg, const FlowFunctionSample& fault, double k_troll) : cfg_(cfg) {
    cfg.validate();
    if (!(fault.k_abs >= 0.0) || !(k_troll >= 0.0))
      throw std::invalid_argument("simulate: permeabilities must be non-negative");
    const auto& fl = cfg.fluid;
    const double n = cfg.bc_exponent;

    // Saturation functions: one per layer, fault, and a sand function for aquifers.
    for (int i = 0; i < 6; ++i)
      sats_.push_back(brooks_corey(cfg.sand_entry_pressure * units::kilopascal *
                                       std::sqrt(cfg.sand_perm / cfg.layer_perms[i]), n));
    sats_.push_back(fault_table(fault));
    sats_.push_back(brooks_corey(cfg.sand_entry_pressure * units::kilopascal, n));
    const int sat_fault = 6, sat_sand = 7;

    // Nodes 0-5 layers, 6 fault core, 7 top aquifer, 8 Troll, 9-14 far field.
    double top = cfg.reservoir_top;
    const double area = cfg.cell_dx * cfg.cell_dy;
    for (int i = 0; i < 6; ++i) {
      const double h = cfg.layer_thickness[i];
      nodes_.push_back({"layer" + std::to_string(i + 1), top + 0.5 * h, area * h * cfg.porosity, i, 2 * i, 0.0});
      top += h;
    }
    nodes_.push_back({"fault_core", cfg.fault_depth, cfg.fault_area * 2.0 * cfg.fault_half_length * cfg.fault_porosity,
                      sat_fault, 12, 0.0});
    nodes_.push_back({"top_aquifer", cfg.top_aquifer_depth, 0.0, sat_sand, -1, 0.0});
    nodes_.push_back({"troll", cfg.troll_depth, 0.0, sat_sand, -1, 0.0});
    for (int i = 0; i < 6; ++i) nodes_.push_back({"farfield" + std::to_string(i + 1), nodes_[i].depth, 0.0, i, -1, 0.0});

    // Hydrostatic brine pressures hanging from the Troll datum.
    nodes_[8].p0 = cfg.troll_pressure * units::bar;
    auto hydro = [&](int from, int to) {
      const double pf = nodes_[from].p0, dz = nodes_[to].depth - nodes_[from].depth;
      double p = pf;
      for (int it = 0; it < 50; ++it) {
        const double next = pf + 0.5 * (rho_w(pf) + rho_w(p)) * units::gravity * dz;
        if (next == p) break;
        p = next;
      }
      nodes_[to].p0 = p;
    };
    hydro(8, 5);
    for (int i = 4; i >= 0; --i) hydro(i + 1, i);
    hydro(0, 6);
    hydro(6, 7);
    for (int i = 0; i < 6; ++i) nodes_[9 + i].p0 = nodes_[i].p0;

    const double md = units::millidarcy;
    for (int i = 0; i < 5; ++i)
      conns_.push_back({i, i + 1,
                        md * transmissibility(cfg.kv_kh * cfg.layer_perms[i], cfg.kv_kh * cfg.layer_perms[i + 1], area,
                                              0.5 * cfg.layer_thickness[i], 0.5 * cfg.layer_thickness[i + 1])});
    bool v1 = false, v2 = false;
    const double tr_top = cfg.layer_perms[0] * cfg.fault_area / (0.5 * cfg.cell_dx);
    const double t_fault = aquifer_transmissibility(tr_top, fault.k_abs, cfg.fault_area, cfg.fault_half_length, &v1);
    conns_.push_back({0, 6, md * t_fault});
    conns_.push_back({6, 7, md * t_fault});
    const double tr_bot = cfg.layer_perms[5] * cfg.fault_area / (0.5 * cfg.cell_dx);
    conns_.push_back({5, 8, md * aquifer_transmissibility(tr_bot, k_troll, cfg.fault_area, cfg.fault_half_length, &v2)});
    if (cfg.farfield_width > 0.0)
      for (int i = 0; i < 6; ++i)
        conns_.push_back({i, 9 + i,
                          md * transmissibility(cfg.layer_perms[i], cfg.layer_perms[i], cfg.layer_thickness[i] * cfg.farfield_width,
                                                0.5 * cfg.cell_dx, cfg.farfield_distance)});
    assumption_violated_ = v1 || v2;

    // Injection split by k h over the layers.
    const double total = cfg.injection_rate * 1e9 / units::year;  // kg/s
    double kh = 0.0;
    for (int i = 0; i < 6; ++i) kh += cfg.layer_perms[i] * cfg.layer_thickness[i];
    for (int i = 0; i < 6; ++i) source_[i] = total * cfg.layer_perms[i] * cfg.layer_thickness[i] / kh;
    source_[6] = 0.0;
    q_inj_ = total;
    scale_ = 1.0 / std::max(total, 1.0);
    (void)fl;
  }

  SimResult run();

 private:
  double rho_w(double p) const { return cfg_.fluid.rho_brine * (1.0 + cfg_.fluid.c_brine * (p - cfg_.fluid.p_ref)); }
  double rho_g(double p) const { return cfg_.fluid.rho_co2 * (1.0 + cfg_.fluid.c_co2 * (p - cfg_.fluid.p_ref)); }
  template <class T> T rho_w(const T& p) const { return cfg_.fluid.rho_brine * (1.0 + cfg_.fluid.c_brine * (p - cfg_.fluid.p_ref)); }
  template <class T> T rho_g(const T& p) const { return cfg_.fluid.rho_co2 * (1.0 + cfg_.fluid.c_co2 * (p - cfg_.fluid.p_ref)); }

  // Per-node phase properties with derivatives w.r.t. (p, sg) of that node.
  struct NodeState {
    Dual<2> pw, pg, rw, rg, mob_w, mob_g, sw;
  };

  NodeState node_state(int i, double p, double sg) const {
    using D = Dual<2>;
    const bool var = nodes_[i].unknown >= 0;
    const D pd = var ? D::var(p, 0) : D(p);
    const D sd = var ? D::var(sg, 1) : D(sg);
    NodeState s;
    D kw, kg, pc;
    s.sw = 1.0 - sd;
    sats_[nodes_[i].sat].eval(s.sw, kw, kg, pc);
    s.pw = pd;
    s.pg = pd + pc;
    s.rw = rho_w(s.pw);
    s.rg = rho_g(s.pg);
    s.mob_w = kw * (1.0 / cfg_.fluid.mu_brine);
    s.mob_g = kg * (1.0 / cfg_.fluid.mu_co2);
    return s;
  }

  void update_states(const std::vector<double>& p, const std::vector<double>& sg) const {
    const bool all = states_.size() != nodes_.size();
    if (all) states_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (all || nodes_[i].unknown >= 0) states_[i] = node_state(static_cast<int>(i), p[i], sg[i]);
  }

  static Dual<4> lift(const Dual<2>& a, int offset) {
    Dual<4> r(a.v);
    r.d[offset] = a.d[0];
    r.d[offset + 1] = a.d[1];
    return r;
  }

  // Upwinded mass flux a -> b of one phase, derivatives w.r.t. (p_a, sg_a, p_b, sg_b).
  static Dual<4> phase_flux(double trans, double g_dz, const Dual<2>& pa, const Dual<2>& ra, const Dual<2>& ma,
                            const Dual<2>& pb, const Dual<2>& rb, const Dual<2>& mb) {
    const Dual<2> dphi_a = pa + 0.5 * g_dz * ra;
    const Dual<2> dphi_b = 0.5 * g_dz * rb - pb;
    const Dual<4> dphi = lift(dphi_a, 0) + lift(dphi_b, 2);
    if (dphi.v >= 0.0) return trans * lift(ra * ma, 0) * dphi;
    return trans * lift(rb * mb, 2) * dphi;
  }

  struct PhaseFlux {
    Dual<4> w, g;
  };
  PhaseFlux flux(const Connection& c) const {
    const NodeState& a = states_[c.a];
    const NodeState& b = states_[c.b];
    const double g_dz = units::gravity * (nodes_[c.b].depth - nodes_[c.a].depth);
    return {phase_flux(c.trans, g_dz, a.pw, a.rw, a.mob_w, b.pw, b.rw, b.mob_w),
            phase_flux(c.trans, g_dz, a.pg, a.rg, a.mob_g, b.pg, b.rg, b.mob_g)};
  }

  struct Mass {
    Dual<2> w, g;
  };
  Mass mass(int i) const {
    const NodeState& s = states_[i];
    const double pv = nodes_[i].pv;
    return {pv * s.rw * s.sw, pv * s.rg * (1.0 - s.sw)};
  }

  // Residual and Jacobian of the backward-Euler step at the current states.
  void assemble(const std::vector<double>& mw_old, const std::vector<double>& mg_old, double dt, Vec& r,
                Mat& jac) const {
    r.setZero();
    jac.setZero();
    for (int i = 0; i < kCells; ++i) {
      const Mass m = mass(i);
      const int row = 2 * i;
      r[row] += (m.w.v - mw_old[i]) / dt;
      r[row + 1] += (m.g.v - mg_old[i]) / dt - source_[i];
      for (int k = 0; k < 2; ++k) {
        jac(row, row + k) += m.w.d[k] / dt;
        jac(row + 1, row + k) += m.g.d[k] / dt;
      }
    }
    for (const auto& c : conns_) {
      const PhaseFlux f = flux(c);
      const int ua = nodes_[c.a].unknown, ub = nodes_[c.b].unknown;
      auto scatter = [&](int row, const Dual<4>& q, double sign) {
        r[row] += sign * q.v;
        if (ua >= 0) {
          jac(row, ua) += sign * q.d[0];
          jac(row, ua + 1) += sign * q.d[1];
        }
        if (ub >= 0) {
          jac(row, ub) += sign * q.d[2];
          jac(row, ub + 1) += sign * q.d[3];
        }
      };
      if (ua >= 0) {
        scatter(ua, f.w, 1.0);
        scatter(ua + 1, f.g, 1.0);
      }
      if (ub >= 0) {
        scatter(ub, f.w, -1.0);
        scatter(ub + 1, f.g, -1.0);
      }
    }
    r *= scale_;
    jac *= scale_;
  }

  // Newton solve for one step; returns false on failure.
  bool step(std::vector<double>& p, std::vector<double>& sg, double dt, int& iterations) const {
    std::vector<double> mw_old(kCells), mg_old(kCells);
    update_states(p, sg);
    for (int i = 0; i < kCells; ++i) {
      const Mass m = mass(i);
      mw_old[i] = m.w.v;
      mg_old[i] = m.g.v;
    }
    Vec r;
    Mat jac;
    for (int it = 0; it < cfg_.max_newton_iterations; ++it) {
      assemble(mw_old, mg_old, dt, r, jac);
      if (!r.allFinite()) return false;
      if (r.cwiseAbs().maxCoeff() < cfg_.newton_tolerance) {
        iterations += it;
        return true;
      }
      const Vec dx = jac.partialPivLu().solve(-r);
      if (!dx.allFinite()) return false;
      for (int i = 0; i < kCells; ++i) {
        const double dp = std::clamp(dx[2 * i], -50.0 * units::bar, 50.0 * units::bar);
        const double ds = std::clamp(dx[2 * i + 1], -0.2, 0.2);
        p[i] += dp;
        sg[i] = std::clamp(sg[i] + ds, 0.0, 1.0 - 1e-9);
      }
      update_states(p, sg);
    }
    return false;
  }

  ProxyConfig cfg_;
  std::vector<SatFunc> sats_;
  std::vector<Node> nodes_;
  std::vector<Connection> conns_;
  mutable std::vector<NodeState> states_;
  std::array<double, kCells> source_{};
  double q_inj_ = 0.0;
  double scale_ = 1.0;
  bool assumption_violated_ = false;
};

SimResult Proxy::run() {
  SimResult res;
  res.aquifer_assumption_violated = assumption_violated_;
  for (const auto& n : nodes_)
    if (n.name.rfind("farfield", 0) != 0) res.cell_names.push_back(n.name);
  const std::size_t n_report = res.cell_names.size();

  std::vector<double> p(nodes_.size()), sg(nodes_.size(), 0.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) p[i] = nodes_[i].p0;

  const double t_end = cfg_.duration * units::year;
  const double dt_max = cfg_.timestep * units::day;
  const double dt_min = cfg_.min_timestep * units::day;
  double t = 0.0, dt = std::min(dt_max, units::day);
  double cum_top = 0.0, cum_out = 0.0, cum_troll = 0.0, cum_ff = 0.0;

  auto record = [&]() {
    res.times.push_back(t / units::day);
    double column = 0.0;
    for (int i = 0; i < 6; ++i) column += mass(i).g.v;
    const double injected = q_inj_ * t;
    const double stored = column + cum_ff;
    res.leaked_top.push_back(cum_top / units::tonne);
    res.leaked_troll.push_back(cum_troll / units::tonne);
    res.reached_top_aquifer.push_back(cum_out / units::tonne);
    res.stored.push_back(stored / units::tonne);
    res.injected.push_back(injected / units::tonne);
    res.mass_balance_error.push_back(std::abs(injected - stored - cum_top - cum_troll) / std::max(injected, 1.0));
    if (cfg_.record_pressure) {
      std::vector<double> pr(n_report);
      for (std::size_t i = 0; i < n_report; ++i) pr[i] = p[i] / units::bar;
      res.pressure.push_back(std::move(pr));
    }
  };
  update_states(p, sg);
  record();

  while (t < t_end * (1.0 - 1e-12)) {
    const double h = std::min(dt, t_end - t);
    std::vector<double> p_new = p, sg_new = sg;
    if (!step(p_new, sg_new, h, res.newton_iterations)) {
      dt = 0.5 * h;
      ++res.timestep_cuts;
      if (dt < dt_min)
        throw std::runtime_error("simulate: Newton failed to converge at t = " + std::to_string(t / units::day) +
                                 " days with the minimum timestep");
      continue;
    }
    p = std::move(p_new);
    sg = std::move(sg_new);
    update_states(p, sg);
    for (const auto& c : conns_) {
      const double q = flux(c).g.v * h;
      if (c.a == 0 && c.b == 6) cum_top += q;
      else if (c.a == 6 && c.b == 7) cum_out += q;
      else if (c.b == 8) cum_troll += q;
      else if (c.b >= 9) cum_ff += q;
    }
    t += h;
    record();
    dt = std::min(dt_max, 2.0 * h);
  }
  return res;
}

}  // namespace

SimResult simulate(const ProxyConfig& cfg, const FlowFunctionSample& fault, double k_troll) {
  Proxy proxy(cfg, fault, k_troll);
  return proxy.run();
}

}  // namespace faultflow
