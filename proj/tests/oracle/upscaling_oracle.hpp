#pragma once

// Brute-force capillary-equilibrium upscaling, written independently of the
// library: fine-scale saturations come from bisection on the Brooks-Corey
// curve instead of its closed-form inverse, and every average is spelled out
// per facies.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

struct Curves {
  double k = 0.0;
  std::vector<double> pc, sat, krw, krnw;
};

// Saturation where p_e * s^-n == pc, searched in log s.
inline double invert_pc(double pc, double p_e, double n) {
  if (pc <= p_e) return 1.0;
  double lo = -800.0, hi = 0.0;  // log s
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double pc_mid = p_e * std::exp(-n * mid);
    if (pc_mid > pc) lo = mid; else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

inline Curves upscale(const std::vector<double>& h, const std::vector<double>& k, const std::vector<double>& sd,
                      double k_sand, double p_sand, double n) {
  const std::size_t nf = k.size();
  const double lambda = 1.0 / n;
  const double ew = 2.0 / lambda + 3.0;  // wetting exponent
  const double enw = 2.0 / lambda + 1.0;

  double H = 0.0;
  for (double v : h) H += v;
  double series = 0.0;
  for (std::size_t j = 0; j < nf; ++j) series += h[j] / k[j];

  Curves c;
  c.k = H / series;  // step 1
  std::vector<double> pe(nf);
  for (std::size_t j = 0; j < nf; ++j) pe[j] = p_sand * std::sqrt(k_sand / k[j]);
  double pe_min = pe[0];
  for (double p : pe) pe_min = std::min(pe_min, p);

  for (double s_d : sd) {
    const double pc = pe_min * std::pow(s_d, -n);  // step 2
    double s_acc = 0.0, rw = 0.0, rnw = 0.0;
    bool w_zero = false, nw_zero = false;
    for (std::size_t j = 0; j < nf; ++j) {
      const double s = invert_pc(pc, pe[j], n);  // step 3
      s_acc += h[j] * s;                         // step 4
      const double kw = std::pow(s, ew) * k[j];
      const double knw = (1.0 - s) * (1.0 - s) * (1.0 - std::pow(s, enw)) * k[j];
      if (kw > 0.0) rw += h[j] / kw; else w_zero = true;  // step 5
      if (knw > 0.0) rnw += h[j] / knw; else nw_zero = true;
    }
    c.pc.push_back(pc);
    c.sat.push_back(s_acc / H);
    c.krw.push_back(w_zero ? 0.0 : (H / rw) / c.k);  // step 6
    c.krnw.push_back(nw_zero ? 0.0 : (H / rnw) / c.k);
  }
  return c;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
