#include "faultflow/twophase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "faultflow/parallel.hpp"

namespace faultflow {

SdGrid SdGrid::log_spaced(std::size_t n, double lower) {
  if (n < 2) throw std::invalid_argument("SdGrid: need at least two points");
  if (!(lower >= 1e-6 && lower < 1.0)) throw std::invalid_argument("SdGrid: lower bound must be in [1e-6, 1)");
  SdGrid g;
  g.values.resize(n);
  const double a = std::log10(lower);
  for (std::size_t i = 0; i < n; ++i)
    g.values[i] = std::pow(10.0, a * (1.0 - static_cast<double>(i) / static_cast<double>(n - 1)));
  g.values.front() = lower;
  g.values.back() = 1.0;
  return g;
}

void SdGrid::validate() const {
  if (values.empty()) throw std::invalid_argument("SdGrid: empty grid");
  if (values.front() < 1e-6 * (1.0 - 1e-12)) throw std::invalid_argument("SdGrid: first value below 1e-6");
  if (values.back() != 1.0) throw std::invalid_argument("SdGrid: last value must be 1");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw std::invalid_argument("SdGrid: values must be strictly increasing");
}

double entry_pressure(double k_cell, double k_sand, double p_entry_sand) {
  if (!(k_cell > 0.0 && k_sand > 0.0 && p_entry_sand > 0.0))
    throw std::invalid_argument("entry_pressure: inputs must be positive");
  return p_entry_sand * std::sqrt(k_sand / k_cell);
}

double fine_scale_pc(double s, double p_entry, double n) {
  if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("fine_scale_pc: saturation must be in (0,1]");
  return p_entry * std::pow(s, -n);
}

double fine_scale_pc_inverse(double pc, double p_entry, double n) {
  if (pc <= p_entry) return 1.0;
  return std::clamp(std::pow(pc / p_entry, -1.0 / n), 0.0, 1.0);
}

RelPerm fine_scale_relperm(double s, double n) {
  s = std::clamp(s, 0.0, 1.0);
  const double lambda = 1.0 / n;
  const double krw = std::pow(s, (2.0 + 3.0 * lambda) / lambda);
  const double krnw = (1.0 - s) * (1.0 - s) * (1.0 - std::pow(s, (2.0 + lambda) / lambda));
  return {krw, std::clamp(krnw, 0.0, 1.0)};
}

FlowFunctionSample upscale_flow_functions(const FaciesRealization& real, const SdGrid& grid,
                                          const FaciesModelConfig& cfg) {
  if (grid.values.empty()) throw std::invalid_argument("upscale_flow_functions: empty grid");
  const std::size_t nf = real.perms.size();
  const double n = cfg.bc_exponent;

  std::vector<double> pe(nf);
  for (std::size_t j = 0; j < nf; ++j) pe[j] = entry_pressure(real.perms[j], cfg.k_sand, cfg.p_entry_sand);
  const double pe_min = *std::min_element(pe.begin(), pe.end());

  double H = 0.0, inv_k = 0.0;
  for (std::size_t j = 0; j < nf; ++j) {
    H += real.heights[j];
    inv_k += real.heights[j] / real.perms[j];
  }

  FlowFunctionSample out;
  out.k_abs = H / inv_k;
  const std::size_t ng = grid.size();
  out.pc.resize(ng);
  out.sat.resize(ng);
  out.krw.resize(ng);
  out.krnw.resize(ng);

  for (std::size_t g = 0; g < ng; ++g) {
    const double pc = fine_scale_pc(grid.values[g], pe_min, n);
    double s_sum = 0.0, inv_w = 0.0, inv_nw = 0.0;
    bool w_blocked = false, nw_blocked = false;
    for (std::size_t j = 0; j < nf; ++j) {
      const double s = fine_scale_pc_inverse(pc, pe[j], n);
      s_sum += real.heights[j] * s;
      const RelPerm kr = fine_scale_relperm(s, n);
      const double kw = kr.krw * real.perms[j];
      const double knw = kr.krnw * real.perms[j];
      if (kw > 0.0) inv_w += real.heights[j] / kw; else w_blocked = true;
      if (knw > 0.0) inv_nw += real.heights[j] / knw; else nw_blocked = true;
    }
    out.pc[g] = pc;
    out.sat[g] = s_sum / H;
    out.krw[g] = w_blocked ? 0.0 : std::min(1.0, (H / inv_w) / out.k_abs);
    out.krnw[g] = nw_blocked ? 0.0 : std::min(1.0, (H / inv_nw) / out.k_abs);
  }
  return out;
}

std::vector<FlowFunctionSample> generate_ensemble(const FaciesModelConfig& cfg, const SdGrid& grid,
                                                  std::size_t n_ref, std::uint64_t seed) {
  if (n_ref < 1) throw std::invalid_argument("generate_ensemble: n_ref must be >= 1");
  cfg.validate();
  grid.validate();
  std::vector<FlowFunctionSample> out(n_ref);
  parallel_for(n_ref, [&](std::size_t i) {
    Rng rng = substream(seed, i);
    out[i] = upscale_flow_functions(sample_realization(cfg, rng), grid, cfg);
  });
  return out;
}

std::vector<double> ensemble_k(const std::vector<FlowFunctionSample>& ensemble) {
  std::vector<double> k(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) k[i] = ensemble[i].k_abs;
  return k;
}

FlowFunctionSample ensemble_mean(const std::vector<FlowFunctionSample>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("ensemble_mean: empty ensemble");
  const std::size_t ng = ensemble.front().pc.size();
  FlowFunctionSample m;
  m.pc.assign(ng, 0.0);
  m.sat.assign(ng, 0.0);
  m.krw.assign(ng, 0.0);
  m.krnw.assign(ng, 0.0);
  for (const auto& f : ensemble) {
    m.k_abs += f.k_abs;
    for (std::size_t g = 0; g < ng; ++g) {
      m.pc[g] += f.pc[g];
      m.sat[g] += f.sat[g];
      m.krw[g] += f.krw[g];
      m.krnw[g] += f.krnw[g];
    }
  }
  const double inv = 1.0 / static_cast<double>(ensemble.size());
  m.k_abs *= inv;
  for (std::size_t g = 0; g < ng; ++g) {
    m.pc[g] *= inv;
    m.sat[g] *= inv;
    m.krw[g] *= inv;
    m.krnw[g] *= inv;
  }
  return m;
}

void check_invariants(const FlowFunctionSample& f) {
  const std::size_t ng = f.pc.size();
  if (f.sat.size() != ng || f.krw.size() != ng || f.krnw.size() != ng)
    throw std::runtime_error("flow functions: inconsistent table lengths");
  if (!(f.k_abs > 0.0)) throw std::runtime_error("flow functions: K must be positive");
  auto fail = [](const std::string& what, std::size_t g) {
    throw std::runtime_error("flow functions: " + what + " at grid index " + std::to_string(g));
  };
  for (std::size_t g = 0; g < ng; ++g) {
    if (!(f.pc[g] > 0.0)) fail("pc not positive", g);
    if (!(f.sat[g] >= 0.0 && f.sat[g] <= 1.0)) fail("sat outside [0,1]", g);
    if (!(f.krw[g] >= 0.0 && f.krw[g] <= 1.0)) fail("krw outside [0,1]", g);
    if (!(f.krnw[g] >= 0.0 && f.krnw[g] <= 1.0)) fail("krnw outside [0,1]", g);
    if (g > 0) {
      if (!(f.pc[g] < f.pc[g - 1])) fail("pc not strictly decreasing", g);
      if (f.sat[g] < f.sat[g - 1]) fail("sat decreasing", g);
      if (f.krw[g] < f.krw[g - 1]) fail("krw decreasing", g);
      if (f.krnw[g] > f.krnw[g - 1]) fail("krnw increasing", g);
    }
  }
}

}  // namespace faultflow
