#pragma once

#include <cstdint>
#include <vector>

#include "faultflow/facies.hpp"

namespace faultflow {

/// Logarithmically spaced s_d values ending at 1.
struct SdGrid {
  std::vector<double> values;

  static SdGrid log_spaced(std::size_t n = 21, double lower = 1e-6);
  std::size_t size() const { return values.size(); }
  void validate() const;
};

/// Coarse-scale flow functions of one fault realization, tabulated on an s_d
/// grid.  pc in kPa, k_abs in mD.
struct FlowFunctionSample {
  double k_abs = 0.0;
  std::vector<double> pc;
  std::vector<double> sat;
  std::vector<double> krw;
  std::vector<double> krnw;
};

double entry_pressure(double k_cell, double k_sand, double p_entry_sand);

/// Brooks-Corey capillary pressure p_entry * s^-n.
double fine_scale_pc(double s, double p_entry, double n);
/// Saturation at which fine_scale_pc equals pc, clamped to [0,1].
double fine_scale_pc_inverse(double pc, double p_entry, double n);

struct RelPerm {
  double krw;
  double krnw;
};
/// Burdine/Brooks-Corey relative permeabilities with lambda = 1/n.
RelPerm fine_scale_relperm(double s, double n);

/// Capillary-equilibrium upscaling of one realization.
FlowFunctionSample upscale_flow_functions(const FaciesRealization& real, const SdGrid& grid,
                                          const FaciesModelConfig& cfg);

/// n_ref realizations drawn from counter-based sub-streams of `seed`, upscaled
/// in parallel.  Output does not depend on the worker count.
std::vector<FlowFunctionSample> generate_ensemble(const FaciesModelConfig& cfg, const SdGrid& grid,
                                                  std::size_t n_ref, std::uint64_t seed);

/// Absolute permeabilities of an ensemble.
std::vector<double> ensemble_k(const std::vector<FlowFunctionSample>& ensemble);

/// Pointwise ensemble means of the tabulated curves (K is the mean of K).
FlowFunctionSample ensemble_mean(const std::vector<FlowFunctionSample>& ensemble);

/// Throws std::runtime_error describing the first violated range or
/// monotonicity invariant.
void check_invariants(const FlowFunctionSample& f);

}  // namespace faultflow
