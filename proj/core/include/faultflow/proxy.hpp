#pragma once

#include <array>
#include <string>
#include <vector>

#include "faultflow/twophase.hpp"

namespace faultflow {

/// Series transmissibility of two half cells, T = Ta Tb / (Ta + Tb) with
/// Ti = k_i A / d_i.  Units follow the inputs (mD m for mD, m^2, m).
double transmissibility(double k_a, double k_b, double area, double d_a, double d_b);

/// Reservoir-to-numerical-aquifer connection: harmonic combination of the
/// reservoir half transmissibility T_r and the fault side 2 k_f A_f / L_f.
/// `assumption_violated` (optional) is set when the fault side is not small
/// compared with T_r.
double aquifer_transmissibility(double t_r, double k_f, double a_f, double l_f,
                                bool* assumption_violated = nullptr);

struct FluidProperties {
  double rho_brine = 1000.0;  // kg/m^3 at p_ref
  double rho_co2 = 700.0;
  double mu_brine = 0.8e-3;   // Pa s
  double mu_co2 = 0.06e-3;
  double c_brine = 4.0e-10;   // 1/Pa
  double c_co2 = 5.0e-9;
  double p_ref = 100.0e5;     // Pa
};

struct ProxyConfig {
  std::array<double, 6> layer_perms{1000, 50, 1000, 50, 850, 25};  // horizontal, mD
  std::array<double, 6> layer_thickness{40, 10, 40, 10, 40, 20};   // m, top to bottom
  double kv_kh = 0.1;
  double cell_dx = 400.0;  // m
  double cell_dy = 400.0;  // m
  double reservoir_top = 1200.0;  // m depth
  double porosity = 0.25;

  double fault_area = 40.0;          // A_f, m^2
  double fault_half_length = 250.0;  // L_f, m
  double fault_porosity = 0.1;
  double fault_depth = 950.0;        // fault-core cell centre, m
  double top_aquifer_depth = 700.0;
  double troll_depth = 1100.0;
  double troll_pressure = 110.0;     // bar
  double aquifer_porosity_factor = 1e12;

  // Lateral constant-pressure boundary standing in for the rest of the formation.
  double farfield_width = 1600.0;    // m of boundary face per layer
  double farfield_distance = 400.0;  // m

  double injection_rate = 1.6;  // Mt/yr
  double duration = 59.0;       // years
  double timestep = 90.0;       // days, maximum step
  double min_timestep = 1e-3;   // days

  double sand_perm = 1000.0;         // mD
  double sand_entry_pressure = 2.5;  // kPa
  double bc_exponent = 0.67;

  FluidProperties fluid;
  double newton_tolerance = 1e-10;   // scaled residual
  int max_newton_iterations = 30;
  bool record_pressure = true;

  void validate() const;
};

struct SimResult {
  std::vector<double> times;            // days
  std::vector<double> leaked_top;       // t, cumulative CO2 into the fault core
  std::vector<double> leaked_troll;     // t, cumulative CO2 into Troll
  std::vector<double> reached_top_aquifer;  // t, cumulative CO2 out of the fault core
  std::vector<double> stored;           // t, column inventory plus lateral outflow
  std::vector<double> injected;         // t
  std::vector<double> mass_balance_error;  // relative
  std::vector<std::string> cell_names;
  std::vector<std::vector<double>> pressure;  // bar, [step][cell]
  bool aquifer_assumption_violated = false;
  int newton_iterations = 0;
  int timestep_cuts = 0;

  /// Total leakage (top + Troll) at the final time, tonnes.
  double leaked_total() const;
  double max_mass_balance_error() const;
};

/// Runs the leakage proxy with the given fault flow functions and Troll
/// connection permeability (mD).
SimResult simulate(const ProxyConfig& cfg, const FlowFunctionSample& fault, double k_troll);

}  // namespace faultflow
