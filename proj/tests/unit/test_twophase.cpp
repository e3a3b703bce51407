#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "faultflow/twophase.hpp"
#include "oracle/upscaling_oracle.hpp"

using namespace faultflow;

TEST_CASE("entry pressure scaling") {
  CHECK(entry_pressure(1000, 1000, 2.5) == 2.5);
  CHECK(entry_pressure(10, 1000, 2.5) == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(entry_pressure(1e-4, 1000, 2.5) == doctest::Approx(2.5 * std::sqrt(1e7)).epsilon(1e-14));
  CHECK_THROWS_AS(entry_pressure(0, 1000, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(entry_pressure(1, 1000, -2.5), std::invalid_argument);
}

TEST_CASE("fine-scale Brooks-Corey capillary pressure") {
  CHECK(fine_scale_pc(1.0, 2.5, 0.67) == 2.5);
  CHECK(fine_scale_pc(0.5, 2.5, 0.67) == doctest::Approx(2.5 * std::pow(2.0, 0.67)).epsilon(1e-14));
  CHECK(fine_scale_pc(0.5, 2.5, 0.67) == doctest::Approx(3.977).epsilon(1e-3));
  CHECK(fine_scale_pc_inverse(2.5, 2.5, 0.67) == 1.0);
  CHECK(fine_scale_pc_inverse(1.0, 2.5, 0.67) == 1.0);
  CHECK(fine_scale_pc_inverse(fine_scale_pc(0.3, 4.0, 0.67), 4.0, 0.67) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK_THROWS_AS(fine_scale_pc(0.0, 2.5, 0.67), std::domain_error);
}

TEST_CASE("fine-scale relative permeability endpoints") {
  auto r = fine_scale_relperm(1.0, 0.67);
  CHECK(r.krw == 1.0);
  CHECK(r.krnw == 0.0);
  r = fine_scale_relperm(0.0, 0.67);
  CHECK(r.krw == 0.0);
  CHECK(r.krnw == 1.0);
  const double lambda = 1.0 / 0.67;
  r = fine_scale_relperm(0.5, 0.67);
  CHECK(r.krw == doctest::Approx(std::pow(0.5, (2 + 3 * lambda) / lambda)).epsilon(1e-14));
  CHECK(r.krw == doctest::Approx(std::pow(0.5, 4.34)).epsilon(1e-12));
  CHECK(r.krnw == doctest::Approx(0.25 * (1 - std::pow(0.5, (2 + lambda) / lambda))).epsilon(1e-14));
}

TEST_CASE("sd grid") {
  const auto g = SdGrid::log_spaced();
  REQUIRE(g.size() == 21);
  CHECK(g.values.front() == 1e-6);
  CHECK(g.values.back() == 1.0);
  CHECK_NOTHROW(g.validate());
  CHECK(std::log10(g.values[10]) == doctest::Approx(-3.0));
  SdGrid bad;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.values = {0.1, 0.1, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(SdGrid::log_spaced(21, 1e-8), std::invalid_argument);
}

TEST_CASE("homogeneous fault reproduces the fine-scale functions") {
  FaciesModelConfig cfg;
  FaciesRealization r;
  r.heights = {100, 200, 200};
  r.perms = {0.5, 0.5, 0.5};
  const auto g = SdGrid::log_spaced();
  const auto f = upscale_flow_functions(r, g, cfg);
  CHECK(f.k_abs == doctest::Approx(0.5).epsilon(1e-14));
  const double pe = entry_pressure(0.5, cfg.k_sand, cfg.p_entry_sand);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double sd = g.values[i];
    CHECK(f.sat[i] == doctest::Approx(sd).epsilon(1e-12));
    CHECK(f.pc[i] == doctest::Approx(fine_scale_pc(sd, pe, 0.67)).epsilon(1e-14));
    CHECK(f.krw[i] == doctest::Approx(fine_scale_relperm(sd, 0.67).krw).epsilon(1e-10));
    CHECK(f.krnw[i] == doctest::Approx(fine_scale_relperm(sd, 0.67).krnw).epsilon(1e-10));
  }
}

TEST_CASE("two-facies realization matches the brute-force oracle") {
  FaciesModelConfig cfg;
  FaciesRealization r;
  r.heights = {120, 380};
  r.perms = {2.0, 0.01};
  const auto g = SdGrid::log_spaced();
  const auto f = upscale_flow_functions(r, g, cfg);
  const auto o = oracle::upscale(r.heights, r.perms, g.values, cfg.k_sand, cfg.p_entry_sand, cfg.bc_exponent);
  CHECK(oracle::rel_diff(f.k_abs, o.k) <= 1e-12);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(oracle::rel_diff(f.pc[i], o.pc[i]) <= 1e-12);
    CHECK(oracle::rel_diff(f.sat[i], o.sat[i]) <= 1e-12);
    CHECK(oracle::rel_diff(f.krw[i], o.krw[i]) <= 1e-12);
    CHECK(oracle::rel_diff(f.krnw[i], o.krnw[i]) <= 1e-12);
  }
  // Full wetting saturation at s_d = 1.
  CHECK(f.sat.back() == 1.0);
  CHECK(f.krw.back() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.krnw.back() == 0.0);
}

TEST_CASE("ensemble determinism and invariants") {
  FaciesModelConfig cfg;
  const auto g = SdGrid::log_spaced();
  const auto a = generate_ensemble(cfg, g, 200, 11);
  const auto b = generate_ensemble(cfg, g, 200, 11);
  REQUIRE(a.size() == 200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].k_abs == b[i].k_abs);
    CHECK(a[i].krw == b[i].krw);
    CHECK_NOTHROW(check_invariants(a[i]));
  }
  CHECK(generate_ensemble(cfg, g, 1, 3).size() == 1);
  CHECK_THROWS_AS(generate_ensemble(cfg, g, 0, 3), std::invalid_argument);
  SdGrid empty;
  FaciesRealization r;
  r.heights = {1.0};
  r.perms = {1.0};
  CHECK_THROWS_AS(upscale_flow_functions(r, empty, cfg), std::invalid_argument);
}

TEST_CASE("capillary pressure is perfectly correlated across s_d") {
  FaciesModelConfig cfg;
  cfg.k_clay = 1e-3;
  const auto g = SdGrid::log_spaced();
  const auto ens = generate_ensemble(cfg, g, 500, 5);
  std::vector<double> a, b;
  for (const auto& f : ens) {
    a.push_back(std::log(f.pc[0]));
    b.push_back(std::log(f.pc[13]));
  }
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb) - 1.0) <= 1e-12);
}

TEST_CASE("saturation sample paths cross for the tightest clay") {
  FaciesModelConfig cfg;
  cfg.k_clay = 1e-4;
  const auto g = SdGrid::log_spaced();
  const auto ens = generate_ensemble(cfg, g, 2000, 20240501);
  bool crossing = false;
  for (std::size_t m = 0; m < ens.size() && !crossing; ++m)
    for (std::size_t n = m + 1; n < ens.size() && !crossing; ++n) {
      bool below = false, above = false;
      for (std::size_t i = 0; i < g.size(); ++i) {
        below = below || ens[m].sat[i] < ens[n].sat[i];
        above = above || ens[m].sat[i] > ens[n].sat[i];
      }
      crossing = below && above;
    }
  CHECK(crossing);
}
