#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "faultflow/facies.hpp"

using namespace faultflow;

TEST_CASE("sgr_to_perm endpoints and geometric midpoint") {
  CHECK(sgr_to_perm(0.0, 1e-4, 1000.0) == 1000.0);
  CHECK(sgr_to_perm(100.0, 1e-4, 1000.0) == 1e-4);
  CHECK(sgr_to_perm(50.0, 1e-4, 1000.0) == doctest::Approx(std::sqrt(1e-4 * 1000.0)).epsilon(1e-12));
  CHECK_THROWS_AS(sgr_to_perm(10.0, 0.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(sgr_to_perm(10.0, 1e-4, -1.0), std::invalid_argument);
}

TEST_CASE("sgr_to_perm is log-linear in SGR") {
  const double k1 = sgr_to_perm(20.0, 1e-3, 1000.0);
  const double k2 = sgr_to_perm(40.0, 1e-3, 1000.0);
  const double k3 = sgr_to_perm(60.0, 1e-3, 1000.0);
  CHECK(std::log(k2) - std::log(k1) == doctest::Approx(std::log(k3) - std::log(k2)).epsilon(1e-12));
}

TEST_CASE("harmonic upscaling") {
  FaciesRealization r;
  r.heights = {1, 1};
  r.perms = {1, 100};
  CHECK(upscale_permeability(r) == doctest::Approx(200.0 / 101.0).epsilon(1e-12));
  r.heights = {1, 3};
  r.perms = {10, 10};
  CHECK(upscale_permeability(r) == doctest::Approx(10.0).epsilon(1e-14));
  r.heights = {2, 5, 3};
  r.perms = {7, 7, 7};
  CHECK(upscale_permeability(r) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(upscale_permeability_arithmetic(r) == doctest::Approx(7.0).epsilon(1e-14));
  r.perms = {7, 0, 7};
  CHECK_THROWS_AS(upscale_permeability(r), std::invalid_argument);
}

TEST_CASE("flat profiles without noise hit the permeability endpoints") {
  FaciesModelConfig cfg;
  cfg.sgr_std = 0.0;
  cfg.sgr_profile = SgrProfile({700.0}, {100.0});
  Rng rng(3);
  for (double k : sample_realization(cfg, rng).perms) CHECK(k == cfg.k_clay);
  cfg.sgr_profile = SgrProfile({700.0}, {0.0});
  for (double k : sample_realization(cfg, rng).perms) CHECK(k == cfg.k_sand);
}

TEST_CASE("realizations partition the fault height") {
  FaciesModelConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto r = sample_realization(cfg, rng);
    REQUIRE(r.heights.size() == 20);
    const double h = std::accumulate(r.heights.begin(), r.heights.end(), 0.0);
    CHECK(std::abs(h - 500.0) <= 1e-9 * 500.0);
    for (double v : r.heights) CHECK(v > 0.0);
    for (double s : r.sgr) {
      CHECK(s >= 0.0);
      CHECK(s <= 100.0);
    }
  }
}

TEST_CASE("same seed gives the same realization") {
  FaciesModelConfig cfg;
  Rng a(42), b(42);
  const auto ra = sample_realization(cfg, a);
  const auto rb = sample_realization(cfg, b);
  CHECK(ra.heights == rb.heights);
  CHECK(ra.perms == rb.perms);
}

TEST_CASE("SGR profile interpolation and validation") {
  const auto p = SgrProfile::default_profile();
  CHECK(p.mean_at(500.0) == 25.0);
  CHECK(p.mean_at(750.0) == doctest::Approx(28.5));
  CHECK(p.mean_at(2000.0) == 70.0);
  CHECK_THROWS_AS(SgrProfile({1.0, 1.0}, {10.0, 20.0}), std::invalid_argument);
  CHECK_THROWS_AS(SgrProfile({1.0}, {120.0}), std::invalid_argument);
  const auto f = SgrProfile::from_csv(std::string(FAULTFLOW_TEST_DATA) + "/sgr_profile_default.csv");
  CHECK(f.depths().size() >= 2);
  CHECK_THROWS(SgrProfile::from_csv("/nonexistent/profile.csv"));
}

TEST_CASE("facies config validation") {
  FaciesModelConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.k_clay = 2000.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.depth_bottom = 600.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("lognormal fit") {
  const std::vector<double> same{3.0, 3.0, 3.0};
  auto f = fit_lognormal(same);
  CHECK(f.mu == doctest::Approx(std::log(3.0)));
  CHECK(f.sigma == doctest::Approx(0.0));
  const std::vector<double> two{std::exp(1.0), std::exp(3.0)};
  f = fit_lognormal(two);
  CHECK(f.mu == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.sigma == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.quantile(0.5) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(f.cdf(f.median()) == doctest::Approx(0.5));
  const std::vector<double> bad{1.0, -1.0};
  CHECK_THROWS_AS(fit_lognormal(bad), std::invalid_argument);

  const auto m = lognormal_from_moments(50.0, 100.0);
  CHECK(m.mean() == doctest::Approx(50.0).epsilon(1e-12));
  const double var = (std::exp(m.sigma * m.sigma) - 1.0) * m.mean() * m.mean();
  CHECK(std::sqrt(var) == doctest::Approx(100.0).epsilon(1e-12));
}
