#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "faultflow/random.hpp"
#include "faultflow/reduced_model.hpp"
#include "faultflow/vine.hpp"
#include "oracle/gaussian_copula.hpp"

using namespace faultflow;

namespace {

std::vector<std::vector<double>> draw(const VineModel& m, std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = substream(seed, i);
    std::vector<double> w(m.dim());
    for (double& v : w) v = uniform01(rng);
    rows[i] = m.inverse_rosenblatt(w);
  }
  return rows;
}

}  // namespace

TEST_CASE("independence vine") {
  const auto m = VineModel::independence(4);
  CHECK(m.edge_count() == 6);
  const std::vector<double> u{0.1, 0.7, 0.4, 0.95};
  CHECK(m.density(u) == doctest::Approx(1.0));
  const auto r = m.rosenblatt(u);
  const auto back = m.inverse_rosenblatt(u);
  for (int i = 0; i < 4; ++i) {
    CHECK(r[i] == doctest::Approx(u[i]).epsilon(1e-14));
    CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-14));
  }
}

TEST_CASE("independence vine maps the centre to marginal medians") {
  std::vector<std::vector<double>> y;
  Rng rng(8);
  for (int i = 0; i < 301; ++i) y.push_back({uniform01(rng) * 10.0, std::exp(uniform01(rng))});
  std::vector<double> c0, c1;
  for (const auto& r : y) c0.push_back(r[0]), c1.push_back(r[1]);
  const std::vector<stats::EmpiricalDistribution> marg{stats::EmpiricalDistribution(c0),
                                                       stats::EmpiricalDistribution(c1)};
  const VineModel m(2, VineModel::independence(2).trees(), marg);
  const std::vector<double> half{0.5, 0.5};
  const auto s = m.sample_y(half);
  CHECK(s[0] == doctest::Approx(marg[0].median()));
  CHECK(s[1] == doctest::Approx(marg[1].median()));
  CHECK(m.sample_y(half) == s);
}

TEST_CASE("Gaussian D-vine density matches the trivariate Gaussian copula") {
  const oracle::GaussianDVine3 g{0.8, 0.6, 0.3};
  const auto m = g.model();
  const auto R = g.correlation();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        const std::array<double, 3> u{(i + 0.5) / 10, (j + 0.5) / 10, (k + 0.5) / 10};
        const double ref = oracle::gaussian_copula_density3(R, u);
        worst = std::max(worst, std::abs(m.density(u) - ref) / ref);
      }
  CHECK(worst <= 1e-6);
}

TEST_CASE("Rosenblatt round trip") {
  const auto m = oracle::GaussianDVine3{0.8, -0.6, 0.3}.model();
  double worst = 0.0;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> u{uniform01(rng), uniform01(rng), uniform01(rng)};
    const auto back = m.rosenblatt(m.inverse_rosenblatt(u));
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(back[j] - u[j]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("structure selection follows the strongest pairs") {
  const auto truth = oracle::GaussianDVine3{0.8, 0.6, 0.3}.model();
  const auto rows = draw(truth, 4000, 5);
  const auto tau = kendall_matrix(rows);
  const auto fit = fit_vine(rows);
  REQUIRE(fit.trees().size() == 2);
  REQUIRE(fit.trees()[0].size() == 2);
  std::vector<std::pair<double, std::pair<int, int>>> pairs;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) pairs.push_back({std::abs(tau[i][j]), {i, j}});
  std::sort(pairs.rbegin(), pairs.rend());
  for (const auto& e : fit.trees()[0]) {
    const std::pair<int, int> p{std::min(e.v1, e.v2), std::max(e.v1, e.v2)};
    CHECK((p == pairs[0].second || p == pairs[1].second));
  }
  // Dependence is reproduced by sampling from the fit.
  const auto again = kendall_matrix(draw(fit, 4000, 6));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(again[i][j] - tau[i][j]) <= 0.05);
}

TEST_CASE("two dimensions give a single pair copula") {
  const auto rows = draw(oracle::GaussianDVine3{0.5, 0.0, 0.0}.model(), 1000, 3);
  std::vector<std::vector<double>> two;
  for (const auto& r : rows) two.push_back({r[0], r[1]});
  const auto fit = fit_vine(two);
  CHECK(fit.edge_count() == 1);
}

TEST_CASE("invalid structures are rejected") {
  std::vector<std::vector<VineEdge>> trees(1);
  trees[0].push_back({0, 1, {}, -1, -1, BivariateCopula::independence()});
  CHECK_THROWS_AS(VineModel(3, trees), std::invalid_argument);
  std::vector<std::vector<VineEdge>> bad(2);
  bad[0].push_back({0, 1, {}, -1, -1, {}});
  bad[0].push_back({0, 1, {}, -1, -1, {}});
  bad[1].push_back({0, 2, {1}, 0, 1, {}});
  CHECK_THROWS_AS(VineModel(3, bad), std::invalid_argument);
  CHECK_THROWS_AS(fit_vine({}), std::invalid_argument);
}

TEST_CASE("fitted vine on Y is no worse than an all-Gaussian D-vine") {
  FaciesModelConfig cfg;
  cfg.k_clay = 1e-3;
  const auto g = SdGrid::log_spaced();
  const auto fit = fit_reduced_model(generate_ensemble(cfg, g, 2000, 3), g);
  std::vector<std::vector<double>> cols(5), u(fit.n_ref(), std::vector<double>(5));
  for (const auto& r : fit.y_ref)
    for (int j = 0; j < 5; ++j) cols[j].push_back(r[j]);
  for (int j = 0; j < 5; ++j) {
    const auto po = stats::pseudo_observations(cols[j]);
    for (std::size_t i = 0; i < po.size(); ++i) u[i][j] = po[i];
  }
  const auto full = fit_vine(u);
  VineFitOptions base;
  base.pair = BivariateFitOptions::gaussian_only();
  base.dvine = true;
  const auto gauss = fit_vine(u, base);
  CHECK(full.loglik(u) >= gauss.loglik(u));

  VineFitOptions plain;
  plain.refine_sweeps = 0;
  const auto greedy = fit_vine(u, plain);
  auto aic = [&](const VineModel& v) {
    int k = 0;
    for (const auto& t : v.trees())
      for (const auto& e : t) k += e.copula.n_params();
    return 2.0 * k - 2.0 * v.loglik(u);
  };
  CHECK(aic(full) <= aic(greedy));
  for (std::size_t t = 0; t < full.trees().size(); ++t)
    for (std::size_t e = 0; e < full.trees()[t].size(); ++e) {
      CHECK(full.trees()[t][e].v1 == greedy.trees()[t][e].v1);
      CHECK(full.trees()[t][e].v2 == greedy.trees()[t][e].v2);
    }
}
