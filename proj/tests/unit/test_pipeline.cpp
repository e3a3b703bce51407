#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "faultflow/io.hpp"
#include "faultflow/pipeline.hpp"

using namespace faultflow;

namespace {

const CaseArtifacts& small_artifacts() {
  static const auto a = [] {
    ArtifactOptions o;
    o.n_ref = 400;
    o.n_troll = 400;
    return build_artifacts(1e-3, o);
  }();
  return a;
}

}  // namespace

TEST_CASE("case table") {
  const std::size_t dims[] = {1, 7, 5, 6, 11, 12};
  for (int c = 1; c <= 6; ++c) CHECK(case_dimensions(c) == dims[c - 1]);
  CHECK(parse_case("IV") == 4);
  CHECK(parse_case("2") == 2);
  CHECK(case_name(6) == "VI");
  CHECK_THROWS_AS(parse_case("VII"), std::invalid_argument);
  CHECK_THROWS_AS(case_dimensions(0), std::invalid_argument);
}

TEST_CASE("artifacts") {
  const auto& a = small_artifacts();
  REQUIRE(a.fault_k);
  REQUIRE(a.troll_k);
  CHECK(a.vine.dim() == 5);
  CHECK(a.vine.marginals().size() == 5);
  CHECK(a.reduced.n_ref() == 400);
  CHECK(a.layers[0].mean() == doctest::Approx(1000.0));
  // Arithmetic averaging over the deep segment is far more permeable than the fault.
  CHECK(a.troll_k->median() > a.fault_k->median());
}

TEST_CASE("case I at the centre uses the median fault and reference curves") {
  const auto& a = small_artifacts();
  const CaseModel m(1, a);
  const std::vector<double> u{0.5};
  const auto in = m.inputs(u);
  CHECK(in.fault.k_abs == doctest::Approx(a.fault_k->median()).epsilon(1e-12));
  CHECK(in.fault.sat == a.reference.sat);
  CHECK(in.fault.pc == a.reference.pc);
  for (int i = 0; i < 6; ++i) CHECK(in.layer_perms[i] == doctest::Approx(a.layers[i].mean()));
  CHECK(in.k_troll == doctest::Approx(a.troll_k->mean()));
  CHECK(m.spec().dim_names == std::vector<std::string>{"fault_k"});
}

TEST_CASE("case VI routes every dimension") {
  const auto& a = small_artifacts();
  const CaseModel m(6, a);
  REQUIRE(m.spec().n_dims == 12);
  std::vector<double> u(12, 0.5);
  const auto base = m.inputs(u);
  u[6] = 0.9;  // second layer, after the five copula inputs
  const auto moved = m.inputs(u);
  CHECK(moved.layer_perms[1] > base.layer_perms[1]);
  CHECK(moved.layer_perms[0] == base.layer_perms[0]);
  CHECK(moved.k_troll == base.k_troll);
  u[11] = 0.1;
  CHECK(m.inputs(u).k_troll < base.k_troll);
  u[0] = 0.95;
  CHECK(m.inputs(u).fault.k_abs > base.fault.k_abs);
  CHECK(m.spec().dim_names.back() == "troll_k");
}

TEST_CASE("missing artifacts are named") {
  auto a = small_artifacts();
  a.fault_k.reset();
  CHECK_THROWS_WITH(CaseModel(1, a), doctest::Contains("fault_k"));
  CHECK_NOTHROW(CaseModel(3, a));
  a = small_artifacts();
  a.troll_k.reset();
  CHECK_THROWS_WITH(CaseModel(4, a), doctest::Contains("troll_k"));
  a = small_artifacts();
  a.vine = VineModel();
  CHECK_THROWS_WITH(CaseModel(5, a), doctest::Contains("vine"));
  a = small_artifacts();
  a.layers_set = false;
  CHECK_THROWS_WITH(CaseModel(2, a), doctest::Contains("layers"));
}

TEST_CASE("input checks") {
  const CaseModel m(1, small_artifacts());
  const std::vector<double> two{0.5, 0.5};
  CHECK_THROWS_AS(m.inputs(two), std::invalid_argument);
  const std::vector<double> edge{1.0};
  CHECK_THROWS_AS(m.inputs(edge), std::invalid_argument);
}

TEST_CASE("percentiles and histograms") {
  const std::vector<double> same(10, 4.0);
  const auto p = percentiles(same);
  CHECK(p.p10 == 4.0);
  CHECK(p.p50 == 4.0);
  CHECK(p.p90 == 4.0);
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto h = make_histogram(v, 3);
  CHECK(h.edges.size() == 4);
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0.0) == 10.0);
  CHECK(percentiles(v).p50 == doctest::Approx(5.5));
}

TEST_CASE("seeded studies repeat exactly") {
  const CaseModel m(1, small_artifacts());
  StudyOptions o;
  o.budget = 60;
  o.batch = 20;
  o.seed = 3;
  const auto a = run_study(m, o);
  const auto b = run_study(m, o);
  CHECK(io::study_summary_json(a) == io::study_summary_json(b));
  CHECK(io::samples_csv(a) == io::samples_csv(b));
  CHECK(a.max_mass_balance_error <= 1e-6);
  CHECK(a.samples.size() == 60);

  o.method = StudyMethod::adss;
  const auto c = run_study(m, o);
  const double w = std::accumulate(c.weights.begin(), c.weights.end(), 0.0);
  CHECK(w == doctest::Approx(1.0));
  CHECK(c.pct.p10 <= c.pct.p50);
  CHECK(c.pct.p50 <= c.pct.p90);

  o.budget = 10;
  CHECK_THROWS_AS(run_study(m, o), std::invalid_argument);
}

TEST_CASE("study methods parse") {
  CHECK(study_method_from_string("adss") == StudyMethod::adss);
  CHECK(to_string(StudyMethod::smc) == "smc");
  CHECK_THROWS_AS(study_method_from_string("mcmc"), std::invalid_argument);
}
