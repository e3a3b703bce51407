#include "faultflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "faultflow/parallel.hpp"
#include "faultflow/random.hpp"
#include "faultflow/stats.hpp"

namespace faultflow {

namespace {

constexpr std::array<std::size_t, 6> kDims{1, 7, 5, 6, 11, 12};

void check_case(int id) {
  if (id < 1 || id > 6) throw std::invalid_argument("case id must be in 1..6, got " + std::to_string(id));
}

bool uses_copula(int id) { return id >= 3; }
bool uses_layers(int id) { return id == 2 || id == 5 || id == 6; }
bool uses_troll(int id) { return id == 4 || id == 6; }

}  // namespace

std::size_t case_dimensions(int case_id) {
  check_case(case_id);
  return kDims[static_cast<std::size_t>(case_id - 1)];
}

std::string case_name(int case_id) {
  check_case(case_id);
  static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
  return names[case_id - 1];
}

int parse_case(const std::string& s) {
  static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
  for (int i = 0; i < 6; ++i)
    if (s == names[i] || s == std::to_string(i + 1)) return i + 1;
  throw std::invalid_argument("unknown case '" + s + "' (expected I..VI)");
}

CaseArtifacts build_artifacts(double k_clay, const ArtifactOptions& opts) {
  FaciesModelConfig fc = opts.facies;
  fc.k_clay = k_clay;
  const SdGrid grid = SdGrid::log_spaced(opts.grid_points, opts.grid_lower);
  return build_artifacts(k_clay, generate_ensemble(fc, grid, opts.n_ref, opts.seed), grid, opts);
}

CaseArtifacts build_artifacts(double k_clay, const std::vector<FlowFunctionSample>& ensemble, const SdGrid& grid,
                              const ArtifactOptions& opts) {
  if (ensemble.size() < 2) throw std::invalid_argument("build_artifacts: ensemble needs at least two members");
  CaseArtifacts a;
  a.k_clay = k_clay;
  const auto k = ensemble_k(ensemble);
  a.fault_k = fit_lognormal(k);
  a.reference = ensemble_mean(ensemble);
  a.reduced = fit_reduced_model(ensemble, grid);
  std::vector<std::vector<double>> rows;
  rows.reserve(a.reduced.y_ref.size());
  for (const auto& y : a.reduced.y_ref) rows.emplace_back(y.begin(), y.end());
  a.vine = fit_vine_to_data(rows, opts.vine);

  // Troll connection: arithmetic facies average over the deeper profile segment.
  FaciesModelConfig tc = opts.facies;
  tc.k_clay = k_clay;
  tc.depth_top = opts.troll_top;
  tc.depth_bottom = opts.troll_bottom;
  tc.validate();
  std::vector<double> kt(opts.n_troll);
  const std::uint64_t troll_seed = splitmix64(opts.seed ^ 0x7E011ULL);
  parallel_for(kt.size(), [&](std::size_t i) {
    Rng rng = substream(troll_seed, i);
    kt[i] = upscale_permeability_arithmetic(sample_realization(tc, rng));
  });
  a.troll_k = fit_lognormal(kt);

  for (std::size_t i = 0; i < 6; ++i) a.layers[i] = lognormal_from_moments(opts.layer_means[i], opts.layer_std);
  a.layers_set = true;
  return a;
}

CaseModel::CaseModel(int case_id, const CaseArtifacts& artifacts, ProxyConfig proxy)
    : art_(artifacts), proxy_(std::move(proxy)) {
  check_case(case_id);
  proxy_.validate();
  spec_.case_id = case_id;
  spec_.k_clay = artifacts.k_clay;
  spec_.n_dims = case_dimensions(case_id);

  if (!art_.troll_k) throw std::invalid_argument("case " + case_name(case_id) + ": missing artifact 'troll_k'");
  k_troll_ref_ = art_.troll_k->mean();
  if (uses_copula(case_id)) {
    if (art_.reduced.empty()) throw std::invalid_argument("case " + case_name(case_id) + ": missing artifact 'reduced_model'");
    if (art_.vine.dim() != 5) throw std::invalid_argument("case " + case_name(case_id) + ": missing artifact 'vine'");
    if (art_.vine.marginals().size() != 5)
      throw std::invalid_argument("case " + case_name(case_id) + ": vine has no marginals");
    for (int i = 1; i <= 5; ++i) spec_.dim_names.push_back("copula_u" + std::to_string(i));
  } else {
    if (!art_.fault_k) throw std::invalid_argument("case " + case_name(case_id) + ": missing artifact 'fault_k'");
    if (art_.reference.sat.empty())
      throw std::invalid_argument("case " + case_name(case_id) + ": missing artifact 'reference_flow_functions'");
    spec_.dim_names.push_back("fault_k");
  }
  if (uses_layers(case_id)) {
    if (!art_.layers_set) throw std::invalid_argument("case " + case_name(case_id) + ": missing artifact 'layers'");
    for (int i = 1; i <= 6; ++i) spec_.dim_names.push_back("layer" + std::to_string(i) + "_k");
  }
  if (uses_troll(case_id)) spec_.dim_names.push_back("troll_k");
  if (spec_.dim_names.size() != spec_.n_dims) throw std::logic_error("case dimension bookkeeping mismatch");
}

ProxyInputs CaseModel::inputs(std::span<const double> u) const {
  if (u.size() != spec_.n_dims)
    throw std::invalid_argument("case " + case_name(spec_.case_id) + " expects " + std::to_string(spec_.n_dims) +
                                " inputs, got " + std::to_string(u.size()));
  for (double x : u)
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("case inputs must lie in (0,1)");
  ProxyInputs in;
  std::size_t pos = 0;
  if (uses_copula(spec_.case_id)) {
    const auto y = art_.vine.sample_y(u.subspan(0, 5));
    in.fault = evaluate_flow_functions({y[0], y[1], y[2], y[3], y[4]}, art_.reduced);
    pos = 5;
  } else {
    in.fault = art_.reference;
    in.fault.k_abs = art_.fault_k->quantile(u[0]);
    pos = 1;
  }
  if (uses_layers(spec_.case_id)) {
    for (std::size_t i = 0; i < 6; ++i) in.layer_perms[i] = art_.layers[i].quantile(u[pos + i]);
    pos += 6;
  } else if (art_.layers_set) {
    for (std::size_t i = 0; i < 6; ++i) in.layer_perms[i] = art_.layers[i].mean();
  } else {
    in.layer_perms = proxy_.layer_perms;
  }
  in.k_troll = uses_troll(spec_.case_id) ? art_.troll_k->quantile(u[pos]) : k_troll_ref_;
  return in;
}

SimResult CaseModel::simulate(std::span<const double> u) const {
  const ProxyInputs in = inputs(u);
  ProxyConfig cfg = proxy_;
  cfg.layer_perms = in.layer_perms;
  return faultflow::simulate(cfg, in.fault, in.k_troll);
}

double CaseModel::leakage(std::span<const double> u) const { return simulate(u).leaked_total(); }

Histogram make_histogram(std::span<const double> values, std::size_t bins, std::span<const double> weights) {
  if (values.empty()) throw std::invalid_argument("make_histogram: no values");
  if (bins == 0) throw std::invalid_argument("make_histogram: bins must be positive");
  if (!weights.empty() && weights.size() != values.size())
    throw std::invalid_argument("make_histogram: weights size mismatch");
  Histogram h;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  h.lower = *mn;
  h.upper = *mx;
  h.edges.resize(bins + 1);
  const double width = (h.upper - h.lower) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = h.lower + width * static_cast<double>(i);
  h.edges[bins] = h.upper;
  h.counts.assign(bins, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t b = 0;
    if (width > 0.0)
      b = std::min(bins - 1, static_cast<std::size_t>(std::floor((values[i] - h.lower) / width)));
    h.counts[b] += weights.empty() ? 1.0 : weights[i];
  }
  return h;
}

Percentiles percentiles(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw std::invalid_argument("percentiles: no values");
  Percentiles p;
  if (weights.empty()) {
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    p.p10 = stats::percentile_sorted(s, 0.1);
    p.p50 = stats::percentile_sorted(s, 0.5);
    p.p90 = stats::percentile_sorted(s, 0.9);
  } else {
    p.p10 = stats::weighted_percentile(values, weights, 0.1);
    p.p50 = stats::weighted_percentile(values, weights, 0.5);
    p.p90 = stats::weighted_percentile(values, weights, 0.9);
  }
  return p;
}

std::string to_string(StudyMethod m) { return m == StudyMethod::smc ? "smc" : "adss"; }

StudyMethod study_method_from_string(const std::string& s) {
  if (s == "smc") return StudyMethod::smc;
  if (s == "adss") return StudyMethod::adss;
  throw std::invalid_argument("unknown study method '" + s + "' (expected smc or adss)");
}

std::vector<double> sample_weights(const Stratification& s, std::size_t n_log) {
  std::vector<double> w(n_log, 0.0);
  for (const auto& st : s.strata)
    for (std::size_t m : st.members) {
      if (m >= n_log) throw std::out_of_range("sample_weights: member index outside the log");
      w[m] = st.p / static_cast<double>(st.n_samples);
    }
  return w;
}

namespace {

void atomic_max(std::atomic<double>& a, double v) {
  double cur = a.load();
  while (v > cur && !a.compare_exchange_weak(cur, v)) {
  }
}

Integrand tracked(const CaseModel& model, std::atomic<double>& mb) {
  return [&model, &mb](std::span<const double> u) {
    const SimResult r = model.simulate(u);
    atomic_max(mb, r.max_mass_balance_error());
    return r.leaked_total();
  };
}

void fill_distribution(StudyReport& rep, const Stratification& strat, bool weighted) {
  std::vector<double> q;
  q.reserve(rep.samples.size());
  for (const auto& e : rep.samples) q.push_back(e.q);
  if (weighted) rep.weights = sample_weights(strat, q.size());
  else rep.weights.assign(q.size(), 1.0 / static_cast<double>(q.size()));
  rep.histogram = make_histogram(q, rep.options.bins, weighted ? std::span<const double>(rep.weights) : std::span<const double>{});
  rep.pct = percentiles(q, weighted ? std::span<const double>(rep.weights) : std::span<const double>{});
  rep.n_strata = strat.strata.size();
  rep.stratification = strat;
}

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t k) { return splitmix64(seed ^ splitmix64(k + 1)); }

}  // namespace

StudyReport run_study(const CaseModel& model, const StudyOptions& opts) {
  if (opts.budget < opts.batch) throw std::invalid_argument("run_study: budget is smaller than the batch size");
  if (opts.repeats == 0) throw std::invalid_argument("run_study: repeats must be positive");
  StudyReport rep;
  rep.spec = model.spec();
  rep.options = opts;
  std::atomic<double> mb{0.0};
  const Integrand f = tracked(model, mb);
  const std::size_t dims = model.spec().n_dims;

  if (opts.method == StudyMethod::smc) {
    for (std::size_t k = 0; k < opts.repeats; ++k) {
      auto r = run_smc(f, dims, opts.budget, k == 0 ? opts.seed : repeat_seed(opts.seed, k));
      rep.estimates.push_back(r.estimate);
      if (k == 0) {
        rep.estimate = r.estimate;
        rep.variance = r.variance;
        rep.samples = std::move(r.log);
        fill_distribution(rep, r.stratification, false);
      }
    }
  } else {
    AdaptiveOptions ao{opts.alpha, opts.batch, true};
    for (std::size_t k = 0; k < opts.repeats; ++k) {
      auto r = run_adaptive(f, dims, opts.budget, ao, k == 0 ? opts.seed : repeat_seed(opts.seed, k));
      rep.estimates.push_back(r.estimate);
      if (k == 0) {
        rep.estimate = r.estimate;
        rep.variance = r.variance;
        rep.samples = std::move(r.log);
        fill_distribution(rep, r.stratification, true);
      }
    }
  }
  if (rep.estimates.size() > 1) rep.empirical_variance = stats::sample_variance(rep.estimates);
  rep.max_mass_balance_error = mb.load();
  return rep;
}

StudyReport run_speedup_study(const CaseModel& model, const StudyOptions& opts) {
  if (opts.budget < opts.batch) throw std::invalid_argument("run_speedup_study: budget is smaller than the batch size");
  StudyReport rep;
  rep.spec = model.spec();
  rep.options = opts;
  rep.options.method = StudyMethod::adss;
  std::atomic<double> mb{0.0};
  const Integrand f = tracked(model, mb);
  const auto s = measure_speedup(f, model.spec().n_dims, opts.budget, opts.repeats, opts.seed,
                                 AdaptiveOptions{opts.alpha, opts.batch, true});
  rep.estimate = s.mean_adaptive;
  rep.variance = s.nominal_variance;
  rep.empirical_variance = s.var_adaptive;
  rep.estimates = s.estimates;
  rep.samples = s.smc.log;
  fill_distribution(rep, s.smc.stratification, false);
  rep.speedup = s.speedup;
  rep.smc_variance = s.var_smc;
  rep.max_mass_balance_error = mb.load();
  return rep;
}

}  // namespace faultflow
