#include "faultflow/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "faultflow/parallel.hpp"
#include "faultflow/random.hpp"

namespace faultflow {

void Stratum::add(double q) {
  ++n_samples;
  const double d = q - mean;
  mean += d / static_cast<double>(n_samples);
  m2 += d * (q - mean);
}

double Stratum::variance() const {
  if (n_samples < 2) return 0.0;
  return std::max(0.0, m2 / static_cast<double>(n_samples - 1));
}

double Stratum::sigma() const { return std::sqrt(variance()); }

bool Stratum::contains(std::span<const double> u) const {
  if (u.size() != low.size()) return false;
  for (std::size_t d = 0; d < u.size(); ++d) {
    if (u[d] < low[d]) return false;
    if (u[d] >= high[d] && !(high[d] == 1.0 && u[d] <= 1.0)) return false;
  }
  return true;
}

Stratification Stratification::whole(std::size_t dims, double alpha, std::size_t batch) {
  return grid(dims, 1, alpha, batch);
}

Stratification Stratification::grid(std::size_t dims, std::size_t per_dim, double alpha, std::size_t batch) {
  if (dims == 0 || per_dim == 0) throw std::invalid_argument("Stratification: dims and per_dim must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("Stratification: alpha must lie in [0,1]");
  if (batch == 0) throw std::invalid_argument("Stratification: batch must be positive");
  Stratification s;
  s.alpha = alpha;
  s.batch = batch;
  std::size_t count = 1;
  for (std::size_t d = 0; d < dims; ++d) count *= per_dim;
  const double w = 1.0 / static_cast<double>(per_dim);
  for (std::size_t c = 0; c < count; ++c) {
    Stratum st;
    st.low.resize(dims);
    st.high.resize(dims);
    std::size_t rest = c;
    for (std::size_t d = 0; d < dims; ++d) {
      const std::size_t k = rest % per_dim;
      rest /= per_dim;
      st.low[d] = static_cast<double>(k) * w;
      st.high[d] = k + 1 == per_dim ? 1.0 : static_cast<double>(k + 1) * w;
    }
    st.p = 1.0;
    for (std::size_t d = 0; d < dims; ++d) st.p *= st.high[d] - st.low[d];
    s.strata.push_back(std::move(st));
  }
  return s;
}

void Stratification::validate() const {
  if (strata.empty()) throw std::logic_error("stratification is empty");
  const std::size_t n = dims();
  double total = 0.0;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const Stratum& a = strata[i];
    if (a.low.size() != n || a.high.size() != n) throw std::logic_error("stratum dimension mismatch");
    double vol = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
      if (!(a.low[d] >= 0.0 && a.low[d] < a.high[d] && a.high[d] <= 1.0))
        throw std::logic_error("stratum " + std::to_string(i) + " has invalid bounds");
      vol *= a.high[d] - a.low[d];
    }
    if (std::abs(vol - a.p) > 1e-12) throw std::logic_error("stratum " + std::to_string(i) + " volume mismatch");
    total += a.p;
    for (std::size_t j = i + 1; j < strata.size(); ++j) {
      const Stratum& b = strata[j];
      bool overlap = true;
      for (std::size_t d = 0; d < n && overlap; ++d)
        overlap = a.low[d] < b.high[d] && b.low[d] < a.high[d];
      if (overlap)
        throw std::logic_error("strata " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::logic_error("stratum volumes do not sum to one");
}

void Stratification::add_sample(std::size_t s, std::vector<double> point, double q) {
  if (s >= strata.size()) throw std::out_of_range("add_sample: stratum index out of range");
  strata[s].add(q);
  strata[s].members.push_back(samples.size());
  samples.push_back({std::move(point), q});
}

std::vector<double> hybrid_targets(const Stratification& s, std::size_t n_new) {
  const double n = static_cast<double>(n_new);
  double p_known = 0.0, ps_known = 0.0;
  for (const auto& st : s.strata)
    if (st.has_sigma()) {
      p_known += st.p;
      ps_known += st.p * st.sigma();
    }
  std::vector<double> t(s.strata.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Stratum& st = s.strata[i];
    const double prop = st.p;
    double opt = st.p;
    if (st.has_sigma() && ps_known > 0.0) opt = p_known * st.p * st.sigma() / ps_known;
    t[i] = n * ((1.0 - s.alpha) * prop + s.alpha * opt);
  }
  return t;
}

std::vector<std::size_t> round_largest_remainder(const std::vector<double>& targets, std::size_t n) {
  std::vector<std::size_t> out(targets.size(), 0);
  if (targets.empty()) return out;
  const double total = std::accumulate(targets.begin(), targets.end(), 0.0);
  std::vector<double> scaled(targets.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0.0) throw std::invalid_argument("round_largest_remainder: negative target");
    scaled[i] = total > 0.0 ? targets[i] * static_cast<double>(n) / total : static_cast<double>(n) / targets.size();
    out[i] = static_cast<std::size_t>(std::floor(scaled[i]));
    assigned += out[i];
  }
  // Guard against floor overshoot from rounding in the rescale.
  while (assigned > n) {
    auto it = std::max_element(out.begin(), out.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> idx(targets.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ra = scaled[a] - std::floor(scaled[a]), rb = scaled[b] - std::floor(scaled[b]);
    if (ra != rb) return ra > rb;
    return scaled[a] > scaled[b];
  });
  for (std::size_t k = 0; assigned < n; k = (k + 1) % idx.size()) {
    ++out[idx[k]];
    ++assigned;
  }
  return out;
}

std::vector<std::size_t> allocate_hybrid(const Stratification& s, std::size_t n_new) {
  const std::size_t m = s.strata.size();
  std::vector<std::size_t> seed(m, 0);
  std::size_t need = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (s.strata[i].n_samples < 2) {
      seed[i] = 2 - s.strata[i].n_samples;
      need += seed[i];
    }
  if (need > n_new) {
    std::vector<double> t(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (seed[i] > 0) t[i] = s.strata[i].p;
    return round_largest_remainder(t, n_new);
  }
  auto counts = round_largest_remainder(hybrid_targets(s, n_new - need), n_new - need);
  for (std::size_t i = 0; i < m; ++i) counts[i] += seed[i];
  return counts;
}

double estimate(const Stratification& s) {
  double q = 0.0;
  for (std::size_t i = 0; i < s.strata.size(); ++i) {
    if (s.strata[i].n_samples == 0) throw std::logic_error("estimate: stratum " + std::to_string(i) + " has no samples");
    q += s.strata[i].p * s.strata[i].mean;
  }
  return q;
}

double estimator_variance(const Stratification& s, std::size_t n_total) {
  if (n_total == 0) throw std::invalid_argument("estimator_variance: zero sample count");
  double ps = 0.0;
  for (std::size_t i = 0; i < s.strata.size(); ++i) {
    if (!s.strata[i].has_sigma())
      throw std::logic_error("estimator_variance: stratum " + std::to_string(i) + " has fewer than two samples");
    ps += s.strata[i].p * s.strata[i].sigma();
  }
  if (ps == 0.0) return 0.0;
  double v = 0.0;
  for (const auto& st : s.strata) {
    const double sig = st.sigma();
    v += st.p * sig * sig / (1.0 + s.alpha * (sig / ps - 1.0));
  }
  return v / static_cast<double>(n_total);
}

namespace {

double sigma_of(const std::vector<double>& q) {
  if (q.size() < 2) return 0.0;
  Stratum t;
  for (double v : q) t.add(v);
  return t.sigma();
}

}  // namespace

Stratification adapt(const Stratification& s, int* split_dim) {
  if (split_dim) *split_dim = -1;
  double best = 0.0;
  std::size_t best_s = 0, best_d = 0;
  bool found = false;
  const std::size_t n = s.dims();
  std::vector<double> lo_q, hi_q;
  for (std::size_t i = 0; i < s.strata.size(); ++i) {
    const Stratum& st = s.strata[i];
    if (st.n_samples < 4) continue;
    const double parent = st.p * st.sigma();
    for (std::size_t d = 0; d < n; ++d) {
      const double mid = 0.5 * (st.low[d] + st.high[d]);
      lo_q.clear();
      hi_q.clear();
      for (std::size_t m : st.members) (s.samples[m].point[d] < mid ? lo_q : hi_q).push_back(s.samples[m].q);
      if (lo_q.size() < 2 || hi_q.size() < 2) continue;
      const double score = parent - 0.5 * st.p * (sigma_of(lo_q) + sigma_of(hi_q));
      if (score > best) {
        best = score;
        best_s = i;
        best_d = d;
        found = true;
      }
    }
  }
  if (!found) return s;

  Stratification out = s;
  const Stratum& parent = s.strata[best_s];
  const double mid = 0.5 * (parent.low[best_d] + parent.high[best_d]);
  Stratum lower, upper;
  lower.low = upper.low = parent.low;
  lower.high = upper.high = parent.high;
  lower.high[best_d] = mid;
  upper.low[best_d] = mid;
  lower.p = upper.p = 1.0;
  for (std::size_t d = 0; d < n; ++d) {
    lower.p *= lower.high[d] - lower.low[d];
    upper.p *= upper.high[d] - upper.low[d];
  }
  for (std::size_t m : parent.members) {
    Stratum& h = s.samples[m].point[best_d] < mid ? lower : upper;
    h.add(s.samples[m].q);
    h.members.push_back(m);
  }
  out.strata[best_s] = std::move(lower);
  out.strata.insert(out.strata.begin() + static_cast<std::ptrdiff_t>(best_s) + 1, std::move(upper));
  if (split_dim) *split_dim = static_cast<int>(best_d);
  return out;
}

std::vector<Evaluation> sample_strata(Stratification& s, const std::vector<std::size_t>& counts, const Integrand& f,
                                      std::uint64_t seed, std::size_t iteration) {
  if (counts.size() != s.strata.size()) throw std::invalid_argument("sample_strata: one count per stratum required");
  Rng rng = substream(seed, iteration);
  std::vector<Evaluation> ev;
  ev.reserve(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  const std::size_t n = s.dims();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const Stratum& st = s.strata[i];
    for (std::size_t k = 0; k < counts[i]; ++k) {
      Evaluation e;
      e.iteration = iteration;
      e.stratum = i;
      e.point.resize(n);
      for (std::size_t d = 0; d < n; ++d) {
        double x = st.low[d] + (st.high[d] - st.low[d]) * uniform01(rng);
        if (x >= st.high[d]) x = std::nextafter(st.high[d], st.low[d]);
        e.point[d] = x;
      }
      ev.push_back(std::move(e));
    }
  }
  parallel_for(ev.size(), [&](std::size_t j) {
    try {
      ev[j].q = f(ev[j].point);
    } catch (const std::exception& ex) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand failed at u = (";
      for (std::size_t d = 0; d < ev[j].point.size(); ++d) os << (d ? ", " : "") << ev[j].point[d];
      os << "): " << ex.what();
      throw std::runtime_error(os.str());
    }
    if (!std::isfinite(ev[j].q)) throw std::runtime_error("integrand returned a non-finite value");
  });
  for (const auto& e : ev) s.add_sample(e.stratum, e.point, e.q);
  return ev;
}

EstimatorResult run_adaptive(const Integrand& f, std::size_t dims, std::size_t budget, const AdaptiveOptions& opts,
                             std::uint64_t seed) {
  return run_adaptive(f, Stratification::whole(dims, opts.alpha, opts.batch), budget, opts, seed);
}

EstimatorResult run_adaptive(const Integrand& f, Stratification initial, std::size_t budget,
                             const AdaptiveOptions& opts, std::uint64_t seed) {
  if (opts.batch == 0) throw std::invalid_argument("run_adaptive: batch must be positive");
  if (budget < opts.batch) throw std::invalid_argument("run_adaptive: budget is smaller than the batch size");
  if (!(opts.alpha >= 0.0 && opts.alpha <= 1.0)) throw std::invalid_argument("run_adaptive: alpha must lie in [0,1]");
  initial.validate();
  EstimatorResult res;
  Stratification s = std::move(initial);
  s.alpha = opts.alpha;
  s.batch = opts.batch;
  std::size_t used = s.total_samples();
  for (std::size_t it = 0; used < budget; ++it) {
    const std::size_t n_new = std::min(opts.batch, budget - used);
    const auto counts = allocate_hybrid(s, n_new);
    auto ev = sample_strata(s, counts, f, seed, it);
    used += ev.size();
    for (auto& e : ev) res.log.push_back(std::move(e));
    if (opts.adapt && used < budget) {
      int d = -1;
      s = adapt(s, &d);
      if (d >= 0) res.splits.push_back(d);
    }
  }
  res.n_evaluations = used;
  res.estimate = estimate(s);
  bool all_sigma = true;
  for (const auto& st : s.strata) all_sigma = all_sigma && st.has_sigma();
  res.variance = all_sigma ? estimator_variance(s, used) : 0.0;
  res.stratification = std::move(s);
  return res;
}

EstimatorResult run_smc(const Integrand& f, std::size_t dims, std::size_t budget, std::uint64_t seed) {
  if (budget < 2) throw std::invalid_argument("run_smc: budget must be at least 2");
  EstimatorResult res;
  Stratification s = Stratification::whole(dims, 0.0, budget);
  res.log = sample_strata(s, {budget}, f, seed, 0);
  res.n_evaluations = budget;
  res.estimate = s.strata[0].mean;
  res.variance = s.strata[0].variance() / static_cast<double>(budget);
  res.stratification = std::move(s);
  return res;
}

SpeedupResult measure_speedup(const Integrand& f, std::size_t dims, std::size_t budget, std::size_t repeats,
                              std::uint64_t seed, const AdaptiveOptions& opts) {
  if (repeats < 20) throw std::invalid_argument("measure_speedup: at least 20 repeats required");
  SpeedupResult r;
  r.smc = run_smc(f, dims, budget, splitmix64(seed));
  r.var_smc = r.smc.variance;
  r.estimates.reserve(repeats);
  double nominal = 0.0;
  for (std::size_t k = 0; k < repeats; ++k) {
    const auto a = run_adaptive(f, dims, budget, opts, splitmix64(seed ^ splitmix64(k + 1)));
    r.estimates.push_back(a.estimate);
    nominal += a.variance;
  }
  r.nominal_variance = nominal / static_cast<double>(repeats);
  double m = 0.0;
  for (double e : r.estimates) m += e;
  m /= static_cast<double>(repeats);
  double ss = 0.0;
  for (double e : r.estimates) ss += (e - m) * (e - m);
  r.mean_adaptive = m;
  r.var_adaptive = ss / static_cast<double>(repeats - 1);
  r.speedup = r.var_adaptive > 0.0 ? r.var_smc / r.var_adaptive : (r.var_smc > 0.0 ? HUGE_VAL : 1.0);
  return r;
}

}  // namespace faultflow
