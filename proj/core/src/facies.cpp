#include "faultflow/facies.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "faultflow/stats.hpp"

namespace faultflow {

SgrProfile::SgrProfile(std::vector<double> depth_m, std::vector<double> sgr_pct)
    : depth_(std::move(depth_m)), sgr_(std::move(sgr_pct)) {
  if (depth_.empty() || depth_.size() != sgr_.size())
    throw std::invalid_argument("SgrProfile: depth and SGR columns must be non-empty and equal length");
  for (std::size_t i = 1; i < depth_.size(); ++i)
    if (!(depth_[i] > depth_[i - 1]))
      throw std::invalid_argument("SgrProfile: depths must be strictly increasing");
  for (double s : sgr_)
    if (!(s >= 0.0 && s <= 100.0)) throw std::invalid_argument("SgrProfile: mean SGR outside [0,100]");
}

SgrProfile SgrProfile::default_profile() {
  return SgrProfile({700, 800, 900, 1000, 1100, 1200, 1300, 1400, 1500, 1550, 1600},
                    {25, 32, 40, 47, 54, 60, 62, 64, 65, 68, 70});
}

SgrProfile SgrProfile::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open SGR profile: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty SGR profile: " + path);
  if (line.rfind("depth_m,sgr_mean_pct", 0) != 0)
    throw std::runtime_error("SGR profile header must be depth_m,sgr_mean_pct: " + path);
  std::vector<double> d, s;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      throw std::runtime_error("malformed SGR profile row: " + line);
    d.push_back(std::stod(a));
    s.push_back(std::stod(b));
  }
  return SgrProfile(std::move(d), std::move(s));
}

double SgrProfile::mean_at(double z) const {
  if (depth_.empty()) throw std::logic_error("SgrProfile: empty profile");
  if (z <= depth_.front()) return sgr_.front();
  if (z >= depth_.back()) return sgr_.back();
  const auto it = std::upper_bound(depth_.begin(), depth_.end(), z);
  const auto i = static_cast<std::size_t>(it - depth_.begin());
  const double t = (z - depth_[i - 1]) / (depth_[i] - depth_[i - 1]);
  return sgr_[i - 1] + t * (sgr_[i] - sgr_[i - 1]);
}

void FaciesModelConfig::validate() const {
  if (n_facies < 1) throw std::invalid_argument("n_facies must be >= 1");
  if (!(depth_bottom > depth_top)) throw std::invalid_argument("depth_bottom must exceed depth_top");
  if (sgr_profile.depths().empty()) throw std::invalid_argument("SGR profile is empty");
  if (!(sgr_std >= 0.0)) throw std::invalid_argument("sgr_std must be non-negative");
  if (!(k_clay > 0.0 && k_sand > 0.0)) throw std::invalid_argument("permeabilities must be positive");
  if (!(k_clay < k_sand)) throw std::invalid_argument("k_clay must be below k_sand");
  if (!(p_entry_sand > 0.0 && bc_exponent > 0.0))
    throw std::invalid_argument("entry pressure and Brooks-Corey exponent must be positive");
}

double sgr_to_perm(double sgr, double k_clay, double k_sand) {
  if (!(k_clay > 0.0 && k_sand > 0.0)) throw std::invalid_argument("sgr_to_perm: permeabilities must be positive");
  if (sgr == 0.0) return k_sand;
  if (sgr == 100.0) return k_clay;
  return std::exp(0.01 * sgr * std::log(k_clay / k_sand) + std::log(k_sand));
}

FaciesRealization realization_from_uniforms(const FaciesModelConfig& cfg, std::span<const double> u) {
  const auto n = static_cast<std::size_t>(cfg.n_facies);
  if (u.size() != 2 * n - 1) throw std::invalid_argument("realization_from_uniforms: expected 2n-1 uniforms");
  const double H = cfg.height();
  const double jitter = H / (2.0 * static_cast<double>(n));

  std::vector<double> bounds(n + 1);
  bounds[0] = cfg.depth_top;
  bounds[n] = cfg.depth_bottom;
  for (std::size_t i = 1; i < n; ++i) {
    const double expected = cfg.depth_top + H * static_cast<double>(i) / static_cast<double>(n);
    bounds[i] = expected + (2.0 * u[i - 1] - 1.0) * jitter;
  }
  std::sort(bounds.begin() + 1, bounds.end() - 1);

  FaciesRealization r;
  r.heights.resize(n);
  r.sgr.resize(n);
  r.perms.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    r.heights[j] = bounds[j + 1] - bounds[j];
    const double mid = 0.5 * (bounds[j] + bounds[j + 1]);
    double s = cfg.sgr_profile.mean_at(mid);
    if (cfg.sgr_std > 0.0) s += cfg.sgr_std * stats::normal_quantile(u[n - 1 + j]);
    r.sgr[j] = std::clamp(s, 0.0, 100.0);
    r.perms[j] = sgr_to_perm(r.sgr[j], cfg.k_clay, cfg.k_sand);
  }
  return r;
}

FaciesRealization sample_realization(const FaciesModelConfig& cfg, Rng& rng) {
  std::vector<double> u(draws_per_realization(cfg));
  for (double& v : u) v = uniform01(rng);
  return realization_from_uniforms(cfg, u);
}

namespace {
void check_realization(const FaciesRealization& r) {
  if (r.heights.empty() || r.heights.size() != r.perms.size())
    throw std::invalid_argument("realization: heights and perms must be non-empty and equal length");
  for (double k : r.perms)
    if (!(k > 0.0)) throw std::invalid_argument("realization: facies permeability must be positive");
}
}  // namespace

double upscale_permeability(const FaciesRealization& r) {
  check_realization(r);
  double h = 0.0, s = 0.0;
  for (std::size_t j = 0; j < r.perms.size(); ++j) {
    h += r.heights[j];
    s += r.heights[j] / r.perms[j];
  }
  return h / s;
}

double upscale_permeability_arithmetic(const FaciesRealization& r) {
  check_realization(r);
  double h = 0.0, s = 0.0;
  for (std::size_t j = 0; j < r.perms.size(); ++j) {
    h += r.heights[j];
    s += r.heights[j] * r.perms[j];
  }
  return s / h;
}

double LognormalFit::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("LognormalFit::quantile: u outside (0,1)");
  return std::exp(mu + sigma * stats::normal_quantile(u));
}

double LognormalFit::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (sigma == 0.0) return std::log(x) < mu ? 0.0 : 1.0;
  return stats::normal_cdf((std::log(x) - mu) / sigma);
}

double LognormalFit::median() const { return std::exp(mu); }
double LognormalFit::mean() const { return std::exp(mu + 0.5 * sigma * sigma); }

LognormalFit fit_lognormal(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("fit_lognormal: need at least two samples");
  double s = 0.0;
  for (double v : x) {
    if (!(v > 0.0)) throw std::invalid_argument("fit_lognormal: samples must be positive");
    s += std::log(v);
  }
  const double n = static_cast<double>(x.size());
  const double mu = s / n;
  double ss = 0.0;
  for (double v : x) ss += (std::log(v) - mu) * (std::log(v) - mu);
  return {mu, std::sqrt(ss / n)};
}

LognormalFit lognormal_from_moments(double mean, double stddev) {
  if (!(mean > 0.0 && stddev >= 0.0)) throw std::invalid_argument("lognormal_from_moments: bad moments");
  const double s2 = std::log1p((stddev / mean) * (stddev / mean));
  return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

}  // namespace faultflow
