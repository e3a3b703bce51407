// faultflow: fault-zone upscaling, copula fitting and CO2 leakage studies.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faultflow/io.hpp"
#include "faultflow/pipeline.hpp"

namespace fs = std::filesystem;
using namespace faultflow;

namespace {

struct FitFlags {
  std::size_t n_ref = 10000;
  std::uint64_t fit_seed = ArtifactOptions{}.seed;
  std::string profile;
};

ArtifactOptions artifact_options(const FitFlags& f) {
  ArtifactOptions o;
  o.n_ref = f.n_ref;
  o.n_troll = f.n_ref;
  o.seed = f.fit_seed;
  if (!f.profile.empty()) o.facies.sgr_profile = SgrProfile::from_csv(f.profile);
  return o;
}

void add_fit_flags(CLI::App* app, FitFlags& f) {
  app->add_option("--nref", f.n_ref, "Upscaled realizations per ensemble")->check(CLI::Range(2, 10000000));
  app->add_option("--fit-seed", f.fit_seed, "Seed of the upscaling ensemble");
  app->add_option("--profile", f.profile, "SGR profile CSV (depth_m,sgr_mean_pct)")->check(CLI::ExistingFile);
}

CaseArtifacts load_or_build(const std::string& artifacts, double k_clay, const FitFlags& f) {
  if (!artifacts.empty()) return io::artifacts_from_json(io::read_text(artifacts));
  return build_artifacts(k_clay, artifact_options(f));
}

ProxyConfig load_proxy(const std::string& path) {
  ProxyConfig c = path.empty() ? ProxyConfig{} : io::proxy_config_from_json(io::read_text(path));
  c.record_pressure = false;
  return c;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void print_study(const StudyReport& r) {
  std::printf("case %s  k_clay %g mD  method %s  samples %zu\n", case_name(r.spec.case_id).c_str(), r.spec.k_clay,
              to_string(r.options.method).c_str(), r.samples.size());
  std::printf("estimate %.6g t  variance %.6g", r.estimate, r.variance);
  if (r.empirical_variance > 0.0) std::printf("  empirical variance %.6g", r.empirical_variance);
  std::printf("\nP10 %.6g  P50 %.6g  P90 %.6g t\n", r.pct.p10, r.pct.p50, r.pct.p90);
  if (r.speedup) std::printf("speedup %.6g (SMC variance %.6g)\n", *r.speedup, *r.smc_variance);
  std::printf("max mass-balance error %.3g\n", r.max_mass_balance_error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-zone upscaling and CO2 leakage uncertainty studies"};
  app.require_subcommand(1);

  double k_clay = 1e-4;
  std::string out = "out";
  std::uint64_t seed = 1;
  FitFlags fit;
  auto kclay_check = CLI::IsMember({1e-4, 1e-3, 1.0});

  // upscale
  auto* up = app.add_subcommand("upscale", "Generate an upscaled flow-function ensemble");
  up->add_option("--kclay", k_clay, "Clay permeability (mD)")->check(CLI::PositiveNumber);
  up->add_option("--out", out, "Output directory");
  add_fit_flags(up, fit);

  // fit
  std::string ensemble_path;
  auto* fi = app.add_subcommand("fit", "Fit lognormals, the reduced model and the vine copula");
  fi->add_option("--kclay", k_clay, "Clay permeability (mD)")->check(CLI::PositiveNumber);
  fi->add_option("--ensemble", ensemble_path, "Ensemble CSV from 'upscale' (generated if omitted)")
      ->check(CLI::ExistingFile);
  fi->add_option("--out", out, "Output directory");
  add_fit_flags(fi, fit);

  // simulate
  std::string artifacts, proxy_path, u_list, case_str = "I";
  double fault_k = -1.0, troll_k = -1.0;
  auto* si = app.add_subcommand("simulate", "Run the leakage proxy once");
  si->add_option("--case", case_str, "Case I..VI used to route --u");
  si->add_option("--u", u_list, "Comma-separated point of the unit cube (default: all 0.5)");
  si->add_option("--kclay", k_clay, "Clay permeability (mD)")->check(CLI::PositiveNumber);
  si->add_option("--artifacts", artifacts, "artifacts.json from 'fit'")->check(CLI::ExistingFile);
  si->add_option("--config", proxy_path, "Proxy configuration JSON")->check(CLI::ExistingFile);
  si->add_option("--fault-k", fault_k, "Override the fault permeability (mD)");
  si->add_option("--troll-k", troll_k, "Override the Troll connection permeability (mD)");
  si->add_option("--out", out, "Output directory");
  add_fit_flags(si, fit);

  // study / speedup
  StudyOptions so;
  std::string method = "smc";
  auto add_study_flags = [&](CLI::App* a, bool with_method) {
    a->add_option("--case", case_str, "Case I..VI")->required();
    a->add_option("--kclay", k_clay, "Clay permeability (mD)")->check(kclay_check);
    a->add_option("--budget", so.budget, "Model evaluations per run")->check(CLI::PositiveNumber);
    a->add_option("--batch", so.batch, "Samples per adaptive iteration")->check(CLI::PositiveNumber);
    a->add_option("--alpha", so.alpha, "Hybrid allocation parameter")->check(CLI::Range(0.0, 1.0));
    a->add_option("--seed", seed, "Sampling seed");
    a->add_option("--repeats", so.repeats, "Independent repetitions")->check(CLI::PositiveNumber);
    a->add_option("--artifacts", artifacts, "artifacts.json from 'fit' (built in-process if omitted)")
        ->check(CLI::ExistingFile);
    a->add_option("--config", proxy_path, "Proxy configuration JSON")->check(CLI::ExistingFile);
    a->add_option("--out", out, "Output directory");
    if (with_method) a->add_option("--method", method, "smc or adss")->check(CLI::IsMember({"smc", "adss"}));
    add_fit_flags(a, fit);
  };
  auto* st = app.add_subcommand("study", "Leakage study with SMC or ADSS");
  add_study_flags(st, true);
  auto* sp = app.add_subcommand("speedup", "Paired SMC / ADSS study and speedup");
  add_study_flags(sp, false);

  // report
  std::string in_dir;
  std::size_t bins = 40;
  auto* re = app.add_subcommand("report", "Re-render histogram and percentiles from a sample log");
  re->add_option("--in", in_dir, "Study directory containing samples.csv")->required()->check(CLI::ExistingDirectory);
  re->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);
  re->add_option("--out", out, "Output directory (default: --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*up) {
      FaciesModelConfig fc = artifact_options(fit).facies;
      fc.k_clay = k_clay;
      const SdGrid grid = SdGrid::log_spaced();
      const auto ens = generate_ensemble(fc, grid, fit.n_ref, fit.fit_seed);
      for (const auto& f : ens) check_invariants(f);
      const fs::path d(out);
      io::write_ensemble_csv((d / "ensemble.csv").string(), ens, grid);
      io::write_text((d / "facies_config.json").string(), io::facies_config_to_json(fc) + "\n");
      const auto fitk = fit_lognormal(ensemble_k(ens));
      std::printf("%zu realizations, K lognormal mu %.6g sigma %.6g (median %.6g mD)\n", ens.size(), fitk.mu,
                  fitk.sigma, fitk.median());
    } else if (*fi) {
      ArtifactOptions ao = artifact_options(fit);
      CaseArtifacts a;
      if (!ensemble_path.empty()) {
        SdGrid grid;
        const auto ens = io::read_ensemble_csv(ensemble_path, &grid);
        a = build_artifacts(k_clay, ens, grid, ao);
      } else {
        a = build_artifacts(k_clay, ao);
      }
      const fs::path d(out);
      io::write_text((d / "artifacts.json").string(), io::artifacts_to_json(a));
      io::write_flow_functions_csv((d / "reference_flow_functions.csv").string(), a.reference,
                                   SdGrid{a.reduced.grid});
      std::printf("fault K: mu %.6g sigma %.6g; Troll K: mu %.6g sigma %.6g\n", a.fault_k->mu, a.fault_k->sigma,
                  a.troll_k->mu, a.troll_k->sigma);
      std::printf("reduced model: a_pc %.6g b_pc %.6g a_knw %.6g b_knw %.6g sd_cut %.6g\n", a.reduced.a_pc,
                  a.reduced.b_pc, a.reduced.a_knw, a.reduced.b_knw, a.reduced.sd_cut);
      for (std::size_t t = 0; t < a.vine.trees().size(); ++t)
        for (const auto& e : a.vine.trees()[t])
          std::printf("tree %zu edge (Y%d,Y%d) %s rot %d tau %.4f\n", t + 1, e.v1 + 1, e.v2 + 1,
                      to_string(e.copula.family()).c_str(), e.copula.rotation(), e.copula.tau());
    } else if (*si) {
      const int case_id = parse_case(case_str);
      ProxyConfig cfg = proxy_path.empty() ? ProxyConfig{} : io::proxy_config_from_json(io::read_text(proxy_path));
      const CaseArtifacts a = load_or_build(artifacts, k_clay, fit);
      const CaseModel model(case_id, a, cfg);
      std::vector<double> u = u_list.empty() ? std::vector<double>(model.spec().n_dims, 0.5) : parse_list(u_list);
      ProxyInputs in = model.inputs(u);
      if (fault_k >= 0.0) in.fault.k_abs = fault_k;
      if (troll_k >= 0.0) in.k_troll = troll_k;
      cfg.layer_perms = in.layer_perms;
      const SimResult r = simulate(cfg, in.fault, in.k_troll);
      const fs::path d(out);
      io::write_sim_result((d / "simulation.csv").string(), (d / "simulation.json").string(), r);
      std::printf("fault K %.6g mD, Troll K %.6g mD\n", in.fault.k_abs, in.k_troll);
      std::printf("leaked top %.6g t, Troll %.6g t, stored %.6g t of %.6g t injected (mass balance %.3g)\n",
                  r.leaked_top.back(), r.leaked_troll.back(), r.stored.back(), r.injected.back(),
                  r.max_mass_balance_error());
      if (r.aquifer_assumption_violated)
        std::fprintf(stderr, "warning: fault transmissibility is not small compared with the reservoir side\n");
    } else if (*st || *sp) {
      so.seed = seed;
      so.method = study_method_from_string(method);
      const int case_id = parse_case(case_str);
      const CaseArtifacts a = load_or_build(artifacts, k_clay, fit);
      const CaseModel model(case_id, a, load_proxy(proxy_path));
      StudyReport r;
      if (*sp) {
        if (sp->count("--repeats") == 0) so.repeats = 20;
        r = run_speedup_study(model, so);
      } else {
        r = run_study(model, so);
      }
      io::write_study(out, r);
      print_study(r);
    } else if (*re) {
      const auto log = io::read_samples_csv((fs::path(in_dir) / "samples.csv").string());
      std::vector<double> q;
      for (const auto& e : log.samples) q.push_back(e.q);
      // Equal weights mean a plain Monte Carlo log: use order statistics.
      bool equal = true;
      for (double w : log.weights) equal = equal && w == log.weights.front();
      const std::span<const double> w = equal ? std::span<const double>{} : std::span<const double>(log.weights);
      const Histogram h = make_histogram(q, bins, w);
      const Percentiles p = percentiles(q, w);
      const fs::path d(re->count("--out") ? out : in_dir);
      io::write_text((d / "histogram.csv").string(), io::histogram_csv(h));
      std::ostringstream js;
      js << "{\n  \"schema_version\": " << io::schema_version << ",\n  \"kind\": \"report\",\n  \"n_samples\": "
         << q.size() << ",\n  \"p10_t\": " << io::format_double(p.p10) << ",\n  \"p50_t\": "
         << io::format_double(p.p50) << ",\n  \"p90_t\": " << io::format_double(p.p90) << "\n}\n";
      io::write_text((d / "report.json").string(), js.str());
      std::printf("%zu samples: P10 %.6g  P50 %.6g  P90 %.6g t\n", q.size(), p.p10, p.p50, p.p90);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
