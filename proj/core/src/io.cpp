#include "faultflow/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace faultflow::io {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string(what) + ": invalid JSON: " + e.what());
  }
}

// Hand-written configs may omit the version; fitted models must carry it.
void check_schema(const json& j, const char* kind, bool required = true) {
  if (!j.is_object()) throw std::runtime_error(std::string(kind) + ": expected a JSON object");
  if ((required && !j.contains("schema_version")) ||
      (j.contains("schema_version") && j.at("schema_version").get<int>() != schema_version))
    throw std::runtime_error(std::string(kind) + ": unsupported or missing schema_version");
  if (j.contains("kind") && j.at("kind").get<std::string>() != kind)
    throw std::runtime_error(std::string("expected a '") + kind + "' document, got '" +
                             j.at("kind").get<std::string>() + "'");
}

json header(const char* kind) { return json{{"schema_version", schema_version}, {"kind", kind}}; }

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("invalid number '" + s + "'");
  return v;
}

std::size_t to_size(const std::string& s) {
  std::size_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("invalid integer '" + s + "'");
  return v;
}

// Data lines of a CSV, skipping '#' comment lines; the first returned line is the header.
std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

json lognormal_json(const LognormalFit& f) { return json{{"mu", f.mu}, {"sigma", f.sigma}}; }
LognormalFit lognormal_from(const json& j) { return LognormalFit{j.at("mu").get<double>(), j.at("sigma").get<double>()}; }

json flow_json(const FlowFunctionSample& f) {
  return json{{"k_abs", f.k_abs}, {"pc", f.pc}, {"sat", f.sat}, {"krw", f.krw}, {"krnw", f.krnw}};
}
FlowFunctionSample flow_from(const json& j) {
  FlowFunctionSample f;
  f.k_abs = j.at("k_abs").get<double>();
  f.pc = j.at("pc").get<std::vector<double>>();
  f.sat = j.at("sat").get<std::vector<double>>();
  f.krw = j.at("krw").get<std::vector<double>>();
  f.krnw = j.at("krnw").get<std::vector<double>>();
  return f;
}

json facies_json(const FaciesModelConfig& c) {
  return json{{"n_facies", c.n_facies},
              {"depth_top", c.depth_top},
              {"depth_bottom", c.depth_bottom},
              {"sgr_profile", {{"depth_m", c.sgr_profile.depths()}, {"sgr_mean_pct", c.sgr_profile.values()}}},
              {"sgr_std", c.sgr_std},
              {"k_clay", c.k_clay},
              {"k_sand", c.k_sand},
              {"p_entry_sand", c.p_entry_sand},
              {"bc_exponent", c.bc_exponent}};
}

FaciesModelConfig facies_from(const json& j) {
  FaciesModelConfig c;
  c.n_facies = j.value("n_facies", c.n_facies);
  c.depth_top = j.value("depth_top", c.depth_top);
  c.depth_bottom = j.value("depth_bottom", c.depth_bottom);
  if (j.contains("sgr_profile"))
    c.sgr_profile = SgrProfile(j.at("sgr_profile").at("depth_m").get<std::vector<double>>(),
                               j.at("sgr_profile").at("sgr_mean_pct").get<std::vector<double>>());
  c.sgr_std = j.value("sgr_std", c.sgr_std);
  c.k_clay = j.value("k_clay", c.k_clay);
  c.k_sand = j.value("k_sand", c.k_sand);
  c.p_entry_sand = j.value("p_entry_sand", c.p_entry_sand);
  c.bc_exponent = j.value("bc_exponent", c.bc_exponent);
  c.validate();
  return c;
}

json reduced_json(const ReducedModelFit& f) {
  json j = header("reduced_model");
  j["grid"] = f.grid;
  j["sd0"] = f.sd0;
  j["a_pc"] = f.a_pc;
  j["b_pc"] = f.b_pc;
  j["a_knw"] = f.a_knw;
  j["b_knw"] = f.b_knw;
  j["sd_cut"] = f.sd_cut;
  j["sorted_log_sat"] = f.sorted_log_sat;
  j["sorted_log_krw"] = f.sorted_log_krw;
  j["perm_sat"] = f.perm_sat;
  j["perm_krw"] = f.perm_krw;
  j["y_ref"] = f.y_ref;
  j["degenerate"] = f.degenerate;
  return j;
}

std::vector<std::vector<std::size_t>> invert_perms(const std::vector<std::vector<std::size_t>>& perm) {
  std::vector<std::vector<std::size_t>> inv(perm.size());
  for (std::size_t g = 0; g < perm.size(); ++g) {
    inv[g].assign(perm[g].size(), 0);
    for (std::size_t r = 0; r < perm[g].size(); ++r) {
      if (perm[g][r] >= perm[g].size()) throw std::runtime_error("reduced model: permutation entry out of range");
      inv[g][perm[g][r]] = r;
    }
  }
  return inv;
}

ReducedModelFit reduced_from(const json& j) {
  check_schema(j, "reduced_model");
  ReducedModelFit f;
  f.grid = j.at("grid").get<std::vector<double>>();
  f.sd0 = j.at("sd0").get<double>();
  f.a_pc = j.at("a_pc").get<double>();
  f.b_pc = j.at("b_pc").get<double>();
  f.a_knw = j.at("a_knw").get<double>();
  f.b_knw = j.at("b_knw").get<double>();
  f.sd_cut = j.at("sd_cut").get<double>();
  f.sorted_log_sat = j.at("sorted_log_sat").get<std::vector<std::vector<double>>>();
  f.sorted_log_krw = j.at("sorted_log_krw").get<std::vector<std::vector<double>>>();
  f.perm_sat = j.at("perm_sat").get<std::vector<std::vector<std::size_t>>>();
  f.perm_krw = j.at("perm_krw").get<std::vector<std::vector<std::size_t>>>();
  f.perm_sat_inv = invert_perms(f.perm_sat);
  f.perm_krw_inv = invert_perms(f.perm_krw);
  f.y_ref = j.at("y_ref").get<std::vector<std::array<double, 5>>>();
  f.degenerate = j.at("degenerate").get<std::array<bool, 5>>();
  if (f.sorted_log_sat.size() != f.grid.size() || f.sorted_log_krw.size() != f.grid.size())
    throw std::runtime_error("reduced model: table sizes do not match the grid");
  return f;
}

json vine_json(const VineModel& v) {
  json j = header("vine");
  j["dim"] = v.dim();
  json trees = json::array();
  for (const auto& tree : v.trees()) {
    json t = json::array();
    for (const auto& e : tree) {
      json je{{"v1", e.v1},
              {"v2", e.v2},
              {"cond", e.cond},
              {"p1", e.p1},
              {"p2", e.p2},
              {"family", to_string(e.copula.family())},
              {"rotation", e.copula.rotation()},
              {"par", e.copula.par()},
              {"par2", e.copula.par2()}};
      if (e.copula.family() == CopulaFamily::checkerboard) je["cells"] = e.copula.cells();
      t.push_back(std::move(je));
    }
    trees.push_back(std::move(t));
  }
  j["trees"] = std::move(trees);
  json m = json::array();
  for (const auto& d : v.marginals()) m.push_back(d.sorted());
  j["marginals"] = std::move(m);
  return j;
}

BivariateCopula copula_from(const json& j) {
  const CopulaFamily f = copula_family_from_string(j.at("family").get<std::string>());
  const double par = j.value("par", 0.0), par2 = j.value("par2", 0.0);
  const int rot = j.value("rotation", 0);
  switch (f) {
    case CopulaFamily::independence: return BivariateCopula::independence();
    case CopulaFamily::gaussian: return BivariateCopula::gaussian(par);
    case CopulaFamily::student_t: return BivariateCopula::student_t(par, par2);
    case CopulaFamily::clayton: return BivariateCopula::clayton(par, rot);
    case CopulaFamily::gumbel: return BivariateCopula::gumbel(par, rot);
    case CopulaFamily::frank: return BivariateCopula::frank(par);
    case CopulaFamily::checkerboard: return BivariateCopula::checkerboard(j.at("cells").get<std::vector<double>>());
  }
  throw std::runtime_error("unknown copula family");
}

VineModel vine_from(const json& j) {
  check_schema(j, "vine");
  const int dim = j.at("dim").get<int>();
  std::vector<std::vector<VineEdge>> trees;
  for (const auto& t : j.at("trees")) {
    std::vector<VineEdge> tree;
    for (const auto& je : t) {
      VineEdge e;
      e.v1 = je.at("v1").get<int>();
      e.v2 = je.at("v2").get<int>();
      e.cond = je.at("cond").get<std::vector<int>>();
      e.p1 = je.at("p1").get<int>();
      e.p2 = je.at("p2").get<int>();
      e.copula = copula_from(je);
      tree.push_back(std::move(e));
    }
    trees.push_back(std::move(tree));
  }
  std::vector<stats::EmpiricalDistribution> marg;
  if (j.contains("marginals"))
    for (const auto& m : j.at("marginals")) marg.emplace_back(m.get<std::vector<double>>());
  return VineModel(dim, std::move(trees), std::move(marg));
}

}  // namespace

void write_ensemble_csv(const std::string& path, const std::vector<FlowFunctionSample>& ensemble,
                        const SdGrid& grid) {
  std::ostringstream os;
  os << "# faultflow ensemble schema_version=" << schema_version << "\n";
  os << "member,g,sd,k_abs,pc,sat,krw,krnw\n";
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const auto& f = ensemble[m];
    if (f.pc.size() != grid.size()) throw std::invalid_argument("write_ensemble_csv: member does not match the grid");
    for (std::size_t g = 0; g < grid.size(); ++g)
      os << m << ',' << g << ',' << format_double(grid.values[g]) << ',' << format_double(f.k_abs) << ','
         << format_double(f.pc[g]) << ',' << format_double(f.sat[g]) << ',' << format_double(f.krw[g]) << ','
         << format_double(f.krnw[g]) << '\n';
  }
  write_text(path, os.str());
}

std::vector<FlowFunctionSample> read_ensemble_csv(const std::string& path, SdGrid* grid) {
  const auto lines = csv_lines(read_text(path));
  if (lines.empty() || lines[0] != "member,g,sd,k_abs,pc,sat,krw,krnw")
    throw std::runtime_error(path + ": not an ensemble CSV");
  std::vector<FlowFunctionSample> out;
  std::vector<double> sd;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = split(lines[i]);
    if (c.size() != 8) throw std::runtime_error(path + ": line " + std::to_string(i + 1) + " has wrong column count");
    const std::size_t m = to_size(c[0]), g = to_size(c[1]);
    if (m > out.size() || (m == out.size() && g != 0)) throw std::runtime_error(path + ": rows are not in member order");
    if (m == out.size()) {
      out.emplace_back();
      out.back().k_abs = to_double(c[3]);
    }
    auto& f = out[m];
    if (g != f.pc.size()) throw std::runtime_error(path + ": grid index out of order");
    if (m == 0) sd.push_back(to_double(c[2]));
    f.pc.push_back(to_double(c[4]));
    f.sat.push_back(to_double(c[5]));
    f.krw.push_back(to_double(c[6]));
    f.krnw.push_back(to_double(c[7]));
  }
  for (const auto& f : out)
    if (f.pc.size() != sd.size()) throw std::runtime_error(path + ": members have different grid sizes");
  if (grid) {
    grid->values = sd;
    grid->validate();
  }
  return out;
}

std::string facies_config_to_json(const FaciesModelConfig& cfg) {
  json j = header("facies_config");
  j.update(facies_json(cfg));
  return j.dump(2);
}

FaciesModelConfig facies_config_from_json(const std::string& text) {
  const json j = parse(text, "facies config");
  check_schema(j, "facies_config", false);
  return facies_from(j);
}

std::string proxy_config_to_json(const ProxyConfig& c) {
  json j = header("proxy_config");
  j["layer_perms"] = c.layer_perms;
  j["layer_thickness"] = c.layer_thickness;
  j["kv_kh"] = c.kv_kh;
  j["cell_dx"] = c.cell_dx;
  j["cell_dy"] = c.cell_dy;
  j["reservoir_top"] = c.reservoir_top;
  j["porosity"] = c.porosity;
  j["fault_area"] = c.fault_area;
  j["fault_half_length"] = c.fault_half_length;
  j["fault_porosity"] = c.fault_porosity;
  j["fault_depth"] = c.fault_depth;
  j["top_aquifer_depth"] = c.top_aquifer_depth;
  j["troll_depth"] = c.troll_depth;
  j["troll_pressure"] = c.troll_pressure;
  j["aquifer_porosity_factor"] = c.aquifer_porosity_factor;
  j["farfield_width"] = c.farfield_width;
  j["farfield_distance"] = c.farfield_distance;
  j["injection_rate"] = c.injection_rate;
  j["duration"] = c.duration;
  j["timestep"] = c.timestep;
  j["min_timestep"] = c.min_timestep;
  j["sand_perm"] = c.sand_perm;
  j["sand_entry_pressure"] = c.sand_entry_pressure;
  j["bc_exponent"] = c.bc_exponent;
  j["fluid"] = {{"rho_brine", c.fluid.rho_brine}, {"rho_co2", c.fluid.rho_co2},   {"mu_brine", c.fluid.mu_brine},
                {"mu_co2", c.fluid.mu_co2},       {"c_brine", c.fluid.c_brine},   {"c_co2", c.fluid.c_co2},
                {"p_ref", c.fluid.p_ref}};
  j["newton_tolerance"] = c.newton_tolerance;
  j["max_newton_iterations"] = c.max_newton_iterations;
  return j.dump(2);
}

ProxyConfig proxy_config_from_json(const std::string& text) {
  const json j = parse(text, "proxy config");
  check_schema(j, "proxy_config", false);
  ProxyConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("layer_perms", c.layer_perms);
  get("layer_thickness", c.layer_thickness);
  get("kv_kh", c.kv_kh);
  get("cell_dx", c.cell_dx);
  get("cell_dy", c.cell_dy);
  get("reservoir_top", c.reservoir_top);
  get("porosity", c.porosity);
  get("fault_area", c.fault_area);
  get("fault_half_length", c.fault_half_length);
  get("fault_porosity", c.fault_porosity);
  get("fault_depth", c.fault_depth);
  get("top_aquifer_depth", c.top_aquifer_depth);
  get("troll_depth", c.troll_depth);
  get("troll_pressure", c.troll_pressure);
  get("aquifer_porosity_factor", c.aquifer_porosity_factor);
  get("farfield_width", c.farfield_width);
  get("farfield_distance", c.farfield_distance);
  get("injection_rate", c.injection_rate);
  get("duration", c.duration);
  get("timestep", c.timestep);
  get("min_timestep", c.min_timestep);
  get("sand_perm", c.sand_perm);
  get("sand_entry_pressure", c.sand_entry_pressure);
  get("bc_exponent", c.bc_exponent);
  get("newton_tolerance", c.newton_tolerance);
  get("max_newton_iterations", c.max_newton_iterations);
  if (j.contains("fluid")) {
    const json& f = j.at("fluid");
    c.fluid.rho_brine = f.value("rho_brine", c.fluid.rho_brine);
    c.fluid.rho_co2 = f.value("rho_co2", c.fluid.rho_co2);
    c.fluid.mu_brine = f.value("mu_brine", c.fluid.mu_brine);
    c.fluid.mu_co2 = f.value("mu_co2", c.fluid.mu_co2);
    c.fluid.c_brine = f.value("c_brine", c.fluid.c_brine);
    c.fluid.c_co2 = f.value("c_co2", c.fluid.c_co2);
    c.fluid.p_ref = f.value("p_ref", c.fluid.p_ref);
  }
  c.validate();
  return c;
}

std::string reduced_model_to_json(const ReducedModelFit& fit) { return reduced_json(fit).dump(); }
ReducedModelFit reduced_model_from_json(const std::string& text) { return reduced_from(parse(text, "reduced model")); }

std::string vine_to_json(const VineModel& vine) { return vine_json(vine).dump(); }
VineModel vine_from_json(const std::string& text) { return vine_from(parse(text, "vine")); }

std::string artifacts_to_json(const CaseArtifacts& a) {
  json j = header("case_artifacts");
  j["k_clay"] = a.k_clay;
  if (a.fault_k) j["fault_k"] = lognormal_json(*a.fault_k);
  if (a.troll_k) j["troll_k"] = lognormal_json(*a.troll_k);
  if (!a.reference.sat.empty()) j["reference"] = flow_json(a.reference);
  if (!a.reduced.empty()) j["reduced_model"] = reduced_json(a.reduced);
  if (a.vine.dim() > 0) j["vine"] = vine_json(a.vine);
  if (a.layers_set) {
    json l = json::array();
    for (const auto& f : a.layers) l.push_back(lognormal_json(f));
    j["layers"] = std::move(l);
  }
  return j.dump();
}

CaseArtifacts artifacts_from_json(const std::string& text) {
  const json j = parse(text, "case artifacts");
  check_schema(j, "case_artifacts");
  CaseArtifacts a;
  a.k_clay = j.at("k_clay").get<double>();
  if (j.contains("fault_k")) a.fault_k = lognormal_from(j.at("fault_k"));
  if (j.contains("troll_k")) a.troll_k = lognormal_from(j.at("troll_k"));
  if (j.contains("reference")) a.reference = flow_from(j.at("reference"));
  if (j.contains("reduced_model")) a.reduced = reduced_from(j.at("reduced_model"));
  if (j.contains("vine")) a.vine = vine_from(j.at("vine"));
  if (j.contains("layers")) {
    const auto& l = j.at("layers");
    if (l.size() != 6) throw std::runtime_error("case artifacts: expected six layer distributions");
    for (std::size_t i = 0; i < 6; ++i) a.layers[i] = lognormal_from(l.at(i));
    a.layers_set = true;
  }
  return a;
}

std::string stratification_to_json(const Stratification& s) {
  json j = header("stratification");
  j["alpha"] = s.alpha;
  j["batch"] = s.batch;
  json strata = json::array();
  for (const auto& st : s.strata) {
    json js{{"low", st.low}, {"high", st.high}, {"p", st.p}, {"n_samples", st.n_samples}, {"mean", st.mean}};
    js["sigma"] = st.has_sigma() ? json(st.sigma()) : json(nullptr);
    strata.push_back(std::move(js));
  }
  j["strata"] = std::move(strata);
  return j.dump(2);
}

void write_flow_functions_csv(const std::string& path, const FlowFunctionSample& f, const SdGrid& grid) {
  std::ostringstream os;
  os << "# faultflow flow_functions schema_version=" << schema_version << " k_abs_mD=" << format_double(f.k_abs)
     << "\n";
  os << "sd,pc_kpa,sat,krw,krnw\n";
  for (std::size_t g = 0; g < grid.size(); ++g)
    os << format_double(grid.values[g]) << ',' << format_double(f.pc[g]) << ',' << format_double(f.sat[g]) << ','
       << format_double(f.krw[g]) << ',' << format_double(f.krnw[g]) << '\n';
  write_text(path, os.str());
}

void write_sim_result(const std::string& csv_path, const std::string& json_path, const SimResult& r) {
  std::ostringstream os;
  os << "# faultflow simulation schema_version=" << schema_version << "\n";
  os << "time_days,leaked_top_t,leaked_troll_t,reached_top_aquifer_t,stored_t,injected_t,mass_balance_error";
  const bool has_p = r.pressure.size() == r.times.size();
  if (has_p)
    for (const auto& n : r.cell_names) os << ",p_" << n << "_bar";
  os << '\n';
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    os << format_double(r.times[i]) << ',' << format_double(r.leaked_top[i]) << ','
       << format_double(r.leaked_troll[i]) << ',' << format_double(r.reached_top_aquifer[i]) << ','
       << format_double(r.stored[i]) << ',' << format_double(r.injected[i]) << ','
       << format_double(r.mass_balance_error[i]);
    if (has_p)
      for (double p : r.pressure[i]) os << ',' << format_double(p);
    os << '\n';
  }
  write_text(csv_path, os.str());

  json j = header("simulation_summary");
  const bool any = !r.times.empty();
  j["leaked_top_t"] = any ? r.leaked_top.back() : 0.0;
  j["leaked_troll_t"] = any ? r.leaked_troll.back() : 0.0;
  j["leaked_total_t"] = r.leaked_total();
  j["reached_top_aquifer_t"] = any ? r.reached_top_aquifer.back() : 0.0;
  j["stored_t"] = any ? r.stored.back() : 0.0;
  j["injected_t"] = any ? r.injected.back() : 0.0;
  j["max_mass_balance_error"] = r.max_mass_balance_error();
  j["aquifer_assumption_violated"] = r.aquifer_assumption_violated;
  j["steps"] = any ? r.times.size() - 1 : 0;
  j["newton_iterations"] = r.newton_iterations;
  j["timestep_cuts"] = r.timestep_cuts;
  write_text(json_path, j.dump(2) + "\n");
}

std::string study_summary_json(const StudyReport& rep) {
  json j = header("study_summary");
  j["case"] = case_name(rep.spec.case_id);
  j["k_clay"] = rep.spec.k_clay;
  j["n_dims"] = rep.spec.n_dims;
  j["dim_names"] = rep.spec.dim_names;
  j["method"] = to_string(rep.options.method);
  j["budget"] = rep.options.budget;
  j["repeats"] = rep.options.repeats;
  j["batch"] = rep.options.batch;
  j["alpha"] = rep.options.alpha;
  j["seed"] = rep.options.seed;
  j["n_samples"] = rep.samples.size();
  j["n_strata"] = rep.n_strata;
  j["estimate_t"] = rep.estimate;
  j["variance"] = rep.variance;
  j["empirical_variance"] = rep.empirical_variance;
  j["estimates"] = rep.estimates;
  j["p10_t"] = rep.pct.p10;
  j["p50_t"] = rep.pct.p50;
  j["p90_t"] = rep.pct.p90;
  j["max_mass_balance_error"] = rep.max_mass_balance_error;
  j["speedup"] = rep.speedup ? json(*rep.speedup) : json(nullptr);
  j["smc_variance"] = rep.smc_variance ? json(*rep.smc_variance) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string samples_csv(const StudyReport& rep) {
  std::ostringstream os;
  os << "# faultflow samples schema_version=" << schema_version << "\n";
  os << "iteration,stratum_id";
  for (const auto& n : rep.spec.dim_names) os << ',' << n;
  os << ",q_value,weight\n";
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& e = rep.samples[i];
    os << e.iteration << ',' << e.stratum;
    for (double x : e.point) os << ',' << format_double(x);
    os << ',' << format_double(e.q) << ',' << format_double(i < rep.weights.size() ? rep.weights[i] : 0.0) << '\n';
  }
  return os.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream os;
  os << "# faultflow histogram schema_version=" << schema_version << "\n";
  os << "bin,lower_t,upper_t,weight\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    os << b << ',' << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ','
       << format_double(h.counts[b]) << '\n';
  return os.str();
}

void write_study(const std::string& dir, const StudyReport& rep) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  write_text((d / "summary.json").string(), study_summary_json(rep));
  write_text((d / "samples.csv").string(), samples_csv(rep));
  write_text((d / "histogram.csv").string(), histogram_csv(rep.histogram));
  write_text((d / "stratification.json").string(), stratification_to_json(rep.stratification) + "\n");
}

SampleLog read_samples_csv(const std::string& path) {
  const auto lines = csv_lines(read_text(path));
  if (lines.empty()) throw std::runtime_error(path + ": empty sample log");
  const auto head = split(lines[0]);
  if (head.size() < 4 || head[0] != "iteration" || head[1] != "stratum_id" || head[head.size() - 2] != "q_value" ||
      head.back() != "weight")
    throw std::runtime_error(path + ": not a sample log");
  const std::size_t dims = head.size() - 4;
  SampleLog log;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = split(lines[i]);
    if (c.size() != head.size()) throw std::runtime_error(path + ": line " + std::to_string(i + 1) + " has wrong column count");
    Evaluation e;
    e.iteration = to_size(c[0]);
    e.stratum = to_size(c[1]);
    for (std::size_t d = 0; d < dims; ++d) e.point.push_back(to_double(c[2 + d]));
    e.q = to_double(c[2 + dims]);
    log.weights.push_back(to_double(c[3 + dims]));
    log.samples.push_back(std::move(e));
  }
  return log;
}

}  // namespace faultflow::io
