#include "penrose/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include "penrose/mass_functionals.hpp"
#include "penrose/mu_bubble.hpp"
#include "penrose/trumpet.hpp"

namespace penrose::cli {

const std::vector<std::string> kCommands = {"analyze", "penrose",  "mu-bubble", "horizon",
                                            "rigidity", "trumpet", "batch"};

namespace {

namespace fs = std::filesystem;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) field_error(join(prefix, key), "unknown field");
  }
}

double get_number(const Json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

int get_integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<int>();
}

std::string get_string(const Json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const Json& v, const std::string& field) {
  if (!v.is_boolean()) field_error(field, "expected true or false");
  return v.get<bool>();
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

ProfileSpec parse_profile(const Json& j, const fs::path& base) {
  if (!j.is_object()) field_error("profile", "expected an object");
  reject_unknown(j, {"kind", "mass", "a", "b", "r0", "alpha", "path"}, "profile");
  ProfileSpec p;
  if (j.contains("kind")) p.kind = get_string(j["kind"], "profile.kind");
  if (j.contains("mass")) p.mass = get_number(j["mass"], "profile.mass");
  if (j.contains("a")) p.a = get_number(j["a"], "profile.a");
  if (j.contains("b")) p.b = get_number(j["b"], "profile.b");
  if (j.contains("r0")) p.r0 = get_number(j["r0"], "profile.r0");
  if (j.contains("alpha")) p.alpha = get_number(j["alpha"], "profile.alpha");
  if (j.contains("path")) p.path = resolve(get_string(j["path"], "profile.path"), base);
  return p;
}

RadialGrid parse_grid(const Json& j) {
  if (!j.is_object()) field_error("grid", "expected an object");
  reject_unknown(j, {"r_lo", "r_hi", "count"}, "grid");
  RadialGrid g;
  if (j.contains("r_lo")) g.r_lo = get_number(j["r_lo"], "grid.r_lo");
  if (j.contains("r_hi")) g.r_hi = get_number(j["r_hi"], "grid.r_hi");
  if (j.contains("count")) g.count = get_integer(j["count"], "grid.count");
  return g;
}

std::string line_diagnostic(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

RadialGrid grid_for(const ScenarioConfig& cfg, const RadialProfile& profile) {
  return cfg.grid.value_or(RadialGrid::default_for(profile));
}

Json base_report(const ScenarioConfig& cfg) {
  return {{"command", cfg.command}, {"config", to_json(cfg)}};
}

double required_epsilon(const ScenarioConfig& cfg, double fallback) {
  return cfg.epsilon.value_or(fallback);
}

}  // namespace

ScenarioConfig parse_config(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"command", "name", "dimension", "profile", "grid", "tolerances", "r0",
                  "epsilon", "beta", "epsilons", "gamma", "output_dir", "wall_time", "scenarios"},
                 "");
  ScenarioConfig c;
  if (j.contains("command")) c.command = get_string(j["command"], "command");
  if (j.contains("name")) c.name = get_string(j["name"], "name");
  if (j.contains("dimension")) c.dimension = get_integer(j["dimension"], "dimension");
  if (j.contains("profile")) c.profile = parse_profile(j["profile"], base_dir);
  if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) field_error("tolerances", "expected an object");
    reject_unknown(t, {"quadrature", "el_residual", "equality"}, "tolerances");
    if (t.contains("quadrature"))
      c.quadrature_tolerance = get_number(t["quadrature"], "tolerances.quadrature");
    if (t.contains("el_residual"))
      c.el_tolerance = get_number(t["el_residual"], "tolerances.el_residual");
    if (t.contains("equality"))
      c.equality_tolerance = get_number(t["equality"], "tolerances.equality");
  }
  if (j.contains("r0")) c.r0 = get_number(j["r0"], "r0");
  if (j.contains("epsilon")) c.epsilon = get_number(j["epsilon"], "epsilon");
  if (j.contains("beta")) c.beta = get_number(j["beta"], "beta");
  if (j.contains("epsilons")) {
    if (!j["epsilons"].is_array()) field_error("epsilons", "expected an array of numbers");
    for (std::size_t i = 0; i < j["epsilons"].size(); ++i) {
      c.epsilons.push_back(get_number(j["epsilons"][i], "epsilons[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("gamma")) c.gamma = get_number(j["gamma"], "gamma");
  if (j.contains("output_dir"))
    c.output_dir = resolve(get_string(j["output_dir"], "output_dir"), base_dir);
  if (j.contains("wall_time")) c.wall_time = get_bool(j["wall_time"], "wall_time");
  if (j.contains("scenarios")) {
    const Json& s = j["scenarios"];
    if (!s.is_array()) field_error("scenarios", "expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string field = "scenarios[" + std::to_string(i) + "]";
      ScenarioConfig child;
      try {
        if (s[i].is_string()) {
          child = load_config(resolve(s[i].get<std::string>(), base_dir));
        } else {
          child = parse_config(s[i], base_dir);
        }
      } catch (const ConfigError& e) {
        throw ConfigError(field + ": " + e.what());
      }
      if (!s[i].is_string() && !s[i].contains("name")) child.name = c.name + "_" + std::to_string(i);
      if (!s[i].is_string() && !s[i].contains("output_dir")) child.output_dir = c.output_dir;
      c.scenarios.push_back(std::move(child));
    }
  }
  return c;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ":" + line_diagnostic(text, e.byte) + ": " + e.what());
  }
  try {
    return parse_config(j, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const ScenarioConfig& c) {
  if (c.command.empty()) throw ConfigError("no command given");
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    field_error("command", "unknown command '" + c.command + "'");
  }
  if (c.name.empty() || c.name.find('/') != std::string::npos) {
    field_error("name", "must be a non-empty file stem");
  }
  if (c.command == "batch") {
    if (c.scenarios.empty()) field_error("scenarios", "batch needs at least one scenario");
    for (const auto& s : c.scenarios) {
      if (s.command == "batch") field_error("scenarios", "nested batches are not supported");
      validate(s);
    }
    return;
  }
  if (c.dimension < 3) field_error("dimension", "must be >= 3");
  static const std::set<std::string> kinds = {"euclidean", "schwarzschild", "schwarzschild_like",
                                              "cylinder",  "trumpet",       "tabulated"};
  if (!kinds.count(c.profile.kind)) field_error("profile.kind", "unknown kind '" + c.profile.kind + "'");
  if (c.profile.kind == "schwarzschild" && !(c.profile.mass >= 0.0))
    field_error("profile.mass", "must be >= 0");
  if (c.profile.kind == "schwarzschild_like") {
    if (!(c.profile.a > 0.0)) field_error("profile.a", "must be > 0");
    if (!(c.profile.b >= 0.0)) field_error("profile.b", "must be >= 0");
  }
  if (c.profile.r0 && !(*c.profile.r0 > 0.0)) field_error("profile.r0", "must be > 0");
  if (c.profile.alpha && !(*c.profile.alpha > 0.0)) field_error("profile.alpha", "must be > 0");
  if (c.profile.kind == "tabulated") {
    if (c.profile.path.empty()) field_error("profile.path", "required for tabulated profiles");
    if (!fs::exists(c.profile.path)) field_error("profile.path", "no such file " + c.profile.path.string());
  }
  if (c.grid) {
    if (!(c.grid->r_lo > 0.0) || !(c.grid->r_hi > c.grid->r_lo))
      field_error("grid", "need 0 < r_lo < r_hi");
    if (c.grid->count < 2) field_error("grid.count", "must be >= 2");
  }
  if (!(c.quadrature_tolerance > 0.0)) field_error("tolerances.quadrature", "must be > 0");
  if (!(c.el_tolerance > 0.0)) field_error("tolerances.el_residual", "must be > 0");
  if (!(c.equality_tolerance > 0.0)) field_error("tolerances.equality", "must be > 0");
  if (!(c.r0 > 0.0)) field_error("r0", "must be > 0");
  if (c.epsilon && !(*c.epsilon > 0.0)) field_error("epsilon", "must be > 0");
  if (c.beta && !(*c.beta > 0.0)) field_error("beta", "must be > 0");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    if (!(c.epsilons[i] > 0.0)) field_error("epsilons[" + std::to_string(i) + "]", "must be > 0");
    if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1]))
      field_error("epsilons[" + std::to_string(i) + "]", "schedule must be strictly decreasing");
  }
  if (!(c.gamma > 1.0 && c.gamma < 2.0)) field_error("gamma", "must lie in (1, 2)");
}

Json to_json(const ScenarioConfig& c) {
  Json profile = {{"kind", c.profile.kind}};
  if (c.profile.kind == "schwarzschild") profile["mass"] = c.profile.mass;
  if (c.profile.kind == "schwarzschild_like") {
    profile["a"] = c.profile.a;
    profile["b"] = c.profile.b;
  }
  if (c.profile.r0) profile["r0"] = *c.profile.r0;
  if (c.profile.alpha) profile["alpha"] = *c.profile.alpha;
  if (!c.profile.path.empty()) profile["path"] = c.profile.path.string();
  Json j = {{"command", c.command},
            {"name", c.name},
            {"dimension", c.dimension},
            {"profile", profile},
            {"tolerances",
             {{"quadrature", c.quadrature_tolerance},
              {"el_residual", c.el_tolerance},
              {"equality", c.equality_tolerance}}},
            {"r0", c.r0},
            {"gamma", c.gamma}};
  if (c.grid) j["grid"] = {{"r_lo", c.grid->r_lo}, {"r_hi", c.grid->r_hi}, {"count", c.grid->count}};
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.beta) j["beta"] = *c.beta;
  if (!c.epsilons.empty()) j["epsilons"] = c.epsilons;
  if (!c.scenarios.empty()) {
    Json s = Json::array();
    for (const auto& child : c.scenarios) s.push_back(to_json(child));
    j["scenarios"] = s;
  }
  return j;
}

RadialProfile make_profile(const ScenarioConfig& cfg) {
  const Dimension n(cfg.dimension);
  const ProfileSpec& p = cfg.profile;
  if (p.kind == "euclidean") return RadialProfile::euclidean(n);
  if (p.kind == "schwarzschild") return RadialProfile::schwarzschild(n, p.mass);
  if (p.kind == "schwarzschild_like") return RadialProfile::schwarzschild_like(n, p.a, p.b);
  if (p.kind == "cylinder") return RadialProfile::cylinder(n);
  if (p.kind == "tabulated") return read_tabulated_profile(p.path, n);
  if (p.kind == "trumpet") {
    const double r0 = p.r0.value_or(find_r0(n));
    return build_trumpet(n, r0, p.alpha.value_or(min_alpha(n, r0))).profile;
  }
  throw ConfigError("field 'profile.kind': unknown kind '" + p.kind + "'");
}

CommandResult cmd_analyze(const ScenarioConfig& cfg) {
  const RadialProfile profile = make_profile(cfg);
  const RadialGrid grid = grid_for(cfg, profile);
  const bool three = cfg.dimension == 3;
  QuadratureOptions qopts;
  qopts.tolerance = cfg.quadrature_tolerance;

  Table t;
  t.columns = {"r", "u", "du", "scalar_curvature", "mean_curvature", "area", "geodesic_s"};
  if (three) t.columns.push_back("hawking_mass");
  const std::vector<double> rs = grid.points();
  const double p = profile.dimension().areal_exponent();
  auto density = [&profile, p](double r) { return std::pow(profile.u(r), p); };
  double s = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double r = rs[i];
    if (i > 0) s += integrate_radial(density, rs[i - 1], r, qopts);
    const RadialJet j = profile.jet(r);
    std::vector<double> row = {r,
                               j.u,
                               j.du,
                               scalar_curvature(profile, r),
                               sphere_mean_curvature(profile, r),
                               sphere_area(profile, r),
                               s};
    if (three) row.push_back(hawking_mass(profile, r).value);
    t.rows.push_back(std::move(row));
  }

  Json summary;
  try {
    const AdmMass adm = adm_mass_from_tail(profile, grid.r_hi);
    summary["adm_mass"] = adm.mass;
    summary["tail"] = {{"a", adm.tail.a}, {"b", adm.tail.b}, {"fit_residual", adm.tail.fit_residual}};
  } catch (const NotAsymptoticallyFlat& e) {
    summary["adm_mass"] = nullptr;
    summary["not_asymptotically_flat"] = e.what();
  }
  const AreaInfimum inf = area_infimum_radial(profile, grid);
  summary["area_infimum"] = inf.value;
  summary["area_argmin"] = inf.argmin ? Json(*inf.argmin) : Json(nullptr);
  summary["throat_limit"] = inf.throat_limit;
  const std::optional<double> horizon = find_horizon(profile, grid);
  summary["horizon_radius"] = horizon ? Json(*horizon) : Json(nullptr);

  CommandResult res;
  res.report = base_report(cfg);
  res.report["results"] = summary;
  res.report["table"] = t.to_json();
  res.summary.push_back("adm_mass " + (summary["adm_mass"].is_null()
                                           ? std::string("n/a")
                                           : fmt(summary["adm_mass"].get<double>())));
  res.summary.push_back("area_infimum " + fmt(inf.value) + (inf.throat_limit ? " (throat limit)" : ""));
  res.table = std::move(t);
  return res;
}

CommandResult cmd_penrose(const ScenarioConfig& cfg) {
  const RadialProfile profile = make_profile(cfg);
  PenroseOptions opts;
  opts.equality_tolerance = cfg.equality_tolerance;
  opts.grid = grid_for(cfg, profile);
  const PenroseReport rep = penrose_check(profile, opts);
  CommandResult res;
  res.report = base_report(cfg);
  res.report["results"] = to_json(rep);
  res.report["verdict"] = to_string(rep.verdict);
  res.exit_code = rep.verdict == PenroseVerdict::Violated ? kViolated : kOk;
  res.summary = {"verdict " + to_string(rep.verdict), "adm_mass " + fmt(rep.adm_mass),
                 "area_infimum " + fmt(rep.area_infimum), "bound " + fmt(rep.bound),
                 "ratio " + (rep.ratio ? fmt(*rep.ratio) : std::string("n/a"))};
  return res;
}

CommandResult cmd_mu_bubble(const ScenarioConfig& cfg) {
  const RadialProfile profile = make_profile(cfg);
  const double eps = required_epsilon(cfg, 0.05);
  MuBubbleSolution sol;
  int doublings = 0;
  if (cfg.beta) {
    sol = minimize(MuBubbleProblem{profile, cfg.r0, PrescribedMeanCurvature(eps, *cfg.beta)});
  } else {
    const BubbleRun run = solve_mu_bubble(profile, cfg.r0, eps);
    sol = run.solution;
    doublings = run.beta_doublings;
  }
  const DiameterReport diam = diameter_report(sol, eps);
  CommandResult res;
  res.report = base_report(cfg);
  res.report["results"] = {{"solution", to_json(sol)},
                           {"beta_doublings", doublings},
                           {"anchor_mean_curvature", sphere_mean_curvature(profile, cfg.r0)},
                           {"el_ok", sol.el_residual <= cfg.el_tolerance},
                           {"mean_curvature_below_2eps", sol.mean_curvature < 2.0 * eps},
                           {"diameter", to_json(diam)}};
  Table t;
  t.columns = {"epsilon", "beta", "rho_star", "area", "mean_curvature", "el_residual",
               "functional_value", "second_order_ok"};
  t.rows.push_back({eps, sol.beta, sol.rho_star, sol.area, sol.mean_curvature, sol.el_residual,
                    sol.functional_value, sol.second_order_ok ? 1.0 : 0.0});
  res.report["table"] = t.to_json();
  res.table = std::move(t);
  res.summary = {"rho_star " + fmt(sol.rho_star), "mean_curvature " + fmt(sol.mean_curvature),
                 "el_residual " + fmt(sol.el_residual)};
  return res;
}

CommandResult cmd_horizon(const ScenarioConfig& cfg) {
  const RadialProfile profile = make_profile(cfg);
  const std::vector<double> eps = cfg.epsilons.empty() ? default_epsilon_schedule() : cfg.epsilons;
  const HorizonSequence seq = horizon_sequence(profile, cfg.r0, eps);
  CommandResult res;
  res.report = base_report(cfg);
  res.report["results"] = to_json(seq);
  const Table t = horizon_table(seq);
  res.report["table"] = t.to_json();
  res.table = t;
  const bool degenerate = std::any_of(seq.steps.begin(), seq.steps.end(),
                                      [](const HorizonStep& s) { return s.degenerate; });
  const bool failed = std::any_of(seq.steps.begin(), seq.steps.end(),
                                  [](const HorizonStep& s) { return !s.run; });
  res.exit_code = degenerate ? kDegenerate : failed ? kConfigError : kOk;
  for (const auto& s : seq.steps) {
    res.summary.push_back("eps " + fmt(s.epsilon) +
                          (s.run ? " lower_bound " + fmt(s.hawking_bound) + " area_bound " +
                                       fmt(s.area_bound)
                                 : " error: " + s.error));
  }
  return res;
}

CommandResult cmd_rigidity(const ScenarioConfig& cfg) {
  const RadialProfile profile = make_profile(cfg);
  const RigidityTrace trace =
      rigidity_iteration(profile, cfg.r0, required_epsilon(cfg, 0.1), cfg.gamma);
  CommandResult res;
  res.report = base_report(cfg);
  res.report["results"] = to_json(trace);
  const Table t = rigidity_table(trace);
  res.report["table"] = t.to_json();
  res.table = t;
  const bool degenerate = std::any_of(trace.steps.begin(), trace.steps.end(),
                                      [](const RigidityStep& s) { return s.degenerate; });
  const bool failed = std::any_of(trace.steps.begin(), trace.steps.end(),
                                  [](const RigidityStep& s) { return !s.run; });
  res.exit_code = degenerate ? kDegenerate
                  : failed   ? kConfigError
                  : trace.all_checks_pass() ? kOk
                                            : kViolated;
  res.summary = {"steps " + std::to_string(trace.steps.size()),
                 "lambda0 " + fmt(trace.lambda0),
                 "cumulative_volume " + fmt(trace.cumulative_volume) + " <= " +
                     fmt(trace.cumulative_bound),
                 std::string("all_checks_pass ") + (trace.all_checks_pass() ? "true" : "false")};
  return res;
}

CommandResult cmd_trumpet(const ScenarioConfig& cfg) {
  const Dimension n(cfg.dimension);
  const double r0 = cfg.profile.r0.value_or(find_r0(n));
  const TrumpetBuild build = build_trumpet(n, r0, cfg.profile.alpha.value_or(min_alpha(n, r0)));
  const RadialGrid grid = grid_for(cfg, build.profile);
  const TrumpetVerification v = verify_trumpet(build.profile, grid);

  CommandResult res;
  res.report = base_report(cfg);
  Json results = {{"params", to_json(build.params)},
                  {"min_alpha", min_alpha(n, r0)},
                  {"warnings", build.warnings},
                  {"verification", to_json(v)}};
  res.summary.push_back(std::string("verification ") + (v.passed() ? "passed" : "FAILED"));
  if (cfg.dimension == 3) {
    PenroseOptions opts;
    opts.grid = grid;
    const PenroseReport rep = penrose_check(build.profile, opts);
    results["penrose"] = to_json(rep);
    res.summary.push_back("adm_mass " + fmt(rep.adm_mass));
    res.summary.push_back("area_infimum " + fmt(rep.area_infimum));
  }
  for (const auto& w : build.warnings) res.summary.push_back("warning: " + w);
  for (const auto& name : v.failing()) res.summary.push_back("failing check: " + name);
  res.report["results"] = results;
  res.exit_code = v.passed() ? kOk : kTrumpetFailed;
  res.exported_profile = build.profile;
  return res;
}

CommandResult cmd_batch(const ScenarioConfig& cfg) {
  struct Outcome {
    int code = kOk;
    std::string out, err;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& s : cfg.scenarios) {
    jobs.push_back(std::async(std::launch::async, [&s] {
      std::ostringstream out, err;
      const int code = run_scenario(s, out, err);
      return Outcome{code, out.str(), err.str()};
    }));
  }
  CommandResult res;
  res.report = base_report(cfg);
  Json list = Json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Outcome o = jobs[i].get();
    const ScenarioConfig& s = cfg.scenarios[i];
    list.push_back({{"name", s.name}, {"command", s.command}, {"exit_code", o.code},
                    {"errors", o.err}});
    res.exit_code = std::max(res.exit_code, o.code);
    res.summary.push_back(s.name + " (" + s.command + ") exit " + std::to_string(o.code));
  }
  res.report["results"] = {{"scenarios", list}};
  return res;
}

int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult res;
  try {
    validate(cfg);
    if (cfg.command == "analyze") res = cmd_analyze(cfg);
    else if (cfg.command == "penrose") res = cmd_penrose(cfg);
    else if (cfg.command == "mu-bubble") res = cmd_mu_bubble(cfg);
    else if (cfg.command == "horizon") res = cmd_horizon(cfg);
    else if (cfg.command == "rigidity") res = cmd_rigidity(cfg);
    else if (cfg.command == "trumpet") res = cmd_trumpet(cfg);
    else res = cmd_batch(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DegenerateMinimizer& e) {
    err << cfg.name << ": degenerate minimizer: " << e.what() << '\n';
    return kDegenerate;
  } catch (const Error& e) {
    err << cfg.name << ": " << e.what() << '\n';
    return kConfigError;
  }
  res.report["exit_code"] = res.exit_code;
  if (cfg.wall_time) res.report["wall_time_s"] = seconds_since(t0);

  const fs::path stem = cfg.output_dir / cfg.name;
  try {
    write_file_atomic(fs::path(stem) += ".json", res.report.dump(2) + "\n");
    if (res.table) write_file_atomic(fs::path(stem) += ".csv", res.table->csv());
    if (res.exported_profile) {
      fs::path target = fs::path(stem) += ".profile.txt";
      fs::path tmp = fs::path(stem) += ".profile.txt.tmp";
      const RadialGrid grid = grid_for(cfg, *res.exported_profile);
      write_tabulated_profile(tmp, *res.exported_profile, grid,
                              "trumpet profile, params in " + cfg.name + ".json");
      fs::rename(tmp, target);
    }
  } catch (const std::exception& e) {
    err << cfg.name << ": cannot write output: " << e.what() << '\n';
    return kInternalError;
  }
  out << cfg.name << " [" << cfg.command << "]\n";
  for (const auto& line : res.summary) out << "  " << line << '\n';
  return res.exit_code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penrose-type inequality checks on radial conformally flat metrics"};
  app.name("penrose-cli");

  std::string command;
  std::optional<std::string> config_path, name, output_dir, kind, tabulated;
  std::optional<int> dimension, grid_count;
  std::optional<double> mass, a, b, trumpet_r0, alpha, r0, epsilon, beta, gamma, grid_lo, grid_hi,
      quad_tol, el_tol, eq_tol;
  std::vector<double> epsilons;
  bool wall_time = false;

  app.add_option("command", command, "analyze | penrose | mu-bubble | horizon | rigidity | trumpet | batch")
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "JSON scenario config");
  app.add_option("--name", name, "output file stem");
  app.add_option("--output-dir", output_dir, "directory for reports");
  app.add_option("--dimension", dimension, "manifold dimension n");
  app.add_option("--profile", kind, "profile kind");
  app.add_option("--mass", mass, "Schwarzschild mass");
  app.add_option("--a", a, "u = a + b r^{2-n}: constant a");
  app.add_option("--b", b, "u = a + b r^{2-n}: coefficient b");
  app.add_option("--tabulated", tabulated, "two-column profile file");
  app.add_option("--trumpet-r0", trumpet_r0, "trumpet gluing radius");
  app.add_option("--alpha", alpha, "trumpet constant alpha");
  app.add_option("--r0", r0, "mu-bubble anchor radius");
  app.add_option("--epsilon", epsilon, "mu-bubble curvature scale");
  app.add_option("--beta", beta, "mu-bubble shift (default: chosen automatically)");
  app.add_option("--epsilons", epsilons, "horizon schedule")->delimiter(',');
  app.add_option("--gamma", gamma, "rigidity exponent in (1, 2)");
  app.add_option("--grid-lo", grid_lo, "smallest grid radius");
  app.add_option("--grid-hi", grid_hi, "largest grid radius");
  app.add_option("--grid-count", grid_count, "number of grid radii");
  app.add_option("--quadrature-tol", quad_tol, "quadrature tolerance");
  app.add_option("--el-tol", el_tol, "Euler-Lagrange residual tolerance");
  app.add_option("--equality-tol", eq_tol, "Penrose equality tolerance");
  app.add_flag("--wall-time", wall_time, "record wall time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  ScenarioConfig cfg;
  try {
    if (config_path) cfg = load_config(*config_path);
    if (!command.empty()) cfg.command = command;
    if (name) cfg.name = *name;
    if (output_dir) {
      for (auto& s : cfg.scenarios) {
        if (s.output_dir == cfg.output_dir) s.output_dir = *output_dir;
      }
      cfg.output_dir = *output_dir;
    }
    if (dimension) cfg.dimension = *dimension;
    if (kind) cfg.profile.kind = *kind;
    if (mass) cfg.profile.mass = *mass;
    if (a) cfg.profile.a = *a;
    if (b) cfg.profile.b = *b;
    if (tabulated) {
      cfg.profile.path = *tabulated;
      if (!kind) cfg.profile.kind = "tabulated";
    }
    if (trumpet_r0) cfg.profile.r0 = *trumpet_r0;
    if (alpha) cfg.profile.alpha = *alpha;
    if (r0) cfg.r0 = *r0;
    if (epsilon) cfg.epsilon = *epsilon;
    if (beta) cfg.beta = *beta;
    if (!epsilons.empty()) cfg.epsilons = epsilons;
    if (gamma) cfg.gamma = *gamma;
    if (grid_lo || grid_hi || grid_count) {
      RadialGrid g = cfg.grid.value_or(RadialGrid{});
      if (grid_lo) g.r_lo = *grid_lo;
      if (grid_hi) g.r_hi = *grid_hi;
      if (grid_count) g.count = *grid_count;
      cfg.grid = g;
    }
    if (quad_tol) cfg.quadrature_tolerance = *quad_tol;
    if (el_tol) cfg.el_tolerance = *el_tol;
    if (eq_tol) cfg.equality_tolerance = *eq_tol;
    if (wall_time) cfg.wall_time = true;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return run_scenario(cfg, out, err);
}

}  // namespace penrose::cli
