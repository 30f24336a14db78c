#include "penrose/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "penrose/errors.hpp"

namespace penrose {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

std::string format_cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

Json Table::to_json() const {
  Json data = Json::array();
  for (const auto& row : rows) {
    Json r = Json::array();
    for (double v : row) r.push_back(number(v));
    data.push_back(std::move(r));
  }
  return {{"columns", columns}, {"rows", std::move(data)}};
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

std::string Table::csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

Json to_json(const PenroseReport& rep) {
  return {{"adm_mass", number(rep.adm_mass)},
          {"area_infimum", number(rep.area_infimum)},
          {"bound", number(rep.bound)},
          {"ratio", number(rep.ratio)},
          {"verdict", to_string(rep.verdict)},
          {"horizon_radius", number(rep.horizon_radius)}};
}

Json to_json(const MuBubbleSolution& sol) {
  return {{"epsilon", sol.epsilon},
          {"beta", sol.beta},
          {"rho_star", sol.rho_star},
          {"area", sol.area},
          {"functional_value", sol.functional_value},
          {"mean_curvature", sol.mean_curvature},
          {"distance", sol.distance},
          {"el_residual", sol.el_residual},
          {"second_order_ok", sol.second_order_ok},
          {"barrier_radius", sol.barrier_radius}};
}

Json to_json(const DiameterReport& rep) {
  return {{"intrinsic_diameter", rep.intrinsic_diameter},
          {"bound", rep.bound},
          {"within_bound", rep.within_bound}};
}

Json to_json(const HorizonSequence& seq) {
  Json steps = Json::array();
  for (const auto& s : seq.steps) {
    Json j = {{"epsilon", s.epsilon}};
    if (s.run) {
      j["solution"] = to_json(s.run->solution);
      j["beta_doublings"] = s.run->beta_doublings;
      j["hawking_bound"] = number(s.hawking_bound);
      j["area_bound"] = number(s.area_bound);
    } else {
      j["error"] = s.error;
      j["degenerate"] = s.degenerate;
    }
    steps.push_back(std::move(j));
  }
  return {{"anchor_radius", seq.anchor_radius},
          {"anchor_mean_curvature", seq.anchor_mean_curvature},
          {"anchor_area", seq.anchor_area},
          {"area_infimum", seq.area_infimum},
          {"steps", std::move(steps)}};
}

Json to_json(const RigidityTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    Json j = {{"k", s.k},
              {"epsilon", s.epsilon},
              {"annulus_volume", number(s.annulus_volume)},
              {"volume_bound", number(s.volume_bound)},
              {"area_bound", number(s.area_bound)},
              {"volume_ok", s.volume_ok},
              {"area_ok", s.area_ok}};
    if (s.run) {
      j["solution"] = to_json(s.run->solution);
      j["beta_doublings"] = s.run->beta_doublings;
    } else {
      j["error"] = s.error;
      j["degenerate"] = s.degenerate;
    }
    steps.push_back(std::move(j));
  }
  return {{"gamma", trace.gamma},
          {"epsilon", trace.epsilon},
          {"lambda0", trace.lambda0},
          {"epsilon0", trace.epsilon0},
          {"area_infimum", trace.area_infimum},
          {"equality_case", trace.equality_case},
          {"cumulative_volume", trace.cumulative_volume},
          {"cumulative_bound", number(trace.cumulative_bound)},
          {"cumulative_ok", trace.cumulative_ok},
          {"nested", trace.nested},
          {"all_checks_pass", trace.all_checks_pass()},
          {"steps", std::move(steps)}};
}

Json to_json(const TrumpetParams& params) {
  return {{"n", params.n}, {"r0", params.r0}, {"alpha", params.alpha}, {"alpha0", params.alpha0}};
}

Json to_json(const TrumpetVerification& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"passed", v.passed()},
          {"failing", v.failing()},
          {"fit_residual", number(v.fit_residual)},
          {"adm_mass", number(v.adm_mass)},
          {"min_scalar_curvature", number(v.min_scalar_curvature)},
          {"max_laplacian_term", number(v.max_laplacian_term)},
          {"min_areal_derivative", number(v.min_areal_derivative)},
          {"first_non_convex_radius", number(v.first_non_convex_radius)},
          {"distance_diverges", v.distance_diverges},
          {"throat_area", number(v.throat_area)},
          {"expected_throat_area", number(v.expected_throat_area)},
          {"checks", std::move(checks)}};
}

Table horizon_table(const HorizonSequence& seq) {
  Table t;
  t.columns = {"epsilon",     "beta",          "rho_star",   "area",
               "mean_curvature", "el_residual", "hawking_bound", "area_bound",
               "second_order_ok", "beta_doublings"};
  for (const auto& s : seq.steps) {
    if (s.run) {
      const MuBubbleSolution& x = s.run->solution;
      t.rows.push_back({s.epsilon, x.beta, x.rho_star, x.area, x.mean_curvature, x.el_residual,
                        s.hawking_bound, s.area_bound, flag(x.second_order_ok),
                        double(s.run->beta_doublings)});
    } else {
      std::vector<double> row(t.columns.size(), kNaN);
      row[0] = s.epsilon;
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table rigidity_table(const RigidityTrace& trace) {
  Table t;
  t.columns = {"k",           "epsilon",        "beta",           "rho_star",
               "area",        "mean_curvature", "el_residual",    "annulus_volume",
               "volume_bound", "area_bound",    "volume_ok",      "area_ok"};
  for (const auto& s : trace.steps) {
    std::vector<double> row(t.columns.size(), kNaN);
    row[0] = s.k;
    row[1] = s.epsilon;
    if (s.run) {
      const MuBubbleSolution& x = s.run->solution;
      row[2] = x.beta;
      row[3] = x.rho_star;
      row[4] = x.area;
      row[5] = x.mean_curvature;
      row[6] = x.el_residual;
    }
    row[7] = s.annulus_volume.value_or(kNaN);
    row[8] = s.volume_bound;
    row[9] = s.area_bound.value_or(kNaN);
    row[10] = flag(s.volume_ok);
    row[11] = flag(s.area_ok);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  fs::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace penrose
