#include "penrose/mass_functionals.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "penrose/errors.hpp"

namespace penrose {

namespace {

constexpr int kTailSamples = 257;
constexpr double kTailResidualFactor = 1e-6;
constexpr double kSixteenPi = 16.0 * std::numbers::pi;

void require_three_dimensional(const RadialProfile& profile, const char* what) {
  if (profile.dimension().value() != 3) {
    throw UnsupportedDimension(std::string(what) + " is defined for n = 3 only");
  }
}

// Minimizes sphere_area over [lo, hi] in the logarithmic radius.
std::pair<double, double> refine_area_minimum(const RadialProfile& profile, double lo, double hi) {
  auto f = [&profile](double s) { return sphere_area(profile, std::exp(s)); };
  const auto [s, value] =
      boost::math::tools::brent_find_minima(f, std::log(lo), std::log(hi), 52);
  return {std::exp(s), value};
}

}  // namespace

AdmMass adm_mass_from_tail(const RadialProfile& profile) {
  return adm_mass_from_tail(profile, RadialGrid::default_for(profile).r_hi);
}

AdmMass adm_mass_from_tail(const RadialProfile& profile, double r_hi) {
  const int n = profile.dimension().value();
  const double r_lo = r_hi / 10.0;
  if (!profile.domain().contains(r_lo) || !profile.domain().contains(r_hi)) {
    throw DomainError("adm_mass_from_tail: fit window outside profile domain");
  }
  const RadialGrid window(r_lo, r_hi, kTailSamples);
  const std::vector<double> rs = window.points();
  std::vector<double> xs(rs.size()), us(rs.size());
  double x_mean = 0.0, u_mean = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    xs[i] = std::pow(rs[i], 2 - n);
    us[i] = profile.u(rs[i]);
    x_mean += xs[i];
    u_mean += us[i];
  }
  x_mean /= rs.size();
  u_mean /= rs.size();
  double sxx = 0.0, sxu = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    sxu += (xs[i] - x_mean) * (us[i] - u_mean);
  }
  AsymptoticTail tail;
  tail.b = sxu / sxx;
  tail.a = u_mean - tail.b * x_mean;
  tail.window_lo = r_lo;
  tail.window_hi = r_hi;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    tail.fit_residual = std::max(tail.fit_residual, std::abs(us[i] - (tail.a + tail.b * xs[i])));
  }
  if (!(tail.a > 0.0) || tail.fit_residual > kTailResidualFactor * tail.a) {
    std::ostringstream os;
    os << "profile is not asymptotically flat on [" << r_lo << ", " << r_hi
       << "]: a = " << tail.a << ", fit residual = " << tail.fit_residual;
    throw NotAsymptoticallyFlat(os.str());
  }
  return {2.0 * tail.a * tail.b, tail};
}

double adm_flux(const RadialProfile& profile, double rho) {
  const int n = profile.dimension().value();
  const RadialJet j = profile.jet(rho);
  return -2.0 / (n - 2) * j.u * j.du * std::pow(rho, n - 1);
}

HawkingMassValue hawking_mass(const RadialProfile& profile, double r) {
  require_three_dimensional(profile, "hawking_mass");
  HawkingMassValue out;
  out.area = sphere_area(profile, r);
  const double h = sphere_mean_curvature(profile, r);
  out.h_squared_integral = out.area * h * h;
  out.value = std::sqrt(out.area / kSixteenPi) * (1.0 - out.h_squared_integral / kSixteenPi);
  return out;
}

AreaInfimum area_infimum_radial(const RadialProfile& profile, const RadialGrid& grid) {
  const RadialDomain dom = profile.domain();
  if (!dom.contains(grid.r_lo) || !dom.contains(grid.r_hi)) {
    throw DomainError("area_infimum_radial: grid outside profile domain");
  }
  const std::vector<double> rs = grid.points();
  std::vector<double> areas(rs.size());
  std::transform(rs.begin(), rs.end(), areas.begin(),
                 [&profile](double r) { return sphere_area(profile, r); });
  const auto it = std::min_element(areas.begin(), areas.end());
  const std::size_t i = static_cast<std::size_t>(it - areas.begin());

  AreaInfimum out;
  if (i > 0 && i + 1 < rs.size()) {
    const auto [r_star, a_star] = refine_area_minimum(profile, rs[i - 1], rs[i + 1]);
    out.value = std::min(a_star, areas[i]);
    out.argmin = a_star <= areas[i] ? r_star : rs[i];
    return out;
  }
  if (i + 1 == rs.size()) {
    out.value = areas[i];
    out.argmin = rs[i];
    return out;
  }

  // Minimum at the inner edge of the grid.
  out.throat_limit = true;
  if (dom.closed && grid.r_lo <= dom.lo) {
    out.value = areas[0];
    return out;
  }
  const double lo = dom.lo;
  std::vector<double> seq{areas[0]};
  std::vector<double> radii{rs[0]};
  double prev_limit = areas[0];
  for (int k = 1; k <= 300; ++k) {
    const double r = lo + (rs[0] - lo) * std::pow(10.0, -k);
    if (!(r > lo) || r < 1e-300) break;
    const double a = sphere_area(profile, r);
    if (a > seq.back()) {
      // The areas turn back up: the infimum is attained below the grid.
      const double hi_r = radii.size() >= 2 ? radii[radii.size() - 2] : rs[1];
      const auto [r_star, a_star] = refine_area_minimum(profile, r, hi_r);
      out.throat_limit = false;
      out.value = std::min(a_star, seq.back());
      out.argmin = a_star <= seq.back() ? r_star : radii.back();
      return out;
    }
    seq.push_back(a);
    radii.push_back(r);
    const double limit = aitken_limit(seq);
    if (seq.size() >= 4 && std::abs(limit - prev_limit) <= 1e-13 * std::max(1.0, std::abs(limit))) {
      prev_limit = limit;
      break;
    }
    prev_limit = limit;
  }
  out.extrapolated = true;
  out.value = std::max(0.0, prev_limit);
  return out;
}

std::string to_string(PenroseVerdict v) {
  switch (v) {
    case PenroseVerdict::Strict: return "strict";
    case PenroseVerdict::EqualityWithinTol: return "equality-within-tol";
    case PenroseVerdict::Violated: return "violated";
  }
  return "unknown";
}

std::optional<double> find_horizon(const RadialProfile& profile, const RadialGrid& grid) {
  const std::vector<double> rs = grid.points();
  auto h_scaled = [&profile](double r) { return sphere_mean_curvature(profile, r) * r; };
  double prev = h_scaled(rs[0]);
  for (std::size_t i = 1; i < rs.size(); ++i) {
    const double cur = h_scaled(rs[i]);
    const bool above_noise = std::max(std::abs(prev), std::abs(cur)) > 1e-10;
    if (prev <= 0.0 && cur > 0.0 && above_noise) {
      if (prev == 0.0) return rs[i - 1];
      auto f = [&h_scaled](double s) { return h_scaled(std::exp(s)); };
      boost::uintmax_t iters = 200;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          f, std::log(rs[i - 1]), std::log(rs[i]), prev, cur,
          boost::math::tools::eps_tolerance<double>(52), iters);
      return std::exp(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return std::nullopt;
}

PenroseReport penrose_check(const RadialProfile& profile, const PenroseOptions& opts) {
  require_three_dimensional(profile, "penrose_check");
  const RadialGrid grid = opts.grid.value_or(RadialGrid::default_for(profile));
  const AdmMass adm = adm_mass_from_tail(profile, grid.r_hi);
  const AreaInfimum inf = area_infimum_radial(profile, grid);

  PenroseReport rep;
  rep.adm_mass = adm.mass;
  rep.area_infimum = inf.value;
  rep.bound = std::sqrt(inf.value / kSixteenPi);
  rep.horizon_radius = find_horizon(profile, grid);

  // Below this the bound is numerically zero and only the sign of m matters.
  constexpr double kDegenerateBound = 1e-9;
  constexpr double kDegenerateMass = 1e-8;
  if (rep.bound > kDegenerateBound) {
    rep.ratio = rep.adm_mass / rep.bound;
    if (std::abs(*rep.ratio - 1.0) <= opts.equality_tolerance) {
      rep.verdict = PenroseVerdict::EqualityWithinTol;
    } else {
      rep.verdict = *rep.ratio > 1.0 ? PenroseVerdict::Strict : PenroseVerdict::Violated;
    }
  } else if (std::abs(rep.adm_mass - rep.bound) <= kDegenerateMass) {
    rep.verdict = PenroseVerdict::EqualityWithinTol;
  } else {
    rep.verdict = rep.adm_mass > rep.bound ? PenroseVerdict::Strict : PenroseVerdict::Violated;
  }
  return rep;
}

AdmHawkingResult adm_hawking_check(const RadialProfile& profile, double r,
                                   const std::optional<RadialGrid>& grid) {
  require_three_dimensional(profile, "adm_hawking_check");
  const RadialGrid g = grid.value_or(RadialGrid::default_for(profile));
  const double area = sphere_area(profile, r);
  for (double rp : g.points()) {
    if (rp < r) continue;
    if (sphere_area(profile, rp) < area * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "S_" << r << " is not outer-minimizing: S_" << rp << " encloses it with smaller area";
      throw NotOuterMinimizing(os.str());
    }
  }
  AdmHawkingResult out;
  out.adm_mass = adm_mass_from_tail(profile, g.r_hi).mass;
  out.hawking_mass = hawking_mass(profile, r).value;
  out.passed = out.adm_mass >= out.hawking_mass - 1e-8;
  out.equality = std::abs(out.adm_mass - out.hawking_mass) <= 1e-8;
  return out;
}

}  // namespace penrose
