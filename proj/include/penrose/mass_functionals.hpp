#pragma once

// ADM mass, Hawking mass and the radial area infimum of asymptotically flat
// radial profiles, plus the Penrose-type and ADM-Hawking inequalities
// evaluated as predicates.

#include <optional>
#include <string>

#include "penrose/radial_geometry.hpp"

namespace penrose {

struct AsymptoticTail {
  double a = 0.0;             // u -> a at infinity
  double b = 0.0;             // coefficient of r^{2-n}
  double fit_residual = 0.0;  // max |u - (a + b r^{2-n})| over the fit window
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct AdmMass {
  double mass = 0.0;
  AsymptoticTail tail;
};

// Least-squares fit of u against (1, r^{2-n}) on [r_hi/10, r_hi] and
// m = 2ab, the mass of the chart rescaled so that u -> 1. Throws
// NotAsymptoticallyFlat when the fit residual exceeds 1e-6 a.
AdmMass adm_mass_from_tail(const RadialProfile& profile, double r_hi);
AdmMass adm_mass_from_tail(const RadialProfile& profile);

// Coordinate-sphere flux integral at radius rho, in the chart rescaled so
// that g = delta on S_rho. For g = u^{4/(n-2)} delta this reduces to
//     m(rho) = -2/(n-2) u(rho) u'(rho) rho^{n-1},
// which tends to adm_mass_from_tail as rho -> inf with an O(1/rho) error.
double adm_flux(const RadialProfile& profile, double rho);

struct HawkingMassValue {
  double area = 0.0;
  double h_squared_integral = 0.0;
  double value = 0.0;
};

// sqrt(A/16pi) (1 - A H^2 / 16pi) for the coordinate sphere S_r (n = 3).
HawkingMassValue hawking_mass(const RadialProfile& profile, double r);

struct AreaInfimum {
  double value = 0.0;
  std::optional<double> argmin;  // empty when only approached at the throat
  bool throat_limit = false;
  bool extrapolated = false;     // throat value obtained by extrapolation
};

// Infimum of sphere_area over coordinate spheres. The grid minimum is refined
// by a 1D minimization; a minimum at the inner edge of the grid is followed
// towards the inner end of the domain and extrapolated.
AreaInfimum area_infimum_radial(const RadialProfile& profile, const RadialGrid& grid);

enum class PenroseVerdict { Strict, EqualityWithinTol, Violated };
std::string to_string(PenroseVerdict v);

struct PenroseReport {
  double adm_mass = 0.0;
  double area_infimum = 0.0;  // radial area infimum (coordinate spheres only)
  double bound = 0.0;         // sqrt(A_g / 16 pi)
  std::optional<double> ratio;  // empty when bound == 0
  PenroseVerdict verdict = PenroseVerdict::Violated;
  std::optional<double> horizon_radius;
};

struct PenroseOptions {
  double equality_tolerance = 1e-6;
  std::optional<RadialGrid> grid;  // defaults to RadialGrid::default_for
};

PenroseReport penrose_check(const RadialProfile& profile, const PenroseOptions& opts = {});

// Zero of the mean curvature on the grid, refined to machine precision.
std::optional<double> find_horizon(const RadialProfile& profile, const RadialGrid& grid);

struct AdmHawkingResult {
  bool passed = false;
  bool equality = false;  // |m - m_H| <= 1e-8
  double adm_mass = 0.0;
  double hawking_mass = 0.0;
};

// Checks m >= m_H(S_r) - 1e-8. S_r must be outer-minimizing in the radial
// sense (no larger coordinate sphere on the grid has smaller area), otherwise
// the check is refused with NotOuterMinimizing.
AdmHawkingResult adm_hawking_check(const RadialProfile& profile, double r,
                                   const std::optional<RadialGrid>& grid = std::nullopt);

}  // namespace penrose
