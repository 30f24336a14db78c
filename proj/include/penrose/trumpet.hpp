#pragma once

// Horizon-free asymptotically flat metric on R^n \ {O}: the conformal factor
// bends the cylindrical factor u1 = r^{(2-n)/2} near the puncture into the
// Schwarzschild factor u2 = 1 + r^{2-n} near infinity,
//
//     u(r) = alpha + u1(r0) - int_r^inf [zeta u1' + (1 - zeta) u2'] ds,
//
// with a smooth cutoff zeta equal to 1 on [0, r0] and 0 on [2 r0, inf).

#include <optional>
#include <string>
#include <vector>

#include "penrose/mass_functionals.hpp"
#include "penrose/radial_geometry.hpp"

namespace penrose {

struct CutoffValue {
  double zeta = 0.0;
  double zeta_prime = 0.0;
};

// zeta(t) = phi((2r0 - t)/r0) / [phi((2r0 - t)/r0) + phi((t - r0)/r0)],
// phi(s) = exp(-1/s) for s > 0 and 0 otherwise.
class CutoffSpec {
 public:
  explicit CutoffSpec(double r0);
  double r0() const { return r0_; }
  CutoffValue eval(double t) const;

 private:
  double r0_;
};

CutoffValue cutoff_eval(const CutoffSpec& spec, double t);

// Largest r0 with u1'(r) > u2'(r) on (0, 2 r0): 2 r0 = 2^{2/(n-2)}.
double find_r0(Dimension n);

// 1.1 max((2r0)^{2-n}, 2/(n-2) sup_{[r0, 2r0]} (|r u1'| + |r u2'|)), the
// supremum taken over 2048 samples.
double min_alpha(Dimension n, double r0);

struct TrumpetParams {
  int n = 3;
  double r0 = 0.0;
  double alpha = 0.0;
  double alpha0 = 0.0;  // u = alpha0 + r^{2-n} for r >= 2 r0
};

struct TrumpetBuild {
  RadialProfile profile;
  TrumpetParams params;
  std::vector<std::string> warnings;  // e.g. alpha below min_alpha
};

TrumpetBuild build_trumpet(Dimension n, double r0, double alpha);
// find_r0 and min_alpha defaults.
TrumpetBuild build_default_trumpet(Dimension n);

// The three pieces of the Laplacian of u:
//     zeta Lap u1 + (1 - zeta) Lap u2 + zeta' (u1' - u2').
struct LaplacianTerms {
  double cylinder = 0.0;
  double schwarzschild = 0.0;
  double cutoff = 0.0;
  double total() const { return cylinder + schwarzschild + cutoff; }
};

LaplacianTerms trumpet_laplacian_terms(const TrumpetParams& params, double r);

// Recovers the parameters of a profile built by build_trumpet.
std::optional<TrumpetParams> trumpet_params(const RadialProfile& profile);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TrumpetVerification {
  // (a) asymptotic flatness
  double fit_residual = 0.0;
  std::optional<double> adm_mass;  // n = 3 only
  // (b) scalar curvature and the sign of each Laplacian term
  double min_scalar_curvature = 0.0;
  double max_laplacian_term = 0.0;
  // (c) mean convexity of every coordinate sphere
  double min_areal_derivative = 0.0;
  std::optional<double> first_non_convex_radius;
  // (d) completeness towards the puncture
  bool distance_diverges = false;
  // (e) throat area
  double throat_area = 0.0;
  double expected_throat_area = 0.0;

  std::vector<CheckResult> checks;
  bool passed() const;
  std::vector<std::string> failing() const;
};

TrumpetVerification verify_trumpet(const RadialProfile& profile, const RadialGrid& grid);

}  // namespace penrose
