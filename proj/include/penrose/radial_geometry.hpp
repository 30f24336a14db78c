#pragma once

// Rotationally symmetric, conformally flat metrics
//
//     g = u(r)^{4/(n-2)} (dr^2 + r^2 g_{S^{n-1}})
//
// on an annulus of R^n, described by the radial conformal factor u. Every
// geometric quantity of the coordinate spheres S_r is a closed expression in
// u, u', u'' and r; the few integrals (radial distance, annulus volume) go
// through quadrature.hpp.

#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "penrose/quadrature.hpp"

namespace penrose {

class Dimension {
 public:
  explicit Dimension(int n);
  int value() const { return n_; }
  // Exponent 2/(n-2) turning u into the areal scale u^{2/(n-2)}.
  double areal_exponent() const { return 2.0 / (n_ - 2); }
  bool operator==(const Dimension&) const = default;

 private:
  int n_;
};

// Volume of the unit sphere S^{n-1}(1).
double unit_sphere_volume(Dimension n);

struct RadialJet {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
};

// Radii where a profile is defined. Open ends (0 or +inf) are limits, not
// points of the domain; tabulated profiles have closed ends.
struct RadialDomain {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool closed = false;

  bool contains(double r) const { return closed ? (r >= lo && r <= hi) : (r > lo && r < hi); }
  // Closure, used by integrals that accept improper endpoints.
  bool contains_closure(double r) const { return r >= lo && r <= hi; }
};

enum class ProfileKind { Euclidean, SchwarzschildLike, Cylinder, Trumpet, Tabulated };

std::string to_string(ProfileKind kind);

// Evaluator behind a RadialProfile. Implementations are immutable.
class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual ProfileKind kind() const = 0;
  virtual RadialDomain domain() const = 0;
  virtual double value(double r) const = 0;
  virtual RadialJet jet(double r) const = 0;
};

class RadialProfile {
 public:
  RadialProfile(Dimension n, std::shared_ptr<const ProfileModel> model);

  static RadialProfile euclidean(Dimension n);
  // u = a + b r^{2-n}, a > 0, b >= 0.
  static RadialProfile schwarzschild_like(Dimension n, double a, double b);
  // Schwarzschild of ADM mass m: a = 1, b = m/2.
  static RadialProfile schwarzschild(Dimension n, double mass);
  // u = r^{(2-n)/2}: the round cylinder dt^2 + g_{S^{n-1}}.
  static RadialProfile cylinder(Dimension n);
  // Samples (r_i, u_i), r strictly increasing, u strictly positive.
  static RadialProfile tabulated(Dimension n, std::vector<double> r, std::vector<double> u);

  Dimension dimension() const { return n_; }
  ProfileKind kind() const { return model_->kind(); }
  RadialDomain domain() const { return model_->domain(); }
  const ProfileModel& model() const { return *model_; }

  // Both throw DomainError for r outside the domain.
  double u(double r) const;
  RadialJet jet(double r) const;

 private:
  Dimension n_;
  std::shared_ptr<const ProfileModel> model_;
};

// Logarithmically spaced radii.
struct RadialGrid {
  double r_lo = 1e-4;
  double r_hi = 1e4;
  int count = 4096;

  RadialGrid() = default;
  RadialGrid(double lo, double hi, int n);
  std::vector<double> points() const;

  // [1e-4, 1e4] with 4096 points, intersected with the profile domain.
  static RadialGrid default_for(const RadialProfile& profile);
};

struct SphereGeometry {
  double r = 0.0;
  double area = 0.0;
  double mean_curvature = 0.0;
  double intrinsic_diameter = 0.0;
};

// u^{2/(n-2)} r: the radius of the round sphere isometric to S_r.
double areal_radius(const RadialProfile& profile, double r);

double radial_laplacian(const RadialProfile& profile, double r);
double scalar_curvature(const RadialProfile& profile, double r);
double sphere_area(const RadialProfile& profile, double r);
// Positive iff S_r is mean-convex towards infinity.
double sphere_mean_curvature(const RadialProfile& profile, double r);
// d/dr [u^{2/(n-2)} r]; same sign as the mean curvature.
double areal_radius_derivative(const RadialProfile& profile, double r);
SphereGeometry sphere_geometry(const RadialProfile& profile, double r);

// Radial arc length between S_{r_a} and S_{r_b}, r_a <= r_b. Either end may sit
// on an open end of the domain (r = 0, r = inf); divergence is flagged.
ImproperValue geodesic_distance(const RadialProfile& profile, double r_a, double r_b,
                                const QuadratureOptions& opts = {});

// Volume of the annulus r_a < r < r_b.
ImproperValue volume_between(const RadialProfile& profile, double r_a, double r_b,
                             const QuadratureOptions& opts = {});

// Two-column "r u" text, '#' starts a comment line.
RadialProfile read_tabulated_profile(const std::filesystem::path& path, Dimension n);
void write_tabulated_profile(const std::filesystem::path& path, const RadialProfile& profile,
                             const RadialGrid& grid, const std::string& header = {});

}  // namespace penrose
