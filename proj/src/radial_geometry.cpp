#include "penrose/radial_geometry.hpp"

#include <boost/math/interpolators/barycentric_rational.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "penrose/errors.hpp"

namespace penrose {

Dimension::Dimension(int n) : n_(n) {
  if (n < 3) throw UnsupportedDimension("dimension must be at least 3, got " + std::to_string(n));
}

double unit_sphere_volume(Dimension n) {
  const double half = 0.5 * n.value();
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Euclidean: return "euclidean";
    case ProfileKind::SchwarzschildLike: return "schwarzschild_like";
    case ProfileKind::Cylinder: return "cylinder";
    case ProfileKind::Trumpet: return "trumpet";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

class EuclideanModel final : public ProfileModel {
 public:
  ProfileKind kind() const override { return ProfileKind::Euclidean; }
  RadialDomain domain() const override { return {}; }
  double value(double) const override { return 1.0; }
  RadialJet jet(double) const override { return {1.0, 0.0, 0.0}; }
};

class SchwarzschildLikeModel final : public ProfileModel {
 public:
  SchwarzschildLikeModel(int n, double a, double b) : n_(n), a_(a), b_(b) {}
  ProfileKind kind() const override { return ProfileKind::SchwarzschildLike; }
  RadialDomain domain() const override { return {}; }
  double value(double r) const override { return a_ + b_ * std::pow(r, 2 - n_); }
  RadialJet jet(double r) const override {
    const double q = std::pow(r, 2 - n_);  // r^{2-n}
    return {a_ + b_ * q, (2.0 - n_) * b_ * q / r, (2.0 - n_) * (1.0 - n_) * b_ * q / (r * r)};
  }

 private:
  int n_;
  double a_, b_;
};

class CylinderModel final : public ProfileModel {
 public:
  explicit CylinderModel(int n) : n_(n) {}
  ProfileKind kind() const override { return ProfileKind::Cylinder; }
  RadialDomain domain() const override { return {}; }
  double value(double r) const override { return std::pow(r, 0.5 * (2 - n_)); }
  RadialJet jet(double r) const override {
    const double k = 0.5 * (2 - n_);
    const double u = std::pow(r, k);
    return {u, k * u / r, k * (k - 1.0) * u / (r * r)};
  }

 private:
  int n_;
};

// Floater-Hormann rational interpolation of ln u against ln r. It is smooth
// between nodes, so finite differences of the interpolant stay clean; the
// logarithms turn the power laws at both ends into nearly linear data.
class TabulatedModel final : public ProfileModel {
 public:
  TabulatedModel(const std::vector<double>& r, const std::vector<double>& u)
      : lo_(r.front()), hi_(r.back()), nodes_(logs(r)), interp_(make_interp(r, u)) {}

  ProfileKind kind() const override { return ProfileKind::Tabulated; }
  RadialDomain domain() const override { return {lo_, hi_, true}; }
  double value(double r) const override { return std::exp(interp_(std::log(r))); }

  // Works on y = ln u as a function of x = ln r: y' from the interpolant,
  // y'' by fourth-order central differences of y', then
  //     u' = u y' / r,  u'' = u (y'' + y'^2 - y') / r^2.
  RadialJet jet(double r) const override {
    constexpr double k = 1e-3;
    const double x = std::log(r);
    const double u = std::exp(interp_(x));
    const double y1 = prime(x);
    const double y2 = (prime(x - 2 * k) - 8.0 * prime(x - k) + 8.0 * prime(x + k) - prime(x + 2 * k)) /
                      (12.0 * k);
    return {u, u * y1 / r, u * (y2 + y1 * y1 - y1) / (r * r)};
  }

 private:
  // boost's prime() loses accuracy as x approaches a node (exactly at a node
  // it is wrong). Within a hundredth of the local spacing it is replaced by
  // the fourth-order midpoint interpolant of prime() at +-h, +-2h.
  double prime(double x) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.end()) --it;
    if (it == nodes_.begin()) ++it;
    const double spacing = *it - *std::prev(it);
    const double gap = std::min(std::abs(*it - x), std::abs(x - *std::prev(it)));
    if (gap > 0.01 * spacing) return interp_.prime(x);
    const double h = 0.1 * spacing;
    return (4.0 * (interp_.prime(x - h) + interp_.prime(x + h)) - interp_.prime(x - 2 * h) -
            interp_.prime(x + 2 * h)) /
           6.0;
  }

  static std::vector<double> logs(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double a) { return std::log(a); });
    return out;
  }

  static boost::math::barycentric_rational<double> make_interp(const std::vector<double>& r,
                                                               const std::vector<double>& u) {
    std::vector<double> x = logs(r), y = logs(u);
    const std::size_t order = std::min<std::size_t>(5, x.size() - 1);
    return boost::math::barycentric_rational<double>(std::move(x), std::move(y), order);
  }

  double lo_, hi_;
  std::vector<double> nodes_;
  boost::math::barycentric_rational<double> interp_;
};

void require_in_domain(const RadialProfile& profile, double r, const char* what) {
  if (!profile.domain().contains(r)) {
    std::ostringstream os;
    os << what << ": radius " << r << " outside profile domain";
    throw DomainError(os.str());
  }
}

}  // namespace

RadialProfile::RadialProfile(Dimension n, std::shared_ptr<const ProfileModel> model)
    : n_(n), model_(std::move(model)) {
  if (!model_) throw PreconditionError("RadialProfile needs a model");
}

RadialProfile RadialProfile::euclidean(Dimension n) {
  return {n, std::make_shared<EuclideanModel>()};
}

RadialProfile RadialProfile::schwarzschild_like(Dimension n, double a, double b) {
  if (!(a > 0.0) || !(b >= 0.0))
    throw PreconditionError("schwarzschild_like needs a > 0 and b >= 0");
  return {n, std::make_shared<SchwarzschildLikeModel>(n.value(), a, b)};
}

RadialProfile RadialProfile::schwarzschild(Dimension n, double mass) {
  return schwarzschild_like(n, 1.0, 0.5 * mass);
}

RadialProfile RadialProfile::cylinder(Dimension n) {
  return {n, std::make_shared<CylinderModel>(n.value())};
}

RadialProfile RadialProfile::tabulated(Dimension n, std::vector<double> r, std::vector<double> u) {
  if (r.size() != u.size()) throw InputError("tabulated profile: column lengths differ");
  if (r.size() < 2) throw InputError("tabulated profile needs at least two samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw InputError("tabulated profile: radii must be positive");
    if (!(u[i] > 0.0)) throw InputError("tabulated profile: u must be strictly positive");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw InputError("tabulated profile: radii must be strictly increasing");
  }
  return {n, std::make_shared<TabulatedModel>(r, u)};
}

double RadialProfile::u(double r) const {
  require_in_domain(*this, r, "u");
  return model_->value(r);
}

RadialJet RadialProfile::jet(double r) const {
  require_in_domain(*this, r, "jet");
  return model_->jet(r);
}

RadialGrid::RadialGrid(double lo, double hi, int n) : r_lo(lo), r_hi(hi), count(n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw PreconditionError("RadialGrid needs 0 < r_lo < r_hi and count >= 2");
}

std::vector<double> RadialGrid::points() const {
  std::vector<double> pts(count);
  const double llo = std::log(r_lo), lhi = std::log(r_hi);
  for (int i = 0; i < count; ++i) {
    pts[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  }
  pts.front() = r_lo;
  pts.back() = r_hi;
  return pts;
}

RadialGrid RadialGrid::default_for(const RadialProfile& profile) {
  const RadialDomain d = profile.domain();
  double lo = 1e-4, hi = 1e4;
  if (d.closed) {
    lo = std::max(lo, d.lo);
    hi = std::min(hi, d.hi);
  } else {
    if (lo <= d.lo) lo = d.lo * (1.0 + 1e-12) + 1e-300;
    if (hi >= d.hi) hi = d.hi * (1.0 - 1e-12);
  }
  return {lo, hi, 4096};
}

double areal_radius(const RadialProfile& profile, double r) {
  return std::pow(profile.u(r), profile.dimension().areal_exponent()) * r;
}

double radial_laplacian(const RadialProfile& profile, double r) {
  const RadialJet j = profile.jet(r);
  return j.d2u + (profile.dimension().value() - 1) / r * j.du;
}

double scalar_curvature(const RadialProfile& profile, double r) {
  const int n = profile.dimension().value();
  const RadialJet j = profile.jet(r);
  const double lap = j.d2u + (n - 1) / r * j.du;
  return -4.0 * (n - 1) / (n - 2) * std::pow(j.u, -double(n + 2) / (n - 2)) * lap;
}

double sphere_area(const RadialProfile& profile, double r) {
  const Dimension n = profile.dimension();
  return unit_sphere_volume(n) * std::pow(areal_radius(profile, r), n.value() - 1);
}

double areal_radius_derivative(const RadialProfile& profile, double r) {
  const double p = profile.dimension().areal_exponent();
  const RadialJet j = profile.jet(r);
  return std::pow(j.u, p) * (1.0 + p * r * j.du / j.u);
}

double sphere_mean_curvature(const RadialProfile& profile, double r) {
  const int n = profile.dimension().value();
  const double p = profile.dimension().areal_exponent();
  const RadialJet j = profile.jet(r);
  // (n-1) (u^p r)' / (u^{2p} r) with (u^p r)' = u^p (1 + p r u'/u).
  return (n - 1) * (1.0 + p * r * j.du / j.u) / (std::pow(j.u, p) * r);
}

SphereGeometry sphere_geometry(const RadialProfile& profile, double r) {
  const double areal = areal_radius(profile, r);
  return {r, sphere_area(profile, r), sphere_mean_curvature(profile, r),
          std::numbers::pi * areal};
}

namespace {

void require_closure(const RadialProfile& profile, double r_a, double r_b, const char* what) {
  const RadialDomain d = profile.domain();
  if (!(r_a <= r_b) || !d.contains_closure(r_a) || !d.contains_closure(r_b)) {
    std::ostringstream os;
    os << what << ": need r_a <= r_b inside the profile domain, got [" << r_a << ", " << r_b
       << "]";
    throw DomainError(os.str());
  }
}

}  // namespace

ImproperValue geodesic_distance(const RadialProfile& profile, double r_a, double r_b,
                                const QuadratureOptions& opts) {
  require_closure(profile, r_a, r_b, "geodesic_distance");
  const double p = profile.dimension().areal_exponent();
  const ProfileModel& model = profile.model();
  auto density = [&model, p](double r) { return std::pow(model.value(r), p); };
  return integrate_radial_improper(density, r_a, r_b, opts);
}

ImproperValue volume_between(const RadialProfile& profile, double r_a, double r_b,
                             const QuadratureOptions& opts) {
  require_closure(profile, r_a, r_b, "volume_between");
  const Dimension n = profile.dimension();
  const double p = n.areal_exponent();
  const double omega = unit_sphere_volume(n);
  const int nn = n.value();
  const ProfileModel& model = profile.model();
  // omega u^{2n/(n-2)} r^{n-1} = omega (u^p r)^n / r
  auto density = [&model, p, omega, nn](double r) {
    return omega * std::pow(std::pow(model.value(r), p) * r, nn) / r;
  };
  return integrate_radial_improper(density, r_a, r_b, opts);
}

RadialProfile read_tabulated_profile(const std::filesystem::path& path, Dimension n) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tabulated profile " + path.string());
  std::vector<double> rs, us;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double r = 0.0, u = 0.0;
    if (!(fields >> r >> u)) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected two numeric columns 'r u'");
    }
    std::string extra;
    if (fields >> extra) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": trailing field '" + extra + "'");
    }
    if (!rs.empty() && !(r > rs.back())) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": radii must be strictly increasing");
    }
    if (!(u > 0.0)) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": u must be positive");
    }
    rs.push_back(r);
    us.push_back(u);
  }
  return RadialProfile::tabulated(n, std::move(rs), std::move(us));
}

void write_tabulated_profile(const std::filesystem::path& path, const RadialProfile& profile,
                             const RadialGrid& grid, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  if (!header.empty()) {
    std::istringstream lines(header);
    std::string l;
    while (std::getline(lines, l)) out << "# " << l << '\n';
  }
  out << "# r u\n" << std::setprecision(17);
  for (double r : grid.points()) out << r << ' ' << profile.u(r) << '\n';
}

}  // namespace penrose
