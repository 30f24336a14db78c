#include "penrose/trumpet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "penrose/errors.hpp"
#include "penrose/quadrature.hpp"

namespace penrose {

namespace {

// Cylinder factor u1 = r^{(2-n)/2} and its derivatives.
struct Cylinder {
  int n;
  double u(double r) const { return std::pow(r, 0.5 * (2 - n)); }
  double du(double r) const { return 0.5 * (2 - n) * std::pow(r, -0.5 * n); }
  double d2u(double r) const { return 0.25 * (2 - n) * (-n) * std::pow(r, -0.5 * n - 1.0); }
};

// Schwarzschild factor u2 = 1 + r^{2-n}.
struct Schwarzschild {
  int n;
  double u(double r) const { return 1.0 + std::pow(r, 2 - n); }
  double du(double r) const { return (2.0 - n) * std::pow(r, 1 - n); }
  double d2u(double r) const { return (2.0 - n) * (1.0 - n) * std::pow(r, -n); }
};

double phi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double phi_prime(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

class TrumpetModel final : public ProfileModel {
 public:
  TrumpetModel(int n, double r0, double alpha) : params_{n, r0, alpha, 0.0}, cutoff_(r0) {
    const Cylinder u1{n};
    params_.alpha0 = alpha + u1.u(r0);
    blend_integral_ = integrate([this](double s) { return slope(s); }, r0, 2.0 * r0, kBlendQuad);
    u_outer_edge_ = params_.alpha0 + std::pow(2.0 * r0, 2 - n);
    // u = alpha + u1(r) + inner_shift_ for r <= r0
    inner_shift_ = std::pow(2.0 * r0, 2 - n) - blend_integral_;
  }

  ProfileKind kind() const override { return ProfileKind::Trumpet; }
  RadialDomain domain() const override { return {}; }
  const TrumpetParams& params() const { return params_; }

  double value(double r) const override {
    const Cylinder u1{params_.n};
    if (r <= params_.r0) return params_.alpha + u1.u(r) + inner_shift_;
    if (r >= 2.0 * params_.r0) return params_.alpha0 + std::pow(r, 2 - params_.n);
    return u_outer_edge_ -
           integrate([this](double s) { return slope(s); }, r, 2.0 * params_.r0, kBlendQuad);
  }

  RadialJet jet(double r) const override {
    const Cylinder u1{params_.n};
    const Schwarzschild u2{params_.n};
    if (r <= params_.r0) return {value(r), u1.du(r), u1.d2u(r)};
    if (r >= 2.0 * params_.r0) return {value(r), u2.du(r), u2.d2u(r)};
    const CutoffValue z = cutoff_.eval(r);
    const double du = z.zeta * u1.du(r) + (1.0 - z.zeta) * u2.du(r);
    const double d2u = z.zeta_prime * (u1.du(r) - u2.du(r)) + z.zeta * u1.d2u(r) +
                       (1.0 - z.zeta) * u2.d2u(r);
    return {value(r), du, d2u};
  }

 private:
  static constexpr QuadratureOptions kBlendQuad{1e-14, 20};

  // zeta u1' + (1 - zeta) u2'
  double slope(double s) const {
    const double z = cutoff_.eval(s).zeta;
    return z * Cylinder{params_.n}.du(s) + (1.0 - z) * Schwarzschild{params_.n}.du(s);
  }

  TrumpetParams params_;
  CutoffSpec cutoff_;
  double blend_integral_ = 0.0;
  double u_outer_edge_ = 0.0;
  double inner_shift_ = 0.0;
};

}  // namespace

CutoffSpec::CutoffSpec(double r0) : r0_(r0) {
  if (!(r0 > 0.0)) throw PreconditionError("cutoff radius must be positive");
}

CutoffValue CutoffSpec::eval(double t) const {
  if (t < 0.0) throw DomainError("cutoff evaluated at negative radius");
  if (t <= r0_) return {1.0, 0.0};
  if (t >= 2.0 * r0_) return {0.0, 0.0};
  const double a = (2.0 * r0_ - t) / r0_;
  const double b = (t - r0_) / r0_;
  const double pa = phi(a), pb = phi(b);
  const double sum = pa + pb;
  const double zeta = pa / sum;
  const double zeta_prime = -(phi_prime(a) * pb + pa * phi_prime(b)) / (r0_ * sum * sum);
  return {zeta, zeta_prime};
}

CutoffValue cutoff_eval(const CutoffSpec& spec, double t) { return spec.eval(t); }

double find_r0(Dimension n) {
  // ((2-n)/2) r^{-n/2} > (2-n) r^{1-n}  <=>  r^{n/2-1} < 2
  return 0.5 * std::pow(2.0, 2.0 / (n.value() - 2));
}

double min_alpha(Dimension n, double r0) {
  const int nn = n.value();
  const Cylinder u1{nn};
  const Schwarzschild u2{nn};
  constexpr int kSamples = 2048;
  double sup = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double r = r0 + r0 * i / (kSamples - 1);
    sup = std::max(sup, std::abs(r * u1.du(r)) + std::abs(r * u2.du(r)));
  }
  const double outer = std::pow(2.0 * r0, 2 - nn);
  return 1.1 * std::max(outer, 2.0 / (nn - 2) * sup);
}

TrumpetBuild build_trumpet(Dimension n, double r0, double alpha) {
  if (!(r0 > 0.0)) throw PreconditionError("trumpet gluing radius must be positive");
  if (!(alpha > 0.0)) throw PreconditionError("trumpet alpha must be positive");
  if (r0 > find_r0(n) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "r0 = " << r0 << " exceeds the largest admissible value " << find_r0(n);
    throw PreconditionError(os.str());
  }
  auto model = std::make_shared<TrumpetModel>(n.value(), r0, alpha);
  TrumpetBuild out{RadialProfile(n, model), model->params(), {}};
  const double required = min_alpha(n, r0);
  if (alpha < required) {
    std::ostringstream os;
    os << "weak alpha: " << alpha << " is below min_alpha = " << required
       << "; verification is expected to fail";
    out.warnings.push_back(os.str());
  }
  return out;
}

TrumpetBuild build_default_trumpet(Dimension n) {
  const double r0 = find_r0(n);
  return build_trumpet(n, r0, min_alpha(n, r0));
}

LaplacianTerms trumpet_laplacian_terms(const TrumpetParams& params, double r) {
  const Cylinder u1{params.n};
  const Schwarzschild u2{params.n};
  const CutoffValue z = CutoffSpec(params.r0).eval(r);
  const double k = (params.n - 1) / r;
  LaplacianTerms t;
  t.cylinder = z.zeta == 0.0 ? 0.0 : z.zeta * (u1.d2u(r) + k * u1.du(r));
  t.schwarzschild = z.zeta == 1.0 ? 0.0 : (1.0 - z.zeta) * (u2.d2u(r) + k * u2.du(r));
  t.cutoff = z.zeta_prime * (u1.du(r) - u2.du(r));
  return t;
}

std::optional<TrumpetParams> trumpet_params(const RadialProfile& profile) {
  if (const auto* m = dynamic_cast<const TrumpetModel*>(&profile.model())) return m->params();
  return std::nullopt;
}

bool TrumpetVerification::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> TrumpetVerification::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

TrumpetVerification verify_trumpet(const RadialProfile& profile, const RadialGrid& grid) {
  TrumpetVerification v;
  const Dimension n = profile.dimension();
  const std::optional<TrumpetParams> params = trumpet_params(profile);
  const std::vector<double> rs = grid.points();

  {
    CheckResult c{"asymptotically_flat", false, {}};
    try {
      const AdmMass adm = adm_mass_from_tail(profile, grid.r_hi);
      v.fit_residual = adm.tail.fit_residual;
      c.passed = true;
      std::ostringstream os;
      os << "fit residual " << adm.tail.fit_residual;
      if (n.value() == 3) {
        v.adm_mass = adm.mass;
        os << ", mass " << adm.mass;
        if (params) {
          const double expected = 2.0 * params->alpha0;
          c.passed = std::abs(adm.mass - expected) <= 1e-8 * std::max(1.0, expected);
          os << " (2 alpha0 = " << expected << ")";
        }
      }
      c.detail = os.str();
    } catch (const NotAsymptoticallyFlat& e) {
      c.detail = e.what();
    }
    v.checks.push_back(c);
  }

  {
    CheckResult c{"nonnegative_scalar_curvature", true, {}};
    v.min_scalar_curvature = std::numeric_limits<double>::infinity();
    v.max_laplacian_term = -std::numeric_limits<double>::infinity();
    for (double r : rs) {
      const double R = scalar_curvature(profile, r);
      v.min_scalar_curvature = std::min(v.min_scalar_curvature, R);
      if (R < -1e-10) c.passed = false;
      if (params) {
        const LaplacianTerms t = trumpet_laplacian_terms(*params, r);
        const double worst = std::max({t.cylinder, t.schwarzschild, t.cutoff});
        v.max_laplacian_term = std::max(v.max_laplacian_term, worst);
        if (worst > 1e-12) c.passed = false;
      }
    }
    std::ostringstream os;
    os << "min R " << v.min_scalar_curvature;
    if (params) os << ", max Laplacian term " << v.max_laplacian_term;
    c.detail = os.str();
    v.checks.push_back(c);
  }

  {
    CheckResult c{"mean_convex", true, {}};
    v.min_areal_derivative = std::numeric_limits<double>::infinity();
    for (double r : rs) {
      const double d = areal_radius_derivative(profile, r);
      v.min_areal_derivative = std::min(v.min_areal_derivative, d);
      if (!(d > 0.0)) {
        c.passed = false;
        if (!v.first_non_convex_radius) v.first_non_convex_radius = r;
      }
    }
    std::ostringstream os;
    os << "min d/dr[u^{2/(n-2)} r] " << v.min_areal_derivative;
    if (v.first_non_convex_radius) os << ", first failure at r = " << *v.first_non_convex_radius;
    c.detail = os.str();
    v.checks.push_back(c);
  }

  {
    CheckResult c{"complete", false, {}};
    const double ref = params ? params->r0 : grid.r_lo;
    const ImproperValue d = geodesic_distance(profile, profile.domain().lo, ref);
    v.distance_diverges = d.divergent;
    c.passed = d.divergent;
    c.detail = d.divergent ? "distance to the puncture diverges"
                           : "distance to the puncture is finite";
    v.checks.push_back(c);
  }

  {
    CheckResult c{"throat_area", false, {}};
    const AreaInfimum inf = area_infimum_radial(profile, grid);
    v.throat_area = inf.value;
    v.expected_throat_area = unit_sphere_volume(n);
    c.passed = inf.throat_limit && std::abs(inf.value - v.expected_throat_area) <= 1e-4;
    std::ostringstream os;
    os << "area infimum " << inf.value << (inf.throat_limit ? " (throat limit)" : " (attained)")
       << ", expected " << v.expected_throat_area;
    c.detail = os.str();
    v.checks.push_back(c);
  }
  return v;
}

}  // namespace penrose
