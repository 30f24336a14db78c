#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "penrose/errors.hpp"
#include "penrose/mass_functionals.hpp"
#include "penrose/trumpet.hpp"

using namespace penrose;
using doctest::Approx;

namespace {
const Dimension n3(3);
const double pi = oracle::pi;
}  // namespace

TEST_CASE("find_r0 examples") {
  CHECK(find_r0(n3) == Approx(2.0).epsilon(1e-15));
  CHECK(find_r0(Dimension(4)) == Approx(1.0).epsilon(1e-15));
  // Dense sampling oracle for n = 3: u1' > u2' exactly on (0, 4).
  double last_ok = 0.0;
  for (int i = 1; i <= 100000; ++i) {
    const double r = 8.0 * i / 100000.0;
    if (oracle::du1(r) > oracle::du2(r)) last_ok = r;
  }
  CHECK(last_ok == Approx(2.0 * find_r0(n3)).epsilon(1e-4));
}

TEST_CASE("cutoff_eval examples") {
  const CutoffSpec c(2.0);
  CutoffValue v = cutoff_eval(c, 1.0);
  CHECK(v.zeta == 1.0);
  CHECK(v.zeta_prime == 0.0);
  v = cutoff_eval(c, 6.0);
  CHECK(v.zeta == 0.0);
  CHECK(v.zeta_prime == 0.0);
  v = cutoff_eval(c, 3.0);
  CHECK(v.zeta == Approx(0.5).epsilon(1e-15));
  CHECK(v.zeta_prime < 0.0);
  for (double t : {2.1, 2.5, 3.3, 3.9}) {
    CHECK(cutoff_eval(c, t).zeta == Approx(oracle::zeta(2.0, t)).epsilon(1e-14));
    const double h = 1e-5;
    const double fd = (oracle::zeta(2.0, t + h) - oracle::zeta(2.0, t - h)) / (2.0 * h);
    CHECK(cutoff_eval(c, t).zeta_prime == Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("min_alpha example") {
  CHECK(min_alpha(n3, 2.0) == Approx(oracle::kMinAlpha3).epsilon(1e-12));
}

TEST_CASE("build_trumpet pieces and continuity") {
  const TrumpetBuild t = build_default_trumpet(n3);
  const TrumpetParams& p = t.params;
  CHECK(p.r0 == 2.0);
  CHECK(p.alpha == Approx(oracle::kMinAlpha3).epsilon(1e-12));
  CHECK(p.alpha0 == Approx(p.alpha + oracle::u1(2.0)).epsilon(1e-15));
  CHECK(t.warnings.empty());
  const RadialProfile& u = t.profile;
  CHECK(u.kind() == ProfileKind::Trumpet);

  // Exact pieces away from the blend.
  for (double r : {0.01, 0.5, 1.9}) {
    CHECK(u.jet(r).du == Approx(oracle::du1(r)).epsilon(1e-14));
  }
  for (double r : {4.0, 10.0, 1e4}) {
    CHECK(u.u(r) == Approx(p.alpha0 + 1.0 / r).epsilon(1e-15));
    CHECK(u.jet(r).du == Approx(oracle::du2(r)).epsilon(1e-14));
  }
  // Continuity at r0 and 2 r0.
  for (double r : {2.0, 4.0}) {
    CHECK(std::abs(u.u(r * (1.0 + 1e-13)) - u.u(r * (1.0 - 1e-13))) < 1e-10);
    CHECK(std::abs(u.jet(r * (1.0 + 1e-13)).du - u.jet(r * (1.0 - 1e-13)).du) < 1e-10);
  }
  // The blend slope is the cutoff mix.
  for (double r : {2.2, 3.0, 3.7}) {
    const double z = oracle::zeta(2.0, r);
    CHECK(u.jet(r).du == Approx(z * oracle::du1(r) + (1.0 - z) * oracle::du2(r)).epsilon(1e-13));
  }
  // Value in the blend integrates the slope from 2 r0.
  const double inner = u.u(4.0) - oracle::simpson(
                                      [](double s) {
                                        const double z = oracle::zeta(2.0, s);
                                        return z * oracle::du1(s) + (1.0 - z) * oracle::du2(s);
                                      },
                                      3.0, 4.0, 4000);
  CHECK(u.u(3.0) == Approx(inner).epsilon(1e-12));

  const auto rec = trumpet_params(u);
  REQUIRE(rec);
  CHECK(rec->alpha == p.alpha);
  CHECK_FALSE(trumpet_params(RadialProfile::schwarzschild(n3, 1.0)));
}

TEST_CASE("build_trumpet rejects invalid input and warns on weak alpha") {
  CHECK_THROWS(build_trumpet(n3, 3.0, 2.0));
  CHECK_THROWS(build_trumpet(n3, 2.0, 0.0));
  const TrumpetBuild weak = build_trumpet(n3, 2.0, 0.125);
  CHECK_FALSE(weak.warnings.empty());
}

TEST_CASE("laplacian decomposition signs") {
  const TrumpetBuild t = build_default_trumpet(n3);
  for (const double r : RadialGrid::default_for(t.profile).points()) {
    const LaplacianTerms l = trumpet_laplacian_terms(t.params, r);
    CHECK(l.cylinder <= 1e-12);
    CHECK(l.schwarzschild <= 1e-12);
    CHECK(l.cutoff <= 1e-12);
  }
}

TEST_CASE("verify_trumpet default n = 3") {
  const TrumpetBuild t = build_default_trumpet(n3);
  const TrumpetVerification v = verify_trumpet(t.profile, RadialGrid::default_for(t.profile));
  CHECK(v.passed());
  CHECK(v.failing().empty());
  REQUIRE(v.checks.size() == 5);
  REQUIRE(v.adm_mass);
  CHECK(*v.adm_mass == Approx(2.0 * t.params.alpha0).epsilon(1e-8));
  CHECK(v.distance_diverges);
  CHECK(v.throat_area == Approx(4.0 * pi).epsilon(1e-4 / (4.0 * pi)));
  CHECK(v.min_areal_derivative > 0.0);
  CHECK(v.min_scalar_curvature >= -1e-10);
  const RadialProfile& u = t.profile;
  for (double r : {1e-3, 0.1, 1.0}) CHECK(u.u(r) * u.u(r) * r > 1.0);
}

TEST_CASE("verify_trumpet default n = 4") {
  const TrumpetBuild t = build_default_trumpet(Dimension(4));
  CHECK(t.params.r0 == 1.0);
  const TrumpetVerification v = verify_trumpet(t.profile, RadialGrid::default_for(t.profile));
  CHECK(v.passed());
  CHECK_FALSE(v.adm_mass);
  CHECK(v.throat_area == Approx(2.0 * pi * pi).epsilon(1e-4));
}
