#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "penrose/errors.hpp"
#include "penrose/mass_functionals.hpp"
#include "penrose/mu_bubble.hpp"
#include "penrose/trumpet.hpp"

using namespace penrose;
using doctest::Approx;

namespace {
const Dimension n3(3);
const double pi = oracle::pi;
const double lip = 1.0 - 1e-6;
}  // namespace

TEST_CASE("h_eval examples") {
  const PrescribedMeanCurvature h(0.1, 2.0);
  CHECK(h_eval(h, 0.0) == Approx(oracle::kH0).epsilon(1e-15));
  CHECK(h_eval(PrescribedMeanCurvature(0.1, 50.0), 1.0) == Approx(0.1).epsilon(1e-8));
  CHECK(h.barrier() == Approx(-4.0 * 2.0 / 0.3));
  double prev = 0.0;
  for (double gap = 1.0; gap > 1e-9; gap *= 0.1) {
    const double v = h_eval(h, h.barrier() + gap);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e6);
  CHECK_THROWS_AS(h_eval(h, h.barrier()), BarrierError);
  CHECK_THROWS_AS(h_eval(h, h.barrier() - 1.0), BarrierError);
  CHECK_THROWS(PrescribedMeanCurvature(-0.1, 1.0));
  CHECK_THROWS(PrescribedMeanCurvature(0.1, -1.0));
}

TEST_CASE("h matches the closed form and its derivative") {
  const PrescribedMeanCurvature h(0.3, 0.7);
  for (double t : {-2.0, -0.5, 0.0, 1.0, 10.0}) {
    CHECK(h.eval(t) == Approx(oracle::h(0.3, 0.7, t)).epsilon(1e-14));
    CHECK(h.derivative(t) == Approx(oracle::dh(0.3, 0.7, t)).epsilon(1e-13));
  }
}

TEST_CASE("h_ode_residual examples") {
  CHECK(std::abs(h_ode_residual(PrescribedMeanCurvature(0.1, 2.0), 0.0)) < 1e-12);
  CHECK(std::abs(h_ode_residual(PrescribedMeanCurvature(1.0, 1.0), 1.0)) < 1e-12 * 2.0);
  const PrescribedMeanCurvature h(0.5, 3.0);
  CHECK(std::abs(h_ode_residual(h, -1.0)) <= 1e-12 * (1.0 + std::pow(h.eval(-1.0), 2)));
}

TEST_CASE("h_ode_residual on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> eps_d(1e-3, 2.0), beta_d(1e-2, 10.0), u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const PrescribedMeanCurvature h(eps_d(rng), beta_d(rng));
    // t from just above the barrier to well beyond it.
    const double t = h.barrier() + std::exp(std::log(1e-6) + u(rng) * std::log(1e8));
    const double hv = h.eval(t);
    CHECK(std::abs(h_ode_residual(h, t)) <= 1e-12 * (1.0 + hv * hv));
  }
}

TEST_CASE("dist_to_anchor examples") {
  const MuBubbleProblem e{RadialProfile::euclidean(n3), 1.0, PrescribedMeanCurvature(0.1, 2.0)};
  CHECK(dist_to_anchor(e, 1.0) == 0.0);
  CHECK(dist_to_anchor(e, 0.5) == Approx(-0.4999995).epsilon(1e-13));

  const MuBubbleProblem s{RadialProfile::schwarzschild(n3, 1.0), 2.0, PrescribedMeanCurvature(0.1, 2.0)};
  const oracle::Schwarzschild3 o;
  CHECK(dist_to_anchor(s, 0.7) ==
        Approx(-lip * (o.u2_primitive(2.0) - o.u2_primitive(0.7))).epsilon(1e-12));

  const TrumpetBuild t = build_default_trumpet(n3);
  const MuBubbleProblem tp{t.profile, 2.0, PrescribedMeanCurvature(0.05, 2.0)};
  CHECK(dist_to_anchor(tp, 1e-8) < dist_to_anchor(tp, 1e-4));
  CHECK(dist_to_anchor(tp, 1e-100) < -100.0);
}

TEST_CASE("functional_eval examples") {
  const MuBubbleProblem e{RadialProfile::euclidean(n3), 1.0, PrescribedMeanCurvature(0.1, 2.0)};
  CHECK(functional_eval(e, 1.0) == Approx(4.0 * pi).epsilon(1e-15));
  const double v = functional_eval(e, 0.9);
  CHECK(v >= 4.0 * pi * 0.81);
  CHECK(v == Approx(oracle::kEuclideanFunctional).epsilon(1e-10));
  CHECK_THROWS_AS(functional_eval(e, 1.1), OutOfCollection);
}

TEST_CASE("functional_eval agrees with nested Simpson on Schwarzschild") {
  const oracle::Schwarzschild3 o;
  const MuBubbleProblem s{RadialProfile::schwarzschild(n3, 1.0), 2.0, PrescribedMeanCurvature(0.2, 1.3)};
  CHECK(functional_eval(s, 1.0) == Approx(oracle::kSchwarzschildFunctional).epsilon(1e-10));
  for (double rho : {0.6, 0.8, 1.5}) {
    CHECK(functional_eval(s, rho) ==
          Approx(oracle::functional(o, 2.0, 0.2, 1.3, lip, rho)).epsilon(1e-9));
  }
}

TEST_CASE("functional blows up at the barrier") {
  const MuBubbleProblem e{RadialProfile::euclidean(n3), 1.0, PrescribedMeanCurvature(0.5, 0.3)};
  const BarrierLocation b = barrier_radius(e);
  REQUIRE(b.reached);
  CHECK(b.radius == Approx(1.0 - 4.0 * 0.3 / (3.0 * 0.5) / lip).epsilon(1e-10));
  // h grows like the inverse distance to the barrier, so the bulk term
  // diverges logarithmically: equal increments per decade of the gap.
  double prev = functional_eval(e, b.radius + 1e-1), prev_inc = 0.0;
  // Below 1e-10 the gap is at the resolution of the quadrature distance.
  for (double gap = 1e-2; gap > 1e-11; gap *= 0.1) {
    const double v = functional_eval(e, b.radius + gap);
    const double inc = v - prev;
    CHECK(inc > 0.0);
    CHECK(inc >= 0.9 * prev_inc);
    prev = v;
    prev_inc = inc;
  }
  CHECK(prev_inc > 1.0);
  CHECK_THROWS_AS(functional_eval(e, b.radius * 0.99), BarrierError);
}

TEST_CASE("validate rejects bad problems") {
  const PrescribedMeanCurvature h(0.1, 2.0);
  CHECK_THROWS(validate(MuBubbleProblem{RadialProfile::euclidean(Dimension(4)), 2.0, h}));
  CHECK_THROWS(validate(MuBubbleProblem{RadialProfile::euclidean(n3), -1.0, h}));
  CHECK_THROWS(validate(MuBubbleProblem{RadialProfile::euclidean(n3), 2.0, h, 1.5}));
  // h(0) = 0.1 coth(0.01) ~ 10 exceeds H(2) = 1.
  CHECK_THROWS(validate(MuBubbleProblem{RadialProfile::euclidean(n3), 2.0,
                                        PrescribedMeanCurvature(0.1, 0.01)}));
  CHECK_NOTHROW(validate(MuBubbleProblem{RadialProfile::euclidean(n3), 2.0, h}));
}

TEST_CASE("choose_beta against the arcoth oracle") {
  // Euclidean r0 = 2: H0 = 1, so h(0) = eps coth(beta) <= 0.9 gives
  // beta = arcoth(0.9 / eps), then doubled.
  const RadialProfile e = RadialProfile::euclidean(n3);
  CHECK(choose_beta(e, 2.0, 0.1) == Approx(oracle::kBetaEps01).epsilon(1e-8));
  CHECK(choose_beta(e, 2.0, 0.5) == Approx(2.0 * oracle::arcoth(1.8)).epsilon(1e-8));
  CHECK_THROWS_AS(choose_beta(e, 2.0, 1.0), EpsilonTooLarge);
  CHECK_THROWS_AS(choose_beta(e, 2.0, 0.95), EpsilonTooLarge);
}

TEST_CASE("minimize on Schwarzschild") {
  const RadialProfile s = RadialProfile::schwarzschild(n3, 1.0);
  for (double eps : {0.2, 0.1, 0.05}) {
    CAPTURE(eps);
    const BubbleRun run = solve_mu_bubble(s, 2.0, eps);
    const MuBubbleSolution& x = run.solution;
    CHECK(x.el_residual <= 1e-6);
    CHECK(x.mean_curvature > 0.0);
    CHECK(x.mean_curvature < 2.0 * eps);
    CHECK(x.area >= 16.0 * pi);
    CHECK(x.area <= sphere_area(s, 2.0));
    CHECK(x.rho_star > 0.5);
    CHECK(x.second_order_ok);
    CHECK(x.functional_value <= functional_eval(MuBubbleProblem{s, 2.0, {eps, x.beta}}, 2.0));
    // Independent check of the Euler-Lagrange equation.
    const oracle::Schwarzschild3 o;
    const double d = -lip * (o.u2_primitive(2.0) - o.u2_primitive(x.rho_star));
    CHECK(o.mean_curvature(x.rho_star) == Approx(oracle::h(eps, x.beta, d)).epsilon(1e-6));
  }
}

TEST_CASE("minimize on the Euclidean ball against a bisection oracle") {
  // H = 2/rho and h(d) = 0.5 coth(0.375 lip (rho - 1) + 0.3).
  const MuBubbleProblem p{RadialProfile::euclidean(n3), 1.0, PrescribedMeanCurvature(0.5, 0.3)};
  auto g = [](double rho) { return 2.0 / rho - oracle::h(0.5, 0.3, lip * (rho - 1.0)); };
  double lo = 0.21, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const MuBubbleSolution x = minimize(p);
  CHECK(x.rho_star == Approx(0.5 * (lo + hi)).epsilon(1e-10));
  CHECK(x.el_residual <= 1e-10);
  CHECK(x.second_order_ok);
}

TEST_CASE("minimize reports a degenerate minimizer") {
  const MuBubbleProblem flat{RadialProfile::euclidean(n3), 2.0, PrescribedMeanCurvature(0.05, 1e3)};
  // h ~ eps everywhere: area plus eps volume is minimized at the origin end.
  CHECK_THROWS_AS(minimize(flat), DegenerateMinimizer);
}

TEST_CASE("diameter_report") {
  const BubbleRun run = solve_mu_bubble(RadialProfile::schwarzschild(n3, 1.0), 2.0, 0.05);
  const DiameterReport d = diameter_report(run.solution, 0.05);
  CHECK(d.intrinsic_diameter == Approx(2.0 * pi).epsilon(0.05));
  CHECK(d.bound == Approx(4.0 * pi / 0.15));
  CHECK(d.within_bound);
  CHECK(diameter_report(run.solution, 1.0).bound == Approx(4.0 * pi / 3.0));
}

TEST_CASE("horizon_sequence on Schwarzschild") {
  const std::vector<double> sched = default_epsilon_schedule();
  REQUIRE(sched.size() == 8);
  CHECK(sched.front() == 0.2);
  CHECK(sched.back() >= 1e-3);
  CHECK(sched.back() / 2.0 < 1e-3);

  const HorizonSequence seq =
      horizon_sequence(RadialProfile::schwarzschild(n3, 1.0), 2.0, {0.2, 0.1, 0.05, 0.02, 0.01});
  REQUIRE(seq.steps.size() == 5);
  double prev_area_bound = -INFINITY;
  for (const HorizonStep& s : seq.steps) {
    REQUIRE(s.run);
    CHECK(s.hawking_bound == Approx(1.0).epsilon(1e-9));
    CHECK(s.area_bound > prev_area_bound);
    prev_area_bound = s.area_bound;
  }
  CHECK(seq.steps.back().area_bound >= 1.0 - 1e-3);
  CHECK(seq.area_infimum == Approx(16.0 * pi).epsilon(1e-10));
}

TEST_CASE("horizon_sequence records step errors") {
  // eps above H(r0) = 0.384 fails choose_beta; the sequence continues.
  const HorizonSequence seq =
      horizon_sequence(RadialProfile::schwarzschild(n3, 1.0), 2.0, {0.5, 0.1});
  REQUIRE(seq.steps.size() == 2);
  CHECK_FALSE(seq.steps[0].run);
  CHECK_FALSE(seq.steps[0].error.empty());
  CHECK(seq.steps[1].run);
}

TEST_CASE("rigidity_iteration on Schwarzschild") {
  const RigidityTrace tr = rigidity_iteration(RadialProfile::schwarzschild(n3, 1.0), 2.0, 0.1, 1.5);
  CHECK(tr.equality_case);
  CHECK(tr.epsilon0 == Approx(oracle::kEpsilon0).epsilon(1e-12));
  CHECK(tr.lambda0 == Approx(16.0 * pi * oracle::Schwarzschild3{}.area(2.0) / (2.0 * pi)).epsilon(1e-10));
  CHECK(tr.all_checks_pass());
  CHECK(tr.nested);
  CHECK(tr.cumulative_ok);
  const double bound = tr.lambda0 * std::pow(0.1, 1.5 * 0.5) / (1.0 - std::pow(0.1, 0.5 * 0.5));
  CHECK(tr.cumulative_bound == Approx(bound).epsilon(1e-12));
  REQUIRE(tr.steps.size() >= 2);
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    const RigidityStep& s = tr.steps[k];
    CHECK(s.epsilon == Approx(std::pow(0.1, std::pow(1.5, double(k)))).epsilon(1e-12));
    REQUIRE(s.run);
    REQUIRE(s.area_bound);
    CHECK(s.run->solution.area <= 16.0 * pi + tr.lambda0 * s.epsilon * s.epsilon);
    if (s.annulus_volume) CHECK(*s.annulus_volume <= tr.lambda0 * std::pow(s.epsilon, 0.5));
  }
  CHECK(tr.steps.back().run->solution.rho_star == Approx(0.5).epsilon(2e-3));
  CHECK(tr.steps.back().run->solution.area == Approx(16.0 * pi).epsilon(1e-4 / (16.0 * pi)));
}

TEST_CASE("rigidity_iteration rejects gamma outside (1, 2)") {
  CHECK_THROWS(rigidity_iteration(RadialProfile::schwarzschild(n3, 1.0), 2.0, 0.1, 2.0));
  CHECK_THROWS(rigidity_iteration(RadialProfile::schwarzschild(n3, 1.0), 2.0, 0.1, 1.0));
}
