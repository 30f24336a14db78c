#include "penrose/mu_bubble.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "penrose/errors.hpp"
#include "penrose/mass_functionals.hpp"

namespace penrose {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kSixteenPi = 16.0 * std::numbers::pi;
constexpr double kOdeTolerance = 1e-13;
// Smallest scan floor relative to r0 when the domain reaches down to 0.
constexpr double kFloorRatio = 1e-150;

using State = std::array<double, 2>;  // {d, bulk}

// (d, bulk) as functions of s = ln r, integrated downwards from ln r0:
//     d/ds d    = lip u^2 r,
//     d/ds bulk = -h(d) 4 pi u^6 r^3.
class BulkSystem {
 public:
  explicit BulkSystem(const MuBubbleProblem& p) : p_(p) {}

  void operator()(const State& x, State& dxds, double s) const {
    const double r = std::exp(s);
    const double u = p_.profile.u(r);
    const double u2 = u * u;
    dxds[0] = p_.lip_factor * u2 * r;
    // Trial stages may probe past the barrier; a huge value makes the
    // stepper reject them.
    const double arg = std::max(0.75 * p_.h.epsilon * x[0] + p_.h.beta, 1e-12);
    const double h = p_.h.epsilon / std::tanh(arg);
    dxds[1] = -h * kFourPi * u2 * u2 * u2 * r * r * r;
  }

 private:
  const MuBubbleProblem& p_;
};

State advance(const MuBubbleProblem& p, State x, double s_from, double s_to) {
  if (s_from == s_to) return x;
  auto stepper = odeint::make_controlled(kOdeTolerance, kOdeTolerance,
                                         odeint::runge_kutta_dopri5<State>());
  const double dt = (s_to - s_from) / 16.0;
  odeint::integrate_adaptive(stepper, BulkSystem(p), x, s_from, s_to, dt);
  return x;
}

double area_at(const RadialProfile& profile, double r) { return sphere_area(profile, r); }

void require_three_dimensional(const RadialProfile& profile) {
  if (profile.dimension().value() != 3) {
    throw UnsupportedDimension("the mu-bubble reduction is implemented for n = 3 only");
  }
}

double scan_floor(const MuBubbleProblem& p) {
  const RadialDomain dom = p.profile.domain();
  const double floor = p.anchor_radius * kFloorRatio;
  if (dom.closed) return std::max(dom.lo, floor);
  return std::max(dom.lo * (1.0 + 1e-12), floor);
}

// Stored scan states, used as starting points for local integrations.
class ScanTable {
 public:
  ScanTable(const MuBubbleProblem& p, double s_barrier, int count) : p_(p) {
    const double s0 = std::log(p.anchor_radius);
    s_.resize(count);
    for (int i = 0; i < count; ++i) s_[i] = s_barrier + (s0 - s_barrier) * (i + 1) / count;
    s_.back() = s0;
    x_.assign(count, State{0.0, 0.0});
    State x{0.0, 0.0};
    for (int i = count - 2; i >= 0; --i) {
      x = advance(p, x, s_[i + 1], s_[i]);
      x_[i] = x;
    }
    f_.resize(count);
    for (int i = 0; i < count; ++i) f_[i] = area_at(p.profile, std::exp(s_[i])) + x_[i][1];
  }

  int size() const { return static_cast<int>(s_.size()); }
  double s(int i) const { return s_[i]; }
  double f(int i) const { return f_[i]; }

  // (d, bulk) at s, integrated from the nearest stored state above s.
  State state_at(double s) const {
    auto it = std::lower_bound(s_.begin(), s_.end(), s);
    if (it == s_.end()) --it;
    const auto i = static_cast<std::size_t>(it - s_.begin());
    return advance(p_, x_[i], s_[i], s);
  }

  double functional(double s) const {
    return area_at(p_.profile, std::exp(s)) + state_at(s)[1];
  }

 private:
  const MuBubbleProblem& p_;
  std::vector<double> s_;
  std::vector<State> x_;
  std::vector<double> f_;
};

double golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

PrescribedMeanCurvature::PrescribedMeanCurvature(double epsilon, double beta)
    : epsilon(epsilon), beta(beta) {
  if (!(epsilon > 0.0) || !(beta > 0.0)) {
    throw PreconditionError("prescribed mean curvature needs epsilon > 0 and beta > 0");
  }
}

double PrescribedMeanCurvature::eval(double t) const {
  const double x = 0.75 * epsilon * t + beta;
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "t = " << t << " is at or below the barrier " << barrier();
    throw BarrierError(os.str());
  }
  return epsilon / std::tanh(x);
}

double PrescribedMeanCurvature::derivative(double t) const {
  const double x = 0.75 * epsilon * t + beta;
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "t = " << t << " is at or below the barrier " << barrier();
    throw BarrierError(os.str());
  }
  const double sh = std::sinh(x);
  return -0.75 * epsilon * epsilon / (sh * sh);
}

double h_eval(const PrescribedMeanCurvature& h, double t) { return h.eval(t); }

double h_ode_residual(const PrescribedMeanCurvature& h, double t) {
  const double v = h.eval(t);
  return 2.0 * h.derivative(t) + 1.5 * v * v - 1.5 * h.epsilon * h.epsilon;
}

void validate(const MuBubbleProblem& problem) {
  require_three_dimensional(problem.profile);
  if (!problem.profile.domain().contains(problem.anchor_radius)) {
    throw DomainError("anchor radius outside the profile domain");
  }
  if (!(problem.lip_factor > 0.0 && problem.lip_factor < 1.0)) {
    throw PreconditionError("lip_factor must lie in (0, 1)");
  }
  const double h0 = problem.h.eval(0.0);
  const double big_h = sphere_mean_curvature(problem.profile, problem.anchor_radius);
  if (!(big_h > h0)) {
    std::ostringstream os;
    os << "barrier condition fails: H(r0) = " << big_h << " <= h(0) = " << h0;
    throw PreconditionError(os.str());
  }
}

double dist_to_anchor(const MuBubbleProblem& problem, double r) {
  const double r0 = problem.anchor_radius;
  if (!problem.profile.domain().contains(r)) throw DomainError("dist_to_anchor: r outside domain");
  if (r == r0) return 0.0;
  if (r < r0) return -problem.lip_factor * geodesic_distance(problem.profile, r, r0).value;
  return problem.lip_factor * geodesic_distance(problem.profile, r0, r).value;
}

BarrierLocation barrier_radius(const MuBubbleProblem& problem) {
  const double target = -problem.h.barrier() / problem.lip_factor;  // unshrunk distance
  const double s_floor = std::log(scan_floor(problem));
  auto density = [&problem](double r) {
    const double u = problem.profile.u(r);
    return u * u;
  };
  // Walk inwards in chunks of growing length so that no single quadrature
  // spans many decades of radius.
  double s_hi = std::log(problem.anchor_radius);
  double covered = 0.0;
  double step = 0.25;
  while (true) {
    const double s_lo = std::max(s_hi - step, s_floor);
    const double piece = integrate_radial(density, std::exp(s_lo), std::exp(s_hi));
    if (covered + piece >= target) {
      const double top = std::exp(s_hi);
      auto g = [&](double s) {
        return covered + integrate_radial(density, std::exp(s), top) - target;
      };
      boost::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          g, s_lo, s_hi, covered + piece - target, covered - target,
          boost::math::tools::eps_tolerance<double>(50), iters);
      // Upper end of the bracket: on the admissible side of the barrier.
      return {std::exp(b), true};
    }
    covered += piece;
    if (s_lo == s_floor) return {std::exp(s_floor), false};
    s_hi = s_lo;
    step = std::min(2.0 * step, 8.0);
  }
}

double functional_eval(const MuBubbleProblem& problem, double rho) {
  validate(problem);
  if (rho > problem.anchor_radius) {
    throw OutOfCollection("rho lies outside the barrier sphere S_r0");
  }
  const double d = dist_to_anchor(problem, rho);
  if (!(d > problem.h.barrier())) {
    throw BarrierError("rho lies at or beyond the barrier of h");
  }
  const State x = advance(problem, State{0.0, 0.0}, std::log(problem.anchor_radius), std::log(rho));
  return area_at(problem.profile, rho) + x[1];
}

MuBubbleSolution minimize(const MuBubbleProblem& problem, const MinimizeOptions& opts) {
  validate(problem);
  const BarrierLocation barrier = barrier_radius(problem);
  const double s_b = std::log(barrier.radius);
  const ScanTable table(problem, s_b, opts.scan_points);

  int best = 0;
  for (int i = 1; i < table.size(); ++i)
    if (table.f(i) < table.f(best)) best = i;
  if (best == 0) {
    std::ostringstream os;
    os << "functional minimum at the inner edge r = " << std::exp(table.s(0))
       << (barrier.reached ? " next to the barrier" : " of the scan range")
       << "; beta = " << problem.h.beta << " is too small";
    throw DegenerateMinimizer(os.str());
  }

  const double lo = table.s(best - 1);
  const double hi = table.s(std::min(best + 1, table.size() - 1));
  double s_star = golden_section([&](double s) { return table.functional(s); }, lo, hi,
                                 opts.rho_tolerance);

  // Polish on the Euler-Lagrange equation H = h(d).
  auto el = [&](double s) {
    const double r = std::exp(s);
    return sphere_mean_curvature(problem.profile, r) - problem.h.eval(table.state_at(s)[0]);
  };
  const double el_lo = el(lo), el_hi = el(hi);
  if (el_lo < 0.0 && el_hi > 0.0) {
    boost::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        el, lo, hi, el_lo, el_hi, boost::math::tools::eps_tolerance<double>(52), iters);
    s_star = 0.5 * (a + b);
  }

  MuBubbleSolution sol;
  sol.epsilon = problem.h.epsilon;
  sol.beta = problem.h.beta;
  sol.barrier_radius = barrier.radius;
  sol.rho_star = std::min(std::exp(s_star), problem.anchor_radius);
  s_star = std::log(sol.rho_star);
  sol.area = area_at(problem.profile, sol.rho_star);
  sol.functional_value = table.functional(s_star);
  sol.mean_curvature = sphere_mean_curvature(problem.profile, sol.rho_star);
  sol.distance = dist_to_anchor(problem, sol.rho_star);
  sol.el_residual = std::abs(sol.mean_curvature - problem.h.eval(sol.distance));

  const double delta = std::min({1e-3 * sol.rho_star, 0.5 * (problem.anchor_radius - sol.rho_star),
                                 0.5 * (sol.rho_star - barrier.radius)});
  if (delta > 0.0) {
    const double f_plus = table.functional(std::log(sol.rho_star + delta));
    const double f_minus = table.functional(std::log(sol.rho_star - delta));
    const double second = f_plus + f_minus - 2.0 * sol.functional_value;
    sol.second_order_ok = second >= -1e-11 * std::abs(sol.functional_value);
  }
  return sol;
}

double choose_beta(const RadialProfile& profile, double r0, double epsilon) {
  require_three_dimensional(profile);
  const double h0 = sphere_mean_curvature(profile, r0);
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  const double target = 0.9 * h0;
  if (!(epsilon < h0) || !(epsilon < target)) {
    std::ostringstream os;
    os << "epsilon = " << epsilon << " is too large for H(r0) = " << h0
       << " (h(0) > eps can never reach 0.9 H(r0))";
    throw EpsilonTooLarge(os.str());
  }
  auto ok = [&](double beta) { return epsilon / std::tanh(beta) <= target; };
  double lo = 0.0, hi = 1.0;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return 2.0 * hi;
}

BubbleRun solve_mu_bubble(const RadialProfile& profile, double r0, double epsilon,
                          const MinimizeOptions& opts) {
  constexpr int kMaxDoublings = 64;
  double beta = choose_beta(profile, r0, epsilon);
  std::string last;
  for (int k = 0; k <= kMaxDoublings; ++k, beta *= 2.0) {
    const MuBubbleProblem problem{profile, r0, PrescribedMeanCurvature(epsilon, beta)};
    try {
      BubbleRun run{minimize(problem, opts), k};
      if (run.solution.mean_curvature < 2.0 * epsilon) return run;
      std::ostringstream os;
      os << "H(rho*) = " << run.solution.mean_curvature << " >= 2 eps at beta = " << beta;
      last = os.str();
    } catch (const DegenerateMinimizer& e) {
      last = e.what();
    }
  }
  throw DegenerateMinimizer("no admissible beta after " + std::to_string(kMaxDoublings) +
                            " doublings: " + last);
}

std::vector<double> default_epsilon_schedule() {
  std::vector<double> out;
  for (double e = 0.2; e >= 1e-3; e *= 0.5) out.push_back(e);
  return out;
}

HorizonSequence horizon_sequence(const RadialProfile& profile, double r0,
                                 const std::vector<double>& epsilons,
                                 const MinimizeOptions& opts) {
  require_three_dimensional(profile);
  HorizonSequence seq;
  seq.anchor_radius = r0;
  seq.anchor_mean_curvature = sphere_mean_curvature(profile, r0);
  seq.anchor_area = sphere_area(profile, r0);
  seq.area_infimum = area_infimum_radial(profile, RadialGrid::default_for(profile)).value;

  std::vector<std::future<HorizonStep>> jobs;
  jobs.reserve(epsilons.size());
  for (double eps : epsilons) {
    jobs.push_back(std::async(std::launch::async, [&, eps] {
      HorizonStep step;
      step.epsilon = eps;
      try {
        step.run = solve_mu_bubble(profile, r0, eps, opts);
        const double a = step.run->solution.area;
        const double h = step.run->solution.mean_curvature;
        step.hawking_bound = std::sqrt(a / kSixteenPi) * (1.0 - a * h * h / kSixteenPi);
        step.area_bound = std::sqrt(seq.area_infimum / kSixteenPi) -
                          std::pow(kSixteenPi, -1.5) * std::pow(a, 1.5) * h * h;
      } catch (const DegenerateMinimizer& e) {
        step.error = e.what();
        step.degenerate = true;
      } catch (const Error& e) {
        step.error = e.what();
      }
      return step;
    }));
  }
  for (auto& j : jobs) seq.steps.push_back(j.get());
  return seq;
}

bool RigidityTrace::all_checks_pass() const {
  if (steps.empty() || !cumulative_ok || !nested) return false;
  return std::all_of(steps.begin(), steps.end(), [](const RigidityStep& s) {
    return s.run.has_value() && s.area_ok && s.volume_ok;
  });
}

RigidityTrace rigidity_iteration(const RadialProfile& profile, double r0, double epsilon,
                                 double gamma, const MinimizeOptions& opts) {
  require_three_dimensional(profile);
  if (!(gamma > 1.0 && gamma < 2.0)) throw PreconditionError("gamma must lie in (1, 2)");
  const double area0 = sphere_area(profile, r0);
  RigidityTrace trace;
  trace.gamma = gamma;
  trace.epsilon = epsilon;
  trace.epsilon0 = std::sqrt(8.0 * std::numbers::pi / area0);
  if (!(epsilon > 0.0 && epsilon < trace.epsilon0)) {
    std::ostringstream os;
    os << "epsilon = " << epsilon << " must lie in (0, eps0 = " << trace.epsilon0 << ")";
    throw PreconditionError(os.str());
  }
  const RadialGrid grid = RadialGrid::default_for(profile);
  trace.area_infimum = area_infimum_radial(profile, grid).value;
  trace.lambda0 = trace.area_infimum * area0 / (2.0 * std::numbers::pi);
  try {
    PenroseOptions popts;
    popts.grid = grid;
    trace.equality_case = penrose_check(profile, popts).verdict == PenroseVerdict::EqualityWithinTol;
  } catch (const Error&) {
    trace.equality_case = false;
  }

  constexpr int kMaxSteps = 20;
  constexpr double kSmallestEpsilon = 1e-6;
  double anchor = r0;
  for (int k = 0; k <= kMaxSteps; ++k) {
    const double eps_k = std::pow(epsilon, std::pow(gamma, k));
    if (eps_k < kSmallestEpsilon) break;
    RigidityStep step;
    step.k = k;
    step.epsilon = eps_k;
    step.volume_bound = trace.lambda0 * std::pow(eps_k, 2.0 - gamma);
    try {
      step.run = solve_mu_bubble(profile, anchor, eps_k, opts);
    } catch (const DegenerateMinimizer& e) {
      step.error = e.what();
      step.degenerate = true;
      trace.steps.push_back(step);
      break;
    } catch (const Error& e) {
      step.error = e.what();
      trace.steps.push_back(step);
      break;
    }
    if (trace.equality_case) {
      step.area_bound = trace.area_infimum + trace.lambda0 * eps_k * eps_k;
      step.area_ok = step.run->solution.area <= *step.area_bound;
    }
    anchor = step.run->solution.rho_star;
    trace.steps.push_back(step);
  }

  trace.nested = true;
  for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k) {
    RigidityStep& cur = trace.steps[k];
    const RigidityStep& next = trace.steps[k + 1];
    if (!cur.run || !next.run) continue;
    const double outer = cur.run->solution.rho_star;
    const double inner = next.run->solution.rho_star;
    if (inner > outer) {
      trace.nested = false;
      continue;
    }
    cur.annulus_volume = volume_between(profile, inner, outer).value;
    cur.volume_ok = *cur.annulus_volume <= cur.volume_bound;
    trace.cumulative_volume += *cur.annulus_volume;
  }
  trace.cumulative_bound = trace.lambda0 * std::pow(epsilon, gamma * (2.0 - gamma)) /
                           (1.0 - std::pow(epsilon, (gamma - 1.0) * (2.0 - gamma)));
  trace.cumulative_ok = trace.cumulative_volume <= trace.cumulative_bound;
  return trace;
}

DiameterReport diameter_report(const MuBubbleSolution& solution, double epsilon) {
  DiameterReport out;
  out.intrinsic_diameter = std::numbers::pi * std::sqrt(solution.area / kFourPi);
  out.bound = 4.0 * std::numbers::pi / (3.0 * epsilon);
  out.within_bound = out.intrinsic_diameter <= out.bound;
  return out;
}

}  // namespace penrose
