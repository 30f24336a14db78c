#pragma once

// Radial reduction of the mu-bubble problem on a three-dimensional radial
// profile. Competitors are the coordinate balls {r < rho} inside the barrier
// sphere S_{r0}, and
//
//     A(rho) = |S_rho| + int_{rho}^{r0} h(d(r)) dV,
//
// where d is the shrunk signed distance to S_{r0} and
// h(t) = eps coth(3 eps t / 4 + beta). Critical points satisfy H = h(d).

#include <optional>
#include <string>
#include <vector>

#include "penrose/radial_geometry.hpp"

namespace penrose {

struct PrescribedMeanCurvature {
  double epsilon = 0.0;
  double beta = 0.0;

  PrescribedMeanCurvature() = default;
  PrescribedMeanCurvature(double epsilon, double beta);

  // h blows up as t decreases to -4 beta / (3 eps).
  double barrier() const { return -4.0 * beta / (3.0 * epsilon); }
  double eval(double t) const;
  double derivative(double t) const;
};

// Both throw BarrierError for t at or below the barrier.
double h_eval(const PrescribedMeanCurvature& h, double t);
// 2h' + 3h^2/2 - 3 eps^2/2 with the analytic derivative.
double h_ode_residual(const PrescribedMeanCurvature& h, double t);

struct MuBubbleProblem {
  RadialProfile profile;
  double anchor_radius = 0.0;
  PrescribedMeanCurvature h;
  double lip_factor = 1.0 - 1e-6;
};

// Throws unless n = 3, r0 lies in the domain, lip_factor in (0, 1) and
// H(r0) > h(0).
void validate(const MuBubbleProblem& problem);

// lip_factor times the signed distance from S_r to S_{r0}, negative inside.
double dist_to_anchor(const MuBubbleProblem& problem, double r);

struct BarrierLocation {
  double radius = 0.0;
  bool reached = false;  // false: the barrier lies below `radius`, the scan floor
};

// Radius where dist_to_anchor meets h.barrier().
BarrierLocation barrier_radius(const MuBubbleProblem& problem);

// Throws BarrierError inside the barrier and OutOfCollection for rho > r0.
double functional_eval(const MuBubbleProblem& problem, double rho);

struct MuBubbleSolution {
  double epsilon = 0.0;
  double beta = 0.0;
  double rho_star = 0.0;
  double area = 0.0;
  double functional_value = 0.0;
  double mean_curvature = 0.0;
  double distance = 0.0;  // dist_to_anchor(rho_star)
  double el_residual = 0.0;
  bool second_order_ok = false;
  double barrier_radius = 0.0;
};

struct MinimizeOptions {
  int scan_points = 512;
  double rho_tolerance = 1e-10;  // relative to r0
};

// Global scan in log r, golden-section refinement and a final polish of the
// Euler-Lagrange root. Throws DegenerateMinimizer when the scan minimum sits
// next to the barrier.
MuBubbleSolution minimize(const MuBubbleProblem& problem, const MinimizeOptions& opts = {});

// Smallest beta with h(0) <= 0.9 H(r0) by bisection, doubled once. Throws
// EpsilonTooLarge when eps >= H(r0) or when no beta reaches the 0.9 margin.
double choose_beta(const RadialProfile& profile, double r0, double epsilon);

struct BubbleRun {
  MuBubbleSolution solution;
  int beta_doublings = 0;
};

// choose_beta followed by minimize; beta is doubled again while the
// minimizer is degenerate or H(rho*) >= 2 eps, at most 64 times.
BubbleRun solve_mu_bubble(const RadialProfile& profile, double r0, double epsilon,
                          const MinimizeOptions& opts = {});

struct HorizonStep {
  double epsilon = 0.0;
  std::optional<BubbleRun> run;
  std::string error;
  bool degenerate = false;  // error was a DegenerateMinimizer
  // sqrt(A/16pi) (1 - A H^2 / 16pi)
  double hawking_bound = 0.0;
  // sqrt(A_g/16pi) - (16pi)^{-3/2} A^{3/2} H^2
  double area_bound = 0.0;
};

struct HorizonSequence {
  double anchor_radius = 0.0;
  double anchor_mean_curvature = 0.0;
  double anchor_area = 0.0;
  double area_infimum = 0.0;
  std::vector<HorizonStep> steps;
};

// 0.2 halved while >= 1e-3.
std::vector<double> default_epsilon_schedule();

// Steps are independent and run concurrently; step errors are recorded and
// the sequence continues.
HorizonSequence horizon_sequence(const RadialProfile& profile, double r0,
                                 const std::vector<double>& epsilons,
                                 const MinimizeOptions& opts = {});

struct RigidityStep {
  int k = 0;
  double epsilon = 0.0;
  std::optional<BubbleRun> run;
  std::string error;
  bool degenerate = false;
  std::optional<double> annulus_volume;  // between this bubble and the next
  std::optional<double> area_bound;      // A_g + Lambda0 eps_k^2, equality case only
  double volume_bound = 0.0;             // Lambda0 eps_k^{2 - gamma}
  bool area_ok = true;
  bool volume_ok = true;
};

struct RigidityTrace {
  double gamma = 0.0;
  double epsilon = 0.0;
  double lambda0 = 0.0;
  double epsilon0 = 0.0;
  double area_infimum = 0.0;
  bool equality_case = false;
  std::vector<RigidityStep> steps;
  double cumulative_volume = 0.0;
  double cumulative_bound = 0.0;
  bool cumulative_ok = false;
  bool nested = false;  // rho_star non-increasing in k

  bool all_checks_pass() const;
};

// Bubbles at eps_k = eps^{gamma^k} for k = 0, 1, ... until eps_k < 1e-6 or
// k = 20. Step k+1 is anchored at the bubble of step k.
RigidityTrace rigidity_iteration(const RadialProfile& profile, double r0, double epsilon,
                                 double gamma, const MinimizeOptions& opts = {});

struct DiameterReport {
  double intrinsic_diameter = 0.0;
  double bound = 0.0;  // 4 pi / (3 eps)
  bool within_bound = false;
};

// The bubble is a round sphere, so its diameter is pi sqrt(area / 4pi).
DiameterReport diameter_report(const MuBubbleSolution& solution, double epsilon);

}  // namespace penrose
