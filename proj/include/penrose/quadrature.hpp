#pragma once

#include <functional>
#include <span>

namespace penrose {

struct QuadratureOptions {
  double tolerance = 1e-10;  // absolute target on each finite piece
  unsigned max_depth = 18;   // bisection cap of the adaptive rule
};

// Value of a possibly improper integral. Divergence is reported explicitly;
// `value` is +inf (or -inf) in that case, never a large sentinel.
struct ImproperValue {
  double value = 0.0;
  bool divergent = false;
};

// Adaptive Gauss-Kronrod on a finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

// Integral of f(r) dr over [a, b] with 0 < a <= b < inf, evaluated in the
// logarithmic variable s = ln r so power laws spanning many decades stay
// smooth.
double integrate_radial(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});

// Same as integrate_radial but a may be 0 and b may be +inf. Improper ends are
// approached through a geometric sequence of cutoffs (factor 10 per step);
// the partial sums are accepted once their increments contract and the tail
// is closed with an Aitken estimate. Increments that stop contracting mark the
// integral divergent.
ImproperValue integrate_radial_improper(const std::function<double(double)>& f, double a,
                                        double b, const QuadratureOptions& opts = {});

// Limit of a sequence whose error behaves like c q^k, from its last three
// terms (Aitken delta-squared). Falls back to the last term when the second
// difference vanishes.
double aitken_limit(std::span<const double> seq);

}  // namespace penrose
