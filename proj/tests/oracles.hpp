#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library: closed forms, composite Simpson quadrature, and constants frozen
// from 30-digit mpmath runs.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

constexpr double pi = std::numbers::pi;

// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double arcoth(double x) { return 0.5 * std::log((x + 1.0) / (x - 1.0)); }
inline double coth(double x) { return 1.0 / std::tanh(x); }

// n = 3, u = a + b / r.
struct Schwarzschild3 {
  double a = 1.0;
  double b = 0.5;

  double u(double r) const { return a + b / r; }
  double du(double r) const { return -b / (r * r); }
  double area(double r) const {
    const double s = u(r) * u(r) * r;
    return 4.0 * pi * s * s;
  }
  // 2 (u + 2 r u') / (u^3 r)
  double mean_curvature(double r) const {
    return 2.0 * (u(r) + 2.0 * r * du(r)) / (u(r) * u(r) * u(r) * r);
  }
  double hawking(double r) const {
    const double A = area(r), H = mean_curvature(r);
    return std::sqrt(A / (16.0 * pi)) * (1.0 - A * H * H / (16.0 * pi));
  }
  // Antiderivative of u^2.
  double u2_primitive(double r) const { return a * a * r + 2.0 * a * b * std::log(r) - b * b / r; }
  double mass() const { return 2.0 * a * b; }
};

// h(t) = eps coth(3 eps t / 4 + beta).
inline double h(double eps, double beta, double t) { return eps * coth(0.75 * eps * t + beta); }
inline double dh(double eps, double beta, double t) {
  const double s = std::sinh(0.75 * eps * t + beta);
  return -0.75 * eps * eps / (s * s);
}

// Bubble functional on n = 3 Schwarzschild-like profiles, with the distance
// from the closed-form primitive of u^2 and the bulk term by Simpson.
inline double functional(const Schwarzschild3& p, double r0, double eps, double beta, double lip,
                         double rho, int panels = 4000) {
  auto d = [&](double r) { return -lip * (p.u2_primitive(r0) - p.u2_primitive(r)); };
  auto bulk = [&](double r) {
    const double u = p.u(r);
    return h(eps, beta, d(r)) * 4.0 * pi * u * u * u * u * u * u * r * r;
  };
  return p.area(rho) + simpson(bulk, rho, r0, panels);
}

// Trumpet ingredients for n = 3.
inline double u1(double r) { return 1.0 / std::sqrt(r); }
inline double du1(double r) { return -0.5 * std::pow(r, -1.5); }
inline double u2(double r) { return 1.0 + 1.0 / r; }
inline double du2(double r) { return -1.0 / (r * r); }
inline double phi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
inline double zeta(double r0, double t) {
  const double p = phi((2.0 * r0 - t) / r0), q = phi((t - r0) / r0);
  return p / (p + q);
}

// Frozen values (mpmath, 30 digits).
// u = 1, r0 = 1, eps = 0.1, beta = 2, lip = 1 - 1e-6, rho = 0.9.
constexpr double kEuclideanFunctional = 10.2965436246519201891019965746;
// u = 1 + 1/(2r), r0 = 2, eps = 0.2, beta = 1.3, lip = 1 - 1e-6, rho = 1.
constexpr double kSchwarzschildFunctional = 102.809401603567062386483326577;
// 2 arcoth(9): choose_beta for eps = 0.1, H0 = 1.
constexpr double kBetaEps01 = 0.22314355131420975576629509031;
// 0.1 coth(2)
constexpr double kH0 = 0.103731472072754809587780976477;
// sqrt(8 pi / |S_2|) for Schwarzschild m = 1.
constexpr double kEpsilon0 = 0.452548339959390415616540391747;
// 1.1 * 2 * (1/(2 sqrt 2) + 1/2)
constexpr double kMinAlpha3 = 1.87781745930520227684092879832;

}  // namespace oracle
