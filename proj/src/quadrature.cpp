#include "penrose/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "penrose/errors.hpp"

namespace penrose {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// Relative stopping target of the adaptive rule. QuadratureOptions::tolerance
// only steers when an improper tail counts as converged.
constexpr double kRelativeTolerance = 1e-13;

constexpr double kCutoffFactor = 10.0;
constexpr int kMaxCutoffs = 300;
constexpr double kStalledRatio = 0.99;

double log_integral(const std::function<double(double)>& f, double a, double b,
                    const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  auto g = [&f](double s) {
    const double r = std::exp(s);
    return f(r) * r;
  };
  return integrate(g, std::log(a), std::log(b), opts);
}

// Sums pieces over [c_k, c_{k-1}] (or [c_{k-1}, c_k]) for a geometric
// sequence of cutoffs c_k and decides whether the sum converges.
template <class Piece>
ImproperValue sum_geometric_pieces(double head, Piece piece, double sign,
                                   const QuadratureOptions& opts) {
  double total = head;
  double prev_inc = 0.0;
  int stalled = 0;
  for (int k = 1; k <= kMaxCutoffs; ++k) {
    const double inc = piece(k);
    if (!std::isfinite(inc)) return {sign * std::numeric_limits<double>::infinity(), true};
    total += inc;
    if (!std::isfinite(total)) return {sign * std::numeric_limits<double>::infinity(), true};
    if (k >= 2 && prev_inc != 0.0) {
      const double ratio = inc / prev_inc;
      stalled = (ratio >= kStalledRatio) ? stalled + 1 : 0;
      if (stalled >= 3) return {sign * std::numeric_limits<double>::infinity(), true};
      const double scale = std::max(1.0, std::abs(total));
      if (ratio >= 0.0 && ratio < kStalledRatio &&
          std::abs(inc) <= opts.tolerance * 1e-2 * scale) {
        return {total + inc * ratio / (1.0 - ratio), false};
      }
    }
    if (inc == 0.0 && prev_inc == 0.0 && k >= 3) return {total, false};
    prev_inc = inc;
  }
  return {sign * std::numeric_limits<double>::infinity(), true};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  // The rule is applied on [-1, 1]: its error estimate degrades on short
  // intervals far from the origin.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto g = [&f, mid, half](double x) { return f(mid + half * x) * half; };
  return Kronrod::integrate(g, -1.0, 1.0, opts.max_depth, kRelativeTolerance);
}

double integrate_radial(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts) {
  if (!(a > 0.0) || !std::isfinite(b) || b < a)
    throw DomainError("integrate_radial needs 0 < a <= b < inf");
  return log_integral(f, a, b, opts);
}

ImproperValue integrate_radial_improper(const std::function<double(double)>& f, double a,
                                        double b, const QuadratureOptions& opts) {
  if (b < a || a < 0.0) throw DomainError("integrate_radial_improper needs 0 <= a <= b");
  if (a == b) return {0.0, false};
  const bool open_low = (a == 0.0);
  const bool open_high = std::isinf(b);
  if (!open_low && !open_high) return {log_integral(f, a, b, opts), false};

  if (open_low && open_high) {
    const double split = 1.0;
    const ImproperValue lo = integrate_radial_improper(f, 0.0, split, opts);
    const ImproperValue hi = integrate_radial_improper(f, split, b, opts);
    if (lo.divergent || hi.divergent)
      return {std::numeric_limits<double>::infinity(), true};
    return {lo.value + hi.value, false};
  }

  if (open_low) {
    const double c0 = b / kCutoffFactor;
    const double head = log_integral(f, c0, b, opts);
    auto piece = [&](int k) {
      const double hi = c0 * std::pow(kCutoffFactor, -(k - 1));
      const double lo = hi / kCutoffFactor;
      if (lo <= std::numeric_limits<double>::min() * 1e6) return 0.0;
      return log_integral(f, lo, hi, opts);
    };
    return sum_geometric_pieces(head, piece, 1.0, opts);
  }

  const double c0 = a * kCutoffFactor;
  const double head = log_integral(f, a, c0, opts);
  auto piece = [&](int k) {
    const double lo = c0 * std::pow(kCutoffFactor, k - 1);
    const double hi = lo * kCutoffFactor;
    if (!std::isfinite(hi) || hi >= std::numeric_limits<double>::max() / 1e6)
      return std::numeric_limits<double>::infinity();
    return log_integral(f, lo, hi, opts);
  };
  return sum_geometric_pieces(head, piece, 1.0, opts);
}

double aitken_limit(std::span<const double> seq) {
  if (seq.empty()) throw PreconditionError("aitken_limit on an empty sequence");
  const std::size_t n = seq.size();
  if (n < 3) return seq[n - 1];
  const double x0 = seq[n - 3], x1 = seq[n - 2], x2 = seq[n - 1];
  const double d1 = x2 - x1;
  const double denom = (x2 - x1) - (x1 - x0);
  if (denom == 0.0 || !std::isfinite(denom)) return x2;
  return x2 - d1 * d1 / denom;
}

}  // namespace penrose
