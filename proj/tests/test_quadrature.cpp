#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "penrose/quadrature.hpp"

using namespace penrose;

TEST_CASE("integrate matches closed forms") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, oracle::pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(x); }, -1.0, 2.0) ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
  CHECK(integrate([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
}

TEST_CASE("integrate on a short interval far from the origin") {
  const double v = integrate([](double x) { return x * x; }, 4.0, 4.002);
  const double exact = (std::pow(4.002, 3) - 64.0) / 3.0;
  CHECK(v == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("integrate agrees with composite Simpson") {
  auto f = [](double x) { return std::log1p(x * x) / (1.0 + x); };
  CHECK(integrate(f, 0.0, 5.0) == doctest::Approx(oracle::simpson(f, 0.0, 5.0, 20000)).epsilon(1e-10));
}

TEST_CASE("integrate_radial spans many decades") {
  const double v = integrate_radial([](double r) { return 1.0 / r; }, 1e-8, 1e8);
  CHECK(v == doctest::Approx(16.0 * std::log(10.0)).epsilon(1e-12));
  const double w = integrate_radial([](double r) { return r * r; }, 1e-3, 1e3);
  CHECK(w == doctest::Approx((1e9 - 1e-9) / 3.0).epsilon(1e-12));
}

TEST_CASE("improper integrals converge or are flagged divergent") {
  const ImproperValue tail =
      integrate_radial_improper([](double r) { return 1.0 / (r * r); }, 1.0, INFINITY);
  CHECK_FALSE(tail.divergent);
  CHECK(tail.value == doctest::Approx(1.0).epsilon(1e-8));

  const ImproperValue ball =
      integrate_radial_improper([](double r) { return 4.0 * oracle::pi * r * r; }, 0.0, 1.0);
  CHECK_FALSE(ball.divergent);
  CHECK(ball.value == doctest::Approx(4.0 * oracle::pi / 3.0).epsilon(1e-10));

  const ImproperValue log_div =
      integrate_radial_improper([](double r) { return 1.0 / r; }, 0.0, 1.0);
  CHECK(log_div.divergent);
  CHECK(std::isinf(log_div.value));

  const ImproperValue out_div =
      integrate_radial_improper([](double r) { return 1.0 / std::sqrt(r); }, 1.0, INFINITY);
  CHECK(out_div.divergent);
  CHECK(out_div.value == INFINITY);
}

TEST_CASE("aitken_limit of a geometric sequence") {
  std::vector<double> s;
  double x = 0.0;
  for (int k = 0; k < 3; ++k) {
    x += std::pow(0.3, k);
    s.push_back(x);
  }
  CHECK(aitken_limit(s) == doctest::Approx(1.0 / 0.7).epsilon(1e-14));
  const std::vector<double> flat = {2.0, 2.0, 2.0};
  CHECK(aitken_limit(flat) == 2.0);
}
