#include <doctest.h>

#include <cmath>

#include "semirev/quadrature.hpp"

using namespace semirev;

TEST_CASE("adaptive GK15 on smooth integrands") {
  auto q1 = integrate_gk([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(q1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  auto q2 = integrate_gk([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(q2.value == doctest::Approx(2.0).epsilon(1e-13));

  // orientation
  auto q3 = integrate_gk([](double x) { return std::exp(x); }, 1.0, -1.0, 1e-12);
  CHECK(q3.value == doctest::Approx(-(std::exp(1.0) - std::exp(-1.0))).epsilon(1e-13));

  CHECK(integrate_gk([](double) { return 1.0; }, 2.0, 2.0, 1e-12).value == 0.0);
}

TEST_CASE("error estimate respects the requested tolerance") {
  auto q = integrate_gk([](double x) { return std::sqrt(std::abs(x)); }, -1.0,
                        1.0, 1e-10);
  CHECK(q.error <= 1e-10);
  CHECK(q.value == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("panel budget exhaustion reports the achieved tolerance") {
  bool threw = false;
  try {
    integrate_gk([](double x) { return std::sin(1.0 / (x * x + 1e-12)); }, 0.0,
                 1.0, 1e-14, 8);
  } catch (const QuadratureError& e) {
    threw = true;
    CHECK(e.achieved_tolerance > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("Gauss-Legendre rule generation") {
  const auto& rule = gauss_legendre(64);
  REQUIRE(rule.nodes.size() == 64);
  double wsum = 0.0;
  for (int i = 0; i < 64; ++i) {
    wsum += rule.weights[i];
    CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[63 - i]).epsilon(1e-14));
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  // exact for polynomials of degree <= 127
  double acc = 0.0;
  for (int i = 0; i < 64; ++i)
    acc += rule.weights[i] * std::pow(rule.nodes[i], 126);
  CHECK(acc == doctest::Approx(2.0 / 127.0).epsilon(1e-12));
}
