#include <doctest.h>

#include <cmath>

#include "semirev/geometry.hpp"

using namespace semirev;

namespace {

// closed-form antiderivative of a for m1 = m2 = 1:
// a(y) = y(y-1)^2/(1+y^2) = y - 2 + 2/(1+y^2)
double A2_closed_11(double x) {
  return 1.0 + 0.5 * x * x - 2.0 * x + 2.0 * std::atan(x);
}

struct Ref {
  int m1, m2;
  double x, value;
};

}  // namespace

TEST_CASE("profile a closed form") {
  SurfaceProfile p11(1, 1);
  CHECK(profile_a(p11, 0.0) == 0.0);
  CHECK(profile_a(p11, 1.0) == 0.0);
  CHECK(profile_a(p11, 2.0) == doctest::Approx(0.4).epsilon(1e-15));

  // sign pattern: a >= 0 for x >= 0, a <= 0 for x <= 0
  for (const SurfaceProfile p : {SurfaceProfile(1, 1), SurfaceProfile(2, 1),
                                 SurfaceProfile(1, 2), SurfaceProfile(3, 2)}) {
    for (double x = -30.0; x <= 30.0; x += 0.37) {
      if (x >= 0.0) CHECK(profile_a(p, x) >= 0.0);
      if (x <= 0.0) CHECK(profile_a(p, x) <= 0.0);
    }
  }

  CHECK_THROWS(SurfaceProfile(0, 1));
  CHECK_THROWS(SurfaceProfile(1, 0));
}

TEST_CASE("profile a' analytic derivative") {
  SurfaceProfile p11(1, 1);
  CHECK(profile_a_prime(p11, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(profile_a_prime(p11, 1.0) == 0.0);

  // independent high-precision anchors
  SurfaceProfile p23(2, 3);
  CHECK(profile_a_prime(p23, 0.7) ==
        doctest::Approx(-0.00098787544297461822578).epsilon(1e-12));
  CHECK(profile_a_prime(p23, -1.2) ==
        doctest::Approx(7.1460735369713630796).epsilon(1e-12));

  // central finite differences of a
  for (const SurfaceProfile p : {SurfaceProfile(1, 1), SurfaceProfile(2, 1),
                                 SurfaceProfile(1, 2), SurfaceProfile(3, 2)}) {
    for (double x : {0.3, 0.7, 2.1, -1.3, 5.5}) {
      const double fd =
          (profile_a(p, x + 1e-6) - profile_a(p, x - 1e-6)) / 2e-6;
      CHECK(profile_a_prime(p, x) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
}

TEST_CASE("A^2 against closed form and quadrature references") {
  Metric m11{SurfaceProfile(1, 1)};
  CHECK(m11.A_squared(0.0) == 1.0);
  CHECK(m11.A_squared(1.0) ==
        doctest::Approx(1.0 + M_PI / 2 - 1.5).epsilon(1e-12));
  for (double x : {-50.0, -5.0, -1.0, 0.5, 1.0, 2.0, 5.0, 20.0, 50.0})
    CHECK(m11.A_squared(x) == doctest::Approx(A2_closed_11(x)).epsilon(1e-11));

  const Ref refs[] = {
      {1, 1, -5.0, 20.753198466109968278}, {1, 1, -1.0, 1.9292036732051033808},
      {1, 1, 0.5, 1.0522952180016122324},  {1, 1, 2.0, 1.214297435588181006},
      {1, 1, 5.0, 6.2468015338900317217},  {1, 1, 20.0, 164.04167586214590772},
      {2, 1, -5.0, 17.943057122461903702}, {2, 1, -1.0, 1.2972319195276824164},
      {2, 1, 0.5, 1.0043710513453134708},  {2, 1, 2.0, 1.1167271971652213218},
      {2, 1, 5.0, 5.7988463395166142522},  {2, 1, 20.0, 162.51565776784487873},
      {1, 2, -5.0, 32.599513085185977571}, {1, 2, -1.0, 2.7447017075300973804},
      {1, 2, 0.5, 1.0258775386316439764},  {1, 2, 2.0, 1.0474706960445627613},
      {1, 2, 5.0, 3.5867192207461044575},  {1, 2, 20.0, 137.07626211007702363}};
  for (const Ref& r : refs) {
    Metric m{SurfaceProfile(r.m1, r.m2)};
    CHECK(m.A_squared(r.x) == doctest::Approx(r.value).epsilon(1e-11));
  }

  // asymptotic bracket at x = 20 and the x^2/2 far-field limit
  CHECK(m11.A_squared(20.0) >= 400.0 * 0.25);
  CHECK(m11.A_squared(20.0) <= 400.0 * 1.0);
  CHECK(m11.A_squared(100.0) / 1e4 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("A^2 >= 1 on a dense sample") {
  for (const SurfaceProfile p : {SurfaceProfile(1, 1), SurfaceProfile(2, 1),
                                 SurfaceProfile(1, 2), SurfaceProfile(3, 2)}) {
    Metric m{p};
    for (double x = -100.0; x <= 100.0; x += 0.73)
      CHECK(m.A_squared(x) >= 1.0 - 1e-12);
  }
}

TEST_CASE("batched sampling matches scalar evaluation") {
  Metric m{SurfaceProfile(2, 1)};
  Eigen::ArrayXd xs(9);
  xs << -7.3, -2.0, -0.4, 0.1, 0.9, 1.4, 3.3, 8.0, 12.0;
  const Eigen::ArrayXd A2 = m.A_squared_on(xs);
  const Eigen::ArrayXd V1 = m.conjugation_potential_on(xs);
  const Eigen::ArrayXd V = m.effective_potential_on(xs, 0.05);
  for (int j = 0; j < xs.size(); ++j) {
    CHECK(A2[j] == doctest::Approx(m.A_squared(xs[j])).epsilon(1e-11));
    CHECK(V1[j] == doctest::Approx(m.conjugation_potential(xs[j])).epsilon(1e-9));
    CHECK(V[j] ==
          doctest::Approx(m.effective_potential(xs[j], 0.05)).epsilon(1e-9));
  }
}

TEST_CASE("metric derivatives") {
  Metric m11{SurfaceProfile(1, 1)};
  auto d0 = m11.metric_derivatives(0.0);
  CHECK(d0.A == 1.0);
  CHECK(d0.A1 == 0.0);
  CHECK(d0.A2d == doctest::Approx(0.5).epsilon(1e-12));

  auto d1 = m11.metric_derivatives(1.0);
  CHECK(d1.A1 == 0.0);
  CHECK(d1.A2d == doctest::Approx(0.0).epsilon(1e-14));

  // finite differences of sqrt(A^2) on |x| <= 10
  for (const SurfaceProfile p : {SurfaceProfile(1, 1), SurfaceProfile(2, 2)}) {
    Metric m{p};
    for (double x = -10.0; x <= 10.0; x += 1.37) {
      const double s = 1e-5;
      auto A = [&](double y) { return std::sqrt(m.A_squared(y)); };
      const double fd1 = (A(x + s) - A(x - s)) / (2 * s);
      const double fd2 = (A(x + s) - 2 * A(x) + A(x - s)) / (s * s);
      auto d = m.metric_derivatives(x);
      CHECK(d.A1 == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(d.A2d == doctest::Approx(fd2).scale(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("conjugation potential V1") {
  Metric m11{SurfaceProfile(1, 1)};
  CHECK(m11.conjugation_potential(0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m11.conjugation_potential(1.0) == doctest::Approx(0.0).epsilon(1e-14));

  // independent reference chain evaluated at 30 digits
  CHECK(m11.conjugation_potential(0.5) ==
        doctest::Approx(-0.068214525866652120783).epsilon(1e-10));
  CHECK(m11.conjugation_potential(2.0) ==
        doctest::Approx(0.11965302064254341589).epsilon(1e-10));
  Metric m21{SurfaceProfile(2, 1)};
  CHECK(m21.conjugation_potential(0.3) ==
        doctest::Approx(0.016779013971965575204).epsilon(1e-10));
  Metric m12{SurfaceProfile(1, 2)};
  CHECK(m12.conjugation_potential(-1.5) ==
        doctest::Approx(-0.10328238278337603018).epsilon(1e-10));

  // far field decay |V1| <= 10/x^2
  for (const SurfaceProfile p : {SurfaceProfile(1, 1), SurfaceProfile(2, 1)}) {
    Metric m{p};
    for (double x : {-80.0, -50.0, 50.0, 80.0, 100.0})
      CHECK(std::abs(m.conjugation_potential(x)) <= 10.0 / (x * x));
  }
}

TEST_CASE("effective potential") {
  Metric m11{SurfaceProfile(1, 1)};
  const double h = 0.01;
  CHECK(m11.effective_potential(0.0, h) ==
        doctest::Approx(1.0 + h * h * 0.25).epsilon(1e-12));
  CHECK(m11.effective_potential(1.0, h) ==
        doctest::Approx(1.0 / (1.0 + M_PI / 2 - 1.5)).epsilon(1e-10));
  CHECK_THROWS(m11.effective_potential(0.0, 0.0));

  // difference from A^{-2} is exactly h^2 V1
  for (double x : {-3.0, 0.2, 1.7}) {
    const double d =
        m11.effective_potential(x, h) - 1.0 / m11.A_squared(x);
    CHECK(d == doctest::Approx(h * h * m11.conjugation_potential(x)).epsilon(1e-13));
  }

  // leading part nonincreasing on x >= 0
  double prev = 1.0;
  for (double x = 0.0; x <= 30.0; x += 0.23) {
    const double v = 1.0 / m11.A_squared(x);
    CHECK(v <= prev + 1e-13);
    prev = v;
  }
}

TEST_CASE("trapped constants") {
  Metric m11{SurfaceProfile(1, 1)};
  auto tc = m11.trapped_constants();
  CHECK(tc.C1 == doctest::Approx(1.0707963267948966192).epsilon(1e-12));
  CHECK(tc.c2 == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(tc.inflection_energy == doctest::Approx(0.93388441384851972).epsilon(1e-12));

  Metric m21{SurfaceProfile(2, 1)};
  CHECK(m21.trapped_constants().c2 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(m21.trapped_constants().C1 ==
        doctest::Approx(1.0096208999123722741).epsilon(1e-12));
  Metric m12{SurfaceProfile(1, 2)};
  CHECK(m12.trapped_constants().C1 ==
        doctest::Approx(1.0278870147096838573).epsilon(1e-12));

  for (int m1 = 1; m1 <= 3; ++m1)
    for (int m2 = 1; m2 <= 3; ++m2) {
      Metric m{SurfaceProfile(m1, m2)};
      auto t = m.trapped_constants();
      CHECK(t.C1 > 1.0);
      CHECK(t.c2 < 1.0);
      CHECK(t.c2 > 0.0);
      CHECK(t.inflection_energy < t.hyperbolic_energy);
    }
}

TEST_CASE("Taylor expansion of A^2 at the inflection point") {
  for (const SurfaceProfile p : {SurfaceProfile(1, 1), SurfaceProfile(2, 1),
                                 SurfaceProfile(1, 2)}) {
    Metric m{p};
    auto tc = m.trapped_constants();
    for (double d = -0.1; d <= 0.1; d += 0.017) {
      const double x = 1.0 + d;
      const double model = tc.C1 + tc.c2 * std::pow(d, 2 * p.m2 + 1);
      CHECK(std::abs(m.A_squared(x) - model) <=
            10.0 * std::pow(std::abs(d), 2 * p.m2 + 2) + 1e-13);
    }
  }
}
