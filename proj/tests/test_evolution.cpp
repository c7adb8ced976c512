#include <doctest.h>

#include <cmath>

#include "semirev/evolution.hpp"

using namespace semirev;
using Complex = std::complex<double>;

namespace {

Eigen::VectorXcd normalized_gaussian(const Grid& g, double center, double width) {
  Eigen::VectorXcd v(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double d = (g.x(j) - center) / width;
    v[j] = std::exp(-0.5 * d * d);
  }
  return v / std::sqrt(g.dx * v.squaredNorm());
}

}  // namespace

TEST_CASE("beta exponent") {
  CHECK(beta_exponent(1, 1) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(beta_exponent(1, 2) == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  CHECK(beta_exponent(2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS(beta_exponent(0, 1));
}

TEST_CASE("mode operator equals k^2 times the semiclassical operator") {
  Metric m{SurfaceProfile(1, 1)};
  const int k = 7;
  const Grid g = build_grid(1.0 / k, 8, -6.0, 7.0);
  CapProfile cap;
  cap.layer_width = 2.0;
  for (const std::optional<CapProfile> c :
       {std::optional<CapProfile>{}, std::optional<CapProfile>{cap}}) {
    const DiscreteOperator semi = assemble_operator(m, 1.0 / k, g, c);
    const DiscreteOperator mode = assemble_mode_operator(m, k, g, c);
    const double k2 = k * k;
    for (int j = 0; j < g.n; ++j)
      CHECK(std::abs(mode.diagonal()[j] - k2 * semi.diagonal()[j]) <=
            1e-12 * std::abs(mode.diagonal()[j]));
    for (int j = 0; j + 1 < g.n; ++j)
      CHECK(mode.off1()[j] == doctest::Approx(k2 * semi.off1()[j]).epsilon(1e-13));
  }
  CHECK_THROWS(assemble_mode_operator(m, 0, g, std::nullopt));

  // k = 1: potential part is A^{-2} + V1 pointwise
  const Grid g1 = build_grid(1.0, 10, -6.0, 7.0);
  const DiscreteOperator one = assemble_mode_operator(m, 1, g1, std::nullopt);
  const double c0 = 30.0 / (12.0 * g1.dx * g1.dx);
  for (int j = 2; j < g1.n - 2; ++j) {
    const double x = g1.x(j);
    const double pot = 1.0 / m.A_squared(x) + m.conjugation_potential(x);
    CHECK(one.diagonal()[j].real() - c0 == doctest::Approx(pot).epsilon(1e-9));
  }
}

TEST_CASE("Crank-Nicolson is unitary without a cap") {
  Metric m{SurfaceProfile(1, 1)};
  const int k = 20;
  const Grid g = build_grid(1.0 / k, 8, -4.0, 5.0);
  const DiscreteOperator op = assemble_mode_operator(m, k, g, std::nullopt);
  const CrankNicolson cn(op, 0.5 / (k * k));
  Eigen::VectorXcd v = normalized_gaussian(g, 0.5, 0.5);
  const double mass0 = g.dx * v.squaredNorm();
  for (int s = 0; s < 200; ++s) cn.step(v);
  CHECK(std::abs(g.dx * v.squaredNorm() - mass0) <= 1e-11);
}

TEST_CASE("cap makes each step a contraction") {
  Metric m{SurfaceProfile(1, 1)};
  const int k = 15;
  const Grid g = build_grid(1.0 / k, 8, -6.0, 7.0);
  CapProfile cap;
  cap.layer_width = 2.0;
  const DiscreteOperator op = assemble_mode_operator(m, k, g, cap);
  const CrankNicolson cn(op, 0.5 / (k * k));
  // data heading for the right cap
  Eigen::VectorXcd v = normalized_gaussian(g, 3.0, 0.5);
  for (int j = 0; j < g.n; ++j) v[j] *= std::exp(Complex(0.0, k * g.x(j)));
  double prev = g.dx * v.squaredNorm();
  for (int s = 0; s < 400; ++s) {
    cn.step(v);
    const double cur = g.dx * v.squaredNorm();
    CHECK(cur <= prev + 1e-13);
    prev = cur;
  }
  CHECK(prev < 0.9);  // the wave actually reached the layer
}

TEST_CASE("eigenvector advances by the Cayley phase factor") {
  const double L = 3.0, h = 1.0;
  const Grid g = build_grid_dx(0.02, 0.0, L);
  const DiscreteOperator op =
      assemble_operator([](double) { return 0.0; }, h, g, std::nullopt);
  const double theta = M_PI * g.dx / L;
  const double lam =
      (30.0 - 32.0 * std::cos(theta) + 2.0 * std::cos(2 * theta)) /
      (12.0 * g.dx * g.dx);
  Eigen::VectorXcd v(g.n);
  for (int j = 0; j < g.n; ++j) v[j] = std::sin(M_PI * g.x(j) / L);
  v /= std::sqrt(g.dx * v.squaredNorm());

  const double dt = 0.2 / lam;
  const CrankNicolson cn(op, dt);
  Eigen::VectorXcd w = v;
  cn.step(w);
  const Complex factor = (1.0 - Complex(0, 0.5) * dt * lam) /
                         (1.0 + Complex(0, 0.5) * dt * lam);
  CHECK((w - factor * v).norm() <= 1e-10 * v.norm());
  CHECK(std::abs(factor - std::exp(Complex(0, -lam * dt))) <=
        0.2 * std::pow(lam * dt, 3));
}

TEST_CASE("accumulators are nonnegative and nondecreasing") {
  Metric m{SurfaceProfile(1, 1)};
  ModeEvolutionConfig cfg;
  cfg.profile = m.profile();
  cfg.k = 15;
  cfg.T = 0.3;
  cfg.grid = build_grid(1.0 / 15, 8, -6.0, 7.0);
  CapProfile cap;
  cap.layer_width = 2.0;
  cfg.cap = cap;
  cfg.trace_stride = 1;
  const SpatialCutoff chi(0.5, 1.0, 1.5);
  const Eigen::VectorXcd v0 = normalized_gaussian(cfg.grid, 0.2, 0.4);
  const EvolutionTrace tr = evolve_and_measure(cfg, m, v0, chi);
  REQUIRE(tr.times.size() > 10);
  for (size_t i = 1; i < tr.times.size(); ++i) {
    CHECK(tr.smoothing_x[i] >= tr.smoothing_x[i - 1]);
    CHECK(tr.smoothing_theta[i] >= tr.smoothing_theta[i - 1]);
    CHECK(tr.smoothing_cutoff[i] >= tr.smoothing_cutoff[i - 1]);
    CHECK(tr.weighted_away[i] >= tr.weighted_away[i - 1]);
    CHECK(tr.mass[i] <= tr.mass[i - 1] + 1e-13);
  }
  CHECK(tr.smoothing_x.back() > 0.0);

  // unnormalized data is rejected
  CHECK_THROWS(evolve_and_measure(cfg, m, 2.0 * v0, chi));
}

TEST_CASE("halving dt moves the accumulators by less than a percent") {
  Metric m{SurfaceProfile(1, 1)};
  ModeEvolutionConfig cfg;
  cfg.profile = m.profile();
  cfg.k = 25;
  cfg.T = 0.2;
  cfg.grid = build_grid(1.0 / 25, 10, -6.0, 7.0);
  CapProfile cap;
  cap.layer_width = 2.0;
  cfg.cap = cap;
  const SpatialCutoff chi(0.5, 1.0, 1.5);
  const Eigen::VectorXcd v0 = normalized_gaussian(cfg.grid, -2.0, 0.4);

  cfg.dt = 0.5 / (25.0 * 25.0);
  const EvolutionTrace a = evolve_and_measure(cfg, m, v0, chi);
  cfg.dt /= 2.0;
  const EvolutionTrace b = evolve_and_measure(cfg, m, v0, chi);
  CHECK(std::abs(a.smoothing_x.back() - b.smoothing_x.back()) <=
        0.01 * b.smoothing_x.back());
  CHECK(std::abs(a.smoothing_theta.back() - b.smoothing_theta.back()) <=
        0.01 * b.smoothing_theta.back());
}

TEST_CASE("data below the barrier far from the trapped sets barely registers") {
  Metric m{SurfaceProfile(1, 1)};
  ModeEvolutionConfig cfg;
  cfg.profile = m.profile();
  cfg.k = 40;
  cfg.T = 0.3;
  cfg.grid = build_grid(1.0 / 40, 10, -12.0, 13.0);
  CapProfile cap;
  cfg.cap = cap;
  const SpatialCutoff chi(0.5, 1.0, 1.5);
  const Eigen::VectorXcd v0 = normalized_gaussian(cfg.grid, -5.0, 0.5);
  const EvolutionTrace tr = evolve_and_measure(cfg, m, v0, chi);
  CHECK(tr.smoothing_cutoff.back() <= 1e-3 * (40.0 * 40.0 * cfg.T));
}

TEST_CASE("half derivative norm") {
  const double dx = 0.01;
  const int n = 4000;

  // single-point datum: compare with a direct evaluation of the same sum
  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(n);
  delta[1234] = 2.0;
  const double got = half_derivative_norm_sq(delta, dx);
  // support width 1 -> N = 4, xi_m = 2 pi m / (4 dx)
  double expect = 0.0;
  for (int mm = 0; mm < 4; ++mm) {
    const int mt = (mm <= 2) ? mm : mm - 4;
    const double xi = 2.0 * M_PI * mt / (4.0 * dx);
    expect += std::sqrt(1.0 + xi * xi) * std::norm(dx * 2.0);
  }
  expect /= 4.0 * dx;
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));

  // windowed plane wave: roughly sqrt(1 + xi0^2) times the mass
  const double xi0 = 35.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double x = j * dx;
    const double s = (x - 20.0) / 6.0;
    if (std::abs(s) < 1.0)
      v[j] = bump_step(std::abs(s)) * std::exp(Complex(0, xi0 * x));
  }
  const double mass = dx * v.squaredNorm();
  const double hn = half_derivative_norm_sq(v, dx);
  CHECK(hn / mass == doctest::Approx(std::sqrt(1.0 + xi0 * xi0)).epsilon(0.02));

  // multiplier at least 1, empty datum gives zero
  CHECK(hn >= mass * (1.0 - 1e-12));
  CHECK(half_derivative_norm_sq(Eigen::VectorXcd::Zero(16), dx) == 0.0);
}

TEST_CASE("saturation at a single small k") {
  Metric m{SurfaceProfile(1, 1)};
  QuasimodeParams q;
  q.m2 = 1;
  q.c2 = m.trapped_constants().c2;

  ModeEvolutionConfig base;
  base.cap = CapProfile{};
  const double h = 1.0 / 50;
  q.h = h;
  const double dx = std::min(2.0 * M_PI * h / 10.0, q.mu() / 50.0);
  base.grid = build_grid_dx(dx, -12.0, 13.0);
  base.early_exit = false;

  const SpatialCutoff chi(1.0, 0.25, 0.5);
  const BoundCheck bc = saturation_experiment(m, 50, q, 10.0, chi, base);
  CHECK(bc.ratio > 0.0);
  CHECK(bc.lhs > 0.0);
  CHECK(bc.rhs > 0.0);
  // the window is so short that the quasimode survives it: ratio near 1/A
  CHECK(bc.ratio > 0.02);
  CHECK(bc.ratio < 0.5);

  // a cutoff that fails to cover the support is rejected
  const SpatialCutoff tiny(1.0, 0.001, 0.002);
  CHECK_THROWS(saturation_experiment(m, 50, q, 10.0, tiny, base));
}
