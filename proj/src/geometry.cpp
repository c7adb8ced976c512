#include "semirev/geometry.hpp"

#include <cmath>

#include "semirev/quadrature.hpp"

namespace semirev {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (; n > 0; n >>= 1, x *= x)
    if (n & 1) r *= x;
  return r;
}

}  // namespace

double profile_a(const SurfaceProfile& p, double x) {
  const int pw = 2 * p.m1 - 1, q = 2 * p.m2, r = p.m1 + p.m2 - 1;
  return ipow(x, pw) * ipow(x - 1.0, q) / ipow(1.0 + x * x, r);
}

double profile_a_prime(const SurfaceProfile& p, double x) {
  const int pw = 2 * p.m1 - 1, q = 2 * p.m2, r = p.m1 + p.m2 - 1;
  // product rule on x^pw (x-1)^q (1+x^2)^{-r}; pw >= 1 and q >= 2, so the
  // reduced powers stay nonnegative
  const double num = ipow(x, pw - 1) * ipow(x - 1.0, q - 1) *
                     (pw * (x - 1.0) + q * x) / ipow(1.0 + x * x, r);
  const double den = 2.0 * r * ipow(x, pw + 1) * ipow(x - 1.0, q) /
                     ipow(1.0 + x * x, r + 1);
  return num - den;
}

double Metric::A_squared(double x) const {
  if (x == 0.0) return 1.0;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
  }
  const SurfaceProfile p = p_;
  QuadResult q = integrate_gk([&p](double y) { return profile_a(p, y); }, 0.0,
                              x, 1e-12);
  const double val = 1.0 + q.value;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.emplace(x, val);
  return val;
}

Metric::Derivs Metric::metric_derivatives(double x) const {
  const double A2 = A_squared(x);
  const double A = std::sqrt(A2);
  const double av = a(x), apv = a_prime(x);
  const double A1 = av / (2.0 * A);
  const double A2d = apv / (2.0 * A) - av * av / (4.0 * A2 * A);
  return {A, A1, A2d};
}

double Metric::conjugation_potential(double x) const {
  const Derivs d = metric_derivatives(x);
  return 0.5 * d.A2d / d.A - 0.25 * (d.A1 * d.A1) / (d.A * d.A);
}

double Metric::effective_potential(double x, double h) const {
  if (h <= 0.0) throw std::invalid_argument("effective_potential: h must be > 0");
  return 1.0 / A_squared(x) + h * h * conjugation_potential(x);
}

TrappedConstants Metric::trapped_constants() const {
  TrappedConstants tc;
  tc.C1 = A_squared(1.0);
  // a(x) ~ (x-1)^{2 m2} / 2^{m1+m2-1} near x = 1, so the (x-1)^{2 m2 + 1}
  // coefficient of A^2 is 1 / ((2 m2 + 1) 2^{m1+m2-1})
  tc.c2 = 1.0 / ((2.0 * p_.m2 + 1.0) * ipow(2.0, p_.m1 + p_.m2 - 1));
  tc.inflection_energy = 1.0 / tc.C1;
  return tc;
}

Eigen::ArrayXd Metric::A_squared_on(const Eigen::ArrayXd& xs) const {
  const Eigen::Index n = xs.size();
  Eigen::ArrayXd out(n);
  if (n == 0) return out;
  for (Eigen::Index j = 1; j < n; ++j)
    if (!(xs[j] > xs[j - 1]))
      throw std::invalid_argument("A_squared_on: grid must be strictly increasing");

  const SurfaceProfile p = p_;
  auto f = [&p](double y) { return profile_a(p, y); };
  // anchor the running sum at the grid point nearest 0, then accumulate
  // increments with compensated summation
  Eigen::Index j0 = 0;
  for (Eigen::Index j = 1; j < n; ++j)
    if (std::abs(xs[j]) < std::abs(xs[j0])) j0 = j;
  out[j0] = 1.0 + integrate_gk(f, 0.0, xs[j0], 1e-13).value;

  double run = out[j0], comp = 0.0;
  for (Eigen::Index j = j0 + 1; j < n; ++j) {
    const double inc = integrate_gk(f, xs[j - 1], xs[j], 1e-14, 64).value;
    const double y = inc - comp, t = run + y;
    comp = (t - run) - y;
    run = t;
    out[j] = run;
  }
  run = out[j0], comp = 0.0;
  for (Eigen::Index j = j0 - 1; j >= 0; --j) {
    const double inc = integrate_gk(f, xs[j], xs[j + 1], 1e-14, 64).value;
    const double y = -inc - comp, t = run + y;
    comp = (t - run) - y;
    run = t;
    out[j] = run;
  }
  return out;
}

namespace {

Eigen::ArrayXd v1_from_samples(const Metric& m, const Eigen::ArrayXd& xs,
                               const Eigen::ArrayXd& A2) {
  const Eigen::ArrayXd A = A2.sqrt();
  Eigen::ArrayXd av(xs.size()), apv(xs.size());
  for (Eigen::Index j = 0; j < xs.size(); ++j) {
    av[j] = m.a(xs[j]);
    apv[j] = m.a_prime(xs[j]);
  }
  const Eigen::ArrayXd A1 = av / (2.0 * A);
  const Eigen::ArrayXd A2d = apv / (2.0 * A) - av.square() / (4.0 * A2 * A);
  return 0.5 * A2d / A - 0.25 * A1.square() / A2;
}

}  // namespace

Eigen::ArrayXd Metric::conjugation_potential_on(const Eigen::ArrayXd& xs) const {
  return v1_from_samples(*this, xs, A_squared_on(xs));
}

Eigen::ArrayXd Metric::effective_potential_on(const Eigen::ArrayXd& xs,
                                              double h) const {
  if (h <= 0.0) throw std::invalid_argument("effective_potential_on: h must be > 0");
  const Eigen::ArrayXd A2 = A_squared_on(xs);
  return A2.inverse() + h * h * v1_from_samples(*this, xs, A2);
}

}  // namespace semirev
