#pragma once

#include <Eigen/Core>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace semirev {

// Flatness orders of the two trapped sets: x = 0 carries a degenerate
// hyperbolic maximum of order 2*m1, x = 1 an odd-order inflection of the
// warping function with flatness 2*m2.
struct SurfaceProfile {
  int m1 = 1;
  int m2 = 1;

  SurfaceProfile() = default;
  SurfaceProfile(int m1_, int m2_) : m1(m1_), m2(m2_) {
    if (m1 < 1 || m2 < 1)
      throw std::invalid_argument("SurfaceProfile requires m1 >= 1 and m2 >= 1");
  }
};

struct TrappedConstants {
  double C1;                       // A^2 at the inflection point x = 1
  double c2;                       // leading Taylor coefficient of A^2 at x = 1
  double hyperbolic_energy = 1.0;  // barrier-top value of A^{-2} at x = 0
  double inflection_energy;        // 1 / C1
};

// closed-form profile a and its analytic derivative
double profile_a(const SurfaceProfile& p, double x);
double profile_a_prime(const SurfaceProfile& p, double x);

// Evaluator for the derived metric quantities.  A^2 requires quadrature and
// is memoized; everything else is closed-form on top of it.  All methods are
// safe to call concurrently.
class Metric {
 public:
  explicit Metric(SurfaceProfile p) : p_(p) {}

  const SurfaceProfile& profile() const { return p_; }

  double a(double x) const { return profile_a(p_, x); }
  double a_prime(double x) const { return profile_a_prime(p_, x); }

  // 1 + int_0^x a(y) dy by adaptive Gauss-Kronrod, abs tol 1e-12, memoized on x
  double A_squared(double x) const;

  struct Derivs {
    double A;    // A(x)
    double A1;   // A'(x)  = a / (2A)
    double A2d;  // A''(x) = a'/(2A) - a^2/(4A^3)
  };
  Derivs metric_derivatives(double x) const;

  // V1 = (1/2) A''/A - (1/4) (A')^2 / A^2
  double conjugation_potential(double x) const;

  // V = A^{-2} + h^2 V1, h > 0
  double effective_potential(double x, double h) const;

  TrappedConstants trapped_constants() const;

  // Batched sampling along a sorted grid; A^2 is accumulated incrementally so
  // the cost stays linear in the number of points.
  Eigen::ArrayXd A_squared_on(const Eigen::ArrayXd& xs) const;
  Eigen::ArrayXd conjugation_potential_on(const Eigen::ArrayXd& xs) const;
  Eigen::ArrayXd effective_potential_on(const Eigen::ArrayXd& xs, double h) const;

 private:
  SurfaceProfile p_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<double, double> cache_;
};

}  // namespace semirev
