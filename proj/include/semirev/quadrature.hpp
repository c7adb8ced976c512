#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace semirev {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int panels = 0;
};

// Thrown when adaptive refinement hits the panel budget before reaching the
// requested tolerance; carries the tolerance actually achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double achieved)
      : std::runtime_error(msg), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

// Adaptive Gauss-Kronrod 7/15 with absolute tolerance abs_tol.
QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_panels = 4000);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
// Generated once per n by Newton iteration and cached.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

}  // namespace semirev
