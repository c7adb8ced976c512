#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <optional>

#include "semirev/banded.hpp"
#include "semirev/geometry.hpp"

namespace semirev {

// Uniform grid of n interior points on (xmin, xmax); x_j = xmin + j dx for
// j = 1..n with dx = (xmax - xmin)/(n + 1).  Dirichlet walls at both ends.
struct Grid {
  double xmin = 0.0;
  double xmax = 1.0;
  int n = 16;
  double dx = 0.0;

  double x(int j) const { return xmin + (j + 1) * dx; }  // j = 0..n-1
  Eigen::ArrayXd points() const {
    Eigen::ArrayXd xs(n);
    for (int j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
  }
};

// Smallest interior count giving dx <= 2 pi h / ppw (ppw points per
// semiclassical wavelength at energy ~ 1).  Hard cap n <= 5e6.
Grid build_grid(double h, int ppw, double xmin, double xmax);

// Uniform grid with an explicit dx bound instead of the wavelength rule.
Grid build_grid_dx(double dx_max, double xmin, double xmax);

// Complex absorbing layer at both ends: Gamma = strength * (d / width)^power
// with d the penetration depth into the layer, zero elsewhere.
struct CapProfile {
  double layer_width = 3.0;
  double strength = 1.0;
  int power = 4;
};

// Pentadiagonal discretization of -h^2 D4 + diag(V) - i diag(Gamma), where D4
// is the 4th-order central second-difference stencil with odd-reflection
// closure at the Dirichlet walls.  Immutable after assembly.
class DiscreteOperator {
 public:
  using Complex = std::complex<double>;
  using VectorXcd = Eigen::VectorXcd;

  DiscreteOperator(Grid grid, double h, Eigen::VectorXcd diag,
                   Eigen::VectorXd off1, Eigen::VectorXd off2,
                   Eigen::ArrayXd gamma, bool cap_enabled)
      : grid_(grid), h_(h), diag_(std::move(diag)), off1_(std::move(off1)),
        off2_(std::move(off2)), gamma_(std::move(gamma)),
        cap_enabled_(cap_enabled) {}

  const Grid& grid() const { return grid_; }
  double h() const { return h_; }
  bool cap_enabled() const { return cap_enabled_; }
  int size() const { return grid_.n; }
  const Eigen::VectorXcd& diagonal() const { return diag_; }
  const Eigen::VectorXd& off1() const { return off1_; }
  const Eigen::VectorXd& off2() const { return off2_; }
  const Eigen::ArrayXd& cap_values() const { return gamma_; }

  VectorXcd apply(const VectorXcd& v) const;

  // factorization of (M - z I); throws NearSingularError naming z
  BandedLU<Complex> shifted_lu(Complex z) const;

  Eigen::MatrixXcd to_dense() const;

 private:
  Grid grid_;
  double h_;
  Eigen::VectorXcd diag_;
  Eigen::VectorXd off1_, off2_;
  Eigen::ArrayXd gamma_;
  bool cap_enabled_;
};

// Convenience solve of (M - z) w = rhs with a one-shot factorization.
Eigen::VectorXcd solve_shifted(const DiscreteOperator& op,
                               std::complex<double> z,
                               const Eigen::VectorXcd& rhs);
Eigen::VectorXcd solve_shifted_adjoint(const DiscreteOperator& op,
                                       std::complex<double> z,
                                       const Eigen::VectorXcd& rhs);

// Semiclassical operator (hD)^2 + V - i Gamma for V from the metric.
DiscreteOperator assemble_operator(const Metric& metric, double h,
                                   const Grid& grid,
                                   const std::optional<CapProfile>& cap);

// Same assembly with an arbitrary potential sample (model operators, tests).
DiscreteOperator assemble_operator(const std::function<double(double)>& V,
                                   double h, const Grid& grid,
                                   const std::optional<CapProfile>& cap);

// Single-mode operator -D2 + k^2 A^{-2} + V1 - i k^2 Gamma; equals
// k^2 * (semiclassical operator at h = 1/k) entrywise.  k >= 1.
DiscreteOperator assemble_mode_operator(const Metric& metric, int k,
                                        const Grid& grid,
                                        const std::optional<CapProfile>& cap);

// cap samples on a grid (exposed for tests)
Eigen::ArrayXd cap_samples(const CapProfile& cap, const Grid& grid);

}  // namespace semirev
