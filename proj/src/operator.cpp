#include "semirev/operator.hpp"

#include <cmath>
#include <sstream>

namespace semirev {

Grid build_grid_dx(double dx_max, double xmin, double xmax) {
  if (!(xmax > xmin)) throw std::invalid_argument("build_grid: xmax must exceed xmin");
  if (!(dx_max > 0)) throw std::invalid_argument("build_grid: dx bound must be positive");
  const double L = xmax - xmin;
  const double ratio = L / dx_max;
  if (ratio > 5e6) {
    std::ostringstream os;
    os << "build_grid: ~" << std::llround(ratio)
       << " interior points exceeds the 5e6 cap; increase h or shrink the domain";
    throw std::invalid_argument(os.str());
  }
  int n = static_cast<int>(std::ceil(ratio)) - 1;
  if (L / (n + 1.0) > dx_max) ++n;  // guard against ceil roundoff
  n = std::max(n, 16);
  Grid g;
  g.xmin = xmin;
  g.xmax = xmax;
  g.n = n;
  g.dx = L / (n + 1);
  return g;
}

Grid build_grid(double h, int ppw, double xmin, double xmax) {
  if (!(h > 0)) throw std::invalid_argument("build_grid: h must be positive");
  if (ppw < 8) throw std::invalid_argument("build_grid: ppw must be >= 8");
  return build_grid_dx(2.0 * M_PI * h / ppw, xmin, xmax);
}

Eigen::ArrayXd cap_samples(const CapProfile& cap, const Grid& grid) {
  if (!(cap.layer_width > 0) || !(cap.strength > 0) || cap.power < 2)
    throw std::invalid_argument("CapProfile: need width > 0, strength > 0, power >= 2");
  const double upper = std::min(-grid.xmin, grid.xmax - 1.0) / 2.0;
  if (!(cap.layer_width < upper))
    throw std::invalid_argument("CapProfile: layer touches the trapping region");
  Eigen::ArrayXd g(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double d = std::max({0.0, (grid.xmin + cap.layer_width) - x,
                               x - (grid.xmax - cap.layer_width)});
    g[j] = cap.strength * std::pow(d / cap.layer_width, cap.power);
  }
  return g;
}

namespace {

DiscreteOperator assemble_from_samples(const Grid& grid, double h,
                                       const Eigen::ArrayXd& V,
                                       const std::optional<CapProfile>& cap,
                                       double overall_scale) {
  const int n = grid.n;
  const double c = overall_scale * h * h / (12.0 * grid.dx * grid.dx);
  Eigen::ArrayXd gamma = Eigen::ArrayXd::Zero(n);
  if (cap) gamma = overall_scale * cap_samples(*cap, grid);

  Eigen::VectorXcd diag(n);
  for (int j = 0; j < n; ++j)
    diag[j] = std::complex<double>(30.0 * c + overall_scale * V[j], -gamma[j]);
  // odd reflection across the walls keeps the stencil 4th order and symmetric
  diag[0] -= c;
  diag[n - 1] -= c;
  Eigen::VectorXd off1 = Eigen::VectorXd::Constant(n - 1, -16.0 * c);
  Eigen::VectorXd off2 = Eigen::VectorXd::Constant(n - 2, c);
  return DiscreteOperator(grid, h, std::move(diag), std::move(off1),
                          std::move(off2), std::move(gamma),
                          cap.has_value());
}

}  // namespace

DiscreteOperator assemble_operator(const Metric& metric, double h,
                                   const Grid& grid,
                                   const std::optional<CapProfile>& cap) {
  const Eigen::ArrayXd V = metric.effective_potential_on(grid.points(), h);
  return assemble_from_samples(grid, h, V, cap, 1.0);
}

DiscreteOperator assemble_operator(const std::function<double(double)>& V,
                                   double h, const Grid& grid,
                                   const std::optional<CapProfile>& cap) {
  Eigen::ArrayXd Vs(grid.n);
  for (int j = 0; j < grid.n; ++j) Vs[j] = V(grid.x(j));
  return assemble_from_samples(grid, h, Vs, cap, 1.0);
}

DiscreteOperator assemble_mode_operator(const Metric& metric, int k,
                                        const Grid& grid,
                                        const std::optional<CapProfile>& cap) {
  if (k < 1)
    throw std::invalid_argument(
        "assemble_mode_operator: k must be >= 1 (the zero mode is handled by "
        "the radial estimate alone)");
  const double h = 1.0 / k;
  // k^2 (A^{-2} + h^2 V1) = k^2 A^{-2} + V1 sampled in one pass
  const Eigen::ArrayXd V = metric.effective_potential_on(grid.points(), h);
  return assemble_from_samples(grid, h, V, cap, static_cast<double>(k) * k);
}

Eigen::VectorXcd DiscreteOperator::apply(const VectorXcd& v) const {
  const int n = grid_.n;
  VectorXcd out(n);
  for (int j = 0; j < n; ++j) {
    std::complex<double> s = diag_[j] * v[j];
    if (j >= 1) s += off1_[j - 1] * v[j - 1];
    if (j + 1 < n) s += off1_[j] * v[j + 1];
    if (j >= 2) s += off2_[j - 2] * v[j - 2];
    if (j + 2 < n) s += off2_[j] * v[j + 2];
    out[j] = s;
  }
  return out;
}

BandedLU<std::complex<double>> DiscreteOperator::shifted_lu(Complex z) const {
  Eigen::VectorXcd o1 = off1_.cast<Complex>();
  Eigen::VectorXcd o2 = off2_.cast<Complex>();
  std::ostringstream label;
  label << "z = " << z.real() << (z.imag() < 0 ? " - " : " + ")
        << std::abs(z.imag()) << "i";
  return BandedLU<Complex>(pentadiagonal_band<Complex>(diag_, o1, o2, z), 2, 2,
                           label.str());
}

Eigen::MatrixXcd DiscreteOperator::to_dense() const {
  const int n = grid_.n;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    M(j, j) = diag_[j];
    if (j + 1 < n) M(j, j + 1) = M(j + 1, j) = off1_[j];
    if (j + 2 < n) M(j, j + 2) = M(j + 2, j) = off2_[j];
  }
  return M;
}

Eigen::VectorXcd solve_shifted(const DiscreteOperator& op,
                               std::complex<double> z,
                               const Eigen::VectorXcd& rhs) {
  return op.shifted_lu(z).solve(rhs);
}

Eigen::VectorXcd solve_shifted_adjoint(const DiscreteOperator& op,
                                       std::complex<double> z,
                                       const Eigen::VectorXcd& rhs) {
  return op.shifted_lu(z).solve_adjoint(rhs);
}

}  // namespace semirev
