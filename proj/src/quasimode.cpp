#include "semirev/quasimode.hpp"

#include <cmath>

#include "semirev/cutoff.hpp"
#include "semirev/quadrature.hpp"

namespace semirev {

namespace {

using Complex = std::complex<double>;

double ipow(double x, int n) {
  double r = 1.0;
  for (; n > 0; n >>= 1, x *= x)
    if (n & 1) r *= x;
  return r;
}

// (E + c2 (x-1)^{2m2+1})^{1/2}, branch with Im >= 0.  For beta_E > 0 the
// radicand stays strictly in the upper half plane, so the principal root
// already has positive imaginary part and is continuous in x.
Complex branch_sqrt(const QuasimodeParams& p, double x) {
  const Complex rad = p.E() + p.c2 * ipow(x - 1.0, 2 * p.m2 + 1);
  Complex r = std::sqrt(rad);
  if (r.imag() < 0.0) r = -r;
  return r;
}

// composite Gauss-Legendre integral of the branch root over [a, b]
Complex phase_integral(const QuasimodeParams& p, double a, double b) {
  if (a == b) return {0.0, 0.0};
  const GaussLegendreRule& gl = gauss_legendre(64);
  const double len = std::abs(b - a);
  const int panels = std::max(1, static_cast<int>(std::ceil(len / p.mu())));
  Complex sum = 0.0;
  for (int q = 0; q < panels; ++q) {
    const double pa = a + (b - a) * q / panels;
    const double pb = a + (b - a) * (q + 1) / panels;
    const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
    Complex acc = 0.0;
    for (int i = 0; i < 64; ++i)
      acc += gl.weights[i] * branch_sqrt(p, mid + half * gl.nodes[i]);
    sum += half * acc;
  }
  return sum;
}

Complex u_from_phase(const QuasimodeParams& p, double x, Complex ph) {
  // varpi' lies in the open first quadrant, so the principal square root of
  // it is the right inverse-amplitude branch
  const Complex w1 = branch_sqrt(p, x);
  return std::exp(Complex(0.0, 1.0) * ph / p.h) / std::sqrt(w1);
}

}  // namespace

double gamma_exponent(int m2) {
  if (m2 < 1) throw std::invalid_argument("gamma_exponent: m2 must be >= 1");
  return (4.0 * m2 + 2.0) / (2.0 * m2 + 3.0);
}

void QuasimodeParams::validate() const {
  if (m2 < 1) throw std::invalid_argument("QuasimodeParams: m2 must be >= 1");
  if (!(c2 > 0.0)) throw std::invalid_argument("QuasimodeParams: c2 must be > 0");
  if (!(alpha_E > 0.0) || !(beta_E > 0.0))
    throw std::invalid_argument("QuasimodeParams: alpha_E, beta_E must be > 0");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("QuasimodeParams: delta must lie in (0, 1)");
  if (!(h > 0.0)) throw std::invalid_argument("QuasimodeParams: h must be > 0");
}

Complex phase(const QuasimodeParams& p, double x) {
  p.validate();
  return phase_integral(p, 1.0, x);
}

PhaseDerivs phase_derivatives(const QuasimodeParams& p, double x) {
  p.validate();
  const double s = x - 1.0;
  const int q = 2 * p.m2;
  PhaseDerivs d;
  d.w1 = branch_sqrt(p, x);
  if (d.w1 == Complex(0.0, 0.0))
    throw std::domain_error("phase_derivatives: varpi' vanished");
  d.w2 = 0.5 * p.c2 * (q + 1) * ipow(s, q) / d.w1;
  const Complex num =
      0.5 * p.c2 * (q + 1) * q * (p.E() * ipow(s, q - 1) + p.c2 * ipow(s, 2 * q)) -
      0.25 * p.c2 * p.c2 * (q + 1) * (q + 1) * ipow(s, 2 * q);
  d.w3 = num / (d.w1 * d.w1 * d.w1);
  return d;
}

Complex correction_f(const QuasimodeParams& p, double x) {
  const PhaseDerivs d = phase_derivatives(p, x);
  return -p.h * p.h *
         (0.75 * (d.w2 * d.w2) / (d.w1 * d.w1) - 0.5 * d.w3 / d.w1);
}

Complex amplitude_u(const QuasimodeParams& p, double x) {
  return u_from_phase(p, x, phase(p, x));
}

QuasimodeBundle build(const QuasimodeParams& p, const Grid& grid) {
  p.validate();
  const double mu = p.mu();
  if (grid.dx > mu / 50.0)
    throw std::invalid_argument(
        "quasimode build: grid does not resolve mu (need dx <= mu/50)");

  QuasimodeBundle b;
  b.params = p;
  b.grid = grid;
  b.E = p.E();
  b.mu = mu;
  const int n = grid.n;
  b.phase_vals.resize(n);
  b.u.resize(n);
  b.utilde.resize(n);

  // anchor the phase at the grid point nearest 1, then accumulate per-cell
  // Gauss-Legendre increments
  int j0 = 0;
  for (int j = 1; j < n; ++j)
    if (std::abs(grid.x(j) - 1.0) < std::abs(grid.x(j0) - 1.0)) j0 = j;
  b.phase_vals[j0] = phase_integral(p, 1.0, grid.x(j0));
  for (int j = j0 + 1; j < n; ++j)
    b.phase_vals[j] =
        b.phase_vals[j - 1] + phase_integral(p, grid.x(j - 1), grid.x(j));
  for (int j = j0 - 1; j >= 0; --j)
    b.phase_vals[j] =
        b.phase_vals[j + 1] - phase_integral(p, grid.x(j), grid.x(j + 1));

  double nrm2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = grid.x(j);
    b.u[j] = u_from_phase(p, x, b.phase_vals[j]);
    b.utilde[j] = loc_chi((x - 1.0) / mu) * b.u[j];
    nrm2 += std::norm(b.utilde[j]);
  }
  b.norm_utilde = std::sqrt(grid.dx * nrm2);
  return b;
}

Eigen::VectorXcd sample_utilde(const QuasimodeParams& p, const Grid& grid) {
  p.validate();
  const double mu = p.mu();
  if (grid.dx > mu / 50.0)
    throw std::invalid_argument(
        "sample_utilde: grid does not resolve mu (need dx <= mu/50)");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.n);
  Complex ph = 0.0;
  double xprev = 1.0;
  // walk outward from x = 1 in both directions, only within the support
  int jc = 0;
  for (int j = 1; j < grid.n; ++j)
    if (std::abs(grid.x(j) - 1.0) < std::abs(grid.x(jc) - 1.0)) jc = j;
  for (int j = jc; j < grid.n && std::abs(grid.x(j) - 1.0) <= 2.0 * mu; ++j) {
    ph += phase_integral(p, xprev, grid.x(j));
    xprev = grid.x(j);
    out[j] = loc_chi((grid.x(j) - 1.0) / mu) * u_from_phase(p, grid.x(j), ph);
  }
  ph = 0.0;
  xprev = 1.0;
  for (int j = jc - 1; j >= 0 && std::abs(grid.x(j) - 1.0) <= 2.0 * mu; --j) {
    ph += phase_integral(p, xprev, grid.x(j));
    xprev = grid.x(j);
    out[j] = loc_chi((grid.x(j) - 1.0) / mu) * u_from_phase(p, grid.x(j), ph);
  }
  return out;
}

DiscreteOperator model_operator(const QuasimodeParams& p, const Grid& grid,
                                const std::optional<CapProfile>& cap) {
  const double c2 = p.c2;
  const int m2 = p.m2;
  return assemble_operator(
      [c2, m2](double x) { return -c2 * ipow(x - 1.0, 2 * m2 + 1); }, p.h,
      grid, cap);
}

ResidualNorms residual(const QuasimodeBundle& b) {
  const QuasimodeParams& p = b.params;
  const Grid& grid = b.grid;
  const int n = grid.n;
  const double mu = b.mu;
  const double h = p.h;

  double acc_analytic = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = grid.x(j);
    const double s = (x - 1.0) / mu;
    if (std::abs(s) > 2.0) continue;
    const PhaseDerivs d = phase_derivatives(p, x);
    const Complex f = -h * h * (0.75 * (d.w2 * d.w2) / (d.w1 * d.w1) -
                                0.5 * d.w3 / d.w1);
    const Complex uprime =
        (-0.5 * d.w2 / d.w1 + Complex(0.0, 1.0) * d.w1 / h) * b.u[j];
    const Complex comm = -h * h *
                         (loc_chi_d2(s) / (mu * mu) * b.u[j] +
                          2.0 * loc_chi_d1(s) / mu * uprime);
    acc_analytic += std::norm(f * b.utilde[j] + comm);
  }

  const DiscreteOperator model = model_operator(p, grid, std::nullopt);
  const Eigen::VectorXcd r = model.apply(b.utilde) - b.E * b.utilde;

  ResidualNorms out;
  out.analytic = std::sqrt(grid.dx * acc_analytic);
  out.discrete = std::sqrt(grid.dx * r.squaredNorm());
  return out;
}

}  // namespace semirev
