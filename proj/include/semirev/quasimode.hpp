#pragma once

#include <Eigen/Core>
#include <complex>

#include "semirev/operator.hpp"

namespace semirev {

// gamma = (4 m2 + 2) / (2 m2 + 3), the quasimode scale exponent
double gamma_exponent(int m2);

// Data of the inflection-point quasimode: complex energy E = (alpha + i beta)
// h^gamma, localization length mu = delta h^{gamma/(2 m2 + 1)}.
struct QuasimodeParams {
  int m2 = 1;
  double c2 = 1.0 / 6.0;
  double alpha_E = 1.0;
  double beta_E = 1.0;
  double delta = 0.1;
  double h = 0.01;

  void validate() const;
  double gamma() const { return gamma_exponent(m2); }
  std::complex<double> E() const {
    return std::complex<double>(alpha_E, beta_E) * std::pow(h, gamma());
  }
  double mu() const { return delta * std::pow(h, gamma() / (2 * m2 + 1)); }
};

// Phase varpi(x) = int_1^x (E + c2 (y-1)^{2m2+1})^{1/2} dy with the square
// root branch of positive imaginary part; composite Gauss-Legendre panels no
// longer than mu.
std::complex<double> phase(const QuasimodeParams& p, double x);

struct PhaseDerivs {
  std::complex<double> w1, w2, w3;  // varpi', varpi'', varpi'''
};
PhaseDerivs phase_derivatives(const QuasimodeParams& p, double x);

// f = -h^2 ( (3/4)(varpi')^{-2}(varpi'')^2 - (1/2)(varpi')^{-1} varpi''' )
std::complex<double> correction_f(const QuasimodeParams& p, double x);

// unlocalized WKB amplitude u = (varpi')^{-1/2} exp(i varpi / h)
std::complex<double> amplitude_u(const QuasimodeParams& p, double x);

struct QuasimodeBundle {
  QuasimodeParams params;
  Grid grid;
  std::complex<double> E;
  double mu;
  Eigen::VectorXcd phase_vals;  // varpi at the grid points
  Eigen::VectorXcd u;           // unlocalized amplitude
  Eigen::VectorXcd utilde;      // chi((x-1)/mu) u
  double norm_utilde;           // L2(dx) norm
};

// Samples u and utilde on the grid; requires dx <= mu / 50.
QuasimodeBundle build(const QuasimodeParams& p, const Grid& grid);

// utilde alone on an arbitrary (possibly large) grid: the amplitude is only
// evaluated on the support band, zero elsewhere, so far-field phase growth
// never overflows.  Same resolution requirement as build().
Eigen::VectorXcd sample_utilde(const QuasimodeParams& p, const Grid& grid);

struct ResidualNorms {
  double analytic;  // || f utilde + [(hD)^2, chi] u ||
  double discrete;  // || (P_model - E) utilde || with the banded stencil
};
ResidualNorms residual(const QuasimodeBundle& bundle);

// model operator (hD)^2 - c2 (x-1)^{2m2+1} on the bundle grid
DiscreteOperator model_operator(const QuasimodeParams& p, const Grid& grid,
                                const std::optional<CapProfile>& cap);

}  // namespace semirev
