#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "semirev/cutoff.hpp"
#include "semirev/operator.hpp"

namespace semirev {

// Energy window around a trapped (or free) value.  When scale_exponent > 0
// the halfwidth shrinks with h as min(halfwidth, scale_coeff * h^exponent) so
// the samples track the natural energy scale of the critical point.
struct EnergyWindow {
  double center = 1.0;
  double halfwidth = 0.05;
  int samples = 11;
  double scale_exponent = 0.0;
  double scale_coeff = 2.0;

  double halfwidth_at(double h) const;
  std::vector<double> z_samples(double h) const;
  void validate() const;
};

struct NormEstimate {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Operator norm of chi (M - z)^{-1} chi estimated by power iteration on G*G,
// two banded solves per step, deterministic Gaussian start vector centered at
// chi.center.  Converged when successive estimates differ by relative <= tol;
// subspace_tol > 0 additionally demands a small Ritz residual (oracle-grade
// accuracy near degenerate pairs).  L2 norms carry the grid weight dx.
// Requires a dissipative operator: cap enabled or Im z > 0.
NormEstimate cutoff_resolvent_norm(const DiscreteOperator& op,
                                   std::complex<double> z,
                                   const SpatialCutoff& chi, double tol = 1e-6,
                                   int maxit = 1500, double subspace_tol = 0.0);

struct ScanPoint {
  double h;
  double z;
  double norm;
  int iterations;
  bool converged;
};

struct ResolventScan {
  SurfaceProfile profile;
  EnergyWindow window;
  std::vector<ScanPoint> points;                  // sorted by h desc, then z
  std::vector<std::pair<double, double>> sup_per_h;  // (h, max norm over z)
  int flagged = 0;
  bool reliable = true;  // false when > 20% of the points failed to converge
};

struct ScanSettings {
  int ppw = 10;
  double xmin = -12.0;
  double xmax = 13.0;
  double tol = 1e-6;
  int maxit = 1500;
  int threads = 1;
  // test hook: replaces the metric potential when set
  std::function<double(double)> potential_override;
};

ResolventScan scan(const Metric& metric, const std::vector<double>& h_list,
                   const EnergyWindow& window, const SpatialCutoff& chi,
                   const std::optional<CapProfile>& cap,
                   const ScanSettings& settings = {});

enum class Well { hyperbolic, inflection, nontrapping };

struct ExponentTarget {
  double exponent;
  bool log_correction;
};

// Growth exponent of the sup resolvent norm in 1/h predicted for each well.
ExponentTarget expected_exponent(const SurfaceProfile& p, Well well);

// Dictionary lambda = 1/h: predicted || chi R(lambda - i0) chi || is
// h^2 times the semiclassical norm.
double spectral_dictionary(double h, double semiclassical_norm);

// default measurement geometry per well
SpatialCutoff default_cutoff(Well well);
EnergyWindow default_window(const SurfaceProfile& p, const Metric& metric,
                            Well well);

}  // namespace semirev
