#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "semirev/banded.hpp"
#include "semirev/cutoff.hpp"
#include "semirev/operator.hpp"
#include "semirev/quasimode.hpp"

namespace semirev {

// beta(m1, m2) = max(m1/(m1+1), (2m2+1)/(2m2+3)), the smoothing loss
double beta_exponent(int m1, int m2);

// Cayley step v -> (I + i dt/2 M)^{-1} (I - i dt/2 M) v; an isometry of the
// discrete L2 norm when the operator has no cap, a contraction with one.
class CrankNicolson {
 public:
  CrankNicolson(const DiscreteOperator& op, double dt);
  void step(Eigen::VectorXcd& v) const;
  double dt() const { return dt_; }

 private:
  const DiscreteOperator* op_;
  double dt_;
  BandedLU<std::complex<double>> lu_;
  mutable Eigen::VectorXcd scratch_;
};

struct ModeEvolutionConfig {
  SurfaceProfile profile;
  int k = 50;                 // angular mode, h = 1/k
  double T = 1.0;             // final time
  double dt = 0.0;            // 0 = default rule min(0.5/k^2, T/2000)
  Grid grid;
  std::optional<CapProfile> cap;
  double window_divisor = 10.0;  // the A in the saturation window
  int trace_stride = 0;          // 0 = choose so ~1000 rows are kept
  // stop integrating once the surviving mass cannot move any accumulator by
  // more than ~1e-12 relative; exact: mass < 5e-13 * initial
  bool early_exit = true;

  double dt_effective() const;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> mass;              // ||v||^2
  std::vector<double> smoothing_x;       // int ||<x>^-1 dv/dx||^2 dt
  std::vector<double> smoothing_theta;   // int k^2 ||<x>^-3/2 v||^2 dt
  std::vector<double> smoothing_cutoff;  // int ||chi k v||^2 dt
  std::vector<double> weighted_away;     // int || |x|^m1 |x-1|^m2 <x>^-m1-m2-3/2 k v ||^2 dt
  int steps_taken = 0;
  bool exited_early = false;

  double final(const std::vector<double>& acc) const { return acc.back(); }
};

// Steps the k-th mode to T accumulating the four space-time functionals by
// the trapezoid rule; v0 must be normalized on the grid.
EvolutionTrace evolve_and_measure(const ModeEvolutionConfig& cfg,
                                  const Metric& metric,
                                  const Eigen::VectorXcd& v0,
                                  const SpatialCutoff& chi);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// Lower-bound (saturation) experiment: quasimode initial data at h = 1/k,
// time window T = k^{-4/(2m2+3)} / window_divisor,
// lhs = int_0^T ||<k> chi v||^2 dt, rhs = <k>^{2(2m2+1)/(2m2+3)} ||v0||^2.
BoundCheck saturation_experiment(const Metric& metric, int k,
                                 const QuasimodeParams& qp,
                                 double window_divisor,
                                 const SpatialCutoff& chi,
                                 const ModeEvolutionConfig& base);

// Upper-bound check at T = 1: lhs = smoothing_x + smoothing_theta,
// rhs = <k>^{2 beta} ||v0||^2 + ||<D_x>^{1/2} v0||^2.
BoundCheck smoothing_bound_check(const Metric& metric, int k,
                                 const Eigen::VectorXcd& v0,
                                 const SpatialCutoff& chi,
                                 const ModeEvolutionConfig& base);

// || <D_x>^{1/2} v ||^2 through the discrete Fourier multiplier
// (1 + xi^2)^{1/4} on a periodic zero-extension 4x the support length.
double half_derivative_norm_sq(const Eigen::VectorXcd& v, double dx);

}  // namespace semirev
