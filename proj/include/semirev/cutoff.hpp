#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace semirev {

// Half-bump transition profile: 1 for t <= 0, exp(1 - 1/(1 - t^2)) for
// 0 < t < 1, 0 for t >= 1.  Used by every cutoff in the project.
double bump_step(double t);
double bump_step_d1(double t);
double bump_step_d2(double t);

// Compactly supported radial cutoff: identically 1 on |x-center| <= inner,
// identically 0 on |x-center| >= outer, bump transition in between.
struct SpatialCutoff {
  double center = 0.0;
  double inner_radius = 0.25;
  double outer_radius = 0.5;

  SpatialCutoff() = default;
  SpatialCutoff(double c, double rin, double rout)
      : center(c), inner_radius(rin), outer_radius(rout) {
    if (!(rout > rin) || !(rin >= 0.0))
      throw std::invalid_argument("SpatialCutoff: need 0 <= inner < outer");
  }

  double operator()(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  Eigen::ArrayXd sample(const Eigen::ArrayXd& xs) const;
};

// Localization cutoff of the quasimode: chi(s) = 1 for |s| <= 1, supported in
// |s| <= 2, same bump transition.  Derivatives are with respect to s.
double loc_chi(double s);
double loc_chi_d1(double s);
double loc_chi_d2(double s);

}  // namespace semirev
