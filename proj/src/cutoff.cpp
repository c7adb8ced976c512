#include "semirev/cutoff.hpp"

#include <cmath>

namespace semirev {

double bump_step(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double bump_step_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  return bump_step(t) * (-2.0 * t / (u * u));
}

double bump_step_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  const double g1 = -2.0 * t / (u * u);                    // d/dt log bump
  const double g2 = (-2.0 * u - 8.0 * t * t) / (u * u * u);  // d2/dt2 log bump
  return bump_step(t) * (g1 * g1 + g2);
}

double SpatialCutoff::operator()(double x) const {
  const double t = (std::abs(x - center) - inner_radius) /
                   (outer_radius - inner_radius);
  return bump_step(t);
}

double SpatialCutoff::deriv(double x) const {
  const double w = outer_radius - inner_radius;
  const double d = x - center;
  const double t = (std::abs(d) - inner_radius) / w;
  const double sgn = (d >= 0.0) ? 1.0 : -1.0;
  return bump_step_d1(t) * sgn / w;
}

double SpatialCutoff::deriv2(double x) const {
  const double w = outer_radius - inner_radius;
  const double t = (std::abs(x - center) - inner_radius) / w;
  return bump_step_d2(t) / (w * w);
}

Eigen::ArrayXd SpatialCutoff::sample(const Eigen::ArrayXd& xs) const {
  Eigen::ArrayXd out(xs.size());
  for (Eigen::Index j = 0; j < xs.size(); ++j) out[j] = (*this)(xs[j]);
  return out;
}

double loc_chi(double s) { return bump_step(std::abs(s) - 1.0); }

double loc_chi_d1(double s) {
  const double sgn = (s >= 0.0) ? 1.0 : -1.0;
  return bump_step_d1(std::abs(s) - 1.0) * sgn;
}

double loc_chi_d2(double s) { return bump_step_d2(std::abs(s) - 1.0); }

}  // namespace semirev
