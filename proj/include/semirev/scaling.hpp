#pragma once

#include <utility>
#include <vector>

namespace semirev {

// Least-squares fit of log(value) against log(1/h); slope is the growth
// exponent s in value ~ C h^{-s}.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double rss = 0.0;
  int n_points = 0;
};

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Pure power law (two free parameters) against C h^{-1} log(1/h) (one free
// parameter), residuals compared on the log scale.  Ties go to the pure law.
struct ModelComparison {
  double rss_pure_power = 0.0;
  double rss_log_corrected = 0.0;
  bool prefer_log = false;
};

ModelComparison compare_log_correction(
    const std::vector<std::pair<double, double>>& points);

}  // namespace semirev
