#include "semirev/scaling.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace semirev {

namespace {

void validate(const std::vector<std::pair<double, double>>& points,
              bool need_h_below_one) {
  if (points.size() < 3)
    throw std::invalid_argument("power-law fit needs at least 3 points");
  for (const auto& [h, v] : points) {
    if (!(h > 0)) {
      std::ostringstream os;
      os << "power-law fit: nonpositive h " << h;
      throw std::invalid_argument(os.str());
    }
    if (!(v > 0)) {
      std::ostringstream os;
      os << "power-law fit: nonpositive value " << v << " at h = " << h;
      throw std::invalid_argument(os.str());
    }
    if (need_h_below_one && !(h < 1))
      throw std::invalid_argument("log-correction comparison needs h < 1");
  }
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i].first == points[j].first)
        throw std::invalid_argument("power-law fit: duplicate h values");
}

}  // namespace

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  validate(points, false);
  const int n = static_cast<int>(points.size());
  double tbar = 0, ybar = 0;
  std::vector<double> t(n), y(n);
  for (int i = 0; i < n; ++i) {
    t[i] = std::log(1.0 / points[i].first);
    y[i] = std::log(points[i].second);
    tbar += t[i];
    ybar += y[i];
  }
  tbar /= n;
  ybar /= n;
  double stt = 0, sty = 0;
  for (int i = 0; i < n; ++i) {
    stt += (t[i] - tbar) * (t[i] - tbar);
    sty += (t[i] - tbar) * (y[i] - ybar);
  }
  ScalingFit fit;
  fit.n_points = n;
  fit.slope = sty / stt;
  fit.intercept = ybar - fit.slope * tbar;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * t[i];
    fit.rss += r * r;
  }
  fit.stderr_slope = (n > 2) ? std::sqrt(fit.rss / (n - 2) / stt) : 0.0;
  return fit;
}

ModelComparison compare_log_correction(
    const std::vector<std::pair<double, double>>& points) {
  validate(points, true);
  ModelComparison cmp;
  cmp.rss_pure_power = fit_power_law(points).rss;

  // value = C h^{-1} log(1/h):  log value - t - log t = log C, one parameter
  const int n = static_cast<int>(points.size());
  double mean = 0;
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    const double t = std::log(1.0 / points[i].first);
    r[i] = std::log(points[i].second) - t - std::log(t);
    mean += r[i];
  }
  mean /= n;
  for (int i = 0; i < n; ++i)
    cmp.rss_log_corrected += (r[i] - mean) * (r[i] - mean);

  cmp.prefer_log = cmp.rss_log_corrected < cmp.rss_pure_power;
  return cmp;
}

}  // namespace semirev
