#include <doctest.h>

#include <cmath>

#include "semirev/scaling.hpp"

using namespace semirev;

namespace {

std::vector<std::pair<double, double>> synth(double C, double s,
                                             bool log_corrected = false) {
  std::vector<std::pair<double, double>> pts;
  for (int e = 3; e <= 10; ++e) {
    const double h = std::pow(2.0, -e);
    double v = C * std::pow(h, -s);
    if (log_corrected) v = C * std::log(1.0 / h) / h;
    pts.emplace_back(h, v);
  }
  return pts;
}

}  // namespace

TEST_CASE("exact power data") {
  auto fit = fit_power_law(synth(1.0, 2.0));
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.rss <= 1e-20);
  CHECK(fit.stderr_slope <= 1e-10);

  fit = fit_power_law(synth(3.0, 1.2));
  CHECK(fit.slope == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.n_points == 8);
}

TEST_CASE("removing one point leaves an exact fit unchanged") {
  auto pts = synth(2.0, 1.7);
  const double full = fit_power_law(pts).slope;
  for (size_t i = 0; i < pts.size(); ++i) {
    auto reduced = pts;
    reduced.erase(reduced.begin() + i);
    CHECK(fit_power_law(reduced).slope == doctest::Approx(full).epsilon(1e-12));
  }
}

TEST_CASE("affine invariance and reparametrization") {
  auto pts = synth(1.0, 1.5);
  auto scaled = pts;
  for (auto& [h, v] : scaled) v *= 37.0;
  const auto f1 = fit_power_law(pts);
  const auto f2 = fit_power_law(scaled);
  CHECK(f2.slope == doctest::Approx(f1.slope).epsilon(1e-12));
  CHECK(f2.intercept == doctest::Approx(f1.intercept + std::log(37.0)).epsilon(1e-12));

  auto shifted = pts;
  for (auto& [h, v] : shifted) h /= 2.0;
  CHECK(fit_power_law(shifted).slope == doctest::Approx(f1.slope).epsilon(1e-12));
}

TEST_CASE("input validation") {
  CHECK_THROWS(fit_power_law({{0.5, 1.0}, {0.25, 2.0}}));  // too few
  CHECK_THROWS(fit_power_law({{0.5, 1.0}, {0.25, -2.0}, {0.125, 4.0}}));
  CHECK_THROWS(fit_power_law({{0.5, 1.0}, {0.5, 2.0}, {0.125, 4.0}}));
  CHECK_THROWS(compare_log_correction({{2.0, 1.0}, {0.25, 2.0}, {0.125, 4.0}}));
}

TEST_CASE("model comparison prefers the generating family") {
  auto logc = compare_log_correction(synth(1.0, 0.0, true));
  CHECK(logc.prefer_log);
  CHECK(logc.rss_log_corrected <= 1e-20);

  auto pure = compare_log_correction(synth(1.0, 1.33));
  CHECK_FALSE(pure.prefer_log);

  // constant data: slope ~ 0, pure power (ties included) wins
  std::vector<std::pair<double, double>> flat;
  for (int e = 3; e <= 9; ++e) flat.emplace_back(std::pow(2.0, -e), 1.0);
  auto cst = compare_log_correction(flat);
  CHECK_FALSE(cst.prefer_log);
  CHECK(fit_power_law(flat).slope == doctest::Approx(0.0).epsilon(1e-12));
}
