#include "semirev/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace semirev {

double EnergyWindow::halfwidth_at(double h) const {
  if (scale_exponent > 0.0)
    return std::min(halfwidth, scale_coeff * std::pow(h, scale_exponent));
  return halfwidth;
}

std::vector<double> EnergyWindow::z_samples(double h) const {
  validate();
  const double w = halfwidth_at(h);
  std::vector<double> zs(samples);
  if (samples == 1) {
    zs[0] = center;
    return zs;
  }
  for (int i = 0; i < samples; ++i)
    zs[i] = center - w + 2.0 * w * i / (samples - 1);
  zs[(samples - 1) / 2] = center;  // keep the center exact
  return zs;
}

void EnergyWindow::validate() const {
  if (samples < 1 || samples % 2 == 0)
    throw std::invalid_argument("EnergyWindow: samples must be odd and >= 1");
  if (!(center - halfwidth > 0.0))
    throw std::invalid_argument("EnergyWindow: window must avoid 0");
}

NormEstimate cutoff_resolvent_norm(const DiscreteOperator& op,
                                   std::complex<double> z,
                                   const SpatialCutoff& chi, double tol,
                                   int maxit, double subspace_tol) {
  if (!op.cap_enabled() && !(z.imag() > 0.0))
    throw std::invalid_argument(
        "cutoff_resolvent_norm: need a cap or Im z > 0 for a dissipative solve");
  if (!(tol > 0.0) || tol > 1e-2)
    throw std::invalid_argument("cutoff_resolvent_norm: tol must be in (0, 1e-2]");

  const int n = op.size();
  const double dx = op.grid().dx;
  const Eigen::ArrayXd chis = chi.sample(op.grid().points());
  if ((chis == 0.0).all()) return {0.0, 0, true};

  const BandedLU<std::complex<double>> lu = op.shifted_lu(z);

  Eigen::VectorXcd v(n);
  for (int j = 0; j < n; ++j) {
    const double x = op.grid().x(j);
    v[j] = std::exp(-0.5 * (x - chi.center) * (x - chi.center));
  }
  auto l2 = [dx](const Eigen::VectorXcd& w) {
    return std::sqrt(dx * w.squaredNorm());
  };
  v /= l2(v);

  double sigma_prev = -1.0;
  Eigen::VectorXcd w(n);
  for (int it = 1; it <= maxit; ++it) {
    w = chis.matrix().asDiagonal() * v;
    lu.solve_in_place(w);
    w = chis.matrix().asDiagonal() * w;  // w = G v
    const double sigma = l2(w);
    if (sigma == 0.0) return {0.0, it, true};

    w = chis.matrix().asDiagonal() * w;
    lu.solve_adjoint_in_place(w);
    w = chis.matrix().asDiagonal() * w;  // w = G^* G v
    const double nu = l2(w);
    if (nu == 0.0) return {0.0, it, true};

    bool ok = sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= tol * sigma;
    if (ok && subspace_tol > 0.0) {
      // near-degenerate top pairs stall the successive-difference test long
      // before the value is accurate; the Ritz residual of G*G certifies it
      const double resid = l2(w - (sigma * sigma) * v);
      ok = resid <= subspace_tol * sigma * sigma;
    }
    v = w / nu;
    if (ok) return {sigma, it, true};
    sigma_prev = sigma;
  }
  return {sigma_prev, maxit, false};
}

namespace {

DiscreteOperator build_scan_operator(const Metric& metric, double h,
                                     const std::optional<CapProfile>& cap,
                                     const ScanSettings& s) {
  const Grid grid = build_grid(h, s.ppw, s.xmin, s.xmax);
  if (s.potential_override)
    return assemble_operator(s.potential_override, h, grid, cap);
  return assemble_operator(metric, h, grid, cap);
}

}  // namespace

ResolventScan scan(const Metric& metric, const std::vector<double>& h_list,
                   const EnergyWindow& window, const SpatialCutoff& chi,
                   const std::optional<CapProfile>& cap,
                   const ScanSettings& settings) {
  if (h_list.empty()) throw std::invalid_argument("scan: empty h list");
  for (size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1]))
      throw std::invalid_argument("scan: h list must be strictly decreasing");
  window.validate();

  ResolventScan out;
  out.profile = metric.profile();
  out.window = window;

  for (double h : h_list) {
    const DiscreteOperator op = build_scan_operator(metric, h, cap, settings);
    const std::vector<double> zs = window.z_samples(h);
    std::vector<NormEstimate> results(zs.size());

    const int nthreads =
        std::max(1, std::min<int>(settings.threads, static_cast<int>(zs.size())));
    if (nthreads == 1) {
      for (size_t i = 0; i < zs.size(); ++i)
        results[i] =
            cutoff_resolvent_norm(op, zs[i], chi, settings.tol, settings.maxit);
    } else {
      std::vector<std::future<void>> jobs;
      std::atomic<size_t> next{0};
      for (int t = 0; t < nthreads; ++t)
        jobs.push_back(std::async(std::launch::async, [&] {
          for (size_t i = next.fetch_add(1); i < zs.size();
               i = next.fetch_add(1))
            results[i] = cutoff_resolvent_norm(op, zs[i], chi, settings.tol,
                                               settings.maxit);
        }));
      for (auto& j : jobs) j.get();
    }

    double sup = 0.0;
    bool any = false;
    for (size_t i = 0; i < zs.size(); ++i) {
      out.points.push_back(
          {h, zs[i], results[i].norm, results[i].iterations, results[i].converged});
      if (!results[i].converged)
        ++out.flagged;
      else {
        sup = std::max(sup, results[i].norm);
        any = true;
      }
    }
    out.sup_per_h.emplace_back(h, any ? sup : 0.0);
  }
  out.reliable = out.flagged * 5 <= static_cast<int>(out.points.size());
  return out;
}

ExponentTarget expected_exponent(const SurfaceProfile& p, Well well) {
  switch (well) {
    case Well::hyperbolic:
      return {2.0 * p.m1 / (p.m1 + 1.0), p.m1 == 1};
    case Well::inflection:
      return {(4.0 * p.m2 + 2.0) / (2.0 * p.m2 + 3.0), false};
    case Well::nontrapping:
      return {1.0, false};
  }
  throw std::logic_error("expected_exponent: bad well");
}

double spectral_dictionary(double h, double semiclassical_norm) {
  if (!(h > 0)) throw std::invalid_argument("spectral_dictionary: h must be > 0");
  return h * h * semiclassical_norm;
}

SpatialCutoff default_cutoff(Well well) {
  switch (well) {
    case Well::hyperbolic:
      return SpatialCutoff(0.0, 0.25, 0.5);
    case Well::inflection:
      return SpatialCutoff(1.0, 0.25, 0.5);
    case Well::nontrapping:
      // z = 0.5 is classically allowed only well away from the trapped sets
      return SpatialCutoff(4.0, 0.5, 1.0);
  }
  throw std::logic_error("default_cutoff: bad well");
}

EnergyWindow default_window(const SurfaceProfile& p, const Metric& metric,
                            Well well) {
  EnergyWindow w;
  switch (well) {
    case Well::hyperbolic:
      w.center = 1.0;
      w.scale_exponent = 2.0 * p.m1 / (p.m1 + 1.0);
      break;
    case Well::inflection:
      w.center = metric.trapped_constants().inflection_energy;
      w.scale_exponent = (4.0 * p.m2 + 2.0) / (2.0 * p.m2 + 3.0);
      break;
    case Well::nontrapping:
      w.center = 0.5;
      w.scale_exponent = 0.0;
      break;
  }
  return w;
}

}  // namespace semirev
