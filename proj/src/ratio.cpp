#include "hermite/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hermite {

namespace {

// log R_nu(x) and its propagated error.
std::pair<double, double> log_ratio(Order nu, double x, const QuadratureConfig& cfg) {
  const EvalResult h0 = hermite(nu, x, cfg);
  const EvalResult h1 = hermite(nu.lowered(1), x, cfg);
  const EvalResult h2 = hermite(nu.lowered(2), x, cfg);
  return {2.0 * h1.value.log_mag - h0.value.log_mag - h2.value.log_mag,
          2.0 * h1.abs_err_log + h0.abs_err_log + h2.abs_err_log};
}

}  // namespace

RatioPoint ratio_hermite(Order nu, double x, const QuadratureConfig& cfg) {
  const auto [lr, err] = log_ratio(nu, x, cfg);
  return {x, std::exp(lr), err};
}

RatioPoint ratio_cylinder(Order nu, double x, const QuadratureConfig& cfg) {
  RatioPoint p = ratio_hermite(nu, x / std::numbers::sqrt2, cfg);
  p.x = x;
  return p;
}

Bounds bounds(Order nu) { return {1.0, (nu.value() - 1.0) / nu.value()}; }

double turan_margin(Order nu, double x, const QuadratureConfig& cfg) {
  return -std::expm1(-log_ratio(nu, x, cfg).first);
}

double capital_psi(double x, const OUParams& params, Order nu, const QuadratureConfig& cfg) {
  const double p0 = psi(0, x, params, nu, cfg).value.log_mag;
  const double p1 = psi(1, x, params, nu, cfg).value.log_mag;
  const double p2 = psi(2, x, params, nu, cfg).value.log_mag;
  return std::exp(2.0 * p1 - p0 - p2);
}

TargetShape target_shape(ScanTarget target, Order nu) {
  const double nu_v = nu.value();
  const double top = (nu_v - 1.0) / nu_v;
  switch (target) {
    case ScanTarget::RatioHermite:
    case ScanTarget::RatioCylinder:
      return {{1.0, top}, top, 1.0, true};
    case ScanTarget::TuranMargin:
      return {{0.0, 1.0 - 1.0 / top}, 1.0 - 1.0 / top, 0.0, true};
    case ScanTarget::CapitalPsi:
      return {{1.0 / top, 1.0}, 1.0 / top, 1.0, false};
  }
  throw std::logic_error("unknown scan target");
}

ScanReport scan(ScanTarget target, Order nu, double x_min, double x_max, int n,
                const QuadratureConfig& cfg, const OUParams& params) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw std::invalid_argument("scan: need finite x_min < x_max");
  if (n < 3) throw std::invalid_argument("scan: need n >= 3");

  ScanReport rep;
  rep.nu = nu;
  rep.target = target;
  rep.points.reserve(static_cast<std::size_t>(n));
  const double step = (x_max - x_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = (i == n - 1) ? x_max : x_min + i * step;
    RatioPoint p;
    switch (target) {
      case ScanTarget::RatioHermite: p = ratio_hermite(nu, x, cfg); break;
      case ScanTarget::RatioCylinder: p = ratio_cylinder(nu, x, cfg); break;
      case ScanTarget::TuranMargin: {
        // d(1 - 1/R) = (dR/R) / R, so rel_err(margin) = rel_err(R) / (R * margin).
        const auto [lr, err] = log_ratio(nu, x, cfg);
        const double margin = -std::expm1(-lr);
        p = {x, margin, margin > 0.0 ? err * std::exp(-lr) / margin : err};
        break;
      }
      case ScanTarget::CapitalPsi: {
        const RatioPoint r = ratio_hermite(nu, params.hermite_arg(x), cfg);
        p = {x, capital_psi(x, params, nu, cfg), r.rel_err};
        break;
      }
    }
    rep.points.push_back(p);
  }

  const TargetShape shape = target_shape(target, nu);
  auto guard = [](const RatioPoint& p) { return 10.0 * std::fabs(p.r) * p.rel_err; };
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
    const auto& a = rep.points[i];
    const auto& b = rep.points[i + 1];
    const double tol = std::max(guard(a), guard(b));
    const double move = shape.decreasing ? a.r - b.r : b.r - a.r;
    if (!(move > tol)) rep.monotone_violations.emplace_back(i, i + 1);
  }
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto& p = rep.points[i];
    const double tol = guard(p);
    if (!(p.r - tol > shape.range.lower && p.r + tol < shape.range.upper)) rep.bound_violations.push_back(i);
  }
  rep.left_limit_gap = std::fabs(rep.points.front().r - shape.left_limit);
  rep.right_limit_gap = std::fabs(rep.points.back().r - shape.right_limit);
  return rep;
}

ScanReport scan_monotonicity(Order nu, double x_min, double x_max, int n, const QuadratureConfig& cfg) {
  return scan(ScanTarget::RatioHermite, nu, x_min, x_max, n, cfg);
}

}  // namespace hermite
