#include "hermite/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "hermite/quadrature.hpp"

namespace hermite {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Shape of the integrand exp(phi(t)) on t > 0 with
//   phi(t) = (a - 1) ln t - q(t),
// where q(t) = t^2/2 + x t for x > 0 and q(t) = (t + x)^2/2 for x <= 0. The
// second form is the completed square; it moves exp(x^2/2) into the prefactor
// so nothing in the integrand grows with |x|.
struct CylinderIntegrand {
  double a;  // -nu
  double x;
  bool completed_square;

  double q(double t) const { return completed_square ? 0.5 * (t + x) * (t + x) : t * (0.5 * t + x); }
  double phi(double t) const { return (a == 1.0 ? 0.0 : (a - 1.0) * std::log(t)) - q(t); }
  double dphi(double t) const { return (a - 1.0) / t - (t + x); }

  // log of the factor multiplying the integral in D_nu(x).
  double log_prefactor() const {
    return (completed_square ? 0.25 : -0.25) * x * x - log_gamma_pos(a);
  }

  // Interior maximum of phi, if any: positive root of t^2 + x t - (a - 1) = 0
  // (the larger root when a < 1 and x is sufficiently negative).
  std::optional<double> peak() const {
    const double disc = x * x + 4.0 * (a - 1.0);
    if (a > 1.0) {
      const double s = std::sqrt(disc);
      return x <= 0.0 ? 0.5 * (s - x) : 2.0 * (a - 1.0) / (x + s);
    }
    if (a < 1.0 && x < 0.0 && disc >= 0.0) return 0.5 * (std::sqrt(disc) - x);
    return std::nullopt;
  }
};

void add_if_inside(std::vector<double>& pts, double v, double lo, double hi) {
  if (v > lo && v < hi) pts.push_back(v);
}

std::vector<double> sorted_unique(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

Order::Order(double nu) : nu_(nu) {
  if (!std::isfinite(nu) || !(nu < 0.0)) throw std::invalid_argument("order nu must be finite and < 0");
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || max_subdivisions < 1 || !(tail_sigma >= 6.0))
    throw std::invalid_argument("QuadratureConfig: need rel_tol > 0, max_subdivisions >= 1, tail_sigma >= 6");
}

double gamma_pos(double a) {
  if (!std::isfinite(a) || !(a > 0.0)) throw std::domain_error("gamma_pos: argument must be finite and > 0");
  if (a <= 170.0) return std::tgamma(a);
  return std::exp(log_gamma_pos(a));
}

double log_gamma_pos(double a) {
  if (!std::isfinite(a) || !(a > 0.0)) throw std::domain_error("log_gamma_pos: argument must be finite and > 0");
  if (a <= 170.0) return std::log(std::tgamma(a));
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(a, &sign);
#else
  return std::lgamma(a);
#endif
}

EvalResult dnu(Order nu, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(x)) throw std::domain_error("dnu: x must be finite");

  const CylinderIntegrand f{-nu.value(), x, x <= 0.0};
  const auto peak = f.peak();
  const double centre = std::max(peak.value_or(0.0), std::max(0.0, -x));
  const double upper = centre + cfg.tail_sigma;
  // Rescale so the integrand is O(1) at its maximum.
  const double scale = (peak && *peak > 0.0 && f.a != 1.0) ? f.phi(*peak) : 0.0;

  // Points that resolve the boundary layer of exp(-x t) for large x > 0 and
  // the Gaussian bump around the peak.
  std::vector<double> t_marks;
  if (x > 1.0)
    for (double c : {1.0, 4.0, 16.0, 64.0}) t_marks.push_back(c / x);
  if (peak) {
    const double width = 1.0 / std::sqrt(1.0 + std::max(0.0, (f.a - 1.0) / (*peak * *peak)));
    for (double c : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) t_marks.push_back(*peak + c * width);
  }

  quad::Estimate total;
  int budget = cfg.max_subdivisions;
  double regular_lo = 0.0;

  if (f.a < 1.0) {
    // t^(a-1) is unbounded at 0: with t = s^(1/a), t^(a-1) dt = ds / a.
    const double t1 = 1.0;
    regular_lo = t1;
    const double inv_a = 1.0 / f.a;
    auto g = [&](double s) { return s <= 0.0 ? std::exp(-f.q(0.0) - scale) * inv_a
                                             : std::exp(-f.q(std::pow(s, inv_a)) - scale) * inv_a; };
    std::vector<double> pts{0.0, 1.0};
    for (double t : t_marks) add_if_inside(pts, std::pow(t, f.a), 0.0, 1.0);
    pts = sorted_unique(std::move(pts));
    total = quad::integrate(g, pts, cfg.rel_tol, std::max(1, budget / 2));
    budget -= total.intervals;
  }

  auto h = [&](double t) { return t <= 0.0 ? (f.a > 1.0 ? 0.0 : std::exp(-f.q(0.0) - scale))
                                           : std::exp(f.phi(t) - scale); };
  std::vector<double> pts{regular_lo, upper};
  for (double t : t_marks) add_if_inside(pts, t, regular_lo, upper);
  pts = sorted_unique(std::move(pts));
  const auto body = quad::integrate(h, pts, cfg.rel_tol, std::max(1, budget));
  total.value += body.value;
  total.abs_error += body.abs_error;
  total.intervals += body.intervals;

  // Gaussian tail past the truncation point; phi is concave there.
  const double slope = f.dphi(upper);
  const double tail = slope < 0.0 ? std::exp(f.phi(upper) - scale) / -slope : 0.0;

  EvalResult out;
  out.value = LogValue::from_log(f.log_prefactor() + scale + std::log(total.value));
  out.abs_err_log = (total.abs_error + tail) / total.value;
  if (!(total.value > 0.0) || out.abs_err_log > cfg.rel_tol)
    throw ConvergenceError("dnu: quadrature did not reach rel_tol", out);
  return out;
}

EvalResult hermite(Order nu, double x, const QuadratureConfig& cfg) {
  if (!std::isfinite(x)) throw std::domain_error("hermite: x must be finite");
  EvalResult d = dnu(nu, std::numbers::sqrt2 * x, cfg);
  d.value.log_mag += 0.5 * nu.value() * kLn2 + 0.5 * x * x;
  return d;
}

EvalResult hermite_derivative(Order nu, double x, const QuadratureConfig& cfg) {
  EvalResult h = hermite(nu.lowered(1), x, cfg);
  h.value = LogValue::from_log(std::log(-2.0 * nu.value()) + h.value.log_mag, -1);
  return h;
}

double recurrence_residual(Order nu, double x, const QuadratureConfig& cfg) {
  const double h0 = hermite(nu, x, cfg).value.log_mag;
  const double h1 = hermite(nu.lowered(1), x, cfg).value.log_mag;
  const double h2 = hermite(nu.lowered(2), x, cfg).value.log_mag;
  const double r1 = 2.0 * x * std::exp(h1 - h0);
  const double r2 = 2.0 * (nu.value() - 1.0) * std::exp(h2 - h0);
  return std::fabs(1.0 - r1 + r2);
}

EvalResult psi(int k, double x, const OUParams& params, Order nu, const QuadratureConfig& cfg) {
  if (k < 0 || k > 3) throw std::domain_error("psi: derivative order must be in 0..3");
  EvalResult h = hermite(nu.lowered(k), params.hermite_arg(x), cfg);
  // (-2/sigma)^k prod (nu - j) = (2/sigma)^k prod (j - nu) > 0.
  double log_coef = k * std::log(2.0 / params.sigma());
  for (int j = 0; j < k; ++j) log_coef += std::log(j - nu.value());
  h.value.log_mag += log_coef;
  return h;
}

double generator_residual(double x, const OUParams& params, Order nu, const QuadratureConfig& cfg) {
  const double p0 = psi(0, x, params, nu, cfg).value.log_mag;
  const double p1 = psi(1, x, params, nu, cfg).value.log_mag;
  const double p2 = psi(2, x, params, nu, cfg).value.log_mag;
  const double s2 = params.sigma() * params.sigma();
  return std::fabs(0.5 * s2 * std::exp(p2 - p0) + (params.mu() - x) * std::exp(p1 - p0) + nu.value());
}

double identity_residual(Order nu, double x, const QuadratureConfig& cfg) {
  const double log_d = dnu(nu, x, cfg).value.log_mag;
  const double log_h = hermite(nu, x / std::numbers::sqrt2, cfg).value.log_mag;
  return std::fabs(log_d - (-0.5 * nu.value() * kLn2 - 0.25 * x * x + log_h));
}

}  // namespace hermite
