#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hermite/ou_params.hpp"
#include "hermite/specfun.hpp"

namespace hermite {

struct RatioPoint {
  double x = 0.0;
  double r = 0.0;
  double rel_err = 0.0;
};

struct Bounds {
  double lower;
  double upper;
};

// R_nu(x) = H_{nu-1}(x)^2 / (H_nu(x) H_{nu-2}(x)), evaluated in log space.
RatioPoint ratio_hermite(Order nu, double x, const QuadratureConfig& cfg = {});

// D_{nu-1}(x)^2 / (D_nu(x) D_{nu-2}(x)) = R_nu(x / sqrt 2).
RatioPoint ratio_cylinder(Order nu, double x, const QuadratureConfig& cfg = {});

// Sharp range of R_nu: (1, (nu-1)/nu).
Bounds bounds(Order nu);

// 1 - 1/R_nu(x); positive exactly when H_{nu-1}^2 > H_nu H_{nu-2}.
double turan_margin(Order nu, double x, const QuadratureConfig& cfg = {});

// psi'(x)^2 / (psi(x) psi''(x)) for the OU eigenfunction psi. Equals
// nu/(nu-1) R_nu((mu - x)/sigma).
double capital_psi(double x, const OUParams& params, Order nu, const QuadratureConfig& cfg = {});

// Quantities a scan can walk along a grid.
enum class ScanTarget { RatioHermite, RatioCylinder, TuranMargin, CapitalPsi };

struct ScanReport {
  Order nu{-1.0};
  ScanTarget target = ScanTarget::RatioHermite;
  std::vector<RatioPoint> points;  // strictly increasing x
  std::vector<std::pair<std::size_t, std::size_t>> monotone_violations;
  std::vector<std::size_t> bound_violations;
  double left_limit_gap = 0.0;   // |f(x_min) - lim_{x -> -inf} f|
  double right_limit_gap = 0.0;  // |f(x_max) - lim_{x -> +inf} f|

  bool clean() const { return monotone_violations.empty() && bound_violations.empty(); }
};

// Expected behaviour of a scan target: open range, limits at -inf / +inf and
// the direction of strict monotonicity.
struct TargetShape {
  Bounds range;
  double left_limit;
  double right_limit;
  bool decreasing;
};
TargetShape target_shape(ScanTarget target, Order nu);

// Evaluates the target on n equally spaced points of [x_min, x_max]. A pair
// (i, i+1) is a monotonicity violation unless the step moves in the expected
// direction by more than 10x the larger propagated absolute error of the two
// points. A point is a bound violation unless it lies inside the open range by
// more than the same guard.
ScanReport scan(ScanTarget target, Order nu, double x_min, double x_max, int n,
                const QuadratureConfig& cfg = {}, const OUParams& params = OUParams(0.0, 1.0));

// scan() of R_nu.
ScanReport scan_monotonicity(Order nu, double x_min, double x_max, int n, const QuadratureConfig& cfg = {});

}  // namespace hermite
