#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace hermite::quad {

struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 nodes).
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], kNodes[3], kNodes[5], kNodes[7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double lo, hi, value, error;
};

template <class F>
Interval gauss_kronrod_15(F& f, double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<double, 15> fv{};
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }

  double kronrod = kKronrodWeights[7] * fv[7];
  double gauss = kGaussWeights[3] * fv[7];
  double abs_sum = std::fabs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[j] + fv[14 - j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::fabs(fv[7] - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));

  const double ah = std::fabs(half);
  const double result = kronrod * half;
  abs_sum *= ah;
  asc *= ah;
  double err = std::fabs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  if (abs_sum > tiny / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  return {lo, hi, result, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration over [breaks.front(), breaks.back()].
// The interior breakpoints seed the initial partition. The interval with the
// largest error estimate is bisected until the total error falls below
// rel_tol * |integral| or max_intervals is reached.
template <class F>
Estimate integrate(F&& f, std::span<const double> breaks, double rel_tol, int max_intervals) {
  std::vector<detail::Interval> parts;
  parts.reserve(static_cast<std::size_t>(std::max<int>(max_intervals, breaks.size())) + 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) parts.push_back(detail::gauss_kronrod_15(f, breaks[i], breaks[i + 1]));
  }

  auto totals = [&parts] {
    double v = 0.0, e = 0.0;
    for (const auto& p : parts) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  while (error > rel_tol * std::fabs(value) && static_cast<int>(parts.size()) < max_intervals) {
    auto worst = std::max_element(parts.begin(), parts.end(),
                                  [](const auto& a, const auto& b) { return a.error < b.error; });
    const double lo = worst->lo, hi = worst->hi;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // interval exhausted at machine resolution
    *worst = detail::gauss_kronrod_15(f, lo, mid);
    parts.push_back(detail::gauss_kronrod_15(f, mid, hi));
    std::tie(value, error) = totals();
  }
  return {value, error, static_cast<int>(parts.size()), error <= rel_tol * std::fabs(value)};
}

}  // namespace hermite::quad
