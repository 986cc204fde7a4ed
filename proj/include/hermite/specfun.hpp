#pragma once

#include <stdexcept>
#include <string>

#include "hermite/log_value.hpp"
#include "hermite/ou_params.hpp"

namespace hermite {

// Strictly negative, finite order nu.
class Order {
 public:
  explicit Order(double nu);

  double value() const { return nu_; }
  // nu - k, still negative for k >= 0.
  Order lowered(int k) const { return Order(nu_ - k); }

 private:
  double nu_;
};

struct QuadratureConfig {
  double rel_tol = 1e-12;
  int max_subdivisions = 200;
  // Truncation distance, in unit-variance Gaussian standard deviations, past
  // the integrand peak.
  double tail_sigma = 12.0;

  void validate() const;
};

// Raised when the adaptive quadrature misses rel_tol; carries the best estimate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EvalResult best)
      : std::runtime_error(what), best_(best) {}
  const EvalResult& best() const { return best_; }

 private:
  EvalResult best_;
};

// Gamma(a) and log Gamma(a) for a > 0. Throws std::domain_error otherwise.
double gamma_pos(double a);
double log_gamma_pos(double a);

// Parabolic cylinder function D_nu(x), nu < 0, from its integral
// representation over t in (0, inf) of t^(-nu-1) exp(-t^2/2 - x t).
EvalResult dnu(Order nu, double x, const QuadratureConfig& cfg = {});

// Hermite function H_nu(x) = 2^(nu/2) exp(x^2/2) D_nu(sqrt(2) x).
EvalResult hermite(Order nu, double x, const QuadratureConfig& cfg = {});

// H_nu'(x) = 2 nu H_{nu-1}(x). Negative for nu < 0.
EvalResult hermite_derivative(Order nu, double x, const QuadratureConfig& cfg = {});

// |H_nu - 2x H_{nu-1} + 2(nu-1) H_{nu-2}| / H_nu.
double recurrence_residual(Order nu, double x, const QuadratureConfig& cfg = {});

// k-th derivative (k <= 3) of the increasing eigenfunction
// psi(x) = H_nu((mu - x) / sigma) of the OU generator:
//   psi^(k)(x) = (-2/sigma)^k prod_{j<k} (nu - j) H_{nu-k}((mu - x) / sigma).
EvalResult psi(int k, double x, const OUParams& params, Order nu, const QuadratureConfig& cfg = {});

// |(sigma^2/2) psi'' + (mu - x) psi' + nu psi| / psi.
double generator_residual(double x, const OUParams& params, Order nu, const QuadratureConfig& cfg = {});

// |log D_nu(x) - (-(nu/2) ln 2 - x^2/4 + log H_nu(x / sqrt 2))|.
double identity_residual(Order nu, double x, const QuadratureConfig& cfg = {});

}  // namespace hermite
