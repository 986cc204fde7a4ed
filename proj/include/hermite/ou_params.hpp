#pragma once

#include <cmath>
#include <stdexcept>

namespace hermite {

// dX = (mu - X) dt + sigma dW.
class OUParams {
 public:
  OUParams(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0))
      throw std::invalid_argument("OUParams: mu must be finite and sigma finite and > 0");
  }

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  // Argument of the Hermite function in psi(x) = H_nu((mu - x) / sigma).
  double hermite_arg(double x) const { return (mu_ - x) / sigma_; }

 private:
  double mu_;
  double sigma_;
};

}  // namespace hermite
