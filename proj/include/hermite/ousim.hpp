#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "hermite/ou_params.hpp"
#include "hermite/philox.hpp"
#include "hermite/specfun.hpp"

namespace hermite {

struct Moments {
  double mean;
  double var;
};

// Gaussian law of X_t given X_0 = x:
//   mean = x e^{-t} + mu (1 - e^{-t}),  var = (sigma^2 / 2)(1 - e^{-2t}).
// t may be +inf (stationary law).
Moments transition_law(double x, double t, const OUParams& params);

// Random source of one simulated path. Normals and bridge uniforms come from
// separate Philox substreams keyed by (seed, path index), so switching the
// bridge correction on or off leaves the sampled path unchanged.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint32_t path)
      : normals_engine_(seed, path, 0), uniforms_engine_(seed, path, 1) {}

  double normal() { return normal_(normals_engine_); }
  double uniform() { return uniform_(uniforms_engine_); }

 private:
  Philox4x32 normals_engine_;
  Philox4x32 uniforms_engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

// Draws X_{t+delta} given X_t = x from the exact transition law.
double ou_exact_step(double x, double delta, const OUParams& params, PathRng& rng);

struct SimConfig {
  double dt = 1e-3;
  double t_max = 200.0;  // censoring horizon
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 0;
  bool bridge_correction = true;
  unsigned threads = 0;  // 0: std::thread::hardware_concurrency()

  void validate() const;
};

struct HitSample {
  double time = 0.0;
  bool censored = false;
};

// First time the OU path started at x reaches y > x, on a grid of width
// cfg.dt with linear interpolation of the crossing inside the step. With the
// bridge correction a step whose endpoints both stay below y still counts as a
// hit with probability exp(-2 (y - x1)(y - x2) / (sigma^2 dt)); such a hit is
// placed at the step midpoint. Paths still below y at cfg.t_max are censored.
HitSample simulate_hit(double x, double y, const OUParams& params, const SimConfig& cfg, PathRng& rng);

// All cfg.n_paths samples, path i drawn from PathRng(cfg.seed, i). The result
// does not depend on cfg.threads.
std::vector<HitSample> sample_hitting_times(double x, double y, const OUParams& params, const SimConfig& cfg);

struct LaplaceEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  // Upper bound on the censored paths' contribution: e^{lambda t_max} n_censored / n.
  double censored_bound = 0.0;
};

struct HitTimeStats {
  std::int64_t n_hit = 0;
  std::int64_t n_censored = 0;
  std::map<double, LaplaceEstimate> laplace_estimates;  // keyed by lambda <= 0
};

// Monte Carlo estimates of E[exp(lambda tau_y)]. Censored samples enter as
// exp(lambda t_max). Sums run in path order with compensation.
HitTimeStats laplace_from_samples(std::span<const HitSample> samples, std::span<const double> lambdas, double t_max);

HitTimeStats laplace_at_hit(double x, double y, std::span<const double> lambdas, const OUParams& params,
                            const SimConfig& cfg);

struct Eq5Report {
  double mc = 0.0;
  double analytic = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  double censored_bound = 0.0;
};

// E[exp((nu - k) tau_y)] against psi^(k)(x) / psi^(k)(y)
// = H_{nu-k}((mu - x)/sigma) / H_{nu-k}((mu - y)/sigma).
double eq5_analytic(double x, double y, Order nu, int k, const OUParams& params, const QuadratureConfig& qcfg = {});
Eq5Report eq5_from_samples(std::span<const HitSample> samples, double x, double y, Order nu, int k,
                           const OUParams& params, double t_max, const QuadratureConfig& qcfg = {});
Eq5Report verify_eq5(double x, double y, Order nu, int k, const OUParams& params, const SimConfig& cfg,
                     const QuadratureConfig& qcfg = {});

struct HolderReport {
  double lhs = 0.0;  // E[e^{nu tau}]^{1/2} E[e^{(nu-2) tau}]^{1/2}
  double rhs = 0.0;  // E[e^{(nu-1) tau}]
  double gap = 0.0;
  double std_error = 0.0;  // delta-method standard error of gap on the common sample
  double analytic_gap = 0.0;
};

HolderReport holder_from_samples(std::span<const HitSample> samples, Order nu, double t_max);
HolderReport verify_holder(double x, double y, Order nu, const OUParams& params, const SimConfig& cfg,
                           const QuadratureConfig& qcfg = {});

}  // namespace hermite
