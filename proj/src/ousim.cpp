#include "hermite/ousim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hermite {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Exact one-step transition with the step constants precomputed.
struct OUStepper {
  double mu;
  double decay;  // e^{-delta}
  double sd;     // sqrt(var over delta)

  OUStepper(const OUParams& p, double delta)
      : mu(p.mu()),
        decay(std::exp(-delta)),
        sd(p.sigma() * std::sqrt(-0.5 * std::expm1(-2.0 * delta))) {}

  double operator()(double x, double z) const { return mu + (x - mu) * decay + sd * z; }
};

struct MeanAndError {
  double mean;
  double std_error;
};

template <class Fn>
MeanAndError mean_and_error(std::span<const HitSample> samples, Fn&& value) {
  const auto n = static_cast<double>(samples.size());
  CompensatedSum s;
  for (const auto& h : samples) s.add(value(h));
  const double mean = s.value() / n;
  if (samples.size() < 2) return {mean, 0.0};
  CompensatedSum ss;
  for (const auto& h : samples) {
    const double d = value(h) - mean;
    ss.add(d * d);
  }
  return {mean, std::sqrt(ss.value() / (n - 1.0) / n)};
}

double effective_time(const HitSample& h, double t_max) { return h.censored ? t_max : h.time; }

void require_above(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || !(y > x))
    throw std::invalid_argument("hitting level y must be finite and strictly above the start x");
}

}  // namespace

Moments transition_law(double x, double t, const OUParams& params) {
  if (!(t >= 0.0)) throw std::invalid_argument("transition_law: t must be >= 0");
  const double e = std::exp(-t);
  const double s2 = params.sigma() * params.sigma();
  return {x * e + params.mu() * (1.0 - e), -0.5 * s2 * std::expm1(-2.0 * t)};
}

double ou_exact_step(double x, double delta, const OUParams& params, PathRng& rng) {
  if (!(delta > 0.0)) throw std::invalid_argument("ou_exact_step: delta must be > 0");
  return OUStepper(params, delta)(x, rng.normal());
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(t_max) || !(dt <= t_max) || n_paths < 1 ||
      n_paths > static_cast<std::int64_t>(std::numeric_limits<std::uint32_t>::max()))
    throw std::invalid_argument("SimConfig: need 0 < dt <= t_max and 1 <= n_paths < 2^32");
}

HitSample simulate_hit(double x, double y, const OUParams& params, const SimConfig& cfg, PathRng& rng) {
  require_above(x, y);
  cfg.validate();
  const OUStepper step(params, cfg.dt);
  const double bridge_scale = 2.0 / (params.sigma() * params.sigma() * cfg.dt);
  const auto n_steps = static_cast<std::int64_t>(std::ceil(cfg.t_max / cfg.dt));

  double cur = x;
  for (std::int64_t i = 0; i < n_steps; ++i) {
    const double t0 = static_cast<double>(i) * cfg.dt;
    const double next = step(cur, rng.normal());
    if (next >= y) return {std::min(t0 + cfg.dt * (y - cur) / (next - cur), cfg.t_max), false};
    if (cfg.bridge_correction) {
      const double expo = bridge_scale * (y - cur) * (y - next);
      // exp(-40) is far below the resolution of any estimate built on these paths.
      if (expo < 40.0 && rng.uniform() < std::exp(-expo)) return {std::min(t0 + 0.5 * cfg.dt, cfg.t_max), false};
    }
    cur = next;
  }
  return {cfg.t_max, true};
}

std::vector<HitSample> sample_hitting_times(double x, double y, const OUParams& params, const SimConfig& cfg) {
  require_above(x, y);
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<HitSample> out(n);

  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      PathRng rng(cfg.seed, static_cast<std::uint32_t>(i));
      out[i] = simulate_hit(x, y, params, cfg, rng);
    }
  };
  if (workers <= 1) {
    run(0, n);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, n * w / workers, n * (w + 1) / workers);
  }
  return out;
}

HitTimeStats laplace_from_samples(std::span<const HitSample> samples, std::span<const double> lambdas, double t_max) {
  if (samples.empty()) throw std::invalid_argument("laplace_from_samples: no samples");
  HitTimeStats st;
  st.n_censored = std::count_if(samples.begin(), samples.end(), [](const HitSample& h) { return h.censored; });
  st.n_hit = static_cast<std::int64_t>(samples.size()) - st.n_censored;
  for (double lambda : lambdas) {
    if (!(lambda <= 0.0)) throw std::invalid_argument("laplace_from_samples: rates must be <= 0");
    const auto [mean, se] =
        mean_and_error(samples, [&](const HitSample& h) { return std::exp(lambda * effective_time(h, t_max)); });
    st.laplace_estimates[lambda] = {
        mean, se, std::exp(lambda * t_max) * static_cast<double>(st.n_censored) / static_cast<double>(samples.size())};
  }
  return st;
}

HitTimeStats laplace_at_hit(double x, double y, std::span<const double> lambdas, const OUParams& params,
                            const SimConfig& cfg) {
  for (double lambda : lambdas)
    if (!(lambda <= 0.0)) throw std::invalid_argument("laplace_at_hit: rates must be <= 0");
  const auto samples = sample_hitting_times(x, y, params, cfg);
  return laplace_from_samples(samples, lambdas, cfg.t_max);
}

double eq5_analytic(double x, double y, Order nu, int k, const OUParams& params, const QuadratureConfig& qcfg) {
  require_above(x, y);
  if (k < 0 || k > 2) throw std::domain_error("eq5: k must be 0, 1 or 2");
  const Order order = nu.lowered(k);
  const double hx = hermite(order, params.hermite_arg(x), qcfg).value.log_mag;
  const double hy = hermite(order, params.hermite_arg(y), qcfg).value.log_mag;
  return std::exp(hx - hy);
}

Eq5Report eq5_from_samples(std::span<const HitSample> samples, double x, double y, Order nu, int k,
                           const OUParams& params, double t_max, const QuadratureConfig& qcfg) {
  Eq5Report rep;
  rep.analytic = eq5_analytic(x, y, nu, k, params, qcfg);
  const double lambda = nu.value() - k;
  const HitTimeStats st = laplace_from_samples(samples, std::span(&lambda, 1), t_max);
  const LaplaceEstimate& est = st.laplace_estimates.at(lambda);
  rep.mc = est.mean;
  rep.std_error = est.std_error;
  rep.censored_bound = est.censored_bound;
  const double diff = rep.mc - rep.analytic;
  rep.z_score = rep.std_error > 0.0 ? diff / rep.std_error
                : diff == 0.0       ? 0.0
                                    : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return rep;
}

Eq5Report verify_eq5(double x, double y, Order nu, int k, const OUParams& params, const SimConfig& cfg,
                     const QuadratureConfig& qcfg) {
  if (k < 0 || k > 2) throw std::domain_error("eq5: k must be 0, 1 or 2");
  const auto samples = sample_hitting_times(x, y, params, cfg);
  return eq5_from_samples(samples, x, y, nu, k, params, cfg.t_max, qcfg);
}

HolderReport holder_from_samples(std::span<const HitSample> samples, Order nu, double t_max) {
  if (samples.empty()) throw std::invalid_argument("holder_from_samples: no samples");
  const double nu_v = nu.value();
  auto term = [&](double lambda) {
    return [lambda, t_max](const HitSample& h) { return std::exp(lambda * effective_time(h, t_max)); };
  };
  const double m0 = mean_and_error(samples, term(nu_v)).mean;
  const double m1 = mean_and_error(samples, term(nu_v - 1.0)).mean;
  const double m2 = mean_and_error(samples, term(nu_v - 2.0)).mean;

  HolderReport rep;
  rep.lhs = std::sqrt(m0) * std::sqrt(m2);
  rep.rhs = m1;
  rep.gap = rep.lhs - rep.rhs;
  // Linearisation of sqrt(m0 m2) - m1 around the sample means.
  const auto influence = mean_and_error(samples, [&](const HitSample& h) {
    const double t = effective_time(h, t_max);
    return 0.5 * rep.lhs * (std::exp(nu_v * t) / m0 + std::exp((nu_v - 2.0) * t) / m2) - std::exp((nu_v - 1.0) * t);
  });
  rep.std_error = influence.std_error;
  return rep;
}

HolderReport verify_holder(double x, double y, Order nu, const OUParams& params, const SimConfig& cfg,
                           const QuadratureConfig& qcfg) {
  const auto samples = sample_hitting_times(x, y, params, cfg);
  HolderReport rep = holder_from_samples(samples, nu, cfg.t_max);
  const double a0 = eq5_analytic(x, y, nu, 0, params, qcfg);
  const double a1 = eq5_analytic(x, y, nu, 1, params, qcfg);
  const double a2 = eq5_analytic(x, y, nu, 2, params, qcfg);
  rep.analytic_gap = std::sqrt(a0 * a2) - a1;
  return rep;
}

}  // namespace hermite
