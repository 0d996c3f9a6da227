#include "subpois/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "subpois/errors.hpp"

namespace subpois::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

template <typename Fn>
void parallel_for(std::int64_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(count, 1)));
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += threads) fn(i);
    });
  }
}

double resolved_horizon(const SimConfig& config, const ModelParams& params) {
  return config.horizon > 0.0 ? config.horizon : default_horizon(params);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t mixed = splitmix64(state) ^ (stream * 0xD1B54A32D192ED03ULL);
  state = mixed;
  for (auto& word : s_) word = splitmix64(state);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::int64_t sample_poisson(Rng& rng, double mean) {
  if (!(mean >= 0.0)) throw DomainError("sample_poisson: negative mean");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Sequential-search inversion.
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p == 0.0 && cdf < u) break;  // rounding left u above the total mass
    }
    return k;
  }
  // Transformed rejection with squeeze (Hormann 1993).
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + kd * log_mean - std::lgamma(kd + 1.0);
    if (lhs <= rhs) return static_cast<std::int64_t>(kd);
  }
}

double sample_exponential(Rng& rng, double rate) { return -std::log(rng.uniform()) / rate; }

double sample_standard_normal(Rng& rng) {
  // Box-Muller, one variate per call.
  const double r = std::sqrt(-2.0 * std::log(rng.uniform()));
  return r * std::cos(6.283185307179586476925 * rng.uniform());
}

double sample_jump(Rng& rng, const JumpSpec& jumps) {
  switch (jumps.kind) {
    case JumpKind::degenerate_unit: return 1.0;
    case JumpKind::exponential: return sample_exponential(rng, jumps.zeta);
    case JumpKind::normal: return jumps.eta + jumps.sigma * sample_standard_normal(rng);
  }
  return 0.0;
}

double sample_W(const JumpSpec& jumps, double mu, Rng& rng) {
  const std::int64_t count = sample_poisson(rng, mu);
  if (jumps.kind == JumpKind::degenerate_unit) return static_cast<double>(count);
  double total = 0.0;
  for (std::int64_t i = 0; i < count; ++i) total += sample_jump(rng, jumps);
  return total;
}

double sample_Z(double t, const ModelParams& params, const JumpSpec& jumps, Rng& rng) {
  const std::int64_t epochs = sample_poisson(rng, params.lambda * t);
  double total = 0.0;
  for (std::int64_t i = 0; i < epochs; ++i) total += sample_W(jumps, params.mu, rng);
  return total;
}

double PathSample::value_at(double t) const {
  const auto it = std::upper_bound(epochs.begin(), epochs.end(), t);
  if (it == epochs.begin()) return 0.0;
  return cumulative[static_cast<std::size_t>(it - epochs.begin()) - 1];
}

PathSample simulate_path(const ModelParams& params, const JumpSpec& jumps, double horizon,
                         Rng& rng) {
  if (!(horizon > 0.0)) throw DomainError("simulate_path: horizon must be positive");
  PathSample path;
  double now = 0.0;
  double level = 0.0;
  while (true) {
    now += sample_exponential(rng, params.lambda);
    if (now > horizon) break;
    const double w = sample_W(jumps, params.mu, rng);
    level += w;
    path.epochs.push_back(now);
    path.increments.push_back(w);
    path.cumulative.push_back(level);
  }
  return path;
}

namespace {

// Earliest s in (from, to] with beta(s) <= level for a nonincreasing boundary,
// given beta(from) > level.
std::optional<double> descent_crossing(const Boundary& boundary, double level, double from,
                                       double to) {
  switch (boundary.kind) {
    case BoundaryKind::constant:
      return std::nullopt;
    case BoundaryKind::linear_decreasing: {
      const double s = boundary.k - level;
      if (s > from && s <= to) return s;
      return std::nullopt;
    }
    case BoundaryKind::general_nonincreasing: {
      if (boundary.at(to) > level) return std::nullopt;
      double lo = from;
      double hi = to;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (boundary.at(mid) <= level) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return hi;
    }
    case BoundaryKind::linear_increasing:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> first_crossing_sample(const Boundary& boundary, const ModelParams& params,
                                            const JumpSpec& jumps, double horizon, Rng& rng) {
  if (!(horizon > 0.0)) throw DomainError("first_crossing_sample: horizon must be positive");
  double previous = 0.0;
  double level = 0.0;
  while (true) {
    const double next = previous + sample_exponential(rng, params.lambda);
    if (boundary.nonincreasing()) {
      if (auto s = descent_crossing(boundary, level, previous, std::min(next, horizon))) return s;
    }
    if (next > horizon) return std::nullopt;
    level += sample_W(jumps, params.mu, rng);
    if (level >= boundary.at(next)) return next;
    previous = next;
  }
}

HitOutcome hitting_sample(int k, const ModelParams& params, const JumpSpec& jumps, double horizon,
                          Rng& rng) {
  if (jumps.kind != JumpKind::degenerate_unit) {
    throw WrongOperation("hitting_sample: requires degenerate unit jumps (iterated process)");
  }
  if (k < 1) throw DomainError("hitting_sample: k must be >= 1");
  double now = 0.0;
  std::int64_t level = 0;
  while (true) {
    now += sample_exponential(rng, params.lambda);
    if (now > horizon) return {HitStatus::censored, now};
    level += sample_poisson(rng, params.mu);
    if (level == k) return {HitStatus::hit, now};
    if (level > k) return {HitStatus::never, now};
  }
}

double default_horizon(const ModelParams& params) { return 50.0 / params.leave_rate(); }

void SimConfig::validate() const {
  if (replicates < 1) throw DomainError("SimConfig: replicates must be >= 1");
  if (!std::isfinite(horizon)) throw DomainError("SimConfig: horizon must be finite");
}

std::vector<double> simulate_Z(double t, const ModelParams& params, const JumpSpec& jumps,
                               const SimConfig& config) {
  params.validate();
  jumps.validate();
  config.validate();
  std::vector<double> out(static_cast<std::size_t>(config.replicates));
  parallel_for(config.replicates, config.threads, [&](std::int64_t i) {
    Rng rng(config.seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_Z(t, params, jumps, rng);
  });
  return out;
}

std::vector<double> simulate_crossing_times(const Boundary& boundary, const ModelParams& params,
                                            const JumpSpec& jumps, const SimConfig& config) {
  params.validate();
  jumps.validate();
  config.validate();
  const double horizon = resolved_horizon(config, params);
  std::vector<double> out(static_cast<std::size_t>(config.replicates));
  parallel_for(config.replicates, config.threads, [&](std::int64_t i) {
    Rng rng(config.seed, static_cast<std::uint64_t>(i));
    const auto s = first_crossing_sample(boundary, params, jumps, horizon, rng);
    out[static_cast<std::size_t>(i)] = s ? *s : std::numeric_limits<double>::infinity();
  });
  return out;
}

std::vector<HitOutcome> simulate_hitting(int k, const ModelParams& params,
                                         const SimConfig& config) {
  params.validate();
  config.validate();
  const double horizon = resolved_horizon(config, params);
  std::vector<HitOutcome> out(static_cast<std::size_t>(config.replicates));
  parallel_for(config.replicates, config.threads, [&](std::int64_t i) {
    Rng rng(config.seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = hitting_sample(k, params, JumpSpec::unit(), horizon, rng);
  });
  return out;
}

}  // namespace subpois::mc
