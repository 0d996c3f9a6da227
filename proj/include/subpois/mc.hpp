#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "subpois/crossing.hpp"
#include "subpois/model.hpp"

namespace subpois::mc {

/// xoshiro256** seeded through splitmix64. Satisfies
/// UniformRandomBitGenerator; one instance per replicate.
class Rng {
 public:
  using result_type = std::uint64_t;

  /// Independent substream `stream` of the master `seed`.
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Inversion for mean < 10, Hormann's transformed rejection (PTRS) above.
std::int64_t sample_poisson(Rng& rng, double mean);
double sample_exponential(Rng& rng, double rate);
double sample_standard_normal(Rng& rng);
double sample_jump(Rng& rng, const JumpSpec& jumps);

/// W = sum_{i=1}^{K} X_i with K ~ Poisson(mu); distributed as Y(1).
double sample_W(const JumpSpec& jumps, double mu, Rng& rng);

/// Z(t) at a single time: N(t) ~ Poisson(lambda t) copies of W.
double sample_Z(double t, const ModelParams& params, const JumpSpec& jumps, Rng& rng);

struct PathSample {
  std::vector<double> epochs;      // jump times of N, strictly increasing
  std::vector<double> increments;  // W at each epoch
  std::vector<double> cumulative;  // running sums of increments

  /// Z(t) (right-continuous).
  double value_at(double t) const;
};

PathSample simulate_path(const ModelParams& params, const JumpSpec& jumps, double horizon, Rng& rng);

/// inf{t : Z(t) >= beta(t)} if it happens by `horizon`; nullopt when censored.
std::optional<double> first_crossing_sample(const Boundary& boundary, const ModelParams& params,
                                            const JumpSpec& jumps, double horizon, Rng& rng);

enum class HitStatus { hit, never, censored };

struct HitOutcome {
  HitStatus status = HitStatus::censored;
  double time = std::numeric_limits<double>::quiet_NaN();
};

/// First epoch at which the iterated process lands exactly on k.
HitOutcome hitting_sample(int k, const ModelParams& params, const JumpSpec& jumps, double horizon,
                          Rng& rng);

/// 50 mean sojourn times: 50 / (lambda (1 - e^{-mu})).
double default_horizon(const ModelParams& params);

struct SimConfig {
  std::uint64_t seed = 42;
  std::int64_t replicates = 100000;
  double horizon = 0.0;  // <= 0 selects default_horizon
  unsigned threads = 0;  // 0 selects hardware concurrency

  void validate() const;
};

// Batch drivers. Replicate i always uses Rng(seed, i), so output is
// independent of the thread count.
std::vector<double> simulate_Z(double t, const ModelParams& params, const JumpSpec& jumps,
                               const SimConfig& config);
/// Crossing times; +inf marks a censored replicate.
std::vector<double> simulate_crossing_times(const Boundary& boundary, const ModelParams& params,
                                            const JumpSpec& jumps, const SimConfig& config);
std::vector<HitOutcome> simulate_hitting(int k, const ModelParams& params, const SimConfig& config);

}  // namespace subpois::mc
