// Seeded random configurations and schedules. Draws use only the raw
// mt19937_64 output (whose sequence the standard fixes), so the same seed gives
// the same workload on every platform.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nftsim/netsim.hpp"

namespace nft::sim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform-ish draw in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::uint64_t percent) { return below(100) < percent; }

 private:
  std::mt19937_64 gen_;
};

struct WorkloadShape {
  std::uint64_t min_agents = 3;
  std::uint64_t max_agents = 6;
  std::uint64_t min_nodes = 2;
  std::uint64_t max_nodes = 4;
  std::uint64_t max_ops = 100;
  Amount max_deposit = 200;
};

/// Agents a0.., nodes n0.., each wallet on a random node with a random deposit.
Config random_config(Rng& rng, const WorkloadShape& shape = {});

/// Between 1 and shape.max_ops requests over the config's wallet owners, mixing
/// all four request kinds. Requests are mostly plausible (the generator tracks
/// who it expects to own each asset) with a share of deliberately invalid ones.
std::vector<ScheduledRequest> random_schedule(Rng& rng, const Config& config,
                                              const WorkloadShape& shape = {});

}  // namespace nft::sim
