#pragma once

#include <cstdint>
#include <vector>

namespace hpo::rng {

// Counter-based splittable streams. Every random draw in the project is a
// pure function of a StreamKey, so any batch can be replayed bit-exactly
// (needed for evaluating the same mini-batch at x_t and x_{t-1}).

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + splitmix64(b)));
}

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t oracle_id = 0;
  std::uint64_t iteration = 0;
  std::uint32_t draw = 0;

  std::uint64_t hash() const {
    std::uint64_t h = splitmix64(seed);
    h = mix(h, oracle_id);
    h = mix(h, iteration);
    h = mix(h, draw);
    return h;
  }
};

class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xd1b54a32d192ed03ULL)) {}

  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }

  // uniform in (0,1); never exactly 0 so logs are safe
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // Box-Muller, no caching so the consumption pattern is fixed
  double normal();

  // uniform integer in [0, n)
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // k distinct indices from {0,...,n-1}, order randomized
  std::vector<int> sample_subset(int n, int k);

 private:
  std::uint64_t state_;
};

}  // namespace hpo::rng
