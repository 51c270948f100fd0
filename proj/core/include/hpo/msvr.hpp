#pragma once

#include <vector>

#include "hpo/oracle.hpp"

namespace hpo {

// Moving-average tracker with a correction term; maintains one estimate per
// tracked expectation under block sampling with constant mini-batches.
struct MsvrState {
  Vec u;
  double gamma = 0.5;
  double gamma_prime = 0;
  bool gamma_prime_override = false;
  Vec prev_point;
  int n_total = 0;
  int block_size = 0;
};

// (N - block)/(block*(1-gamma)) + (1-gamma)
double msvr_gamma_prime(int n_total, int block, double gamma);

MsvrState msvr_init(const Vec& initial_values, const Vec& x0, double gamma,
                    double gamma_prime, int block, bool gamma_prime_override = false,
                    bool allow_large_gamma = false);

// Per-index batch values evaluated at the current and previous iterate on the
// same mini-batch; the stream key pairs enforce that provenance.
struct BatchValues {
  std::vector<int> indices;
  std::vector<double> at_current;
  std::vector<double> at_prev;
  std::vector<std::uint64_t> keys_current;
  std::vector<std::uint64_t> keys_prev;
};

void msvr_update(MsvrState& state, const BatchValues& batch, const Vec& x_t);

struct TrackingError {
  double mean_abs = 0;
  double mean_sq = 0;
};

TrackingError tracking_error(const MsvrState& state, const Vec& exact_values);

}  // namespace hpo
