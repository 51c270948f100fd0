#include "hpo/msvr.hpp"

#include <cmath>

namespace hpo {

double msvr_gamma_prime(int n_total, int block, double gamma) {
  if (gamma >= 1.0 || gamma <= 0.0)
    throw Error("bad_gamma", "gamma must lie in (0,1)");
  if (block < 1 || block > n_total)
    throw Error("bad_block", "block must lie in [1, n_total]");
  return static_cast<double>(n_total - block) / (block * (1.0 - gamma)) + (1.0 - gamma);
}

MsvrState msvr_init(const Vec& initial_values, const Vec& x0, double gamma,
                    double gamma_prime, int block, bool gamma_prime_override,
                    bool allow_large_gamma) {
  if (gamma > 0.5 && !allow_large_gamma)
    throw Error("gamma_out_of_schedule",
                "gamma > 1/2 requires the explicit override flag");
  MsvrState s;
  s.u = initial_values;
  s.gamma = gamma;
  s.gamma_prime = gamma_prime;
  s.gamma_prime_override = gamma_prime_override;
  s.prev_point = x0;
  s.n_total = static_cast<int>(initial_values.size());
  s.block_size = block;
  return s;
}

void msvr_update(MsvrState& state, const BatchValues& batch, const Vec& x_t) {
  const std::size_t b = batch.indices.size();
  if (batch.at_current.size() != b || batch.at_prev.size() != b)
    throw Error("bad_batch_values", "index/value arity mismatch");
  if (batch.keys_current.size() != b || batch.keys_prev.size() != b)
    throw Error("bad_batch_values", "missing stream keys");
  for (std::size_t i = 0; i < b; ++i) {
    if (batch.keys_current[i] != batch.keys_prev[i])
      throw Error("batch_provenance_mismatch",
                  "current/previous values drawn from different mini-batches");
    int k = batch.indices[i];
    if (k < 0 || k >= state.n_total)
      throw Error("index_out_of_range", "touched index " + std::to_string(k));
    double vt = batch.at_current[i];
    double vp = batch.at_prev[i];
    state.u[k] = (1.0 - state.gamma) * state.u[k] + state.gamma * vt +
                 state.gamma_prime * (vt - vp);
  }
  state.prev_point = x_t;
}

TrackingError tracking_error(const MsvrState& state, const Vec& exact_values) {
  TrackingError e;
  const int n = state.n_total;
  for (int k = 0; k < n; ++k) {
    double d = state.u[k] - exact_values[k];
    e.mean_abs += std::abs(d);
    e.mean_sq += d * d;
  }
  e.mean_abs /= n;
  e.mean_sq /= n;
  return e;
}

}  // namespace hpo
