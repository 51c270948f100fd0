#include "hpo/oracle.hpp"

#include <nlohmann/json.hpp>

namespace hpo {

EvalResult eval(const StochasticOracle& oracle, const Vec& x, int batch_size,
                const rng::StreamKey& stream) {
  if (batch_size < 1) throw Error("bad_batch_size", "batch_size must be >= 1");
  if (x.size() != oracle.dimension)
    throw Error("dimension_mismatch",
                "point has dimension " + std::to_string(x.size()) + ", oracle expects " +
                    std::to_string(oracle.dimension));
  const std::uint64_t base = stream.hash();
  double value = 0;
  Vec subgrad = Vec::Zero(oracle.dimension);
  for (int j = 0; j < batch_size; ++j) {
    SampleId id{rng::mix(base, static_cast<std::uint64_t>(j))};
    EvalResult r = oracle.evaluator(x, id);
    value += r.value;
    subgrad += r.subgrad;
  }
  value /= batch_size;
  subgrad /= batch_size;
  return {value, std::move(subgrad)};
}

bool FccoObjective::condition_monotone() const {
  bool any_mono = false, any_smooth = false;
  for (const auto& f : outer) {
    if (f.monotone_nondecreasing) any_mono = true;
    if (f.smooth) any_smooth = true;
  }
  if (any_mono && any_smooth)
    throw Error("mixed_outer_tagging",
                "outer functions must be all monotone+weakly-convex or all smooth");
  if (!any_mono && !any_smooth)
    throw Error("untagged_outer", "outer functions carry neither condition tag");
  return any_mono;
}

FullEval exact_full_eval(const ConstrainedProblem& problem, const Vec& x) {
  if (!problem.has_exact())
    throw Error("missing_exact_evaluators", "problem carries no exact evaluators");
  FullEval out;
  EvalResult fo = (*problem.exact_objective)(x);
  out.F = fo.value;
  out.grad_F = fo.subgrad;
  const int m = problem.num_constraints();
  out.h = Vec::Zero(m);
  out.jacobian = Mat::Zero(m, problem.dimension);
  for (int k = 0; k < m; ++k) {
    EvalResult hk = problem.exact_constraints[k](x);
    out.h[k] = hk.value;
    out.jacobian.row(k) = hk.subgrad.transpose();
  }
  return out;
}

}  // namespace hpo
