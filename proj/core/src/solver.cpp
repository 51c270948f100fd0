#include "hpo/solver.hpp"

#include <chrono>
#include <cmath>

#include "hpo/certify.hpp"

namespace hpo {

namespace {

// Selector streams live outside the oracle-id range so subset draws never
// collide with sample draws.
constexpr std::uint32_t kSelectConstraints = 0xfffffffeu;
constexpr std::uint32_t kSelectInner = 0xfffffffdu;
constexpr std::uint32_t kSelectOutput = 0xfffffffcu;

void push_key(std::vector<std::uint64_t>* audit, std::uint64_t key) {
  if (audit) audit->push_back(key);
}

double xi_of(double u, PenaltyKind kind) {
  return kind == PenaltyKind::hinge ? hinge_subgrad(u) : 2.0 * hinge(u);
}

std::vector<int> pick_subset(std::uint64_t seed, std::uint32_t selector, long t, int n,
                             int k) {
  rng::Prng prng(rng::StreamKey{seed, selector, static_cast<std::uint64_t>(t), 0}.hash());
  return prng.sample_subset(n, k);
}

}  // namespace

Schedule schedule_from_theorem(ScheduleSetting setting, double epsilon, double beta,
                               int batch, int batch_c, int batch_1i, int batch_2k,
                               int m, int n, const ScheduleMultipliers& mult) {
  if (epsilon <= 0 || beta <= 0)
    throw Error("bad_schedule", "epsilon and beta must be positive");
  const double e2 = epsilon * epsilon, e4 = e2 * e2, e6 = e4 * e2;
  const double b2 = beta * beta, b3 = b2 * beta, b4 = b2 * b2, b5 = b4 * beta,
               b6 = b4 * b2;
  const double s1 = std::sqrt(static_cast<double>(batch_1i));
  const double s2 = std::sqrt(static_cast<double>(batch_2k));
  Schedule out;
  double T_real = 0;
  switch (setting) {
    case ScheduleSetting::setting_one:
      out.gamma2 = mult.c_gamma * batch_2k * e4 / b4;
      out.gamma1 = 0;
      out.eta = mult.c_eta * batch_c * s2 * e4 / (b5 * m);
      T_real = mult.c_T * b6 * m / (batch_c * s2 * e6);
      break;
    case ScheduleSetting::setting_two_monotone: {
      out.gamma2 = mult.c_gamma *
                   std::min(static_cast<double>(batch_1i), batch_2k / b2) * e4 / b2;
      out.gamma1 = out.gamma2;
      out.eta = mult.c_eta *
                std::min(static_cast<double>(batch) / n, batch_c / (beta * m)) *
                std::min(s1, s2 / beta) * e4 / b3;
      T_real = mult.c_T * std::max({beta / s1, b2 / s2, 1.0 / batch_1i}) *
               std::max(static_cast<double>(n) / batch, beta * m / batch_c) * b3 / e6;
      break;
    }
    case ScheduleSetting::setting_two_smooth: {
      out.gamma2 = mult.c_gamma * std::min(batch_2k * e4 / b4, batch_1i * e2 / beta);
      out.gamma1 = out.gamma2;
      out.eta = mult.c_eta * std::min(batch * s1 * e2 / (n * b2),
                                      batch_c * s2 * e4 / (b5 * m));
      T_real = mult.c_T * std::max({m * b6 / (s2 * batch_c * e6),
                                    n * b3 / (batch * s1 * e4),
                                    n * b2 / (static_cast<double>(batch) * batch_1i * e4)});
      break;
    }
  }
  if (out.gamma2 <= 0 || out.eta <= 0)
    throw Error("bad_schedule", "derived gamma or eta is nonpositive");
  if (out.gamma2 > 0.5) {
    out.gamma2 = 0.5;
    out.gamma_clamped = true;
  }
  if (out.gamma1 > 0.5) {
    out.gamma1 = 0.5;
    out.gamma_clamped = true;
  }
  out.T = static_cast<long>(std::ceil(T_real));
  return out;
}

ConstraintBatch draw_constraint_batch(const ConstrainedProblem& problem, const Vec& x_t,
                                      const Vec& x_prev, int batch_c, int batch_2k,
                                      std::uint64_t seed, long t,
                                      std::vector<std::uint64_t>* audit) {
  const int m = problem.num_constraints();
  if (batch_c < 1 || batch_c > m)
    throw Error("bad_batch_size", "|B_c| must lie in [1, m]");
  ConstraintBatch cb;
  std::vector<int> picked = pick_subset(seed, kSelectConstraints, t, m, batch_c);
  const bool nested = !problem.nested.empty();
  for (int k : picked) {
    const int sides = nested ? 2 : 1;
    for (int side = 0; side < sides; ++side) {
      const StochasticOracle& oracle =
          nested ? problem.nested[k].inner[side] : problem.constraints[k];
      const std::uint32_t oid = nested
                                    ? oracle_ids::nested_base + 2 * k + side
                                    : oracle_ids::constraint_base + k;
      rng::StreamKey key{seed, oid, static_cast<std::uint64_t>(t), 0};
      EvalResult at_t = eval(oracle, x_t, batch_2k, key);
      EvalResult at_prev = eval(oracle, x_prev, batch_2k, key);
      cb.indices.push_back(nested ? 2 * k + side : k);
      cb.val_current.push_back(at_t.value);
      cb.val_prev.push_back(at_prev.value);
      cb.subgrad_current.push_back(std::move(at_t.subgrad));
      cb.keys.push_back(key.hash());
      push_key(audit, key.hash());
    }
  }
  return cb;
}

BatchValues to_batch_values(const ConstraintBatch& cb) {
  BatchValues bv;
  bv.indices = cb.indices;
  bv.at_current = cb.val_current;
  bv.at_prev = cb.val_prev;
  bv.keys_current = cb.keys;
  bv.keys_prev = cb.keys;
  return bv;
}

Vec nested_constraint_grad(const NestedAbsHingeConstraint& constraint, double u1,
                           double u2, const Vec& grad1, const Vec& grad2,
                           PenaltyKind kind) {
  double gap = u1 - u2;
  double xi = xi_of(std::abs(gap) - constraint.kappa, kind);
  double s = sign0(gap);
  if (xi == 0 || s == 0) return Vec::Zero(grad1.size());
  return (xi * s) * (grad1 - grad2);
}

Vec g2_from_batch(const ConstrainedProblem& problem, const ConstraintBatch& cb,
                  const Vec& u, double beta, PenaltyKind kind) {
  Vec g = Vec::Zero(problem.dimension);
  if (problem.nested.empty()) {
    const int bc = static_cast<int>(cb.indices.size());
    for (int i = 0; i < bc; ++i) {
      double xi = xi_of(u[cb.indices[i]], kind);
      if (xi != 0) g += xi * cb.subgrad_current[i];
    }
    if (bc > 0) g *= beta / bc;
  } else {
    const int bc = static_cast<int>(cb.indices.size()) / 2;
    for (int i = 0; i < bc; ++i) {
      int i1 = 2 * i, i2 = 2 * i + 1;
      int k = cb.indices[i1] / 2;
      g += nested_constraint_grad(problem.nested[k], u[cb.indices[i1]],
                                  u[cb.indices[i2]], cb.subgrad_current[i1],
                                  cb.subgrad_current[i2], kind);
    }
    if (bc > 0) g *= beta / bc;
  }
  return g;
}

PenaltyGradEstimate penalty_grad_estimate(const ConstrainedProblem& problem,
                                          const MsvrState& constraints_tracker,
                                          const Vec& x_t, double beta, PenaltyKind kind,
                                          int batch_c, int batch_2k, std::uint64_t seed,
                                          long t, std::vector<std::uint64_t>* audit) {
  PenaltyGradEstimate out;
  out.batch = draw_constraint_batch(problem, x_t, constraints_tracker.prev_point,
                                    batch_c, batch_2k, seed, t, audit);
  out.g2 = g2_from_batch(problem, out.batch, constraints_tracker.u, beta, kind);
  return out;
}

Vec objective_grad_setting1(const ConstrainedProblem& problem, const Vec& x_t, int batch,
                            std::uint64_t seed, long t,
                            std::vector<std::uint64_t>* audit) {
  if (!problem.objective)
    throw Error("missing_objective", "Setting-I objective oracle is absent");
  rng::StreamKey key{seed, oracle_ids::objective, static_cast<std::uint64_t>(t), 0};
  push_key(audit, key.hash());
  return eval(*problem.objective, x_t, batch, key).subgrad;
}

InnerBatch draw_inner_batch(const FccoObjective& fcco, int m_constraints, const Vec& x_t,
                            const Vec& x_prev, int batch, int batch_1i,
                            std::uint64_t seed, long t,
                            std::vector<std::uint64_t>* audit) {
  if (batch < 1 || batch > fcco.n)
    throw Error("bad_batch_size", "|B| must lie in [1, n]");
  InnerBatch ib;
  std::vector<int> picked = pick_subset(seed, kSelectInner, t, fcco.n, batch);
  const std::uint32_t base = oracle_ids::inner_base(m_constraints);
  for (int i : picked) {
    rng::StreamKey key{seed, base + static_cast<std::uint32_t>(i),
                       static_cast<std::uint64_t>(t), 0};
    EvalResult at_t = eval(fcco.inner[i], x_t, batch_1i, key);
    EvalResult at_prev = eval(fcco.inner[i], x_prev, batch_1i, key);
    ib.indices.push_back(i);
    ib.val_current.push_back(at_t.value);
    ib.val_prev.push_back(at_prev.value);
    ib.subgrad_current.push_back(std::move(at_t.subgrad));
    ib.keys.push_back(key.hash());
    push_key(audit, key.hash());
  }
  return ib;
}

Vec g1_from_inner_batch(const FccoObjective& fcco, const InnerBatch& ib, const Vec& u1) {
  Vec g = Vec::Zero(fcco.dimension);
  const int b = static_cast<int>(ib.indices.size());
  for (int j = 0; j < b; ++j) {
    int i = ib.indices[j];
    double fp = fcco.outer[i].subgrad(u1[i]);
    if (fcco.outer[i].monotone_nondecreasing && fp < 0)
      throw Error("negative_monotone_subgrad",
                  "outer function " + std::to_string(i) +
                      " declared monotone returned a negative subgradient");
    g += fp * ib.subgrad_current[j];
  }
  if (b > 0) g /= b;
  return g;
}

ObjectiveGradEstimate objective_grad_setting2(const FccoObjective& fcco,
                                              int m_constraints,
                                              const MsvrState& inner_tracker,
                                              const Vec& x_t, int batch, int batch_1i,
                                              std::uint64_t seed, long t,
                                              std::vector<std::uint64_t>* audit) {
  ObjectiveGradEstimate out;
  out.batch = draw_inner_batch(fcco, m_constraints, x_t, inner_tracker.prev_point,
                               batch, batch_1i, seed, t, audit);
  out.g1 = g1_from_inner_batch(fcco, out.batch, inner_tracker.u);
  return out;
}

namespace {

BatchValues inner_to_batch_values(const InnerBatch& ib) {
  BatchValues bv;
  bv.indices = ib.indices;
  bv.at_current = ib.val_current;
  bv.at_prev = ib.val_prev;
  bv.keys_current = ib.keys;
  bv.keys_prev = ib.keys;
  return bv;
}

// Initial tracker values from a dedicated draw (draw index 1) at x0.
MsvrState init_constraint_tracker(const ConstrainedProblem& problem, const Vec& x0,
                                  const SolverConfig& config,
                                  std::vector<std::uint64_t>* audit) {
  const int m = problem.num_constraints();
  const bool nested = !problem.nested.empty();
  const int n_total = nested ? 2 * m : m;
  Vec u0(n_total);
  for (int k = 0; k < m; ++k) {
    const int sides = nested ? 2 : 1;
    for (int side = 0; side < sides; ++side) {
      const StochasticOracle& oracle =
          nested ? problem.nested[k].inner[side] : problem.constraints[k];
      const std::uint32_t oid = nested
                                    ? oracle_ids::nested_base + 2 * k + side
                                    : oracle_ids::constraint_base + k;
      rng::StreamKey key{config.seed, oid, 0, 1};
      u0[nested ? 2 * k + side : k] = eval(oracle, x0, config.batch_2k, key).value;
      push_key(audit, key.hash());
    }
  }
  double gp = config.gamma2_prime
                  ? *config.gamma2_prime
                  : msvr_gamma_prime(m, config.batch_c, config.gamma2);
  return msvr_init(u0, x0, config.gamma2, gp, config.batch_c,
                   config.gamma2_prime.has_value(), config.allow_large_gamma);
}

MsvrState init_inner_tracker(const FccoObjective& fcco, int m_constraints, const Vec& x0,
                             const SolverConfig& config,
                             std::vector<std::uint64_t>* audit) {
  Vec u0(fcco.n);
  const std::uint32_t base = oracle_ids::inner_base(m_constraints);
  for (int i = 0; i < fcco.n; ++i) {
    rng::StreamKey key{config.seed, base + static_cast<std::uint32_t>(i), 0, 1};
    u0[i] = eval(fcco.inner[i], x0, config.batch_1i, key).value;
    push_key(audit, key.hash());
  }
  double gp = config.gamma1_prime
                  ? *config.gamma1_prime
                  : msvr_gamma_prime(fcco.n, config.batch, config.gamma1);
  return msvr_init(u0, x0, config.gamma1, gp, config.batch,
                   config.gamma1_prime.has_value(), config.allow_large_gamma);
}

Vec exact_tracked_constraint_values(const ConstrainedProblem& problem, const Vec& x) {
  if (problem.nested.empty()) {
    Vec v(static_cast<int>(problem.exact_constraints.size()));
    for (int k = 0; k < v.size(); ++k) v[k] = problem.exact_constraints[k](x).value;
    return v;
  }
  Vec v(2 * static_cast<int>(problem.nested.size()));
  for (int k = 0; k < static_cast<int>(problem.nested.size()); ++k)
    for (int side = 0; side < 2; ++side)
      v[2 * k + side] = problem.nested[k].exact_inner[side](x).value;
  return v;
}

struct LoopContext {
  const ConstrainedProblem* problem = nullptr;
  const SolverConfig* config = nullptr;
  bool setting2 = false;
  MsvrState constraints_tracker;
  MsvrState inner_tracker;  // setting 2 only
  std::vector<std::uint64_t>* audit = nullptr;
};

void record_snapshot(const LoopContext& ctx, long t, const Vec& x, double g1n,
                     double g2n, RunResult& result) {
  const ConstrainedProblem& p = *ctx.problem;
  const SolverConfig& c = *ctx.config;
  TrajectoryRecord rec;
  rec.t = t;
  rec.x = x;
  rec.g1_norm = g1n;
  rec.g2_norm = g2n;
  rec.eta = c.eta;
  if (p.has_exact()) {
    FullEval fe = exact_full_eval(p, x);
    rec.f_exact = fe.F;
    rec.max_violation = fe.h.size() ? fe.h.maxCoeff() : 0.0;
    const int m = static_cast<int>(fe.h.size());
    double pen = 0;
    for (int k = 0; k < m; ++k) {
      double hv = hinge(fe.h[k]);
      pen += (c.kind == PenaltyKind::hinge) ? hv : hv * hv;
    }
    rec.phi_exact = fe.F + (m > 0 ? c.beta / m * pen : 0.0);
    bool inner_exact = true;
    if (p.nested.empty()) {
      inner_exact = static_cast<int>(p.exact_constraints.size()) == p.num_constraints();
    } else {
      for (const auto& nc : p.nested)
        inner_exact = inner_exact && nc.exact_inner[0] && nc.exact_inner[1];
    }
    if (inner_exact) {
      TrackingError te =
          tracking_error(ctx.constraints_tracker, exact_tracked_constraint_values(p, x));
      rec.tracker_mean_abs_constraints = te.mean_abs;
      rec.tracker_mean_sq_constraints = te.mean_sq;
    }
    if (ctx.setting2 && p.fcco &&
        static_cast<int>(p.fcco->exact_inner.size()) == p.fcco->n) {
      Vec exact_u(p.fcco->n);
      for (int i = 0; i < p.fcco->n; ++i) exact_u[i] = p.fcco->exact_inner[i](x).value;
      TrackingError te = tracking_error(ctx.inner_tracker, exact_u);
      rec.tracker_mean_abs_inner = te.mean_abs;
      rec.tracker_mean_sq_inner = te.mean_sq;
    }
  }
  result.records.push_back(std::move(rec));
}

RunResult run_loop(const ConstrainedProblem& problem, const SolverConfig& config,
                   bool setting2) {
  const auto t_start = std::chrono::steady_clock::now();
  const int dim = problem.dimension;
  if (config.eta <= 0 && config.T > 0)
    throw Error("bad_config", "eta must be positive");
  if (config.T < 0) throw Error("bad_config", "T must be nonnegative");
  if (config.batch < 1 || config.batch_c < 1 || config.batch_1i < 1 ||
      config.batch_2k < 1)
    throw Error("bad_batch_size", "batch sizes must be positive");
  if (setting2 && !problem.fcco)
    throw Error("missing_objective", "Setting-II objective is absent");
  const int m = problem.num_constraints();
  if (config.batch_c > m) throw Error("bad_batch_size", "|B_c| must lie in [1, m]");

  Vec x;
  if (config.x0.size() == 0) {
    x = Vec::Zero(dim);
  } else if (config.x0.size() == dim) {
    x = config.x0;
  } else {
    throw Error("dimension_mismatch", "x0 dimension does not match the instance");
  }

  RunResult result;
  std::vector<std::uint64_t>* audit =
      config.audit_streams ? &result.consumed_keys : nullptr;

  if (problem.constants.delta > 0 && config.beta > 0) {
    double lb = beta_lower_bound(config.epsilon_target, problem.constants.L_F,
                                 problem.constants.delta);
    result.beta_warning = !(config.beta > lb);
  }

  LoopContext ctx;
  ctx.problem = &problem;
  ctx.config = &config;
  ctx.setting2 = setting2;
  ctx.audit = audit;
  ctx.constraints_tracker = init_constraint_tracker(problem, x, config, audit);
  if (setting2) ctx.inner_tracker = init_inner_tracker(*problem.fcco, m, x, config, audit);

  const long T = config.T;
  const long stride = config.stride > 0 ? config.stride : std::max(1L, T / 1000);
  record_snapshot(ctx, 0, x, 0, 0, result);

  const double radius_cap =
      problem.constants.box_radius > 0
          ? config.divergence_radius_factor * problem.constants.box_radius
          : std::numeric_limits<double>::infinity();

  for (long t = 0; t < T; ++t) {
    Vec g1;
    if (setting2) {
      InnerBatch ib = draw_inner_batch(*problem.fcco, m, x,
                                       ctx.inner_tracker.prev_point, config.batch,
                                       config.batch_1i, config.seed, t, audit);
      if (config.g2_after_tracker_update) {
        msvr_update(ctx.inner_tracker, inner_to_batch_values(ib), x);
        g1 = g1_from_inner_batch(*problem.fcco, ib, ctx.inner_tracker.u);
      } else {
        g1 = g1_from_inner_batch(*problem.fcco, ib, ctx.inner_tracker.u);
        msvr_update(ctx.inner_tracker, inner_to_batch_values(ib), x);
      }
    } else {
      g1 = objective_grad_setting1(problem, x, config.batch, config.seed, t, audit);
    }

    Vec g2 = Vec::Zero(dim);
    if (config.beta != 0 && m > 0) {
      ConstraintBatch cb =
          draw_constraint_batch(problem, x, ctx.constraints_tracker.prev_point,
                                config.batch_c, config.batch_2k, config.seed, t, audit);
      if (config.g2_after_tracker_update) {
        msvr_update(ctx.constraints_tracker, to_batch_values(cb), x);
        g2 = g2_from_batch(problem, cb, ctx.constraints_tracker.u, config.beta,
                           config.kind);
      } else {
        g2 = g2_from_batch(problem, cb, ctx.constraints_tracker.u, config.beta,
                           config.kind);
        msvr_update(ctx.constraints_tracker, to_batch_values(cb), x);
      }
    } else if (m > 0) {
      // beta = 0: keep the tracker stream alive so runs stay comparable,
      // but neither draw nor move anything.
      ctx.constraints_tracker.prev_point = x;
    }

    x -= config.eta * (g1 + g2);
    result.iterations = t + 1;

    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > radius_cap) {
      result.aborted = true;
      result.abort_reason = !x.allFinite() ? "non_finite_iterate" : "divergence_guard";
      record_snapshot(ctx, t + 1, x, g1.norm(), g2.norm(), result);
      break;
    }
    if ((t + 1) % stride == 0 || t + 1 == T)
      record_snapshot(ctx, t + 1, x, g1.norm(), g2.norm(), result);
  }

  result.x_final = x;
  auto [t_hat, x_hat] = select_output(problem, config, result.records);
  result.output_t = t_hat;
  result.output_x = x_hat;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace

RunResult solve_setting1(const ConstrainedProblem& problem, const SolverConfig& config) {
  if (!problem.objective)
    throw Error("missing_objective", "Setting-I objective oracle is absent");
  return run_loop(problem, config, false);
}

RunResult solve_setting2(const ConstrainedProblem& problem, const SolverConfig& config) {
  return run_loop(problem, config, true);
}

std::pair<long, Vec> select_output(const ConstrainedProblem& problem,
                                   const SolverConfig& config,
                                   const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw Error("empty_trajectory", "no records to select from");
  if (records.size() == 1 || config.output_rule == OutputRule::final) {
    const auto& r = records.back();
    return {r.t, r.x};
  }
  if (config.output_rule == OutputRule::uniform_random) {
    rng::Prng prng(rng::StreamKey{config.seed, kSelectOutput, 0, 0}.hash());
    // t = 0 is the initial point; the theorem draws from {1, ..., T}
    int idx = 1 + prng.uniform_int(static_cast<int>(records.size()) - 1);
    return {records[idx].t, records[idx].x};
  }
  // best_diagnostic: Moreau gradient norm plus positive-part violation.
  if (!problem.has_exact())
    throw Error("missing_exact_evaluators",
                "best_diagnostic selection needs exact evaluators");
  PenaltyObjective obj{&problem, config.beta, config.kind};
  DerivedConstants dc = derived_constants(obj);
  double theta = config.theta > 0 ? config.theta : dc.theta_default;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    ProxResult pr = prox_solve(obj, records[i].x, theta, config.diag_prox_iters,
                               config.diag_prox_tol);
    double score = moreau_grad(records[i].x, pr, theta).norm() +
                   hinge(records[i].max_violation);
    if (score < best) {
      best = score;
      best_i = i;
    }
  }
  return {records[best_i].t, records[best_i].x};
}

}  // namespace hpo
