// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hpo/certify.hpp"
#include "hpo/instances.hpp"
#include "hpo/solver.hpp"

using namespace hpo;

namespace {

int g_failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

Vec v1(double x) { return Vec::Constant(1, x); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double tail_mean_violation(const RunResult& res) {
  const std::size_t n = res.records.size();
  const std::size_t start = n - n / 4;
  double sum = 0;
  int count = 0;
  for (std::size_t i = start; i < n; ++i) {
    sum += hinge(res.records[i].max_violation);
    ++count;
  }
  return sum / count;
}

// --------------------------------------------------------------------------

void criterion1() {
  auto prob = make_exemplar_1d(0.05);
  PenaltyObjective obj{&prob, 4.0, PenaltyKind::hinge};
  double worst_eps = 0, worst_feas = 0, worst_dist = 0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverConfig cfg;
    cfg.beta = 4.0;
    cfg.eta = 1e-3;
    cfg.T = 100000;
    cfg.seed = seed;
    cfg.stride = 500;
    cfg.output_rule = OutputRule::best_diagnostic;
    cfg.diag_prox_iters = 5000;
    auto res = solve_setting1(prob, cfg);
    auto cert = kkt_certificate(obj, res.output_x, 0, 400000, 1e-12, 1e-3);
    worst_eps = std::max(worst_eps, cert.certified_epsilon);
    worst_feas = std::max(worst_feas, hinge(cert.feasibility));
    worst_dist = std::max(worst_dist, std::abs(cert.x_bar[0] + std::numbers::sqrt2));
    ok = ok && !res.aborted;
  }
  ok = ok && worst_eps <= 0.15 && worst_feas <= 1e-2 && worst_dist <= 0.1;
  report(1, "noisy exemplar run certifies as a near-KKT point across 10 seeds", ok,
         "max certified eps " + fmt(worst_eps) + ", max feasibility " + fmt(worst_feas) +
             ", max |x_bar - x*| " + fmt(worst_dist));
}

void criterion2() {
  // Noise-free: the 1/beta violation law is a property of the deterministic
  // stationary balance, and oracle noise above the residual floor washes it
  // out (the tracker then sees positive values even at feasible points).
  auto prob = make_exemplar_1d(0.0);
  auto run_cell = [&](PenaltyKind kind, double beta) {
    SolverConfig cfg;
    cfg.kind = kind;
    cfg.beta = beta;
    // step size scaled with 1/beta so every cell stays well inside the
    // stability region of the squared penalty's curvature 2*beta*|h'|^2
    cfg.eta = 1e-3 * 4.0 / beta;
    cfg.T = 60000;
    cfg.seed = 7;  // shared stream family across all cells
    cfg.stride = 20;
    return solve_setting1(prob, cfg);
  };

  double hinge_tail = tail_mean_violation(run_cell(PenaltyKind::hinge, 4.0));

  std::vector<double> betas = {4.0, 16.0, 64.0};
  std::vector<double> sq_tails;
  for (double b : betas) sq_tails.push_back(tail_mean_violation(run_cell(PenaltyKind::squared_hinge, b)));

  bool decreasing = sq_tails[0] > sq_tails[1] && sq_tails[1] > sq_tails[2];
  // least-squares slope of log violation vs log beta
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    double x = std::log(betas[i]), y = std::log(sq_tails[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(betas.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  bool ok = hinge_tail <= 1e-2 && decreasing && slope >= -1.3 && slope <= -0.7;
  report(2, "constant-beta hinge vs 1/beta squared-hinge violation decay", ok,
         "hinge tail violation " + fmt(hinge_tail) + ", squared tails " +
             fmt(sq_tails[0]) + "/" + fmt(sq_tails[1]) + "/" + fmt(sq_tails[2]) +
             ", log-log slope " + fmt(slope));
}

void criterion3() {
  // Tracker dominance on a noisy 5-constraint quadratic with scheduled gamma/eta.
  const int m = 5, bc = 2, b2k = 4;
  ScheduleMultipliers mult{0.8, 0.04, 1.0};
  Schedule sched =
      schedule_from_theorem(ScheduleSetting::setting_one, 1.0, 2.0, 1, bc, 1, b2k, m, 1, mult);
  const double gamma = sched.gamma2;
  const double gp = msvr_gamma_prime(m, bc, gamma);

  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto prob = make_quadratic_instance(3, m, 21, 0.5);
    PenaltyObjective obj{&prob, 2.0, PenaltyKind::hinge};
    Vec x = *prob.strictly_feasible_point + Vec::Constant(3, 0.4);

    auto exact_h = [&](const Vec& pt) {
      Vec h(m);
      for (int k = 0; k < m; ++k) h[k] = prob.exact_constraints[k](pt).value;
      return h;
    };
    MsvrState tracker = msvr_init(exact_h(x), x, gamma, gp, bc);
    Vec naive = tracker.u;
    const long T = 400;
    double msvr_sum = 0, naive_sum = 0;
    for (long t = 0; t < T; ++t) {
      ConstraintBatch cb =
          draw_constraint_batch(prob, x, tracker.prev_point, bc, b2k, seed, t, nullptr);
      for (std::size_t i = 0; i < cb.indices.size(); ++i)
        naive[cb.indices[i]] = cb.val_current[i];
      msvr_update(tracker, to_batch_values(cb), x);
      x -= sched.eta * penalty_subgrad_exact(obj, x);  // slowly drifting iterate
      if (t >= T / 2) {
        Vec h = exact_h(tracker.prev_point);
        msvr_sum += (tracker.u - h).squaredNorm() / m;
        naive_sum += (naive - h).squaredNorm() / m;
      }
    }
    if (msvr_sum < naive_sum) ++wins;
  }

  // Frozen-iterate noise-free contraction of the mean absolute error.
  auto clean = make_quadratic_instance(3, m, 21, 0.0);
  Vec x0 = *clean.strictly_feasible_point;
  Vec exact0(m);
  for (int k = 0; k < m; ++k) exact0[k] = clean.exact_constraints[k](x0).value;
  MsvrState frozen = msvr_init(exact0 + Vec::Constant(m, 1.0), x0, gamma, gp, bc);
  double prev_err = 1.0, factor_sum = 0;
  const int steps = 400;
  for (int t = 0; t < steps; ++t) {
    ConstraintBatch cb = draw_constraint_batch(clean, x0, x0, bc, b2k, 99, t, nullptr);
    msvr_update(frozen, to_batch_values(cb), x0);
    double err = (frozen.u - exact0).cwiseAbs().mean();
    factor_sum += err / prev_err;
    prev_err = err;
  }
  double factor = factor_sum / steps;
  double predicted = 1.0 - static_cast<double>(bc) * gamma / m;
  bool contraction_ok = std::abs(factor / predicted - 1.0) <= 0.10;

  bool ok = wins >= 18 && contraction_ok;
  report(3, "variance-reduced tracking beats the plug-in estimator", ok,
         std::to_string(wins) + "/20 seeds, contraction " + fmt(factor) + " vs " +
             fmt(predicted));
}

void criterion4() {
  // (a) quadratic Moreau gradient closed form at 20 points
  ConstrainedProblem quad;
  quad.dimension = 1;
  quad.exact_objective = [](const Vec& x) { return EvalResult{0.5 * x[0] * x[0], v1(x[0])}; };
  quad.objective = StochasticOracle{1, 0.0, [](const Vec& x, SampleId) {
                                      return EvalResult{0.5 * x[0] * x[0], v1(x[0])};
                                    }};
  PenaltyObjective qobj{&quad, 0.0, PenaltyKind::hinge};
  rng::Prng prng(12);
  double max_err = 0;
  for (int i = 0; i < 20; ++i) {
    double x = 4.0 * prng.uniform() - 2.0;
    auto pr = prox_solve(qobj, v1(x), 1.0, 100000, 1e-12);
    max_err = std::max(max_err, std::abs(moreau_grad(v1(x), pr, 1.0)[0] - x / 2.0));
  }

  // (b) soft-threshold prox of |.|
  ConstrainedProblem absval;
  absval.dimension = 1;
  absval.exact_objective = [](const Vec& x) {
    return EvalResult{std::abs(x[0]), v1(sign0(x[0]))};
  };
  absval.objective = StochasticOracle{1, 0.0, [](const Vec& x, SampleId) {
                                        return EvalResult{std::abs(x[0]), v1(sign0(x[0]))};
                                      }};
  PenaltyObjective aobj{&absval, 0.0, PenaltyKind::hinge};
  auto soft = prox_solve(aobj, v1(0.5), 1.0, 300000, 1e-12);
  double soft_err = std::abs(soft.point[0]);

  // (c) dist bound on the exemplar hinge penalty in closed form: the prox of
  // x=2 is exactly sqrt(2) and dist(0, dPhi(sqrt(2))) = 1.
  auto prob = make_exemplar_1d(0.0);
  PenaltyObjective obj{&prob, 4.0, PenaltyKind::hinge};
  auto pr = prox_solve(obj, v1(2.0), 1.0 / 16.0, 400000, 1e-12);
  double prox_err = std::abs(pr.point[0] - std::numbers::sqrt2);
  double moreau_norm = moreau_grad(v1(2.0), pr, 1.0 / 16.0).norm();
  bool dist_ok = prox_err < 1e-4 && moreau_norm >= 1.0 - 1e-3;

  bool ok = max_err <= 1e-4 && soft_err <= 1e-3 && dist_ok;
  report(4, "Moreau envelope machinery matches closed forms", ok,
         "quad grad err " + fmt(max_err) + ", soft-threshold err " + fmt(soft_err) +
             ", exemplar prox err " + fmt(prox_err) + ", moreau norm " +
             fmt(moreau_norm));
}

void criterion5() {
  auto prob = make_fcco_instance(4, 2, FccoCondition::monotone, 31, 1, 0.1);
  PenaltyObjective obj{&prob, 8.0, PenaltyKind::hinge};
  double worst_eps = 0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverConfig cfg;
    cfg.beta = 8.0;
    cfg.eta = 1e-3;
    cfg.T = 30000;
    cfg.seed = seed;
    cfg.batch = 2;
    cfg.batch_1i = 4;
    cfg.batch_2k = 4;
    cfg.gamma1 = 0.2;
    cfg.gamma2 = 0.2;
    cfg.stride = 1000;
    cfg.x0 = *prob.strictly_feasible_point;
    auto res = solve_setting2(prob, cfg);
    ok = ok && !res.aborted;
    auto cert = kkt_certificate(obj, res.output_x, 0, 100000, 1e-12, 1e-3);
    worst_eps = std::max(worst_eps, cert.certified_epsilon);
  }
  ok = ok && worst_eps <= 0.2;

  // beta = 0 with never-active constraints bit-matches the penalized run
  SolverConfig ncfg;
  ncfg.beta = 8.0;
  ncfg.eta = 1e-4;
  ncfg.T = 200;
  ncfg.stride = 1;
  ncfg.seed = 5;
  ncfg.batch = 2;
  ncfg.batch_2k = 4;
  ncfg.x0 = *prob.strictly_feasible_point;
  auto penalized = solve_setting2(prob, ncfg);
  SolverConfig fcfg = ncfg;
  fcfg.beta = 0.0;
  auto unconstrained = solve_setting2(prob, fcfg);
  bool neutral = penalized.records.size() == unconstrained.records.size();
  if (neutral)
    for (std::size_t i = 0; i < penalized.records.size(); ++i)
      neutral = neutral &&
                (penalized.records[i].x.array() == unconstrained.records[i].x.array()).all();

  // the epsilon^-6 iteration-complexity relation, asserted symbolically
  auto s1 = schedule_from_theorem(ScheduleSetting::setting_two_monotone, 1.0, 1.0, 1, 1,
                                  1, 1, 1, 1, {});
  auto s2 = schedule_from_theorem(ScheduleSetting::setting_two_monotone, 0.5, 1.0, 1, 1,
                                  1, 1, 1, 1, {});
  bool schedule_ok = s2.T == 64 * s1.T;

  report(5, "compositional-objective solver certifies and stays neutral when inactive",
         ok && neutral && schedule_ok,
         "max certified eps " + fmt(worst_eps) + ", neutrality " +
             (neutral ? "exact" : "BROKEN") + ", T(eps/2)/T(eps) = " +
             std::to_string(s2.T / std::max(1L, s1.T)));
}

void criterion6() {
  auto prob = make_exemplar_1d(0.0);
  auto grid = [&](double r) {
    std::vector<Vec> pts;
    for (double x = -r; x <= r + 5e-4; x += 1e-3) pts.push_back(v1(x));
    return pts;
  };
  auto e4 = pl_regularity_estimate(prob, grid(4));
  auto e8 = pl_regularity_estimate(prob, grid(8));
  auto e16 = pl_regularity_estimate(prob, grid(16));
  bool refining = e4.mu_hat > e8.mu_hat && e8.mu_hat > e16.mu_hat;
  bool pl_ok = refining && std::abs(e16.mu_hat - 2.0) <= 0.02 * 2.0 &&
               std::abs(e16.c_hat - 1.0) <= 0.02 && std::abs(e16.delta_hat - 2.0) <= 0.04;

  // sigma_min positive at every violating snapshot of an exemplar run and a
  // quadratic run
  int checked = 0;
  bool frvp_ok = true;
  {
    auto noisy = make_exemplar_1d(0.05);
    SolverConfig cfg;
    cfg.beta = 4.0;
    cfg.eta = 1e-3;
    cfg.T = 20000;
    cfg.seed = 0;
    cfg.stride = 100;
    cfg.x0 = v1(2.0);
    auto res = solve_setting1(noisy, cfg);
    for (const auto& rec : res.records)
      if (rec.max_violation > 0) {
        auto fr = frvp_min_singular(noisy, rec.x);
        frvp_ok = frvp_ok && fr.any_violation && fr.sigma_min > 0 && !fr.rank_deficient;
        ++checked;
      }
  }
  {
    auto quad = make_quadratic_instance(3, 5, 21, 0.1);
    SolverConfig cfg;
    cfg.beta = 2.0;
    cfg.eta = 1e-3;
    cfg.T = 20000;
    cfg.seed = 1;
    cfg.stride = 100;
    cfg.batch_c = 2;
    cfg.batch_2k = 4;
    cfg.x0 = *quad.strictly_feasible_point + Vec::Constant(3, 0.4);
    auto res = solve_setting1(quad, cfg);
    for (const auto& rec : res.records)
      if (rec.max_violation > 0) {
        auto fr = frvp_min_singular(quad, rec.x);
        frvp_ok = frvp_ok && fr.any_violation && fr.sigma_min > 0;
        ++checked;
      }
  }

  report(6, "regularity diagnostics recover the analytic constants", pl_ok && frvp_ok,
         "mu " + fmt(e16.mu_hat) + ", c " + fmt(e16.c_hat) + ", delta " +
             fmt(e16.delta_hat) + ", " + std::to_string(checked) +
             " violating snapshots all full rank: " + (frvp_ok ? "yes" : "NO"));
}

void criterion7() {
  auto d = slack_counterexample();
  bool ok = d.stationarity <= 1e-12 && d.min_lambda < 0 && !d.is_kkt_for_original &&
            d.directional_derivative < 0 &&
            std::abs(d.perturbation_residual_change - 2.0 * std::numbers::sqrt2 * 1e-3) <
                1e-5;
  report(7, "squared-slack reformulation yields a spurious stationary point", ok,
         "stationarity " + fmt(d.stationarity) + ", min multiplier " + fmt(d.min_lambda) +
             ", descent derivative " + fmt(d.directional_derivative));
}

void criterion8() {
  auto prob =
      make_fairness_instance(500, {-3, -2, -1, 0, 1, 2, 3}, 0.005, 11);
  SolverConfig cfg;
  cfg.beta = 20.0;
  cfg.eta = 1e-3;
  cfg.T = 20000;
  cfg.seed = 2;
  cfg.batch = 8;
  cfg.batch_c = 14;
  cfg.batch_2k = 8;
  cfg.gamma2 = 0.1;
  cfg.stride = 1000;
  auto res = solve_setting1(prob, cfg);

  FullEval fe = exact_full_eval(prob, res.output_x);
  double max_h = fe.h.maxCoeff();
  double gap = fe.F - *prob.unconstrained_objective;
  bool ok = !res.aborted && max_h <= 1e-3 && gap <= 0.05;
  report(8, "fairness-constrained ranking run satisfies all gap constraints", ok,
         "max constraint " + fmt(max_h) + " (14 constraints), surrogate gap " +
             fmt(gap));
}

void criterion9() {
  // identical-seed bit reproducibility on a noisy run
  auto prob = make_exemplar_1d(0.1);
  SolverConfig cfg;
  cfg.beta = 4.0;
  cfg.eta = 1e-3;
  cfg.T = 5000;
  cfg.seed = 77;
  cfg.stride = 10;
  cfg.audit_streams = true;
  auto a = solve_setting1(prob, cfg);
  auto b = solve_setting1(prob, cfg);
  bool deterministic = a.records.size() == b.records.size() &&
                       (a.x_final.array() == b.x_final.array()).all();
  if (deterministic)
    for (std::size_t i = 0; i < a.records.size(); ++i)
      deterministic =
          deterministic && (a.records[i].x.array() == b.records[i].x.array()).all();

  // one-batch-per-draw discipline
  std::set<std::uint64_t> uniq(a.consumed_keys.begin(), a.consumed_keys.end());
  bool one_draw = uniq.size() == a.consumed_keys.size() && !a.consumed_keys.empty();

  // G2 unbiasedness within 3 standard errors over 1000 fresh streams
  auto quad = make_quadratic_instance(2, 4, 3, 0.3);
  Vec x = Vec::Constant(2, 1.7);
  Vec u(4);
  u << 0.5, -0.2, 1.0, 0.1;
  MsvrState tr = msvr_init(u, x, 0.5, msvr_gamma_prime(4, 2, 0.5), 2);
  const double beta = 3.0;
  FullEval fe = exact_full_eval(quad, x);
  Vec expect = Vec::Zero(2);
  for (int k = 0; k < 4; ++k)
    expect += hinge_subgrad(u[k]) * fe.jacobian.row(k).transpose();
  expect *= beta / 4.0;
  const int trials = 1000;
  Mat samples(trials, 2);
  for (int t = 0; t < trials; ++t)
    samples.row(t) =
        penalty_grad_estimate(quad, tr, x, beta, PenaltyKind::hinge, 2, 2, 991, t)
            .g2.transpose();
  bool unbiased = true;
  for (int i = 0; i < 2; ++i) {
    double mean = samples.col(i).mean();
    double var = (samples.col(i).array() - mean).square().mean();
    double se = std::sqrt(var / trials);
    unbiased = unbiased && std::abs(mean - expect[i]) <= 3.0 * se + 1e-12;
  }

  bool ok = deterministic && one_draw && unbiased;
  report(9, "determinism, stream discipline and estimator unbiasedness", ok,
         std::string("bit-identical ") + (deterministic ? "yes" : "NO") +
             ", unique keys " + (one_draw ? "yes" : "NO") + ", unbiased " +
             (unbiased ? "yes" : "NO"));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/9 criteria passed in %.1fs\n", 9 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
