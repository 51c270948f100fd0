#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hpo/msvr.hpp"
#include "hpo/oracle.hpp"
#include "hpo/penalty.hpp"

namespace hpo {

enum class OutputRule { uniform_random, best_diagnostic, final };

struct ScheduleMultipliers {
  double c_gamma = 1.0;
  double c_eta = 1.0;
  double c_T = 1.0;
};

enum class ScheduleSetting { setting_one, setting_two_monotone, setting_two_smooth };

struct Schedule {
  double gamma1 = 0;
  double gamma2 = 0;
  double eta = 0;
  long T = 0;
  bool gamma_clamped = false;
};

Schedule schedule_from_theorem(ScheduleSetting setting, double epsilon, double beta,
                               int batch, int batch_c, int batch_1i, int batch_2k,
                               int m, int n, const ScheduleMultipliers& mult = {});

struct SolverConfig {
  double beta = 1.0;
  PenaltyKind kind = PenaltyKind::hinge;
  double eta = 1e-3;
  long T = 1000;
  std::uint64_t seed = 0;
  double gamma1 = 0.5;
  double gamma2 = 0.5;
  std::optional<double> gamma1_prime;  // overrides the closed form when set
  std::optional<double> gamma2_prime;
  bool allow_large_gamma = false;
  int batch = 1;        // |B|
  int batch_c = 1;      // |B_c|
  int batch_1i = 1;     // |B_{1,i}|
  int batch_2k = 1;     // |B_{2,k}|
  OutputRule output_rule = OutputRule::final;
  long stride = 0;  // 0 -> max(1, T/1000)
  bool g2_after_tracker_update = false;
  bool audit_streams = false;
  Vec x0;  // empty -> zeros
  double divergence_radius_factor = 10.0;
  double epsilon_target = 0.1;  // for the beta lower-bound warning
  double theta = 0;             // 0 -> 1/(2C)
  int diag_prox_iters = 2000;
  double diag_prox_tol = 1e-8;
};

struct TrajectoryRecord {
  long t = 0;
  Vec x;
  double phi_exact = std::numeric_limits<double>::quiet_NaN();
  double f_exact = std::numeric_limits<double>::quiet_NaN();
  double max_violation = std::numeric_limits<double>::quiet_NaN();
  double g1_norm = 0;
  double g2_norm = 0;
  double tracker_mean_abs_constraints = std::numeric_limits<double>::quiet_NaN();
  double tracker_mean_sq_constraints = std::numeric_limits<double>::quiet_NaN();
  double tracker_mean_abs_inner = std::numeric_limits<double>::quiet_NaN();
  double tracker_mean_sq_inner = std::numeric_limits<double>::quiet_NaN();
  double eta = 0;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  Vec x_final;
  long iterations = 0;
  bool aborted = false;
  std::string abort_reason;
  long output_t = 0;
  Vec output_x;
  bool beta_warning = false;
  double wall_seconds = 0;
  std::vector<std::uint64_t> consumed_keys;  // filled when audit_streams
};

// One draw of the constraint mini-batches for iteration t: values at x_t and
// x_prev on the same batch, plus batch-mean subgradients at x_t.
struct ConstraintBatch {
  std::vector<int> indices;  // tracker indices touched
  std::vector<double> val_current;
  std::vector<double> val_prev;
  std::vector<Vec> subgrad_current;
  std::vector<std::uint64_t> keys;
};

ConstraintBatch draw_constraint_batch(const ConstrainedProblem& problem, const Vec& x_t,
                                      const Vec& x_prev, int batch_c, int batch_2k,
                                      std::uint64_t seed, long t,
                                      std::vector<std::uint64_t>* audit);

BatchValues to_batch_values(const ConstraintBatch& cb);

// G2 from tracked estimates (Eq.-(8)-style; squared hinge uses 2[u]_+).
Vec g2_from_batch(const ConstrainedProblem& problem, const ConstraintBatch& cb,
                  const Vec& u, double beta, PenaltyKind kind);

struct PenaltyGradEstimate {
  Vec g2;
  ConstraintBatch batch;
};

PenaltyGradEstimate penalty_grad_estimate(const ConstrainedProblem& problem,
                                          const MsvrState& constraints_tracker,
                                          const Vec& x_t, double beta, PenaltyKind kind,
                                          int batch_c, int batch_2k, std::uint64_t seed,
                                          long t, std::vector<std::uint64_t>* audit = nullptr);

Vec objective_grad_setting1(const ConstrainedProblem& problem, const Vec& x_t, int batch,
                            std::uint64_t seed, long t,
                            std::vector<std::uint64_t>* audit = nullptr);

struct InnerBatch {
  std::vector<int> indices;
  std::vector<double> val_current;
  std::vector<double> val_prev;
  std::vector<Vec> subgrad_current;
  std::vector<std::uint64_t> keys;
};

InnerBatch draw_inner_batch(const FccoObjective& fcco, int m_constraints, const Vec& x_t,
                            const Vec& x_prev, int batch, int batch_1i,
                            std::uint64_t seed, long t,
                            std::vector<std::uint64_t>* audit);

Vec g1_from_inner_batch(const FccoObjective& fcco, const InnerBatch& ib, const Vec& u1);

struct ObjectiveGradEstimate {
  Vec g1;
  InnerBatch batch;
};

ObjectiveGradEstimate objective_grad_setting2(const FccoObjective& fcco, int m_constraints,
                                              const MsvrState& inner_tracker,
                                              const Vec& x_t, int batch, int batch_1i,
                                              std::uint64_t seed, long t,
                                              std::vector<std::uint64_t>* audit = nullptr);

// Chain rule through hinge(|u1 - u2| - kappa) with tracked inner means.
Vec nested_constraint_grad(const NestedAbsHingeConstraint& constraint, double u1,
                           double u2, const Vec& grad1, const Vec& grad2,
                           PenaltyKind kind = PenaltyKind::hinge);

RunResult solve_setting1(const ConstrainedProblem& problem, const SolverConfig& config);
RunResult solve_setting2(const ConstrainedProblem& problem, const SolverConfig& config);

// Output-iterate selection over the stored trajectory records.
std::pair<long, Vec> select_output(const ConstrainedProblem& problem,
                                   const SolverConfig& config,
                                   const std::vector<TrajectoryRecord>& records);

}  // namespace hpo
