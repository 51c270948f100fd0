#pragma once

#include <vector>

#include "hpo/oracle.hpp"

namespace hpo {

enum class FccoCondition { monotone, smooth };

// F(x) = x, h(x) = |x^2 - 1| - 1. Known solution x* = -sqrt(2),
// lambda* = 1/(2 sqrt(2)); regularity constant delta = 2.
ConstrainedProblem make_exemplar_1d(double noise);

// Convex quadratic objective with m constraints |q_k(x)| - c_k built around a
// shared strictly feasible anchor. Constants are computed on the instance box.
ConstrainedProblem make_quadratic_instance(int dim, int m, std::uint64_t seed,
                                           double noise = 0.0);

// Setting-II objective: softplus over affine inner maps (monotone condition)
// or squares over quadratic inner maps (smooth condition), with m quadratic
// constraints as in make_quadratic_instance.
ConstrainedProblem make_fcco_instance(int n, int dim, FccoCondition condition,
                                      std::uint64_t seed, int m = 1,
                                      double noise = 0.0);

// Synthetic two-group AUC problem with per-threshold TPR/FPR gap constraints.
struct FairnessGroupSpec {
  Eigen::Vector2d pos_mean;
  Eigen::Vector2d neg_mean;
  double sd = 0.8;
  bool operator==(const FairnessGroupSpec&) const = default;
};

ConstrainedProblem make_fairness_instance(int n_per_group,
                                          const std::vector<double>& thresholds,
                                          double kappa, std::uint64_t seed);

ConstrainedProblem make_fairness_instance(int n_per_group,
                                          const std::vector<double>& thresholds,
                                          double kappa, std::uint64_t seed,
                                          const FairnessGroupSpec& group_p,
                                          const FairnessGroupSpec& group_u);

// Labeled rows (features incl. bias column, label, group); used by the
// generator and exposed for the validation error path.
struct FairnessData {
  Mat features;               // rows x dim
  std::vector<int> labels;    // +1 / -1
  std::vector<int> groups;    // 0 = p, 1 = u
};

ConstrainedProblem make_fairness_from_data(const FairnessData& data,
                                           const std::vector<double>& thresholds,
                                           double kappa, std::uint64_t seed);

// Deterministic switching-subgradient reference solver used at generation
// time; independent of the penalty solvers under test.
Vec constrained_reference_solve(const ExactFn& objective,
                                const std::vector<ExactFn>& constraints, int dim,
                                double box_radius, const Vec& x0,
                                long iterations = 100000, double tol = 1e-6);

Vec unconstrained_reference_solve(const ExactFn& objective, int dim, const Vec& x0,
                                  long iterations = 20000, double step0 = 1.0,
                                  double box_radius = 0.0);  // 0 disables the box

}  // namespace hpo
