#pragma once

#include <string>
#include <vector>

#include "hpo/oracle.hpp"
#include "hpo/penalty.hpp"

namespace hpo {

struct ProxResult {
  Vec point;
  double objective = 0;           // penalty objective at point
  double suboptimality_bound = 0; // min_j ||g_j||^2 / (2 mu)
  bool converged = false;
  int iterations = 0;
};

// argmin_y Phi(y) + ||y - x||^2/(2 theta) by subgradient descent on the
// strongly convex surrogate (requires theta < 1/C).
ProxResult prox_solve(const PenaltyObjective& obj, const Vec& x, double theta,
                      int max_iters = 10000, double tol = 1e-6);

// (x - prox(x)) / theta; its norm upper-bounds dist(0, dPhi(prox(x))).
Vec moreau_grad(const Vec& x, const ProxResult& prox, double theta);

struct MultiplierExtraction {
  Vec lambda;                     // size m, in [0, beta/m]
  std::vector<int> active_set;    // |h_k| within the activity tolerance
  double stationarity_residual = 0;
  bool refined = false;
};

// lambda_k = (beta/m) * xi_k from the hinge chain rule at x_bar, then a
// box-constrained least-squares polish over the exactly-active set.
MultiplierExtraction extract_multipliers(const PenaltyObjective& obj, const Vec& x_bar,
                                         double activity_tol = 1e-5);

struct KktCertificate {
  Vec x;                     // candidate point
  Vec x_bar;                 // prox point the certificate refers to
  Vec lambda;
  double stationarity = 0;   // ||dF + sum_k lambda_k dh_k|| at x_bar
  double feasibility = 0;    // max_k [h_k]_+
  // max_k of lambda_k * [h_k]_+ and lambda_k * 1[h_k < 0]
  double complementarity = 0;
  double certified_epsilon = 0;  // max of the three residuals
  double displacement = 0;   // ||x - x_bar||
  double theta = 0;
  bool prox_converged = false;
  double prox_suboptimality = 0;
};

KktCertificate kkt_certificate(const PenaltyObjective& obj, const Vec& x,
                               double theta = 0,  // 0 -> 1/(2C)
                               int prox_iters = 10000, double prox_tol = 1e-6,
                               double activity_tol = 1e-5);

struct FrvpEstimate {
  std::vector<int> violating;
  bool any_violation = false;
  double sigma_min = 0;         // smallest singular value of the violating rows
  double delta = 0;             // sigma_min / m
  bool rank_deficient = false;  // sigma_min below the numerical floor
};

// Full-rank-violating-rows regularity proxy at x; vacuous (delta = 0,
// num_violating = 0) when every constraint holds.
FrvpEstimate frvp_min_singular(const ConstrainedProblem& problem, const Vec& x,
                               double floor = 1e-10);

struct PlEstimate {
  double c_hat = 0;      // -(min over grid of h)
  double mu_hat = 0;     // min over violating points of ||dh||^2 / (2 (h - min h))
  double delta_hat = 0;  // sqrt(2 mu_hat c_hat)
  int num_samples = 0;
  bool vacuous = false;      // no violating sample was seen
  bool depth_flagged = false;  // c_hat <= 0: constraint nowhere strictly feasible
};

// Sampled PL-style regularity estimate for a single-constraint problem, using
// the strictly feasible anchor as the reference point.
PlEstimate pl_regularity_estimate(const ConstrainedProblem& problem,
                                  const std::vector<Vec>& sample_points);

struct SlackDemo {
  Vec point;                  // (x, s1, s2) stationary point of the slack form
  Vec lambda;                 // contains a negative entry
  double stationarity = 0;    // Lagrangian residual of the slack formulation
  double min_lambda = 0;
  Vec descent_direction;      // feasible direction decreasing the objective
  double directional_derivative = 0;
  // change of the second equality residual when s2 moves by 1e-3
  double perturbation_residual_change = 0;
  bool is_kkt_for_original = false;
};

// Reformulating hinge penalties through squared slacks admits a stationary
// point with a negative multiplier that is not a solution of the original
// problem; this builds the counterexample and the certifying descent direction.
SlackDemo slack_counterexample();

}  // namespace hpo
