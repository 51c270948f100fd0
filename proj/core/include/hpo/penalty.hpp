#pragma once

#include "hpo/oracle.hpp"

namespace hpo {

enum class PenaltyKind { hinge, squared_hinge };

struct PenaltyObjective {
  const ConstrainedProblem* problem = nullptr;
  double beta = 1.0;
  PenaltyKind kind = PenaltyKind::hinge;
};

inline double hinge(double z) { return z > 0 ? z : 0.0; }

// 1 for z>0, 0 for z<=0; the tie at z=0 is resolved to 0 so lambda_k stays
// zero on exactly-active estimates.
inline double hinge_subgrad(double z) { return z > 0 ? 1.0 : 0.0; }

// F(x) + (beta/m) sum_k [h_k(x)]_+ (or squared hinge), exact path.
double penalty_value_exact(const PenaltyObjective& obj, const Vec& x);

// dF(x) + (beta/m) sum_k xi_k dh_k(x), xi from the hinge chain rule.
Vec penalty_subgrad_exact(const PenaltyObjective& obj, const Vec& x);

struct DerivedConstants {
  double C = 0;          // weak convexity rho0 + beta*rho1
  double L = 0;          // Lipschitz L_F + beta*L_h
  double theta_default = 0;
  bool theta_fallback = false;  // both rho constants were zero
};

DerivedConstants derived_constants(const PenaltyObjective& obj);

// Theorem threshold (epsilon + L_F) / delta; configured beta should strictly
// exceed it.
double beta_lower_bound(double epsilon, double L_F, double delta);

}  // namespace hpo
