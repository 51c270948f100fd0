#include "hpo/penalty.hpp"

namespace hpo {

double penalty_value_exact(const PenaltyObjective& obj, const Vec& x) {
  FullEval fe = exact_full_eval(*obj.problem, x);
  const int m = static_cast<int>(fe.h.size());
  double pen = 0;
  for (int k = 0; k < m; ++k) {
    double hv = hinge(fe.h[k]);
    pen += (obj.kind == PenaltyKind::hinge) ? hv : hv * hv;
  }
  return m > 0 ? fe.F + obj.beta / m * pen : fe.F;
}

Vec penalty_subgrad_exact(const PenaltyObjective& obj, const Vec& x) {
  FullEval fe = exact_full_eval(*obj.problem, x);
  const int m = static_cast<int>(fe.h.size());
  Vec g = fe.grad_F;
  for (int k = 0; k < m; ++k) {
    double xi = (obj.kind == PenaltyKind::hinge) ? hinge_subgrad(fe.h[k])
                                                 : 2.0 * hinge(fe.h[k]);
    if (xi != 0) g += (obj.beta / m * xi) * fe.jacobian.row(k).transpose();
  }
  return g;
}

DerivedConstants derived_constants(const PenaltyObjective& obj) {
  const auto& c = obj.problem->constants;
  DerivedConstants out;
  out.C = c.rho0 + obj.beta * c.rho1;
  out.L = c.L_F + obj.beta * c.L_h;
  if (out.C > 0) {
    out.theta_default = 1.0 / (2.0 * out.C);
  } else {
    out.theta_default = 1.0;
    out.theta_fallback = true;
  }
  return out;
}

double beta_lower_bound(double epsilon, double L_F, double delta) {
  if (delta <= 0) throw Error("bad_delta", "delta must be positive");
  return (epsilon + L_F) / delta;
}

}  // namespace hpo
