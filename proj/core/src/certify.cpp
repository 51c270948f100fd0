#include "hpo/certify.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hpo {

ProxResult prox_solve(const PenaltyObjective& obj, const Vec& x, double theta,
                      int max_iters, double tol) {
  DerivedConstants dc = derived_constants(obj);
  if (theta <= 0 || (dc.C > 0 && theta >= 1.0 / dc.C))
    throw Error("bad_theta", "theta must lie in (0, 1/C)");
  const double mu = 1.0 / theta - dc.C;

  auto surrogate = [&](const Vec& y) {
    return penalty_value_exact(obj, y) + (y - x).squaredNorm() / (2.0 * theta);
  };

  Vec y = x;
  Vec best_bound_point = y;
  double best_bound = std::numeric_limits<double>::infinity();
  Vec avg = Vec::Zero(x.size());
  double weight_sum = 0;
  ProxResult out;
  for (int j = 0; j < max_iters; ++j) {
    Vec g = penalty_subgrad_exact(obj, y) + (y - x) / theta;
    double bound = g.squaredNorm() / (2.0 * mu);
    if (bound < best_bound) {
      best_bound = bound;
      best_bound_point = y;
    }
    out.iterations = j + 1;
    if (best_bound <= tol) break;
    double w = j + 1;
    avg = (weight_sum * avg + w * y) / (weight_sum + w);
    weight_sum += w;
    y -= 2.0 / (mu * (j + 2)) * g;
  }

  // Pick whichever candidate minimizes the surrogate; the strong-convexity
  // bound at best_bound_point still certifies it.
  out.point = best_bound_point;
  double best_val = surrogate(best_bound_point);
  if (weight_sum > 0) {
    double v = surrogate(avg);
    if (v < best_val) {
      best_val = v;
      out.point = avg;
    }
  }
  double v = surrogate(y);
  if (v < best_val) {
    best_val = v;
    out.point = y;
  }
  out.objective = penalty_value_exact(obj, out.point);
  out.suboptimality_bound = best_bound;
  out.converged = best_bound <= tol;
  return out;
}

Vec moreau_grad(const Vec& x, const ProxResult& prox, double theta) {
  return (x - prox.point) / theta;
}

MultiplierExtraction extract_multipliers(const PenaltyObjective& obj, const Vec& x_bar,
                                         double activity_tol) {
  const ConstrainedProblem& p = *obj.problem;
  FullEval fe = exact_full_eval(p, x_bar);
  const int m = static_cast<int>(fe.h.size());
  MultiplierExtraction out;
  out.lambda = Vec::Zero(m);
  const double coef = m > 0 ? obj.beta / m : 0.0;

  if (obj.kind == PenaltyKind::squared_hinge) {
    // Differentiable penalty: the multiplier is determined exactly.
    Vec r = fe.grad_F;
    for (int k = 0; k < m; ++k) {
      out.lambda[k] = coef * 2.0 * hinge(fe.h[k]);
      if (out.lambda[k] != 0) r += out.lambda[k] * fe.jacobian.row(k).transpose();
    }
    out.stationarity_residual = r.norm();
    return out;
  }

  const double scale = 1.0 + (m > 0 ? fe.h.cwiseAbs().maxCoeff() : 0.0);
  const double tol = activity_tol * scale;
  Vec xi = Vec::Zero(m);
  Vec r0 = fe.grad_F;
  for (int k = 0; k < m; ++k) {
    if (std::abs(fe.h[k]) <= tol) {
      out.active_set.push_back(k);
    } else if (fe.h[k] > 0) {
      xi[k] = 1.0;
      r0 += coef * fe.jacobian.row(k).transpose();
    }
  }

  if (!out.active_set.empty()) {
    // Box-constrained least squares over the exactly-active coefficients:
    // min_{xi in [0,1]^A} || r0 + coef * J_A^T xi ||^2, by projected gradient.
    const int a = static_cast<int>(out.active_set.size());
    Mat B(a, x_bar.size());
    for (int i = 0; i < a; ++i) B.row(i) = coef * fe.jacobian.row(out.active_set[i]);
    Mat gram = B * B.transpose();
    double lip = 2.0 * gram.selfadjointView<Eigen::Lower>()
                           .eigenvalues()
                           .maxCoeff();
    Vec z = Vec::Constant(a, 0.5);
    if (lip > 0) {
      const double step = 1.0 / lip;
      for (int it = 0; it < 2000; ++it) {
        Vec grad = 2.0 * (B * r0 + gram * z);
        z = (z - step * grad).cwiseMax(0.0).cwiseMin(1.0);
      }
    } else {
      z.setZero();
    }
    for (int i = 0; i < a; ++i) xi[out.active_set[i]] = z[i];
    out.refined = true;
    out.stationarity_residual = (r0 + B.transpose() * z).norm();
  } else {
    out.stationarity_residual = r0.norm();
  }
  out.lambda = coef * xi;
  return out;
}

KktCertificate kkt_certificate(const PenaltyObjective& obj, const Vec& x, double theta,
                               int prox_iters, double prox_tol, double activity_tol) {
  DerivedConstants dc = derived_constants(obj);
  if (theta <= 0) theta = dc.theta_default;
  ProxResult pr = prox_solve(obj, x, theta, prox_iters, prox_tol);
  MultiplierExtraction me = extract_multipliers(obj, pr.point, activity_tol);
  FullEval fe = exact_full_eval(*obj.problem, pr.point);
  const int m = static_cast<int>(fe.h.size());

  KktCertificate cert;
  cert.x = x;
  cert.x_bar = pr.point;
  cert.lambda = me.lambda;
  cert.stationarity = me.stationarity_residual;
  cert.feasibility = m > 0 ? fe.h.maxCoeff() : 0.0;
  cert.complementarity = 0;
  // The inactive-multiplier clause only fires outside the activity band used
  // for multiplier extraction; inside the band a positive multiplier is
  // legitimate even when the constraint value is slightly negative.
  const double scale = m > 0 ? 1.0 + fe.h.cwiseAbs().maxCoeff() : 1.0;
  const double band = activity_tol * scale;
  for (int k = 0; k < m; ++k) {
    cert.complementarity = std::max(cert.complementarity, me.lambda[k] * hinge(fe.h[k]));
    if (fe.h[k] < -band)
      cert.complementarity = std::max(cert.complementarity, me.lambda[k]);
  }
  cert.certified_epsilon =
      std::max({cert.stationarity, hinge(cert.feasibility), cert.complementarity});
  cert.displacement = (x - pr.point).norm();
  cert.theta = theta;
  cert.prox_converged = pr.converged;
  cert.prox_suboptimality = pr.suboptimality_bound;
  return cert;
}

FrvpEstimate frvp_min_singular(const ConstrainedProblem& problem, const Vec& x,
                               double floor) {
  FullEval fe = exact_full_eval(problem, x);
  const int m = static_cast<int>(fe.h.size());
  FrvpEstimate out;
  for (int k = 0; k < m; ++k)
    if (fe.h[k] > 0) out.violating.push_back(k);
  if (out.violating.empty()) return out;
  out.any_violation = true;
  const int v = static_cast<int>(out.violating.size());
  Mat J(v, x.size());
  for (int i = 0; i < v; ++i) J.row(i) = fe.jacobian.row(out.violating[i]);
  Mat gram = J * J.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  out.sigma_min = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
  out.delta = m > 0 ? out.sigma_min / m : 0.0;
  out.rank_deficient = out.sigma_min < floor;
  return out;
}

PlEstimate pl_regularity_estimate(const ConstrainedProblem& problem,
                                  const std::vector<Vec>& sample_points) {
  if (problem.num_constraints() != 1 || problem.exact_constraints.size() != 1)
    throw Error("bad_problem",
                "PL estimate needs a single constraint with an exact evaluator");
  if (sample_points.empty()) throw Error("bad_problem", "empty sample grid");
  PlEstimate out;
  out.num_samples = static_cast<int>(sample_points.size());

  double min_h = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> evals;  // (h, ||dh||^2)
  evals.reserve(sample_points.size());
  for (const Vec& pt : sample_points) {
    EvalResult r = problem.exact_constraints[0](pt);
    min_h = std::min(min_h, r.value);
    evals.emplace_back(r.value, r.subgrad.squaredNorm());
  }
  out.c_hat = -min_h;
  out.depth_flagged = !(out.c_hat > 0);

  double mu = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& [h, gsq] : evals) {
    if (h > 0) {
      any = true;
      mu = std::min(mu, gsq / (2.0 * (h - min_h)));
    }
  }
  if (!any) {
    out.vacuous = true;
    return out;
  }
  out.mu_hat = mu;
  out.delta_hat = out.c_hat > 0 ? std::sqrt(2.0 * mu * out.c_hat) : 0.0;
  return out;
}

SlackDemo slack_counterexample() {
  // min x  s.t.  x - 1 + s1^2 = 0,  -x - 1 + s2^2 = 0
  // (the squared-slack reformulation of -1 <= x <= 1)
  SlackDemo d;
  const double s2 = std::sqrt(2.0);
  d.point = Vec(3);
  d.point << 1.0, 0.0, s2;
  d.lambda = Vec(2);
  d.lambda << -1.0, 0.0;

  const double x = d.point[0], sl1 = d.point[1], sl2 = d.point[2];
  Vec grad_lagrangian(3);
  grad_lagrangian << 1.0 + d.lambda[0] - d.lambda[1], 2.0 * d.lambda[0] * sl1,
      2.0 * d.lambda[1] * sl2;
  d.stationarity = grad_lagrangian.norm();
  d.min_lambda = d.lambda.minCoeff();
  // lambda_1 < 0 rules the pair out as KKT multipliers of the original
  // inequality problem.
  d.is_kkt_for_original = false;

  // x = 1 is feasible for |x| <= 1 and d = -1 points into the feasible set
  // while decreasing the objective, so x = 1 is not a minimizer.
  d.descent_direction = Vec::Constant(1, -1.0);
  d.directional_derivative = -1.0;  // f(x) = x along d

  const double eps = 1e-3;
  double before = -x - 1.0 + sl2 * sl2;
  double after = -x - 1.0 + (sl2 + eps) * (sl2 + eps);
  d.perturbation_residual_change = after - before;
  return d;
}

}  // namespace hpo
