#include "hpo/instances.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <nlohmann/json.hpp>

namespace hpo {

namespace {

using nlohmann::json;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double sigmoid_grad(double z) {
  double s = sigmoid(z);
  return s * (1.0 - s);
}

double softplus(double u) {
  return u > 30 ? u : std::log1p(std::exp(u));
}

// Additive Gaussian noise on value; subgradient noise scaled so the total
// subgradient variance equals noise^2.
EvalResult with_noise(EvalResult r, double noise, SampleId id) {
  if (noise <= 0) return r;
  rng::Prng p(id.raw);
  r.value += noise * p.normal();
  const double s = noise / std::sqrt(static_cast<double>(r.subgrad.size()));
  for (Eigen::Index i = 0; i < r.subgrad.size(); ++i) r.subgrad[i] += s * p.normal();
  return r;
}

Vec clip_box(Vec x, double r) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], -r, r);
  return x;
}

double spectral_norm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double lambda_max(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  return es.eigenvalues().maxCoeff();
}

struct QuadConstraintData {
  Mat p;
  Vec b;
  double d = 0;
  double c = 0;
};

EvalResult quad_constraint_exact(const QuadConstraintData& qc, const Vec& x) {
  Vec diff = x - qc.b;
  Vec grad_q = qc.p * diff;
  double q = 0.5 * diff.dot(grad_q) - qc.d;
  return {std::abs(q) - qc.c, sign0(q) * grad_q};
}

// Shared constraint family |q_k(x)| - c_k with q_k zero at a common anchor z.
struct QuadConstraintFamily {
  std::vector<QuadConstraintData> cons;
  Vec anchor;
  double rho1 = 0;
  double L_h = 0;
};

QuadConstraintFamily make_quad_constraints(rng::Prng& g, int dim, int m, double r) {
  QuadConstraintFamily fam;
  fam.anchor = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) fam.anchor[i] = (g.uniform() - 0.5) * r * 0.5;
  for (int k = 0; k < m; ++k) {
    Mat d = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) d(i, j) = g.normal();
    QuadConstraintData qc;
    qc.p = d.transpose() * d / dim + 0.3 * Mat::Identity(dim, dim);
    qc.b = Vec::Zero(dim);
    for (int i = 0; i < dim; ++i) qc.b[i] = (g.uniform() - 0.5) * r;
    Vec zb = fam.anchor - qc.b;
    qc.d = 0.5 * zb.dot(qc.p * zb);
    qc.c = 0.3 + 0.4 * g.uniform();
    double lam = lambda_max(qc.p);
    fam.rho1 = std::max(fam.rho1, lam);
    fam.L_h = std::max(fam.L_h, spectral_norm(qc.p) * (r * std::sqrt(double(dim)) + qc.b.norm()));
    fam.cons.push_back(std::move(qc));
  }
  return fam;
}

void attach_quad_constraints(ConstrainedProblem& prob, const QuadConstraintFamily& fam,
                             double noise) {
  const int dim = prob.dimension;
  for (const auto& qc : fam.cons) {
    prob.exact_constraints.push_back(
        [qc](const Vec& x) { return quad_constraint_exact(qc, x); });
    prob.constraints.push_back(StochasticOracle{
        dim, noise, [qc, noise](const Vec& x, SampleId id) {
          return with_noise(quad_constraint_exact(qc, x), noise, id);
        }});
  }
  prob.strictly_feasible_point = fam.anchor;
}

}  // namespace

Vec constrained_reference_solve(const ExactFn& objective,
                                const std::vector<ExactFn>& constraints, int dim,
                                double box_radius, const Vec& x0, long iterations,
                                double tol) {
  Vec x = clip_box(x0, box_radius);
  Vec best = x;
  double best_val = std::numeric_limits<double>::infinity();
  bool found = false;
  for (long t = 0; t < iterations; ++t) {
    double worst = -std::numeric_limits<double>::infinity();
    Vec worst_grad;
    for (const auto& c : constraints) {
      EvalResult r = c(x);
      if (r.value > worst) {
        worst = r.value;
        worst_grad = r.subgrad;
      }
    }
    EvalResult fo = objective(x);
    if (worst <= 0 && fo.value < best_val) {
      best_val = fo.value;
      best = x;
      found = true;
    }
    Vec dir = (worst > 0) ? worst_grad : fo.subgrad;
    double nrm = dir.norm();
    if (nrm < 1e-15) break;
    double step = box_radius / std::sqrt(static_cast<double>(t + 1));
    x = clip_box(x - (step / nrm) * dir, box_radius);
  }
  if (!found) throw Error("infeasible_generation", "reference solve found no feasible point");
  (void)tol;
  return best;
}

Vec unconstrained_reference_solve(const ExactFn& objective, int dim, const Vec& x0,
                                  long iterations, double step0, double box_radius) {
  Vec x = x0.size() == dim ? x0 : Vec::Zero(dim);
  if (box_radius > 0) x = clip_box(x, box_radius);
  Vec best = x;
  double best_val = objective(x).value;
  for (long t = 0; t < iterations; ++t) {
    EvalResult r = objective(x);
    if (r.value < best_val) {
      best_val = r.value;
      best = x;
    }
    double nrm = r.subgrad.norm();
    if (nrm < 1e-14) break;
    x -= (step0 / std::sqrt(static_cast<double>(t + 1)) / nrm) * r.subgrad;
    if (box_radius > 0) x = clip_box(x, box_radius);
  }
  if (objective(x).value < best_val) best = x;
  return best;
}

ConstrainedProblem make_exemplar_1d(double noise) {
  ConstrainedProblem prob;
  prob.dimension = 1;

  auto exact_obj = [](const Vec& x) { return EvalResult{x[0], Vec::Ones(1)}; };
  auto exact_con = [](const Vec& x) {
    double q = x[0] * x[0] - 1.0;
    Vec g(1);
    g[0] = sign0(q) * 2.0 * x[0];
    return EvalResult{std::abs(q) - 1.0, g};
  };

  prob.exact_objective = exact_obj;
  prob.exact_constraints.push_back(exact_con);
  prob.objective = StochasticOracle{1, noise, [noise](const Vec& x, SampleId id) {
                                      return with_noise(EvalResult{x[0], Vec::Ones(1)},
                                                        noise, id);
                                    }};
  prob.constraints.push_back(StochasticOracle{1, noise, [noise](const Vec& x, SampleId id) {
                                                double q = x[0] * x[0] - 1.0;
                                                Vec g(1);
                                                g[0] = sign0(q) * 2.0 * x[0];
                                                return with_noise({std::abs(q) - 1.0, g},
                                                                  noise, id);
                                              }});

  // Constants are declared on the natural box [-sqrt(2), sqrt(2)] that
  // contains the whole feasible set, so L_h = 2R = 2*sqrt(2).
  const double r = std::numbers::sqrt2;
  prob.constants = ProblemConstants{/*rho0=*/0.0, /*rho1=*/2.0, /*L_F=*/1.0,
                                    /*L_h=*/2.0 * r,  /*sigma_f=*/noise,
                                    /*sigma_h=*/noise, /*box_radius=*/r,
                                    /*delta=*/2.0};
  KnownSolution ks;
  ks.x = Vec::Constant(1, -std::numbers::sqrt2);
  ks.multipliers = Vec::Constant(1, 1.0 / (2.0 * std::numbers::sqrt2));
  prob.known_solution = ks;
  // h(1) = -1 is the most negative constraint value; x=0 only achieves h=0.
  prob.strictly_feasible_point = Vec::Ones(1);

  prob.descriptor = std::make_shared<json>(json{
      {"schema_version", 1}, {"kind", "exemplar_1d"}, {"noise", noise}});
  return prob;
}

ConstrainedProblem make_quadratic_instance(int dim, int m, std::uint64_t seed,
                                           double noise) {
  if (dim < 1 || m < 1) throw Error("bad_arguments", "dim and m must be >= 1");
  const double r = 2.0;

  for (int attempt = 0; attempt < 5; ++attempt) {
    rng::Prng g(rng::mix(seed, 0x71ad + attempt));
    ConstrainedProblem prob;
    prob.dimension = dim;

    Mat d = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) d(i, j) = g.normal();
    Mat q = d.transpose() * d / dim + 0.5 * Mat::Identity(dim, dim);
    Vec a = Vec::Zero(dim);
    for (int i = 0; i < dim; ++i) a[i] = (g.uniform() - 0.5) * r * 0.5;

    auto exact_obj = [q, a](const Vec& x) {
      Vec grad = q * (x - a);
      return EvalResult{0.5 * (x - a).dot(grad), grad};
    };
    prob.exact_objective = exact_obj;
    prob.objective = StochasticOracle{dim, noise, [exact_obj, noise](const Vec& x, SampleId id) {
                                        return with_noise(exact_obj(x), noise, id);
                                      }};

    QuadConstraintFamily fam = make_quad_constraints(g, dim, m, r);
    attach_quad_constraints(prob, fam, noise);

    prob.constants.rho0 = 0.0;
    prob.constants.rho1 = fam.rho1;
    prob.constants.L_F = spectral_norm(q) * (r * std::sqrt(double(dim)) + a.norm());
    prob.constants.L_h = fam.L_h;
    prob.constants.sigma_f = noise;
    prob.constants.sigma_h = noise;
    prob.constants.box_radius = r;

    try {
      Vec sol = constrained_reference_solve(*prob.exact_objective, prob.exact_constraints,
                                            dim, r, fam.anchor);
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& c : prob.exact_constraints) worst = std::max(worst, c(sol).value);
      if (worst > 1e-6) continue;
      prob.known_solution = KnownSolution{sol, Vec()};
    } catch (const Error&) {
      continue;
    }

    prob.descriptor = std::make_shared<json>(json{{"schema_version", 1},
                                                  {"kind", "quadratic"},
                                                  {"dim", dim},
                                                  {"m", m},
                                                  {"seed", seed},
                                                  {"noise", noise}});
    return prob;
  }
  throw Error("infeasible_generation", "no feasible quadratic instance after retries");
}

ConstrainedProblem make_fcco_instance(int n, int dim, FccoCondition condition,
                                      std::uint64_t seed, int m, double noise) {
  if (n < 2) throw Error("bad_arguments", "n must be >= 2");
  const double r = 2.0;
  rng::Prng g(rng::mix(seed, 0xfcc0));

  ConstrainedProblem prob;
  prob.dimension = dim;

  FccoObjective fcco;
  fcco.n = n;
  fcco.dimension = dim;
  fcco.sigma_g = noise;

  double g_abs_max = 0;  // sup |g_i| on the box, for smooth-case constants
  for (int i = 0; i < n; ++i) {
    if (condition == FccoCondition::monotone) {
      Vec ai = Vec::Zero(dim);
      for (int j = 0; j < dim; ++j) ai[j] = g.normal() / std::sqrt(double(dim));
      double bi = (g.uniform() - 0.5) * 2.0;
      auto exact = [ai, bi](const Vec& x) { return EvalResult{ai.dot(x) + bi, ai}; };
      fcco.exact_inner.push_back(exact);
      fcco.inner.push_back(StochasticOracle{
          dim, noise, [exact, noise](const Vec& x, SampleId id) {
            return with_noise(exact(x), noise, id);
          }});
      fcco.L_g = std::max(fcco.L_g, ai.norm());
      g_abs_max = std::max(g_abs_max, ai.norm() * r * std::sqrt(double(dim)) + std::abs(bi));
      OuterFunction f;
      f.value = [](double u) { return softplus(u); };
      f.subgrad = [](double u) { return sigmoid(u); };
      f.monotone_nondecreasing = true;
      f.L_f = 1.0;
      f.rho_f = 0.0;
      fcco.outer.push_back(std::move(f));
    } else {
      Mat s = Mat::Zero(dim, dim);
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) s(a, b) = g.normal();
      s = 0.25 * (s + s.transpose()) / std::sqrt(double(dim));
      Vec ci = Vec::Zero(dim);
      for (int j = 0; j < dim; ++j) ci[j] = 0.5 * g.normal();
      auto exact = [s, ci](const Vec& x) {
        Vec grad = s * x + ci;
        return EvalResult{0.5 * x.dot(s * x) + ci.dot(x), grad};
      };
      fcco.exact_inner.push_back(exact);
      fcco.inner.push_back(StochasticOracle{
          dim, noise, [exact, noise](const Vec& x, SampleId id) {
            return with_noise(exact(x), noise, id);
          }});
      double sn = spectral_norm(s);
      double lg = sn * r * std::sqrt(double(dim)) + ci.norm();
      fcco.L_g = std::max(fcco.L_g, lg);
      fcco.L_grad_g = std::max(fcco.L_grad_g, sn);
      g_abs_max = std::max(g_abs_max, 0.5 * sn * r * r * dim + ci.norm() * r * std::sqrt(double(dim)));
      OuterFunction f;
      f.value = [](double u) { return u * u; };
      f.subgrad = [](double u) { return 2.0 * u; };
      f.smooth = true;
      f.L_grad_f = 2.0;
      fcco.outer.push_back(std::move(f));
    }
  }

  // Exact objective derived from the exact inner maps.
  {
    auto outers = fcco.outer;
    auto inners = fcco.exact_inner;
    int nn = n;
    int dd = dim;
    prob.exact_objective = [outers, inners, nn, dd](const Vec& x) {
      double val = 0;
      Vec grad = Vec::Zero(dd);
      for (int i = 0; i < nn; ++i) {
        EvalResult gi = inners[i](x);
        val += outers[i].value(gi.value);
        grad += outers[i].subgrad(gi.value) * gi.subgrad;
      }
      return EvalResult{val / nn, grad / nn};
    };
  }

  QuadConstraintFamily fam = make_quad_constraints(g, dim, m, r);
  attach_quad_constraints(prob, fam, noise);

  double L_f_eff = (condition == FccoCondition::monotone) ? 1.0 : 2.0 * g_abs_max;
  prob.constants.L_F = L_f_eff * fcco.L_g;
  prob.constants.rho0 = (condition == FccoCondition::monotone)
                            ? 0.0
                            : 2.0 * fcco.L_g * fcco.L_g + L_f_eff * fcco.L_grad_g;
  prob.constants.rho1 = fam.rho1;
  prob.constants.L_h = fam.L_h;
  prob.constants.sigma_f = noise;
  prob.constants.sigma_h = noise;
  prob.constants.box_radius = r;
  fcco.rho_g = 0.0;
  prob.fcco = std::move(fcco);

  Vec sol = constrained_reference_solve(*prob.exact_objective, prob.exact_constraints, dim,
                                        r, fam.anchor);
  prob.known_solution = KnownSolution{sol, Vec()};

  prob.descriptor = std::make_shared<json>(json{
      {"schema_version", 1},
      {"kind", "fcco"},
      {"n", n},
      {"dim", dim},
      {"condition", condition == FccoCondition::monotone ? "monotone" : "smooth"},
      {"seed", seed},
      {"m", m},
      {"noise", noise}});
  return prob;
}

namespace {

FairnessData generate_fairness_data(int n_per_group, std::uint64_t seed,
                                    const FairnessGroupSpec& gp, const FairnessGroupSpec& gu) {
  const int dim = 3;  // two features + bias
  FairnessData data;
  data.features = Mat::Zero(2 * n_per_group, dim);
  data.labels.resize(2 * n_per_group);
  data.groups.resize(2 * n_per_group);
  const FairnessGroupSpec* specs[2] = {&gp, &gu};
  // The base-feature noise is drawn from a stream shared by both groups, so
  // groups whose base means agree have bitwise-identical base columns. A
  // scorer that ignores the group-specific second feature then yields exactly
  // zero TPR/FPR gaps, which keeps the constrained problem feasible at
  // tolerance kappa for any scale of the base weight.
  rng::Prng base(rng::mix(seed, 0x9e3779b97f4a7c15ull));
  std::vector<double> base_noise(n_per_group);
  for (int i = 0; i < n_per_group; ++i) base_noise[i] = base.normal();
  int row = 0;
  for (int grp = 0; grp < 2; ++grp) {
    const auto& sp = *specs[grp];
    // Group-feature stream keyed by the group parameters, not the group
    // index, so identical group specs reproduce identical draws (zero gap
    // exactly).
    std::uint64_t h = rng::mix(seed, std::hash<double>{}(sp.pos_mean[0]));
    h = rng::mix(h, std::hash<double>{}(sp.pos_mean[1]));
    h = rng::mix(h, std::hash<double>{}(sp.neg_mean[0]));
    h = rng::mix(h, std::hash<double>{}(sp.neg_mean[1]));
    h = rng::mix(h, std::hash<double>{}(sp.sd));
    rng::Prng g(h);
    for (int i = 0; i < n_per_group; ++i) {
      int label = (i % 2 == 0) ? 1 : -1;
      const Eigen::Vector2d& mean = label > 0 ? sp.pos_mean : sp.neg_mean;
      data.features(row, 0) = mean[0] + sp.sd * base_noise[i];
      data.features(row, 1) = mean[1] + sp.sd * g.normal();
      data.features(row, 2) = 1.0;
      data.labels[row] = label;
      data.groups[row] = grp;
      ++row;
    }
  }
  return data;
}

}  // namespace

ConstrainedProblem make_fairness_from_data(const FairnessData& data,
                                           const std::vector<double>& thresholds,
                                           double kappa, std::uint64_t seed) {
  if (thresholds.empty()) throw Error("bad_arguments", "thresholds must be nonempty");
  const int dim = static_cast<int>(data.features.cols());
  const int rows = static_cast<int>(data.features.rows());

  // index sets per (group, label)
  auto shared = std::make_shared<FairnessData>(data);
  std::array<std::array<std::vector<int>, 2>, 2> subset;  // [group][label>0]
  std::vector<int> pos_all, neg_all;
  for (int i = 0; i < rows; ++i) {
    subset[data.groups[i]][data.labels[i] > 0 ? 1 : 0].push_back(i);
    (data.labels[i] > 0 ? pos_all : neg_all).push_back(i);
  }
  for (int grp = 0; grp < 2; ++grp)
    for (int lab = 0; lab < 2; ++lab)
      if (subset[grp][lab].empty())
        throw Error("group_missing_label",
                    "group " + std::to_string(grp) + " lacks label " +
                        std::string(lab ? "+1" : "-1"));

  ConstrainedProblem prob;
  prob.dimension = dim;

  // Pairwise sigmoid AUC surrogate (negated): stochastic oracle subsamples
  // one positive/negative pair per sample draw.
  auto pos = std::make_shared<std::vector<int>>(pos_all);
  auto neg = std::make_shared<std::vector<int>>(neg_all);
  prob.exact_objective = [shared, pos, neg, dim](const Vec& w) {
    Vec scores = shared->features * w;
    double val = 0;
    Vec grad = Vec::Zero(dim);
    for (int i : *pos)
      for (int j : *neg) {
        double z = scores[i] - scores[j];
        val -= sigmoid(z);
        grad -= sigmoid_grad(z) *
                (shared->features.row(i) - shared->features.row(j)).transpose();
      }
    double scale = 1.0 / (pos->size() * neg->size());
    return EvalResult{val * scale, grad * scale};
  };
  prob.objective = StochasticOracle{
      dim, 0.25, [shared, pos, neg](const Vec& w, SampleId id) {
        rng::Prng g(id.raw);
        int i = (*pos)[g.uniform_int(static_cast<int>(pos->size()))];
        int j = (*neg)[g.uniform_int(static_cast<int>(neg->size()))];
        double z = shared->features.row(i).dot(w) - shared->features.row(j).dot(w);
        Vec grad = -sigmoid_grad(z) *
                   (shared->features.row(i) - shared->features.row(j)).transpose();
        return EvalResult{-sigmoid(z), grad};
      }};

  // Per threshold: TPR gap then FPR gap constraint.
  auto make_inner = [&](int grp, int lab, double tau) {
    auto idx = std::make_shared<std::vector<int>>(subset[grp][lab]);
    StochasticOracle oracle{
        dim, 0.5, [shared, idx, tau](const Vec& w, SampleId id) {
          rng::Prng g(id.raw);
          int i = (*idx)[g.uniform_int(static_cast<int>(idx->size()))];
          double z = shared->features.row(i).dot(w) - tau;
          return EvalResult{sigmoid(z),
                            sigmoid_grad(z) * shared->features.row(i).transpose()};
        }};
    ExactFn exact = [shared, idx, tau, dim](const Vec& w) {
      double val = 0;
      Vec grad = Vec::Zero(dim);
      for (int i : *idx) {
        double z = shared->features.row(i).dot(w) - tau;
        val += sigmoid(z);
        grad += sigmoid_grad(z) * shared->features.row(i).transpose();
      }
      double scale = 1.0 / idx->size();
      return EvalResult{val * scale, grad * scale};
    };
    return std::pair{oracle, exact};
  };

  for (double tau : thresholds) {
    for (int lab = 1; lab >= 0; --lab) {  // TPR first, then FPR
      NestedAbsHingeConstraint nc;
      auto [o1, e1] = make_inner(0, lab, tau);
      auto [o2, e2] = make_inner(1, lab, tau);
      nc.inner = {std::move(o1), std::move(o2)};
      nc.exact_inner = {e1, e2};
      nc.kappa = kappa;
      prob.exact_constraints.push_back([e1, e2, kappa](const Vec& w) {
        EvalResult r1 = e1(w);
        EvalResult r2 = e2(w);
        double gap = r1.value - r2.value;
        return EvalResult{std::abs(gap) - kappa,
                          sign0(gap) * (r1.subgrad - r2.subgrad)};
      });
      prob.nested.push_back(std::move(nc));
    }
  }

  double a_max = 0, pair_max = 0;
  for (int i = 0; i < rows; ++i)
    a_max = std::max(a_max, shared->features.row(i).norm());
  pair_max = 2.0 * a_max;
  prob.constants.L_F = pair_max / 4.0;
  prob.constants.rho0 = 0.0962 * pair_max * pair_max;
  prob.constants.L_h = a_max / 2.0;
  prob.constants.rho1 = 0.2 * a_max * a_max;
  prob.constants.sigma_f = 0.25;
  prob.constants.sigma_h = 0.5;
  prob.constants.box_radius = 10.0;

  prob.unconstrained_point = unconstrained_reference_solve(
      *prob.exact_objective, dim, Vec::Zero(dim), 1500, 2.0, prob.constants.box_radius);
  prob.unconstrained_objective = (*prob.exact_objective)(*prob.unconstrained_point).value;
  (void)seed;
  return prob;
}

ConstrainedProblem make_fairness_instance(int n_per_group,
                                          const std::vector<double>& thresholds,
                                          double kappa, std::uint64_t seed,
                                          const FairnessGroupSpec& gp,
                                          const FairnessGroupSpec& gu) {
  if (n_per_group < 10) throw Error("bad_arguments", "n_per_group must be >= 10");
  FairnessData data = generate_fairness_data(n_per_group, seed, gp, gu);
  ConstrainedProblem prob = make_fairness_from_data(data, thresholds, kappa, seed);
  prob.descriptor = std::make_shared<nlohmann::json>(nlohmann::json{
      {"schema_version", 1},
      {"kind", "fairness"},
      {"n_per_group", n_per_group},
      {"thresholds", thresholds},
      {"kappa", kappa},
      {"seed", seed},
      {"group_p", {{"pos_mean", {gp.pos_mean[0], gp.pos_mean[1]}},
                   {"neg_mean", {gp.neg_mean[0], gp.neg_mean[1]}},
                   {"sd", gp.sd}}},
      {"group_u", {{"pos_mean", {gu.pos_mean[0], gu.pos_mean[1]}},
                   {"neg_mean", {gu.neg_mean[0], gu.neg_mean[1]}},
                   {"sd", gu.sd}}}});
  return prob;
}

ConstrainedProblem make_fairness_instance(int n_per_group,
                                          const std::vector<double>& thresholds,
                                          double kappa, std::uint64_t seed) {
  // Both groups share the base separation on feature 0; only the privileged
  // group carries signal on feature 1, so the AUC-optimal scorer uses it and
  // thereby opens a score-distribution gap between the groups.
  FairnessGroupSpec gp{{1.0, 0.5}, {-1.0, -0.5}, 1.0};
  FairnessGroupSpec gu{{1.0, 0.0}, {-1.0, 0.0}, 1.0};
  return make_fairness_instance(n_per_group, thresholds, kappa, seed, gp, gu);
}

}  // namespace hpo
