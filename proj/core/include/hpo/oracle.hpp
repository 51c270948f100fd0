#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpo/rng.hpp"

namespace hpo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// subgradient of |u| at u=0 is taken as 0
inline double sign0(double u) { return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0); }

// Identifies one sample draw; evaluation must be a pure function of (x, id).
struct SampleId {
  std::uint64_t raw = 0;
};

struct EvalResult {
  double value = 0;
  Vec subgrad;
};

using SampleEvaluator = std::function<EvalResult(const Vec&, SampleId)>;
using ExactFn = std::function<EvalResult(const Vec&)>;

struct StochasticOracle {
  int dimension = 0;
  double noise_level = 0;
  SampleEvaluator evaluator;
};

// Batch-mean value and subgradient over batch_size samples of the stream.
EvalResult eval(const StochasticOracle& oracle, const Vec& x, int batch_size,
                const rng::StreamKey& stream);

struct OuterFunction {
  std::function<double(double)> value;
  std::function<double(double)> subgrad;
  bool monotone_nondecreasing = false;
  bool smooth = false;
  double L_f = 0;
  double rho_f = 0;
  double L_grad_f = 0;
};

// Setting-II objective F(x) = (1/n) sum_i f_i(E[g_i(x,zeta)]).
struct FccoObjective {
  int n = 0;
  int dimension = 0;
  std::vector<OuterFunction> outer;
  std::vector<StochasticOracle> inner;
  std::vector<ExactFn> exact_inner;  // may be empty when no exact path exists
  double L_g = 0;
  double sigma_g = 0;
  double rho_g = 0;
  double L_grad_g = 0;

  // true -> all outer tagged monotone+weakly-convex, false -> all smooth;
  // mixed tagging is rejected.
  bool condition_monotone() const;
};

// Constraint of the form |E[inner1] - E[inner2]| - kappa <= 0.
struct NestedAbsHingeConstraint {
  std::array<StochasticOracle, 2> inner;
  std::array<ExactFn, 2> exact_inner;
  double kappa = 0;
};

struct ProblemConstants {
  double rho0 = 0;
  double rho1 = 0;
  double L_F = 0;
  double L_h = 0;
  double sigma_f = 0;
  double sigma_h = 0;
  double box_radius = 0;  // constants hold on ||x||_inf <= box_radius
  double delta = 0;       // regularity constant when known, else 0
};

struct KnownSolution {
  Vec x;
  Vec multipliers;  // may be empty
};

struct ConstrainedProblem {
  int dimension = 0;
  std::optional<StochasticOracle> objective;  // Setting I
  std::optional<FccoObjective> fcco;          // Setting II
  std::vector<StochasticOracle> constraints;
  std::vector<NestedAbsHingeConstraint> nested;  // exclusive with constraints
  std::optional<ExactFn> exact_objective;
  std::vector<ExactFn> exact_constraints;
  ProblemConstants constants;
  std::optional<KnownSolution> known_solution;
  std::optional<Vec> strictly_feasible_point;
  std::optional<Vec> unconstrained_point;
  std::optional<double> unconstrained_objective;
  std::shared_ptr<nlohmann::json> descriptor;  // generator parameters, serializable

  int num_constraints() const {
    return nested.empty() ? static_cast<int>(constraints.size())
                          : static_cast<int>(nested.size());
  }
  bool has_exact() const {
    return exact_objective.has_value() &&
           static_cast<int>(exact_constraints.size()) == num_constraints();
  }
};

struct FullEval {
  double F = 0;
  Vec h;         // m exact constraint values
  Vec grad_F;    // one chosen subgradient of F
  Mat jacobian;  // m x dim, one chosen subgradient per constraint
};

// Noise-free values and deterministic tie-broken subgradients.
FullEval exact_full_eval(const ConstrainedProblem& problem, const Vec& x);

// Stream id scheme shared by the solvers and generators.
namespace oracle_ids {
inline constexpr std::uint32_t objective = 0;
inline constexpr std::uint32_t constraint_base = 1;          // + k
inline constexpr std::uint32_t nested_base = 1;              // + 2k + side
inline std::uint32_t inner_base(int m) { return 1 + 2 * static_cast<std::uint32_t>(m); }
}  // namespace oracle_ids

}  // namespace hpo
