#include "hpo/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hpo/instances.hpp"

namespace hpo {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& arr) {
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

FairnessGroupSpec group_from_json(const json& g) {
  FairnessGroupSpec spec;
  spec.pos_mean = {g.at("pos_mean")[0].get<double>(), g.at("pos_mean")[1].get<double>()};
  spec.neg_mean = {g.at("neg_mean")[0].get<double>(), g.at("neg_mean")[1].get<double>()};
  spec.sd = g.at("sd").get<double>();
  return spec;
}

}  // namespace

json instance_to_json(const ConstrainedProblem& problem) {
  if (!problem.descriptor)
    throw Error("not_serializable", "instance carries no generator descriptor");
  return *problem.descriptor;
}

ConstrainedProblem instance_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind"))
    throw Error("bad_instance_doc", "instance document needs a kind tag");
  if (doc.value("schema_version", 0) != kSchemaVersion)
    throw Error("bad_instance_doc", "unsupported schema_version");
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "exemplar_1d") return make_exemplar_1d(doc.at("noise").get<double>());
  if (kind == "quadratic")
    return make_quadratic_instance(doc.at("dim").get<int>(), doc.at("m").get<int>(),
                                   doc.at("seed").get<std::uint64_t>(),
                                   doc.at("noise").get<double>());
  if (kind == "fcco")
    return make_fcco_instance(
        doc.at("n").get<int>(), doc.at("dim").get<int>(),
        doc.at("condition").get<std::string>() == "monotone" ? FccoCondition::monotone
                                                             : FccoCondition::smooth,
        doc.at("seed").get<std::uint64_t>(), doc.at("m").get<int>(),
        doc.at("noise").get<double>());
  if (kind == "fairness")
    return make_fairness_instance(
        doc.at("n_per_group").get<int>(),
        doc.at("thresholds").get<std::vector<double>>(), doc.at("kappa").get<double>(),
        doc.at("seed").get<std::uint64_t>(), group_from_json(doc.at("group_p")),
        group_from_json(doc.at("group_u")));
  throw Error("bad_instance_doc", "unknown instance kind: " + kind);
}

ConstrainedProblem load_instance_file(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

json solver_config_to_json(const SolverConfig& c) {
  json doc{{"schema_version", kSchemaVersion},
           {"beta", c.beta},
           {"kind", c.kind == PenaltyKind::hinge ? "hinge" : "squared_hinge"},
           {"eta", c.eta},
           {"T", c.T},
           {"seed", c.seed},
           {"gamma1", c.gamma1},
           {"gamma2", c.gamma2},
           {"allow_large_gamma", c.allow_large_gamma},
           {"batch", c.batch},
           {"batch_c", c.batch_c},
           {"batch_1i", c.batch_1i},
           {"batch_2k", c.batch_2k},
           {"output_rule", c.output_rule == OutputRule::uniform_random
                               ? "uniform_random"
                               : (c.output_rule == OutputRule::best_diagnostic
                                      ? "best_diagnostic"
                                      : "final")},
           {"stride", c.stride},
           {"g2_after_tracker_update", c.g2_after_tracker_update},
           {"audit_streams", c.audit_streams},
           {"divergence_radius_factor", c.divergence_radius_factor},
           {"epsilon_target", c.epsilon_target},
           {"theta", c.theta},
           {"diag_prox_iters", c.diag_prox_iters},
           {"diag_prox_tol", c.diag_prox_tol}};
  if (c.gamma1_prime) doc["gamma1_prime"] = *c.gamma1_prime;
  if (c.gamma2_prime) doc["gamma2_prime"] = *c.gamma2_prime;
  if (c.x0.size() > 0) doc["x0"] = vec_to_json(c.x0);
  return doc;
}

SolverConfig solver_config_from_json(const json& doc) {
  static const std::vector<std::string> known = {
      "schema_version", "beta", "kind", "eta", "T", "seed", "gamma1", "gamma2",
      "gamma1_prime", "gamma2_prime", "allow_large_gamma", "batch", "batch_c",
      "batch_1i", "batch_2k", "output_rule", "stride", "g2_after_tracker_update",
      "audit_streams", "x0", "divergence_radius_factor", "epsilon_target", "theta",
      "diag_prox_iters", "diag_prox_tol"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw Error("unknown_config_key", "solver config key '" + it.key() + "'");
  }
  SolverConfig c;
  c.beta = doc.value("beta", c.beta);
  if (doc.contains("kind")) {
    const std::string k = doc.at("kind").get<std::string>();
    if (k == "hinge")
      c.kind = PenaltyKind::hinge;
    else if (k == "squared_hinge")
      c.kind = PenaltyKind::squared_hinge;
    else
      throw Error("bad_config", "unknown penalty kind: " + k);
  }
  c.eta = doc.value("eta", c.eta);
  c.T = doc.value("T", c.T);
  c.seed = doc.value("seed", c.seed);
  c.gamma1 = doc.value("gamma1", c.gamma1);
  c.gamma2 = doc.value("gamma2", c.gamma2);
  if (doc.contains("gamma1_prime")) c.gamma1_prime = doc.at("gamma1_prime").get<double>();
  if (doc.contains("gamma2_prime")) c.gamma2_prime = doc.at("gamma2_prime").get<double>();
  c.allow_large_gamma = doc.value("allow_large_gamma", c.allow_large_gamma);
  c.batch = doc.value("batch", c.batch);
  c.batch_c = doc.value("batch_c", c.batch_c);
  c.batch_1i = doc.value("batch_1i", c.batch_1i);
  c.batch_2k = doc.value("batch_2k", c.batch_2k);
  if (doc.contains("output_rule")) {
    const std::string r = doc.at("output_rule").get<std::string>();
    if (r == "uniform_random")
      c.output_rule = OutputRule::uniform_random;
    else if (r == "best_diagnostic")
      c.output_rule = OutputRule::best_diagnostic;
    else if (r == "final")
      c.output_rule = OutputRule::final;
    else
      throw Error("bad_config", "unknown output_rule: " + r);
  }
  c.stride = doc.value("stride", c.stride);
  c.g2_after_tracker_update =
      doc.value("g2_after_tracker_update", c.g2_after_tracker_update);
  c.audit_streams = doc.value("audit_streams", c.audit_streams);
  if (doc.contains("x0")) c.x0 = vec_from_json(doc.at("x0"));
  c.divergence_radius_factor =
      doc.value("divergence_radius_factor", c.divergence_radius_factor);
  c.epsilon_target = doc.value("epsilon_target", c.epsilon_target);
  c.theta = doc.value("theta", c.theta);
  c.diag_prox_iters = doc.value("diag_prox_iters", c.diag_prox_iters);
  c.diag_prox_tol = doc.value("diag_prox_tol", c.diag_prox_tol);
  return c;
}

json certificate_to_json(const KktCertificate& cert) {
  return json{{"schema_version", kSchemaVersion},
              {"x", vec_to_json(cert.x)},
              {"x_bar", vec_to_json(cert.x_bar)},
              {"lambda", vec_to_json(cert.lambda)},
              {"stationarity", cert.stationarity},
              {"feasibility", cert.feasibility},
              {"complementarity", cert.complementarity},
              {"certified_epsilon", cert.certified_epsilon},
              {"displacement", cert.displacement},
              {"theta", cert.theta},
              {"prox_converged", cert.prox_converged},
              {"prox_suboptimality", cert.prox_suboptimality}};
}

std::uint64_t json_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json run_to_json(const RunResult& result, const SolverConfig& config,
                 const json& instance_doc) {
  json cfg = solver_config_to_json(config);
  json snapshots = json::array();
  for (const auto& rec : result.records)
    snapshots.push_back(json{{"t", rec.t}, {"x", vec_to_json(rec.x)}});
  return json{{"schema_version", kSchemaVersion},
              {"code_version", kCodeVersion},
              {"config", cfg},
              {"config_hash", json_hash(cfg)},
              {"instance", instance_doc},
              {"instance_hash", json_hash(instance_doc)},
              {"iterations", result.iterations},
              {"aborted", result.aborted},
              {"abort_reason", result.abort_reason},
              {"beta_warning", result.beta_warning},
              {"output", json{{"t", result.output_t}, {"x", vec_to_json(result.output_x)}}},
              {"x_final", vec_to_json(result.x_final)},
              {"wall_seconds", result.wall_seconds},
              {"snapshots", snapshots}};
}

std::string trajectory_to_csv(const RunResult& result) {
  std::ostringstream os;
  os << "t,phi_exact,f_exact,max_violation,g1_norm,g2_norm,"
        "tracker_mean_abs_constraints,tracker_mean_abs_inner,eta_t\n";
  for (const auto& r : result.records) {
    os << r.t << ',' << fmt(r.phi_exact) << ',' << fmt(r.f_exact) << ','
       << fmt(r.max_violation) << ',' << fmt(r.g1_norm) << ',' << fmt(r.g2_norm) << ','
       << fmt(r.tracker_mean_abs_constraints) << ',' << fmt(r.tracker_mean_abs_inner)
       << ',' << fmt(r.eta) << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("io_error", "write failed for " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw Error("bad_json", path.string() + ": " + e.what());
  }
  return doc;
}

void write_run_artifacts(const std::filesystem::path& dir, const RunResult& result,
                         const SolverConfig& config, const json& instance_doc,
                         const KktCertificate* certificate) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "run.json", run_to_json(result, config, instance_doc).dump(2) + "\n");
  write_text_file(dir / "trajectory.csv", trajectory_to_csv(result));
  if (certificate)
    write_text_file(dir / "certificate.json",
                    certificate_to_json(*certificate).dump(2) + "\n");
}

}  // namespace hpo
