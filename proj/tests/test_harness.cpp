#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hpo/harness.hpp"
#include "hpo/instances.hpp"

using namespace hpo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("hpo_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json exemplar_run_config(const fs::path& out_dir, long T = 300) {
  return json{{"schema_version", 1},
              {"instance", {{"schema_version", 1}, {"kind", "exemplar_1d"}, {"noise", 0.0}}},
              {"output_dir", out_dir.string()},
              {"master_seed", 7},
              {"runs",
               json::array({{{"name", "main"},
                             {"solver",
                              {{"beta", 4.0},
                               {"eta", 1e-3},
                               {"T", T},
                               {"x0", json::array({2.0})}}}}})}};
}

fs::path write_config(const fs::path& dir, const json& doc,
                      const std::string& name = "config.json") {
  fs::path p = dir / name;
  write_text_file(p, doc.dump(2) + "\n");
  return p;
}

}  // namespace

TEST_CASE("experiment config parsing is strict") {
  json good = exemplar_run_config("/tmp/hpo_unused");
  CHECK_NOTHROW(parse_experiment_config(good, "."));

  json bad = good;
  bad["typo_key"] = 1;
  CHECK_THROWS_WITH_AS(parse_experiment_config(bad, "."),
                       doctest::Contains("unknown_config_key"), Error);

  json nested = good;
  nested["runs"][0]["solver"]["etaa"] = 1e-3;
  CHECK_THROWS_WITH_AS(parse_experiment_config(nested, "."),
                       doctest::Contains("unknown_config_key"), Error);

  json both = good;
  both["instance_path"] = "foo.json";
  CHECK_THROWS_WITH_AS(parse_experiment_config(both, "."),
                       doctest::Contains("bad_config"), Error);

  json neither = good;
  neither.erase("instance");
  CHECK_THROWS_WITH_AS(parse_experiment_config(neither, "."),
                       doctest::Contains("bad_config"), Error);

  json dup = good;
  dup["runs"].push_back(dup["runs"][0]);
  CHECK_THROWS_WITH_AS(parse_experiment_config(dup, "."),
                       doctest::Contains("duplicate run name"), Error);

  json badver = good;
  badver["schema_version"] = 99;
  CHECK_THROWS_WITH_AS(parse_experiment_config(badver, "."),
                       doctest::Contains("bad_config"), Error);

  json badsetting = good;
  badsetting["setting"] = "setting3";
  CHECK_THROWS_WITH_AS(parse_experiment_config(badsetting, "."),
                       doctest::Contains("bad_config"), Error);

  json badworkers = good;
  badworkers["workers"] = 0;
  CHECK_THROWS_WITH_AS(parse_experiment_config(badworkers, "."),
                       doctest::Contains("bad_config"), Error);

  json badinstance = good;
  badinstance["instance"]["kind"] = "mystery";
  CHECK_THROWS_AS(parse_experiment_config(badinstance, "."), Error);
}

TEST_CASE("instances round-trip exactly through JSON for every catalog kind") {
  std::vector<ConstrainedProblem> kinds;
  kinds.push_back(make_exemplar_1d(0.05));
  kinds.push_back(make_quadratic_instance(3, 4, 11, 0.2));
  kinds.push_back(make_fcco_instance(4, 2, FccoCondition::monotone, 13, 2, 0.1));
  kinds.push_back(make_fairness_instance(30, {-1.0, 0.0, 1.0}, 0.01, 17));

  rng::Prng prng(5);
  for (const auto& prob : kinds) {
    json doc = instance_to_json(prob);
    CHECK(doc.at("schema_version") == 1);
    ConstrainedProblem back = instance_from_json(doc);
    CHECK(instance_to_json(back) == doc);
    CHECK(back.dimension == prob.dimension);
    CHECK(back.num_constraints() == prob.num_constraints());
    // behavioral equality at random points, bit for bit
    for (int trial = 0; trial < 5; ++trial) {
      Vec x(prob.dimension);
      for (int i = 0; i < prob.dimension; ++i) x[i] = 2.0 * prng.uniform() - 1.0;
      FullEval a = exact_full_eval(prob, x);
      FullEval b = exact_full_eval(back, x);
      CHECK(a.F == b.F);
      CHECK((a.h.array() == b.h.array()).all());
      CHECK((a.grad_F.array() == b.grad_F.array()).all());
    }
  }

  // file round trip
  fs::path dir = fresh_dir("instance_file");
  json doc = instance_to_json(kinds[1]);
  write_text_file(dir / "inst.json", doc.dump() + "\n");
  ConstrainedProblem loaded = load_instance_file(dir / "inst.json");
  CHECK(instance_to_json(loaded) == doc);
}

TEST_CASE("solver config round-trips and rejects unknown keys") {
  SolverConfig c;
  c.beta = 2.5;
  c.kind = PenaltyKind::squared_hinge;
  c.eta = 5e-4;
  c.T = 1234;
  c.seed = 99;
  c.gamma2 = 0.25;
  c.gamma2_prime = 0.1;
  c.batch_c = 1;
  c.batch_2k = 3;
  c.output_rule = OutputRule::best_diagnostic;
  c.stride = 7;
  c.x0 = Vec::Constant(2, 1.5);
  json doc = solver_config_to_json(c);
  SolverConfig back = solver_config_from_json(doc);
  CHECK(back.beta == c.beta);
  CHECK(back.kind == c.kind);
  CHECK(back.eta == c.eta);
  CHECK(back.T == c.T);
  CHECK(back.seed == c.seed);
  CHECK(back.gamma2 == c.gamma2);
  REQUIRE(back.gamma2_prime.has_value());
  CHECK(*back.gamma2_prime == 0.1);
  CHECK(back.batch_2k == 3);
  CHECK(back.output_rule == OutputRule::best_diagnostic);
  CHECK(back.stride == 7);
  CHECK((back.x0.array() == c.x0.array()).all());
  CHECK(solver_config_to_json(back) == doc);

  json bad = doc;
  bad["step_size"] = 0.1;
  CHECK_THROWS_WITH_AS(solver_config_from_json(bad),
                       doctest::Contains("unknown_config_key"), Error);
}

TEST_CASE("trajectory CSV format") {
  auto prob = make_exemplar_1d(0.0);
  SolverConfig cfg;
  cfg.beta = 4.0;
  cfg.eta = 1e-3;
  cfg.T = 10;
  cfg.stride = 2;
  cfg.x0 = Vec::Constant(1, 2.0);
  auto res = solve_setting1(prob, cfg);
  std::string csv = trajectory_to_csv(res);
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "t,phi_exact,f_exact,max_violation,g1_norm,g2_norm,"
        "tracker_mean_abs_constraints,tracker_mean_abs_inner,eta_t");
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) {
      ++rows;
      // setting 1 has no inner tracker: column 8 must be the literal "nan"
      std::istringstream ls(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 9);
      CHECK(cells[7] == "nan");
    }
  CHECK(rows == static_cast<int>(res.records.size()));
}

TEST_CASE("cmd_run writes deterministic artifacts and certifies") {
  fs::path dir = fresh_dir("cmd_run");
  fs::path cfg_path = write_config(dir, exemplar_run_config(dir / "out"));
  CHECK(cmd_run(cfg_path, {}) == 0);
  fs::path run_dir = dir / "out" / "main";
  CHECK(fs::exists(run_dir / "run.json"));
  CHECK(fs::exists(run_dir / "trajectory.csv"));
  CHECK(fs::exists(run_dir / "certificate.json"));

  json run_doc = read_json_file(run_dir / "run.json");
  CHECK(run_doc.at("schema_version") == 1);
  CHECK(run_doc.contains("config"));
  CHECK(run_doc.contains("instance_hash"));
  CHECK(run_doc.contains("config_hash"));
  CHECK(run_doc.at("code_version") == kCodeVersion);

  // byte-identical on repeat
  fs::path dir2 = fresh_dir("cmd_run_repeat");
  fs::path cfg2 = write_config(dir2, exemplar_run_config(dir2 / "out"));
  CHECK(cmd_run(cfg2, {}) == 0);
  CHECK(slurp(run_dir / "trajectory.csv") ==
        slurp(dir2 / "out" / "main" / "trajectory.csv"));

  CHECK(cmd_run(dir / "missing.json", {}) == 2);
}

TEST_CASE("cli overrides: --out and --seed-override") {
  fs::path dir = fresh_dir("cmd_run_cli");
  json doc = exemplar_run_config(dir / "ignored");
  fs::path cfg_path = write_config(dir, doc);

  CliOverrides cli;
  cli.out = (dir / "redirected").string();
  cli.seed = 7;  // same as master_seed in the config
  CHECK(cmd_run(cfg_path, cli) == 0);
  CHECK(fs::exists(dir / "redirected" / "main" / "trajectory.csv"));
  CHECK_FALSE(fs::exists(dir / "ignored"));

  // same master seed with and without the override -> identical bytes
  fs::path dir2 = fresh_dir("cmd_run_cli2");
  fs::path cfg2 = write_config(dir2, exemplar_run_config(dir2 / "out"));
  CHECK(cmd_run(cfg2, {}) == 0);
  CHECK(slurp(dir / "redirected" / "main" / "trajectory.csv") ==
        slurp(dir2 / "out" / "main" / "trajectory.csv"));
}

TEST_CASE("cmd_compare emits one row per (kind, beta) cell") {
  fs::path dir = fresh_dir("cmd_compare");
  json doc{{"schema_version", 1},
           {"instance", {{"schema_version", 1}, {"kind", "exemplar_1d"}, {"noise", 0.0}}},
           {"output_dir", (dir / "out").string()},
           {"master_seed", 3},
           {"compare",
            {{"betas", json::array({1.0, 4.0})},
             {"kinds", json::array({"hinge", "squared_hinge"})},
             {"base_solver",
              {{"eta", 1e-3}, {"T", 400}, {"x0", json::array({2.0})}}}}}};
  fs::path cfg_path = write_config(dir, doc);
  CHECK(cmd_compare(cfg_path, {}) == 0);
  std::string table = slurp(dir / "out" / "compare.csv");
  std::istringstream is(table);
  std::string line;
  std::getline(is, line);
  CHECK(line ==
        "name,kind,beta,status,final_max_violation,final_f_exact,certified_epsilon");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
  CHECK(fs::exists(dir / "out" / "hinge_beta4" / "trajectory.csv"));
  CHECK(fs::exists(dir / "out" / "squared_hinge_beta1" / "trajectory.csv"));
}

TEST_CASE("cmd_sweep derives schedules with the theorem's epsilon dependence") {
  fs::path dir = fresh_dir("cmd_sweep");
  json doc{{"schema_version", 1},
           {"instance", {{"schema_version", 1}, {"kind", "exemplar_1d"}, {"noise", 0.0}}},
           {"output_dir", (dir / "out").string()},
           {"master_seed", 5},
           {"sweep",
            {{"setting", "setting_one"},
             {"epsilon_targets", json::array({1.0, 0.5})},
             {"multipliers",
              json::array({{{"c_gamma", 0.1}, {"c_eta", 1e-4}, {"c_T", 1.0}}})},
             {"base_solver", {{"beta", 1.0}}}}}};
  fs::path cfg_path = write_config(dir, doc);
  CHECK(cmd_sweep(cfg_path, {}) == 0);

  std::string table = slurp(dir / "out" / "sweep.csv");
  std::istringstream is(table);
  std::string line;
  std::getline(is, line);  // header
  std::vector<long> Ts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 11);
    CHECK(cells[7] == "ok");
    Ts.push_back(std::stol(cells[6]));
  }
  REQUIRE(Ts.size() == 2);  // one row per grid cell
  CHECK(Ts[1] == 64 * Ts[0]);  // halving epsilon multiplies T by 2^6

  // empty grid is a no-op with exit 0
  fs::path dir2 = fresh_dir("cmd_sweep_empty");
  json empty = doc;
  empty["output_dir"] = (dir2 / "out").string();
  empty["sweep"]["epsilon_targets"] = json::array();
  CHECK(cmd_sweep(write_config(dir2, empty), {}) == 0);
  std::istringstream is2(slurp(dir2 / "out" / "sweep.csv"));
  int lines = 0;
  while (std::getline(is2, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 1);  // header only
}

TEST_CASE("cmd_certify produces a certificate and a regularity report") {
  fs::path dir = fresh_dir("cmd_certify");
  fs::path cfg_path = write_config(dir, exemplar_run_config(dir / "out", 2000));
  REQUIRE(cmd_run(cfg_path, {}) == 0);
  fs::path run_json = dir / "out" / "main" / "run.json";

  CHECK(cmd_certify(run_json, {}, {}, 0) == 0);
  CHECK(fs::exists(dir / "out" / "main" / "certificate.json"));
  json report = read_json_file(dir / "out" / "main" / "certify_report.json");
  CHECK(report.at("schema_version") == 1);
  CHECK(report.contains("output_certificate"));
  CHECK_FALSE(report.at("snapshot_certificates").empty());
  // the run starts at x0 = 2 which violates, so the report is not all-vacuous
  CHECK_FALSE(report.at("regularity").at("all_vacuous").get<bool>());
  for (const auto& row : report.at("regularity").at("frvp"))
    if (row.at("any_violation").get<bool>()) CHECK(row.at("sigma_min").get<double>() > 0);
  // single-constraint 1-D instance gets the sampled PL estimate
  CHECK(report.at("regularity").contains("pl"));
  CHECK(report.at("regularity").at("pl").at("mu_hat").get<double>() > 0);

  // feasible-everywhere run -> all-vacuous report
  fs::path dir2 = fresh_dir("cmd_certify_vacuous");
  json feasible = exemplar_run_config(dir2 / "out", 50);
  feasible["runs"][0]["solver"]["x0"] = json::array({0.0});
  feasible["runs"][0]["solver"]["beta"] = 0.5;
  REQUIRE(cmd_run(write_config(dir2, feasible), {}) == 0);
  CHECK(cmd_certify(dir2 / "out" / "main" / "run.json", {}, {}, 0) == 0);
  json report2 = read_json_file(dir2 / "out" / "main" / "certify_report.json");
  CHECK(report2.at("regularity").at("all_vacuous").get<bool>());

  CHECK(cmd_certify(dir / "nonexistent.json", {}, {}, 0) == 1);
}

TEST_CASE("cmd_plot renders deterministic SVGs and fails cleanly") {
  fs::path dir = fresh_dir("cmd_plot");
  fs::path cfg_path = write_config(dir, exemplar_run_config(dir / "out"));
  REQUIRE(cmd_run(cfg_path, {}) == 0);
  fs::path csv = dir / "out" / "main" / "trajectory.csv";

  fs::path plots = dir / "plots";
  fs::create_directories(plots);
  CHECK(cmd_plot({csv}, plots) == 0);
  fs::path v = plots / "trajectory_violation.svg";
  fs::path o = plots / "trajectory_objective.svg";
  REQUIRE(fs::exists(v));
  REQUIRE(fs::exists(o));
  std::string first = slurp(v);
  CHECK(cmd_plot({csv}, plots) == 0);
  CHECK(slurp(v) == first);
  CHECK(first.find("<svg") != std::string::npos);
  CHECK(first.find("polyline") != std::string::npos);

  // header-only CSV: error, and no partial outputs
  fs::path bad_dir = dir / "bad_plots";
  fs::create_directories(bad_dir);
  fs::path empty_csv = dir / "empty.csv";
  write_text_file(empty_csv,
                  "t,phi_exact,f_exact,max_violation,g1_norm,g2_norm,"
                  "tracker_mean_abs_constraints,tracker_mean_abs_inner,eta_t\n");
  CHECK(cmd_plot({empty_csv}, bad_dir) == 1);
  CHECK(fs::is_empty(bad_dir));

  // a failing input later in the list must not leave partial files either
  fs::path mixed_dir = dir / "mixed_plots";
  fs::create_directories(mixed_dir);
  CHECK(cmd_plot({csv, empty_csv}, mixed_dir) == 1);
  CHECK(fs::is_empty(mixed_dir));

  fs::path malformed = dir / "malformed.csv";
  write_text_file(malformed, "not,a,trajectory\n1,2,3\n");
  CHECK(cmd_plot({malformed}, bad_dir) == 1);
}

TEST_CASE("parallel execution matches single-worker results per cell") {
  auto make_doc = [](const fs::path& out, int workers) {
    json doc{{"schema_version", 1},
             {"instance",
              {{"schema_version", 1}, {"kind", "quadratic"}, {"dim", 2}, {"m", 3},
               {"seed", 4}, {"noise", 0.1}}},
             {"output_dir", out.string()},
             {"master_seed", 21},
             {"workers", workers},
             {"runs", json::array()}};
    for (int i = 0; i < 4; ++i)
      doc["runs"].push_back({{"name", "cell" + std::to_string(i)},
                             {"solver", {{"beta", 2.0}, {"eta", 1e-3}, {"T", 300},
                                         {"batch_c", 2}}}});
    return doc;
  };
  fs::path d1 = fresh_dir("parallel_1");
  fs::path d4 = fresh_dir("parallel_4");
  CHECK(cmd_run(write_config(d1, make_doc(d1 / "out", 1)), {}) == 0);
  CHECK(cmd_run(write_config(d4, make_doc(d4 / "out", 4)), {}) == 0);
  for (int i = 0; i < 4; ++i) {
    std::string name = "cell" + std::to_string(i);
    CHECK(slurp(d1 / "out" / name / "trajectory.csv") ==
          slurp(d4 / "out" / name / "trajectory.csv"));
  }
}

TEST_CASE("log level resolves from the environment with a warn default") {
  // the test binary does not set HPO_LOG_LEVEL; default must be warn
  CHECK(log_level() == LogLevel::warn);
}
