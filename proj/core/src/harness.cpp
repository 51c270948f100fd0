#include "hpo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hpo/certify.hpp"
#include "hpo/instances.hpp"

namespace hpo {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// logging

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("HPO_LOG_LEVEL");
    if (!env) return LogLevel::warn;
    std::string v(env);
    if (v == "error") return LogLevel::error;
    if (v == "warn") return LogLevel::warn;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    std::cerr << "[hpo] warn: unknown HPO_LOG_LEVEL '" << v << "', using warn\n";
    return LogLevel::warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[hpo] " << names[static_cast<int>(level)] << ": " << msg << "\n";
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw Error("unknown_config_key", context + ": unknown key '" + it.key() + "'");
  }
}

PenaltyKind kind_from_string(const std::string& k) {
  if (k == "hinge") return PenaltyKind::hinge;
  if (k == "squared_hinge") return PenaltyKind::squared_hinge;
  throw Error("bad_config", "unknown penalty kind: " + k);
}

ScheduleSetting schedule_setting_from_string(const std::string& s) {
  if (s == "setting_one") return ScheduleSetting::setting_one;
  if (s == "setting_two_monotone") return ScheduleSetting::setting_two_monotone;
  if (s == "setting_two_smooth") return ScheduleSetting::setting_two_smooth;
  throw Error("bad_config", "unknown schedule setting: " + s);
}

CertControls parse_cert_controls(const json& doc) {
  check_keys(doc,
             {"theta", "prox_iters", "prox_tol", "activity_tol",
              "max_certified_snapshots"},
             "certification");
  CertControls c;
  c.theta = doc.value("theta", c.theta);
  c.prox_iters = doc.value("prox_iters", c.prox_iters);
  c.prox_tol = doc.value("prox_tol", c.prox_tol);
  c.activity_tol = doc.value("activity_tol", c.activity_tol);
  c.max_certified_snapshots =
      doc.value("max_certified_snapshots", c.max_certified_snapshots);
  return c;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw Error("bad_config", "experiment config must be an object");
  check_keys(doc,
             {"schema_version", "instance", "instance_path", "setting", "runs",
              "compare", "sweep", "certification", "output_dir", "workers",
              "epoch_iterations", "master_seed"},
             "config");
  if (doc.value("schema_version", 0) != kSchemaVersion)
    throw Error("bad_config", "unsupported schema_version");

  ExperimentConfig cfg;
  if (doc.contains("instance") == doc.contains("instance_path"))
    throw Error("bad_config", "exactly one of instance / instance_path is required");
  if (doc.contains("instance")) {
    cfg.instance_doc = doc.at("instance");
  } else {
    fs::path p = doc.at("instance_path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    cfg.instance_doc = read_json_file(p);
  }
  // validate eagerly so typos fail before any run starts
  instance_from_json(cfg.instance_doc);

  cfg.setting = doc.value("setting", cfg.setting);
  if (cfg.setting != "auto" && cfg.setting != "setting1" && cfg.setting != "setting2")
    throw Error("bad_config", "setting must be auto, setting1, or setting2");

  if (doc.contains("runs")) {
    for (const auto& r : doc.at("runs")) {
      check_keys(r, {"name", "solver", "certify"}, "runs[]");
      RunSpec spec;
      spec.name = r.at("name").get<std::string>();
      spec.solver_json = r.value("solver", json::object());
      solver_config_from_json(spec.solver_json);  // strict validation
      spec.certify = r.value("certify", true);
      spec.explicit_seed = spec.solver_json.contains("seed");
      for (const auto& other : cfg.runs)
        if (other.name == spec.name)
          throw Error("bad_config", "duplicate run name '" + spec.name + "'");
      cfg.runs.push_back(std::move(spec));
    }
  }

  if (doc.contains("compare")) {
    const json& c = doc.at("compare");
    check_keys(c, {"betas", "kinds", "base_solver", "paired"}, "compare");
    CompareSpec spec;
    spec.betas = c.at("betas").get<std::vector<double>>();
    for (const auto& k : c.value("kinds", std::vector<std::string>{"hinge", "squared_hinge"}))
      spec.kinds.push_back(kind_from_string(k));
    spec.base_solver = c.value("base_solver", json::object());
    solver_config_from_json(spec.base_solver);
    spec.paired = c.value("paired", true);
    cfg.compare = std::move(spec);
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, {"setting", "epsilon_targets", "multipliers", "base_solver", "max_T"},
               "sweep");
    SweepSpec spec;
    spec.setting = schedule_setting_from_string(s.value("setting", "setting_one"));
    spec.epsilon_targets = s.value("epsilon_targets", std::vector<double>{});
    if (s.contains("multipliers")) {
      for (const auto& m : s.at("multipliers")) {
        check_keys(m, {"c_gamma", "c_eta", "c_T"}, "sweep.multipliers[]");
        ScheduleMultipliers mult;
        mult.c_gamma = m.value("c_gamma", 1.0);
        mult.c_eta = m.value("c_eta", 1.0);
        mult.c_T = m.value("c_T", 1.0);
        spec.multipliers.push_back(mult);
      }
    } else {
      spec.multipliers.push_back({});
    }
    spec.base_solver = s.value("base_solver", json::object());
    solver_config_from_json(spec.base_solver);
    spec.max_T = s.value("max_T", 0L);
    cfg.sweep = std::move(spec);
  }

  if (doc.contains("certification"))
    cfg.cert = parse_cert_controls(doc.at("certification"));
  cfg.output_dir = doc.value("output_dir", std::string("out"));
  if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
  cfg.workers = doc.value("workers", 1);
  if (cfg.workers < 1) throw Error("bad_config", "workers must be >= 1");
  cfg.epoch_iterations = doc.value("epoch_iterations", cfg.epoch_iterations);
  cfg.master_seed = doc.value("master_seed", std::uint64_t{0});
  return cfg;
}

// ---------------------------------------------------------------------------
// cell execution

RunResult run_cell(const ConstrainedProblem& problem, const SolverConfig& config,
                   const std::string& setting) {
  bool s2 = setting == "setting2" || (setting == "auto" && problem.fcco.has_value());
  return s2 ? solve_setting2(problem, config) : solve_setting1(problem, config);
}

namespace {

struct CellOutcome {
  std::string name;
  SolverConfig config;
  bool ok = false;
  bool aborted = false;
  std::string error;
  double final_max_violation = std::numeric_limits<double>::quiet_NaN();
  double final_f_exact = std::numeric_limits<double>::quiet_NaN();
  double certified_epsilon = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0;
  long T = 0;
};

struct Cell {
  std::string name;
  SolverConfig config;
  bool certify = true;
};

void apply_cli_overrides(ExperimentConfig& cfg, const CliOverrides& cli) {
  if (cli.out) cfg.output_dir = *cli.out;
  if (cli.workers) cfg.workers = *cli.workers;
  if (cli.seed) {
    cfg.master_seed = *cli.seed;
    for (auto& r : cfg.runs) r.explicit_seed = false;  // force name-derived seeds
  }
}

// Runs one cell end to end: solve, write artifacts, certify.
CellOutcome execute_cell(const ExperimentConfig& cfg, const Cell& cell,
                         const std::string& setting) {
  CellOutcome out;
  out.name = cell.name;
  out.config = cell.config;
  out.T = cell.config.T;
  try {
    ConstrainedProblem problem = instance_from_json(cfg.instance_doc);
    RunResult result = run_cell(problem, cell.config, setting);
    out.wall_seconds = result.wall_seconds;
    if (result.beta_warning)
      log(LogLevel::warn, "cell " + cell.name +
                              ": beta does not strictly exceed the certified lower bound");
    const fs::path dir = cfg.output_dir / cell.name;
    if (!result.records.empty()) {
      const auto& last = result.records.back();
      out.final_max_violation = last.max_violation;
      out.final_f_exact = last.f_exact;
    }
    if (result.aborted) {
      out.aborted = true;
      out.error = result.abort_reason;
      write_run_artifacts(dir, result, cell.config, cfg.instance_doc);
      return out;
    }
    if (cell.certify && problem.has_exact()) {
      PenaltyObjective obj{&problem, cell.config.beta, cell.config.kind};
      KktCertificate cert =
          kkt_certificate(obj, result.output_x, cfg.cert.theta, cfg.cert.prox_iters,
                          cfg.cert.prox_tol, cfg.cert.activity_tol);
      out.certified_epsilon = cert.certified_epsilon;
      write_run_artifacts(dir, result, cell.config, cfg.instance_doc, &cert);
    } else {
      write_run_artifacts(dir, result, cell.config, cfg.instance_doc);
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
    log(LogLevel::error, "cell " + cell.name + " failed: " + out.error);
  }
  return out;
}

std::vector<CellOutcome> execute_cells(const ExperimentConfig& cfg,
                                       const std::vector<Cell>& cells,
                                       const std::string& setting) {
  std::vector<CellOutcome> outcomes(cells.size());
  if (cfg.workers <= 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      outcomes[i] = execute_cell(cfg, cells[i], setting);
    return outcomes;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      outcomes[i] = execute_cell(cfg, cells[i], setting);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(cfg.workers, static_cast<int>(cells.size()));
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return outcomes;
}

SolverConfig cell_solver_config(const json& solver_json, const CliOverrides& cli) {
  SolverConfig c = solver_config_from_json(solver_json);
  if (cli.stride) c.stride = *cli.stride;
  return c;
}

int load_and_parse(const fs::path& config_path, const CliOverrides& cli,
                   ExperimentConfig& cfg) {
  try {
    json doc = read_json_file(config_path);
    cfg = parse_experiment_config(doc, config_path.parent_path());
    apply_cli_overrides(cfg, cli);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << config_path.string() << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// commands

int cmd_run(const fs::path& config_path, const CliOverrides& cli) {
  ExperimentConfig cfg;
  if (int rc = load_and_parse(config_path, cli, cfg)) return rc;
  if (cfg.runs.empty()) {
    std::cerr << config_path.string() << ": config has no runs\n";
    return 2;
  }
  std::vector<Cell> cells;
  for (const auto& spec : cfg.runs) {
    Cell cell;
    cell.name = spec.name;
    cell.certify = spec.certify;
    try {
      cell.config = cell_solver_config(spec.solver_json, cli);
    } catch (const std::exception& e) {
      std::cerr << config_path.string() << ": run '" << spec.name << "': " << e.what()
                << "\n";
      return 2;
    }
    if (!spec.explicit_seed)
      cell.config.seed = rng::mix(cfg.master_seed, name_hash(spec.name));
    cells.push_back(std::move(cell));
  }
  auto outcomes = execute_cells(cfg, cells, cfg.setting);
  bool all_ok = true;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      all_ok = false;
      std::cerr << "run '" << o.name << "' "
                << (o.aborted ? "aborted: " : "failed: ") << o.error << "\n";
    } else {
      log(LogLevel::info, "run '" + o.name + "' done in " +
                              std::to_string(o.wall_seconds) + "s");
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_compare(const fs::path& config_path, const CliOverrides& cli) {
  ExperimentConfig cfg;
  if (int rc = load_and_parse(config_path, cli, cfg)) return rc;
  if (!cfg.compare) {
    std::cerr << config_path.string() << ": config has no compare section\n";
    return 2;
  }
  const CompareSpec& spec = *cfg.compare;
  std::vector<Cell> cells;
  for (PenaltyKind kind : spec.kinds) {
    for (double beta : spec.betas) {
      Cell cell;
      std::string kname = kind == PenaltyKind::hinge ? "hinge" : "squared_hinge";
      cell.name = kname + "_beta" + fmt_double(beta);
      cell.config = cell_solver_config(spec.base_solver, cli);
      cell.config.kind = kind;
      cell.config.beta = beta;
      cell.config.seed = spec.paired ? cfg.master_seed
                                     : rng::mix(cfg.master_seed, name_hash(cell.name));
      cells.push_back(std::move(cell));
    }
  }
  auto outcomes = execute_cells(cfg, cells, cfg.setting);

  std::ostringstream table;
  table << "name,kind,beta,status,final_max_violation,final_f_exact,certified_epsilon\n";
  bool all_ok = true;
  for (const auto& o : outcomes) {
    all_ok = all_ok && o.ok;
    table << o.name << ','
          << (o.config.kind == PenaltyKind::hinge ? "hinge" : "squared_hinge") << ','
          << fmt_double(o.config.beta) << ','
          << (o.ok ? "ok" : (o.aborted ? "aborted" : "error")) << ','
          << fmt_double(o.final_max_violation) << ',' << fmt_double(o.final_f_exact)
          << ',' << fmt_double(o.certified_epsilon) << '\n';
  }
  write_text_file(cfg.output_dir / "compare.csv", table.str());
  return all_ok ? 0 : 1;
}

int cmd_sweep(const fs::path& config_path, const CliOverrides& cli) {
  ExperimentConfig cfg;
  if (int rc = load_and_parse(config_path, cli, cfg)) return rc;
  if (!cfg.sweep) {
    std::cerr << config_path.string() << ": config has no sweep section\n";
    return 2;
  }
  const SweepSpec& spec = *cfg.sweep;
  ConstrainedProblem probe = instance_from_json(cfg.instance_doc);
  const int m = probe.num_constraints();
  const int n = probe.fcco ? probe.fcco->n : 1;

  struct SweepCell {
    double epsilon;
    ScheduleMultipliers mult;
    Cell cell;
  };
  std::vector<SweepCell> sweep_cells;
  for (double eps : spec.epsilon_targets) {
    for (std::size_t mi = 0; mi < spec.multipliers.size(); ++mi) {
      SweepCell sc;
      sc.epsilon = eps;
      sc.mult = spec.multipliers[mi];
      sc.cell.config = cell_solver_config(spec.base_solver, cli);
      Schedule sched = schedule_from_theorem(
          spec.setting, eps, sc.cell.config.beta, sc.cell.config.batch,
          sc.cell.config.batch_c, sc.cell.config.batch_1i, sc.cell.config.batch_2k, m, n,
          sc.mult);
      sc.cell.config.gamma2 = sched.gamma2;
      if (spec.setting != ScheduleSetting::setting_one)
        sc.cell.config.gamma1 = sched.gamma1;
      sc.cell.config.eta = sched.eta;
      sc.cell.config.T =
          spec.max_T > 0 ? std::min(sched.T, spec.max_T) : sched.T;
      if (sched.gamma_clamped)
        log(LogLevel::warn, "sweep cell eps=" + fmt_double(eps) + ": gamma clamped to 1/2");
      sc.cell.name = "eps" + fmt_double(eps) + "_m" + std::to_string(mi);
      sc.cell.config.seed = rng::mix(cfg.master_seed, name_hash(sc.cell.name));
      sweep_cells.push_back(std::move(sc));
    }
  }

  std::vector<Cell> cells;
  cells.reserve(sweep_cells.size());
  for (const auto& sc : sweep_cells) cells.push_back(sc.cell);
  std::string setting =
      spec.setting == ScheduleSetting::setting_one ? "setting1" : "setting2";
  auto outcomes = execute_cells(cfg, cells, setting);

  std::ostringstream table;
  table << "epsilon_target,c_gamma,c_eta,c_T,gamma2,eta,T,status,certified_epsilon,"
           "final_max_violation,wall_seconds\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    const auto& sc = sweep_cells[i];
    all_ok = all_ok && o.ok;
    table << fmt_double(sc.epsilon) << ',' << fmt_double(sc.mult.c_gamma) << ','
          << fmt_double(sc.mult.c_eta) << ',' << fmt_double(sc.mult.c_T) << ','
          << fmt_double(o.config.gamma2) << ',' << fmt_double(o.config.eta) << ','
          << o.T << ',' << (o.ok ? "ok" : (o.aborted ? "aborted" : "error")) << ','
          << fmt_double(o.certified_epsilon) << ',' << fmt_double(o.final_max_violation)
          << ',' << fmt_double(o.wall_seconds) << '\n';
  }
  write_text_file(cfg.output_dir / "sweep.csv", table.str());
  return all_ok ? 0 : 1;
}

namespace {

// Grid over the instance box for the PL diagnostic (1-D and 2-D only).
std::vector<Vec> pl_grid(const ConstrainedProblem& problem, int per_axis) {
  // Sample past the declared box so constraint-violating points are seen.
  const double r =
      problem.constants.box_radius > 0 ? 1.5 * problem.constants.box_radius : 3.0;
  std::vector<Vec> pts;
  if (problem.dimension == 1) {
    for (int i = 0; i <= per_axis; ++i)
      pts.push_back(Vec::Constant(1, -r + 2.0 * r * i / per_axis));
  } else if (problem.dimension == 2) {
    int side = std::max(2, static_cast<int>(std::sqrt(per_axis)));
    for (int i = 0; i <= side; ++i)
      for (int j = 0; j <= side; ++j) {
        Vec p(2);
        p << -r + 2.0 * r * i / side, -r + 2.0 * r * j / side;
        pts.push_back(p);
      }
  }
  return pts;
}

}  // namespace

int cmd_certify(const fs::path& run_json_path, const fs::path& instance_path,
                const CliOverrides& cli, double theta) {
  try {
    json run_doc = read_json_file(run_json_path);
    json instance_doc = instance_path.empty() ? run_doc.at("instance")
                                              : read_json_file(instance_path);
    ConstrainedProblem problem = instance_from_json(instance_doc);
    if (!problem.has_exact()) {
      std::cerr << "instance has no exact evaluators; cannot certify\n";
      return 1;
    }
    SolverConfig config = solver_config_from_json(run_doc.at("config"));
    PenaltyObjective obj{&problem, config.beta, config.kind};
    CertControls cert;
    if (theta > 0) cert.theta = theta;

    auto read_vec = [](const json& arr) {
      Vec v(arr.size());
      for (std::size_t i = 0; i < arr.size(); ++i)
        v[static_cast<int>(i)] = arr[i].get<double>();
      return v;
    };

    json report;
    report["schema_version"] = kSchemaVersion;
    report["code_version"] = kCodeVersion;
    report["instance_hash"] = json_hash(instance_doc);

    Vec x_out = read_vec(run_doc.at("output").at("x"));
    KktCertificate out_cert = kkt_certificate(obj, x_out, cert.theta, cert.prox_iters,
                                              cert.prox_tol, cert.activity_tol);
    report["output_certificate"] = certificate_to_json(out_cert);

    const json& snapshots = run_doc.at("snapshots");
    const std::size_t cert_stride =
        std::max<std::size_t>(1, snapshots.size() / cert.max_certified_snapshots);
    json snap_certs = json::array();
    json frvp_rows = json::array();
    bool all_vacuous = true;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
      Vec x = read_vec(snapshots[i].at("x"));
      long t = snapshots[i].at("t").get<long>();
      FrvpEstimate fr = frvp_min_singular(problem, x);
      if (fr.any_violation) all_vacuous = false;
      frvp_rows.push_back(json{{"t", t},
                               {"any_violation", fr.any_violation},
                               {"num_violating", fr.violating.size()},
                               {"sigma_min", fr.sigma_min},
                               {"delta", fr.delta},
                               {"rank_deficient", fr.rank_deficient}});
      if (i % cert_stride == 0 || i + 1 == snapshots.size()) {
        KktCertificate c = kkt_certificate(obj, x, cert.theta, cert.prox_iters,
                                           cert.prox_tol, cert.activity_tol);
        json cj = certificate_to_json(c);
        cj["t"] = t;
        snap_certs.push_back(std::move(cj));
      }
    }
    report["snapshot_certificates"] = snap_certs;
    report["regularity"] = json{{"frvp", frvp_rows}, {"all_vacuous", all_vacuous}};
    if (problem.num_constraints() == 1 && problem.dimension <= 2) {
      PlEstimate pl = pl_regularity_estimate(problem, pl_grid(problem, 4000));
      report["regularity"]["pl"] = json{{"mu_hat", pl.mu_hat},
                                        {"c_hat", pl.c_hat},
                                        {"delta_hat", pl.delta_hat},
                                        {"vacuous", pl.vacuous},
                                        {"num_samples", pl.num_samples}};
    }

    fs::path out_dir = cli.out ? fs::path(*cli.out) : run_json_path.parent_path();
    write_text_file(out_dir / "certificate.json",
                    certificate_to_json(out_cert).dump(2) + "\n");
    write_text_file(out_dir / "certify_report.json", report.dump(2) + "\n");
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "certify failed: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// plot

namespace {

struct TrajectoryTable {
  std::vector<double> t, phi, f, viol;
};

TrajectoryTable parse_trajectory_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("bad_csv", path.string() + ": empty file");
  const std::string expected =
      "t,phi_exact,f_exact,max_violation,g1_norm,g2_norm,"
      "tracker_mean_abs_constraints,tracker_mean_abs_inner,eta_t";
  if (line != expected) throw Error("bad_csv", path.string() + ": unexpected header");
  TrajectoryTable tab;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(cell == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                    : std::stod(cell));
      } catch (const std::exception&) {
        throw Error("bad_csv", path.string() + ": non-numeric cell '" + cell + "'");
      }
    }
    if (row.size() != 9)
      throw Error("bad_csv", path.string() + ": wrong column count");
    tab.t.push_back(row[0]);
    tab.phi.push_back(row[1]);
    tab.f.push_back(row[2]);
    tab.viol.push_back(row[3]);
  }
  if (tab.t.empty()) throw Error("bad_csv", path.string() + ": no data rows");
  return tab;
}

std::string fmt_svg(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

struct Series {
  std::string name;
  std::string color;
  const std::vector<double>* x;
  const std::vector<double>* y;
};

std::string svg_chart(const std::string& title, const std::vector<Series>& series) {
  const double width = 640, height = 400, ml = 60, mr = 20, mt = 40, mb = 40;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x->size(); ++i) {
      double xv = (*s.x)[i], yv = (*s.y)[i];
      if (std::isnan(yv)) continue;
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (!(xmin <= xmax) || !(ymin <= ymax))
    throw Error("bad_csv", "no finite data to plot");
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto sy = [&](double v) {
    return height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-family=\"monospace\" font-size=\"14\">" << title << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
     << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
     << height - mb << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"" << height - mb + 16
     << "\" font-family=\"monospace\" font-size=\"10\">" << fmt_svg(xmin) << "</text>\n";
  os << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 16
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
     << fmt_svg(xmax) << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << height - mb
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
     << fmt_svg(ymin) << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 4
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
     << fmt_svg(ymax) << "</text>\n";

  double legend_y = mt;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x->size(); ++i) {
      if (std::isnan((*s.y)[i])) continue;
      if (!first) os << ' ';
      os << fmt_svg(sx((*s.x)[i])) << ',' << fmt_svg(sy((*s.y)[i]));
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << width - mr - 4 << "\" y=\"" << legend_y
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" fill=\""
       << s.color << "\">" << s.name << "</text>\n";
    legend_y += 14;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

int cmd_plot(const std::vector<fs::path>& csv_paths, const fs::path& out_dir) {
  if (csv_paths.empty()) {
    std::cerr << "plot: no input CSVs\n";
    return 2;
  }
  try {
    constexpr double kEpochIterations = 400;
    // Build everything before writing anything so failures leave no partial files.
    std::vector<std::pair<fs::path, std::string>> outputs;
    for (const auto& path : csv_paths) {
      TrajectoryTable tab = parse_trajectory_csv(path);
      std::vector<double> epoch(tab.t.size());
      for (std::size_t i = 0; i < epoch.size(); ++i)
        epoch[i] = tab.t[i] / kEpochIterations;
      const std::string stem = path.stem().string();
      outputs.emplace_back(
          out_dir / (stem + "_violation.svg"),
          svg_chart(stem + ": max constraint value vs epoch",
                    {{"max_violation", "#c0392b", &epoch, &tab.viol}}));
      outputs.emplace_back(
          out_dir / (stem + "_objective.svg"),
          svg_chart(stem + ": objective and violation vs epoch",
                    {{"f_exact", "#2980b9", &epoch, &tab.f},
                     {"max_violation", "#c0392b", &epoch, &tab.viol}}));
    }
    for (const auto& [path, content] : outputs) write_text_file(path, content);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "plot failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hpo
