#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "hpo/certify.hpp"
#include "hpo/oracle.hpp"
#include "hpo/solver.hpp"

namespace hpo {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "hpo-0.1.0";

// Instances serialize as their generator descriptor; loading re-invokes the
// generator, so the round-trip is exact by construction.
nlohmann::json instance_to_json(const ConstrainedProblem& problem);
ConstrainedProblem instance_from_json(const nlohmann::json& doc);
ConstrainedProblem load_instance_file(const std::filesystem::path& path);

nlohmann::json solver_config_to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& doc);

nlohmann::json certificate_to_json(const KktCertificate& cert);

// FNV-1a over the canonical dump; stable across runs.
std::uint64_t json_hash(const nlohmann::json& doc);

// run.json: config echo, hashes, output iterate, snapshot points.
nlohmann::json run_to_json(const RunResult& result, const SolverConfig& config,
                           const nlohmann::json& instance_doc);

// CSV columns: t, phi_exact, f_exact, max_violation, g1_norm, g2_norm,
// tracker_mean_abs_constraints, tracker_mean_abs_inner, eta_t
std::string trajectory_to_csv(const RunResult& result);

void write_text_file(const std::filesystem::path& path, const std::string& content);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Writes run.json + trajectory.csv (+ certificate.json when given) into dir.
void write_run_artifacts(const std::filesystem::path& dir, const RunResult& result,
                         const SolverConfig& config, const nlohmann::json& instance_doc,
                         const KktCertificate* certificate = nullptr);

}  // namespace hpo
