#pragma once
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dkp/scatter.hpp"

namespace dkp {

//! Resolved parameters, sorted by key for deterministic echoes.
using ParamMap = std::map<std::string, std::string>;

//! Flat key = value file; '#' starts a comment. Unknown keys are the caller's
//! to reject via validate_keys.
ParamMap parse_config_file(const std::filesystem::path& path);

//! Throws UsageError naming the first key not in `allowed`.
void validate_keys(const ParamMap& map, const std::set<std::string>& allowed,
                   const std::string& context);

//! 17 significant digits, round-trip exact for doubles.
std::string format_double(double v);

double to_double(const std::string& key, const std::string& value);
int to_int(const std::string& key, const std::string& value);

std::string fnv1a_hex(const std::string& bytes);

//! Minimal deterministic JSON writer (insertion-ordered object fields).
class JsonObject {
 public:
  JsonObject& field(const std::string& key, const std::string& str);
  JsonObject& field(const std::string& key, double v);
  JsonObject& field(const std::string& key, int v);
  JsonObject& field_raw(const std::string& key, const std::string& raw_json);
  JsonObject& field_null(const std::string& key);
  std::string str() const;
  static std::string escape(const std::string& s);
  static std::string array(const std::vector<double>& v);

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct RunManifest {
  std::string command;
  ParamMap config_echo;
  std::string artifact_version;
  std::string started;
  std::string finished;
  std::vector<std::pair<std::string, std::string>> outputs;  // (path, hash)
  int status_code = 0;       // 0 ok, 1 runtime error
  std::string status_message = "ok";

  std::string to_json() const;
};

struct RunResult {
  std::filesystem::path dir;
  RunManifest manifest;
};

//! Dispatch one resolved command, write its outputs into a fresh run
//! directory under runs_root, and commit the manifest last.  Module errors
//! are captured into manifest.status (status_code 1).
RunResult run_and_persist(const std::string& command, const ParamMap& resolved,
                          const std::filesystem::path& runs_root);

//! Plot-ready CSV extracted from a completed run directory.
void emit_plot_data(const std::filesystem::path& run_dir, const std::string& kind,
                    const std::filesystem::path& out_path);

// ---- resolved-map helpers shared by the CLI and tests ----
StepProblem step_problem_from(const ParamMap& map);
std::string scatter_result_json(const ScatterSolution& s);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string dump_representation(Rep rep);
std::string algebra_report_json();
bool algebra_ok();

const std::set<std::string>& scatter_keys();
const std::set<std::string>& evolve_keys();

}  // namespace dkp
