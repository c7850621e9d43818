#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bridge::cli {

using nlohmann::json;

/// Malformed or incomplete configuration (exit status 2).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitStatus : int { ok = 0, runtime_failure = 1, parse_failure = 2, precondition_failure = 3 };

struct Artifact {
  std::filesystem::path path;
  std::string content;
};

struct RunResult {
  std::string summary;
  json report;
  std::vector<Artifact> artifacts;
};

/// Computes every artifact of a scenario in memory. Nothing touches the
/// filesystem here.
RunResult run_scenario(const json& config, const std::filesystem::path& out_dir);

/// Writes all artifacts or none: each goes to a temporary file first and is
/// renamed into place once every write succeeded.
void write_artifacts(const std::vector<Artifact>& artifacts);

/// BRIDGE_OUT when set, else config "output_dir", else the working directory.
std::filesystem::path output_dir(const json& config);

json parse_config_text(const std::string& text);
json load_config(const std::filesystem::path& path);

/// Maps the exception in flight to an exit status and prints its message.
int report_failure(const std::string& context);

std::vector<std::string> builtin_names();
std::optional<std::string> builtin_config(const std::string& name);

struct SweepSpec {
  std::string path;  // dotted key below "parameters"
  double start = 0.0, stop = 0.0, step = 0.0;

  std::vector<double> values() const;
};

SweepSpec parse_sweep(const std::string& text);

/// Copy of `config` with the swept parameter set and output file names
/// suffixed so sweep points never share files.
json sweep_point(const json& config, const SweepSpec& spec, double value);

}  // namespace bridge::cli
