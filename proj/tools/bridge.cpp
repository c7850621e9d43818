// bridge: scenario runner for the suspension-bridge models.
//
//   bridge list
//   bridge run <config.json>
//   bridge run --builtin <name>
//   bridge sweep <config.json> --param k=2:4:0.1 [--jobs N]
//
// Exit status: 0 ok, 1 runtime failure, 2 parse error, 3 precondition violated.

#include <algorithm>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "bridge/io.hpp"
#include "scenario.hpp"

using namespace bridge::cli;

namespace {

int cmd_list() {
  for (const auto& n : builtin_names()) std::cout << n << "\n";
  return ok;
}

int cmd_run(const std::string& config_path, const std::string& builtin) {
  const std::string context = builtin.empty() ? config_path : builtin;
  try {
    json cfg;
    if (!builtin.empty()) {
      const auto text = builtin_config(builtin);
      if (!text) throw ParseError("unknown builtin '" + builtin + "' (see `bridge list`)");
      cfg = parse_config_text(*text);
    } else {
      cfg = load_config(config_path);
    }
    const auto result = run_scenario(cfg, output_dir(cfg));
    write_artifacts(result.artifacts);
    std::cout << result.summary << "\n";
    return ok;
  } catch (...) {
    return report_failure(context);
  }
}

struct PointOutcome {
  double value = 0.0;
  int status = ok;
  std::string summary;
  json report;
};

int cmd_sweep(const std::string& config_path, const std::string& param, unsigned jobs) {
  json cfg;
  SweepSpec spec;
  std::vector<json> points;
  try {
    cfg = load_config(config_path);
    spec = parse_sweep(param);
    for (double v : spec.values()) points.push_back(sweep_point(cfg, spec, v));
  } catch (...) {
    return report_failure(config_path);
  }
  const auto dir = output_dir(cfg);
  const auto values = spec.values();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  std::vector<PointOutcome> outcomes(points.size());
  for (std::size_t start = 0; start < points.size(); start += jobs) {
    std::vector<std::future<PointOutcome>> batch;
    for (std::size_t i = start; i < std::min(points.size(), start + jobs); ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        PointOutcome o;
        o.value = values[i];
        try {
          auto r = run_scenario(points[i], dir);
          write_artifacts(r.artifacts);
          o.summary = r.summary;
          o.report = std::move(r.report);
        } catch (...) {
          o.status = report_failure(points[i].value("name", std::string("sweep point")));
        }
        return o;
      }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) outcomes[start + k] = batch[k].get();
  }

  bridge::io::CsvWriter table({spec.path, "status", "termination", "R_est"});
  int worst = ok;
  for (const auto& o : outcomes) {
    if (!o.summary.empty()) std::cout << o.summary << "\n";
    worst = std::max(worst, o.status);
    const std::string term = o.report.is_object() ? o.report.value("termination", std::string("")) : "";
    std::string r_est = "";
    if (o.report.is_object() && o.report.contains("R_est") && o.report["R_est"].is_number()) {
      r_est = bridge::io::fmt(o.report["R_est"].get<double>());
    }
    table.raw_row({bridge::io::fmt(o.value), std::to_string(o.status), term, r_est});
  }
  try {
    const std::string base = cfg.value("name", std::string("sweep"));
    write_artifacts({{dir / (base + "_sweep_" + spec.path + ".csv"), table.str()}});
  } catch (...) {
    worst = std::max(worst, report_failure("sweep summary"));
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear suspension-bridge models: scenario runner"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List builtin scenarios");

  std::string config_path, builtin;
  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config or a builtin");
  run->add_option("config", config_path, "Scenario config (JSON)");
  run->add_option("--builtin", builtin, "Name of a builtin scenario");

  std::string sweep_config, sweep_param;
  unsigned jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter range in parallel");
  sweep->add_option("config", sweep_config, "Scenario config (JSON)")->required();
  sweep->add_option("--param", sweep_param, "name=start:stop:step, name is a dotted path below parameters")
      ->required();
  sweep->add_option("--jobs", jobs, "Concurrent points (default: hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : parse_failure;
  }

  if (*list) return cmd_list();
  if (*run) {
    if (config_path.empty() == builtin.empty()) {
      std::cerr << "run: give exactly one of <config.json> or --builtin <name>\n";
      return parse_failure;
    }
    return cmd_run(config_path, builtin);
  }
  if (*sweep) return cmd_sweep(sweep_config, sweep_param, jobs);
  return parse_failure;
}
