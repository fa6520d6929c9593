// Command-line front end: andrews | filament | validate.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "andrews3d/errors.hpp"
#include "andrews3d/export.hpp"
#include "andrews3d/parallel.hpp"
#include "andrews3d/pipeline.hpp"
#include "andrews3d/validation.hpp"

namespace {

using namespace andrews3d;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 3;

struct RunConfig {
  std::string input;
  std::string output;
  std::string ply = "filaments.ply";
  std::string report = "report.json";
  std::string delimiter = ",";
  bool no_header = false;
  std::string label_column;
  std::string standardize = "zscore";
  std::string constant_rows = "error";
  std::string phases = "quadratic";
  int samples = 0;
  int steps = 0;
  int gauss_theta_samples = 1024;
  unsigned threads = default_thread_count();

  std::string suite = "all";
  std::string d_list;
  std::uint64_t seed = kDefaultSeed;
};

// RFC 3339 UTC; honours SOURCE_DATE_EPOCH for reproducible reports.
std::string timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      now = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
    }
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_data_options(CLI::App* cmd, RunConfig& cfg, const std::string& default_output) {
  cmd->add_option("--input,-i", cfg.input, "CSV file, one data point per row")->required();
  cmd->add_option("--output,-o", cfg.output, "Curves JSON output path")->default_str(default_output);
  cmd->add_option("--report", cfg.report, "Run report JSON output path")->capture_default_str();
  cmd->add_option("--delimiter", cfg.delimiter, "CSV field delimiter (single character)")->capture_default_str();
  cmd->add_flag("--no-header", cfg.no_header, "CSV has no header row");
  cmd->add_option("--label-column", cfg.label_column, "Label column: header name or 0-based index");
  cmd->add_option("--standardize", cfg.standardize, "Feature standardization")
      ->check(CLI::IsMember({"none", "center", "zscore"}))
      ->capture_default_str();
  cmd->add_option("--constant-rows", cfg.constant_rows, "Constant features under zscore: error or zero")
      ->check(CLI::IsMember({"error", "zero"}))
      ->capture_default_str();
  cmd->add_option("--phases", cfg.phases, "Per-frequency phase policy")
      ->check(CLI::IsMember({"quadratic", "none"}))
      ->capture_default_str();
  cmd->add_option("--samples", cfg.samples, "Samples per curve, at least 4d+2 (0 = max(1024, 4d+2))")
      ->capture_default_str();
  cmd->add_option("--gauss-theta-samples", cfg.gauss_theta_samples, "Theta grid for the Gauss-sum bound check")
      ->check(CLI::Range(2, 1 << 24))
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 4096u))->capture_default_str();
}

std::vector<std::pair<std::string, std::string>> echo_config(const std::string& command, const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> c{
      {"input", cfg.input},
      {"output", cfg.output},
  };
  if (command == "filament") c.emplace_back("ply", cfg.ply);
  c.insert(c.end(), {{"report", cfg.report},
                     {"delimiter", cfg.delimiter},
                     {"has_header", cfg.no_header ? "false" : "true"},
                     {"label_column", cfg.label_column},
                     {"standardize", cfg.standardize},
                     {"constant_rows", cfg.constant_rows},
                     {"phases", cfg.phases},
                     {"samples", std::to_string(cfg.samples)}});
  if (command == "filament") c.emplace_back("steps", std::to_string(cfg.steps));
  c.emplace_back("gauss_theta_samples", std::to_string(cfg.gauss_theta_samples));
  return c;
}

Dataset load_input(const RunConfig& cfg) {
  if (cfg.delimiter.size() != 1) throw InvalidArgument("--delimiter must be a single character");
  CsvOptions csv;
  csv.delimiter = cfg.delimiter.front();
  csv.has_header = !cfg.no_header;
  if (!cfg.label_column.empty()) csv.label_column = cfg.label_column;
  return load_csv(cfg.input, csv);
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
  if (cfg.samples < 0) throw InvalidArgument("--samples must be nonnegative");
  if (cfg.steps < 0) throw InvalidArgument("--steps must be nonnegative");
  PipelineOptions opt;
  opt.standardize = parse_standardize_policy(cfg.standardize);
  opt.constant_rows = cfg.constant_rows == "zero" ? ConstantRowPolicy::zero : ConstantRowPolicy::error;
  opt.phases = parse_phase_policy(cfg.phases);
  opt.samples = cfg.samples;
  opt.steps = cfg.steps;
  opt.threads = cfg.threads;
  opt.gauss_theta_samples = cfg.gauss_theta_samples;
  return opt;
}

void finish_report(RunReport& report, const std::string& command, const RunConfig& cfg) {
  report.command = command;
  report.created_at = timestamp();
  report.config = echo_config(command, cfg);
}

int print_checks(const RunReport& report) {
  for (const auto& c : report.checks) {
    if (!c.passed) std::cerr << "check failed: " << c.name << " (" << c.detail << ")\n";
  }
  return all_checks_passed(report) ? kExitOk : kExitValidation;
}

int cmd_andrews(const RunConfig& cfg) {
  const Dataset raw = load_input(cfg);
  AndrewsRun run = run_andrews(raw, pipeline_options(cfg));
  finish_report(run.report, "andrews", cfg);
  write_curves_json(run.curves, run.data.labels, static_cast<int>(run.data.dim()), cfg.output);
  write_report(run.report, cfg.report);
  std::cout << "wrote " << run.curves.size() << " curves to " << cfg.output << "\n";
  return print_checks(run.report);
}

int cmd_filament(const RunConfig& cfg) {
  const Dataset raw = load_input(cfg);
  FilamentRun run = run_filaments(raw, pipeline_options(cfg));
  auto& report = run.andrews.report;
  finish_report(report, "filament", cfg);
  const auto& labels = run.andrews.data.labels;
  const int d = static_cast<int>(run.andrews.data.dim());
  write_curves_json(run.filaments, labels, d, cfg.output);
  write_ply(run.filaments, labels, cfg.ply);
  write_report(report, cfg.report);
  std::cout << "wrote " << run.filaments.size() << " filaments to " << cfg.output << " and " << cfg.ply << "\n";
  return print_checks(report);
}

std::vector<int> parse_d_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("--d-list entry '" + item + "' is not an integer");
    }
    if (used != item.size() || value < 1) throw InvalidArgument("--d-list entry '" + item + "' is not a positive integer");
    out.push_back(value);
  }
  return out;
}

int cmd_validate(const RunConfig& cfg) {
  ValidationOptions opt;
  opt.suite = cfg.suite;
  opt.d_list = parse_d_list(cfg.d_list);
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  const auto checks = run_validation(opt);
  std::cout << "suite=" << opt.suite << " seed=" << opt.seed << "\n" << format_validation_table(checks);
  for (const auto& c : checks) {
    if (!c.passed) return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isometric 3D Andrews plots and Bishop-frame filaments for tabular data"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* andrews = app.add_subcommand("andrews", "Write optimally smooth plane curves (3D Andrews plots)");
  add_data_options(andrews, cfg, "andrews.json");

  auto* filament = app.add_subcommand("filament", "Write unit-length filaments integrated from the plane curves");
  add_data_options(filament, cfg, "filaments.json");
  filament->add_option("--ply", cfg.ply, "PLY polyline output path")->capture_default_str();
  filament->add_option("--steps", cfg.steps, "Integration steps per filament (0 = samples)")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Run the built-in property suites");
  validate->add_option("--suite", cfg.suite, "Suite to run")
      ->check(CLI::IsMember({"all", "andrews", "bishop", "gauss"}))
      ->capture_default_str();
  validate->add_option("--d-list", cfg.d_list, "Comma-separated dimensions (default: per-suite)");
  validate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  validate->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 4096u))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cfg.output.empty()) cfg.output = andrews->parsed() ? "andrews.json" : "filaments.json";
    if (andrews->parsed()) return cmd_andrews(cfg);
    if (filament->parsed()) return cmd_filament(cfg);
    return cmd_validate(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  }
}
