// delaudit: batch harness for deletion-compliance audits.
//
// Subcommands:
//   audit  --config <path> [--out <path>] [--seed N] [--mode exact|sampled]
//          [--trials N] [--jobs N]             exit 0 pass, 1 fail, 2 error
//   matrix [--out <dir>] [--seed N] [--jobs N] touchstone verdict table
//   replay --report <path>                     exit 0 match, 3 mismatch

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "delaudit/audit_runner.hpp"
#include "delaudit/errors.hpp"
#include "delaudit/matrix.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw delaudit::ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw delaudit::ConfigError("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deletion-compliance audit harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, report_path, mode;
  uint64_t seed = 0;
  uint64_t trials = 0;
  int jobs = 1;
  bool have_seed = false, have_trials = false;

  auto* audit = app.add_subcommand("audit", "run one audit from a config file");
  audit->add_option("--config", config_path, "config file (json)")->required();
  audit->add_option("--out", out_path, "write the report here");
  audit->add_option("--seed", seed, "override the config's master seed")
      ->each([&](const std::string&) { have_seed = true; });
  audit->add_option("--mode", mode, "override the config's mode (exact|sampled)");
  audit->add_option("--trials", trials, "override the config's trial count")
      ->each([&](const std::string&) { have_trials = true; });
  audit->add_option("--jobs", jobs, "parallel audit cells (single audits run serially)");

  auto* matrix = app.add_subcommand("matrix", "touchstone-by-definition verdict table");
  matrix->add_option("--out", out_path, "directory for matrix.json and matrix.csv");
  matrix->add_option("--seed", seed, "master seed");
  matrix->add_option("--jobs", jobs, "parallel cells");

  auto* replay = app.add_subcommand("replay", "recompute a report from its embedded config");
  replay->add_option("--report", report_path, "report file to replay")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) {
      nlohmann::json cfg = nlohmann::json::parse(read_file(config_path));
      if (have_seed) cfg["seed"] = seed;
      if (!mode.empty()) cfg["mode"] = mode;
      if (have_trials) cfg["trials"] = trials;
      auto result = delaudit::run_audit_config(cfg.dump());
      if (!out_path.empty()) {
        write_file(out_path, result.report_json);
      } else {
        std::cout << result.report_json;
      }
      return result.passed ? 0 : 1;
    }
    if (matrix->parsed()) {
      auto result = delaudit::run_matrix(seed, jobs);
      if (!out_path.empty()) {
        write_file(out_path + "/matrix.json", result.json);
        write_file(out_path + "/matrix.csv", result.csv);
      }
      std::cout << result.csv;
      std::cout << (result.columns_match_reference
                        ? "columns match the reference pattern\n"
                        : "columns DIVERGE from the reference pattern\n");
      return result.columns_match_reference ? 0 : 1;
    }
    if (replay->parsed()) {
      std::string recomputed;
      bool same = delaudit::replay_report(read_file(report_path), &recomputed);
      std::cout << recomputed;
      if (!same) {
        std::cerr << "replay mismatch: recomputed report differs\n";
        return 3;
      }
      return 0;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const delaudit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
