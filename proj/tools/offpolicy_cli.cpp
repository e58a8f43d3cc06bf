// Command-line driver: sweep, report, verify.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "offpolicy/offpolicy.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kVerifyFailed = 2, kIo = 3 };

int run_sweep_command(const std::string& config_path, std::optional<unsigned> workers,
                      std::optional<std::string> out, bool print_only) {
  offpolicy::SweepConfig config;
  if (!config_path.empty()) config = offpolicy::load_sweep_config(config_path);
  if (workers) config.workers = *workers;
  if (out) config.out = *out;
  if (print_only) {
    std::cout << offpolicy::to_json(config).dump(2) << '\n';
    return kOk;
  }
  const auto outcome = offpolicy::run_sweep(config, &std::cerr);
  std::cerr << "wrote " << outcome.rows.size() << " summary rows to " << config.out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-policy linear prediction experiments on the Collision task"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<unsigned> workers;
  std::optional<std::string> sweep_out;
  bool print_config = false;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  sweep->add_option("--workers", workers, "worker threads (0 = all cores)");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--print-config", print_config, "print the effective config and exit");

  std::string kind;
  std::string in_dir;
  std::string out_file;
  auto* report = app.add_subcommand("report", "derive a report CSV from sweep outputs");
  report->add_option("--kind", kind, "sensitivity | learning-curve | waterfall | emphatic-beta | gradient-eta")
      ->required();
  report->add_option("--in", in_dir, "sweep output directory")->required();
  report->add_option("--out", out_file, "report CSV path")->required();

  auto* verify = app.add_subcommand("verify", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sweep) return run_sweep_command(config_path, workers, sweep_out, print_config);
    if (*report) {
      offpolicy::write_report(offpolicy::parse_report_kind(kind), in_dir, out_file);
      return kOk;
    }
    if (*verify) {
      const auto result = offpolicy::run_verification({}, &std::cout);
      std::cout << (result.all_passed() ? "all checks passed" : "verification FAILED") << '\n';
      return result.all_passed() ? kOk : kVerifyFailed;
    }
  } catch (const offpolicy::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const offpolicy::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
