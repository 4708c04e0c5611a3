#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smes/config.hpp"
#include "smes/records.hpp"
#include "smes/selfcheck.hpp"
#include "smes/svg_plot.hpp"
#include "smes/sweep.hpp"

namespace {

// Stable exit codes, also documented in the README.
constexpr int kOk = 0;
constexpr int kUsageError = 2;
constexpr int kConfigError = 3;
constexpr int kDivergence = 4;
constexpr int kIoError = 5;

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string records;
  int jobs = 1;
};

fs::path resolve_out_dir(const CommonArgs& args) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("SMES_OUT")) return env;
  return "smes-out";
}

smes::RunSetup load_setup(const CommonArgs& args) {
  std::optional<fs::path> config;
  if (!args.config.empty()) config = args.config;
  return smes::load_run_setup(config, args.overrides);
}

fs::path records_path(const CommonArgs& args, const fs::path& out) {
  return args.records.empty() ? out / "records.jsonl" : fs::path(args.records);
}

int cmd_train(const CommonArgs& args) {
  smes::RunSetup setup = load_setup(args);
  fs::path out = resolve_out_dir(args);
  fs::create_directories(out);

  smes::RunRecord record = smes::train_one(setup.sweep, setup.alpha, setup.seed);
  smes::append_record(record, out / "records.jsonl");

  if (record.diverged) {
    std::cout << "run diverged";
    if (record.diverged_epoch) std::cout << " at epoch " << *record.diverged_epoch;
    if (record.error) std::cout << " (" << *record.error << ")";
    std::cout << "\n";
    return kDivergence;
  }
  std::cout << "final test error: " << smes::format_double(*record.final_test_err) << " %\n";
  return kOk;
}

int cmd_sweep(const CommonArgs& args) {
  smes::RunSetup setup = load_setup(args);
  fs::path out = resolve_out_dir(args);
  fs::create_directories(out);

  smes::SweepResult result = smes::run_sweep(setup.sweep, out / "records.jsonl", args.jobs);
  smes::write_summary_csv(result.summary, out / "summary.csv");

  std::cout << result.records.size() << " cells, " << result.diverged_cells << " diverged\n";
  if (result.summary.argmin_alpha) {
    std::cout << "argmin alpha: " << smes::format_double(*result.summary.argmin_alpha) << "\n";
  } else {
    std::cout << "argmin alpha: undefined (no completed runs)\n";
  }
  return result.diverged_cells > 0 ? kDivergence : kOk;
}

int cmd_summarize(const CommonArgs& args) {
  fs::path out = resolve_out_dir(args);
  fs::create_directories(out);

  std::vector<smes::RunRecord> records = smes::read_records(records_path(args, out));
  smes::SweepSummary summary = smes::summarize(records);
  smes::write_summary_csv(summary, out / "summary.csv");

  std::cout << "alpha,mean_test_err,std_test_err,n_seeds\n";
  for (const smes::SummaryRow& row : summary.rows) {
    std::cout << smes::format_double(row.alpha) << ','
              << (row.mean_test_err ? smes::format_double(*row.mean_test_err) : "nan") << ','
              << (row.mean_test_err ? smes::format_double(row.std_test_err) : "nan") << ','
              << row.n_seeds << "\n";
  }
  if (summary.argmin_alpha) {
    std::cout << "argmin alpha: " << smes::format_double(*summary.argmin_alpha) << "\n";
  }
  return kOk;
}

int cmd_selfcheck() {
  std::vector<smes::SuiteResult> results = smes::run_selfcheck();
  bool all = true;
  for (const smes::SuiteResult& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? kOk : 1;
}

int cmd_plot(const CommonArgs& args) {
  fs::path out = resolve_out_dir(args);
  fs::create_directories(out);

  std::vector<smes::RunRecord> records = smes::read_records(records_path(args, out));
  if (records.empty()) throw std::invalid_argument("plot: record set is empty");
  smes::SweepSummary summary = smes::summarize(records);
  smes::write_alpha_error_chart(summary, out / "plot.svg", out / "plot.csv");
  std::cout << "wrote " << (out / "plot.svg").string() << " and " << (out / "plot.csv").string()
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "smes — second-moment exponential-scaling optimizers: training runs,\n"
      "alpha sweeps, numerical self-checks, and sweep plots.\n\n"
      "Exit codes: 0 ok, 1 selfcheck failure, 2 usage error, 3 config error,\n"
      "4 divergence (including partial sweep failure), 5 I/O failure.\n"
      "SMES_OUT overrides the default output directory (smes-out)."};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* cmd, bool with_jobs) {
    cmd->add_option("--config", args.config, "flat key = value config file");
    cmd->add_option("--out", args.out_dir, "output directory (default: $SMES_OUT or smes-out)");
    cmd->add_option("--set", args.overrides, "config override key=value (repeatable)")
        ->take_all();
    if (with_jobs) cmd->add_option("--jobs", args.jobs, "worker pool size")->check(CLI::PositiveNumber);
  };

  CLI::App* train = app.add_subcommand("train", "train one (alpha, seed) cell and record it");
  add_common(train, false);
  CLI::App* sweep = app.add_subcommand("sweep", "run the alpha x seed grid and summarize");
  add_common(sweep, true);
  CLI::App* summarize = app.add_subcommand("summarize", "recompute the summary from records");
  add_common(summarize, false);
  summarize->add_option("--records", args.records, "records file (default: OUT/records.jsonl)");
  CLI::App* selfcheck = app.add_subcommand("selfcheck", "run the embedded numerical oracle suites");
  CLI::App* plot = app.add_subcommand("plot", "emit the error-vs-alpha chart (SVG + CSV)");
  add_common(plot, false);
  plot->add_option("--records", args.records, "records file (default: OUT/records.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (train->parsed()) return cmd_train(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (summarize->parsed()) return cmd_summarize(args);
    if (selfcheck->parsed()) return cmd_selfcheck();
    if (plot->parsed()) return cmd_plot(args);
    return kUsageError;
  } catch (const smes::divergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDivergence;
  } catch (const smes::record_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
}
