#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace smes {

/// One (alpha, seed) training cell: per-epoch series, the final held-out
/// error, and the fully resolved config snapshot. For diverged runs the
/// series cover the completed epochs only and final_test_err is absent.
struct RunRecord {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> train_loss;
  std::vector<double> train_err;
  std::vector<double> test_err;
  std::vector<std::vector<double>> grad_norms;  // [epoch][layer]
  std::optional<double> final_test_err;
  bool diverged = false;
  std::optional<int> diverged_epoch;
  std::optional<std::string> error;
  double wall_time_s = 0.0;
  nlohmann::json config;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

struct SummaryRow {
  double alpha = 0.0;
  std::optional<double> mean_test_err;
  double std_test_err = 0.0;  // population std over seeds
  int n_seeds = 0;            // completed (non-diverged) runs
};

/// Per-alpha aggregate rows in ascending alpha order. argmin_alpha is the
/// grid point with the smallest mean final test error, ties broken toward
/// smaller alpha; absent when no run completed.
struct SweepSummary {
  std::vector<SummaryRow> rows;
  std::optional<double> argmin_alpha;
};

SweepSummary summarize(const std::vector<RunRecord>& records);

class record_parse_error : public std::runtime_error {
 public:
  record_parse_error(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what), byte_offset(byte_offset) {}
  std::size_t byte_offset;
};

/// Record store: newline-delimited JSON, one self-describing record per
/// line, append-only. read_records raises record_parse_error carrying the
/// byte offset of the first bad record.
void write_records(const std::vector<RunRecord>& records, const std::filesystem::path& path);
void append_record(const RunRecord& record, const std::filesystem::path& path);
std::vector<RunRecord> read_records(const std::filesystem::path& path);

void write_summary_csv(const SweepSummary& summary, const std::filesystem::path& path);

std::string format_double(double x);  // shortest round-trip decimal form

}  // namespace smes
