#include "smes/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace smes {

namespace {

nlohmann::json optional_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

nlohmann::json RunRecord::to_json() const {
  nlohmann::json j{
      {"alpha", alpha},
      {"seed", seed},
      {"train_loss", train_loss},
      {"train_err", train_err},
      {"test_err", test_err},
      {"grad_norms", grad_norms},
      {"final_test_err", optional_to_json(final_test_err)},
      {"diverged", diverged},
      {"diverged_epoch", diverged_epoch ? nlohmann::json(*diverged_epoch) : nlohmann::json(nullptr)},
      {"error", error ? nlohmann::json(*error) : nlohmann::json(nullptr)},
      {"wall_time_s", wall_time_s},
      {"config", config},
  };
  return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
  RunRecord r;
  r.alpha = j.at("alpha").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.train_loss = j.at("train_loss").get<std::vector<double>>();
  r.train_err = j.at("train_err").get<std::vector<double>>();
  r.test_err = j.at("test_err").get<std::vector<double>>();
  r.grad_norms = j.at("grad_norms").get<std::vector<std::vector<double>>>();
  if (!j.at("final_test_err").is_null()) r.final_test_err = j.at("final_test_err").get<double>();
  r.diverged = j.at("diverged").get<bool>();
  if (!j.at("diverged_epoch").is_null()) r.diverged_epoch = j.at("diverged_epoch").get<int>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  r.config = j.at("config");
  return r;
}

SweepSummary summarize(const std::vector<RunRecord>& records) {
  std::map<double, std::vector<double>> completed;
  for (const RunRecord& r : records) {
    auto& bucket = completed[r.alpha];  // row exists even if every seed diverged
    if (!r.diverged && r.final_test_err) bucket.push_back(*r.final_test_err);
  }

  SweepSummary summary;
  for (const auto& [alpha, errs] : completed) {
    SummaryRow row;
    row.alpha = alpha;
    row.n_seeds = static_cast<int>(errs.size());
    if (!errs.empty()) {
      double mean = 0.0;
      for (double e : errs) mean += e;
      mean /= static_cast<double>(errs.size());
      double var = 0.0;
      for (double e : errs) var += (e - mean) * (e - mean);
      var /= static_cast<double>(errs.size());
      row.mean_test_err = mean;
      row.std_test_err = std::sqrt(var);
    }
    summary.rows.push_back(row);
  }

  const SummaryRow* best = nullptr;
  for (const SummaryRow& row : summary.rows) {  // ascending alpha; strict < keeps ties left
    if (!row.mean_test_err) continue;
    if (!best || *row.mean_test_err < *best->mean_test_err) best = &row;
  }
  if (best) summary.argmin_alpha = best->alpha;
  return summary;
}

void write_records(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  for (const RunRecord& r : records) out << r.to_json().dump() << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void append_record(const RunRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for appending");
  out << record.to_json().dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("append failed for '" + path.string() + "'");
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  std::vector<RunRecord> records;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t eol = text.find('\n', offset);
    std::size_t len = (eol == std::string::npos ? text.size() : eol) - offset;
    std::string_view line(text.data() + offset, len);
    if (!line.empty()) {
      try {
        records.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        throw record_parse_error(path.string() + ": corrupt record at byte offset " +
                                     std::to_string(offset) + ": " + e.what(),
                                 offset);
      }
    }
    if (eol == std::string::npos) break;
    offset = eol + 1;
  }
  return records;
}

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void write_summary_csv(const SweepSummary& summary, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "alpha,mean_test_err,std_test_err,n_seeds\n";
  for (const SummaryRow& row : summary.rows) {
    out << format_double(row.alpha) << ',';
    if (row.mean_test_err) {
      out << format_double(*row.mean_test_err) << ',' << format_double(row.std_test_err);
    } else {
      out << "nan,nan";
    }
    out << ',' << row.n_seeds << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace smes
