#include "smes/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace smes {

namespace {

constexpr double kLatticeSpacing = 2.0;
constexpr double kWithinNoise = 0.25;  // sparse generator, active dims
constexpr double kFloorNoise = 1e-6;   // sparse generator, inactive dims

// Smallest base m with m^dim >= classes, so lattice digits stay distinct.
int lattice_base(int classes, int dim) {
  int m = 1;
  while (true) {
    long long full = 1;
    bool enough = false;
    for (int j = 0; j < dim; ++j) {
      full *= m;
      if (full >= classes) {
        enough = true;
        break;
      }
    }
    if (enough) return m;
    ++m;
  }
}

std::vector<double> blob_mean(int cls, int dim, int base) {
  std::vector<double> mean(static_cast<std::size_t>(dim), 0.0);
  int rest = cls;
  for (int j = 0; j < dim && rest > 0; ++j) {
    mean[static_cast<std::size_t>(j)] = kLatticeSpacing * static_cast<double>(rest % base);
    rest /= base;
  }
  return mean;
}

Dataset make_split(std::string tag, int classes, int per_class, int dim) {
  Dataset d;
  d.split = std::move(tag);
  d.num_classes = classes;
  d.features = Tensor({static_cast<std::size_t>(classes) * static_cast<std::size_t>(per_class),
                       static_cast<std::size_t>(dim)});
  d.labels.reserve(d.features.rows());
  return d;
}

void check_counts(const char* what, int classes, int per_class, int dim, int min_per_class) {
  if (classes < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 classes");
  if (per_class < min_per_class) {
    throw std::invalid_argument(std::string(what) + ": need at least " +
                                std::to_string(min_per_class) + " samples per class");
  }
  if (dim < 1) throw std::invalid_argument(std::string(what) + ": dimension must be >= 1");
}

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

Tensor Dataset::row(std::size_t i) const {
  std::size_t d = dim();
  Tensor out({d});
  for (std::size_t j = 0; j < d; ++j) out[j] = features[i * d + j];
  return out;
}

SplitPair gen_blobs(int classes, int per_class, int dim, double spread, RngStream& stream) {
  check_counts("gen_blobs", classes, per_class, dim, 2);
  if (spread < 0.0) throw std::invalid_argument("gen_blobs: spread must be >= 0");

  int base = lattice_base(classes, dim);
  std::vector<std::vector<double>> means(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) means[static_cast<std::size_t>(c)] = blob_mean(c, dim, base);

  SplitPair pair{make_split("train", classes, per_class, dim),
                 make_split("test", classes, per_class, dim)};
  for (Dataset* split : {&pair.train, &pair.test}) {
    std::size_t row = 0;
    for (int c = 0; c < classes; ++c) {
      const auto& mean = means[static_cast<std::size_t>(c)];
      for (int s = 0; s < per_class; ++s, ++row) {
        for (int j = 0; j < dim; ++j) {
          split->features[row * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] =
              mean[static_cast<std::size_t>(j)] + stream.normal(0.0, spread);
        }
        split->labels.push_back(c);
      }
    }
  }
  return pair;
}

SplitPair gen_sparse_manyclass(int classes, int per_class, int dim, int active_dims,
                               RngStream& stream) {
  check_counts("gen_sparse_manyclass", classes, per_class, dim, 1);
  if (active_dims < 1 || active_dims > dim) {
    throw std::invalid_argument("gen_sparse_manyclass: active_dims must be in [1, dim]");
  }

  // Per-class support and signal pattern, drawn once and shared by splits.
  std::vector<std::vector<std::size_t>> supports(static_cast<std::size_t>(classes));
  std::vector<std::vector<double>> patterns(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    std::vector<std::size_t> all(static_cast<std::size_t>(dim));
    std::iota(all.begin(), all.end(), 0);
    for (int j = 0; j < active_dims; ++j) {
      std::size_t pick = static_cast<std::size_t>(j) +
                         stream.next_below(static_cast<std::uint64_t>(dim - j));
      std::swap(all[static_cast<std::size_t>(j)], all[pick]);
    }
    auto& support = supports[static_cast<std::size_t>(c)];
    support.assign(all.begin(), all.begin() + active_dims);
    std::sort(support.begin(), support.end());
    auto& pattern = patterns[static_cast<std::size_t>(c)];
    pattern.resize(static_cast<std::size_t>(active_dims));
    for (double& p : pattern) p = stream.normal(0.0, 1.0);
  }

  SplitPair pair{make_split("train", classes, per_class, dim),
                 make_split("test", classes, per_class, dim)};
  for (Dataset* split : {&pair.train, &pair.test}) {
    std::size_t row = 0;
    for (int c = 0; c < classes; ++c) {
      const auto& support = supports[static_cast<std::size_t>(c)];
      const auto& pattern = patterns[static_cast<std::size_t>(c)];
      for (int s = 0; s < per_class; ++s, ++row) {
        double* x = &split->features[row * static_cast<std::size_t>(dim)];
        for (int j = 0; j < dim; ++j) x[j] = stream.normal(0.0, kFloorNoise);
        for (std::size_t a = 0; a < support.size(); ++a) {
          x[support[a]] = pattern[a] + stream.normal(0.0, kWithinNoise);
        }
        split->labels.push_back(c);
      }
    }
  }
  return pair;
}

Dataset load_tabular(const std::filesystem::path& path, const TabularSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": empty file, expected a header line");
  }
  std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 2) {
    throw std::runtime_error(path.string() + ": header must declare at least two columns");
  }

  std::vector<std::size_t> feature_cols = schema.feature_columns;
  std::size_t label_col = schema.label_column.value_or(columns - 1);
  if (feature_cols.empty()) {
    for (std::size_t j = 0; j < columns; ++j) {
      if (j != label_col) feature_cols.push_back(j);
    }
  }
  for (std::size_t j : feature_cols) {
    if (j >= columns) {
      throw std::runtime_error(path.string() + ": schema feature column " + std::to_string(j) +
                               " out of range for " + std::to_string(columns) + " columns");
    }
  }
  if (label_col >= columns) {
    throw std::runtime_error(path.string() + ": schema label column " + std::to_string(label_col) +
                             " out of range for " + std::to_string(columns) + " columns");
  }

  Dataset data;
  data.split = "train";
  std::vector<double> values;
  std::size_t line_no = 1;  // header was line 1
  int max_label = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != columns) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                               std::to_string(columns) + " columns, got " +
                               std::to_string(fields.size()));
    }

    for (std::size_t j : feature_cols) {
      const std::string& f = fields[j];
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) + ", column " +
                                 std::to_string(j + 1) + ": invalid numeric feature '" + f + "'");
      }
      values.push_back(x);
    }

    const std::string& lf = fields[label_col];
    int label = 0;
    auto [ptr, ec] = std::from_chars(lf.data(), lf.data() + lf.size(), label);
    if (ec != std::errc{} || ptr != lf.data() + lf.size() || label < 0) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) + ", column " +
                               std::to_string(label_col + 1) + ": unknown label symbol '" + lf +
                               "'");
    }
    data.labels.push_back(label);
    max_label = std::max(max_label, label);
  }

  std::size_t n = data.labels.size();
  std::size_t d = feature_cols.size();
  data.features = Tensor({n, d}, std::move(values));
  data.num_classes = max_label + 1;
  return data;
}

void save_tabular(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");

  std::size_t d = data.dim();
  for (std::size_t j = 0; j < d; ++j) out << 'f' << j << ',';
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) out << format_double(data.features[i * d + j]) << ',';
    out << data.labels[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace smes
