#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smes/rng.hpp"
#include "smes/tensor.hpp"

namespace smes {

/// Labeled classification samples, immutable after construction.
struct Dataset {
  Tensor features;  // n x d
  std::vector<int> labels;
  int num_classes = 0;
  std::string split;  // "train" or "test"

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  Tensor row(std::size_t i) const;
};

struct SplitPair {
  Dataset train;
  Dataset test;
};

/// Gaussian clusters with class means on a scaled integer lattice
/// (spacing 2.0) and isotropic within-class std = spread. Every input
/// coordinate carries signal or O(spread) noise, the fitting-friendly
/// dense-feature regime. Train and test share the distribution parameters
/// and draw disjoint samples from the stream, per_class per split.
SplitPair gen_blobs(int classes, int per_class, int dim, double spread, RngStream& stream);

/// Sparse-signal many-class generator: each class's signal lives on a
/// random subset of active_dims coordinates (standard-normal class pattern
/// plus within-class noise of std 0.25); the remaining coordinates carry
/// only floor-level noise of std 1e-6, so first-layer gradients for those
/// input weights are near zero. active_dims = dim degenerates to a dense
/// blobs-like task.
SplitPair gen_sparse_manyclass(int classes, int per_class, int dim, int active_dims,
                               RngStream& stream);

/// Column selection for tabular files. Defaults (empty feature_columns)
/// mean: all columns except the last are features, the last is the label.
struct TabularSchema {
  std::vector<std::size_t> feature_columns;
  std::optional<std::size_t> label_column;
};

/// Reads the comma-separated format written by save_tabular: UTF-8 text,
/// first line a header, one sample per line, numeric features, integer
/// label. The class count is inferred from the labels. Malformed rows
/// raise std::runtime_error naming the line (and column, for bad fields).
Dataset load_tabular(const std::filesystem::path& path, const TabularSchema& schema = {});

void save_tabular(const Dataset& data, const std::filesystem::path& path);

}  // namespace smes
