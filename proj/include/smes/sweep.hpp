#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "smes/data.hpp"
#include "smes/net.hpp"
#include "smes/optimizer.hpp"
#include "smes/records.hpp"

namespace smes {

struct ModelSpec {
  std::vector<std::size_t> layer_sizes;     // [in, h1, ..., out]; empty = derive from data
  std::vector<Activation> activations;      // empty = relu hidden, identity output
  Loss loss = Loss::softmax_cross_entropy;
};

struct DataSpec {
  enum class Kind { blobs, sparse, file };
  Kind kind = Kind::blobs;
  int classes = 4;
  int per_class = 50;
  int dim = 8;
  int active_dims = 2;   // sparse generator only
  double spread = 0.5;   // blobs only
  std::string path;      // file kind: training split
  std::string test_path; // file kind: held-out split; empty = reuse path
};

std::string to_string(DataSpec::Kind k);
DataSpec::Kind data_kind_from_string(const std::string& name);

/// Declarative sweep: the cartesian product of alpha_grid x seeds, each
/// cell trained independently and deterministically.
struct SweepSpec {
  std::vector<double> alpha_grid = default_alpha_grid();
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int epochs = 10;
  int batch_size = 32;
  ModelSpec model;
  DataSpec data;
  SmesConfig optimizer;  // alpha is overridden per cell

  void validate() const;

  /// -0.30 to 0.10 in steps of 0.02.
  static std::vector<double> default_alpha_grid();
};

/// Inclusive lo..hi by step, each point snapped to 12 decimals so grid
/// values print cleanly and reproduce exactly.
std::vector<double> expand_range(double lo, double hi, double step);

/// The fully resolved per-cell config snapshot embedded in each RunRecord.
nlohmann::json config_snapshot(const SweepSpec& spec, double alpha, std::uint64_t seed);

/// Trains one (alpha, seed) cell. Deterministic given (spec, alpha, seed):
/// dataset, init, and shuffling draw from sub-streams derived from the
/// seed alone, never from execution order. A non-finite loss or parameter
/// marks the record diverged at that epoch instead of raising.
RunRecord train_one(const SweepSpec& spec, double alpha, std::uint64_t seed);

struct SweepResult {
  std::vector<RunRecord> records;  // cell order: alpha-major, then seeds
  SweepSummary summary;
  int diverged_cells = 0;
};

/// Runs every cell of the grid, appending each finished record to
/// records_path in cell order (so any interruption leaves a clean prefix).
/// Cells already present in the file are not recomputed; their configs
/// must match the spec. jobs > 1 trains cells on a worker pool; the file
/// content is identical regardless of the worker count.
SweepResult run_sweep(const SweepSpec& spec, const std::filesystem::path& records_path,
                      int jobs = 1);

}  // namespace smes
