#include "smes/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace smes {

namespace {

// Sub-stream salts; cells draw from (seed, purpose) only, never from
// execution order, so grid order and worker count cannot change a record.
constexpr std::uint64_t kDataSalt = 1;
constexpr std::uint64_t kInitSalt = 2;
constexpr std::uint64_t kShuffleSalt = 3;

Tensor one_hot(int label, std::size_t classes) {
  Tensor t({classes});
  t[static_cast<std::size_t>(label)] = 1.0;
  return t;
}

std::size_t argmax(const Tensor& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double error_percent(Network& net, const Dataset& data) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Tensor out = net.forward(data.row(i));
    if (argmax(out) == static_cast<std::size_t>(data.labels[i])) ++correct;
  }
  return 100.0 * (1.0 - static_cast<double>(correct) / static_cast<double>(data.size()));
}

SplitPair build_dataset(const DataSpec& spec, RngStream& stream) {
  switch (spec.kind) {
    case DataSpec::Kind::blobs:
      return gen_blobs(spec.classes, spec.per_class, spec.dim, spec.spread, stream);
    case DataSpec::Kind::sparse:
      return gen_sparse_manyclass(spec.classes, spec.per_class, spec.dim, spec.active_dims, stream);
    case DataSpec::Kind::file: {
      SplitPair pair;
      pair.train = load_tabular(spec.path);
      pair.test = spec.test_path.empty() ? pair.train : load_tabular(spec.test_path);
      pair.test.split = "test";
      int classes = std::max(pair.train.num_classes, pair.test.num_classes);
      pair.train.num_classes = classes;
      pair.test.num_classes = classes;
      return pair;
    }
  }
  throw std::logic_error("unreachable data kind");
}

struct ResolvedModel {
  std::vector<std::size_t> sizes;
  std::vector<Activation> activations;
};

ResolvedModel resolve_model(const SweepSpec& spec) {
  ResolvedModel rm;
  rm.sizes = spec.model.layer_sizes;
  if (rm.sizes.empty()) {
    rm.sizes = {static_cast<std::size_t>(spec.data.dim), 32,
                static_cast<std::size_t>(spec.data.classes)};
  }
  rm.activations = spec.model.activations;
  if (rm.activations.empty()) {
    rm.activations.assign(rm.sizes.size() - 1, Activation::relu);
    rm.activations.back() = Activation::identity;
  }
  if (rm.activations.size() != rm.sizes.size() - 1) {
    throw std::invalid_argument("model: expected " + std::to_string(rm.sizes.size() - 1) +
                                " activations for " + std::to_string(rm.sizes.size()) +
                                " layer sizes, got " + std::to_string(rm.activations.size()));
  }
  return rm;
}

}  // namespace

std::string to_string(DataSpec::Kind k) {
  switch (k) {
    case DataSpec::Kind::blobs: return "blobs";
    case DataSpec::Kind::sparse: return "sparse";
    case DataSpec::Kind::file: return "file";
  }
  throw std::logic_error("unreachable data kind");
}

DataSpec::Kind data_kind_from_string(const std::string& name) {
  if (name == "blobs") return DataSpec::Kind::blobs;
  if (name == "sparse") return DataSpec::Kind::sparse;
  if (name == "file") return DataSpec::Kind::file;
  throw std::invalid_argument("unknown data kind '" + name + "'");
}

std::vector<double> expand_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("range: step must be > 0");
  if (hi < lo) throw std::invalid_argument("range: hi must be >= lo");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    double v = lo + step * i;
    if (v > hi + step * 1e-9) break;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

std::vector<double> SweepSpec::default_alpha_grid() { return expand_range(-0.30, 0.10, 0.02); }

void SweepSpec::validate() const {
  if (alpha_grid.empty()) throw std::invalid_argument("sweep: alpha_grid must be nonempty");
  for (double a : alpha_grid) {
    if (!std::isfinite(a)) throw std::invalid_argument("sweep: alpha_grid values must be finite");
  }
  if (seeds.empty()) throw std::invalid_argument("sweep: seeds must be nonempty");
  if (epochs < 1) throw std::invalid_argument("sweep: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("sweep: batch_size must be >= 1");
  if (data.kind == DataSpec::Kind::file) {
    if (data.path.empty()) throw std::invalid_argument("sweep: data.path required for data.kind=file");
    if (model.layer_sizes.empty()) {
      throw std::invalid_argument("sweep: model.layers required for data.kind=file");
    }
  }
  optimizer.validate();
}

nlohmann::json config_snapshot(const SweepSpec& spec, double alpha, std::uint64_t seed) {
  ResolvedModel rm = resolve_model(spec);
  std::vector<std::string> act_names;
  act_names.reserve(rm.activations.size());
  for (Activation a : rm.activations) act_names.push_back(to_string(a));

  SmesConfig opt = spec.optimizer;
  opt.alpha = alpha;
  return nlohmann::json{
      {"alpha", alpha},
      {"seed", seed},
      {"epochs", spec.epochs},
      {"batch_size", spec.batch_size},
      {"model",
       {{"layer_sizes", rm.sizes}, {"activations", act_names}, {"loss", to_string(spec.model.loss)}}},
      {"data",
       {{"kind", to_string(spec.data.kind)},
        {"classes", spec.data.classes},
        {"per_class", spec.data.per_class},
        {"dim", spec.data.dim},
        {"active_dims", spec.data.active_dims},
        {"spread", spec.data.spread},
        {"path", spec.data.path},
        {"test_path", spec.data.test_path}}},
      {"optimizer",
       {{"eta", opt.eta},
        {"beta1", opt.beta1},
        {"beta2", opt.beta2},
        {"epsilon", opt.epsilon},
        {"alpha", opt.alpha},
        {"weight_decay", opt.weight_decay},
        {"decay_mode", to_string(opt.decay_mode)},
        {"clip_threshold",
         opt.clip_threshold ? nlohmann::json(*opt.clip_threshold) : nlohmann::json(nullptr)},
        {"v_floor", opt.v_floor}}},
  };
}

RunRecord train_one(const SweepSpec& spec, double alpha, std::uint64_t seed) {
  spec.validate();
  auto start = std::chrono::steady_clock::now();

  RunRecord record;
  record.alpha = alpha;
  record.seed = seed;
  record.config = config_snapshot(spec, alpha, seed);

  RngStream data_stream(derive_seed(seed, kDataSalt));
  SplitPair data = build_dataset(spec.data, data_stream);

  ResolvedModel rm = resolve_model(spec);
  std::size_t classes = static_cast<std::size_t>(
      std::max(data.train.num_classes, data.test.num_classes));
  if (rm.sizes.front() != data.train.dim() || rm.sizes.back() != classes) {
    std::ostringstream msg;
    msg << "model [" << rm.sizes.front() << " -> " << rm.sizes.back()
        << "] does not fit dataset with dim " << data.train.dim() << " and " << classes
        << " classes";
    throw std::invalid_argument(msg.str());
  }

  RngStream init_stream(derive_seed(seed, kInitSalt));
  Network net = init_network(rm.sizes, rm.activations, spec.model.loss, init_stream);
  RngStream shuffle_stream(derive_seed(seed, kShuffleSalt));

  std::vector<Tensor*> params = net.parameters();
  std::vector<Tensor*> grads = net.gradients();
  std::vector<SmesState> states;
  states.reserve(params.size());
  for (Tensor* p : params) states.push_back(smes_init(p->shape()));

  SmesConfig cfg = spec.optimizer;
  cfg.alpha = alpha;
  cfg.validate();

  std::vector<Tensor> targets;
  targets.reserve(data.train.size());
  for (std::size_t i = 0; i < data.train.size(); ++i) {
    targets.push_back(one_hot(data.train.labels[i], classes));
  }

  std::vector<std::size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t layer_count = net.layers().size();

  for (int epoch = 0; epoch < spec.epochs && !record.diverged; ++epoch) {
    shuffle_stream.shuffle(order);

    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    std::vector<double> first_batch_norms(layer_count, 0.0);
    bool first_batch = true;

    for (std::size_t begin = 0; begin < order.size() && !record.diverged;
         begin += static_cast<std::size_t>(spec.batch_size)) {
      std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(spec.batch_size));
      std::size_t batch_n = end - begin;

      net.zero_gradients();
      for (std::size_t k = begin; k < end; ++k) {
        std::size_t idx = order[k];
        net.forward(data.train.row(idx));
        GradientReport report = net.backward(targets[idx]);
        if (!std::isfinite(report.loss)) {
          record.diverged = true;
          record.diverged_epoch = epoch;
          break;
        }
        loss_sum += report.loss;
        ++loss_count;
        if (first_batch) {
          for (std::size_t l = 0; l < layer_count; ++l) {
            first_batch_norms[l] += report.layer_grad_norms[l] / static_cast<double>(batch_n);
          }
        }
      }
      if (record.diverged) break;
      first_batch = false;

      for (Tensor* g : grads) {
        for (double& x : g->values()) x /= static_cast<double>(batch_n);
      }
      try {
        smes_step_group(params, grads, states, cfg);
      } catch (const divergence_error&) {
        record.diverged = true;
        record.diverged_epoch = epoch;
      }
    }

    if (record.diverged) break;
    record.train_loss.push_back(loss_sum / static_cast<double>(loss_count));
    record.grad_norms.push_back(std::move(first_batch_norms));
    record.train_err.push_back(error_percent(net, data.train));
    record.test_err.push_back(error_percent(net, data.test));
  }

  if (!record.diverged) record.final_test_err = record.test_err.back();
  record.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

namespace {

using CellKey = std::pair<double, std::uint64_t>;

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::filesystem::path& records_path, int jobs) {
  spec.validate();

  std::vector<CellKey> cells;
  for (double a : spec.alpha_grid) {
    for (std::uint64_t s : spec.seeds) cells.emplace_back(a, s);
  }

  std::map<CellKey, RunRecord> existing;
  if (std::filesystem::exists(records_path)) {
    for (RunRecord& r : read_records(records_path)) {
      CellKey key{r.alpha, r.seed};
      if (std::find(cells.begin(), cells.end(), key) == cells.end()) {
        throw std::invalid_argument(records_path.string() + ": contains cell (alpha=" +
                                    format_double(r.alpha) + ", seed=" + std::to_string(r.seed) +
                                    ") that is not part of this sweep; use a fresh records file");
      }
      if (r.config != config_snapshot(spec, r.alpha, r.seed)) {
        throw std::invalid_argument(records_path.string() +
                                    ": existing records were produced by a different spec; use a "
                                    "fresh records file");
      }
      existing.emplace(key, std::move(r));
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!existing.contains(cells[i])) todo.push_back(i);
  }

  std::vector<RunRecord> fresh(todo.size());
  std::vector<bool> done(todo.size(), false);
  std::mutex mu;
  std::size_t next_flush = 0;
  std::atomic<std::size_t> next_cell{0};

  auto worker = [&]() {
    while (true) {
      std::size_t w = next_cell.fetch_add(1);
      if (w >= todo.size()) return;
      const CellKey& key = cells[todo[w]];
      RunRecord record;
      try {
        record = train_one(spec, key.first, key.second);
      } catch (const std::exception& e) {
        record.alpha = key.first;
        record.seed = key.second;
        record.config = config_snapshot(spec, key.first, key.second);
        record.diverged = true;
        record.error = e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      fresh[w] = std::move(record);
      done[w] = true;
      // Flush in cell order so the file is always a clean, deterministic
      // prefix of the full sweep.
      while (next_flush < todo.size() && done[next_flush]) {
        append_record(fresh[next_flush], records_path);
        ++next_flush;
      }
    }
  };

  int worker_count = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  result.records.reserve(cells.size());
  std::size_t fresh_index = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = existing.find(cells[i]);
    if (it != existing.end()) {
      result.records.push_back(std::move(it->second));
    } else {
      result.records.push_back(std::move(fresh[fresh_index++]));
    }
  }
  for (const RunRecord& r : result.records) {
    if (r.diverged) ++result.diverged_cells;
  }
  result.summary = summarize(result.records);
  return result;
}

}  // namespace smes
