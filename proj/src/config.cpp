#include "smes/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smes {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw std::invalid_argument("config key '" + key + "': cannot parse '" + value + "' as " +
                              expected);
}

double parse_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "a number");
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value, "an unsigned integer");
  }
  return x;
}

std::vector<double> parse_alpha_grid(const std::string& key, const std::string& value) {
  if (value.find(':') != std::string::npos) {
    auto parts = split(value, ':');
    if (parts.size() != 3) bad_value(key, value, "lo:hi:step");
    return expand_range(parse_double(key, parts[0]), parse_double(key, parts[1]),
                        parse_double(key, parts[2]));
  }
  std::vector<double> out;
  for (const std::string& item : split(value, ',')) out.push_back(parse_double(key, item));
  return out;
}

void apply(RunSetup& setup, const std::string& key, const std::string& value) {
  SweepSpec& sw = setup.sweep;
  if (key == "alpha") {
    setup.alpha = parse_double(key, value);
  } else if (key == "seed") {
    setup.seed = parse_u64(key, value);
  } else if (key == "alpha_grid") {
    sw.alpha_grid = parse_alpha_grid(key, value);
  } else if (key == "seeds") {
    sw.seeds.clear();
    for (const std::string& item : split(value, ',')) sw.seeds.push_back(parse_u64(key, item));
  } else if (key == "epochs") {
    sw.epochs = parse_int(key, value);
  } else if (key == "batch_size") {
    sw.batch_size = parse_int(key, value);
  } else if (key == "model.layers") {
    sw.model.layer_sizes.clear();
    for (const std::string& item : split(value, ',')) {
      int v = parse_int(key, item);
      if (v < 1) bad_value(key, value, "layer sizes >= 1");
      sw.model.layer_sizes.push_back(static_cast<std::size_t>(v));
    }
  } else if (key == "model.activations") {
    sw.model.activations.clear();
    try {
      for (const std::string& item : split(value, ',')) {
        sw.model.activations.push_back(activation_from_string(item));
      }
    } catch (const std::invalid_argument&) {
      bad_value(key, value, "a list of sigmoid|relu|identity");
    }
  } else if (key == "model.loss") {
    try {
      sw.model.loss = loss_from_string(value);
    } catch (const std::invalid_argument&) {
      bad_value(key, value, "softmax_ce or mse");
    }
  } else if (key == "data.kind") {
    try {
      sw.data.kind = data_kind_from_string(value);
    } catch (const std::invalid_argument&) {
      bad_value(key, value, "blobs, sparse, or file");
    }
  } else if (key == "data.classes") {
    sw.data.classes = parse_int(key, value);
  } else if (key == "data.per_class") {
    sw.data.per_class = parse_int(key, value);
  } else if (key == "data.dim") {
    sw.data.dim = parse_int(key, value);
  } else if (key == "data.active_dims") {
    sw.data.active_dims = parse_int(key, value);
  } else if (key == "data.spread") {
    sw.data.spread = parse_double(key, value);
  } else if (key == "data.path") {
    sw.data.path = value;
  } else if (key == "data.test_path") {
    sw.data.test_path = value;
  } else if (key == "opt.eta") {
    sw.optimizer.eta = parse_double(key, value);
  } else if (key == "opt.beta1") {
    sw.optimizer.beta1 = parse_double(key, value);
  } else if (key == "opt.beta2") {
    sw.optimizer.beta2 = parse_double(key, value);
  } else if (key == "opt.epsilon") {
    sw.optimizer.epsilon = parse_double(key, value);
  } else if (key == "opt.weight_decay") {
    sw.optimizer.weight_decay = parse_double(key, value);
  } else if (key == "opt.decay_mode") {
    try {
      sw.optimizer.decay_mode = decay_mode_from_string(value);
    } catch (const std::invalid_argument&) {
      bad_value(key, value, "coupled, decoupled, or none");
    }
  } else if (key == "opt.clip_threshold") {
    if (value == "none") {
      sw.optimizer.clip_threshold.reset();
    } else {
      sw.optimizer.clip_threshold = parse_double(key, value);
    }
  } else if (key == "opt.v_floor") {
    sw.optimizer.v_floor = parse_double(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void apply_line(RunSetup& setup, const std::string& raw, const char* where) {
  std::string line = raw;
  std::size_t hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  line = trim(line);
  if (line.empty()) return;
  std::size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument(std::string(where) + ": expected key = value, got '" + line + "'");
  }
  apply(setup, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

}  // namespace

RunSetup parse_config_text(const std::string& text) {
  RunSetup setup;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) apply_line(setup, line, "config");
  return setup;
}

RunSetup load_run_setup(const std::optional<std::filesystem::path>& config_path,
                        const std::vector<std::string>& overrides) {
  RunSetup setup;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw std::runtime_error("cannot open config '" + config_path->string() + "'");
    std::string line;
    while (std::getline(in, line)) apply_line(setup, line, "config");
  }
  for (const std::string& o : overrides) apply_line(setup, o, "override");
  return setup;
}

std::vector<std::string> known_config_keys() {
  return {"alpha",          "seed",           "alpha_grid",      "seeds",
          "epochs",         "batch_size",     "model.layers",    "model.activations",
          "model.loss",     "data.kind",      "data.classes",    "data.per_class",
          "data.dim",       "data.active_dims", "data.spread",   "data.path",
          "data.test_path", "opt.eta",        "opt.beta1",       "opt.beta2",
          "opt.epsilon",    "opt.weight_decay", "opt.decay_mode", "opt.clip_threshold",
          "opt.v_floor"};
}

}  // namespace smes
