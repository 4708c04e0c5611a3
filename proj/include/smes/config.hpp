#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smes/sweep.hpp"

namespace smes {

/// A sweep spec plus the single-cell fields the train verb uses.
struct RunSetup {
  SweepSpec sweep;
  double alpha = 0.0;
  std::uint64_t seed = 1;
};

/// Flat key = value config text. '#' starts a comment, blank lines are
/// ignored, keys use dotted paths (model.loss, opt.eta, ...). Unknown keys
/// and unparsable values raise std::invalid_argument naming the key.
/// List values are comma separated; alpha_grid also accepts lo:hi:step.
RunSetup parse_config_text(const std::string& text);

/// Loads the config file (when given) and then applies key=value override
/// strings on top, in order.
RunSetup load_run_setup(const std::optional<std::filesystem::path>& config_path,
                        const std::vector<std::string>& overrides);

/// All recognized keys, for usage text.
std::vector<std::string> known_config_keys();

}  // namespace smes
