#include <doctest.h>

#include "smes/config.hpp"

using smes::RunSetup;

TEST_CASE("defaults without a config file") {
  RunSetup setup = smes::load_run_setup(std::nullopt, {});
  CHECK(setup.sweep.alpha_grid.size() == 21);
  CHECK(setup.sweep.optimizer.alpha == 0.5);
  CHECK(setup.alpha == 0.0);
  CHECK(setup.seed == 1);
}

TEST_CASE("parses a full config text") {
  RunSetup setup = smes::parse_config_text(R"(
# surrogate sweep
alpha_grid = -0.3:0.1:0.05
seeds = 1, 2, 3
epochs = 4
batch_size = 16
model.layers = 8,16,4
model.activations = relu, relu, identity
model.loss = softmax_ce
data.kind = sparse
data.classes = 4
data.per_class = 12
data.dim = 8
data.active_dims = 2
opt.eta = 0.05
opt.weight_decay = 5e-4
opt.decay_mode = coupled
opt.clip_threshold = 2.5
)");
  CHECK(setup.sweep.alpha_grid.size() == 9);
  CHECK(setup.sweep.alpha_grid.front() == -0.3);
  CHECK(setup.sweep.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(setup.sweep.epochs == 4);
  CHECK(setup.sweep.model.layer_sizes == std::vector<std::size_t>{8, 16, 4});
  CHECK(setup.sweep.model.activations.size() == 3);
  CHECK(setup.sweep.data.kind == smes::DataSpec::Kind::sparse);
  CHECK(setup.sweep.optimizer.eta == 0.05);
  CHECK(setup.sweep.optimizer.weight_decay == 5e-4);
  REQUIRE(setup.sweep.optimizer.clip_threshold.has_value());
  CHECK(*setup.sweep.optimizer.clip_threshold == 2.5);
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(smes::parse_config_text("foo = 1\n"), doctest::Contains("foo"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(smes::parse_config_text("opt.momentum = 0.9\n"),
                       doctest::Contains("opt.momentum"), std::invalid_argument);
}

TEST_CASE("bad values name the key") {
  CHECK_THROWS_WITH_AS(smes::parse_config_text("epochs = three\n"), doctest::Contains("epochs"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(smes::parse_config_text("model.loss = hinge\n"),
                       doctest::Contains("model.loss"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(smes::parse_config_text("data.kind = mnist\n"),
                       doctest::Contains("data.kind"), std::invalid_argument);
}

TEST_CASE("overrides apply after the file, in order") {
  RunSetup setup = smes::load_run_setup(std::nullopt, {"alpha=-0.08", "opt.eta=0.2", "opt.eta=0.3"});
  CHECK(setup.alpha == -0.08);
  CHECK(setup.sweep.optimizer.eta == 0.3);
}

TEST_CASE("clip threshold can be disabled with none") {
  RunSetup setup = smes::load_run_setup(std::nullopt, {"opt.clip_threshold=2.0",
                                                       "opt.clip_threshold=none"});
  CHECK(!setup.sweep.optimizer.clip_threshold.has_value());
}

TEST_CASE("alpha grid accepts an explicit comma list") {
  RunSetup setup = smes::parse_config_text("alpha_grid = -0.08, 0, 0.5\n");
  CHECK(setup.sweep.alpha_grid == std::vector<double>{-0.08, 0.0, 0.5});
}

TEST_CASE("malformed lines are rejected") {
  CHECK_THROWS_AS(smes::parse_config_text("epochs 4\n"), std::invalid_argument);
}

TEST_CASE("missing config file is an I/O error") {
  CHECK_THROWS_AS(smes::load_run_setup(std::filesystem::path("/nonexistent/smes.cfg"), {}),
                  std::runtime_error);
}
