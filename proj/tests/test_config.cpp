#include "doctest.h"

#include "levelforge/config.hpp"
#include "levelforge/errors.hpp"

using namespace lf;

TEST_CASE("config defaults match the documented hyperparameters") {
  const RunConfig cfg = RunConfig::from_json_text("{}");
  CHECK(cfg.seed == 0);
  CHECK(cfg.backend.kind == "procedural");
  CHECK(cfg.metrics.pattern_size == 2);
  CHECK(cfg.metrics.epsilon == doctest::Approx(0.001));
  CHECK(cfg.metrics.history_windows == 3);
  CHECK(cfg.metrics.window_stride == 7);
  CHECK(cfg.metrics.fun_lower == doctest::Approx(0.26));
  CHECK(cfg.metrics.fun_upper == doctest::Approx(0.94));
  CHECK(cfg.metrics.memory_size == 20);
  CHECK(cfg.metrics.nearest_count == 10);
  CHECK(cfg.reward.normalizer_window == 1000);
  CHECK(cfg.train.max_segments == 100);
  CHECK(cfg.online.resample_cap == 20);
  CHECK(cfg.online.target_segments == 100);
  CHECK(cfg.evaluation.initial_states == 30);
  CHECK(cfg.evaluation.trials_per_init == 10);
  CHECK(cfg.physics.max_jump_rise == 4);
  CHECK(cfg.physics.max_air_steps == 10);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"sedd": 3})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"metrics": {"epsilonn": 0.1}})"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"train": {"lr": 0.1}})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"online": {"cap": 3}})"), ConfigError);
}

TEST_CASE("invalid values are rejected with ConfigError") {
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"metrics": {"epsilon": 0}})"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"metrics": {"l": 0.9, "u": 0.2}})"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"reward": {"components": []}})"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"reward": {"components": ["X"]}})"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"backend": {"kind": "gan"}})"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"backend": {"kind": "pool"}})"),
                  ConfigError);  // pool needs a path
  CHECK_THROWS_AS(RunConfig::from_json_text("[1,2]"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ConfigError);
}

TEST_CASE("config round-trips through to_json") {
  const std::string text = R"({
    "seed": 9,
    "backend": {"kind": "procedural"},
    "reward": {"components": ["F", "P"], "normalizer_window": 500},
    "train": {"total_steps": 4096, "rollout_steps": 512},
    "online": {"resample_mode": "policy", "target_segments": 25},
    "physics": {"max_jump_rise": 3}
  })";
  const RunConfig cfg = RunConfig::from_json_text(text);
  CHECK(cfg.seed == 9);
  CHECK(cfg.reward.components.size() == 2);
  CHECK(cfg.reward.has(RewardComponent::P));
  CHECK_FALSE(cfg.reward.has(RewardComponent::H));
  CHECK(cfg.train.total_steps == 4096);
  CHECK(cfg.online.resample_mode == OnlineConfig::Resample::Policy);
  CHECK(cfg.physics.max_jump_rise == 3);
  CHECK(cfg.train.seed == 9);  // master seed propagates

  const RunConfig again = RunConfig::from_json_text(cfg.to_json().dump());
  CHECK(again.seed == cfg.seed);
  CHECK(again.train.total_steps == cfg.train.total_steps);
  CHECK(again.online.target_segments == cfg.online.target_segments);
  CHECK(again.reward.components == cfg.reward.components);
}

TEST_CASE("alphabet files load and reject nonsense") {
  const TileAlphabet alpha = TileAlphabet::from_json_text(
      R"({"tiles": {"#": "solid", ".": "empty", "P": "pipe-top-left"}})");
  CHECK(alpha.solid('#'));
  CHECK_FALSE(alpha.solid('.'));
  CHECK(alpha.role_of('P') == TileRole::PipeTopLeft);
  CHECK_FALSE(alpha.contains('X'));

  CHECK_THROWS_AS(TileAlphabet::from_json_text(R"({"tiles": {"##": "solid"}})"),
                  ConfigError);
  CHECK_THROWS_AS(TileAlphabet::from_json_text(R"({"tiles": {"#": "lava"}})"),
                  ConfigError);
  CHECK_THROWS_AS(TileAlphabet::from_json_text(R"({"glyphs": {}})"), ConfigError);
}
