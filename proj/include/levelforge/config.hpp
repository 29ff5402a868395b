#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "levelforge/env.hpp"
#include "levelforge/online.hpp"
#include "levelforge/ppo.hpp"

namespace lf {

struct BackendConfig {
  std::string kind = "procedural";  // procedural | pool | external
  std::string path;                 // pool / decoder file for non-procedural kinds
};

/// Everything a run needs; loaded from a single JSON document. Unknown keys
/// are rejected so typos cannot silently fall back to defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  BackendConfig backend;
  std::optional<std::string> alphabet_path;
  MetricConfig metrics;
  RewardConfig reward;
  TrainConfig train;
  OnlineConfig online;
  EvaluationConfig evaluation;
  PhysicsParams physics;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);

  nlohmann::json to_json() const;

  /// Throws ConfigError if any section violates its invariants.
  void validate() const;

  const TileAlphabet& alphabet() const;  // loads alphabet_path once if set

 private:
  mutable std::shared_ptr<TileAlphabet> loaded_alphabet_;
};

/// Instantiate the configured backend (loading pool/decoder files as needed).
std::unique_ptr<GeneratorBackend> make_backend(const RunConfig& cfg);

}  // namespace lf
