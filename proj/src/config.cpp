#include "levelforge/config.hpp"

#include <set>

#include "levelforge/errors.hpp"
#include "levelforge/io.hpp"

namespace lf {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(context + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + context);
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

void parse_backend(const json& j, BackendConfig& out) {
  check_keys(j, "backend", {"kind", "path"});
  get_to(j, "kind", out.kind);
  get_to(j, "path", out.path);
  if (out.kind != "procedural" && out.kind != "pool" && out.kind != "external")
    throw ConfigError("backend.kind must be procedural, pool or external");
  if (out.kind != "procedural" && out.path.empty())
    throw ConfigError("backend.path is required for kind '" + out.kind + "'");
}

void parse_metrics(const json& j, MetricConfig& m) {
  check_keys(j, "metrics",
             {"pattern_size", "epsilon", "window_rows", "window_cols", "n", "d", "l", "u",
              "m", "k"});
  get_to(j, "pattern_size", m.pattern_size);
  get_to(j, "epsilon", m.epsilon);
  get_to(j, "window_rows", m.window_rows);
  get_to(j, "window_cols", m.window_cols);
  get_to(j, "n", m.history_windows);
  get_to(j, "d", m.window_stride);
  get_to(j, "l", m.fun_lower);
  get_to(j, "u", m.fun_upper);
  get_to(j, "m", m.memory_size);
  get_to(j, "k", m.nearest_count);
}

void parse_reward(const json& j, RewardConfig& r) {
  check_keys(j, "reward", {"components", "normalizer_window"});
  if (j.contains("components")) {
    std::vector<std::string> names;
    get_to(j, "components", names);
    r.components.clear();
    for (const auto& name : names) r.components.push_back(reward_component_from_name(name));
  }
  get_to(j, "normalizer_window", r.normalizer_window);
}

void parse_train(const json& j, TrainConfig& t) {
  check_keys(j, "train",
             {"total_steps", "max_segments", "clip_ratio", "discount", "gae_lambda",
              "rollout_steps", "minibatch_size", "update_epochs", "learning_rate",
              "entropy_coef", "value_coef", "checkpoint_every"});
  get_to(j, "total_steps", t.total_steps);
  get_to(j, "max_segments", t.max_segments);
  get_to(j, "clip_ratio", t.ppo.clip_ratio);
  get_to(j, "discount", t.ppo.discount);
  get_to(j, "gae_lambda", t.ppo.gae_lambda);
  get_to(j, "rollout_steps", t.ppo.rollout_steps);
  get_to(j, "minibatch_size", t.ppo.minibatch_size);
  get_to(j, "update_epochs", t.ppo.update_epochs);
  get_to(j, "learning_rate", t.ppo.learning_rate);
  get_to(j, "entropy_coef", t.ppo.entropy_coef);
  get_to(j, "value_coef", t.ppo.value_coef);
  get_to(j, "checkpoint_every", t.checkpoint_every);
}

void parse_online(const json& j, OnlineConfig& o) {
  check_keys(j, "online",
             {"resample_mode", "resample_cap", "target_segments", "time_budget_ms"});
  if (j.contains("resample_mode")) {
    std::string mode;
    get_to(j, "resample_mode", mode);
    if (mode == "policy")
      o.resample_mode = OnlineConfig::Resample::Policy;
    else if (mode == "random")
      o.resample_mode = OnlineConfig::Resample::Random;
    else
      throw ConfigError("online.resample_mode must be 'policy' or 'random'");
  }
  get_to(j, "resample_cap", o.resample_cap);
  get_to(j, "target_segments", o.target_segments);
  if (j.contains("time_budget_ms") && !j.at("time_budget_ms").is_null()) {
    double budget = 0.0;
    get_to(j, "time_budget_ms", budget);
    o.time_budget_ms = budget;
  }
}

void parse_evaluation(const json& j, EvaluationConfig& e) {
  check_keys(j, "evaluation", {"initial_states", "trials_per_init", "max_segments"});
  get_to(j, "initial_states", e.initial_states);
  get_to(j, "trials_per_init", e.trials_per_init);
  get_to(j, "max_segments", e.max_segments);
}

void parse_physics(const json& j, PhysicsParams& p) {
  check_keys(j, "physics",
             {"max_jump_rise", "max_air_steps", "horizontal_air_control", "gravity"});
  get_to(j, "max_jump_rise", p.max_jump_rise);
  get_to(j, "max_air_steps", p.max_air_steps);
  get_to(j, "horizontal_air_control", p.horizontal_air_control);
  get_to(j, "gravity", p.gravity);
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"seed", "backend", "alphabet", "metrics", "reward", "train", "online",
              "evaluation", "physics"});

  RunConfig cfg;
  get_to(j, "seed", cfg.seed);
  if (j.contains("backend")) parse_backend(j.at("backend"), cfg.backend);
  if (j.contains("alphabet")) {
    std::string path;
    get_to(j, "alphabet", path);
    cfg.alphabet_path = path;
  }
  if (j.contains("metrics")) parse_metrics(j.at("metrics"), cfg.metrics);
  if (j.contains("reward")) parse_reward(j.at("reward"), cfg.reward);
  if (j.contains("train")) parse_train(j.at("train"), cfg.train);
  if (j.contains("online")) parse_online(j.at("online"), cfg.online);
  if (j.contains("evaluation")) parse_evaluation(j.at("evaluation"), cfg.evaluation);
  if (j.contains("physics")) parse_physics(j.at("physics"), cfg.physics);
  cfg.train.seed = cfg.seed;
  cfg.evaluation.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  return from_json_text(read_text_file(path));
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["backend"] = {{"kind", backend.kind}};
  if (!backend.path.empty()) j["backend"]["path"] = backend.path;
  if (alphabet_path) j["alphabet"] = *alphabet_path;
  j["metrics"] = {{"pattern_size", metrics.pattern_size},
                  {"epsilon", metrics.epsilon},
                  {"window_rows", metrics.window_rows},
                  {"window_cols", metrics.window_cols},
                  {"n", metrics.history_windows},
                  {"d", metrics.window_stride},
                  {"l", metrics.fun_lower},
                  {"u", metrics.fun_upper},
                  {"m", metrics.memory_size},
                  {"k", metrics.nearest_count}};
  std::vector<std::string> comps;
  for (RewardComponent c : reward.components) comps.push_back(reward_component_name(c));
  j["reward"] = {{"components", comps}, {"normalizer_window", reward.normalizer_window}};
  j["train"] = {{"total_steps", train.total_steps},
                {"max_segments", train.max_segments},
                {"clip_ratio", train.ppo.clip_ratio},
                {"discount", train.ppo.discount},
                {"gae_lambda", train.ppo.gae_lambda},
                {"rollout_steps", train.ppo.rollout_steps},
                {"minibatch_size", train.ppo.minibatch_size},
                {"update_epochs", train.ppo.update_epochs},
                {"learning_rate", train.ppo.learning_rate},
                {"entropy_coef", train.ppo.entropy_coef},
                {"value_coef", train.ppo.value_coef},
                {"checkpoint_every", train.checkpoint_every}};
  j["online"] = {{"resample_mode",
                  online.resample_mode == OnlineConfig::Resample::Policy ? "policy"
                                                                         : "random"},
                 {"resample_cap", online.resample_cap},
                 {"target_segments", online.target_segments}};
  if (online.time_budget_ms) j["online"]["time_budget_ms"] = *online.time_budget_ms;
  j["evaluation"] = {{"initial_states", evaluation.initial_states},
                     {"trials_per_init", evaluation.trials_per_init},
                     {"max_segments", evaluation.max_segments}};
  j["physics"] = {{"max_jump_rise", physics.max_jump_rise},
                  {"max_air_steps", physics.max_air_steps},
                  {"horizontal_air_control", physics.horizontal_air_control},
                  {"gravity", physics.gravity}};
  return j;
}

void RunConfig::validate() const {
  metrics.validate();
  reward.validate();
  train.ppo.validate();
  online.validate();
  physics.validate(metrics.window_rows);
  if (train.total_steps < 0) throw ConfigError("train.total_steps must be >= 0");
  if (train.max_segments < 1) throw ConfigError("train.max_segments must be >= 1");
  if (evaluation.initial_states < 1 || evaluation.trials_per_init < 1 ||
      evaluation.max_segments < 1)
    throw ConfigError("evaluation counts must be >= 1");
}

const TileAlphabet& RunConfig::alphabet() const {
  if (!alphabet_path) return TileAlphabet::smb();
  if (!loaded_alphabet_)
    loaded_alphabet_ = std::make_shared<TileAlphabet>(TileAlphabet::from_json_file(*alphabet_path));
  return *loaded_alphabet_;
}

std::unique_ptr<GeneratorBackend> make_backend(const RunConfig& cfg) {
  if (cfg.backend.kind == "procedural")
    return std::make_unique<ProceduralBackend>(cfg.alphabet());
  if (cfg.backend.kind == "pool")
    return std::make_unique<SegmentPool>(SegmentPool::load(cfg.backend.path));
  if (cfg.backend.kind == "external")
    return std::make_unique<ExternalDecoder>(ExternalDecoder::load(cfg.backend.path));
  throw ConfigError("unknown backend kind '" + cfg.backend.kind + "'");
}

}  // namespace lf
