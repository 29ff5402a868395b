#include "levelforge/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "levelforge/errors.hpp"
#include "levelforge/io.hpp"

namespace lf {

namespace {
constexpr char kCheckpointMagic[] = "LFPOLICY";
constexpr std::uint8_t kCheckpointVersion = 1;
}  // namespace

void PpoConfig::validate() const {
  if (clip_ratio <= 0.0) throw ConfigError("clip_ratio must be > 0");
  if (discount <= 0.0 || discount > 1.0) throw ConfigError("discount must be in (0,1]");
  if (gae_lambda < 0.0 || gae_lambda > 1.0)
    throw ConfigError("gae_lambda must be in [0,1]");
  if (rollout_steps < 1) throw ConfigError("rollout_steps must be >= 1");
  if (minibatch_size < 1) throw ConfigError("minibatch_size must be >= 1");
  if (update_epochs < 1) throw ConfigError("update_epochs must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
  if (entropy_coef < 0.0 || value_coef < 0.0)
    throw ConfigError("loss coefficients must be >= 0");
}

double ppo_loss(const GaussianActorCritic& nets, std::span<const PpoSample> batch,
                const PpoConfig& cfg, GaussianActorCritic* grad, UpdateStats* stats) {
  if (batch.empty()) throw std::invalid_argument("empty PPO batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const Eigen::ArrayXd inv_var = (-2.0 * nets.log_std.array()).exp();

  double policy_loss = 0.0, value_loss = 0.0, clip_hits = 0.0, kl_sum = 0.0;
  const double entropy = gaussian_entropy(nets.log_std);

  for (const PpoSample& sample : batch) {
    Mlp::Trace actor_trace;
    const Eigen::VectorXd mean = nets.actor.forward(sample.state, actor_trace);
    const double log_prob = gaussian_log_prob(sample.action, mean, nets.log_std);
    const double ratio = std::exp(log_prob - sample.log_prob_old);
    const double clipped_ratio =
        std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
    const double unclipped = ratio * sample.advantage;
    const double clipped = clipped_ratio * sample.advantage;
    policy_loss += -std::min(unclipped, clipped);
    kl_sum += sample.log_prob_old - log_prob;
    if (std::abs(ratio - 1.0) > cfg.clip_ratio) clip_hits += 1.0;

    Mlp::Trace critic_trace;
    const double value = nets.critic.forward(sample.state, critic_trace)[0];
    const double value_err = value - sample.value_target;
    value_loss += value_err * value_err;

    if (grad) {
      // min() passes gradient through the unclipped branch when active.
      const double d_log_prob =
          unclipped <= clipped ? -sample.advantage * ratio * inv_n : 0.0;
      if (d_log_prob != 0.0) {
        const Eigen::ArrayXd diff = (sample.action - mean).array();
        const Eigen::VectorXd d_mean = (d_log_prob * diff * inv_var).matrix();
        nets.actor.backward(actor_trace, d_mean, grad->actor);
        grad->log_std.array() += d_log_prob * (diff.square() * inv_var - 1.0);
      }
      grad->log_std.array() += -cfg.entropy_coef * inv_n;
      const Eigen::VectorXd d_value =
          Eigen::VectorXd::Constant(1, cfg.value_coef * 2.0 * value_err * inv_n);
      nets.critic.backward(critic_trace, d_value, grad->critic);
    }
  }

  if (stats) {
    stats->policy_loss = policy_loss * inv_n;
    stats->value_loss = value_loss * inv_n;
    stats->entropy = entropy;
    stats->clip_fraction = clip_hits * inv_n;
    stats->approx_kl = kl_sum * inv_n;
  }
  return policy_loss * inv_n + cfg.value_coef * value_loss * inv_n -
         cfg.entropy_coef * entropy;
}

void RolloutBuffer::clear() {
  states.clear();
  actions.clear();
  log_probs.clear();
  rewards.clear();
  values.clear();
  dones.clear();
  truncateds.clear();
  bootstrap_values.clear();
}

std::vector<PpoSample> compute_advantages(const RolloutBuffer& buffer,
                                          const PpoConfig& cfg) {
  const std::size_t n = buffer.size();
  if (n == 0) throw std::invalid_argument("empty rollout buffer");
  std::vector<PpoSample> samples(n);
  double next_advantage = 0.0;
  for (std::size_t idx = n; idx-- > 0;) {
    double next_value;
    if (buffer.dones[idx]) {
      next_value = buffer.truncateds[idx] ? buffer.bootstrap_values[idx] : 0.0;
      next_advantage = 0.0;
    } else if (idx + 1 == n) {
      next_value = buffer.bootstrap_values[idx];
      next_advantage = 0.0;
    } else {
      next_value = buffer.values[idx + 1];
    }
    const double delta =
        buffer.rewards[idx] + cfg.discount * next_value - buffer.values[idx];
    const double advantage = delta + cfg.discount * cfg.gae_lambda * next_advantage;
    next_advantage = advantage;

    samples[idx].state = buffer.states[idx];
    samples[idx].action = buffer.actions[idx];
    samples[idx].log_prob_old = buffer.log_probs[idx];
    samples[idx].advantage = advantage;
    samples[idx].value_target = advantage + buffer.values[idx];
  }
  return samples;
}

UpdateStats ppo_update(GaussianActorCritic& nets, Adam& adam, const RolloutBuffer& buffer,
                       const PpoConfig& cfg, Rng& shuffle_rng) {
  std::vector<PpoSample> samples = compute_advantages(buffer, cfg);

  double mean = 0.0;
  for (const auto& s : samples) mean += s.advantage;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (const auto& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
  const double stddev = std::sqrt(var / static_cast<double>(samples.size()));
  for (auto& s : samples) s.advantage = (s.advantage - mean) / (stddev + 1e-8);

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  UpdateStats total;
  long batches = 0;
  std::vector<PpoSample> batch;
  for (int epoch = 0; epoch < cfg.update_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    for (std::size_t offset = 0; offset < order.size();
         offset += static_cast<std::size_t>(cfg.minibatch_size)) {
      const std::size_t end =
          std::min(order.size(), offset + static_cast<std::size_t>(cfg.minibatch_size));
      batch.clear();
      for (std::size_t i = offset; i < end; ++i) batch.push_back(samples[order[i]]);

      GaussianActorCritic grad;
      grad.actor = Mlp::zeros_like(nets.actor);
      grad.critic = Mlp::zeros_like(nets.critic);
      grad.log_std = Eigen::VectorXd::Zero(nets.log_std.size());
      UpdateStats stats;
      const double loss = ppo_loss(nets, batch, cfg, &grad, &stats);
      if (!std::isfinite(loss)) throw RuntimeFailure("non-finite PPO loss");

      Eigen::VectorXd params = nets.flat();
      adam.step(params, grad.flat());
      nets.set_flat(params);

      total.policy_loss += stats.policy_loss;
      total.value_loss += stats.value_loss;
      total.entropy += stats.entropy;
      total.clip_fraction += stats.clip_fraction;
      total.approx_kl += stats.approx_kl;
      ++batches;
    }
  }
  const double inv = 1.0 / static_cast<double>(batches);
  total.policy_loss *= inv;
  total.value_loss *= inv;
  total.entropy *= inv;
  total.clip_fraction *= inv;
  total.approx_kl *= inv;
  return total;
}

namespace {

void save_normalizers(std::ostream& os,
                      const std::map<RewardComponent, RunningNormalizer>& normalizers) {
  write_u8(os, static_cast<std::uint8_t>(normalizers.size()));
  for (const auto& [component, normalizer] : normalizers) {
    write_u8(os, static_cast<std::uint8_t>(component));
    normalizer.save(os);
  }
}

std::map<RewardComponent, RunningNormalizer> load_normalizers(std::istream& is) {
  std::map<RewardComponent, RunningNormalizer> out;
  const std::uint8_t n = read_u8(is);
  for (std::uint8_t i = 0; i < n; ++i) {
    const auto component = static_cast<RewardComponent>(read_u8(is));
    out.emplace(component, RunningNormalizer::load(is));
  }
  return out;
}

void save_rng(std::ostream& os, const Rng& rng) {
  std::ostringstream ss;
  rng.save(ss);
  write_bytes(os, ss.str());
}

}  // namespace

void Trainer::save_checkpoint(const std::string& path, const Rng& env_rng,
                              const Rng& action_rng, const Rng& shuffle_rng) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write checkpoint '" + path + "'");
  os.write(kCheckpointMagic, sizeof(kCheckpointMagic) - 1);
  write_u8(os, kCheckpointVersion);
  write_u64(os, master_seed);
  write_u64(os, static_cast<std::uint64_t>(steps_done));
  policy.save(os);
  adam.save(os);
  save_normalizers(os, normalizers);
  save_rng(os, env_rng);
  save_rng(os, action_rng);
  save_rng(os, shuffle_rng);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint '" + path + "'");
  expect_magic(is, kCheckpointMagic, "policy checkpoint");
  const std::uint8_t version = read_u8(is);
  if (version != kCheckpointVersion)
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint out;
  out.master_seed = read_u64(is);
  out.steps_done = static_cast<long>(read_u64(is));
  out.policy = DesignerPolicy::load(is);
  out.adam = Adam::load(is);
  out.normalizers = load_normalizers(is);
  out.env_rng_state = read_bytes(is);
  out.action_rng_state = read_bytes(is);
  out.shuffle_rng_state = read_bytes(is);
  return out;
}

Trainer train(const TrainConfig& cfg, const RewardConfig& reward,
              const MetricConfig& metrics, const PhysicsParams& physics,
              const GeneratorBackend& backend, std::ostream* log,
              const std::string& checkpoint_path, const TileAlphabet& alpha) {
  cfg.ppo.validate();
  if (cfg.total_steps < 0) throw ConfigError("total_steps must be >= 0");

  DesignEnv env(backend, metrics, reward, physics, cfg.max_segments,
                derive_seed(cfg.seed, 1), alpha);
  Rng action_rng(derive_seed(cfg.seed, 2));
  Rng shuffle_rng(derive_seed(cfg.seed, 3));

  Trainer trainer;
  trainer.policy = DesignerPolicy(derive_seed(cfg.seed, 4));
  trainer.adam = Adam(trainer.policy.nets().param_count(), cfg.ppo.learning_rate);
  trainer.master_seed = cfg.seed;

  if (log)
    *log << "step,mean_return,mean_raw_f,mean_raw_h,playable_rate,policy_loss,"
            "value_loss,entropy,clip_fraction,approx_kl\n";

  if (cfg.total_steps == 0) {
    trainer.normalizers = env.normalizers();
    return trainer;
  }

  Latent state = env.reset();
  RolloutBuffer buffer;
  long steps = 0;
  long next_checkpoint = cfg.checkpoint_every > 0 ? cfg.checkpoint_every : 0;
  double episode_return = 0.0;

  while (steps < cfg.total_steps) {
    buffer.clear();
    const long rollout =
        std::min<long>(cfg.ppo.rollout_steps, cfg.total_steps - steps);
    double raw_f_sum = 0.0, raw_h_sum = 0.0, return_sum = 0.0;
    long playable = 0, episodes_finished = 0;
    double finished_return_sum = 0.0;

    for (long t = 0; t < rollout; ++t) {
      const auto [action, log_prob] = trainer.policy.act_with_log_prob(state, action_rng);
      const double value = trainer.policy.value(state);
      const DesignEnv::StepResult res = env.step(action);

      buffer.states.push_back(state);
      buffer.actions.push_back(action);
      buffer.log_probs.push_back(log_prob);
      buffer.rewards.push_back(res.reward);
      buffer.values.push_back(value);
      buffer.dones.push_back(res.done);
      buffer.truncateds.push_back(res.info.truncated);
      buffer.bootstrap_values.push_back(0.0);

      episode_return += res.reward;
      return_sum += res.reward;
      raw_f_sum += res.info.raw_f;
      raw_h_sum += res.info.raw_h;
      if (res.info.playable) ++playable;

      if (res.done) {
        if (res.info.truncated)
          buffer.bootstrap_values.back() = trainer.policy.value(res.next_state);
        finished_return_sum += episode_return;
        ++episodes_finished;
        episode_return = 0.0;
        state = env.reset();
      } else {
        state = res.next_state;
      }
      ++steps;
    }
    if (!buffer.dones.back())
      buffer.bootstrap_values.back() = trainer.policy.value(state);

    const UpdateStats stats =
        ppo_update(trainer.policy.nets(), trainer.adam, buffer, cfg.ppo, shuffle_rng);
    trainer.policy.nets().check_finite();
    trainer.steps_done = steps;

    if (log) {
      const double inv = 1.0 / static_cast<double>(rollout);
      const double mean_return = episodes_finished > 0
                                     ? finished_return_sum / episodes_finished
                                     : return_sum * inv;
      *log << steps << ',' << mean_return << ',' << raw_f_sum * inv << ','
           << raw_h_sum * inv << ',' << static_cast<double>(playable) * inv << ','
           << stats.policy_loss << ',' << stats.value_loss << ',' << stats.entropy << ','
           << stats.clip_fraction << ',' << stats.approx_kl << '\n';
    }

    if (!checkpoint_path.empty() && next_checkpoint > 0 && steps >= next_checkpoint) {
      trainer.normalizers = env.normalizers();
      trainer.save_checkpoint(checkpoint_path, env.rng(), action_rng, shuffle_rng);
      while (next_checkpoint <= steps) next_checkpoint += cfg.checkpoint_every;
    }
  }

  trainer.normalizers = env.normalizers();
  if (!checkpoint_path.empty())
    trainer.save_checkpoint(checkpoint_path, env.rng(), action_rng, shuffle_rng);
  return trainer;
}

}  // namespace lf
