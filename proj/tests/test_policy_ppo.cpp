#include "doctest.h"

#include <cmath>

#include "levelforge/policy.hpp"
#include "levelforge/ppo.hpp"

using namespace lf;

namespace {

/// Tiny actor-critic for gradient checks: actor 1 -> 2 (4 parameters).
GaussianActorCritic toy_nets(std::uint64_t seed) {
  Rng rng(seed);
  GaussianActorCritic nets;
  nets.actor = Mlp({1, 2}, /*tanh_output=*/true, /*final_scale=*/1.0, rng);
  nets.critic = Mlp({1, 1}, /*tanh_output=*/false, /*final_scale=*/1.0, rng);
  nets.log_std = Eigen::VectorXd::Constant(2, std::log(0.7));
  // Nonzero biases so finite differences probe every parameter.
  Eigen::VectorXd p = nets.flat();
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += 0.05 * std::sin(1.0 + 2.0 * i);
  nets.set_flat(p);
  return nets;
}

std::vector<PpoSample> toy_batch(const GaussianActorCritic& nets, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PpoSample> batch;
  for (int i = 0; i < 6; ++i) {
    PpoSample s;
    s.state = Eigen::VectorXd::Constant(1, rng.uniform(-1, 1));
    const Eigen::VectorXd mean = nets.actor.forward(s.state);
    s.action = mean;
    for (Eigen::Index d = 0; d < 2; ++d)
      s.action[d] += 0.4 * rng.normal();
    s.log_prob_old =
        gaussian_log_prob(s.action, mean, nets.log_std) + 0.05 * rng.uniform(-1, 1);
    s.advantage = rng.uniform(-1, 1);
    s.value_target = rng.uniform(-1, 1);
    batch.push_back(std::move(s));
  }
  return batch;
}

double finite_diff_check(GaussianActorCritic nets, const std::vector<PpoSample>& batch,
                         const PpoConfig& cfg, long first_param, long n_params) {
  GaussianActorCritic grad;
  grad.actor = Mlp::zeros_like(nets.actor);
  grad.critic = Mlp::zeros_like(nets.critic);
  grad.log_std = Eigen::VectorXd::Zero(nets.log_std.size());
  ppo_loss(nets, batch, cfg, &grad, nullptr);
  const Eigen::VectorXd analytic = grad.flat();

  const double h = 1e-6;
  Eigen::VectorXd base = nets.flat();
  double num = 0.0, denom = 0.0;
  for (long i = first_param; i < first_param + n_params; ++i) {
    Eigen::VectorXd p = base;
    p[i] = base[i] + h;
    nets.set_flat(p);
    const double up = ppo_loss(nets, batch, cfg, nullptr, nullptr);
    p[i] = base[i] - h;
    nets.set_flat(p);
    const double down = ppo_loss(nets, batch, cfg, nullptr, nullptr);
    const double fd = (up - down) / (2.0 * h);
    num += (analytic[i] - fd) * (analytic[i] - fd);
    denom += fd * fd;
  }
  return std::sqrt(num) / std::max(std::sqrt(denom), 1e-12);
}

}  // namespace

TEST_CASE("policy actions are clipped, bounded and reproducible") {
  const DesignerPolicy policy(42);
  const Latent state = Latent::Zero();

  Rng r1(1), r2(2);
  const Latent mean1 = policy.act(state, r1, ActMode::Mean);
  const Latent mean2 = policy.act(state, r2, ActMode::Mean);
  CHECK(mean1 == mean2);  // mean mode ignores the rng

  Rng rng(7);
  for (int i = 0; i < 100; ++i) CHECK(latent_in_bounds(policy.act(state, rng)));

  Rng ra(9), rb(9);
  CHECK(policy.act(state, ra) == policy.act(state, rb));
}

TEST_CASE("fresh policy acts near zero with the configured init stddev") {
  const DesignerPolicy policy(3);
  const Latent state = Latent::Zero();
  const Latent mean = policy.action_mean(state);
  CHECK(mean.cwiseAbs().maxCoeff() < 0.1);  // small final-layer init

  Rng rng(11);
  double sum = 0.0, sum_sq = 0.0;
  long n = 0;
  for (int i = 0; i < 1000; ++i) {
    const Latent a = policy.act(state, rng);
    for (int d = 0; d < kLatentDim; ++d) {
      const double centered = a[d] - mean[d];
      sum += centered;
      sum_sq += centered * centered;
      ++n;
    }
  }
  const double emp_mean = sum / n;
  const double emp_std = std::sqrt(sum_sq / n - emp_mean * emp_mean);
  CHECK(std::abs(emp_mean) < 0.05);
  CHECK(std::abs(emp_std - 0.5) < 0.05);  // exp(ln 0.5), minus a little clipping
}

TEST_CASE("surrogate gradient matches central finite differences") {
  PpoConfig cfg;
  cfg.clip_ratio = 0.2;

  // Pure surrogate on the 4-parameter actor.
  PpoConfig surrogate_only = cfg;
  surrogate_only.value_coef = 0.0;
  surrogate_only.entropy_coef = 0.0;
  GaussianActorCritic nets = toy_nets(5);
  const auto batch = toy_batch(nets, 17);
  CHECK(finite_diff_check(nets, batch, surrogate_only, 0, nets.actor.param_count()) <
        1e-4);

  // Full loss over every parameter (actor, critic, log_std).
  const double rel = finite_diff_check(nets, batch, cfg, 0, nets.param_count());
  CHECK(rel < 1e-4);
}

TEST_CASE("clipping uses the clipped ratio for out-of-range updates") {
  GaussianActorCritic nets = toy_nets(8);
  PpoConfig cfg;
  cfg.clip_ratio = 0.2;
  cfg.value_coef = 0.0;
  cfg.entropy_coef = 0.0;

  PpoSample s;
  s.state = Eigen::VectorXd::Constant(1, 0.3);
  const Eigen::VectorXd mean = nets.actor.forward(s.state);
  s.action = mean;  // ratio depends only on the stored old log-prob
  const double log_prob = gaussian_log_prob(s.action, mean, nets.log_std);
  s.log_prob_old = log_prob - std::log(1.5);  // ratio = 1.5
  s.advantage = 1.0;
  s.value_target = 0.0;

  UpdateStats stats;
  const double loss = ppo_loss(nets, std::vector<PpoSample>{s}, cfg, nullptr, &stats);
  CHECK(loss == doctest::Approx(-1.2));  // clipped ratio 1.2 times advantage 1
  CHECK(stats.clip_fraction == doctest::Approx(1.0));

  // Gradient through the clipped branch is zero.
  GaussianActorCritic grad;
  grad.actor = Mlp::zeros_like(nets.actor);
  grad.critic = Mlp::zeros_like(nets.critic);
  grad.log_std = Eigen::VectorXd::Zero(nets.log_std.size());
  ppo_loss(nets, std::vector<PpoSample>{s}, cfg, &grad, nullptr);
  CHECK(grad.flat().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("zero-advantage rollouts leave parameters unchanged") {
  GaussianActorCritic nets = toy_nets(12);
  const Eigen::VectorXd before = nets.flat();

  RolloutBuffer buffer;
  Rng rng(3);
  for (int i = 0; i < 8; ++i) {
    buffer.states.push_back(Eigen::VectorXd::Constant(1, rng.uniform(-1, 1)));
    const Eigen::VectorXd mean = nets.actor.forward(buffer.states.back());
    buffer.actions.push_back(mean);
    buffer.log_probs.push_back(gaussian_log_prob(mean, mean, nets.log_std));
    buffer.rewards.push_back(0.0);
    buffer.values.push_back(0.0);
    buffer.dones.push_back(true);  // terminal: zero bootstrap
    buffer.truncateds.push_back(false);
    buffer.bootstrap_values.push_back(0.0);
  }

  PpoConfig cfg;
  cfg.minibatch_size = 4;
  cfg.update_epochs = 2;
  cfg.value_coef = 0.0;
  cfg.entropy_coef = 0.0;
  Adam adam(nets.param_count(), cfg.learning_rate);
  Rng shuffle(5);
  ppo_update(nets, adam, buffer, cfg, shuffle);
  CHECK((nets.flat() - before).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("identical seeds and buffers give identical updates") {
  RolloutBuffer buffer;
  Rng rng(19);
  GaussianActorCritic reference = toy_nets(4);
  for (int i = 0; i < 16; ++i) {
    buffer.states.push_back(Eigen::VectorXd::Constant(1, rng.uniform(-1, 1)));
    const Eigen::VectorXd mean = reference.actor.forward(buffer.states.back());
    Eigen::VectorXd action = mean;
    action[0] += 0.3 * rng.normal();
    buffer.actions.push_back(action);
    buffer.log_probs.push_back(gaussian_log_prob(action, mean, reference.log_std));
    buffer.rewards.push_back(rng.uniform(0, 1));
    buffer.values.push_back(rng.uniform(-0.2, 0.2));
    const bool done = i % 5 == 4;
    buffer.dones.push_back(done);
    buffer.truncateds.push_back(false);
    buffer.bootstrap_values.push_back(0.0);
  }
  buffer.dones.back() = true;

  PpoConfig cfg;
  cfg.minibatch_size = 4;

  GaussianActorCritic n1 = toy_nets(4);
  GaussianActorCritic n2 = toy_nets(4);
  Adam a1(n1.param_count(), cfg.learning_rate);
  Adam a2(n2.param_count(), cfg.learning_rate);
  Rng s1(99), s2(99);
  ppo_update(n1, a1, buffer, cfg, s1);
  ppo_update(n2, a2, buffer, cfg, s2);
  CHECK(n1.flat() == n2.flat());

  CHECK_THROWS_AS(compute_advantages(RolloutBuffer{}, cfg), std::invalid_argument);
}

TEST_CASE("gae reduces to discounted one-step errors at lambda zero") {
  RolloutBuffer buffer;
  buffer.states = {Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 0.0)};
  buffer.actions = buffer.states;
  buffer.log_probs = {0.0, 0.0};
  buffer.rewards = {1.0, 1.0};
  buffer.values = {0.5, 0.25};
  buffer.dones = {false, true};
  buffer.truncateds = {false, true};
  buffer.bootstrap_values = {0.0, 2.0};  // truncation bootstraps the next value

  PpoConfig cfg;
  cfg.discount = 0.5;
  cfg.gae_lambda = 0.0;
  const auto samples = compute_advantages(buffer, cfg);
  CHECK(samples[1].advantage == doctest::Approx(1.0 + 0.5 * 2.0 - 0.25));
  CHECK(samples[0].advantage == doctest::Approx(1.0 + 0.5 * 0.25 - 0.5));
  CHECK(samples[0].value_target == doctest::Approx(samples[0].advantage + 0.5));
}
