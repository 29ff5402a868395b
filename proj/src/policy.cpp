#include "levelforge/policy.hpp"

#include <cmath>

#include "levelforge/errors.hpp"
#include "levelforge/io.hpp"

namespace lf {

Eigen::VectorXd GaussianActorCritic::flat() const {
  Eigen::VectorXd v(param_count());
  actor.write_flat(v.data());
  critic.write_flat(v.data() + actor.param_count());
  v.tail(log_std.size()) = log_std;
  return v;
}

void GaussianActorCritic::set_flat(const Eigen::VectorXd& v) {
  actor.read_flat(v.data());
  critic.read_flat(v.data() + actor.param_count());
  log_std = v.tail(log_std.size());
}

void GaussianActorCritic::check_finite() const {
  if (!flat().allFinite()) throw RuntimeFailure("policy parameters diverged (non-finite)");
}

double gaussian_log_prob(const Eigen::VectorXd& action, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std) {
  constexpr double kLogTwoPi = 1.8378770664093453;
  const Eigen::ArrayXd z = (action - mean).array() * (-log_std).array().exp();
  return (-0.5 * z.square() - log_std.array() - 0.5 * kLogTwoPi).sum();
}

double gaussian_entropy(const Eigen::VectorXd& log_std) {
  constexpr double kLogTwoPiE = 2.837877066409345;
  return (log_std.array() + 0.5 * kLogTwoPiE).sum();
}

DesignerPolicy::DesignerPolicy(std::uint64_t init_seed) {
  Rng rng(init_seed);
  nets_.actor = Mlp({kLatentDim, 64, 64, kLatentDim}, /*tanh_output=*/true,
                    /*final_scale=*/0.01, rng);
  nets_.critic = Mlp({kLatentDim, 64, 64, 1}, /*tanh_output=*/false,
                     /*final_scale=*/1.0, rng);
  nets_.log_std = Eigen::VectorXd::Constant(kLatentDim, kInitialLogStd);
}

Latent DesignerPolicy::action_mean(const Latent& state) const {
  const Eigen::VectorXd mean = nets_.actor.forward(state);
  if (!mean.allFinite()) throw RuntimeFailure("policy network produced non-finite output");
  return clip_latent(mean);
}

Latent DesignerPolicy::act(const Latent& state, Rng& rng, ActMode mode) const {
  if (mode == ActMode::Mean) return action_mean(state);
  return act_with_log_prob(state, rng).first;
}

std::pair<Latent, double> DesignerPolicy::act_with_log_prob(const Latent& state,
                                                            Rng& rng) const {
  const Eigen::VectorXd mean = nets_.actor.forward(state);
  if (!mean.allFinite()) throw RuntimeFailure("policy network produced non-finite output");
  Latent action;
  for (int i = 0; i < kLatentDim; ++i)
    action[i] = mean[i] + std::exp(nets_.log_std[i]) * rng.normal();
  action = clip_latent(action);
  return {action, gaussian_log_prob(action, mean, nets_.log_std)};
}

double DesignerPolicy::value(const Latent& state) const {
  const Eigen::VectorXd v = nets_.critic.forward(state);
  if (!v.allFinite()) throw RuntimeFailure("value network produced non-finite output");
  return v[0];
}

void DesignerPolicy::save(std::ostream& os) const {
  nets_.actor.save(os);
  nets_.critic.save(os);
  write_u32(os, static_cast<std::uint32_t>(nets_.log_std.size()));
  for (Eigen::Index i = 0; i < nets_.log_std.size(); ++i) write_f64(os, nets_.log_std[i]);
}

DesignerPolicy DesignerPolicy::load(std::istream& is) {
  DesignerPolicy p;
  p.nets_.actor = Mlp::load(is);
  p.nets_.critic = Mlp::load(is);
  const std::uint32_t n = read_u32(is);
  p.nets_.log_std = Eigen::VectorXd::Zero(n);
  for (std::uint32_t i = 0; i < n; ++i) p.nets_.log_std[i] = read_f64(is);
  return p;
}

}  // namespace lf
