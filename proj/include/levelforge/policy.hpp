#pragma once

#include <string>

#include "levelforge/latent.hpp"
#include "levelforge/net.hpp"

namespace lf {

/// Diagonal-Gaussian actor plus value critic over arbitrary dimensions. The
/// actor head is tanh-bounded, so the action mean lives in (-1,1)^dim; sampled
/// actions are clipped into [-1,1]^dim. log_std is a learned per-dimension
/// parameter.
struct GaussianActorCritic {
  Mlp actor;
  Mlp critic;
  Eigen::VectorXd log_std;

  long param_count() const { return actor.param_count() + critic.param_count() + log_std.size(); }
  Eigen::VectorXd flat() const;
  void set_flat(const Eigen::VectorXd& v);
  void check_finite() const;  // throws RuntimeFailure on divergence
};

double gaussian_log_prob(const Eigen::VectorXd& action, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std);
double gaussian_entropy(const Eigen::VectorXd& log_std);

enum class ActMode { Stochastic, Mean };

/// The RL designer: 32 -> 64 -> 64 -> 32 actor with bounded head, 32 -> 64 ->
/// 64 -> 1 critic, per-dimension log stddev initialized to ln(0.5).
class DesignerPolicy {
 public:
  DesignerPolicy() = default;
  explicit DesignerPolicy(std::uint64_t init_seed);

  Latent act(const Latent& state, Rng& rng, ActMode mode = ActMode::Stochastic) const;

  /// Stochastic action together with its Gaussian log-probability (evaluated
  /// at the clipped action), as stored in rollouts.
  std::pair<Latent, double> act_with_log_prob(const Latent& state, Rng& rng) const;

  double value(const Latent& state) const;
  Latent action_mean(const Latent& state) const;

  GaussianActorCritic& nets() { return nets_; }
  const GaussianActorCritic& nets() const { return nets_; }

  void save(std::ostream& os) const;
  static DesignerPolicy load(std::istream& is);

 private:
  GaussianActorCritic nets_;
};

/// The random baseline designer: uniform over the latent cube.
inline Latent random_act(Rng& rng) { return uniform_latent(rng); }

inline constexpr double kInitialLogStd = -0.6931471805599453;  // ln(0.5)

}  // namespace lf
