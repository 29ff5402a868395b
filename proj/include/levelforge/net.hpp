#pragma once

#include <Eigen/Core>
#include <istream>
#include <ostream>
#include <vector>

#include "levelforge/rng.hpp"

namespace lf {

/// Fully connected net with tanh hidden activations; the output is tanh when
/// `tanh_output` (bounded heads) and linear otherwise. Parameters are plain
/// Eigen matrices so gradients stay explicit.
class Mlp {
 public:
  Mlp() = default;

  /// Xavier-uniform init; the final layer is scaled by `final_scale`.
  Mlp(std::vector<int> sizes, bool tanh_output, double final_scale, Rng& rng);

  static Mlp zeros_like(const Mlp& other);

  const std::vector<int>& sizes() const { return sizes_; }
  bool tanh_output() const { return tanh_output_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  /// Cached activations for backprop: acts[0] is the input, acts[k] the output
  /// of layer k.
  struct Trace {
    std::vector<Eigen::VectorXd> acts;
  };
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Trace& trace) const;

  /// Backpropagate dL/dy, accumulating parameter gradients into `grad`
  /// (same shapes); returns dL/dx.
  Eigen::VectorXd backward(const Trace& trace, Eigen::VectorXd grad_out, Mlp& grad) const;

  long param_count() const;
  void fill(double value);
  void add_scaled(const Mlp& g, double scale);

  /// Row-major flattening of all weight blocks then biases, layer by layer.
  void write_flat(double* out) const;
  void read_flat(const double* in);
  Eigen::VectorXd flat() const;
  void set_flat(const Eigen::VectorXd& v);

  void save(std::ostream& os) const;
  static Mlp load(std::istream& is);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // weights_[k]: sizes_[k+1] x sizes_[k]
  std::vector<Eigen::VectorXd> biases_;
  bool tanh_output_ = false;
};

/// Adam over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(long n_params, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  double learning_rate() const { return lr_; }
  long steps_taken() const { return t_; }

  void save(std::ostream& os) const;
  static Adam load(std::istream& is);

 private:
  Eigen::VectorXd m_, v_;
  double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

}  // namespace lf
