#include "levelforge/net.hpp"

#include <cmath>
#include <stdexcept>

#include "levelforge/errors.hpp"
#include "levelforge/io.hpp"

namespace lf {

Mlp::Mlp(std::vector<int> sizes, bool tanh_output, double final_scale, Rng& rng)
    : sizes_(std::move(sizes)), tanh_output_(tanh_output) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least two sizes");
  for (std::size_t k = 0; k + 1 < sizes_.size(); ++k) {
    const int fan_in = sizes_[k];
    const int fan_out = sizes_[k + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    const double scale = (k + 2 == sizes_.size()) ? final_scale : 1.0;
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        w(r, c) = scale * rng.uniform(-limit, limit);
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
}

Mlp Mlp::zeros_like(const Mlp& other) {
  Mlp out;
  out.sizes_ = other.sizes_;
  out.tanh_output_ = other.tanh_output_;
  for (std::size_t k = 0; k < other.weights_.size(); ++k) {
    out.weights_.push_back(Eigen::MatrixXd::Zero(other.weights_[k].rows(),
                                                 other.weights_[k].cols()));
    out.biases_.push_back(Eigen::VectorXd::Zero(other.biases_[k].size()));
  }
  return out;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = x;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    a = weights_[k] * a + biases_[k];
    if (k + 1 < weights_.size() || tanh_output_) a = a.array().tanh();
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Trace& trace) const {
  trace.acts.clear();
  trace.acts.push_back(x);
  Eigen::VectorXd a = x;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    a = weights_[k] * a + biases_[k];
    if (k + 1 < weights_.size() || tanh_output_) a = a.array().tanh();
    trace.acts.push_back(a);
  }
  return a;
}

Eigen::VectorXd Mlp::backward(const Trace& trace, Eigen::VectorXd grad_out, Mlp& grad) const {
  for (int k = static_cast<int>(weights_.size()) - 1; k >= 0; --k) {
    const Eigen::VectorXd& out = trace.acts[k + 1];
    const Eigen::VectorXd& in = trace.acts[k];
    if (static_cast<std::size_t>(k) + 1 < weights_.size() || tanh_output_)
      grad_out = (grad_out.array() * (1.0 - out.array().square())).matrix();
    grad.weights_[k].noalias() += grad_out * in.transpose();
    grad.biases_[k] += grad_out;
    grad_out = weights_[k].transpose() * grad_out;
  }
  return grad_out;
}

long Mlp::param_count() const {
  long n = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k)
    n += weights_[k].size() + biases_[k].size();
  return n;
}

void Mlp::fill(double value) {
  for (auto& w : weights_) w.setConstant(value);
  for (auto& b : biases_) b.setConstant(value);
}

void Mlp::add_scaled(const Mlp& g, double scale) {
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    weights_[k] += scale * g.weights_[k];
    biases_[k] += scale * g.biases_[k];
  }
}

void Mlp::write_flat(double* out) const {
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const auto& w = weights_[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) *out++ = w(r, c);
    for (Eigen::Index r = 0; r < biases_[k].size(); ++r) *out++ = biases_[k][r];
  }
}

void Mlp::read_flat(const double* in) {
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    auto& w = weights_[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = *in++;
    for (Eigen::Index r = 0; r < biases_[k].size(); ++r) biases_[k][r] = *in++;
  }
}

Eigen::VectorXd Mlp::flat() const {
  Eigen::VectorXd v(param_count());
  write_flat(v.data());
  return v;
}

void Mlp::set_flat(const Eigen::VectorXd& v) {
  if (v.size() != param_count()) throw std::invalid_argument("flat size mismatch");
  read_flat(v.data());
}

void Mlp::save(std::ostream& os) const {
  write_u8(os, tanh_output_ ? 1 : 0);
  write_u32(os, static_cast<std::uint32_t>(sizes_.size()));
  for (int s : sizes_) write_u32(os, static_cast<std::uint32_t>(s));
  const Eigen::VectorXd v = flat();
  for (Eigen::Index i = 0; i < v.size(); ++i) write_f64(os, v[i]);
}

Mlp Mlp::load(std::istream& is) {
  Mlp out;
  out.tanh_output_ = read_u8(is) != 0;
  const std::uint32_t n_sizes = read_u32(is);
  if (n_sizes < 2 || n_sizes > 64) throw DataError("bad network shape");
  for (std::uint32_t i = 0; i < n_sizes; ++i)
    out.sizes_.push_back(static_cast<int>(read_u32(is)));
  for (std::size_t k = 0; k + 1 < out.sizes_.size(); ++k) {
    out.weights_.push_back(Eigen::MatrixXd::Zero(out.sizes_[k + 1], out.sizes_[k]));
    out.biases_.push_back(Eigen::VectorXd::Zero(out.sizes_[k + 1]));
  }
  Eigen::VectorXd v(out.param_count());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = read_f64(is);
  out.set_flat(v);
  return out;
}

Adam::Adam(long n_params, double learning_rate, double beta1, double beta2, double epsilon)
    : m_(Eigen::VectorXd::Zero(n_params)), v_(Eigen::VectorXd::Zero(n_params)),
      lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("Adam size mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params -= (lr_ / bias1) * (m_.array() / ((v_.array() / bias2).sqrt() + eps_)).matrix();
}

void Adam::save(std::ostream& os) const {
  write_u64(os, static_cast<std::uint64_t>(t_));
  write_f64(os, lr_);
  write_f64(os, beta1_);
  write_f64(os, beta2_);
  write_f64(os, eps_);
  write_u64(os, static_cast<std::uint64_t>(m_.size()));
  for (Eigen::Index i = 0; i < m_.size(); ++i) write_f64(os, m_[i]);
  for (Eigen::Index i = 0; i < v_.size(); ++i) write_f64(os, v_[i]);
}

Adam Adam::load(std::istream& is) {
  Adam out;
  out.t_ = static_cast<long>(read_u64(is));
  out.lr_ = read_f64(is);
  out.beta1_ = read_f64(is);
  out.beta2_ = read_f64(is);
  out.eps_ = read_f64(is);
  const std::uint64_t n = read_u64(is);
  out.m_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  out.v_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < out.m_.size(); ++i) out.m_[i] = read_f64(is);
  for (Eigen::Index i = 0; i < out.v_.size(); ++i) out.v_[i] = read_f64(is);
  return out;
}

}  // namespace lf
