#pragma once

#include <Eigen/Core>

#include "levelforge/rng.hpp"

namespace lf {

inline constexpr int kLatentDim = 32;

/// Point in [-1,1]^32; both the designer's state and its action.
using Latent = Eigen::Matrix<double, kLatentDim, 1>;

inline Latent clip_latent(Latent z) { return z.cwiseMax(-1.0).cwiseMin(1.0); }

inline bool latent_in_bounds(const Latent& z) {
  return (z.array() >= -1.0).all() && (z.array() <= 1.0).all();
}

/// Uniform sample over [-1,1]^32.
inline Latent uniform_latent(Rng& rng) {
  Latent z;
  for (int i = 0; i < kLatentDim; ++i) z[i] = rng.uniform(-1.0, 1.0);
  return z;
}

/// Standard normal sample clipped into [-1,1]^32 (online random resampling).
inline Latent normal_latent_clipped(Rng& rng) {
  Latent z;
  for (int i = 0; i < kLatentDim; ++i) z[i] = rng.normal();
  return clip_latent(z);
}

}  // namespace lf
