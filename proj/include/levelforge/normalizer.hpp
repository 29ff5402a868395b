#pragma once

#include <algorithm>
#include <vector>

#include "levelforge/io.hpp"

namespace lf {

/// Min-max normalizer over a ring of the most recent raw values. The incoming
/// value is pushed first, so the output always lies in [0,1]; a degenerate
/// range (min == max) maps to 0.5.
class RunningNormalizer {
 public:
  explicit RunningNormalizer(int window = 1000) : window_(window) {}

  double push_and_normalize(double raw) {
    if (static_cast<int>(buffer_.size()) < window_) {
      buffer_.push_back(raw);
    } else {
      buffer_[next_] = raw;
      next_ = (next_ + 1) % window_;
    }
    const auto [lo, hi] = std::minmax_element(buffer_.begin(), buffer_.end());
    if (*hi == *lo) return 0.5;
    return (raw - *lo) / (*hi - *lo);
  }

  int window() const { return window_; }
  int size() const { return static_cast<int>(buffer_.size()); }

  void save(std::ostream& os) const {
    write_u32(os, static_cast<std::uint32_t>(window_));
    write_u32(os, static_cast<std::uint32_t>(next_));
    write_u32(os, static_cast<std::uint32_t>(buffer_.size()));
    for (double v : buffer_) write_f64(os, v);
  }
  static RunningNormalizer load(std::istream& is) {
    RunningNormalizer out(static_cast<int>(read_u32(is)));
    out.next_ = static_cast<int>(read_u32(is));
    const std::uint32_t n = read_u32(is);
    out.buffer_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) out.buffer_[i] = read_f64(is);
    return out;
  }

  bool operator==(const RunningNormalizer&) const = default;

 private:
  int window_;
  int next_ = 0;
  std::vector<double> buffer_;
};

}  // namespace lf
