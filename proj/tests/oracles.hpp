#pragma once

// Brute-force reference implementations of the segment metrics. These
// re-enumerate patterns and sum terms naively, independent of the library
// code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "levelforge/level.hpp"
#include "levelforge/metrics.hpp"

namespace oracle {

inline std::map<std::string, long> pattern_counts(const lf::TileGrid& g, int p) {
  std::map<std::string, long> counts;
  for (int r = 0; r + p <= g.rows(); ++r) {
    for (int c = 0; c + p <= g.cols(); ++c) {
      std::string key;
      for (int dr = 0; dr < p; ++dr)
        for (int dc = 0; dc < p; ++dc) key.push_back(g.at(r + dr, c + dc));
      counts[key] += 1;
    }
  }
  return counts;
}

inline double kl(const std::map<std::string, long>& a, const std::map<std::string, long>& b,
                 double eps) {
  std::map<std::string, bool> support;
  for (const auto& [k, v] : a) support[k] = true;
  for (const auto& [k, v] : b) support[k] = true;
  long total_a = 0, total_b = 0;
  for (const auto& [k, v] : a) total_a += v;
  for (const auto& [k, v] : b) total_b += v;
  double result = 0.0;
  for (const auto& [key, unused] : support) {
    const double ca = a.count(key) ? static_cast<double>(a.at(key)) : 0.0;
    const double cb = b.count(key) ? static_cast<double>(b.at(key)) : 0.0;
    const double pa = (ca + eps) / (static_cast<double>(total_a) + eps * support.size());
    const double pb = (cb + eps) / (static_cast<double>(total_b) + eps * support.size());
    result += pa * std::log(pa / pb);
  }
  return result;
}

inline double kl_regions(const lf::TileGrid& a, const lf::TileGrid& b, int p, double eps) {
  return kl(pattern_counts(a, p), pattern_counts(b, p), eps);
}

inline double diversity(const lf::Level& level, int start, const lf::MetricConfig& cfg) {
  const lf::TileGrid s =
      level.grid().window(0, start, cfg.window_rows, cfg.window_cols);
  double sum = 0.0;
  int terms = 1;  // S against itself
  for (int i = 1; i <= cfg.history_windows; ++i) {
    const int col = start - i * cfg.window_stride;
    if (col < 0) break;
    const lf::TileGrid w = level.grid().window(0, col, cfg.window_rows, cfg.window_cols);
    sum += kl_regions(s, w, cfg.pattern_size, cfg.epsilon);
    ++terms;
  }
  return sum / terms;
}

inline double fun(double d, const lf::MetricConfig& cfg) {
  if (d > cfg.fun_upper) return -(d - cfg.fun_upper) * (d - cfg.fun_upper);
  if (d < cfg.fun_lower) return -(d - cfg.fun_lower) * (d - cfg.fun_lower);
  return 0.0;
}

inline double historical_deviation(const lf::Segment& s,
                                   const std::vector<lf::Segment>& history,
                                   const lf::MetricConfig& cfg) {
  if (history.empty()) return 0.0;
  std::vector<double> kls;
  const int considered =
      std::min<int>(cfg.memory_size, static_cast<int>(history.size()));
  for (int i = 0; i < considered; ++i)
    kls.push_back(kl_regions(s, history[history.size() - 1 - i], cfg.pattern_size,
                             cfg.epsilon));
  std::sort(kls.begin(), kls.end());
  const int k = std::min(cfg.nearest_count, considered);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += kls[i];
  return sum / k;
}

}  // namespace oracle
