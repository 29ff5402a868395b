#include "levelforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "levelforge/errors.hpp"

namespace lf {

void MetricConfig::validate() const {
  if (pattern_size < 1) throw ConfigError("pattern_size must be >= 1");
  if (epsilon <= 0.0) throw ConfigError("epsilon must be > 0");
  if (window_rows < pattern_size || window_cols < pattern_size)
    throw ConfigError("metric window smaller than pattern size");
  if (history_windows < 0) throw ConfigError("n must be >= 0");
  if (window_stride < 1) throw ConfigError("d must be >= 1");
  if (!(fun_lower > 0.0 && fun_lower < fun_upper))
    throw ConfigError("fun bounds must satisfy 0 < l < u");
  if (nearest_count < 1 || nearest_count > memory_size)
    throw ConfigError("require 1 <= k <= m");
}

PatternDistribution PatternDistribution::from_region(const TileGrid& region,
                                                     int pattern_size) {
  if (region.rows() < pattern_size || region.cols() < pattern_size)
    throw std::invalid_argument("region smaller than pattern size");
  PatternDistribution dist(pattern_size);
  std::string key(static_cast<std::size_t>(pattern_size) * pattern_size, '\0');
  for (int r = 0; r + pattern_size <= region.rows(); ++r) {
    for (int c = 0; c + pattern_size <= region.cols(); ++c) {
      int k = 0;
      for (int dr = 0; dr < pattern_size; ++dr)
        for (int dc = 0; dc < pattern_size; ++dc) key[k++] = region.at(r + dr, c + dc);
      ++dist.counts_[key];
      ++dist.total_;
    }
  }
  return dist;
}

double kl_divergence(const PatternDistribution& a, const PatternDistribution& b,
                     double epsilon) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty pattern distribution");
  if (a.pattern_size() != b.pattern_size())
    throw std::invalid_argument("pattern size mismatch");

  // Union support; std::map keeps iteration order deterministic.
  std::map<std::string, std::pair<long, long>> support;
  for (const auto& [key, count] : a.counts()) support[key].first = count;
  for (const auto& [key, count] : b.counts()) support[key].second = count;

  const double union_size = static_cast<double>(support.size());
  const double denom_a = static_cast<double>(a.total()) + epsilon * union_size;
  const double denom_b = static_cast<double>(b.total()) + epsilon * union_size;

  double kl = 0.0;
  for (const auto& [key, counts] : support) {
    const double pa = (static_cast<double>(counts.first) + epsilon) / denom_a;
    const double pb = (static_cast<double>(counts.second) + epsilon) / denom_b;
    kl += pa * std::log(pa / pb);
  }
  return kl;
}

double diversity(const Level& level, int seg_start_col, const MetricConfig& cfg) {
  if (seg_start_col < 0 || seg_start_col + cfg.window_cols > level.width())
    throw std::invalid_argument("segment window out of bounds");

  const PatternDistribution s_dist = PatternDistribution::from_region(
      level.grid().window(0, seg_start_col, cfg.window_rows, cfg.window_cols),
      cfg.pattern_size);

  // Rearward strides that stay inside the grid.
  const int steps = std::min(cfg.history_windows, seg_start_col / cfg.window_stride);
  double sum = 0.0;  // the i = 0 self term contributes 0
  for (int i = 1; i <= steps; ++i) {
    const int col = seg_start_col - i * cfg.window_stride;
    const PatternDistribution w_dist = PatternDistribution::from_region(
        level.grid().window(0, col, cfg.window_rows, cfg.window_cols), cfg.pattern_size);
    sum += kl_divergence(s_dist, w_dist, cfg.epsilon);
  }
  return sum / static_cast<double>(steps + 1);
}

double fun(double d_value, const MetricConfig& cfg) {
  if (d_value > cfg.fun_upper) {
    const double over = d_value - cfg.fun_upper;
    return -over * over;
  }
  if (d_value < cfg.fun_lower) {
    const double under = d_value - cfg.fun_lower;
    return -under * under;
  }
  return 0.0;
}

double historical_deviation(const PatternDistribution& s_dist,
                            const std::deque<PatternDistribution>& history,
                            const MetricConfig& cfg) {
  if (history.empty()) return 0.0;
  const int considered = std::min<int>(cfg.memory_size, static_cast<int>(history.size()));
  std::vector<double> kls;
  kls.reserve(considered);
  for (int i = 0; i < considered; ++i) {
    const auto& past = history[history.size() - 1 - i];  // most recent first
    kls.push_back(kl_divergence(s_dist, past, cfg.epsilon));
  }
  std::sort(kls.begin(), kls.end());
  const int k = std::min(cfg.nearest_count, considered);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += kls[i];
  return sum / static_cast<double>(k);
}

double historical_deviation(const Segment& s, const std::vector<Segment>& history,
                            const MetricConfig& cfg) {
  const PatternDistribution s_dist = PatternDistribution::from_region(s, cfg.pattern_size);
  std::deque<PatternDistribution> dists;
  for (const auto& past : history)
    dists.push_back(PatternDistribution::from_region(past, cfg.pattern_size));
  return historical_deviation(s_dist, dists, cfg);
}

std::vector<DiversityStats> corpus_diversity_stats(
    const std::vector<std::pair<Level, std::string>>& corpus, const MetricConfig& cfg,
    int slice_stride) {
  if (corpus.empty()) throw DataError("empty corpus");
  if (slice_stride < 1) throw std::invalid_argument("stride must be >= 1");

  struct Accum {
    long levels = 0;
    long segments = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::map<std::string, Accum> by_type;
  Accum all;

  for (const auto& [level, type] : corpus) {
    auto& acc = by_type[type];
    ++acc.levels;
    ++all.levels;
    for (int offset = 0; offset + cfg.window_cols <= level.width(); offset += slice_stride) {
      const double d = diversity(level, offset, cfg);
      ++acc.segments;
      acc.sum += d;
      acc.sum_sq += d * d;
      ++all.segments;
      all.sum += d;
      all.sum_sq += d * d;
    }
  }

  auto finish = [](const std::string& type, const Accum& acc) {
    DiversityStats st;
    st.type = type;
    st.levels = acc.levels;
    st.segments = acc.segments;
    if (acc.segments > 0) st.mean = acc.sum / static_cast<double>(acc.segments);
    if (acc.segments > 1) {
      const double var =
          (acc.sum_sq - acc.sum * acc.sum / static_cast<double>(acc.segments)) /
          static_cast<double>(acc.segments - 1);
      st.stddev = std::sqrt(std::max(0.0, var));
    }
    return st;
  };

  std::vector<DiversityStats> out;
  for (const auto& [type, acc] : by_type) out.push_back(finish(type, acc));
  if (by_type.size() > 1) out.push_back(finish("all", all));
  return out;
}

}  // namespace lf
