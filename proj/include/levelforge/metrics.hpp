#pragma once

#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "levelforge/level.hpp"

namespace lf {

/// Hyperparameters of the segment metrics.
struct MetricConfig {
  int pattern_size = 2;    // p: tile patterns are p x p windows
  double epsilon = 0.001;  // smoothing added to every count over the union support
  int window_rows = kSegmentRows;
  int window_cols = kSegmentCols;
  int history_windows = 3;  // n: rearward sliding-window steps for diversity
  int window_stride = 7;    // d: columns between consecutive windows
  double fun_lower = 0.26;  // l
  double fun_upper = 0.94;  // u
  int memory_size = 20;     // m: segments considered for historical deviation
  int nearest_count = 10;   // k: most similar segments averaged

  void validate() const;  // throws ConfigError on violated invariants
};

/// Empirical distribution of p x p tile patterns in a region, keyed by the
/// flattened glyph string of the window (rows concatenated).
class PatternDistribution {
 public:
  explicit PatternDistribution(int pattern_size) : pattern_size_(pattern_size) {}

  /// Counts over all (h-p+1)*(w-p+1) axis-aligned windows, stride 1.
  static PatternDistribution from_region(const TileGrid& region, int pattern_size);

  int pattern_size() const { return pattern_size_; }
  long total() const { return total_; }
  bool empty() const { return total_ == 0; }
  const std::map<std::string, long>& counts() const { return counts_; }

 private:
  int pattern_size_;
  long total_ = 0;
  std::map<std::string, long> counts_;
};

/// KL(a || b) in nats over the union support, with every count smoothed by
/// epsilon and renormalized by (total + epsilon * |union|). Always finite and
/// >= 0 for nonempty inputs.
double kl_divergence(const PatternDistribution& a, const PatternDistribution& b,
                     double epsilon);

/// Diversity of the segment-sized window starting at `seg_start_col`: the mean
/// tile-pattern KL against the windows d, 2d, ... columns behind it (including
/// the zero self term). Windows that would reach before column 0 are excluded,
/// so the first segment of a level scores 0.
double diversity(const Level& level, int seg_start_col, const MetricConfig& cfg);

/// Penalty for diversity outside the moderate band [l, u]:
/// 0 inside the band, -(d-u)^2 above, -(d-l)^2 below.
double fun(double d_value, const MetricConfig& cfg);

/// Mean KL against the k most similar of the last m segments (history oldest
/// first). Short histories use whatever is available; empty history scores 0.
double historical_deviation(const Segment& s, const std::vector<Segment>& history,
                            const MetricConfig& cfg);

/// Same, over precomputed pattern distributions (newest last).
double historical_deviation(const PatternDistribution& s_dist,
                            const std::deque<PatternDistribution>& history,
                            const MetricConfig& cfg);

struct DiversityStats {
  std::string type;
  long levels = 0;
  long segments = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Per-type mean and sample standard deviation of diversity over every sliced
/// segment position, plus an "all" row across the whole corpus.
std::vector<DiversityStats> corpus_diversity_stats(
    const std::vector<std::pair<Level, std::string>>& corpus, const MetricConfig& cfg,
    int slice_stride);

}  // namespace lf
