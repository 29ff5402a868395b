#pragma once

#include <optional>
#include <vector>

#include "levelforge/env.hpp"
#include "levelforge/ppo.hpp"

namespace lf {

struct OnlineConfig {
  enum class Resample { Policy, Random };
  Resample resample_mode = Resample::Random;
  int resample_cap = 20;
  int target_segments = 100;
  std::optional<double> time_budget_ms;  // per segment; overruns are counted

  void validate() const;
};

struct SegmentRecord {
  double d = 0.0, f = 0.0, h = 0.0;
  ElementCensus census;
  int resamples = 0;
  int faulty_before = 0, faulty_after = 0;
  double elapsed_ms = 0.0;  // includes this segment's failed attempts
};

struct GenerationReport {
  bool failed = false;  // some segment exhausted the resample cap
  long unplayable_segments = 0;
  int resamples_max = 0;
  long resamples_total = 0;
  long samples_total = 0;
  double time_per_segment_ms = 0.0;
  double time_per_sample_ms = 0.0;
  double p99_segment_ms = 0.0;
  long faulty_tiles_before = 0, faulty_tiles_after = 0;
  long budget_overruns = 0;
  ElementCensus census_totals;
  std::vector<SegmentRecord> segments;  // playable, in emission order
};

/// Endless-generation loop with resampling: act, decode, repair, play-test;
/// unplayable candidates are resampled (fresh policy action or clipped normal
/// draw) up to the cap. Only playable segments are emitted. `env` must be
/// freshly reset; pass a null policy for the random designer.
GenerationReport generate_online(const DesignerPolicy* policy, DesignEnv& env,
                                 const OnlineConfig& cfg, Rng& action_rng);

struct EvaluationConfig {
  int initial_states = 30;
  int trials_per_init = 10;
  int max_segments = 100;
  /// With a P reward component an unplayable segment ends the level; without
  /// it generation always runs to max_segments.
  bool terminate_on_unplayable = true;
  std::uint64_t seed = 0;
};

struct SegmentEval {
  bool playable = false;
  double d = 0.0, f = 0.0, h = 0.0;
  ElementCensus census;
};

struct LevelEval {
  int init_index = 0;
  int trial = 0;
  int segments_generated = 0;
  int playable_segments = 0;  // P: completed before the first unplayable one
  double f_mean = 0.0;        // over playable segments; NaN when none
  double fb_percent = 0.0;    // % of playable segments with D in [l, u]
  double h_mean = 0.0;
  double gaps = 0.0, pipes = 0.0, enemies = 0.0, bullets = 0.0, coins = 0.0,
         question_marks = 0.0;  // per-playable-segment means
  std::vector<SegmentEval> segments;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
  long count = 0;
};

struct EvaluationReport {
  Summary f_bar;        // mean F over playable segments, averaged across levels
  Summary fb_percent;   // percentage of playable segments inside the fun band
  Summary h_bar;
  Summary p_bar;        // completed segments per level
  Summary gaps, pipes, enemies, bullets, coins, question_marks;
  std::vector<LevelEval> levels;
};

/// Batch evaluation: `initial_states` initial segments, `trials_per_init`
/// independent generations each (no resampling). Aggregates are computed over
/// playable segments only.
EvaluationReport evaluate_policy(const DesignerPolicy* policy,
                                 const GeneratorBackend& backend,
                                 const MetricConfig& metrics, const PhysicsParams& physics,
                                 const EvaluationConfig& cfg,
                                 const TileAlphabet& alpha = TileAlphabet::smb());

struct LatencyStats {
  double mean_segment_ms = 0.0;
  double p99_segment_ms = 0.0;
  double mean_sample_ms = 0.0;
  long segments = 0;
  long samples = 0;
  bool failed = false;
};

/// Steady-state wall-clock cost per emitted segment and per sample. The
/// pipeline is warmed with a few untimed segments first.
LatencyStats benchmark_latency(const DesignerPolicy* policy, const GeneratorBackend& backend,
                               const MetricConfig& metrics, const PhysicsParams& physics,
                               int n_segments, std::uint64_t seed,
                               const TileAlphabet& alpha = TileAlphabet::smb());

}  // namespace lf
