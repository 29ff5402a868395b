#include "levelforge/online.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "levelforge/errors.hpp"

namespace lf {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double percentile99(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t idx =
      static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(values.size()))) - 1;
  return values[std::min(idx, values.size() - 1)];
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = static_cast<long>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace

void OnlineConfig::validate() const {
  if (resample_cap < 1) throw ConfigError("resample_cap must be >= 1");
  if (target_segments < 1) throw ConfigError("target_segments must be >= 1");
}

GenerationReport generate_online(const DesignerPolicy* policy, DesignEnv& env,
                                 const OnlineConfig& cfg, Rng& action_rng) {
  cfg.validate();
  GenerationReport report;
  std::vector<double> segment_times;
  double total_ms = 0.0;

  auto next_action = [&](bool resampling) -> Latent {
    if (!resampling)
      return policy ? policy->act(env.current_latent(), action_rng) : random_act(action_rng);
    if (cfg.resample_mode == OnlineConfig::Resample::Policy)
      return policy ? policy->act(env.current_latent(), action_rng) : random_act(action_rng);
    return normal_latent_clipped(action_rng);
  };

  while (env.segments_done() < cfg.target_segments && !report.failed) {
    const double seg_start = now_ms();
    int resamples = 0;
    Latent action = next_action(false);
    while (true) {
      const Candidate cand = env.propose(action);
      ++report.samples_total;
      if (cand.playable) {
        env.commit(cand);
        SegmentRecord rec;
        rec.d = cand.d;
        rec.f = cand.f;
        rec.h = cand.h;
        rec.census = cand.census;
        rec.resamples = resamples;
        rec.faulty_before = cand.faulty_before;
        rec.faulty_after = cand.faulty_after;
        rec.elapsed_ms = now_ms() - seg_start;
        report.faulty_tiles_before += cand.faulty_before;
        report.faulty_tiles_after += cand.faulty_after;
        report.census_totals += cand.census;
        segment_times.push_back(rec.elapsed_ms);
        total_ms += rec.elapsed_ms;
        if (cfg.time_budget_ms && rec.elapsed_ms > *cfg.time_budget_ms)
          ++report.budget_overruns;
        report.segments.push_back(std::move(rec));
        break;
      }
      ++report.unplayable_segments;
      if (resamples >= cfg.resample_cap) {
        report.failed = true;
        total_ms += now_ms() - seg_start;
        break;
      }
      ++resamples;
      action = next_action(true);
    }
    report.resamples_max = std::max(report.resamples_max, resamples);
    report.resamples_total += resamples;
  }

  if (!report.segments.empty()) {
    report.time_per_segment_ms = total_ms / static_cast<double>(report.segments.size());
    report.p99_segment_ms = percentile99(segment_times);
  }
  if (report.samples_total > 0)
    report.time_per_sample_ms = total_ms / static_cast<double>(report.samples_total);
  return report;
}

EvaluationReport evaluate_policy(const DesignerPolicy* policy,
                                 const GeneratorBackend& backend,
                                 const MetricConfig& metrics, const PhysicsParams& physics,
                                 const EvaluationConfig& cfg, const TileAlphabet& alpha) {
  if (cfg.initial_states < 1 || cfg.trials_per_init < 1 || cfg.max_segments < 1)
    throw ConfigError("evaluation counts must be >= 1");

  // Reward components play no role here; raw metrics are recorded directly.
  RewardConfig dummy_reward;
  dummy_reward.components = {RewardComponent::P};

  EvaluationReport report;
  std::vector<double> f_means, fb_percents, h_means, p_values;
  std::vector<double> gaps, pipes, enemies, bullets, coins, questions;

  for (int init = 0; init < cfg.initial_states; ++init) {
    for (int trial = 0; trial < cfg.trials_per_init; ++trial) {
      // Same env seed across trials of one initial state, so reset() replays
      // the same initial segment; actions differ per trial.
      DesignEnv env(backend, metrics, dummy_reward, physics, cfg.max_segments,
                    derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(init)), alpha);
      Rng action_rng(derive_seed(
          cfg.seed, 10000 + static_cast<std::uint64_t>(init) * 1000 +
                        static_cast<std::uint64_t>(trial)));
      env.reset();

      LevelEval lev;
      lev.init_index = init;
      lev.trial = trial;

      bool chain_alive = true;
      for (int t = 0; t < cfg.max_segments; ++t) {
        const Latent action = policy ? policy->act(env.current_latent(), action_rng)
                                     : random_act(action_rng);
        const Candidate cand = env.propose(action);
        SegmentEval se;
        se.playable = cand.playable;
        se.d = cand.d;
        se.f = cand.f;
        se.h = cand.h;
        se.census = cand.census;
        lev.segments.push_back(se);
        if (cand.playable) {
          env.commit(cand);
          if (chain_alive) ++lev.playable_segments;
        } else {
          chain_alive = false;
          if (cfg.terminate_on_unplayable) break;
          env.commit_unplayable(cand);
        }
      }
      lev.segments_generated = static_cast<int>(lev.segments.size());

      long playable = 0, in_band = 0;
      double f_sum = 0.0, h_sum = 0.0;
      ElementCensus census_sum;
      for (const auto& se : lev.segments) {
        if (!se.playable) continue;
        ++playable;
        f_sum += se.f;
        h_sum += se.h;
        if (se.d >= metrics.fun_lower && se.d <= metrics.fun_upper) ++in_band;
        census_sum += se.census;
      }
      if (playable > 0) {
        const double inv = 1.0 / static_cast<double>(playable);
        lev.f_mean = f_sum * inv;
        lev.h_mean = h_sum * inv;
        lev.fb_percent = 100.0 * static_cast<double>(in_band) * inv;
        lev.gaps = census_sum.gaps * inv;
        lev.pipes = census_sum.pipes * inv;
        lev.enemies = census_sum.enemies * inv;
        lev.bullets = census_sum.bullets * inv;
        lev.coins = census_sum.coins * inv;
        lev.question_marks = census_sum.question_marks * inv;
        f_means.push_back(lev.f_mean);
        fb_percents.push_back(lev.fb_percent);
        h_means.push_back(lev.h_mean);
        gaps.push_back(lev.gaps);
        pipes.push_back(lev.pipes);
        enemies.push_back(lev.enemies);
        bullets.push_back(lev.bullets);
        coins.push_back(lev.coins);
        questions.push_back(lev.question_marks);
      } else {
        lev.f_mean = lev.h_mean = lev.fb_percent = std::nan("");
      }
      p_values.push_back(static_cast<double>(lev.playable_segments));
      report.levels.push_back(std::move(lev));
    }
  }

  report.f_bar = summarize(f_means);
  report.fb_percent = summarize(fb_percents);
  report.h_bar = summarize(h_means);
  report.p_bar = summarize(p_values);
  report.gaps = summarize(gaps);
  report.pipes = summarize(pipes);
  report.enemies = summarize(enemies);
  report.bullets = summarize(bullets);
  report.coins = summarize(coins);
  report.question_marks = summarize(questions);
  return report;
}

LatencyStats benchmark_latency(const DesignerPolicy* policy, const GeneratorBackend& backend,
                               const MetricConfig& metrics, const PhysicsParams& physics,
                               int n_segments, std::uint64_t seed,
                               const TileAlphabet& alpha) {
  RewardConfig reward;
  reward.components = {RewardComponent::P};
  constexpr int kWarmupSegments = 5;

  DesignEnv env(backend, metrics, reward, physics, n_segments + kWarmupSegments,
                derive_seed(seed, 1), alpha);
  Rng action_rng(derive_seed(seed, 2));
  env.reset();

  OnlineConfig warmup_cfg;
  warmup_cfg.target_segments = kWarmupSegments;
  generate_online(policy, env, warmup_cfg, action_rng);

  OnlineConfig timed_cfg;
  timed_cfg.target_segments = n_segments + kWarmupSegments;
  const GenerationReport report = generate_online(policy, env, timed_cfg, action_rng);

  LatencyStats stats;
  stats.failed = report.failed;
  stats.segments = static_cast<long>(report.segments.size());
  stats.samples = report.samples_total;
  std::vector<double> times;
  double total = 0.0;
  for (const auto& rec : report.segments) {
    times.push_back(rec.elapsed_ms);
    total += rec.elapsed_ms;
  }
  if (!times.empty()) {
    stats.mean_segment_ms = total / static_cast<double>(times.size());
    stats.p99_segment_ms = percentile99(times);
  }
  if (report.samples_total > 0)
    stats.mean_sample_ms = total / static_cast<double>(report.samples_total);
  return stats;
}

}  // namespace lf
