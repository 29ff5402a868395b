#include "doctest.h"

#include <cmath>

#include "levelforge/errors.hpp"
#include "levelforge/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lf;

namespace {
const MetricConfig kCfg;  // paper defaults
}

TEST_CASE("pattern distribution window counts") {
  const TileGrid empty(14, 14, '-');
  const auto dist = PatternDistribution::from_region(empty, 2);
  CHECK(dist.total() == 169);
  CHECK(dist.counts().size() == 1);
  CHECK(dist.counts().at("----") == 169);

  const TileGrid tiny(2, 2, 'X');
  CHECK(PatternDistribution::from_region(tiny, 2).total() == 1);

  // Top 7 rows empty, bottom 7 solid: 78 empty, 13 boundary, 78 solid windows.
  TileGrid half(14, 14, '-');
  for (int r = 7; r < 14; ++r)
    for (int c = 0; c < 14; ++c) half.at(r, c) = 'X';
  const auto hd = PatternDistribution::from_region(half, 2);
  CHECK(hd.counts().size() == 3);
  CHECK(hd.counts().at("----") == 78);
  CHECK(hd.counts().at("--XX") == 13);
  CHECK(hd.counts().at("XXXX") == 78);

  CHECK_THROWS_AS(PatternDistribution::from_region(TileGrid(1, 14, '-'), 2),
                  std::invalid_argument);
}

TEST_CASE("kl divergence identities and hand value") {
  const auto empty = PatternDistribution::from_region(TileGrid(14, 14, '-'), 2);
  const auto solid = PatternDistribution::from_region(TileGrid(14, 14, 'X'), 2);

  CHECK(kl_divergence(empty, empty, 0.001) == doctest::Approx(0.0).epsilon(1e-12));

  // Hand computation: two-pattern union, 169 windows each side.
  const double kl = kl_divergence(empty, solid, 0.001);
  CHECK(kl == doctest::Approx(12.04).epsilon(0.001));
  CHECK(kl == doctest::Approx(12.037517455219595).epsilon(1e-12));
  CHECK(kl == doctest::Approx(kl_divergence(solid, empty, 0.001)).epsilon(1e-12));

  // Asymmetric in general: check a three-pattern example against the oracle.
  TileGrid a(14, 14, '-');
  for (int c = 0; c < 14; ++c) a.at(13, c) = 'X';
  TileGrid b(14, 14, '-');
  for (int r = 7; r < 14; ++r)
    for (int c = 0; c < 14; ++c) b.at(r, c) = 'X';
  const auto da = PatternDistribution::from_region(a, 2);
  const auto db = PatternDistribution::from_region(b, 2);
  CHECK(kl_divergence(da, db, 0.001) ==
        doctest::Approx(oracle::kl_regions(a, b, 2, 0.001)).epsilon(1e-12));
  CHECK(kl_divergence(db, da, 0.001) ==
        doctest::Approx(oracle::kl_regions(b, a, 2, 0.001)).epsilon(1e-12));
  CHECK(kl_divergence(da, db, 0.001) != doctest::Approx(kl_divergence(db, da, 0.001)));

  CHECK_THROWS_AS(kl_divergence(da, PatternDistribution::from_region(b, 3), 0.001),
                  std::invalid_argument);
}

TEST_CASE("diversity on degenerate and constructed levels") {
  // Identical repeated segments: every window equals S.
  Level level = Level::empty();
  for (int i = 0; i < 4; ++i) level.append(testutil::flat_segment(3));
  CHECK(diversity(level, 42, kCfg) == doctest::Approx(0.0).epsilon(1e-12));

  // First segment: no rearward windows.
  CHECK(diversity(level, 0, kCfg) == doctest::Approx(0.0).epsilon(1e-12));

  // Constructed 35-column level with known contents vs the oracle.
  lf::Rng rng(7);
  Level wide(testutil::random_level(rng, 3).grid().window(0, 0, 14, 35));
  for (int start : {0, 7, 14, 21}) {
    CHECK(diversity(wide, start, kCfg) ==
          doctest::Approx(oracle::diversity(wide, start, kCfg)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(diversity(wide, 22, kCfg), std::invalid_argument);

  // Appending future segments does not change D at an existing position.
  lf::Rng rng2(8);
  Level growing = testutil::random_level(rng2, 3);
  const double before = diversity(growing, 28, kCfg);
  growing.append(testutil::random_segment(rng2));
  CHECK(diversity(growing, 28, kCfg) == doctest::Approx(before).epsilon(1e-15));
}

TEST_CASE("fun band values") {
  CHECK(fun(0.5, kCfg) == 0.0);
  CHECK(fun(1.00, kCfg) == doctest::Approx(-0.0036).epsilon(1e-12));
  CHECK(fun(0.10, kCfg) == doctest::Approx(-0.0256).epsilon(1e-12));
  CHECK(fun(kCfg.fun_lower, kCfg) == 0.0);
  CHECK(fun(kCfg.fun_upper, kCfg) == 0.0);
  // Continuity at the bounds.
  CHECK(std::abs(fun(kCfg.fun_lower - 1e-9, kCfg)) < 1e-12);
  CHECK(std::abs(fun(kCfg.fun_upper + 1e-9, kCfg)) < 1e-12);
}

TEST_CASE("historical deviation") {
  const Segment s = testutil::flat_segment(3);

  CHECK(historical_deviation(s, {}, kCfg) == 0.0);
  CHECK(historical_deviation(s, {s}, kCfg) == doctest::Approx(0.0).epsilon(1e-12));

  // Mean of the two smallest KL values when k >= history size.
  lf::Rng rng(11);
  const Segment h1 = testutil::random_segment(rng);
  const Segment h2 = testutil::random_segment(rng);
  const double kl1 = oracle::kl_regions(s, h1, 2, kCfg.epsilon);
  const double kl2 = oracle::kl_regions(s, h2, 2, kCfg.epsilon);
  CHECK(historical_deviation(s, {h1, h2}, kCfg) ==
        doctest::Approx(0.5 * (kl1 + kl2)).epsilon(1e-12));

  // Only the most recent m = 20 segments are considered: plant a duplicate at
  // position 21 from the end and the score must not change.
  std::vector<Segment> history;
  for (int i = 0; i < 20; ++i) history.push_back(testutil::random_segment(rng));
  const double without = historical_deviation(s, history, kCfg);
  CHECK(without > 0.0);
  std::vector<Segment> with_dup;
  with_dup.push_back(s);  // would score 0 if it were considered
  with_dup.insert(with_dup.end(), history.begin(), history.end());
  CHECK(historical_deviation(s, with_dup, kCfg) ==
        doctest::Approx(without).epsilon(1e-12));

  // Never exceeds the largest pairwise KL in the window.
  double max_kl = 0.0;
  for (const auto& h : history)
    max_kl = std::max(max_kl, oracle::kl_regions(s, h, 2, kCfg.epsilon));
  CHECK(historical_deviation(s, history, kCfg) <= max_kl + 1e-12);
}

TEST_CASE("oracle equivalence on random levels") {
  lf::Rng rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    const Level level = testutil::random_level(rng, 5);
    for (int start = 0; start + 14 <= level.width(); start += 7) {
      const double d = diversity(level, start, kCfg);
      CHECK(d == doctest::Approx(oracle::diversity(level, start, kCfg)).epsilon(1e-12));
      CHECK(d >= 0.0);
      CHECK(fun(d, kCfg) == doctest::Approx(oracle::fun(d, kCfg)).epsilon(1e-12));
    }
    std::vector<Segment> history;
    for (int i = 0; i < level.segment_count() - 1; ++i) history.push_back(level.segment(i));
    const Segment last = level.segment(level.segment_count() - 1);
    CHECK(historical_deviation(last, history, kCfg) ==
          doctest::Approx(oracle::historical_deviation(last, history, kCfg))
              .epsilon(1e-12));
  }
}

TEST_CASE("corpus diversity stats") {
  Level repeats = Level::empty();
  for (int i = 0; i < 5; ++i) repeats.append(testutil::flat_segment(2));
  const auto stats = corpus_diversity_stats({{repeats, "overworld"}}, kCfg, 14);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].type == "overworld");
  CHECK(stats[0].segments == 5);
  CHECK(stats[0].mean == doctest::Approx(0.0));
  CHECK(stats[0].stddev == doctest::Approx(0.0));

  CHECK_THROWS_AS(corpus_diversity_stats({}, kCfg, 14), DataError);

  // Two types plus the synthetic "all" row; counts follow the stride.
  lf::Rng rng(5);
  const auto multi = corpus_diversity_stats(
      {{testutil::random_level(rng, 4), "overworld"},
       {testutil::random_level(rng, 3), "underground"}},
      kCfg, 7);
  REQUIRE(multi.size() == 3);
  CHECK(multi.back().type == "all");
  long total = 0;
  for (const auto& st : multi)
    if (st.type != "all") total += st.segments;
  CHECK(total == multi.back().segments);
}
