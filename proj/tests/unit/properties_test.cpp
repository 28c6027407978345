// Copyright 2026 The Entrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomized checks of invariants that hold across modules.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "entrain/analysis.hpp"
#include "entrain/entrainment.hpp"
#include "entrain/sectioning.hpp"
#include "entrain/stats.hpp"
#include "entrain/synchrony.hpp"
#include "test_util.hpp"

namespace entrain {
namespace {

using testing::Alternating;
using testing::RandomVector;

constexpr int kTrials = 200;

TEST(CorrelationProperties, SymmetryNegationAffineMonotone) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(3, 60);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t n = size(rng);
    const auto x = RandomVector(rng, n);
    const auto y = RandomVector(rng, n);
    std::vector<double> neg(y);
    for (double& v : neg) v = -v;
    std::vector<double> affine(x);
    const double a = scale(rng);
    for (double& v : affine) v = a * v + 3.0;
    std::vector<double> cubed(x);
    for (double& v : cubed) v = v * v * v + std::exp(v);

    const auto p = stats::Pearson(x, y);
    EXPECT_EQ(p.r, stats::Pearson(y, x).r);
    EXPECT_EQ(-p.r, stats::Pearson(x, neg).r);
    EXPECT_NEAR(stats::Pearson(affine, y).r, p.r, 1e-12);

    const auto s = stats::Spearman(x, y);
    EXPECT_EQ(s.r, stats::Spearman(y, x).r);
    EXPECT_EQ(-s.r, stats::Spearman(x, neg).r);
    EXPECT_NEAR(stats::Spearman(cubed, y).r, s.r, 1e-12);
  }
}

TEST(CorrelationProperties, PDecreasesWithAbsR) {
  for (double n : {5.0, 12.0, 25.0, 155.0}) {
    double last = 1.1;
    for (double r = 0.0; r < 0.999; r += 0.01) {
      const double t = r * std::sqrt((n - 2) / (1 - r * r));
      const double p = stats::StudentTTwoSidedP(t, n - 2);
      EXPECT_LT(p, last);
      EXPECT_GE(p, 0.0);
      last = p;
    }
  }
}

TEST(NormalizeProperties, ZeroSumIdempotentAndSpeakerIsolated) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + 2 * (rng() % 30);
    const Conversation c = MakeConversation("x", Alternating(n));
    auto values = RandomVector(rng, n);
    for (double& v : values) v = 100 + 30 * v;
    const auto rows = testing::FeatureRows(values, Feature::kPitchMean);
    const auto once = NormalizeSpeaker(rows, c);
    const auto twice = NormalizeSpeaker(once, c);
    double sum_c = 0.0;
    double sum_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      (i % 2 == 0 ? sum_c : sum_t) += *once[i][Feature::kPitchMean];
      EXPECT_NEAR(*twice[i][Feature::kPitchMean], *once[i][Feature::kPitchMean], 1e-12);
    }
    EXPECT_NEAR(sum_c, 0.0, 1e-9 * n);
    EXPECT_NEAR(sum_t, 0.0, 1e-9 * n);

    // Shifting every therapist value leaves client values unchanged.
    auto shifted = rows;
    for (std::size_t i = 1; i < n; i += 2) *shifted[i][Feature::kPitchMean] += 1000.0;
    const auto other = NormalizeSpeaker(shifted, c);
    for (std::size_t i = 0; i < n; i += 2) {
      EXPECT_EQ(*other[i][Feature::kPitchMean], *once[i][Feature::kPitchMean]);
    }
  }
}

TEST(SectioningProperties, CoverageParityAndMidpoints) {
  for (int n : {4, 20, 40}) {
    for (int m = 2; m <= n; m += 2) {
      for (std::size_t l : {static_cast<std::size_t>(n), std::size_t{100}, std::size_t{316}}) {
        const auto turns = Alternating(l);
        const SectionLayout layout = BuildSections(turns, {n, m});
        std::vector<bool> covered(l, false);
        double last_mid = -1.0;
        for (const Section& s : layout.sections) {
          EXPECT_GT(s.midpoint_s, last_mid);
          last_mid = s.midpoint_s;
          for (std::size_t k = 0; k < s.length; ++k) {
            covered[s.offset + k] = true;
            EXPECT_EQ(turns[s.offset + k].speaker,
                      k % 2 == 0 ? Speaker::kClient : Speaker::kTherapist);
          }
        }
        const std::size_t last_start = l - static_cast<std::size_t>(n);
        for (std::size_t i = 0; i <= last_start; ++i) {
          EXPECT_TRUE(covered[i]) << "turn " << i << " N=" << n << " M=" << m;
        }
      }
    }
  }
}

TEST(SynchronyProperties, RatiosBoundedAndMonotone) {
  std::mt19937_64 rng(5);
  const auto turns = Alternating(200);
  const SectionLayout layout = BuildSections(turns, {20, 10});
  const std::size_t k = layout.sections.size();
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<SyncState> states(k);
    for (auto& s : states) s = static_cast<SyncState>(rng() % 3);
    const StateRatios r = ComputeStateRatios(layout.sections, states, 200);
    EXPECT_GE(r.sync_ratio, 0.0);
    EXPECT_LE(r.sync_ratio, 1.0);
    EXPECT_GE(r.anti_ratio, 0.0);
    EXPECT_LE(r.anti_ratio, 1.0);
    EXPECT_LE(r.sync_pairs + r.anti_pairs - r.conflicting_pairs, r.total_pairs);

    const std::size_t j = rng() % k;
    auto more = states;
    more[j] = SyncState::kSynchronous;
    EXPECT_GE(ComputeStateRatios(layout.sections, more, 200).sync_ratio, r.sync_ratio);
  }
}

TEST(SynchronyProperties, DirectionSwapOnSymmetricFeatures) {
  // The mirror conversation swaps speaker roles and keeps every value, so
  // T-first pairs of the mirror are the C-first pairs of the original.
  std::mt19937_64 rng(31);
  AnalysisConfig c_first;
  c_first.grid = {20};
  AnalysisConfig t_first = c_first;
  t_first.directions = {Direction::kTherapistFirst};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t l = 120;
    auto values = RandomVector(rng, l);
    for (std::size_t i = 1; i < l; i += 2) values[i] += 0.8 * values[i - 1];
    const auto rows = testing::FeatureRows(values, Feature::kPitchMedian);
    const Conversation conv = MakeConversation("x", Alternating(l, 'C'));
    const Conversation mirror = MakeConversation("x", Alternating(l, 'T'));
    const ConversationMetrics a = ComputeConversationMetrics(conv, rows, c_first);
    const ConversationMetrics b = ComputeConversationMetrics(mirror, rows, t_first);
    for (Metric metric : kAllMetrics) {
      const auto va = a.Value({Feature::kPitchMedian, metric, 20, Direction::kClientFirst});
      const auto vb = b.Value({Feature::kPitchMedian, metric, 20, Direction::kTherapistFirst});
      ASSERT_TRUE(va && vb);
      EXPECT_EQ(*va, *vb);
    }
  }
}

TEST(EntrainmentProperties, DifferenceInvariances) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  const auto turns = Alternating(40);
  Section s;
  s.length = 40;
  const Feature f = Feature::kSpeechRate;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto v = RandomVector(rng, 40);
    const auto rows = testing::FeatureRows(v, f);
    const double d = *SectionDifference(s, turns, rows, f);
    // Hand loop straight from the definition.
    double hand = 0.0;
    for (std::size_t i = 0; i < 40; i += 2) hand += std::fabs(v[i + 1] - v[i]);
    hand /= 20.0;
    EXPECT_NEAR(d, hand, 1e-12);

    std::vector<double> swapped(v);
    for (std::size_t i = 0; i < 40; i += 2) std::swap(swapped[i], swapped[i + 1]);
    EXPECT_NEAR(*SectionDifference(s, turns, testing::FeatureRows(swapped, f), f), d, 1e-12);

    const double c = u(rng) * 10;
    std::vector<double> common(v);
    for (double& x : common) x += c;
    EXPECT_NEAR(*SectionDifference(s, turns, testing::FeatureRows(common, f), f), d, 1e-12);
    std::vector<double> one_side(v);
    for (std::size_t i = 1; i < 40; i += 2) one_side[i] += c;
    EXPECT_LE(std::fabs(*SectionDifference(s, turns, testing::FeatureRows(one_side, f), f) - d),
              c + 1e-12);

    const double a = u(rng);
    std::vector<double> scaled(v);
    for (double& x : scaled) x *= a;
    EXPECT_NEAR(*SectionDifference(s, turns, testing::FeatureRows(scaled, f), f), a * d, 1e-12);
  }
}

TEST(EntrainmentProperties, ConcatenatedMeanIsWeighted) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = RandomVector(rng, 1 + rng() % 20);
    const auto b = RandomVector(rng, 1 + rng() % 20);
    DifferenceSeries sa;
    DifferenceSeries sb;
    DifferenceSeries all;
    for (double v : a) {
      sa.points.push_back({0, v, 0});
      all.points.push_back({0, v, 0});
    }
    for (double v : b) {
      sb.points.push_back({0, v, 0});
      all.points.push_back({0, v, 0});
    }
    const double weighted =
        (ComputeEntrainmentStats(sa)->mean * a.size() + ComputeEntrainmentStats(sb)->mean * b.size()) /
        (a.size() + b.size());
    EXPECT_NEAR(ComputeEntrainmentStats(all)->mean, weighted, 1e-12);
  }
}

TEST(AnalysisProperties, GridSelectNeverWorseThanMembers) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<CorrelationCell> cells;
    for (int n : {20, 30, 40, 50}) {
      CorrelationCell c;
      c.key.n_turns = n;
      if (rng() % 5 != 0) c.result = stats::CorrResult{0.1, p(rng), 30};
      cells.push_back(c);
    }
    const GridSelection sel = GridSelect(cells);
    for (const auto& c : sel.members) {
      if (c.ok()) {
        ASSERT_TRUE(sel.best().ok());
        EXPECT_LE(sel.best().result->p, c.result->p);
      }
    }
  }
}

TEST(AnalysisProperties, NegatedRatingFlipsR) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> blri(-48, 48);
  std::vector<ConversationMetrics> corpus;
  RatingsTable ratings;
  RatingsTable negated;
  const auto turns = Alternating(60);
  const Conversation conv = MakeConversation("x", turns);
  AnalysisConfig config;
  config.grid = {20};
  for (int i = 0; i < 25; ++i) {
    const auto rows = testing::FeatureRows(RandomVector(rng, 60), Feature::kPitchStd);
    ConversationMetrics m = ComputeConversationMetrics(conv, rows, config);
    m.id = "c" + std::to_string(i);
    corpus.push_back(std::move(m));
    Ratings r;
    r.tes = 30;
    r.ses = 10;
    r.blri = blri(rng);
    ratings.Insert(corpus.back().id, r);
    r.blri = -*r.blri;
    negated.Insert(corpus.back().id, r);
  }
  for (Metric metric : kAllMetrics) {
    const MetricKey key{Feature::kPitchStd, metric, 20, Direction::kClientFirst};
    const auto a = CorrelateMetric(corpus, ratings, key, RatingScale::kBlri);
    const auto b = CorrelateMetric(corpus, negated, key, RatingScale::kBlri);
    ASSERT_EQ(a.ok(), b.ok());
    if (!a.ok()) continue;
    EXPECT_EQ(a.result->r, -b.result->r);
    EXPECT_EQ(a.result->p, b.result->p);
  }
}

}  // namespace
}  // namespace entrain
