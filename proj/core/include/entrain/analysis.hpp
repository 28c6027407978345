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

// Corpus-level analysis: per-conversation synchrony and entrainment metrics
// for every (direction, N, feature), their Pearson correlation with session
// ratings, most-significant selection over the N grid, and the aggregate
// histogram / trend tables.

#ifndef ENTRAIN_ANALYSIS_HPP_
#define ENTRAIN_ANALYSIS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/corpus.hpp"
#include "entrain/entrainment.hpp"
#include "entrain/prosody.hpp"
#include "entrain/sectioning.hpp"
#include "entrain/stats.hpp"
#include "entrain/synchrony.hpp"

namespace entrain {

enum class Metric { kSyncRatio, kAntiRatio, kDiffMean, kDiffStd };
inline constexpr std::array<Metric, 4> kAllMetrics = {
    Metric::kSyncRatio, Metric::kAntiRatio, Metric::kDiffMean,
    Metric::kDiffStd};

std::string_view MetricName(Metric metric);  // "sync_ratio", ...

struct MetricKey {
  Feature feature = Feature::kPitchMedian;
  Metric metric = Metric::kSyncRatio;
  int n_turns = 40;
  Direction direction = Direction::kClientFirst;

  friend bool operator==(const MetricKey&, const MetricKey&) = default;
};

struct AnalysisConfig {
  std::vector<int> grid = {20, 30, 40, 50};
  int step = 10;
  SyncThresholds thresholds;
  std::vector<Direction> directions = {Direction::kClientFirst};
  TimeAxis time_axis = TimeAxis::kSectionMidpoint;
  double trend_alpha = 0.05;

  // Throws std::invalid_argument for an empty grid, odd N/M, duplicate
  // directions or thresholds out of range.
  void Validate() const;
};

struct FeatureMetrics {
  std::vector<std::optional<stats::CorrResult>> section_corr;  // per section
  std::vector<SyncState> states;                               // per section
  StateRatios ratios;
  DifferenceSeries differences;
  std::optional<EntrainmentStats> difference_stats;
  TrendResult trend;
};

struct SectionRun {
  int n_turns = 0;
  SectionLayout layout;
  std::array<FeatureMetrics, kFeatureCount> features;

  const FeatureMetrics& at(Feature f) const {
    return features[static_cast<std::size_t>(f)];
  }
};

struct DirectionRun {
  Direction direction = Direction::kClientFirst;
  std::vector<Turn> chopped;
  std::vector<SectionRun> by_n;  // parallel to AnalysisConfig::grid
};

struct ConversationMetrics {
  std::string id;
  std::size_t turn_count = 0;
  std::vector<DirectionRun> runs;  // parallel to AnalysisConfig::directions

  // nullopt when the metric is undefined for this conversation, e.g. the
  // chopped conversation is shorter than N or no section is analyzable.
  std::optional<double> Value(const MetricKey& key) const;
};

// Runs sectioning, synchrony and entrainment for every direction and N.
// `normalized` is parallel to conversation.turns. Throws when the
// conversation cannot be chopped under some direction.
ConversationMetrics ComputeConversationMetrics(
    const Conversation& conversation, std::span<const TurnProsody> normalized,
    const AnalysisConfig& config);

struct CorrelationCell {
  MetricKey key;
  RatingScale rating = RatingScale::kTes;
  std::optional<stats::CorrResult> result;  // nullopt: insufficient data
  stats::Stars star = stats::Stars::kNone;
  std::size_t n = 0;  // conversations with both values
  std::string note;

  bool ok() const { return result.has_value(); }
};

// Pearson across conversations having both the metric and a complete
// ratings row. Fewer than 3 such conversations, or a constant column,
// yields an insufficient-data cell.
CorrelationCell CorrelateMetric(std::span<const ConversationMetrics> corpus,
                                const RatingsTable& ratings,
                                const MetricKey& key, RatingScale rating);

struct GridSelection {
  std::vector<CorrelationCell> members;  // ascending N
  std::size_t winner = 0;                // index into members

  const CorrelationCell& best() const { return members[winner]; }
};

// Picks the member with the smallest p; equal p resolves to the smaller N.
// Members without a result only win when no member has one.
GridSelection GridSelect(std::vector<CorrelationCell> members);

struct RatingCorrelations {
  std::size_t n = 0;  // complete rating rows used
  // [row][col] in kAllRatingScales order; diagonal is r = 1.
  std::array<std::array<std::optional<stats::CorrResult>, 3>, 3> table{};
  std::string note;
};

RatingCorrelations RatingInterCorrelations(const RatingsTable& ratings);

struct Failure {
  std::string id;
  std::string message;
};

struct HistogramRow {
  Direction direction = Direction::kClientFirst;
  int n_turns = 0;
  Feature feature = Feature::kPitchMedian;
  Metric metric = Metric::kSyncRatio;  // sync or anti ratio
  int bin = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

inline constexpr double kHistogramBinWidth = 0.05;
inline constexpr int kHistogramBins = 20;

// Bin of a ratio in [0, 1]; 1.0 falls in the last bin.
int HistogramBin(double ratio);

struct TrendFraction {
  Direction direction = Direction::kClientFirst;
  int n_turns = 0;
  Feature feature = Feature::kPitchMedian;
  std::size_t conversations = 0;
  std::size_t convergent = 0;
  std::size_t divergent = 0;
  std::size_t neither = 0;
};

struct PreparedConversation {
  Conversation conversation;
  ConversationProsody prosody;
};

struct AnalysisReport {
  static constexpr int kSchemaVersion = 1;

  AnalysisConfig config;
  std::vector<ConversationMetrics> conversations;  // ordered by id
  std::vector<Failure> failures;                   // ordered by id
  // Analyzed conversations left out of rating correlations.
  std::vector<std::string> excluded_from_correlation;
  std::vector<CorrelationCell> cells;
  std::vector<GridSelection> selections;
  std::vector<HistogramRow> histograms;
  std::vector<TrendFraction> trend_fractions;
  RatingCorrelations rating_correlations;
};

// Deterministic end-to-end run. A conversation whose metrics cannot be
// computed is listed under failures alongside `upstream_failures`; the run
// continues. Throws InsufficientDataError when nothing is left to analyze.
AnalysisReport RunFullAnalysis(std::span<const PreparedConversation> corpus,
                               const RatingsTable& ratings,
                               const AnalysisConfig& config,
                               std::vector<Failure> upstream_failures = {});

}  // namespace entrain

#endif  // ENTRAIN_ANALYSIS_HPP_
