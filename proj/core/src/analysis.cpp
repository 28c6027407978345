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

#include "entrain/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entrain/error.hpp"

namespace entrain {
namespace {

const DirectionRun* FindRun(const ConversationMetrics& m, Direction d) {
  for (const auto& run : m.runs) {
    if (run.direction == d) return &run;
  }
  return nullptr;
}

const SectionRun* FindSectionRun(const DirectionRun& run, int n_turns) {
  for (const auto& s : run.by_n) {
    if (s.n_turns == n_turns) return &s;
  }
  return nullptr;
}

FeatureMetrics ComputeFeature(const SectionLayout& layout,
                              std::span<const Turn> chopped,
                              std::span<const TurnProsody> normalized,
                              Feature feature, const AnalysisConfig& config) {
  FeatureMetrics fm;
  fm.section_corr.reserve(layout.sections.size());
  fm.states.reserve(layout.sections.size());
  for (const Section& s : layout.sections) {
    auto corr = SectionCorrelation(s, chopped, normalized, feature);
    fm.states.push_back(corr ? Classify(*corr, config.thresholds)
                             : SyncState::kNeutral);
    fm.section_corr.push_back(corr);
  }
  fm.ratios = ComputeStateRatios(layout.sections, fm.states, chopped.size());
  fm.differences =
      BuildDifferenceSeries(layout.sections, chopped, normalized, feature);
  fm.difference_stats = ComputeEntrainmentStats(fm.differences);
  fm.trend = Trend(fm.differences, config.trend_alpha, config.time_axis);
  return fm;
}

bool AnyAnalyzable(const FeatureMetrics& fm) {
  return std::any_of(fm.section_corr.begin(), fm.section_corr.end(),
                     [](const auto& c) { return c.has_value(); });
}

}  // namespace

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kSyncRatio:
      return "sync_ratio";
    case Metric::kAntiRatio:
      return "anti_ratio";
    case Metric::kDiffMean:
      return "diff_mean";
    case Metric::kDiffStd:
      return "diff_std";
  }
  return "?";
}

void AnalysisConfig::Validate() const {
  if (grid.empty()) throw std::invalid_argument("section grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SectionSpec{grid[i], step, Direction::kClientFirst}.Validate();
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("section grid must be strictly ascending");
    }
  }
  if (directions.empty()) throw std::invalid_argument("no direction selected");
  if (directions.size() == 2 && directions[0] == directions[1]) {
    throw std::invalid_argument("duplicate direction");
  }
  if (directions.size() > 2) throw std::invalid_argument("too many directions");
  thresholds.Validate();
  if (!(trend_alpha > 0.0 && trend_alpha < 1.0)) {
    throw std::invalid_argument("trend alpha must lie in (0, 1)");
  }
}

std::optional<double> ConversationMetrics::Value(const MetricKey& key) const {
  const DirectionRun* run = FindRun(*this, key.direction);
  if (!run) return std::nullopt;
  const SectionRun* sr = FindSectionRun(*run, key.n_turns);
  if (!sr || sr->layout.sections.empty()) return std::nullopt;
  const FeatureMetrics& fm = sr->at(key.feature);
  switch (key.metric) {
    case Metric::kSyncRatio:
      if (!AnyAnalyzable(fm)) return std::nullopt;
      return fm.ratios.sync_ratio;
    case Metric::kAntiRatio:
      if (!AnyAnalyzable(fm)) return std::nullopt;
      return fm.ratios.anti_ratio;
    case Metric::kDiffMean:
      if (!fm.difference_stats) return std::nullopt;
      return fm.difference_stats->mean;
    case Metric::kDiffStd:
      if (!fm.difference_stats) return std::nullopt;
      return fm.difference_stats->std;
  }
  return std::nullopt;
}

ConversationMetrics ComputeConversationMetrics(
    const Conversation& conversation, std::span<const TurnProsody> normalized,
    const AnalysisConfig& config) {
  if (normalized.size() != conversation.turns.size()) {
    throw std::invalid_argument("features and turns differ in length");
  }
  ConversationMetrics out;
  out.id = conversation.id;
  out.turn_count = conversation.turns.size();
  for (Direction d : config.directions) {
    DirectionRun run;
    run.direction = d;
    run.chopped = Chop(conversation.turns, d);
    for (int n : config.grid) {
      SectionRun sr;
      sr.n_turns = n;
      sr.layout = BuildSections(run.chopped, SectionSpec{n, config.step, d});
      for (Feature f : kAllFeatures) {
        sr.features[static_cast<std::size_t>(f)] =
            ComputeFeature(sr.layout, run.chopped, normalized, f, config);
      }
      run.by_n.push_back(std::move(sr));
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

CorrelationCell CorrelateMetric(std::span<const ConversationMetrics> corpus,
                                const RatingsTable& ratings,
                                const MetricKey& key, RatingScale rating) {
  CorrelationCell cell;
  cell.key = key;
  cell.rating = rating;
  std::vector<double> metric_values, rating_values;
  for (const auto& m : corpus) {
    const Ratings* r = ratings.Find(m.id);
    if (!r || !r->complete()) continue;
    const auto v = m.Value(key);
    if (!v) continue;
    metric_values.push_back(*v);
    rating_values.push_back(static_cast<double>(*r->get(rating)));
  }
  cell.n = metric_values.size();
  if (cell.n < 3) {
    cell.note = fmt::format("insufficient data: {} conversation(s)", cell.n);
    return cell;
  }
  try {
    cell.result = stats::Pearson(metric_values, rating_values);
    cell.star = stats::StarsFor(cell.result->p);
  } catch (const UndefinedCorrelationError&) {
    cell.note = "insufficient data: constant metric or rating";
  }
  return cell;
}

GridSelection GridSelect(std::vector<CorrelationCell> members) {
  if (members.empty()) throw std::invalid_argument("empty grid selection");
  std::stable_sort(members.begin(), members.end(),
                   [](const CorrelationCell& a, const CorrelationCell& b) {
                     return a.key.n_turns < b.key.n_turns;
                   });
  GridSelection sel;
  sel.members = std::move(members);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < sel.members.size(); ++i) {
    if (!sel.members[i].ok()) continue;
    if (!best || sel.members[i].result->p < sel.members[*best].result->p) best = i;
  }
  sel.winner = best.value_or(0);
  return sel;
}

RatingCorrelations RatingInterCorrelations(const RatingsTable& ratings) {
  RatingCorrelations out;
  std::array<std::vector<double>, 3> columns;
  for (const auto& [id, r] : ratings.rows()) {
    if (!r.complete()) continue;
    for (std::size_t s = 0; s < 3; ++s) {
      columns[s].push_back(static_cast<double>(*r.get(kAllRatingScales[s])));
    }
  }
  out.n = columns[0].size();
  if (out.n < 3) {
    out.note = fmt::format("insufficient data: {} complete row(s)", out.n);
    return out;
  }
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (a == b) {
        out.table[a][b] = stats::CorrResult{1.0, 0.0, out.n};
        continue;
      }
      try {
        out.table[a][b] = stats::Pearson(columns[a], columns[b]);
      } catch (const UndefinedCorrelationError&) {
        out.note = "constant rating column";
      }
    }
  }
  return out;
}

int HistogramBin(double ratio) {
  const int bin = static_cast<int>(std::floor(ratio / kHistogramBinWidth + 1e-9));
  return std::clamp(bin, 0, kHistogramBins - 1);
}

AnalysisReport RunFullAnalysis(std::span<const PreparedConversation> corpus,
                               const RatingsTable& ratings,
                               const AnalysisConfig& config,
                               std::vector<Failure> upstream_failures) {
  config.Validate();
  if (corpus.empty()) throw InsufficientDataError("empty corpus");

  AnalysisReport report;
  report.config = config;
  report.failures = std::move(upstream_failures);

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].conversation.id < corpus[b].conversation.id;
  });
  for (std::size_t i : order) {
    const auto& pc = corpus[i];
    try {
      report.conversations.push_back(ComputeConversationMetrics(
          pc.conversation, pc.prosody.normalized, config));
    } catch (const Error& e) {
      report.failures.push_back({pc.conversation.id, e.what()});
    }
  }
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const Failure& a, const Failure& b) { return a.id < b.id; });
  if (report.conversations.empty()) {
    throw InsufficientDataError("no conversation could be analyzed");
  }

  for (const auto& m : report.conversations) {
    const Ratings* r = ratings.Find(m.id);
    if (!r || !r->complete()) report.excluded_from_correlation.push_back(m.id);
  }

  for (Direction d : config.directions) {
    for (Feature f : kAllFeatures) {
      for (Metric metric : kAllMetrics) {
        for (RatingScale rating : kAllRatingScales) {
          std::vector<CorrelationCell> members;
          for (int n : config.grid) {
            members.push_back(CorrelateMetric(report.conversations, ratings,
                                              MetricKey{f, metric, n, d}, rating));
            report.cells.push_back(members.back());
          }
          report.selections.push_back(GridSelect(std::move(members)));
        }
      }
    }
  }

  for (Direction d : config.directions) {
    for (int n : config.grid) {
      for (Feature f : kAllFeatures) {
        for (Metric metric : {Metric::kSyncRatio, Metric::kAntiRatio}) {
          std::array<std::size_t, kHistogramBins> counts{};
          for (const auto& m : report.conversations) {
            if (const auto v = m.Value({f, metric, n, d})) ++counts[HistogramBin(*v)];
          }
          for (int b = 0; b < kHistogramBins; ++b) {
            report.histograms.push_back(
                {d, n, f, metric, b, b * kHistogramBinWidth,
                 (b + 1) * kHistogramBinWidth, counts[b]});
          }
        }
        TrendFraction tf{d, n, f, 0, 0, 0, 0};
        for (const auto& m : report.conversations) {
          const DirectionRun* run = FindRun(m, d);
          const SectionRun* sr = run ? FindSectionRun(*run, n) : nullptr;
          if (!sr || sr->layout.sections.empty()) continue;
          ++tf.conversations;
          switch (sr->at(f).trend.label) {
            case TrendLabel::kConvergent:
              ++tf.convergent;
              break;
            case TrendLabel::kDivergent:
              ++tf.divergent;
              break;
            case TrendLabel::kNeither:
              ++tf.neither;
              break;
          }
        }
        report.trend_fractions.push_back(tf);
      }
    }
  }

  report.rating_correlations = RatingInterCorrelations(ratings);
  return report;
}

}  // namespace entrain
