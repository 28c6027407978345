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

#include "entrain/entrainment.hpp"

#include <cmath>

#include "entrain/error.hpp"
#include "entrain/synchrony.hpp"

namespace entrain {

std::optional<double> SectionDifference(const Section& section,
                                        std::span<const Turn> chopped,
                                        std::span<const TurnProsody> features,
                                        Feature feature) {
  const PairedValues pairs = CollectPairs(section, chopped, features, feature);
  if (pairs.client.empty()) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < pairs.client.size(); ++i) {
    sum += std::fabs(pairs.therapist[i] - pairs.client[i]);
  }
  return sum / static_cast<double>(pairs.client.size());
}

std::vector<double> DifferenceSeries::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.d);
  return out;
}

DifferenceSeries BuildDifferenceSeries(std::span<const Section> sections,
                                       std::span<const Turn> chopped,
                                       std::span<const TurnProsody> features,
                                       Feature feature) {
  DifferenceSeries series;
  for (const Section& s : sections) {
    if (const auto d = SectionDifference(s, chopped, features, feature)) {
      series.points.push_back({s.index, *d, s.midpoint_s});
    }
  }
  return series;
}

std::optional<EntrainmentStats> ComputeEntrainmentStats(
    const DifferenceSeries& series) {
  if (series.points.empty()) return std::nullopt;
  const auto d = series.values();
  return EntrainmentStats{stats::Mean(d), stats::PopulationStd(d)};
}

std::string_view TrendLabelName(TrendLabel label) {
  switch (label) {
    case TrendLabel::kConvergent:
      return "convergent";
    case TrendLabel::kDivergent:
      return "divergent";
    case TrendLabel::kNeither:
      return "neither";
  }
  return "?";
}

std::string_view TimeAxisName(TimeAxis axis) {
  return axis == TimeAxis::kSectionMidpoint ? "midpoint" : "index";
}

std::optional<TimeAxis> ParseTimeAxisName(std::string_view name) {
  if (name == "midpoint") return TimeAxis::kSectionMidpoint;
  if (name == "index") return TimeAxis::kSectionIndex;
  return std::nullopt;
}

TrendResult Trend(const DifferenceSeries& series, double alpha, TimeAxis axis) {
  TrendResult out;
  if (series.points.size() < 3) {
    out.note = "fewer than 3 analyzable sections";
    return out;
  }
  const auto d = series.values();
  std::vector<double> t;
  t.reserve(series.points.size());
  for (const auto& p : series.points) {
    t.push_back(axis == TimeAxis::kSectionMidpoint
                    ? p.t
                    : static_cast<double>(p.section));
  }
  try {
    out.corr = stats::Pearson(d, t);
  } catch (const UndefinedCorrelationError&) {
    out.note = "constant difference series";
    return out;
  }
  if (out.corr->p < alpha) {
    if (out.corr->r < 0.0) out.label = TrendLabel::kConvergent;
    if (out.corr->r > 0.0) out.label = TrendLabel::kDivergent;
  }
  return out;
}

}  // namespace entrain
