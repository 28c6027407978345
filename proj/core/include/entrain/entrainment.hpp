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

// Degree of entrainment: the mean absolute client/therapist difference of a
// feature over a section's turn pairs,
//
//   D = (1 / P) * sum_i |x_T(i) - x_C(i)|,   P = usable pairs,
//
// its conversation-level mean and spread, and its trend over time.

#ifndef ENTRAIN_ENTRAINMENT_HPP_
#define ENTRAIN_ENTRAINMENT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/prosody.hpp"
#include "entrain/sectioning.hpp"
#include "entrain/stats.hpp"

namespace entrain {

// nullopt when the section has no usable pair.
std::optional<double> SectionDifference(const Section& section,
                                        std::span<const Turn> chopped,
                                        std::span<const TurnProsody> features,
                                        Feature feature);

struct DifferencePoint {
  std::size_t section = 0;  // Section::index
  double d = 0.0;
  double t = 0.0;  // section midpoint, seconds
};

// Analyzable sections only, in section order.
struct DifferenceSeries {
  std::vector<DifferencePoint> points;

  std::vector<double> values() const;
};

DifferenceSeries BuildDifferenceSeries(std::span<const Section> sections,
                                       std::span<const Turn> chopped,
                                       std::span<const TurnProsody> features,
                                       Feature feature);

struct EntrainmentStats {
  double mean = 0.0;
  double std = 0.0;  // population
};

// nullopt for an empty series.
std::optional<EntrainmentStats> ComputeEntrainmentStats(
    const DifferenceSeries& series);

enum class TrendLabel { kConvergent, kDivergent, kNeither };
std::string_view TrendLabelName(TrendLabel label);

enum class TimeAxis { kSectionMidpoint, kSectionIndex };
std::string_view TimeAxisName(TimeAxis axis);
std::optional<TimeAxis> ParseTimeAxisName(std::string_view name);

struct TrendResult {
  TrendLabel label = TrendLabel::kNeither;
  std::optional<stats::CorrResult> corr;
  std::string note;  // why no correlation was computed, if so
};

// Pearson correlation of D against time. A significant negative correlation
// (gap shrinking) is Convergent, a significant positive one Divergent.
TrendResult Trend(const DifferenceSeries& series, double alpha = 0.05,
                  TimeAxis axis = TimeAxis::kSectionMidpoint);

}  // namespace entrain

#endif  // ENTRAIN_ENTRAINMENT_HPP_
