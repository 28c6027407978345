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

// Serialization of analysis results. All writers are deterministic: the same
// report always produces the same bytes.

#ifndef ENTRAIN_REPORT_HPP_
#define ENTRAIN_REPORT_HPP_

#include <ostream>

#include <nlohmann/json.hpp>

#include "entrain/analysis.hpp"

namespace entrain {

using OrderedJson = nlohmann::ordered_json;

OrderedJson ToJson(const stats::CorrResult& corr);
OrderedJson ToJson(const AnalysisConfig& config);
OrderedJson ToJson(const CorrelationCell& cell);

// Schema-versioned corpus report.
OrderedJson ReportToJson(const AnalysisReport& report);

// Per-conversation synchrony and entrainment detail: for each direction, N
// and feature the section layout, section correlations and states, state
// ratios with their histogram bins, the difference series, its mean/std and
// the trend.
OrderedJson ConversationReportToJson(const ConversationMetrics& metrics,
                                     const AnalysisConfig& config);

// feature,metric,N,direction,rating,r,p,n,star  (every grid member)
void WriteCellsCsv(std::ostream& out, const AnalysisReport& report);
// direction,N,feature,metric,bin,lower,upper,count
void WriteHistogramsCsv(std::ostream& out, const AnalysisReport& report);
// direction,N,feature,conversations,convergent,divergent,neither,
// convergent_fraction,divergent_fraction
void WriteTrendsCsv(std::ostream& out, const AnalysisReport& report);

// Human-readable tables of the grid-selected cells: state ratios vs ratings
// and difference mean/std vs ratings, one pair of tables per direction.
void WriteSummary(std::ostream& out, const AnalysisReport& report);

}  // namespace entrain

#endif  // ENTRAIN_REPORT_HPP_
