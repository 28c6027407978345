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

#include "entrain/report.hpp"

#include <fmt/format.h>

#include <string>

#include "entrain/csv.hpp"

namespace entrain {
namespace {

OrderedJson OptionalNumber(const std::optional<double>& v) {
  return v ? OrderedJson(*v) : OrderedJson(nullptr);
}

OrderedJson CorrJson(const std::optional<stats::CorrResult>& corr) {
  return corr ? entrain::ToJson(*corr) : OrderedJson(nullptr);
}

OrderedJson TrendJson(const TrendResult& trend) {
  OrderedJson j;
  j["label"] = TrendLabelName(trend.label);
  j["corr"] = CorrJson(trend.corr);
  if (!trend.note.empty()) j["note"] = trend.note;
  return j;
}

OrderedJson LayoutJson(const SectionLayout& layout) {
  OrderedJson j;
  j["chopped_turns"] = layout.chopped_turns;
  j["unused_trailing_turns"] = layout.unused_trailing_turns;
  if (layout.warning) j["warning"] = *layout.warning;
  OrderedJson sections = OrderedJson::array();
  for (const Section& s : layout.sections) {
    sections.push_back({{"index", s.index},
                        {"offset", s.offset},
                        {"length", s.length},
                        {"midpoint_s", s.midpoint_s}});
  }
  j["sections"] = std::move(sections);
  return j;
}

std::string CellText(const CorrelationCell& cell) {
  if (!cell.ok()) return "n/a";
  if (cell.star == stats::Stars::kNone) return "N.S.";
  return fmt::format("{:+.2f}{} (N={})", cell.result->r,
                     stats::ToString(cell.star), cell.key.n_turns);
}

const GridSelection* FindSelection(const AnalysisReport& report, Direction d,
                                   Feature f, Metric m, RatingScale r) {
  for (const auto& sel : report.selections) {
    const auto& k = sel.best().key;
    if (k.direction == d && k.feature == f && k.metric == m &&
        sel.best().rating == r) {
      return &sel;
    }
  }
  return nullptr;
}

void WriteTable(std::ostream& out, const AnalysisReport& report, Direction d,
                Metric left, Metric right, std::string_view title) {
  constexpr int kFeatureWidth = 17;
  constexpr int kCellWidth = 18;
  out << fmt::format("{} [{}]\n", title, DirectionName(d));
  std::string header = fmt::format("{:<{}}", "feature", kFeatureWidth);
  for (Metric m : {left, right}) {
    for (RatingScale r : kAllRatingScales) {
      header += fmt::format("{:<{}}",
                            fmt::format("{}:{}", MetricName(m), RatingName(r)),
                            kCellWidth);
    }
  }
  out << header << '\n';
  out << std::string(header.size(), '-') << '\n';
  for (Feature f : kAllFeatures) {
    std::string row = fmt::format("{:<{}}", FeatureName(f), kFeatureWidth);
    for (Metric m : {left, right}) {
      for (RatingScale r : kAllRatingScales) {
        const GridSelection* sel = FindSelection(report, d, f, m, r);
        row += fmt::format("{:<{}}", sel ? CellText(sel->best()) : "n/a",
                           kCellWidth);
      }
    }
    out << row << '\n';
  }
  out << '\n';
}

}  // namespace

OrderedJson ToJson(const stats::CorrResult& corr) {
  return {{"r", corr.r}, {"p", corr.p}, {"n", corr.n}};
}

OrderedJson ToJson(const AnalysisConfig& config) {
  OrderedJson j;
  j["grid"] = config.grid;
  j["step"] = config.step;
  j["rho_threshold"] = config.thresholds.rho_threshold;
  j["alpha"] = config.thresholds.alpha;
  OrderedJson dirs = OrderedJson::array();
  for (Direction d : config.directions) dirs.push_back(DirectionName(d));
  j["directions"] = std::move(dirs);
  j["time_axis"] = TimeAxisName(config.time_axis);
  j["trend_alpha"] = config.trend_alpha;
  return j;
}

OrderedJson ToJson(const CorrelationCell& cell) {
  OrderedJson j;
  j["feature"] = FeatureName(cell.key.feature);
  j["metric"] = MetricName(cell.key.metric);
  j["N"] = cell.key.n_turns;
  j["direction"] = DirectionName(cell.key.direction);
  j["rating"] = RatingName(cell.rating);
  j["n"] = cell.n;
  if (cell.result) {
    j["r"] = cell.result->r;
    j["p"] = cell.result->p;
  } else {
    j["r"] = nullptr;
    j["p"] = nullptr;
  }
  j["star"] = stats::ToString(cell.star);
  if (!cell.note.empty()) j["note"] = cell.note;
  return j;
}

OrderedJson ReportToJson(const AnalysisReport& report) {
  OrderedJson j;
  j["schema_version"] = AnalysisReport::kSchemaVersion;
  j["kind"] = "entrain.analysis_report";
  j["config"] = ToJson(report.config);

  OrderedJson conversations = OrderedJson::array();
  for (const auto& m : report.conversations) {
    OrderedJson c;
    c["id"] = m.id;
    c["turns"] = m.turn_count;
    OrderedJson runs = OrderedJson::array();
    for (const auto& run : m.runs) {
      OrderedJson r;
      r["direction"] = DirectionName(run.direction);
      r["chopped_turns"] = run.chopped.size();
      OrderedJson by_n = OrderedJson::array();
      for (const auto& sr : run.by_n) {
        OrderedJson s;
        s["N"] = sr.n_turns;
        s["sections"] = sr.layout.sections.size();
        s["unused_trailing_turns"] = sr.layout.unused_trailing_turns;
        if (sr.layout.warning) s["warning"] = *sr.layout.warning;
        OrderedJson feats;
        for (Feature f : kAllFeatures) {
          OrderedJson fj;
          for (Metric metric : kAllMetrics) {
            fj[std::string(MetricName(metric))] =
                OptionalNumber(m.Value({f, metric, sr.n_turns, run.direction}));
          }
          fj["conflicting_pairs"] = sr.at(f).ratios.conflicting_pairs;
          fj["trend"] = TrendLabelName(sr.at(f).trend.label);
          feats[std::string(FeatureName(f))] = std::move(fj);
        }
        s["features"] = std::move(feats);
        by_n.push_back(std::move(s));
      }
      r["by_n"] = std::move(by_n);
      runs.push_back(std::move(r));
    }
    c["runs"] = std::move(runs);
    conversations.push_back(std::move(c));
  }
  j["conversations"] = std::move(conversations);

  OrderedJson failures = OrderedJson::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"id", f.id}, {"message", f.message}});
  }
  j["failures"] = std::move(failures);
  j["excluded_from_correlation"] = report.excluded_from_correlation;

  OrderedJson selections = OrderedJson::array();
  for (const auto& sel : report.selections) {
    OrderedJson s = ToJson(sel.best());
    s["selected_N"] = sel.best().key.n_turns;
    OrderedJson members = OrderedJson::array();
    for (const auto& m : sel.members) {
      OrderedJson mj;
      mj["N"] = m.key.n_turns;
      mj["n"] = m.n;
      mj["r"] = m.result ? OrderedJson(m.result->r) : OrderedJson(nullptr);
      mj["p"] = m.result ? OrderedJson(m.result->p) : OrderedJson(nullptr);
      mj["star"] = stats::ToString(m.star);
      members.push_back(std::move(mj));
    }
    s["members"] = std::move(members);
    selections.push_back(std::move(s));
  }
  j["cell_count"] = report.cells.size();
  j["selections"] = std::move(selections);

  OrderedJson trends = OrderedJson::array();
  for (const auto& t : report.trend_fractions) {
    trends.push_back({{"direction", DirectionName(t.direction)},
                      {"N", t.n_turns},
                      {"feature", FeatureName(t.feature)},
                      {"conversations", t.conversations},
                      {"convergent", t.convergent},
                      {"divergent", t.divergent},
                      {"neither", t.neither}});
  }
  j["trend_fractions"] = std::move(trends);

  const auto& rc = report.rating_correlations;
  OrderedJson ratings;
  ratings["n"] = rc.n;
  OrderedJson pairs = OrderedJson::array();
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      OrderedJson pj;
      pj["a"] = RatingName(kAllRatingScales[a]);
      pj["b"] = RatingName(kAllRatingScales[b]);
      pj["corr"] = CorrJson(rc.table[a][b]);
      pairs.push_back(std::move(pj));
    }
  }
  ratings["pairs"] = std::move(pairs);
  if (!rc.note.empty()) ratings["note"] = rc.note;
  j["rating_correlations"] = std::move(ratings);
  return j;
}

OrderedJson ConversationReportToJson(const ConversationMetrics& metrics,
                                     const AnalysisConfig& config) {
  OrderedJson j;
  j["schema_version"] = AnalysisReport::kSchemaVersion;
  j["kind"] = "entrain.conversation_report";
  j["id"] = metrics.id;
  j["config"] = ToJson(config);
  OrderedJson runs = OrderedJson::array();
  for (const auto& run : metrics.runs) {
    OrderedJson r;
    r["direction"] = DirectionName(run.direction);
    OrderedJson chopped = OrderedJson::array();
    for (const Turn& t : run.chopped) chopped.push_back(t.index);
    r["chopped_turn_indices"] = std::move(chopped);
    OrderedJson by_n = OrderedJson::array();
    for (const auto& sr : run.by_n) {
      OrderedJson s;
      s["N"] = sr.n_turns;
      s["M"] = config.step;
      s["layout"] = LayoutJson(sr.layout);
      OrderedJson feats;
      for (Feature f : kAllFeatures) {
        const FeatureMetrics& fm = sr.at(f);
        OrderedJson sync;
        OrderedJson states = OrderedJson::array();
        for (std::size_t i = 0; i < fm.states.size(); ++i) {
          states.push_back({{"section", i},
                            {"state", SyncStateName(fm.states[i])},
                            {"corr", CorrJson(fm.section_corr[i])}});
        }
        sync["sections"] = std::move(states);
        sync["sync_ratio"] = fm.ratios.sync_ratio;
        sync["anti_ratio"] = fm.ratios.anti_ratio;
        sync["sync_pairs"] = fm.ratios.sync_pairs;
        sync["anti_pairs"] = fm.ratios.anti_pairs;
        sync["total_pairs"] = fm.ratios.total_pairs;
        sync["conflicting_pairs"] = fm.ratios.conflicting_pairs;
        sync["sync_histogram_bin"] = HistogramBin(fm.ratios.sync_ratio);
        sync["anti_histogram_bin"] = HistogramBin(fm.ratios.anti_ratio);

        OrderedJson ent;
        OrderedJson series = OrderedJson::array();
        for (const auto& p : fm.differences.points) {
          series.push_back({{"section", p.section}, {"d", p.d}, {"t", p.t}});
        }
        ent["series"] = std::move(series);
        if (fm.difference_stats) {
          ent["mean"] = fm.difference_stats->mean;
          ent["std"] = fm.difference_stats->std;
        } else {
          ent["mean"] = nullptr;
          ent["std"] = nullptr;
        }
        ent["trend"] = TrendJson(fm.trend);

        feats[std::string(FeatureName(f))] = {{"synchrony", std::move(sync)},
                                              {"entrainment", std::move(ent)}};
      }
      s["features"] = std::move(feats);
      by_n.push_back(std::move(s));
    }
    r["by_n"] = std::move(by_n);
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  return j;
}

void WriteCellsCsv(std::ostream& out, const AnalysisReport& report) {
  out << "feature,metric,N,direction,rating,r,p,n,star\n";
  for (const auto& c : report.cells) {
    out << FeatureName(c.key.feature) << ',' << MetricName(c.key.metric) << ','
        << c.key.n_turns << ',' << DirectionName(c.key.direction) << ','
        << RatingName(c.rating) << ','
        << (c.result ? csv::FormatDouble(c.result->r) : "") << ','
        << (c.result ? csv::FormatDouble(c.result->p) : "") << ',' << c.n << ','
        << stats::ToString(c.star) << '\n';
  }
}

void WriteHistogramsCsv(std::ostream& out, const AnalysisReport& report) {
  out << "direction,N,feature,metric,bin,lower,upper,count\n";
  for (const auto& h : report.histograms) {
    out << DirectionName(h.direction) << ',' << h.n_turns << ','
        << FeatureName(h.feature) << ',' << MetricName(h.metric) << ',' << h.bin
        << ',' << fmt::format("{:.2f}", h.lower) << ','
        << fmt::format("{:.2f}", h.upper) << ',' << h.count << '\n';
  }
}

void WriteTrendsCsv(std::ostream& out, const AnalysisReport& report) {
  out << "direction,N,feature,conversations,convergent,divergent,neither,"
         "convergent_fraction,divergent_fraction\n";
  for (const auto& t : report.trend_fractions) {
    const double total = static_cast<double>(t.conversations);
    const auto frac = [&](std::size_t k) {
      return t.conversations ? csv::FormatDouble(static_cast<double>(k) / total)
                             : std::string();
    };
    out << DirectionName(t.direction) << ',' << t.n_turns << ','
        << FeatureName(t.feature) << ',' << t.conversations << ','
        << t.convergent << ',' << t.divergent << ',' << t.neither << ','
        << frac(t.convergent) << ',' << frac(t.divergent) << '\n';
  }
}

void WriteSummary(std::ostream& out, const AnalysisReport& report) {
  out << fmt::format("{} conversation(s) analyzed, {} failed, {} excluded from "
                     "rating correlations\n",
                     report.conversations.size(), report.failures.size(),
                     report.excluded_from_correlation.size());
  out << "stars: * p<.1  ** p<.05  *** p<.01; N.S. not significant; "
         "(N=..) section size with the most significant result\n\n";
  for (Direction d : report.config.directions) {
    WriteTable(out, report, d, Metric::kSyncRatio, Metric::kAntiRatio,
               "Synchrony / anti-synchrony ratios vs ratings");
    WriteTable(out, report, d, Metric::kDiffMean, Metric::kDiffStd,
               "Section difference mean / std vs ratings");
  }
  const auto& rc = report.rating_correlations;
  out << fmt::format("Rating inter-correlations (n={})\n", rc.n);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      const auto& c = rc.table[a][b];
      out << fmt::format("  {}-{}: {}\n", RatingName(kAllRatingScales[a]),
                         RatingName(kAllRatingScales[b]),
                         c ? fmt::format("r={:+.2f}{} (p={:.3g})", c->r,
                                         stats::ToString(stats::StarsFor(c->p)),
                                         c->p)
                           : std::string("n/a"));
    }
  }
  for (const auto& f : report.failures) {
    out << fmt::format("failed: {}: {}\n", f.id, f.message);
  }
}

}  // namespace entrain
