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

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "entrain/analysis.hpp"
#include "entrain/entrainment.hpp"
#include "entrain/prosody.hpp"
#include "entrain/sectioning.hpp"
#include "entrain/stats.hpp"
#include "entrain/synchrony.hpp"
#include "entrain/synth.hpp"
#include "entrain_cli/commands.hpp"
#include "test_util.hpp"

namespace entrain::acceptance {
namespace {

namespace fs = std::filesystem;
using testing::DirectPearson;
using testing::DirectSpearman;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure reasons; the first one wins the detail slot.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && outcome_.pass) {
      outcome_.pass = false;
      outcome_.detail = what;
    }
  }
  void Note(const std::string& what) {
    if (outcome_.pass) outcome_.detail = what;
  }
  Outcome Done() const { return outcome_; }

 private:
  Outcome outcome_;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

ConversationMetrics Measure(const synth::SyntheticDyad& dyad,
                            const AnalysisConfig& config = {}) {
  const auto normalized = NormalizeSpeaker(dyad.features, dyad.conversation);
  return ComputeConversationMetrics(dyad.conversation, normalized, config);
}

double SyncValue(const ConversationMetrics& m, Feature f, Metric metric, int n) {
  const auto v = m.Value({f, metric, n, Direction::kClientFirst});
  return v ? *v : std::nan("");
}

Outcome StatisticsKernels() {
  Check check;
  std::mt19937_64 rng(20260417);
  std::uniform_int_distribution<std::size_t> size(5, 200);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = size(rng);
    std::vector<double> x = testing::RandomVector(rng, n);
    std::vector<double> y = testing::RandomVector(rng, n);
    // Every fourth trial gets heavy ties.
    if (trial % 4 == 0) {
      for (double& v : x) v = std::round(v * 2.0);
      for (double& v : y) v = std::round(v);
    }
    const double rp = stats::Pearson(x, y).r;
    const double rs = stats::Spearman(x, y).r;
    worst = std::max({worst, std::fabs(rp - DirectPearson(x, y)),
                      std::fabs(rs - DirectSpearman(x, y))});
  }
  check.Expect(worst <= 1e-10, fmt::format("max deviation {:.3g}", worst));
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{1, 3, 2, 4};
  const double r = stats::Spearman(a, b).r;
  check.Expect(r == 0.8, fmt::format("spearman example {:.17g}", r));
  check.Note(fmt::format("max deviation {:.2g}, example r={}", worst, r));
  return check.Done();
}

// Independent mean |T - C| straight from turn speakers.
double HandDifference(const Section& s, std::span<const Turn> chopped,
                      std::span<const TurnProsody> rows, Feature f) {
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t k = s.offset; k < s.offset + s.length; k += 2) {
    double client = 0.0;
    double therapist = 0.0;
    for (std::size_t j = k; j < k + 2; ++j) {
      const double v = *rows[chopped[j].index][f];
      (chopped[j].speaker == Speaker::kClient ? client : therapist) = v;
    }
    sum += std::fabs(therapist - client);
    ++pairs;
  }
  return sum / pairs;
}

Outcome DifferenceOracle() {
  Check check;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(0.0, 3.0);
  double worst = 0.0;
  double worst_scale = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto turns = testing::Alternating(316, trial % 2 == 0 ? 'C' : 'T');
    std::vector<TurnProsody> rows(turns.size());
    std::vector<TurnProsody> same(turns.size());
    std::vector<TurnProsody> scaled(turns.size());
    const double a = 0.25 + trial;
    for (std::size_t i = 0; i < turns.size(); ++i) {
      const double v = dist(rng);
      rows[i][Feature::kPitchMean] = v;
      scaled[i][Feature::kPitchMean] = a * v;
      same[i][Feature::kPitchMean] = static_cast<double>(i / 2);
    }
    const auto chopped = Chop(turns, Direction::kClientFirst);
    // Identical values within each pair, since pairs are (2k, 2k+1) after chop.
    for (std::size_t k = 0; k + 1 < chopped.size(); k += 2) {
      same[chopped[k + 1].index][Feature::kPitchMean] =
          *same[chopped[k].index][Feature::kPitchMean];
    }
    for (int n : {20, 30, 40, 50}) {
      const auto layout = BuildSections(chopped, {n, 10, Direction::kClientFirst});
      for (const Section& s : layout.sections) {
        const double d = *SectionDifference(s, chopped, rows, Feature::kPitchMean);
        worst = std::max(worst, std::fabs(d - HandDifference(s, chopped, rows,
                                                             Feature::kPitchMean)));
        const double z = *SectionDifference(s, chopped, same, Feature::kPitchMean);
        check.Expect(z == 0.0, fmt::format("identical pairs gave {}", z));
        const double ds = *SectionDifference(s, chopped, scaled, Feature::kPitchMean);
        worst_scale = std::max(worst_scale, std::fabs(ds - a * d));
      }
    }
  }
  check.Expect(worst <= 1e-12, fmt::format("hand-loop deviation {:.3g}", worst));
  check.Expect(worst_scale <= 1e-12, fmt::format("scaling deviation {:.3g}", worst_scale));
  check.Note(fmt::format("hand-loop {:.2g}, scaling {:.2g}", worst, worst_scale));
  return check.Done();
}

Outcome PlantedSynchrony() {
  Check check;
  for (double kappa : {1.0, -1.0}) {
    synth::CorpusSpec spec;
    spec.conversations = 5;
    spec.seed = 11;
    spec.coupling.turns = 320;
    spec.coupling.kappa.fill(kappa);
    const auto corpus = synth::GenerateCorpus(spec);
    for (const auto& dyad : corpus.dyads) {
      const auto m = Measure(dyad);
      for (int n : {20, 30, 40, 50}) {
        for (Feature f : kAllFeatures) {
          const double sync = SyncValue(m, f, Metric::kSyncRatio, n);
          const double anti = SyncValue(m, f, Metric::kAntiRatio, n);
          const double want_sync = kappa > 0 ? 1.0 : 0.0;
          check.Expect(sync == want_sync && anti == 1.0 - want_sync,
                       fmt::format("kappa={} {} {} N={}: sync={} anti={}", kappa,
                                   dyad.conversation.id, FeatureName(f), n, sync,
                                   anti));
        }
      }
    }
  }
  // Noise at five times the signal scale.  A conversation's sync_ratio is
  // the mean over every feature and N of the default grid.
  int low = 0;
  int strict = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    synth::CouplingSpec spec;
    spec.turns = 320;
    spec.seed = seed;
    for (Feature f : kAllFeatures) {
      spec.noise_sd[static_cast<std::size_t>(f)] = 5.0 * synth::DefaultProfile(f).signal_sd;
    }
    const auto m = Measure(synth::GenerateDyad(spec));
    double sum = 0.0;
    double peak = 0.0;
    int count = 0;
    for (int n : {20, 30, 40, 50}) {
      for (Feature f : kAllFeatures) {
        const double v = SyncValue(m, f, Metric::kSyncRatio, n);
        sum += v;
        peak = std::max(peak, v);
        ++count;
      }
    }
    if (sum / count < 0.2) ++low;
    if (peak < 0.2) ++strict;
  }
  check.Expect(low >= 90, fmt::format("noisy sync_ratio < 0.2 in {}/100 seeds", low));
  check.Note(fmt::format("noisy sync_ratio < 0.2 in {}/100 seeds ({} with every cell)",
                         low, strict));
  return check.Done();
}

Outcome SectionCount() {
  Check check;
  const auto chopped = Chop(testing::Alternating(316), Direction::kClientFirst);
  const auto layout = BuildSections(chopped, {40, 10, Direction::kClientFirst});
  const std::size_t expected = (316 - 40) / 10 + 1;
  check.Expect(layout.sections.size() == expected,
               fmt::format("{} sections", layout.sections.size()));
  const auto small = Chop(testing::MakeTurns("TCTCT"), Direction::kClientFirst);
  std::string speakers;
  for (const Turn& t : small) speakers += t.speaker == Speaker::kClient ? 'C' : 'T';
  check.Expect(speakers == "CTCT", "chopped TCTCT to " + speakers);
  check.Note(fmt::format("{} sections, TCTCT -> {}", layout.sections.size(), speakers));
  return check.Done();
}

Outcome TrendDetection() {
  Check check;
  int convergent = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    synth::CouplingSpec spec;
    spec.regime = synth::Regime::kConverging;
    spec.seed = seed;
    for (Feature f : kAllFeatures) {
      spec.noise_sd[static_cast<std::size_t>(f)] = synth::DefaultProfile(f).signal_sd;
    }
    const auto m = Measure(synth::GenerateDyad(spec));
    bool all = true;
    for (const SectionRun& run : m.runs[0].by_n) {
      for (Feature f : kAllFeatures) {
        const TrendResult& t = run.at(f).trend;
        all = all && t.label == TrendLabel::kConvergent && t.corr && t.corr->p < 0.05;
      }
    }
    if (all) ++convergent;
  }
  check.Expect(convergent >= 95, fmt::format("convergent in {}/100", convergent));

  int neither = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    synth::Rng rng(seed);
    DifferenceSeries series;
    for (std::size_t i = 0; i < 28; ++i) {
      series.points.push_back({i, std::fabs(rng.Normal()), 10.0 + 15.0 * i});
    }
    if (Trend(series, 0.05).label == TrendLabel::kNeither) ++neither;
  }
  check.Expect(neither >= 90, fmt::format("i.i.d. neither in {}/100", neither));
  check.Note(fmt::format("convergent {}/100, i.i.d. neither {}/100", convergent, neither));
  return check.Done();
}

Outcome DspCalibration() {
  Check check;
  constexpr int kRate = 16000;
  Turn turn;
  turn.start_s = 0.1;
  turn.end_s = 0.9;
  turn.char_count = 4;
  const auto tone = testing::Sine(220.0, 0.5, 1.0, kRate);
  const auto pitch = TurnStatistics(FramePitch(tone, kRate), turn);
  check.Expect(pitch && std::fabs(pitch->median - 220.0) <= 2.0,
               fmt::format("pitch median {}", pitch ? pitch->median : 0.0));
  const auto half = testing::Sine(220.0, 0.25, 1.0, kRate);
  const auto loud = TurnStatistics(FrameIntensity(tone, kRate), turn);
  const auto quiet = TurnStatistics(FrameIntensity(half, kRate), turn);
  const double delta = quiet->mean - loud->mean;
  check.Expect(std::fabs(delta + 6.02) <= 0.1, fmt::format("halving gave {:.4f} dB", delta));
  const std::vector<float> silence(kRate, 0.0f);
  const FrameTrack track = FramePitch(silence, kRate);
  check.Expect(track.voiced_fraction() == 0.0, "silence has voiced frames");
  check.Note(fmt::format("median {:.3f} Hz, halving {:.4f} dB, silence voiced {}",
                         pitch->median, delta, track.voiced_fraction()));
  return check.Done();
}

RatingsTable RatingsFromTes(const std::vector<std::string>& ids,
                            const std::vector<int>& tes) {
  RatingsTable table;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Ratings r;
    r.set(RatingScale::kTes, tes[i]);
    r.set(RatingScale::kBlri, 0);
    r.set(RatingScale::kSes, 15);
    table.Insert(ids[i], r);
  }
  return table;
}

Outcome PlantedRatings() {
  Check check;
  synth::CorpusSpec spec;
  spec.conversations = 40;
  spec.seed = 2026;
  spec.coupling.turns = 160;
  spec.kappa_range = std::pair{-1.0, 1.0};
  for (Feature f : kAllFeatures) {
    spec.coupling.noise_sd[static_cast<std::size_t>(f)] = synth::DefaultProfile(f).signal_sd;
  }
  const auto corpus = synth::GenerateCorpus(spec);
  const MetricKey key{Feature::kPitchMedian, Metric::kSyncRatio, 20,
                      Direction::kClientFirst};
  std::vector<ConversationMetrics> metrics;
  std::vector<std::string> ids;
  std::vector<double> sync;
  for (const auto& dyad : corpus.dyads) {
    metrics.push_back(Measure(dyad));
    ids.push_back(dyad.conversation.id);
    sync.push_back(*metrics.back().Value(key));
  }
  // Rating = round(center + spread * (0.8 z + 0.6 e)) with z the standardized
  // sync_ratio, so the population correlation is 0.8 before rounding.
  const double m = stats::Mean(sync);
  const double sd = stats::PopulationStd(sync);
  synth::Rng rng(404);
  std::vector<int> tes;
  for (double v : sync) {
    const double mixed = 0.8 * (v - m) / sd + 0.6 * rng.Normal();
    tes.push_back(std::clamp(static_cast<int>(std::lround(36.0 + 9.0 * mixed)), 9, 63));
  }
  const CorrelationCell cell =
      CorrelateMetric(metrics, RatingsFromTes(ids, tes), key, RatingScale::kTes);
  check.Expect(cell.ok() && cell.result->r > 0.6 && cell.star == stats::Stars::kThree,
               fmt::format("planted cell r={} star='{}'", cell.ok() ? cell.result->r : 0.0,
                           stats::ToString(cell.star)));

  int unstarred = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::vector<int> shuffled = tes;
    synth::Rng shuffle_rng(seed);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(
          shuffle_rng.UniformInt(0, static_cast<std::int64_t>(i)));
      std::swap(shuffled[i], shuffled[j]);
    }
    const CorrelationCell c =
        CorrelateMetric(metrics, RatingsFromTes(ids, shuffled), key, RatingScale::kTes);
    if (c.star == stats::Stars::kNone) ++unstarred;
  }
  check.Expect(unstarred >= 90, fmt::format("shuffles unstarred in {}/100", unstarred));
  check.Note(fmt::format("r={:.3f} p={:.2g}, shuffles unstarred {}/100",
                         cell.ok() ? cell.result->r : 0.0, cell.ok() ? cell.result->p : 1.0,
                         unstarred));
  return check.Done();
}

int RunCli(std::vector<std::string> args, std::string* err) {
  args.insert(args.begin(), "entrain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream errs;
  const int code = cli::Main(static_cast<int>(argv.size()), argv.data(), out, errs);
  *err = errs.str();
  return code;
}

std::map<std::string, std::string> Tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), root).generic_string()] = testing::Slurp(e.path());
    }
  }
  return files;
}

Outcome EndToEndDeterminism() {
  Check check;
  testing::TempDir dir;
  const fs::path spec = dir.path() / "spec.json";
  testing::Spit(spec, R"({"conversations": 4, "seed": 31, "turns": 60,
    "noise_scale": 0.5, "kappa_range": [-1, 1], "render_audio": true,
    "ratings": {"mode": "planted"}})");
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* run : {"a", "b"}) {
    const fs::path corpus = dir.path() / run / "corpus";
    const fs::path out = dir.path() / run / "out";
    std::string err;
    check.Expect(RunCli({"synth", spec.string(), "--out", corpus.string()}, &err) == 0,
                 "synth: " + err);
    check.Expect(RunCli({"extract", corpus.string()}, &err) == 0, "extract: " + err);
    check.Expect(RunCli({"analyze", corpus.string(), "--out", out.string()}, &err) == 0,
                 "analyze: " + err);
    trees.push_back(Tree(dir.path() / run));
  }
  check.Expect(!trees[0].empty() && trees[0] == trees[1], "artifact trees differ");
  check.Note(fmt::format("{} files byte-identical", trees[0].size()));
  return check.Done();
}

Outcome Thresholds() {
  Check check;
  auto classify = [](double r, double p) { return Classify({r, p}); };
  check.Expect(classify(0.5, 0.049) == SyncState::kSynchronous, "r=0.5 p=0.049");
  check.Expect(classify(0.4999999, 0.001) == SyncState::kNeutral, "r just below 0.5");
  check.Expect(classify(0.9, 0.05) == SyncState::kNeutral, "p=0.05");
  check.Expect(classify(-0.5, 0.049) == SyncState::kAntiSynchronous, "r=-0.5 p=0.049");
  check.Expect(classify(-0.4999999, 0.001) == SyncState::kNeutral, "r just above -0.5");
  check.Expect(classify(-0.9, 0.05) == SyncState::kNeutral, "anti p=0.05");
  const std::vector<std::pair<double, std::string_view>> stars = {
      {0.0099, "***"}, {0.01, "**"}, {0.0499, "**"},
      {0.05, "*"},     {0.0999, "*"}, {0.1, ""}};
  for (const auto& [p, want] : stars) {
    const auto got = stats::ToString(stats::StarsFor(p));
    check.Expect(got == want, fmt::format("p={} gave '{}'", p, got));
  }
  check.Note("classify and star boundaries exact");
  return check.Done();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace entrain::acceptance

int main() {
  using namespace entrain::acceptance;
  const std::vector<Criterion> criteria = {
      {1, "statistics kernels", 5.0, StatisticsKernels},
      {2, "difference oracle", 1.0, DifferenceOracle},
      {3, "planted synchrony", 30.0, PlantedSynchrony},
      {4, "sectioning count", 0.0, SectionCount},
      {5, "trend detection", 30.0, TrendDetection},
      {6, "dsp calibration", 5.0, DspCalibration},
      {7, "planted rating correlation", 60.0, PlantedRatings},
      {8, "end-to-end determinism", 0.0, EndToEndDeterminism},
      {9, "threshold and star conformance", 0.0, Thresholds},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = Seconds(start);
    if (o.pass && c.budget_s > 0.0 && elapsed >= c.budget_s) {
      o = {false, fmt::format("took {:.2f}s, budget {:.0f}s", elapsed, c.budget_s)};
    }
    if (!o.pass) ++failures;
    fmt::print("{} {} {} ({:.2f}s): {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
               elapsed, o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
