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

#include "entrain_cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "entrain/corpus.hpp"
#include "entrain/error.hpp"
#include "entrain/feature_cache.hpp"
#include "entrain/report.hpp"
#include "entrain/synth.hpp"

namespace entrain::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kTurnsFile = "turns.csv";
constexpr const char* kAudioFile = "audio.wav";
constexpr const char* kCacheFile = "features.json";

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results must be
// written to per-index slots so the caller can emit them in order.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  const auto workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

struct Extracted {
  std::optional<FeatureCache> cache;
  std::string error;
};

std::optional<fs::path> AudioPath(const fs::path& dir) {
  fs::path audio = dir / kAudioFile;
  if (fs::exists(audio)) return audio;
  return std::nullopt;
}

Extracted ExtractDir(const fs::path& dir, const ProsodyConfig& config) {
  Extracted result;
  const fs::path turns = dir / kTurnsFile;
  if (!fs::exists(turns)) {
    result.error = "missing turns.csv";
    return result;
  }
  const auto audio = AudioPath(dir);
  try {
    const Conversation conversation =
        LoadConversation(turns, audio, dir.filename().string());
    FeatureCache cache;
    cache.conversation_id = conversation.id;
    cache.config = config;
    cache.config_hash = ConfigHash(config);
    cache.input_hash = InputFingerprint(turns, audio ? &*audio : nullptr);
    cache.turns = conversation.turns;
    cache.prosody = ExtractProsody(conversation, config);
    result.cache = std::move(cache);
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

// A cache is reused only when both the config and the input bytes match.
std::optional<FeatureCache> FreshCache(const fs::path& dir,
                                       const ProsodyConfig& config) {
  const fs::path path = dir / kCacheFile;
  const fs::path turns = dir / kTurnsFile;
  if (!fs::exists(path) || !fs::exists(turns)) return std::nullopt;
  try {
    FeatureCache cache = ReadFeatureCache(path);
    const auto audio = AudioPath(dir);
    if (cache.config_hash != ConfigHash(config)) return std::nullopt;
    if (cache.input_hash != InputFingerprint(turns, audio ? &*audio : nullptr)) {
      return std::nullopt;
    }
    if (cache.conversation_id != dir.filename().string()) return std::nullopt;
    return cache;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

template <typename Writer>
void WriteWith(const fs::path& path, Writer writer) {
  std::ostringstream buffer;
  writer(buffer);
  WriteText(path, buffer.str());
}

void ValidateProsody(const ProsodyConfig& c) {
  if (!(c.pitch.min_f0_hz > 0.0 && c.pitch.max_f0_hz > c.pitch.min_f0_hz)) {
    throw std::invalid_argument("F0 range must satisfy 0 < min < max");
  }
  if (!(c.pitch.voicing_threshold > 0.0 && c.pitch.voicing_threshold < 1.0)) {
    throw std::invalid_argument("voicing threshold must lie in (0, 1)");
  }
  if (!(c.pitch.frame_s > 0.0 && c.pitch.hop_s > 0.0 &&
        c.intensity.frame_s > 0.0 && c.intensity.hop_s > 0.0)) {
    throw std::invalid_argument("frame and hop lengths must be positive");
  }
}

}  // namespace

std::vector<fs::path> ListConversationDirs(const fs::path& corpus,
                                           const fs::path& exclude) {
  if (!fs::is_directory(corpus)) {
    throw Error("corpus directory not found: " + corpus.string());
  }
  std::error_code ec;
  const fs::path skip =
      exclude.empty() ? fs::path() : fs::weakly_canonical(exclude, ec);
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(corpus)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (!skip.empty() && fs::weakly_canonical(entry.path(), ec) == skip) continue;
    dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return dirs;
}

int RunExtract(const ExtractOptions& options, std::ostream& out,
               std::ostream& err) {
  std::vector<fs::path> dirs;
  try {
    ValidateProsody(options.prosody);
    dirs = ListConversationDirs(options.corpus);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  std::vector<Extracted> results(dirs.size());
  ParallelFor(dirs.size(), options.jobs, [&](std::size_t i) {
    results[i] = ExtractDir(dirs[i], options.prosody);
    if (results[i].cache) {
      try {
        WriteFeatureCache(dirs[i] / kCacheFile, *results[i].cache);
      } catch (const std::exception& e) {
        results[i].error = e.what();
        results[i].cache.reset();
      }
    }
  });
  std::size_t failed = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string id = dirs[i].filename().string();
    if (results[i].cache) {
      out << fmt::format("{}: {} turns\n", id, results[i].cache->turns.size());
    } else {
      ++failed;
      err << fmt::format("failed: {}: {}\n", id, results[i].error);
    }
  }
  out << fmt::format("{} extracted, {} failed\n", dirs.size() - failed, failed);
  if (dirs.empty()) {
    err << "error: no conversation folders in " << options.corpus.string()
        << '\n';
    return kExitFatal;
  }
  return failed == 0 ? kExitOk : kExitPartial;
}

int RunAnalyze(const AnalyzeOptions& options, std::ostream& out,
               std::ostream& err) {
  std::vector<fs::path> dirs;
  RatingsTable ratings;
  try {
    options.analysis.Validate();
    ValidateProsody(options.prosody);
    const fs::path ratings_path =
        options.ratings ? *options.ratings : options.corpus / "ratings.csv";
    if (!fs::exists(ratings_path)) {
      err << "error: ratings file not found: " << ratings_path.string() << '\n';
      return kExitFatal;
    }
    ratings = LoadRatings(ratings_path);
    dirs = ListConversationDirs(options.corpus, options.out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }

  std::vector<Extracted> loaded(dirs.size());
  ParallelFor(dirs.size(), options.jobs, [&](std::size_t i) {
    if (auto cache = FreshCache(dirs[i], options.prosody)) {
      loaded[i].cache = std::move(cache);
    } else {
      loaded[i] = ExtractDir(dirs[i], options.prosody);
    }
  });

  std::vector<PreparedConversation> prepared;
  std::vector<Failure> failures;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string id = dirs[i].filename().string();
    if (!loaded[i].cache) {
      failures.push_back({id, loaded[i].error});
      continue;
    }
    FeatureCache& cache = *loaded[i].cache;
    try {
      PreparedConversation p;
      p.conversation = MakeConversation(id, std::move(cache.turns));
      p.prosody = std::move(cache.prosody);
      prepared.push_back(std::move(p));
    } catch (const std::exception& e) {
      failures.push_back({id, e.what()});
    }
  }

  AnalysisReport report;
  try {
    report = RunFullAnalysis(prepared, ratings, options.analysis,
                             std::move(failures));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }

  try {
    fs::create_directories(options.out);
    const bool json = options.format != OutputFormat::kCsv;
    const bool csv = options.format != OutputFormat::kJson;
    if (json) {
      WriteText(options.out / "report.json", ReportToJson(report).dump(2) + "\n");
      const fs::path conv_dir = options.out / "conversations";
      fs::create_directories(conv_dir);
      for (const auto& m : report.conversations) {
        WriteText(conv_dir / (m.id + ".json"),
                  ConversationReportToJson(m, report.config).dump(2) + "\n");
      }
    }
    if (csv) {
      WriteWith(options.out / "cells.csv",
                [&](std::ostream& o) { WriteCellsCsv(o, report); });
      WriteWith(options.out / "histograms.csv",
                [&](std::ostream& o) { WriteHistogramsCsv(o, report); });
      WriteWith(options.out / "trends.csv",
                [&](std::ostream& o) { WriteTrendsCsv(o, report); });
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }

  WriteSummary(out, report);
  for (const auto& f : report.failures) {
    err << fmt::format("failed: {}: {}\n", f.id, f.message);
  }
  return report.failures.empty() ? kExitOk : kExitPartial;
}

int RunSynth(const SynthOptions& options, std::ostream& out,
             std::ostream& err) {
  try {
    std::ifstream in(options.spec, std::ios::binary);
    if (!in) {
      err << "error: cannot open spec " << options.spec.string() << '\n';
      return kExitFatal;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      err << "error: spec is not valid JSON: " << e.what() << '\n';
      return kExitFatal;
    }
    if (options.seed && j.is_object()) j["seed"] = *options.seed;
    const synth::CorpusSpec spec = synth::CorpusSpecFromJson(j);
    const synth::SyntheticCorpus corpus = synth::GenerateCorpus(spec);
    synth::WriteCorpus(corpus, spec, options.out);
    out << fmt::format("wrote {} conversation(s) to {}\n", corpus.dyads.size(),
                       options.out.string());
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Prosodic synchrony and entrainment analysis of dialogues"};
  app.require_subcommand(1);

  ProsodyConfig prosody;
  auto add_dsp = [&](CLI::App* cmd) {
    cmd->add_option("--f0-min", prosody.pitch.min_f0_hz, "Pitch floor in Hz")
        ->capture_default_str();
    cmd->add_option("--f0-max", prosody.pitch.max_f0_hz, "Pitch ceiling in Hz")
        ->capture_default_str();
    cmd->add_option("--voicing-threshold", prosody.pitch.voicing_threshold,
                    "Minimum normalized autocorrelation for a voiced frame")
        ->capture_default_str();
    cmd->add_option("--pitch-frame", prosody.pitch.frame_s,
                    "Pitch frame length in seconds")
        ->capture_default_str();
    cmd->add_option("--intensity-frame", prosody.intensity.frame_s,
                    "Intensity frame length in seconds")
        ->capture_default_str();
    cmd->add_option("--hop", prosody.pitch.hop_s, "Frame hop in seconds")
        ->capture_default_str();
  };

  ExtractOptions extract;
  auto* extract_cmd =
      app.add_subcommand("extract", "Write features.json for every conversation");
  extract_cmd->add_option("corpus", extract.corpus, "Corpus directory")
      ->required();
  extract_cmd->add_option("-j,--jobs", extract.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_dsp(extract_cmd);

  AnalyzeOptions analyze;
  std::string direction = "c-first";
  std::string format = "all";
  std::string time_axis = "midpoint";
  std::string ratings;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Run the synchrony and entrainment analysis");
  analyze_cmd->add_option("corpus", analyze.corpus, "Corpus directory")
      ->required();
  analyze_cmd->add_option("--ratings", ratings,
                          "Ratings CSV (default <corpus>/ratings.csv)");
  analyze_cmd->add_option("--out", analyze.out, "Output directory")
      ->capture_default_str();
  analyze_cmd->add_option("--grid", analyze.analysis.grid, "Section sizes N")
      ->delimiter(',')
      ->capture_default_str();
  analyze_cmd->add_option("--step", analyze.analysis.step, "Section step M")
      ->capture_default_str();
  analyze_cmd
      ->add_option("--rho-threshold", analyze.analysis.thresholds.rho_threshold,
                   "Minimum |r| for a synchronous section")
      ->capture_default_str();
  analyze_cmd
      ->add_option("--alpha", analyze.analysis.thresholds.alpha,
                   "Significance level for section states and trends")
      ->capture_default_str();
  analyze_cmd->add_option("--direction", direction, "Pairing direction")
      ->check(CLI::IsMember({"c-first", "t-first", "both"}))
      ->capture_default_str();
  analyze_cmd->add_option("--format", format, "Artifacts to write")
      ->check(CLI::IsMember({"json", "csv", "all"}))
      ->capture_default_str();
  analyze_cmd->add_option("--time-axis", time_axis, "Trend regressor")
      ->check(CLI::IsMember({"midpoint", "index"}))
      ->capture_default_str();
  analyze_cmd->add_option("-j,--jobs", analyze.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_dsp(analyze_cmd);

  SynthOptions synth_options;
  std::uint64_t seed = 0;
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic corpus from a spec");
  synth_cmd->add_option("spec", synth_options.spec, "Spec JSON file")
      ->required();
  synth_cmd->add_option("--out", synth_options.out, "Output directory")
      ->required();
  auto* seed_opt =
      synth_cmd->add_option("--seed", seed, "Override the spec's seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFatal;
  }
  prosody.intensity.hop_s = prosody.pitch.hop_s;

  if (*extract_cmd) {
    extract.prosody = prosody;
    return RunExtract(extract, out, err);
  }
  if (*analyze_cmd) {
    analyze.prosody = prosody;
    if (!ratings.empty()) analyze.ratings = ratings;
    analyze.analysis.directions.clear();
    if (direction == "both") {
      analyze.analysis.directions = {Direction::kClientFirst,
                                     Direction::kTherapistFirst};
    } else {
      analyze.analysis.directions = {*ParseDirectionName(direction)};
    }
    analyze.analysis.time_axis = *ParseTimeAxisName(time_axis);
    analyze.analysis.trend_alpha = analyze.analysis.thresholds.alpha;
    analyze.format = format == "json"  ? OutputFormat::kJson
                     : format == "csv" ? OutputFormat::kCsv
                                       : OutputFormat::kAll;
    return RunAnalyze(analyze, out, err);
  }
  if (*seed_opt) synth_options.seed = seed;
  return RunSynth(synth_options, out, err);
}

}  // namespace entrain::cli
