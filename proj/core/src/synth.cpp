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

#include "entrain/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "entrain/error.hpp"
#include "entrain/stats.hpp"

namespace entrain::synth {
namespace {

constexpr std::array<double, 3> kHarmonics = {1.0, 0.5, 0.25};

constexpr std::uint64_t kLayoutStream = 0x5bd1e9955bd1e995ULL;
constexpr std::uint64_t kFeatureStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kRatingStream = 0xa5a5a5a5c3c3c3c3ULL;
constexpr std::uint64_t kKappaStream = 0x0123456789abcdefULL;

using Json = nlohmann::json;

[[noreturn]] void FieldError(std::string_view field, std::string_view what) {
  throw ValidationError(fmt::format("field '{}': {}", field, what));
}

double NumberAt(const Json& j, std::string_view field) {
  if (!j.is_number()) FieldError(field, "expected a number");
  return j.get<double>();
}

int IntAt(const Json& j, std::string_view field) {
  if (!j.is_number_integer()) FieldError(field, "expected an integer");
  return j.get<int>();
}

// Either one number for every feature or an object keyed by feature name.
void ReadPerFeature(const Json& j, std::string_view field,
                    std::array<double, kFeatureCount>& out) {
  if (j.is_number()) {
    out.fill(j.get<double>());
    return;
  }
  if (!j.is_object()) FieldError(field, "expected a number or an object");
  for (const auto& [key, value] : j.items()) {
    const auto f = ParseFeatureName(key);
    if (!f) FieldError(fmt::format("{}.{}", field, key), "unknown feature");
    out[static_cast<std::size_t>(*f)] =
        NumberAt(value, fmt::format("{}.{}", field, key));
  }
}

Json PerFeatureJson(const std::array<double, kFeatureCount>& values) {
  Json j = Json::object();
  for (Feature f : kAllFeatures) {
    j[std::string(FeatureName(f))] = values[static_cast<std::size_t>(f)];
  }
  return j;
}

double LevelToAmplitude(double level_db) {
  double power = 0.0;
  for (double h : kHarmonics) power += h * h;
  return std::sqrt(2.0 * std::pow(10.0, level_db / 10.0) / power);
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::NextU64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(NextU64() % span);
}

std::string_view RegimeName(Regime r) {
  switch (r) {
    case Regime::kStatic:
      return "static";
    case Regime::kConverging:
      return "converging";
    case Regime::kDiverging:
      return "diverging";
    case Regime::kAlternating:
      return "alternating";
  }
  return "?";
}

std::optional<Regime> ParseRegimeName(std::string_view name) {
  for (Regime r : {Regime::kStatic, Regime::kConverging, Regime::kDiverging,
                   Regime::kAlternating}) {
    if (RegimeName(r) == name) return r;
  }
  return std::nullopt;
}

FeatureProfile DefaultProfile(Feature feature) {
  switch (feature) {
    case Feature::kPitchMedian:
      return {200.0, 150.0, 20.0, 70.0, 380.0};
    case Feature::kPitchMean:
      return {205.0, 155.0, 20.0, 70.0, 380.0};
    case Feature::kPitchStd:
      return {25.0, 20.0, 5.0, 0.0, 200.0};
    case Feature::kIntensityMedian:
      return {-26.0, -24.0, 3.0, -60.0, -10.0};
    case Feature::kIntensityMean:
      return {-25.0, -23.0, 3.0, -60.0, -10.0};
    case Feature::kIntensityStd:
      return {5.0, 4.0, 1.0, 0.0, 40.0};
    case Feature::kSpeechRate:
      return {3.9, 4.1, 0.5, 0.5, 12.0};
  }
  return {0.0, 0.0, 1.0, -1e9, 1e9};
}

CouplingSpec::CouplingSpec() { kappa.fill(1.0); }

void CouplingSpec::Validate() const {
  for (Feature f : kAllFeatures) {
    const auto i = static_cast<std::size_t>(f);
    if (!(std::fabs(kappa[i]) <= 1.0)) {
      FieldError(fmt::format("kappa.{}", FeatureName(f)), "must lie in [-1, 1]");
    }
    if (!(noise_sd[i] >= 0.0) || !std::isfinite(noise_sd[i])) {
      FieldError(fmt::format("noise_sd.{}", FeatureName(f)), "must be >= 0");
    }
  }
  if (turns < 4) FieldError("turns", "must be at least 4");
  if (turns % 2 != 0) FieldError("turns", "must be even");
  if (!(persistence >= 0.0 && persistence < 1.0)) {
    FieldError("persistence", "must lie in [0, 1)");
  }
  if (!(gap_scale >= 0.0)) FieldError("gap_scale", "must be >= 0");
  if (alternate_every < 2 || alternate_every % 2 != 0) {
    FieldError("alternate_every", "must be an even count >= 2");
  }
  if (min_chars < 1) FieldError("chars", "minimum must be >= 1");
  if (max_chars < min_chars) FieldError("chars", "maximum below minimum");
  if (!(pause_s >= 0.1)) FieldError("pause_s", "must be >= 0.1");
}

SyntheticDyad GenerateDyad(const CouplingSpec& spec, std::string id) {
  spec.Validate();
  const auto pairs = static_cast<std::size_t>(spec.turns / 2);

  // planted[f][turn]
  std::array<std::vector<double>, kFeatureCount> planted;
  for (Feature f : kAllFeatures) {
    const auto fi = static_cast<std::size_t>(f);
    const FeatureProfile prof = DefaultProfile(f);
    Rng rng(SplitMix64(spec.seed ^ (kFeatureStream * (fi + 1))));
    const double innovation = std::sqrt(1.0 - spec.persistence * spec.persistence);
    const double gap = spec.gap_scale * prof.signal_sd;
    auto& out = planted[fi];
    out.resize(static_cast<std::size_t>(spec.turns));
    double z = rng.Normal();
    for (std::size_t k = 0; k < pairs; ++k) {
      if (k > 0) z = spec.persistence * z + innovation * rng.Normal();
      const double frac =
          pairs > 1 ? static_cast<double>(k) / static_cast<double>(pairs - 1) : 0.0;
      double gap_k = 0.0;
      double kappa = spec.kappa[fi];
      switch (spec.regime) {
        case Regime::kStatic:
          break;
        case Regime::kConverging:
          gap_k = gap * (1.0 - frac);
          break;
        case Regime::kDiverging:
          gap_k = gap * frac;
          break;
        case Regime::kAlternating:
          if ((2 * k / static_cast<std::size_t>(spec.alternate_every)) % 2 == 1) {
            kappa = -kappa;
          }
          break;
      }
      const double sign = rng.Uniform() < 0.5 ? -1.0 : 1.0;
      const double noise = spec.noise_sd[fi] * rng.Normal();
      const double client = prof.client_base + prof.signal_sd * z;
      const double therapist = prof.therapist_base + kappa * prof.signal_sd * z +
                               sign * gap_k + noise;
      out[2 * k] = std::clamp(client, prof.min, prof.max);
      out[2 * k + 1] = std::clamp(therapist, prof.min, prof.max);
    }
  }

  Rng layout(SplitMix64(spec.seed ^ kLayoutStream));
  std::vector<Turn> turns;
  turns.reserve(static_cast<std::size_t>(spec.turns));
  double clock = spec.pause_s;
  const auto& rates = planted[static_cast<std::size_t>(Feature::kSpeechRate)];
  for (std::size_t i = 0; i < static_cast<std::size_t>(spec.turns); ++i) {
    const auto chars = layout.UniformInt(spec.min_chars, spec.max_chars);
    const double duration = static_cast<double>(chars) / rates[i];
    Turn t;
    t.index = i;
    t.speaker = i % 2 == 0 ? Speaker::kClient : Speaker::kTherapist;
    t.start_s = clock;
    t.end_s = clock + duration;
    t.char_count = chars;
    turns.push_back(t);
    clock = t.end_s + spec.pause_s;
  }

  SyntheticDyad dyad;
  dyad.conversation = MakeConversation(std::move(id), std::move(turns));
  dyad.features.resize(dyad.conversation.turns.size());
  for (std::size_t i = 0; i < dyad.features.size(); ++i) {
    for (Feature f : kAllFeatures) {
      dyad.features[i][f] = planted[static_cast<std::size_t>(f)][i];
    }
    dyad.features[i][Feature::kSpeechRate] = SpeechRate(dyad.conversation.turns[i]);
  }
  return dyad;
}

Waveform RenderAudio(const SyntheticDyad& dyad, int sample_rate) {
  if (sample_rate < kMinSampleRateHz) {
    throw std::invalid_argument("render sample rate below 8000 Hz");
  }
  const auto& turns = dyad.conversation.turns;
  const double total = turns.empty() ? 0.0 : turns.back().end_s + 0.2;
  Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.assign(static_cast<std::size_t>(std::ceil(total * sample_rate)), 0.0f);
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const auto& f0 = dyad.features[i][Feature::kPitchMedian];
    const auto& level = dyad.features[i][Feature::kIntensityMean];
    if (!f0 || !level) continue;
    const double amplitude = LevelToAmplitude(*level);
    const auto first = static_cast<std::size_t>(
        std::max(0.0, std::ceil((turns[i].start_s - kRenderGuardS) * sample_rate)));
    const auto last = std::min(
        wave.samples.size(),
        static_cast<std::size_t>(std::ceil((turns[i].end_s + kRenderGuardS) * sample_rate)));
    for (std::size_t n = first; n < last; ++n) {
      const double t = static_cast<double>(n - first) / sample_rate;
      double s = 0.0;
      for (std::size_t h = 0; h < kHarmonics.size(); ++h) {
        s += kHarmonics[h] *
             std::sin(2.0 * std::numbers::pi * static_cast<double>(h + 1) * *f0 * t);
      }
      wave.samples[n] = static_cast<float>(amplitude * s);
    }
  }
  return wave;
}

void CorpusSpec::Validate() const {
  coupling.Validate();
  if (conversations < 1) FieldError("conversations", "must be >= 1");
  if (kappa_range) {
    const auto [lo, hi] = *kappa_range;
    if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi)) {
      FieldError("kappa_range", "must be [lo, hi] within [-1, 1]");
    }
  }
  if (sample_rate < kMinSampleRateHz) FieldError("sample_rate", "must be >= 8000");
  if (rating_mode == RatingMode::kPlanted) {
    if (!kappa_range) FieldError("ratings.mode", "planted ratings need kappa_range");
    if (!(planted_strength >= -1.0 && planted_strength <= 1.0)) {
      FieldError("ratings.strength", "must lie in [-1, 1]");
    }
  }
}

CorpusSpec CorpusSpecFromJson(const Json& j) {
  if (!j.is_object()) FieldError("<root>", "expected a JSON object");
  CorpusSpec spec;
  CouplingSpec& c = spec.coupling;
  std::optional<double> noise_scale;
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") {
      if (IntAt(value, key) != 1) FieldError(key, "unsupported version");
    } else if (key == "conversations") {
      spec.conversations = IntAt(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        FieldError(key, "expected a non-negative integer");
      }
      spec.seed = value.get<std::uint64_t>();
    } else if (key == "turns") {
      c.turns = IntAt(value, key);
    } else if (key == "regime") {
      const auto r = value.is_string() ? ParseRegimeName(value.get<std::string>())
                                       : std::nullopt;
      if (!r) FieldError(key, "expected static|converging|diverging|alternating");
      c.regime = *r;
    } else if (key == "kappa") {
      ReadPerFeature(value, key, c.kappa);
    } else if (key == "noise_sd") {
      ReadPerFeature(value, key, c.noise_sd);
    } else if (key == "noise_scale") {
      noise_scale = NumberAt(value, key);
      if (!(*noise_scale >= 0.0)) FieldError(key, "must be >= 0");
    } else if (key == "kappa_range") {
      if (!value.is_array() || value.size() != 2) {
        FieldError(key, "expected [lo, hi]");
      }
      spec.kappa_range = std::pair{NumberAt(value[0], "kappa_range[0]"),
                                   NumberAt(value[1], "kappa_range[1]")};
    } else if (key == "persistence") {
      c.persistence = NumberAt(value, key);
    } else if (key == "gap_scale") {
      c.gap_scale = NumberAt(value, key);
    } else if (key == "alternate_every") {
      c.alternate_every = IntAt(value, key);
    } else if (key == "chars") {
      if (!value.is_array() || value.size() != 2) FieldError(key, "expected [min, max]");
      c.min_chars = IntAt(value[0], "chars[0]");
      c.max_chars = IntAt(value[1], "chars[1]");
    } else if (key == "pause_s") {
      c.pause_s = NumberAt(value, key);
    } else if (key == "render_audio") {
      if (!value.is_boolean()) FieldError(key, "expected true or false");
      spec.render_audio = value.get<bool>();
    } else if (key == "sample_rate") {
      spec.sample_rate = IntAt(value, key);
    } else if (key == "ratings") {
      if (!value.is_object()) FieldError(key, "expected an object");
      for (const auto& [rk, rv] : value.items()) {
        const std::string field = "ratings." + rk;
        if (rk == "mode") {
          const std::string mode = rv.is_string() ? rv.get<std::string>() : "";
          if (mode == "random") {
            spec.rating_mode = RatingMode::kRandom;
          } else if (mode == "planted") {
            spec.rating_mode = RatingMode::kPlanted;
          } else {
            FieldError(field, "expected random|planted");
          }
        } else if (rk == "scale") {
          const auto s = rv.is_string() ? ParseRatingName(rv.get<std::string>())
                                        : std::nullopt;
          if (!s) FieldError(field, "expected TES|BLRI|SES");
          spec.planted_scale = *s;
        } else if (rk == "strength") {
          spec.planted_strength = NumberAt(rv, field);
        } else {
          FieldError(field, "unknown field");
        }
      }
    } else {
      FieldError(key, "unknown field");
    }
  }
  if (noise_scale) {
    for (Feature f : kAllFeatures) {
      auto& n = c.noise_sd[static_cast<std::size_t>(f)];
      if (n == 0.0) n = *noise_scale * DefaultProfile(f).signal_sd;
    }
  }
  spec.Validate();
  return spec;
}

nlohmann::ordered_json ToJson(const CorpusSpec& spec) {
  nlohmann::ordered_json j;
  const CouplingSpec& c = spec.coupling;
  j["schema_version"] = 1;
  j["conversations"] = spec.conversations;
  j["seed"] = spec.seed;
  j["turns"] = c.turns;
  j["regime"] = RegimeName(c.regime);
  j["kappa"] = PerFeatureJson(c.kappa);
  j["noise_sd"] = PerFeatureJson(c.noise_sd);
  if (spec.kappa_range) {
    j["kappa_range"] = {spec.kappa_range->first, spec.kappa_range->second};
  }
  j["persistence"] = c.persistence;
  j["gap_scale"] = c.gap_scale;
  j["alternate_every"] = c.alternate_every;
  j["chars"] = {c.min_chars, c.max_chars};
  j["pause_s"] = c.pause_s;
  j["render_audio"] = spec.render_audio;
  j["sample_rate"] = spec.sample_rate;
  j["ratings"] = {
      {"mode", spec.rating_mode == RatingMode::kPlanted ? "planted" : "random"},
      {"scale", RatingName(spec.planted_scale)},
      {"strength", spec.planted_strength}};
  return j;
}

SyntheticCorpus GenerateCorpus(const CorpusSpec& spec) {
  spec.Validate();
  SyntheticCorpus corpus;
  const int width = std::max<int>(3, static_cast<int>(std::to_string(spec.conversations).size()));
  Rng kappa_rng(SplitMix64(spec.seed ^ kKappaStream));
  for (int j = 0; j < spec.conversations; ++j) {
    CouplingSpec c = spec.coupling;
    c.seed = SplitMix64(spec.seed + static_cast<std::uint64_t>(j) + 1);
    double latent = 0.0;
    if (spec.kappa_range) {
      const auto [lo, hi] = *spec.kappa_range;
      latent = lo + (hi - lo) * kappa_rng.Uniform();
      c.kappa.fill(latent);
    }
    corpus.dyads.push_back(GenerateDyad(c, fmt::format("conv{:0{}}", j + 1, width)));
    corpus.seeds.push_back(c.seed);
    corpus.latent.push_back(latent);
  }

  Rng rating_rng(SplitMix64(spec.seed ^ kRatingStream));
  std::vector<double> z(corpus.latent.size(), 0.0);
  if (spec.rating_mode == RatingMode::kPlanted && corpus.latent.size() > 1) {
    const double m = stats::Mean(corpus.latent);
    const double sd = stats::PopulationStd(corpus.latent);
    if (sd > 0.0) {
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = (corpus.latent[i] - m) / sd;
    }
  }
  const double s = spec.planted_strength;
  for (std::size_t i = 0; i < corpus.dyads.size(); ++i) {
    Ratings r;
    for (RatingScale scale : kAllRatingScales) {
      const ScaleRange range = RangeOf(scale);
      int value = 0;
      if (spec.rating_mode == RatingMode::kPlanted && scale == spec.planted_scale) {
        const double center = 0.5 * (range.min + range.max);
        const double spread = (range.max - range.min) / 6.0;
        const double mixed = s * z[i] + std::sqrt(1.0 - s * s) * rating_rng.Normal();
        value = static_cast<int>(std::lround(center + spread * mixed));
        value = std::clamp(value, range.min, range.max);
      } else {
        value = static_cast<int>(rating_rng.UniformInt(range.min, range.max));
      }
      r.set(scale, value);
    }
    corpus.ratings.Insert(corpus.dyads[i].conversation.id, r);
  }
  return corpus;
}

void WriteCorpus(const SyntheticCorpus& corpus, const CorpusSpec& spec,
                 const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  nlohmann::ordered_json manifest;
  manifest["schema_version"] = 1;
  manifest["kind"] = "entrain.synth_manifest";
  manifest["seed"] = spec.seed;
  manifest["spec"] = ToJson(spec);
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < corpus.dyads.size(); ++i) {
    const auto& dyad = corpus.dyads[i];
    const fs::path dir = out_dir / dyad.conversation.id;
    fs::create_directories(dir);
    {
      std::ofstream out(dir / "turns.csv", std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + (dir / "turns.csv").string());
      WriteTurnTable(out, dyad.conversation);
    }
    if (spec.render_audio) {
      WriteWav(dir / "audio.wav", RenderAudio(dyad, spec.sample_rate));
    }
    entries.push_back({{"id", dyad.conversation.id},
                       {"seed", corpus.seeds[i]},
                       {"latent_kappa", corpus.latent[i]},
                       {"turns", dyad.conversation.turns.size()}});
  }
  manifest["conversations"] = std::move(entries);
  {
    std::ofstream out(out_dir / "ratings.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write ratings.csv");
    WriteRatings(out, corpus.ratings);
  }
  std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace entrain::synth
