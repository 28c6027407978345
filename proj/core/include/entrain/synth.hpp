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

// Synthetic client/therapist dialogues with planted prosodic coupling.
//
// Each client feature follows a seeded AR(1) walk around a base level. The
// therapist turn that answers client turn k takes
//
//   T_k = base_T + kappa_k * sd * z_k + sign_k * gap_k + noise_k
//
// where z_k is the client's standardized walk, gap_k is the regime's
// planted client/therapist gap (shrinking for Converging, growing for
// Diverging) and kappa_k flips sign periodically under Alternating.

#ifndef ENTRAIN_SYNTH_HPP_
#define ENTRAIN_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "entrain/corpus.hpp"
#include "entrain/prosody.hpp"
#include "entrain/wav.hpp"

namespace entrain::synth {

// Deterministic, platform-independent random source.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t NextU64();
  double Uniform();  // [0, 1)
  double Normal();   // standard normal
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);  // inclusive

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

std::uint64_t SplitMix64(std::uint64_t x);

enum class Regime { kStatic, kConverging, kDiverging, kAlternating };
std::string_view RegimeName(Regime r);
std::optional<Regime> ParseRegimeName(std::string_view name);

struct FeatureProfile {
  double client_base;
  double therapist_base;
  double signal_sd;  // stationary sd of the client walk
  double min;
  double max;
};

FeatureProfile DefaultProfile(Feature feature);

struct CouplingSpec {
  std::array<double, kFeatureCount> kappa{};     // in [-1, 1]
  std::array<double, kFeatureCount> noise_sd{};  // feature units
  Regime regime = Regime::kStatic;
  int turns = 316;  // even, >= 4
  std::uint64_t seed = 1;
  double persistence = 0.9;   // AR(1) coefficient of the client walk
  double gap_scale = 2.0;     // regime gap in units of signal_sd
  int alternate_every = 40;   // turns between kappa sign flips
  int min_chars = 4;
  int max_chars = 16;
  double pause_s = 0.2;

  CouplingSpec();
  // Throws ValidationError naming the offending field.
  void Validate() const;
};

struct SyntheticDyad {
  Conversation conversation;
  std::vector<TurnProsody> features;  // raw, parallel to conversation.turns
};

SyntheticDyad GenerateDyad(const CouplingSpec& spec, std::string id = "synth");

// Tones with constant F0 (the planted pitch median) and three harmonics
// whose power matches the planted intensity mean. Each tone extends
// `kRenderGuardS` beyond its turn on both sides so every analysis frame
// centred inside the turn sees only that turn's tone.
inline constexpr double kRenderGuardS = 0.025;
Waveform RenderAudio(const SyntheticDyad& dyad, int sample_rate = 8000);

enum class RatingMode { kRandom, kPlanted };

struct CorpusSpec {
  int conversations = 20;
  std::uint64_t seed = 1;
  CouplingSpec coupling;
  // When set, every conversation draws one kappa uniformly from this range
  // and applies it to all features; it is the latent for planted ratings.
  std::optional<std::pair<double, double>> kappa_range;
  bool render_audio = false;
  int sample_rate = 8000;
  RatingMode rating_mode = RatingMode::kRandom;
  RatingScale planted_scale = RatingScale::kTes;
  double planted_strength = 0.8;

  void Validate() const;
};

// Accepts the JSON layout documented in the README; throws ValidationError
// with the field path on any bad value.
CorpusSpec CorpusSpecFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const CorpusSpec& spec);

struct SyntheticCorpus {
  std::vector<SyntheticDyad> dyads;
  std::vector<std::uint64_t> seeds;
  std::vector<double> latent;  // per-conversation kappa (or 0)
  RatingsTable ratings;
};

SyntheticCorpus GenerateCorpus(const CorpusSpec& spec);

// <out>/<id>/turns.csv (+ audio.wav), <out>/ratings.csv, <out>/manifest.json
void WriteCorpus(const SyntheticCorpus& corpus, const CorpusSpec& spec,
                 const std::filesystem::path& out_dir);

}  // namespace entrain::synth

#endif  // ENTRAIN_SYNTH_HPP_
