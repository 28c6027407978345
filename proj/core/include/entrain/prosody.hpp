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

// Frame-level pitch and intensity tracking and their reduction to the seven
// turn-level prosodic parameters.

#ifndef ENTRAIN_PROSODY_HPP_
#define ENTRAIN_PROSODY_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "entrain/corpus.hpp"

namespace entrain {

enum class Feature {
  kPitchMedian,
  kPitchMean,
  kPitchStd,
  kIntensityMedian,
  kIntensityMean,
  kIntensityStd,
  kSpeechRate,
};

inline constexpr std::size_t kFeatureCount = 7;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::kPitchMedian,     Feature::kPitchMean,     Feature::kPitchStd,
    Feature::kIntensityMedian, Feature::kIntensityMean, Feature::kIntensityStd,
    Feature::kSpeechRate,
};

std::string_view FeatureName(Feature feature);  // e.g. "pitch_median"
std::optional<Feature> ParseFeatureName(std::string_view name);

struct PitchConfig {
  double frame_s = 0.040;
  double hop_s = 0.010;
  double min_f0_hz = 60.0;
  double max_f0_hz = 400.0;
  // Minimum normalized autocorrelation at the chosen lag for a voiced frame.
  double voicing_threshold = 0.45;
};

struct IntensityConfig {
  double frame_s = 0.025;
  double hop_s = 0.010;
  double epsilon = 1e-10;
};

struct ProsodyConfig {
  PitchConfig pitch;
  IntensityConfig intensity;
};

nlohmann::json ToJson(const ProsodyConfig& config);
ProsodyConfig ProsodyConfigFromJson(const nlohmann::json& j);

// Frame i spans samples [i * hop, i * hop + frame) and is stamped at its
// centre. For pitch, unvoiced frames carry voiced[i] == false and their
// value must not enter any statistic.
struct FrameTrack {
  double hop_s = 0.0;
  double frame_s = 0.0;
  std::vector<double> values;
  std::vector<bool> voiced;  // empty for intensity: every frame is valid

  std::size_t size() const { return values.size(); }
  bool valid(std::size_t i) const { return voiced.empty() || voiced[i]; }
  double center_s(std::size_t i) const {
    return static_cast<double>(i) * hop_s + 0.5 * frame_s;
  }
  double voiced_fraction() const;
};

// Both throw InsufficientDataError when the audio is shorter than one frame
// and std::invalid_argument for inconsistent configs.
FrameTrack FramePitch(std::span<const float> samples, int sample_rate,
                      const PitchConfig& config = {});
FrameTrack FrameIntensity(std::span<const float> samples, int sample_rate,
                          const IntensityConfig& config = {});

struct TurnSummary {
  double median = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population convention
};

// Statistics over valid frames whose centre lies in [start_s, end_s).
// nullopt when no valid frame falls inside the turn.
std::optional<TurnSummary> TurnStatistics(const FrameTrack& track,
                                          const Turn& turn);

// Syllables per second.
double SpeechRate(const Turn& turn);

// One value per feature; nullopt marks a feature that could not be
// extracted for the turn.
struct TurnProsody {
  std::array<std::optional<double>, kFeatureCount> values{};

  std::optional<double>& operator[](Feature f) {
    return values[static_cast<std::size_t>(f)];
  }
  const std::optional<double>& operator[](Feature f) const {
    return values[static_cast<std::size_t>(f)];
  }
  friend bool operator==(const TurnProsody&, const TurnProsody&) = default;
};

// Subtracts each speaker's conversation-level mean of a feature from that
// speaker's turns. Missing values are skipped in the mean and stay missing.
std::vector<TurnProsody> NormalizeSpeaker(std::span<const TurnProsody> raw,
                                          const Conversation& conversation);

struct ConversationProsody {
  std::vector<TurnProsody> raw;
  std::vector<TurnProsody> normalized;
};

// Raw features for every turn; pitch and intensity are missing throughout
// when the conversation carries no audio.
std::vector<TurnProsody> ExtractTurnFeatures(const Conversation& conversation,
                                             const ProsodyConfig& config = {});

ConversationProsody ExtractProsody(const Conversation& conversation,
                                   const ProsodyConfig& config = {});

}  // namespace entrain

#endif  // ENTRAIN_PROSODY_HPP_
