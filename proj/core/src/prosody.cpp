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

#include "entrain/prosody.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entrain/error.hpp"
#include "entrain/stats.hpp"

namespace entrain {
namespace {

// A candidate lag must reach this fraction of the best peak; picking the
// shortest such lag suppresses octave-down errors at multiples of the period.
constexpr double kOctaveTolerance = 0.9;

// Mean-square energy below which a frame is treated as silent.
constexpr double kSilenceFloor = 1e-10;

std::size_t ToSamples(double seconds, int sample_rate) {
  return static_cast<std::size_t>(std::lround(seconds * sample_rate));
}

std::size_t FrameCount(std::size_t n_samples, std::size_t frame,
                       std::size_t hop) {
  if (n_samples < frame) {
    throw InsufficientDataError("audio shorter than one analysis frame");
  }
  return 1 + (n_samples - frame) / hop;
}

// Picks the F0 of one frame. Returns {f0, periodicity}; periodicity is the
// normalized autocorrelation at the chosen lag (0 for silent frames).
std::pair<double, double> EstimateFrameF0(std::span<const double> x,
                                          int sample_rate,
                                          std::size_t min_lag,
                                          std::size_t max_lag) {
  const std::size_t len = x.size();
  // prefix[i] = sum of x[0..i)^2
  std::vector<double> prefix(len + 1, 0.0);
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
  if (prefix[len] / static_cast<double>(len) < kSilenceFloor) return {0.0, 0.0};

  const std::size_t lo = min_lag - 1;
  const std::size_t hi = max_lag + 1;
  std::vector<double> r(hi + 1, 0.0);
  for (std::size_t lag = lo; lag <= hi; ++lag) {
    const std::size_t span = len - lag;
    double acc = 0.0;
    for (std::size_t t = 0; t < span; ++t) acc += x[t] * x[t + lag];
    const double e0 = prefix[span];
    const double e1 = prefix[len] - prefix[lag];
    const double denom = std::sqrt(e0 * e1);
    r[lag] = denom > 0.0 ? acc / denom : 0.0;
  }

  double best = -1.0;
  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    if (r[lag] >= r[lag - 1] && r[lag] > r[lag + 1]) best = std::max(best, r[lag]);
  }
  if (best <= 0.0) return {0.0, 0.0};

  std::size_t chosen = 0;
  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    if (r[lag] >= r[lag - 1] && r[lag] > r[lag + 1] &&
        r[lag] >= kOctaveTolerance * best) {
      chosen = lag;
      break;
    }
  }

  const double left = r[chosen - 1];
  const double mid = r[chosen];
  const double right = r[chosen + 1];
  const double curvature = left - 2.0 * mid + right;
  double offset = 0.0;
  if (curvature < 0.0) offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
  const double peak = mid - 0.25 * (left - right) * offset;
  const double period = static_cast<double>(chosen) + offset;
  return {static_cast<double>(sample_rate) / period, std::min(peak, 1.0)};
}

}  // namespace

std::string_view FeatureName(Feature feature) {
  switch (feature) {
    case Feature::kPitchMedian:
      return "pitch_median";
    case Feature::kPitchMean:
      return "pitch_mean";
    case Feature::kPitchStd:
      return "pitch_std";
    case Feature::kIntensityMedian:
      return "intensity_median";
    case Feature::kIntensityMean:
      return "intensity_mean";
    case Feature::kIntensityStd:
      return "intensity_std";
    case Feature::kSpeechRate:
      return "speech_rate";
  }
  return "?";
}

std::optional<Feature> ParseFeatureName(std::string_view name) {
  for (Feature f : kAllFeatures) {
    if (FeatureName(f) == name) return f;
  }
  return std::nullopt;
}

nlohmann::json ToJson(const ProsodyConfig& config) {
  return {
      {"pitch",
       {{"frame_s", config.pitch.frame_s},
        {"hop_s", config.pitch.hop_s},
        {"min_f0_hz", config.pitch.min_f0_hz},
        {"max_f0_hz", config.pitch.max_f0_hz},
        {"voicing_threshold", config.pitch.voicing_threshold}}},
      {"intensity",
       {{"frame_s", config.intensity.frame_s},
        {"hop_s", config.intensity.hop_s},
        {"epsilon", config.intensity.epsilon}}},
  };
}

ProsodyConfig ProsodyConfigFromJson(const nlohmann::json& j) {
  ProsodyConfig c;
  const auto& p = j.at("pitch");
  c.pitch.frame_s = p.at("frame_s").get<double>();
  c.pitch.hop_s = p.at("hop_s").get<double>();
  c.pitch.min_f0_hz = p.at("min_f0_hz").get<double>();
  c.pitch.max_f0_hz = p.at("max_f0_hz").get<double>();
  c.pitch.voicing_threshold = p.at("voicing_threshold").get<double>();
  const auto& i = j.at("intensity");
  c.intensity.frame_s = i.at("frame_s").get<double>();
  c.intensity.hop_s = i.at("hop_s").get<double>();
  c.intensity.epsilon = i.at("epsilon").get<double>();
  return c;
}

double FrameTrack::voiced_fraction() const {
  if (values.empty()) return 0.0;
  if (voiced.empty()) return 1.0;
  const auto n = std::count(voiced.begin(), voiced.end(), true);
  return static_cast<double>(n) / static_cast<double>(voiced.size());
}

FrameTrack FramePitch(std::span<const float> samples, int sample_rate,
                      const PitchConfig& config) {
  if (sample_rate <= 0 || !(config.hop_s > 0.0) || !(config.frame_s > 0.0) ||
      !(config.min_f0_hz > 0.0) || !(config.max_f0_hz > config.min_f0_hz)) {
    throw std::invalid_argument("invalid pitch config");
  }
  const std::size_t frame = ToSamples(config.frame_s, sample_rate);
  const std::size_t hop = std::max<std::size_t>(1, ToSamples(config.hop_s, sample_rate));
  const auto min_lag = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor(sample_rate / config.max_f0_hz)));
  const auto max_lag =
      static_cast<std::size_t>(std::ceil(sample_rate / config.min_f0_hz));
  if (max_lag + 2 >= frame) {
    throw std::invalid_argument("pitch frame too short for the F0 floor");
  }
  const std::size_t n_frames = FrameCount(samples.size(), frame, hop);

  FrameTrack track;
  track.hop_s = static_cast<double>(hop) / sample_rate;
  track.frame_s = static_cast<double>(frame) / sample_rate;
  track.values.assign(n_frames, 0.0);
  track.voiced.assign(n_frames, false);

  std::vector<double> buf(frame);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const auto* begin = samples.data() + i * hop;
    double mean = 0.0;
    for (std::size_t t = 0; t < frame; ++t) mean += begin[t];
    mean /= static_cast<double>(frame);
    for (std::size_t t = 0; t < frame; ++t) buf[t] = begin[t] - mean;
    const auto [f0, periodicity] =
        EstimateFrameF0(buf, sample_rate, min_lag, max_lag);
    if (periodicity >= config.voicing_threshold && f0 > 0.0) {
      track.values[i] = f0;
      track.voiced[i] = true;
    }
  }
  return track;
}

FrameTrack FrameIntensity(std::span<const float> samples, int sample_rate,
                          const IntensityConfig& config) {
  if (sample_rate <= 0 || !(config.hop_s > 0.0) || !(config.frame_s > 0.0) ||
      !(config.epsilon > 0.0)) {
    throw std::invalid_argument("invalid intensity config");
  }
  const std::size_t frame = std::max<std::size_t>(1, ToSamples(config.frame_s, sample_rate));
  const std::size_t hop = std::max<std::size_t>(1, ToSamples(config.hop_s, sample_rate));
  const std::size_t n_frames = FrameCount(samples.size(), frame, hop);

  FrameTrack track;
  track.hop_s = static_cast<double>(hop) / sample_rate;
  track.frame_s = static_cast<double>(frame) / sample_rate;
  track.values.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const auto* begin = samples.data() + i * hop;
    double ss = 0.0;
    for (std::size_t t = 0; t < frame; ++t) {
      ss += static_cast<double>(begin[t]) * begin[t];
    }
    track.values[i] = 10.0 * std::log10(ss / static_cast<double>(frame) + config.epsilon);
  }
  return track;
}

std::optional<TurnSummary> TurnStatistics(const FrameTrack& track,
                                          const Turn& turn) {
  std::vector<double> inside;
  if (track.hop_s > 0.0) {
    // First frame whose centre reaches start_s.
    const double first =
        std::ceil((turn.start_s - 0.5 * track.frame_s) / track.hop_s) - 1.0;
    for (auto i = static_cast<std::size_t>(std::max(0.0, first));
         i < track.size(); ++i) {
      const double c = track.center_s(i);
      if (c >= turn.end_s) break;
      if (c >= turn.start_s && track.valid(i)) inside.push_back(track.values[i]);
    }
  }
  if (inside.empty()) return std::nullopt;
  return TurnSummary{stats::Median(inside), stats::Mean(inside),
                     stats::PopulationStd(inside)};
}

double SpeechRate(const Turn& turn) {
  if (!(turn.end_s > turn.start_s)) {
    throw std::invalid_argument("speech rate of a zero-length turn");
  }
  return static_cast<double>(turn.char_count) / turn.duration_s();
}

std::vector<TurnProsody> NormalizeSpeaker(std::span<const TurnProsody> raw,
                                          const Conversation& conversation) {
  if (raw.size() != conversation.turns.size()) {
    throw std::invalid_argument("feature list and turn list differ in length");
  }
  std::vector<TurnProsody> out(raw.begin(), raw.end());
  for (Feature f : kAllFeatures) {
    for (Speaker s : {Speaker::kClient, Speaker::kTherapist}) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (conversation.turns[i].speaker == s && raw[i][f]) {
          sum += *raw[i][f];
          ++count;
        }
      }
      if (count == 0) continue;
      const double mean = sum / static_cast<double>(count);
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (conversation.turns[i].speaker == s && out[i][f]) *out[i][f] -= mean;
      }
    }
  }
  return out;
}

std::vector<TurnProsody> ExtractTurnFeatures(const Conversation& conversation,
                                             const ProsodyConfig& config) {
  std::vector<TurnProsody> raw(conversation.turns.size());
  if (conversation.audio) {
    const auto& audio = *conversation.audio;
    const FrameTrack pitch = FramePitch(audio.samples, audio.sample_rate, config.pitch);
    const FrameTrack intensity =
        FrameIntensity(audio.samples, audio.sample_rate, config.intensity);
    for (std::size_t i = 0; i < conversation.turns.size(); ++i) {
      const Turn& turn = conversation.turns[i];
      if (const auto p = TurnStatistics(pitch, turn)) {
        raw[i][Feature::kPitchMedian] = p->median;
        raw[i][Feature::kPitchMean] = p->mean;
        raw[i][Feature::kPitchStd] = p->std;
      }
      if (const auto e = TurnStatistics(intensity, turn)) {
        raw[i][Feature::kIntensityMedian] = e->median;
        raw[i][Feature::kIntensityMean] = e->mean;
        raw[i][Feature::kIntensityStd] = e->std;
      }
    }
  }
  for (std::size_t i = 0; i < conversation.turns.size(); ++i) {
    raw[i][Feature::kSpeechRate] = SpeechRate(conversation.turns[i]);
  }
  return raw;
}

ConversationProsody ExtractProsody(const Conversation& conversation,
                                   const ProsodyConfig& config) {
  ConversationProsody out;
  out.raw = ExtractTurnFeatures(conversation, config);
  out.normalized = NormalizeSpeaker(out.raw, conversation);
  return out;
}

}  // namespace entrain
