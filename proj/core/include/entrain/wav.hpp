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

#ifndef ENTRAIN_WAV_HPP_
#define ENTRAIN_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace entrain {

inline constexpr int kMinSampleRateHz = 8000;

// Mono waveform with samples in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 0;

  double duration_s() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// Decodes a RIFF/WAVE file holding 16-bit PCM mono audio at >= 8 kHz.
// Throws ParseError for malformed containers and ValidationError for
// unsupported encodings.
Waveform DecodeWav(std::span<const std::uint8_t> bytes);
Waveform ReadWav(const std::filesystem::path& path);

// Encodes as 16-bit PCM mono; samples are clipped to [-1, 1] and rounded.
std::vector<std::uint8_t> EncodeWav(const Waveform& wave);
void WriteWav(const std::filesystem::path& path, const Waveform& wave);

}  // namespace entrain

#endif  // ENTRAIN_WAV_HPP_
