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

// features.json: raw and speaker-normalized turn features of one
// conversation, stamped with the extraction config and an input fingerprint
// so stale caches can be detected.

#ifndef ENTRAIN_FEATURE_CACHE_HPP_
#define ENTRAIN_FEATURE_CACHE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "entrain/corpus.hpp"
#include "entrain/prosody.hpp"

namespace entrain {

inline constexpr int kFeatureCacheSchemaVersion = 1;

struct FeatureCache {
  std::string conversation_id;
  ProsodyConfig config;
  std::string config_hash;
  std::string input_hash;
  std::vector<Turn> turns;
  ConversationProsody prosody;
};

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string Fnv1aHex(std::string_view bytes);

class Fnv1a {
 public:
  void Update(std::string_view bytes);
  std::string Hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string ConfigHash(const ProsodyConfig& config);

// Hash of the turn table bytes followed by the audio bytes (if any).
std::string InputFingerprint(const std::filesystem::path& turn_table,
                             const std::filesystem::path* audio);

nlohmann::ordered_json FeatureCacheToJson(const FeatureCache& cache);
// Throws ParseError on schema mismatch or malformed content.
FeatureCache FeatureCacheFromJson(const nlohmann::json& j);

void WriteFeatureCache(const std::filesystem::path& path,
                       const FeatureCache& cache);
FeatureCache ReadFeatureCache(const std::filesystem::path& path);

}  // namespace entrain

#endif  // ENTRAIN_FEATURE_CACHE_HPP_
