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

#include "entrain/feature_cache.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iterator>

#include "entrain/error.hpp"

namespace entrain {
namespace {

nlohmann::ordered_json FeaturesJson(const TurnProsody& p) {
  nlohmann::ordered_json j;
  for (Feature f : kAllFeatures) {
    const auto& v = p[f];
    j[std::string(FeatureName(f))] =
        v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  }
  return j;
}

TurnProsody FeaturesFromJson(const nlohmann::json& j) {
  TurnProsody p;
  for (Feature f : kAllFeatures) {
    const auto& v = j.at(std::string(FeatureName(f)));
    if (!v.is_null()) p[f] = v.get<double>();
  }
  return p;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void Fnv1a::Update(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
}

std::string Fnv1a::Hex() const { return fmt::format("{:016x}", state_); }

std::string Fnv1aHex(std::string_view bytes) {
  Fnv1a h;
  h.Update(bytes);
  return h.Hex();
}

std::string ConfigHash(const ProsodyConfig& config) {
  return Fnv1aHex(ToJson(config).dump());
}

std::string InputFingerprint(const std::filesystem::path& turn_table,
                             const std::filesystem::path* audio) {
  Fnv1a h;
  h.Update(ReadAll(turn_table));
  const char marker = audio ? '\x01' : '\x00';
  h.Update(std::string_view(&marker, 1));
  if (audio) h.Update(ReadAll(*audio));
  return h.Hex();
}

nlohmann::ordered_json FeatureCacheToJson(const FeatureCache& cache) {
  nlohmann::ordered_json j;
  j["schema_version"] = kFeatureCacheSchemaVersion;
  j["kind"] = "entrain.features";
  j["conversation_id"] = cache.conversation_id;
  j["config"] = ToJson(cache.config);
  j["config_hash"] = cache.config_hash;
  j["input_hash"] = cache.input_hash;
  nlohmann::ordered_json turns = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cache.turns.size(); ++i) {
    const Turn& t = cache.turns[i];
    nlohmann::ordered_json tj;
    tj["index"] = t.index;
    tj["speaker"] = std::string(1, SpeakerTag(t.speaker));
    tj["start_s"] = t.start_s;
    tj["end_s"] = t.end_s;
    tj["char_count"] = t.char_count;
    tj["raw"] = FeaturesJson(cache.prosody.raw.at(i));
    tj["normalized"] = FeaturesJson(cache.prosody.normalized.at(i));
    turns.push_back(std::move(tj));
  }
  j["turns"] = std::move(turns);
  return j;
}

FeatureCache FeatureCacheFromJson(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kFeatureCacheSchemaVersion) {
      throw ParseError("unsupported feature cache schema version", 0);
    }
    FeatureCache cache;
    cache.conversation_id = j.at("conversation_id").get<std::string>();
    cache.config = ProsodyConfigFromJson(j.at("config"));
    cache.config_hash = j.at("config_hash").get<std::string>();
    cache.input_hash = j.at("input_hash").get<std::string>();
    for (const auto& tj : j.at("turns")) {
      Turn t;
      t.index = tj.at("index").get<std::size_t>();
      const auto speaker = ParseSpeakerTag(tj.at("speaker").get<std::string>());
      if (!speaker) throw ParseError("bad speaker tag in feature cache", 0);
      t.speaker = *speaker;
      t.start_s = tj.at("start_s").get<double>();
      t.end_s = tj.at("end_s").get<double>();
      t.char_count = tj.at("char_count").get<std::int64_t>();
      cache.turns.push_back(t);
      cache.prosody.raw.push_back(FeaturesFromJson(tj.at("raw")));
      cache.prosody.normalized.push_back(FeaturesFromJson(tj.at("normalized")));
    }
    return cache;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed feature cache: ") + e.what(), 0);
  }
}

void WriteFeatureCache(const std::filesystem::path& path,
                       const FeatureCache& cache) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << FeatureCacheToJson(cache).dump(2) << '\n';
}

FeatureCache ReadFeatureCache(const std::filesystem::path& path) {
  const std::string text = ReadAll(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("feature cache is not JSON: ") + e.what(), 0);
  }
  return FeatureCacheFromJson(j);
}

}  // namespace entrain
