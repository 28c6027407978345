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

// Conversations (speaker-turn tables with optional audio) and session
// ratings, plus their CSV ingestion.
//
// Turn table header: index,speaker,start_s,end_s,char_count
// Ratings header:    conversation_id,tes,blri,ses   (empty cell = missing)

#ifndef ENTRAIN_CORPUS_HPP_
#define ENTRAIN_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/wav.hpp"

namespace entrain {

enum class Speaker { kClient, kTherapist };

char SpeakerTag(Speaker speaker);
std::optional<Speaker> ParseSpeakerTag(std::string_view tag);
inline Speaker Other(Speaker s) {
  return s == Speaker::kClient ? Speaker::kTherapist : Speaker::kClient;
}

struct Turn {
  std::size_t index = 0;
  Speaker speaker = Speaker::kClient;
  double start_s = 0.0;
  double end_s = 0.0;
  // Transcript syllable count; speech rate is char_count / duration.
  std::int64_t char_count = 0;

  double duration_s() const { return end_s - start_s; }
  double midpoint_s() const { return 0.5 * (start_s + end_s); }

  friend bool operator==(const Turn&, const Turn&) = default;
};

// Validated, strictly alternating two-speaker conversation. Instances built
// through the loaders or MakeConversation always satisfy the invariants.
struct Conversation {
  std::string id;
  std::vector<Turn> turns;
  std::optional<Waveform> audio;
};

// Merges consecutive same-speaker turns (earliest start, latest end, summed
// char_count), re-indexes from zero and validates ordering, speaker presence
// and, when audio is given, that the last turn ends within the audio.
Conversation MakeConversation(std::string id, std::vector<Turn> turns,
                              std::optional<Waveform> audio = std::nullopt);

std::vector<Turn> ParseTurnTable(std::istream& in);
void WriteTurnTable(std::ostream& out, const Conversation& conversation);

Conversation LoadConversation(
    const std::filesystem::path& turn_table,
    const std::optional<std::filesystem::path>& audio = std::nullopt,
    std::string id = {});

enum class RatingScale { kTes, kBlri, kSes };
inline constexpr std::array<RatingScale, 3> kAllRatingScales = {
    RatingScale::kTes, RatingScale::kBlri, RatingScale::kSes};

std::string_view RatingName(RatingScale scale);  // "TES", "BLRI", "SES"
std::optional<RatingScale> ParseRatingName(std::string_view name);

struct ScaleRange {
  int min;
  int max;
};
ScaleRange RangeOf(RatingScale scale);

struct Ratings {
  std::optional<int> tes;
  std::optional<int> blri;
  std::optional<int> ses;

  std::optional<int> get(RatingScale scale) const;
  void set(RatingScale scale, std::optional<int> value);
  bool complete() const { return tes && blri && ses; }
  friend bool operator==(const Ratings&, const Ratings&) = default;
};

// Keyed by conversation id; iteration order is lexicographic, which keeps
// every downstream report deterministic.
class RatingsTable {
 public:
  // Throws RangeError naming the scale when a value is outside its range.
  void Insert(const std::string& conversation_id, const Ratings& ratings);

  const Ratings* Find(const std::string& conversation_id) const;
  std::optional<int> Get(const std::string& conversation_id,
                         RatingScale scale) const;

  // Ids of rows with at least one missing rating.
  std::vector<std::string> IncompleteIds() const;

  const std::map<std::string, Ratings>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

 private:
  std::map<std::string, Ratings> rows_;
};

RatingsTable ParseRatings(std::istream& in);
void WriteRatings(std::ostream& out, const RatingsTable& table);
RatingsTable LoadRatings(const std::filesystem::path& path);

}  // namespace entrain

#endif  // ENTRAIN_CORPUS_HPP_
