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

#include "entrain/corpus.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>

#include "entrain/csv.hpp"
#include "entrain/error.hpp"

namespace entrain {
namespace {

constexpr std::string_view kTurnHeader = "index,speaker,start_s,end_s,char_count";
constexpr std::string_view kRatingsHeader = "conversation_id,tes,blri,ses";

// Turn ends may exceed the audio by less than one millisecond of rounding.
constexpr double kAudioSlackS = 1e-3;

void ExpectHeader(std::istream& in, std::string_view expected,
                  std::size_t& line) {
  std::string record;
  if (!csv::ReadRecord(in, record, line)) {
    throw ParseError(fmt::format("empty file; expected header '{}'", expected),
                     0);
  }
  const auto fields = csv::SplitRecord(record, line);
  std::string joined;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) joined.push_back(',');
    joined += csv::Trim(fields[i]);
  }
  if (joined != expected) {
    throw ParseError(fmt::format("bad header '{}'; expected '{}'", record,
                                 expected),
                     line);
  }
}

std::optional<int> ParseRatingCell(const std::string& cell, RatingScale scale,
                                   std::size_t line) {
  const auto trimmed = csv::Trim(cell);
  if (trimmed.empty()) return std::nullopt;
  const auto value = csv::ParseInt(trimmed);
  if (!value) {
    throw ParseError(fmt::format("{} value '{}' is not an integer",
                                 RatingName(scale), trimmed),
                     line);
  }
  const auto range = RangeOf(scale);
  if (*value < range.min || *value > range.max) {
    throw RangeError(std::string(RatingName(scale)),
                     fmt::format("line {}: value {} outside [{}, {}]", line,
                                 *value, range.min, range.max));
  }
  return static_cast<int>(*value);
}

}  // namespace

char SpeakerTag(Speaker speaker) {
  return speaker == Speaker::kClient ? 'C' : 'T';
}

std::optional<Speaker> ParseSpeakerTag(std::string_view tag) {
  tag = csv::Trim(tag);
  if (tag == "C") return Speaker::kClient;
  if (tag == "T") return Speaker::kTherapist;
  return std::nullopt;
}

Conversation MakeConversation(std::string id, std::vector<Turn> turns,
                              std::optional<Waveform> audio) {
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const Turn& t = turns[i];
    if (!(t.start_s >= 0.0)) {
      throw ValidationError(
          fmt::format("turn {}: start_s {} is negative", t.index, t.start_s));
    }
    if (!(t.end_s > t.start_s)) {
      throw ValidationError(fmt::format("turn {}: end_s {} not after start_s {}",
                                        t.index, t.end_s, t.start_s));
    }
    if (t.char_count < 0) {
      throw ValidationError(
          fmt::format("turn {}: negative char_count", t.index));
    }
    if (i > 0 && turns[i - 1].end_s > t.start_s) {
      throw ValidationError(fmt::format(
          "turn {} (start {}) overlaps turn {} (end {})", t.index, t.start_s,
          turns[i - 1].index, turns[i - 1].end_s));
    }
  }

  std::vector<Turn> merged;
  merged.reserve(turns.size());
  for (const Turn& t : turns) {
    if (!merged.empty() && merged.back().speaker == t.speaker) {
      merged.back().end_s = t.end_s;
      merged.back().char_count += t.char_count;
    } else {
      merged.push_back(t);
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i) merged[i].index = i;

  if (merged.size() < 2) {
    throw ValidationError(fmt::format(
        "conversation '{}' needs turns from both speakers", id));
  }
  if (audio) {
    if (audio->sample_rate < kMinSampleRateHz) {
      throw ValidationError("audio sample rate below 8000 Hz");
    }
    const double duration = audio->duration_s();
    if (merged.back().end_s > duration + kAudioSlackS) {
      throw ValidationError(fmt::format(
          "conversation '{}': last turn ends at {} s but audio lasts {} s", id,
          merged.back().end_s, duration));
    }
  }
  return Conversation{std::move(id), std::move(merged), std::move(audio)};
}

std::vector<Turn> ParseTurnTable(std::istream& in) {
  std::size_t line = 0;
  ExpectHeader(in, kTurnHeader, line);
  std::vector<Turn> turns;
  std::string record;
  std::optional<std::int64_t> last_index;
  while (csv::ReadRecord(in, record, line)) {
    const auto fields = csv::SplitRecord(record, line);
    if (fields.size() != 5) {
      throw ParseError(
          fmt::format("expected 5 fields, found {}", fields.size()), line);
    }
    const auto index = csv::ParseInt(fields[0]);
    const auto start = csv::ParseDouble(fields[2]);
    const auto end = csv::ParseDouble(fields[3]);
    const auto chars = csv::ParseInt(fields[4]);
    if (!index || *index < 0) throw ParseError("bad index", line);
    if (!start) throw ParseError("bad start_s", line);
    if (!end) throw ParseError("bad end_s", line);
    if (!chars) throw ParseError("bad char_count", line);
    const auto speaker = ParseSpeakerTag(fields[1]);
    if (!speaker) {
      throw ValidationError(fmt::format("line {}: speaker '{}' is not C or T",
                                        line, csv::Trim(fields[1])));
    }
    if (last_index && *index <= *last_index) {
      throw ValidationError(
          fmt::format("line {}: index {} out of order", line, *index));
    }
    last_index = index;
    turns.push_back(Turn{static_cast<std::size_t>(*index), *speaker, *start,
                         *end, *chars});
  }
  return turns;
}

void WriteTurnTable(std::ostream& out, const Conversation& conversation) {
  out << kTurnHeader << '\n';
  for (const Turn& t : conversation.turns) {
    out << t.index << ',' << SpeakerTag(t.speaker) << ','
        << csv::FormatDouble(t.start_s) << ',' << csv::FormatDouble(t.end_s)
        << ',' << t.char_count << '\n';
  }
}

Conversation LoadConversation(const std::filesystem::path& turn_table,
                              const std::optional<std::filesystem::path>& audio,
                              std::string id) {
  std::ifstream in(turn_table);
  if (!in) throw Error("cannot open " + turn_table.string());
  auto turns = ParseTurnTable(in);
  std::optional<Waveform> wave;
  if (audio) wave = ReadWav(*audio);
  if (id.empty()) id = turn_table.stem().string();
  return MakeConversation(std::move(id), std::move(turns), std::move(wave));
}

std::string_view RatingName(RatingScale scale) {
  switch (scale) {
    case RatingScale::kTes:
      return "TES";
    case RatingScale::kBlri:
      return "BLRI";
    case RatingScale::kSes:
      return "SES";
  }
  return "?";
}

std::optional<RatingScale> ParseRatingName(std::string_view name) {
  for (RatingScale s : kAllRatingScales) {
    const auto canonical = RatingName(s);
    if (name.size() != canonical.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < name.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(name[i])) != canonical[i]) {
        same = false;
      }
    }
    if (same) return s;
  }
  return std::nullopt;
}

ScaleRange RangeOf(RatingScale scale) {
  switch (scale) {
    case RatingScale::kTes:
      return {9, 63};
    case RatingScale::kBlri:
      return {-48, 48};
    case RatingScale::kSes:
      return {5, 25};
  }
  return {0, 0};
}

std::optional<int> Ratings::get(RatingScale scale) const {
  switch (scale) {
    case RatingScale::kTes:
      return tes;
    case RatingScale::kBlri:
      return blri;
    case RatingScale::kSes:
      return ses;
  }
  return std::nullopt;
}

void Ratings::set(RatingScale scale, std::optional<int> value) {
  switch (scale) {
    case RatingScale::kTes:
      tes = value;
      break;
    case RatingScale::kBlri:
      blri = value;
      break;
    case RatingScale::kSes:
      ses = value;
      break;
  }
}

void RatingsTable::Insert(const std::string& conversation_id,
                          const Ratings& ratings) {
  for (RatingScale s : kAllRatingScales) {
    const auto v = ratings.get(s);
    const auto range = RangeOf(s);
    if (v && (*v < range.min || *v > range.max)) {
      throw RangeError(std::string(RatingName(s)),
                       fmt::format("{}: value {} outside [{}, {}]",
                                   conversation_id, *v, range.min, range.max));
    }
  }
  if (conversation_id.empty()) {
    throw ValidationError("ratings row with empty conversation_id");
  }
  if (!rows_.emplace(conversation_id, ratings).second) {
    throw ValidationError("duplicate ratings for " + conversation_id);
  }
}

const Ratings* RatingsTable::Find(const std::string& conversation_id) const {
  const auto it = rows_.find(conversation_id);
  return it == rows_.end() ? nullptr : &it->second;
}

std::optional<int> RatingsTable::Get(const std::string& conversation_id,
                                     RatingScale scale) const {
  const Ratings* r = Find(conversation_id);
  return r ? r->get(scale) : std::nullopt;
}

std::vector<std::string> RatingsTable::IncompleteIds() const {
  std::vector<std::string> ids;
  for (const auto& [id, r] : rows_) {
    if (!r.complete()) ids.push_back(id);
  }
  return ids;
}

RatingsTable ParseRatings(std::istream& in) {
  std::size_t line = 0;
  ExpectHeader(in, kRatingsHeader, line);
  RatingsTable table;
  std::string record;
  while (csv::ReadRecord(in, record, line)) {
    const auto fields = csv::SplitRecord(record, line);
    if (fields.size() != 4) {
      throw ParseError(
          fmt::format("expected 4 fields, found {}", fields.size()), line);
    }
    Ratings r;
    r.tes = ParseRatingCell(fields[1], RatingScale::kTes, line);
    r.blri = ParseRatingCell(fields[2], RatingScale::kBlri, line);
    r.ses = ParseRatingCell(fields[3], RatingScale::kSes, line);
    const std::string id(csv::Trim(fields[0]));
    if (id.empty()) throw ParseError("empty conversation_id", line);
    if (table.Find(id)) {
      throw ValidationError(
          fmt::format("line {}: duplicate conversation_id '{}'", line, id));
    }
    table.Insert(id, r);
  }
  return table;
}

void WriteRatings(std::ostream& out, const RatingsTable& table) {
  out << kRatingsHeader << '\n';
  const auto cell = [](std::optional<int> v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& [id, r] : table.rows()) {
    out << csv::Escape(id) << ',' << cell(r.tes) << ',' << cell(r.blri) << ','
        << cell(r.ses) << '\n';
  }
}

RatingsTable LoadRatings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ParseRatings(in);
}

}  // namespace entrain
