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

// Overlapped fixed-length sections over an alternating turn sequence.

#ifndef ENTRAIN_SECTIONING_HPP_
#define ENTRAIN_SECTIONING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/corpus.hpp"

namespace entrain {

// Which speaker opens every section (and therefore every turn pair).
enum class Direction { kClientFirst, kTherapistFirst };

std::string_view DirectionName(Direction d);  // "c-first" / "t-first"
std::optional<Direction> ParseDirectionName(std::string_view name);
Speaker LeadingSpeaker(Direction d);

struct SectionSpec {
  int n_turns = 40;  // N: even, >= 4
  int step = 10;     // M: even, <= N
  Direction direction = Direction::kClientFirst;

  // Throws std::invalid_argument when N or M break the invariants.
  void Validate() const;
};

// N consecutive turns of the chopped sequence starting at `offset`.
struct Section {
  std::size_t index = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
  double midpoint_s = 0.0;  // mean of member turn midpoints

  std::size_t pair_count() const { return length / 2; }
  // Turn pairs are numbered globally over the chopped sequence.
  std::size_t first_pair() const { return offset / 2; }
};

// Drops the first turn if its speaker does not lead under `direction`, then
// the last turn if the remaining count is odd. Throws ValidationError when the
// input does not alternate and InsufficientDataError when fewer than two
// turns remain.
std::vector<Turn> Chop(std::span<const Turn> turns, Direction direction);

struct SectionLayout {
  std::vector<Section> sections;
  std::size_t chopped_turns = 0;
  // Turns after the last section's end that no section covers.
  std::size_t unused_trailing_turns = 0;
  // Set when the conversation is shorter than one section.
  std::optional<std::string> warning;
};

// Sections start at offsets 0, M, 2M, ... while offset + N <= L.
SectionLayout BuildSections(std::span<const Turn> chopped,
                            const SectionSpec& spec);

}  // namespace entrain

#endif  // ENTRAIN_SECTIONING_HPP_
