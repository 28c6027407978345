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

#include "entrain/sectioning.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "entrain/error.hpp"

namespace entrain {

std::string_view DirectionName(Direction d) {
  return d == Direction::kClientFirst ? "c-first" : "t-first";
}

std::optional<Direction> ParseDirectionName(std::string_view name) {
  if (name == "c-first") return Direction::kClientFirst;
  if (name == "t-first") return Direction::kTherapistFirst;
  return std::nullopt;
}

Speaker LeadingSpeaker(Direction d) {
  return d == Direction::kClientFirst ? Speaker::kClient : Speaker::kTherapist;
}

void SectionSpec::Validate() const {
  if (n_turns < 4 || n_turns % 2 != 0) {
    throw std::invalid_argument(
        fmt::format("section length N={} must be even and >= 4", n_turns));
  }
  if (step <= 0 || step % 2 != 0 || step > n_turns) {
    throw std::invalid_argument(fmt::format(
        "section step M={} must be even, positive and <= N={}", step, n_turns));
  }
}

std::vector<Turn> Chop(std::span<const Turn> turns, Direction direction) {
  for (std::size_t i = 1; i < turns.size(); ++i) {
    if (turns[i].speaker == turns[i - 1].speaker) {
      throw ValidationError(fmt::format(
          "turns {} and {} share a speaker; sequence must alternate",
          turns[i - 1].index, turns[i].index));
    }
  }
  std::size_t begin = 0;
  std::size_t end = turns.size();
  if (end > 0 && turns.front().speaker != LeadingSpeaker(direction)) ++begin;
  if ((end - begin) % 2 != 0) --end;
  if (end - begin < 2) {
    throw InsufficientDataError(
        fmt::format("only {} turn(s) left after chopping", end - begin));
  }
  return {turns.begin() + static_cast<std::ptrdiff_t>(begin),
          turns.begin() + static_cast<std::ptrdiff_t>(end)};
}

SectionLayout BuildSections(std::span<const Turn> chopped,
                            const SectionSpec& spec) {
  spec.Validate();
  SectionLayout layout;
  layout.chopped_turns = chopped.size();
  const auto n = static_cast<std::size_t>(spec.n_turns);
  const auto m = static_cast<std::size_t>(spec.step);
  if (chopped.size() < n) {
    layout.unused_trailing_turns = chopped.size();
    layout.warning = fmt::format(
        "{} turns after chopping, fewer than one section of N={}",
        chopped.size(), n);
    return layout;
  }
  for (std::size_t offset = 0; offset + n <= chopped.size(); offset += m) {
    Section s;
    s.index = layout.sections.size();
    s.offset = offset;
    s.length = n;
    double sum = 0.0;
    for (std::size_t k = offset; k < offset + n; ++k) sum += chopped[k].midpoint_s();
    s.midpoint_s = sum / static_cast<double>(n);
    layout.sections.push_back(s);
  }
  const Section& last = layout.sections.back();
  layout.unused_trailing_turns = chopped.size() - (last.offset + last.length);
  return layout;
}

}  // namespace entrain
