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

// Section-level synchrony classification and conversation-level state
// ratios.
//
// A section is synchronous for a feature when the Spearman correlation
// between its client and therapist turn values is at least +rho_threshold
// and significant at alpha; anti-synchronous for the mirrored condition. The
// conversation ratio is the share of turn pairs covered by at least one
// section in that state.

#ifndef ENTRAIN_SYNCHRONY_HPP_
#define ENTRAIN_SYNCHRONY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "entrain/prosody.hpp"
#include "entrain/sectioning.hpp"
#include "entrain/stats.hpp"

namespace entrain {

enum class SyncState { kSynchronous, kAntiSynchronous, kNeutral };

std::string_view SyncStateName(SyncState s);  // "sync" / "anti" / "neutral"

struct SyncThresholds {
  double rho_threshold = 0.5;
  double alpha = 0.05;

  void Validate() const;  // throws std::invalid_argument
};

// Client/therapist values of the section's usable pairs, in pair order.
struct PairedValues {
  std::vector<double> client;
  std::vector<double> therapist;
};

// `chopped` is the chopped turn list the section indexes into; each turn's
// `index` selects its row of `features`. Pairs with a missing value on
// either side are dropped.
PairedValues CollectPairs(const Section& section, std::span<const Turn> chopped,
                          std::span<const TurnProsody> features,
                          Feature feature);

// Spearman over the usable pairs; nullopt when the section is unanalyzable
// (fewer than 3 usable pairs, or one side constant).
std::optional<stats::CorrResult> SectionCorrelation(
    const Section& section, std::span<const Turn> chopped,
    std::span<const TurnProsody> features, Feature feature);

SyncState Classify(const stats::CorrResult& corr,
                   const SyncThresholds& thresholds = {});

struct StateRatios {
  double sync_ratio = 0.0;
  double anti_ratio = 0.0;
  std::size_t sync_pairs = 0;
  std::size_t anti_pairs = 0;
  std::size_t total_pairs = 0;
  // Pairs covered by both a synchronous and an anti-synchronous section;
  // they count towards both ratios.
  std::size_t conflicting_pairs = 0;
};

// Unions the turn pairs covered by sections in each state and divides by the
// chopped pair count L/2. `states` is parallel to `sections`.
StateRatios ComputeStateRatios(std::span<const Section> sections,
                               std::span<const SyncState> states,
                               std::size_t chopped_turns);

}  // namespace entrain

#endif  // ENTRAIN_SYNCHRONY_HPP_
