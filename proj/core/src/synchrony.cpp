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

#include "entrain/synchrony.hpp"

#include <algorithm>
#include <stdexcept>

#include "entrain/error.hpp"

namespace entrain {

std::string_view SyncStateName(SyncState s) {
  switch (s) {
    case SyncState::kSynchronous:
      return "sync";
    case SyncState::kAntiSynchronous:
      return "anti";
    case SyncState::kNeutral:
      return "neutral";
  }
  return "?";
}

void SyncThresholds::Validate() const {
  if (!(rho_threshold > 0.0 && rho_threshold <= 1.0)) {
    throw std::invalid_argument("rho threshold must lie in (0, 1]");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

PairedValues CollectPairs(const Section& section, std::span<const Turn> chopped,
                          std::span<const TurnProsody> features,
                          Feature feature) {
  if (section.offset + section.length > chopped.size()) {
    throw std::invalid_argument("section exceeds the chopped turn list");
  }
  PairedValues out;
  for (std::size_t k = section.offset; k + 1 < section.offset + section.length;
       k += 2) {
    const Turn& lead = chopped[k];
    const Turn& follow = chopped[k + 1];
    const auto& a = features[lead.index][feature];
    const auto& b = features[follow.index][feature];
    if (!a || !b) continue;
    if (lead.speaker == Speaker::kClient) {
      out.client.push_back(*a);
      out.therapist.push_back(*b);
    } else {
      out.client.push_back(*b);
      out.therapist.push_back(*a);
    }
  }
  return out;
}

std::optional<stats::CorrResult> SectionCorrelation(
    const Section& section, std::span<const Turn> chopped,
    std::span<const TurnProsody> features, Feature feature) {
  const PairedValues pairs = CollectPairs(section, chopped, features, feature);
  if (pairs.client.size() < 3) return std::nullopt;
  try {
    return stats::Spearman(pairs.client, pairs.therapist);
  } catch (const UndefinedCorrelationError&) {
    return std::nullopt;
  }
}

SyncState Classify(const stats::CorrResult& corr,
                   const SyncThresholds& thresholds) {
  if (corr.p < thresholds.alpha) {
    if (corr.r >= thresholds.rho_threshold) return SyncState::kSynchronous;
    if (corr.r <= -thresholds.rho_threshold) return SyncState::kAntiSynchronous;
  }
  return SyncState::kNeutral;
}

StateRatios ComputeStateRatios(std::span<const Section> sections,
                               std::span<const SyncState> states,
                               std::size_t chopped_turns) {
  if (sections.size() != states.size()) {
    throw std::invalid_argument("one state per section required");
  }
  StateRatios out;
  out.total_pairs = chopped_turns / 2;
  if (out.total_pairs == 0) return out;
  std::vector<bool> sync(out.total_pairs, false);
  std::vector<bool> anti(out.total_pairs, false);
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (states[i] == SyncState::kNeutral) continue;
    auto& cover = states[i] == SyncState::kSynchronous ? sync : anti;
    const std::size_t first = sections[i].first_pair();
    const std::size_t last =
        std::min(out.total_pairs, first + sections[i].pair_count());
    for (std::size_t p = first; p < last; ++p) cover[p] = true;
  }
  for (std::size_t p = 0; p < out.total_pairs; ++p) {
    out.sync_pairs += sync[p];
    out.anti_pairs += anti[p];
    out.conflicting_pairs += sync[p] && anti[p];
  }
  const auto total = static_cast<double>(out.total_pairs);
  out.sync_ratio = static_cast<double>(out.sync_pairs) / total;
  out.anti_ratio = static_cast<double>(out.anti_pairs) / total;
  return out;
}

}  // namespace entrain
