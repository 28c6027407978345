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

// Subcommands of the `entrain` tool. Each returns a process exit code:
// 0 success, 1 usage or fatal error, 2 partial per-conversation failure.

#ifndef ENTRAIN_CLI_COMMANDS_HPP_
#define ENTRAIN_CLI_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entrain/analysis.hpp"
#include "entrain/prosody.hpp"

namespace entrain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

enum class OutputFormat { kJson, kCsv, kAll };

struct ExtractOptions {
  std::filesystem::path corpus;
  ProsodyConfig prosody;
  int jobs = 1;
};

struct AnalyzeOptions {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> ratings;  // default <corpus>/ratings.csv
  std::filesystem::path out = "entrain_out";
  AnalysisConfig analysis;
  ProsodyConfig prosody;
  OutputFormat format = OutputFormat::kAll;
  int jobs = 1;
};

struct SynthOptions {
  std::filesystem::path spec;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;  // overrides the spec's seed
};

// Conversation folders directly under `corpus`, sorted by name. Hidden
// folders and `exclude` (if it lies inside the corpus) are skipped.
std::vector<std::filesystem::path> ListConversationDirs(
    const std::filesystem::path& corpus,
    const std::filesystem::path& exclude = {});

int RunExtract(const ExtractOptions& options, std::ostream& out,
               std::ostream& err);
int RunAnalyze(const AnalyzeOptions& options, std::ostream& out,
               std::ostream& err);
int RunSynth(const SynthOptions& options, std::ostream& out,
             std::ostream& err);

// Parses argv and dispatches.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace entrain::cli

#endif  // ENTRAIN_CLI_COMMANDS_HPP_
