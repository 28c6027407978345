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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "entrain/analysis.hpp"
#include "entrain/prosody.hpp"
#include "entrain/stats.hpp"
#include "entrain/synth.hpp"

namespace entrain {
namespace {

void BM_FramePitch(benchmark::State& state) {
  const int rate = static_cast<int>(state.range(0));
  std::vector<float> tone(static_cast<std::size_t>(rate));
  for (std::size_t i = 0; i < tone.size(); ++i) {
    tone[i] = static_cast<float>(0.5 * std::sin(2.0 * std::numbers::pi * 180.0 * i / rate));
  }
  for (auto _ : state) benchmark::DoNotOptimize(FramePitch(tone, rate));
  state.SetLabel("1 s of audio");
}
BENCHMARK(BM_FramePitch)->Arg(8000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_Spearman(benchmark::State& state) {
  synth::Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.Normal();
    y[i] = x[i] + rng.Normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::Spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(10)->Arg(25)->Arg(200);

void BM_FullAnalysis(benchmark::State& state) {
  synth::CorpusSpec spec;
  spec.conversations = static_cast<int>(state.range(0));
  spec.coupling.noise_sd.fill(1.0);
  const auto corpus = synth::GenerateCorpus(spec);
  std::vector<PreparedConversation> prepared;
  for (const auto& d : corpus.dyads) {
    prepared.push_back({d.conversation,
                        {d.features, NormalizeSpeaker(d.features, d.conversation)}});
  }
  const AnalysisConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunFullAnalysis(prepared, corpus.ratings, config));
  }
}
BENCHMARK(BM_FullAnalysis)->Arg(20)->Arg(155)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace entrain

BENCHMARK_MAIN();
