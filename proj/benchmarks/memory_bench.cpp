// Copyright 2026 The TopoClaw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "topoclaw/memory.hpp"

namespace topoclaw {
namespace {

std::vector<Observation> sample_log(std::size_t n) {
  std::vector<Observation> log;
  for (std::size_t i = 0; i < n; ++i) {
    Observation o;
    o.kind = i % 3 == 0 ? ObservationKind::user_msg : ObservationKind::action_result;
    o.timestamp = static_cast<std::int64_t>(i) * 1000;
    o.content = "observation " + std::to_string(i);
    if (i % 7 == 0) o.remember_directive = "prefs.k" + std::to_string(i % 20) + ": v" + std::to_string(i);
    log.push_back(o);
  }
  return log;
}

void BM_Replay(benchmark::State& state) {
  auto log = sample_log(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(replay(log, 32));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Replay)->Range(64, 16 << 10);

void BM_SerializeLog(benchmark::State& state) {
  auto log = sample_log(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serialize_log(log));
}
BENCHMARK(BM_SerializeLog)->Range(64, 16 << 10);

void BM_ParseLog(benchmark::State& state) {
  auto text = serialize_log(sample_log(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(parse_log(text));
}
BENCHMARK(BM_ParseLog)->Range(64, 16 << 10);

}  // namespace
}  // namespace topoclaw

BENCHMARK_MAIN();
