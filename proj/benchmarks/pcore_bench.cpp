/* Copyright 2026 The pcore Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"
#include "pcore/soundness.hpp"
#include "pcore/stf.hpp"
#include "pcore/typecheck.hpp"

using namespace pcore;

namespace {

std::string fixture(const std::string &name) {
    std::ifstream in(std::string(PCORE_FIXTURE_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void BM_Parse(benchmark::State &state) {
    std::string text = fixture("source_routing.pcore");
    for (auto _ : state) benchmark::DoNotOptimize(parse_program(text));
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(text.size()));
}
BENCHMARK(BM_Parse);

void BM_Typecheck(benchmark::State &state) {
    Program p = parse_program(fixture("source_routing.pcore"));
    Contexts init = three_stage_lite_bootstrap().contexts;
    for (auto _ : state) benchmark::DoNotOptimize(check_program(p, init));
}
BENCHMARK(BM_Typecheck);

void BM_StfSourceRouting(benchmark::State &state) {
    Program p = parse_program(fixture("source_routing.pcore"));
    StfScript s = parse_stf(fixture("source_routing.stf"));
    for (auto _ : state) benchmark::DoNotOptimize(run_stf(p, s));
}
BENCHMARK(BM_StfSourceRouting);

void BM_Generate(benchmark::State &state) {
    GenConfig cfg;
    cfg.maxDepth = int(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_typed_program(cfg));
        ++cfg.seed;
    }
}
BENCHMARK(BM_Generate)->Arg(3)->Arg(5);

void BM_SoundnessProgram(benchmark::State &state) {
    GenConfig cfg;
    cfg.unions = true;
    for (auto _ : state) {
        state.PauseTiming();
        Program p = generate_typed_program(cfg);
        ++cfg.seed;
        state.ResumeTiming();
        benchmark::DoNotOptimize(check_soundness(p));
    }
}
BENCHMARK(BM_SoundnessProgram);

}  // namespace
BENCHMARK_MAIN();
