#include <benchmark/benchmark.h>

#include <filesystem>
#include <map>
#include <string>

#include "pushpull/insert_build.hpp"
#include "pushpull/interpreter.hpp"
#include "pushpull/primitives.hpp"
#include "pushpull/solomon.hpp"
#include "pushpull/term.hpp"

using namespace pushpull;

namespace {

const Instance& instance(const char* id) {
    static std::map<std::string, Instance> cache;
    auto it = cache.find(id);
    if (it == cache.end()) {
        const auto path = std::filesystem::path(PUSHPULL_BENCH_DATA_DIR) / "solomon" / (std::string(id) + ".txt");
        it = cache.emplace(id, load_solomon(path)).first;
    }
    return it->second;
}

// Push of the last customer into an otherwise complete INSERT(0) build.
void BM_Push(benchmark::State& state) {
    const auto& inst = instance("R101");
    EvalContext ctx(1);
    Solution full = insert_build(inst, ctx, 0);
    const int c = inst.customers();
    pull(full, c);
    for (auto _ : state) {
        Solution s = full;
        benchmark::DoNotOptimize(push(s, c, ctx));
    }
}
BENCHMARK(BM_Push);

void BM_InsertBuild(benchmark::State& state) {
    const auto& inst = instance("R105");
    const int level = static_cast<int>(state.range(0));
    std::uint64_t insertions = 0;
    for (auto _ : state) {
        EvalContext ctx(1);
        benchmark::DoNotOptimize(insert_build(inst, ctx, level));
        insertions += ctx.insertions;
    }
    state.counters["insertions/s"] = benchmark::Counter(static_cast<double>(insertions), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_InsertBuild)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_Term(benchmark::State& state, const char* text) {
    const auto& inst = instance("R109");
    const auto t = parse_term(text);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        EvalContext ctx(++seed);
        benchmark::DoNotOptimize(pushpull::run(*t, inst, ctx));
    }
}
BENCHMARK_CAPTURE(BM_Term, lds, "LDS(3,3,100)")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Term, insert_chain, "DO(INSERT(3),CHAIN(90,2))")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Term, lds_lns, "DO(LDS(3,3,100),LOOP(8,LNS(10,4,LDS(4,4,1000))))")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
