#include "bitsync/bitseq.hpp"
#include "bitsync/edit.hpp"
#include "bitsync/hashing.hpp"
#include "bitsync/protocol.hpp"
#include "bitsync/rng.hpp"
#include "bitsync/single_round.hpp"
#include "bitsync/transport.hpp"
#include "bitsync/vt.hpp"

#include <benchmark/benchmark.h>

using namespace bitsync;

static void BM_VtDecodeDeletion(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    BitSeq x = BitSeq::random(n, 1);
    VtSyndrome s = vt_syndrome(x);
    EditScript del{{{EditKind::Delete, n / 3, false, {}, 0}}};
    BitSeq y = apply(x, del);
    for (auto _ : state)
        benchmark::DoNotOptimize(decode_deletion(y, n, s));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_VtDecodeDeletion)->Arg(1000)->Arg(100000);

static void BM_H3Hash(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    BitSeq x = BitSeq::random(n, 2);
    HashSpec spec;
    spec.m_h = 40;
    for (auto _ : state)
        benchmark::DoNotOptimize(h3_hash(x, spec, {0, n}));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n / 8));
}
BENCHMARK(BM_H3Hash)->Arg(1000)->Arg(100000);

static void BM_Sketch(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    BitSeq x = BitSeq::random(n, 3);
    HashSpec spec;
    spec.mode = HashMode::distance_sketch;
    spec.m_h = 40;
    spec.kappa_s = 50;
    for (auto _ : state)
        benchmark::DoNotOptimize(sketch(x, spec, {0, n}));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n / 8));
}
BENCHMARK(BM_Sketch)->Arg(100000);

static void BM_FrameRoundTrip(benchmark::State& state) {
    Frame f{7, {}};
    SplitMix rng(4);
    for (int k = 0; k < 16; ++k)
        f.messages.push_back(
            make_message(Tag::Hash, static_cast<std::uint64_t>(k), BitSeq::random(40, rng.next())));
    for (auto _ : state) {
        auto bytes = encode_frame(f);
        benchmark::DoNotOptimize(decode_frame(bytes));
    }
}
BENCHMARK(BM_FrameRoundTrip);

static void BM_RunSyncInteractive(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t t = static_cast<std::size_t>(state.range(1));
    SplitMix rng(5);
    BitSeq x = BitSeq::random(n, rng.next());
    BitSeq y = apply(x, random_script(n, t / 2, t / 2, 0, {}, rng.next()));
    SyncParams p;
    p.m_a = 20;
    p.m_h = 20;
    p.hash.seed = 9;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sync(x, y, p));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n / 8));
}
BENCHMARK(BM_RunSyncInteractive)->Args({100000, 10})->Args({1000000, 100});

static void BM_RunSingleRound(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    SplitMix rng(6);
    BitSeq x = BitSeq::random(n, rng.next());
    BitSeq y = apply(x, random_script(n, 25, 25, 0, {}, rng.next()));
    PiecePlan plan;
    plan.piece_len = 1000;
    plan.m_a = 20;
    plan.m_h = 20;
    plan.hash.seed = 9;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_single_round(x, y, plan));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n / 8));
}
BENCHMARK(BM_RunSingleRound)->Arg(1000000);

BENCHMARK_MAIN();
