/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

// Microbenchmarks for the hot paths: log codec encode/decode, tracker
// observe loops, and workload generation. Throughput is reported in
// records per second via the items counter.

#include <benchmark/benchmark.h>

#include <sstream>
#include <vector>

#include "tiersim/log_codec.hpp"
#include "tiersim/telemetry.hpp"
#include "tiersim/workload.hpp"

namespace {

using namespace tiersim;

MmapBenchConfig bench_cfg(std::uint64_t n) {
    MmapBenchConfig cfg;
    cfg.total_bytes = 10ull << 20;
    cfg.hot_bytes = 1ull << 20;
    cfg.hot_access_fraction = 0.9;
    cfg.n_accesses = n;
    cfg.seed = 42;
    return cfg;
}

std::vector<AccessRecord> bench_records(std::uint64_t n) {
    Workload w = gen_mmap_bench(bench_cfg(n));
    return materialize(*w.trace);
}

void bm_gen_mmap(benchmark::State& state) {
    auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        Workload w = gen_mmap_bench(bench_cfg(n));
        AccessRecord r;
        std::uint64_t sink = 0;
        while (w.trace->next(r)) sink += r.phys_addr;
        benchmark::DoNotOptimize(sink);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(bm_gen_mmap)->Arg(100000);

void bm_encode(benchmark::State& state, LogEncoding enc) {
    auto recs = bench_records(static_cast<std::uint64_t>(state.range(0)));
    VectorTrace t(recs);
    for (auto _ : state) {
        auto bytes = encode_log_bytes(t, enc);
        benchmark::DoNotOptimize(bytes.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(recs.size()));
}
BENCHMARK_CAPTURE(bm_encode, raw16, LogEncoding::Raw16)->Arg(100000);
BENCHMARK_CAPTURE(bm_encode, varlen, LogEncoding::Varlen)->Arg(100000);

void bm_decode(benchmark::State& state, LogEncoding enc) {
    auto recs = bench_records(static_cast<std::uint64_t>(state.range(0)));
    VectorTrace t(recs);
    auto bytes = encode_log_bytes(t, enc);
    for (auto _ : state) {
        auto reader = decode_log_bytes(bytes);
        AccessRecord r;
        std::uint64_t sink = 0;
        while (reader->next(r)) sink += r.timestamp_ns;
        benchmark::DoNotOptimize(sink);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(recs.size()));
}
BENCHMARK_CAPTURE(bm_decode, raw16, LogEncoding::Raw16)->Arg(100000);
BENCHMARK_CAPTURE(bm_decode, varlen, LogEncoding::Varlen)->Arg(100000);

void bm_hmu_observe(benchmark::State& state) {
    auto recs = bench_records(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        HmuTracker t({});
        for (const AccessRecord& r : recs) t.observe(r);
        benchmark::DoNotOptimize(t.total_observed());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(recs.size()));
}
BENCHMARK(bm_hmu_observe)->Arg(100000);

void bm_pebs_observe(benchmark::State& state) {
    auto recs = bench_records(static_cast<std::uint64_t>(state.range(0)));
    CaptureMap pass = CaptureMap::passthrough();
    for (auto _ : state) {
        PebsSampler t({.period = 4096});
        std::uint64_t i = 0;
        for (const AccessRecord& r : recs) t.observe(i++, r, pass);
        benchmark::DoNotOptimize(t.samples_taken());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(recs.size()));
}
BENCHMARK(bm_pebs_observe)->Arg(100000);

void bm_nb_observe(benchmark::State& state) {
    auto recs = bench_records(static_cast<std::uint64_t>(state.range(0)));
    CaptureMap pass = CaptureMap::passthrough();
    for (auto _ : state) {
        NbScanner t({.scan_period = 1000, .scan_window_pages = 2560, .iterations = 2},
                    VirtRange{0, 2560});
        for (const AccessRecord& r : recs) t.observe(r, pass);
        benchmark::DoNotOptimize(t.scans_fired());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(recs.size()));
}
BENCHMARK(bm_nb_observe)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
