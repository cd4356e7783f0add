/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tiersim/trace.hpp"

namespace tiersim {

// Generator-defined hot set: the pages an ideal profiler should find.
struct GroundTruth {
    std::vector<PageId> hot_pages; // sorted ascending
    std::uint64_t k = 0;           // == hot_pages.size()
    std::uint64_t footprint_bytes = 0;

    bool contains(PageId p) const;
};

struct Workload {
    std::unique_ptr<TraceStream> trace;
    GroundTruth truth;
    // Record index where each batch starts, plus a final end sentinel.
    // Filled for batch-structured workloads (dlrm); empty otherwise.
    std::vector<std::uint64_t> batch_offsets;
};

// Skewed microbenchmark: a contiguous hot prefix of one allocation takes
// hot_access_fraction of the accesses, the cold remainder gets the rest;
// uniform within each region. Addresses are device-physical bytes in
// [0, total_bytes), aligned to access_align.
struct MmapBenchConfig {
    std::uint64_t total_bytes = 10ull << 30;
    std::uint64_t hot_bytes = 1ull << 30;
    double hot_access_fraction = 0.9;
    std::uint64_t n_accesses = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t tick_ns = 1;       // timestamp increment per access
    std::uint64_t access_align = 8;  // power of two, >= 2
    double write_fraction = 0.0;     // probability an access is a write
};

void validate(const MmapBenchConfig& cfg);

// Lazy stream; reset() replays identically. GroundTruth covers the pages
// of the hot prefix.
Workload gen_mmap_bench(const MmapBenchConfig& cfg,
                        std::uint64_t page_size = kDefaultPageSize);

// Sparse embedding-table lookups. Rows live contiguously from
// device-physical byte 0; row r occupies [r*row_bytes, (r+1)*row_bytes).
// Each batch performs lookups_per_batch independent row reads drawn from
// a finite-support power-law: row i (i < popular_rows) has weight
// (i+1)^-zipf_s, rows >= popular_rows are never drawn (popular_rows = 0
// means all rows are in support). Each row read emits one record per
// page the row spans. GroundTruth is the set of pages touched in the
// first profile_batches batches.
struct DlrmConfig {
    std::uint64_t num_rows = 32768;
    std::uint64_t row_bytes = 4096; // 1024-wide rows of 4-byte weights
    std::uint64_t batches = 20;
    std::uint64_t lookups_per_batch = 25000;
    double zipf_s = 0.6;
    std::uint64_t popular_rows = 4800;
    std::uint64_t profile_batches = 2;
    std::uint64_t seed = 42;
    std::uint64_t tick_ns = 1; // timestamp increment per *batch*
};

void validate(const DlrmConfig& cfg);

// Materialized trace (batch structure recorded in batch_offsets and in
// the timestamps: every record of batch b carries ts = b * tick_ns).
Workload gen_dlrm(const DlrmConfig& cfg, std::uint64_t page_size = kDefaultPageSize);

// Table footprint in bytes / pages.
std::uint64_t dlrm_table_bytes(const DlrmConfig& cfg);
std::uint64_t workload_total_pages(const MmapBenchConfig& cfg, std::uint64_t page_size);
std::uint64_t workload_total_pages(const DlrmConfig& cfg, std::uint64_t page_size);

} // namespace tiersim
