/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tiersim/address_space.hpp"
#include "tiersim/telemetry.hpp"
#include "tiersim/workload.hpp"

namespace tiersim {

struct PromotionPlan {
    std::vector<PageId> pages; // rank order, no duplicates
    std::uint64_t k_budget = 0;

    std::uint64_t footprint_bytes(std::uint64_t page_size) const {
        return pages.size() * page_size;
    }
};

// First min(k, |ranked|) pages of the report, in rank order.
PromotionPlan plan_top_k(const HotnessReport& report, std::uint64_t k);

enum class TrackerKind { None, Hmu, Pebs, Nb };
enum class WorkloadKind { MmapBench, Dlrm };

const char* tracker_name(TrackerKind t) noexcept;
const char* workload_name(WorkloadKind w) noexcept;
TrackerKind tracker_from_name(const std::string& name); // throws ConfigError
WorkloadKind workload_from_name(const std::string& name); // throws ConfigError

// Known baseline placements for speedup reporting:
//   dram-only     whole workload resident in host DRAM, no profiling
//   no-promotion  whole workload left on the expansion tier
//   hmu           full pipeline with the exact-count tracker, same budget
extern const char* const kBaselineDramOnly;
extern const char* const kBaselineNoPromotion;
extern const char* const kBaselineHmu;

struct TrackerParams {
    HmuTracker::Config hmu;
    PebsSampler::Config pebs;
    NbScanner::Config nb;
};

struct ExperimentConfig {
    WorkloadKind workload = WorkloadKind::MmapBench;
    MmapBenchConfig mmap;
    DlrmConfig dlrm;

    TrackerKind tracker = TrackerKind::Hmu;
    TrackerParams params;

    // nullopt = promote up to the generator ground-truth K.
    std::optional<std::uint64_t> k_budget;
    double warmup_fraction = 0.1; // leading fraction of the trace used to profile

    TierSpec dram = default_dram();
    TierSpec cxl = default_cxl();
    std::uint64_t per_page_migration_ns = 2000;
    bool include_migration = false; // fold migration cost into reported time
    std::uint64_t page_size = kDefaultPageSize;

    // Places the whole workload in host DRAM and skips profiling and
    // promotion; produces the all-DRAM reference row.
    bool dram_only = false;

    std::vector<std::string> baselines; // names above, each run for speedup_vs
};

void validate(const ExperimentConfig& cfg);

struct ExperimentResult {
    std::string workload;
    std::string tracker;
    std::string placement; // "tiered" or "dram-only"
    std::uint64_t page_size = 0;
    std::uint64_t seed = 0;
    std::uint64_t fingerprint = 0; // trace identity for comparisons

    std::uint64_t n_records = 0;
    std::uint64_t n_warmup = 0;
    std::uint64_t n_measured = 0;
    std::uint64_t total_pages = 0;
    std::uint64_t ground_truth_k = 0;
    std::uint64_t k_budget = 0;

    std::uint64_t plan_pages = 0;
    std::uint64_t pages_promoted = 0;
    std::uint64_t top_tier_footprint_bytes = 0; // promoted pages
    std::uint64_t resident_top_tier_pages = 0;  // end of run

    // candidate set judged against the exact-count top-K reference
    // (accuracy = |plan & ref| / |plan|, coverage = |plan & ref| / k)
    // and against the generator ground truth (_gt variants).
    double accuracy = 0.0;
    double coverage = 0.0;
    double accuracy_gt = 0.0;
    double coverage_gt = 0.0;

    MigrationStats migration;
    std::uint64_t migration_cost_ns = 0;
    std::uint64_t measured_time_ns = 0; // post-warmup replay, migration excluded
    std::uint64_t total_time_ns = 0;    // + migration cost when include_migration
    double avg_access_latency_ns = 0.0;
    double throughput_accesses_per_s = 0.0;
    bool include_migration = false;

    // speedup_vs[name] = t_name / t_this (> 1 means this run is faster).
    std::map<std::string, double> speedup_vs;
};

// Promotion pipeline: allocate on the expansion tier, profile the
// warm-up segment with the configured tracker, promote the top-k plan,
// then replay the remainder under the latency model. Baselines rerun
// the same trace with alternate placements. Deterministic for a fixed
// config. Throws CapacityError if the plan exceeds top-tier room.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Comparison table over results that share a trace fingerprint.
struct CompareRow {
    std::string name;
    std::uint64_t fingerprint = 0;
    std::uint64_t total_time_ns = 0;
    double avg_latency_ns = 0.0;
    std::uint64_t pages_promoted = 0;
    std::uint64_t footprint_bytes = 0;
};

struct ComparedRow {
    CompareRow row;
    double speedup_vs_baseline = 0.0;
};

struct Comparison {
    std::string baseline;
    std::vector<ComparedRow> rows;
};

CompareRow to_compare_row(const ExperimentResult& r, const std::string& name);

// Throws CompareError on a fingerprint mismatch or unknown baseline.
Comparison compare(std::span<const CompareRow> rows, const std::string& baseline_name);

} // namespace tiersim
