/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "tiersim/address_space.hpp"
#include "tiersim/telemetry.hpp"
#include "tiersim/trace.hpp"

namespace tiersim {

// Serialized-access model: each access costs its tier's read/write
// latency, nothing overlaps. Ratios under this model preserve placement
// ordering, which is all the reported comparisons use.
struct LatencyModel {
    TierSpec dram = default_dram();
    TierSpec cxl = default_cxl();

    std::uint64_t latency_ns(TierId tier, Op op) const noexcept {
        const TierSpec& s = tier == TierId::HostDram ? dram : cxl;
        return op == Op::Read ? s.read_latency_ns : s.write_latency_ns;
    }
};

struct MeasureResult {
    std::uint64_t n = 0;
    std::uint64_t total_time_ns = 0;
    double avg_latency_ns = 0.0;
    double throughput_per_s = 0.0; // accesses per second
};

// Replays `segment` against the current placement: each record's frame
// index is translated through `capture` to a virtual page, the page
// table gives its tier, and the model prices the access. Throws
// MeasureError on an untranslatable/unmapped page, or on an empty
// segment unless allow_empty.
MeasureResult measure(std::span<const AccessRecord> segment, const PageTable& pt,
                      const CaptureMap& capture, const LatencyModel& model,
                      bool allow_empty = false);

// Cumulative access share over pages ranked hottest-first. points[i] =
// ((i+1)/n_pages, share of accesses held by the i+1 hottest pages);
// both coordinates climb to exactly (1, 1). Covers accessed pages only.
struct HotnessCdf {
    std::vector<std::pair<double, double>> points;

    // Access share of the hottest floor(f * n_pages) pages.
    double value_at(double page_fraction) const;
};

HotnessCdf hotness_cdf(const HotnessReport& report); // throws TelemetryError if empty

// CSV form: header `page_fraction,access_fraction`.
void write_cdf_csv(const std::filesystem::path& path, const HotnessCdf& cdf);

// How many times faster the new time is: t_base / t_new.
double speedup(double t_base, double t_new); // throws MeasureError on non-positive input

} // namespace tiersim
