/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tiersim/address_space.hpp"
#include "tiersim/rng.hpp"
#include "tiersim/trace.hpp"

namespace tiersim {

// Ranked hot-page candidates. For counting trackers (hmu, pebs) `ranked`
// is strictly ordered by (count desc, page asc). Fault-driven trackers
// (nb) observe order, not frequency: their reports keep fault order with
// count = 1 per candidate and are exempt from the sort rule.
struct HotnessReport {
    std::vector<std::pair<PageId, std::uint64_t>> ranked;
    std::uint64_t total_observed = 0;
};

HotnessReport ranked_report(const std::unordered_map<PageId, std::uint64_t>& counts,
                            std::uint64_t total_observed);

// CSV form: header `page_id,count`, one row per ranked entry.
void write_report_csv(const std::filesystem::path& path, const HotnessReport& report);
HotnessReport read_report_csv(const std::filesystem::path& path);

// Device-side exact counting: every access in the monitored range bumps
// a per-physical-page counter, saturating at `ceiling`.
class HmuTracker {
public:
    struct Config {
        std::uint64_t ceiling = 0xFFFF'FFFFull;
        // Optional [lo, hi) physical byte window; nullopt = everything.
        std::optional<std::pair<std::uint64_t, std::uint64_t>> monitored_range;
        std::uint64_t page_size = kDefaultPageSize;
    };

    explicit HmuTracker(Config cfg);

    void observe(const AccessRecord& r);
    HotnessReport report() const;
    const std::unordered_map<PageId, std::uint64_t>& counters() const { return counters_; }
    std::uint64_t total_observed() const { return total_observed_; }

private:
    Config cfg_;
    std::unordered_map<PageId, std::uint64_t> counters_;
    std::uint64_t total_observed_ = 0;
};

// CPU-side sampling: observes record `index` iff index = phase (mod
// period), or with probability 1/period in random mode. Counts key on
// virtual pages, resolved through the capture-time reverse mapping.
class PebsSampler {
public:
    struct Config {
        std::uint64_t period = 4096;
        std::uint64_t phase = 0;
        bool random = false;  // seeded Bernoulli(1/period) instead of strided
        std::uint64_t seed = 0;
        std::uint64_t page_size = kDefaultPageSize;
    };

    explicit PebsSampler(Config cfg);

    void observe(std::uint64_t index, const AccessRecord& r, const CaptureMap& capture);
    HotnessReport report() const;
    const std::unordered_map<PageId, std::uint64_t>& counters() const { return counters_; }
    std::uint64_t samples_taken() const { return samples_; }

private:
    Config cfg_;
    Rng rng_;
    std::unordered_map<PageId, std::uint64_t> counters_;
    std::uint64_t samples_ = 0;
};

// Hint-fault scanning: after every scan_period-th access the next
// scan_window_pages virtual pages of the workload range are protected
// (round-robin); an access to a protected page clears the protection
// and records the page, once, in fault order. Scanning stops after
// `iterations` full passes over the range.
class NbScanner {
public:
    struct Config {
        std::uint64_t scan_period = 1000;
        std::uint64_t scan_window_pages = 256;
        std::uint64_t iterations = 2;
        std::uint64_t page_size = kDefaultPageSize;
    };

    NbScanner(Config cfg, VirtRange range);

    void observe(const AccessRecord& r, const CaptureMap& capture);
    HotnessReport report() const; // fault order, count = 1 each
    const std::vector<PageId>& faulted() const { return fault_order_; }
    std::uint64_t scans_fired() const { return scans_; }

private:
    void scan_step();

    Config cfg_;
    VirtRange range_;
    std::unordered_set<PageId> protected_;
    std::unordered_set<PageId> faulted_set_;
    std::vector<PageId> fault_order_;
    std::uint64_t cursor_ = 0; // offset of the next page to protect
    std::uint64_t passes_ = 0;
    std::uint64_t accesses_ = 0;
    std::uint64_t scans_ = 0;
};

} // namespace tiersim
