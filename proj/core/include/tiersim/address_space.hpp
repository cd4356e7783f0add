/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tiersim/trace.hpp"

namespace tiersim {

enum class TierId : std::uint8_t { HostDram = 0, CxlMem = 1 };

const char* tier_name(TierId t) noexcept;

struct TierSpec {
    TierId id = TierId::HostDram;
    std::uint64_t capacity_pages = 0;
    std::uint64_t read_latency_ns = 100;
    std::uint64_t write_latency_ns = 100;
};

// Simulator defaults: host DRAM at 100 ns, expansion memory at 350 ns
// (a typical 2-4x spread), 64 GiB / 256 GiB of 4 KiB pages.
TierSpec default_dram();
TierSpec default_cxl();

struct Placement {
    TierId tier = TierId::HostDram;
    PageId frame = 0;
};

struct VirtRange {
    PageId first = 0;
    std::uint64_t count = 0;
};

struct MigrationStats {
    std::uint64_t pages_moved = 0;
    std::uint64_t bytes_moved = 0;
    std::uint64_t per_page_cost_ns = 0;

    std::uint64_t total_cost_ns() const { return pages_moved * per_page_cost_ns; }
};

// Two-tier page table with reverse mapping. Frames are handed out
// lowest-free-first for determinism; virtual page numbers are never
// reused. Forward and reverse maps stay mutual inverses; in debug
// builds this is re-checked after every mutation.
class PageTable {
public:
    PageTable(TierSpec dram, TierSpec cxl, std::uint64_t page_size = kDefaultPageSize);

    // Maps a fresh contiguous virtual range onto `n_pages` frames of
    // `tier`. Throws CapacityError on shortfall.
    VirtRange alloc(std::uint64_t n_pages, TierId tier);

    // Moves every not-yet-resident page of `pages` to `dst`; duplicate
    // and already-resident entries are skipped. All-or-nothing: throws
    // CapacityError (naming how many fit) before touching anything if
    // the movers don't fit. Throws LookupError on an unmapped page.
    MigrationStats migrate(std::span<const PageId> pages, TierId dst,
                           std::uint64_t per_page_cost_ns);

    Placement lookup(PageId vpage) const;                 // throws LookupError
    std::optional<Placement> find(PageId vpage) const noexcept;
    PageId reverse_map(TierId tier, PageId frame) const;  // throws LookupError
    std::optional<PageId> find_reverse(TierId tier, PageId frame) const noexcept;

    std::uint64_t used_pages(TierId tier) const noexcept;
    std::uint64_t free_pages(TierId tier) const noexcept;
    std::uint64_t capacity_pages(TierId tier) const noexcept;
    std::uint64_t mapped_pages() const noexcept { return forward_.size(); }
    std::uint64_t page_size() const noexcept { return page_size_; }
    const TierSpec& spec(TierId tier) const noexcept;

    // Bijection + capacity conservation; throws LookupError on breakage.
    void check_invariants() const;

private:
    struct Tier {
        TierSpec spec;
        // Lowest-free-first without materializing the whole free list:
        // frames below `watermark` are in use unless in `released`.
        std::uint64_t watermark = 0;
        std::priority_queue<PageId, std::vector<PageId>, std::greater<>> released;
        std::unordered_map<PageId, PageId> reverse; // frame -> vpage

        std::uint64_t used() const { return watermark - released.size(); }
        PageId take_frame();
        void release_frame(PageId f);
    };

    Tier& tier(TierId id);
    const Tier& tier(TierId id) const;
    void debug_check() const;

    std::uint64_t page_size_;
    Tier tiers_[2];
    std::unordered_map<PageId, Placement> forward_; // vpage -> placement
    PageId next_vpage_ = 0;
};

// Frame-index -> virtual-page snapshot taken when a workload's range is
// allocated. Traces carry the device-physical addresses observed at
// capture time; after promotion those frames may be freed, so
// measurement translates through this snapshot instead of the live
// reverse map.
class CaptureMap {
public:
    CaptureMap() = default;

    // Snapshots frame -> vpage for every page of `range` (whatever tier
    // each page currently sits on).
    static CaptureMap capture(const PageTable& pt, VirtRange range);
    // frame i -> vpage i for i in [0, n); handy for tests.
    static CaptureMap identity(std::uint64_t n_pages);
    // frame f -> vpage f for every f; for tracking bare traces with no
    // page table behind them.
    static CaptureMap passthrough();

    PageId virtual_of(PageId frame) const; // throws LookupError
    std::optional<PageId> find(PageId frame) const noexcept;
    std::size_t size() const noexcept { return frame_to_virt_.size(); }

private:
    bool passthrough_ = false;
    std::unordered_map<PageId, PageId> frame_to_virt_;
};

} // namespace tiersim
