/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/address_space.hpp"

#include <string>
#include <unordered_set>

#include "tiersim/error.hpp"

namespace tiersim {

const char* tier_name(TierId t) noexcept {
    return t == TierId::HostDram ? "HostDram" : "CxlMem";
}

TierSpec default_dram() { return {TierId::HostDram, 16'777'216, 100, 100}; }
TierSpec default_cxl() { return {TierId::CxlMem, 67'108'864, 350, 350}; }

PageId PageTable::Tier::take_frame() {
    if (!released.empty()) {
        PageId f = released.top();
        released.pop();
        if (f < watermark) return f;
        // A released frame at/above the watermark can't happen; frames
        // only enter `released` after being handed out below it.
        throw LookupError("free-list corruption in tier " + std::string(tier_name(spec.id)));
    }
    return watermark++;
}

void PageTable::Tier::release_frame(PageId f) { released.push(f); }

PageTable::PageTable(TierSpec dram, TierSpec cxl, std::uint64_t page_size)
    : page_size_(page_size) {
    if (!valid_page_size(page_size)) throw ConfigError("invalid page_size");
    if (dram.id != TierId::HostDram || cxl.id != TierId::CxlMem)
        throw ConfigError("tier specs passed in the wrong slots");
    if (dram.read_latency_ns == 0 || dram.write_latency_ns == 0 || cxl.read_latency_ns == 0 ||
        cxl.write_latency_ns == 0)
        throw ConfigError("tier latencies must be positive");
    tiers_[0].spec = dram;
    tiers_[1].spec = cxl;
}

PageTable::Tier& PageTable::tier(TierId id) { return tiers_[static_cast<int>(id)]; }
const PageTable::Tier& PageTable::tier(TierId id) const { return tiers_[static_cast<int>(id)]; }

void PageTable::debug_check() const {
#ifndef NDEBUG
    check_invariants();
#endif
}

VirtRange PageTable::alloc(std::uint64_t n_pages, TierId tid) {
    Tier& t = tier(tid);
    std::uint64_t free = t.spec.capacity_pages - t.used();
    if (n_pages > free) throw CapacityError("alloc on " + std::string(tier_name(tid)), n_pages, free);
    VirtRange range{next_vpage_, n_pages};
    for (std::uint64_t i = 0; i < n_pages; ++i) {
        PageId v = next_vpage_++;
        PageId f = t.take_frame();
        forward_.emplace(v, Placement{tid, f});
        t.reverse.emplace(f, v);
    }
    debug_check();
    return range;
}

MigrationStats PageTable::migrate(std::span<const PageId> pages, TierId dst,
                                  std::uint64_t per_page_cost_ns) {
    Tier& d = tier(dst);
    std::vector<PageId> movers;
    movers.reserve(pages.size());
    std::unordered_set<PageId> seen;
    seen.reserve(pages.size());
    for (PageId v : pages) {
        if (!seen.insert(v).second) continue;
        auto it = forward_.find(v);
        if (it == forward_.end())
            throw LookupError("migrate: virtual page " + std::to_string(v) + " is not mapped");
        if (it->second.tier != dst) movers.push_back(v);
    }
    std::uint64_t free = d.spec.capacity_pages - d.used();
    if (movers.size() > free)
        throw CapacityError("migrate to " + std::string(tier_name(dst)), movers.size(), free);

    for (PageId v : movers) {
        Placement& pl = forward_[v];
        Tier& s = tier(pl.tier);
        s.reverse.erase(pl.frame);
        s.release_frame(pl.frame);
        PageId nf = d.take_frame();
        d.reverse.emplace(nf, v);
        pl = Placement{dst, nf};
    }
    debug_check();
    MigrationStats st;
    st.pages_moved = movers.size();
    st.bytes_moved = st.pages_moved * page_size_;
    st.per_page_cost_ns = per_page_cost_ns;
    return st;
}

Placement PageTable::lookup(PageId vpage) const {
    auto it = forward_.find(vpage);
    if (it == forward_.end())
        throw LookupError("virtual page " + std::to_string(vpage) + " is not mapped");
    return it->second;
}

std::optional<Placement> PageTable::find(PageId vpage) const noexcept {
    auto it = forward_.find(vpage);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
}

PageId PageTable::reverse_map(TierId tid, PageId frame) const {
    auto& rev = tier(tid).reverse;
    auto it = rev.find(frame);
    if (it == rev.end())
        throw LookupError("frame " + std::to_string(frame) + " on " + tier_name(tid) +
                          " is not mapped");
    return it->second;
}

std::optional<PageId> PageTable::find_reverse(TierId tid, PageId frame) const noexcept {
    auto& rev = tier(tid).reverse;
    auto it = rev.find(frame);
    if (it == rev.end()) return std::nullopt;
    return it->second;
}

std::uint64_t PageTable::used_pages(TierId tid) const noexcept { return tier(tid).used(); }

std::uint64_t PageTable::free_pages(TierId tid) const noexcept {
    const Tier& t = tier(tid);
    return t.spec.capacity_pages - t.used();
}

std::uint64_t PageTable::capacity_pages(TierId tid) const noexcept {
    return tier(tid).spec.capacity_pages;
}

const TierSpec& PageTable::spec(TierId tid) const noexcept { return tier(tid).spec; }

void PageTable::check_invariants() const {
    std::uint64_t reverse_total = 0;
    for (const Tier& t : tiers_) {
        reverse_total += t.reverse.size();
        if (t.used() != t.reverse.size())
            throw LookupError("tier accounting mismatch on " + std::string(tier_name(t.spec.id)));
        if (t.used() > t.spec.capacity_pages)
            throw LookupError("tier over capacity: " + std::string(tier_name(t.spec.id)));
    }
    if (reverse_total != forward_.size())
        throw LookupError("forward/reverse size mismatch");
    for (const auto& [v, pl] : forward_) {
        const Tier& t = tier(pl.tier);
        auto it = t.reverse.find(pl.frame);
        if (it == t.reverse.end() || it->second != v)
            throw LookupError("forward/reverse disagree on virtual page " + std::to_string(v));
    }
}

CaptureMap CaptureMap::capture(const PageTable& pt, VirtRange range) {
    CaptureMap m;
    m.frame_to_virt_.reserve(range.count);
    for (std::uint64_t i = 0; i < range.count; ++i) {
        PageId v = range.first + i;
        Placement pl = pt.lookup(v);
        if (!m.frame_to_virt_.emplace(pl.frame, v).second)
            throw LookupError("capture: frame " + std::to_string(pl.frame) +
                              " appears on both tiers; capture before migrating");
    }
    return m;
}

CaptureMap CaptureMap::identity(std::uint64_t n_pages) {
    CaptureMap m;
    m.frame_to_virt_.reserve(n_pages);
    for (PageId i = 0; i < n_pages; ++i) m.frame_to_virt_.emplace(i, i);
    return m;
}

CaptureMap CaptureMap::passthrough() {
    CaptureMap m;
    m.passthrough_ = true;
    return m;
}

PageId CaptureMap::virtual_of(PageId frame) const {
    if (passthrough_) return frame;
    auto it = frame_to_virt_.find(frame);
    if (it == frame_to_virt_.end())
        throw LookupError("frame " + std::to_string(frame) + " was not captured");
    return it->second;
}

std::optional<PageId> CaptureMap::find(PageId frame) const noexcept {
    if (passthrough_) return frame;
    auto it = frame_to_virt_.find(frame);
    if (it == frame_to_virt_.end()) return std::nullopt;
    return it->second;
}

} // namespace tiersim
