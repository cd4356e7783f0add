/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "tiersim/address_space.hpp"
#include "tiersim/error.hpp"

using namespace tiersim;

namespace {

TierSpec small_dram(std::uint64_t cap) { return {TierId::HostDram, cap, 100, 100}; }
TierSpec small_cxl(std::uint64_t cap) { return {TierId::CxlMem, cap, 350, 350}; }

PageTable small_table(std::uint64_t dram_cap = 8, std::uint64_t cxl_cap = 16) {
    return PageTable(small_dram(dram_cap), small_cxl(cxl_cap));
}

} // namespace

TEST_CASE("default tier specs") {
    TierSpec d = default_dram();
    TierSpec c = default_cxl();
    CHECK(d.id == TierId::HostDram);
    CHECK(d.capacity_pages == 16'777'216); // 64 GiB of 4 KiB pages
    CHECK(d.read_latency_ns == 100);
    CHECK(d.write_latency_ns == 100);
    CHECK(c.id == TierId::CxlMem);
    CHECK(c.capacity_pages == 67'108'864); // 256 GiB
    CHECK(c.read_latency_ns == 350);
    CHECK(c.write_latency_ns == 350);
    CHECK(std::string(tier_name(TierId::HostDram)) == "HostDram");
    CHECK(std::string(tier_name(TierId::CxlMem)) == "CxlMem");
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(PageTable(small_dram(4), small_cxl(4), 1000), ConfigError);
    CHECK_THROWS_AS(PageTable(small_cxl(4), small_dram(4)), ConfigError); // swapped slots
    TierSpec zero_lat = small_dram(4);
    zero_lat.read_latency_ns = 0;
    CHECK_THROWS_AS(PageTable(zero_lat, small_cxl(4)), ConfigError);
}

TEST_CASE("alloc maps a fresh contiguous range onto lowest frames") {
    PageTable pt = small_table();
    VirtRange r = pt.alloc(4, TierId::CxlMem);
    CHECK(r.first == 0);
    CHECK(r.count == 4);
    CHECK(pt.used_pages(TierId::CxlMem) == 4);
    CHECK(pt.free_pages(TierId::CxlMem) == 12);
    CHECK(pt.mapped_pages() == 4);

    for (std::uint64_t i = 0; i < 4; ++i) {
        Placement pl = pt.lookup(r.first + i);
        CHECK(pl.tier == TierId::CxlMem);
        CHECK(pl.frame == i); // lowest-free-first
        CHECK(pt.reverse_map(TierId::CxlMem, pl.frame) == r.first + i);
    }
    pt.check_invariants();

    // Virtual page numbers are never reused.
    VirtRange r2 = pt.alloc(2, TierId::HostDram);
    CHECK(r2.first == 4);
    CHECK(pt.lookup(4).tier == TierId::HostDram);
    CHECK(pt.lookup(4).frame == 0); // per-tier frame counters
}

TEST_CASE("alloc of zero pages is a no-op") {
    PageTable pt = small_table();
    VirtRange r = pt.alloc(0, TierId::HostDram);
    CHECK(r.count == 0);
    CHECK(pt.mapped_pages() == 0);
    pt.check_invariants();
}

TEST_CASE("lookups on unmapped pages") {
    PageTable pt = small_table();
    pt.alloc(2, TierId::CxlMem);
    CHECK_THROWS_AS(pt.lookup(99), LookupError);
    CHECK_FALSE(pt.find(99).has_value());
    CHECK(pt.find(1).has_value());
    CHECK_THROWS_AS(pt.reverse_map(TierId::HostDram, 0), LookupError);
    CHECK_FALSE(pt.find_reverse(TierId::HostDram, 0).has_value());
    CHECK(pt.find_reverse(TierId::CxlMem, 0) == PageId{0});
}

TEST_CASE("alloc shortfall throws and leaves the table untouched") {
    PageTable pt = small_table(/*dram_cap=*/4);
    try {
        pt.alloc(5, TierId::HostDram);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.requested == 5);
        CHECK(e.available == 4);
        CHECK(e.shortfall() == 1);
    }
    CHECK(pt.used_pages(TierId::HostDram) == 0);
    CHECK(pt.mapped_pages() == 0);
    pt.check_invariants();

    pt.alloc(4, TierId::HostDram); // exactly at capacity is fine
    CHECK(pt.free_pages(TierId::HostDram) == 0);
    CHECK_THROWS_AS(pt.alloc(1, TierId::HostDram), CapacityError);
}

TEST_CASE("migrate moves pages and keeps the reverse map an inverse") {
    PageTable pt = small_table();
    VirtRange r = pt.alloc(4, TierId::CxlMem);

    std::vector<PageId> batch = {r.first + 0, r.first + 2};
    MigrationStats st = pt.migrate(batch, TierId::HostDram, 2000);
    CHECK(st.pages_moved == 2);
    CHECK(st.bytes_moved == 2 * 4096);
    CHECK(st.per_page_cost_ns == 2000);
    CHECK(st.total_cost_ns() == 4000);

    CHECK(pt.lookup(r.first + 0).tier == TierId::HostDram);
    CHECK(pt.lookup(r.first + 2).tier == TierId::HostDram);
    CHECK(pt.lookup(r.first + 1).tier == TierId::CxlMem);
    CHECK(pt.used_pages(TierId::HostDram) == 2);
    CHECK(pt.used_pages(TierId::CxlMem) == 2);

    // Old frames are unmapped on the source tier.
    CHECK_FALSE(pt.find_reverse(TierId::CxlMem, 0).has_value());
    CHECK_FALSE(pt.find_reverse(TierId::CxlMem, 2).has_value());
    // New frames are the lowest free ones on the destination.
    CHECK(pt.lookup(r.first + 0).frame == 0);
    CHECK(pt.lookup(r.first + 2).frame == 1);
    pt.check_invariants();
}

TEST_CASE("migrate skips duplicates and already-resident pages") {
    PageTable pt = small_table();
    VirtRange r = pt.alloc(4, TierId::CxlMem);

    std::vector<PageId> dup = {r.first + 1, r.first + 1, r.first + 1};
    CHECK(pt.migrate(dup, TierId::HostDram, 1).pages_moved == 1);

    // Re-migrating is idempotent: nothing moves, nothing is charged.
    MigrationStats st = pt.migrate(dup, TierId::HostDram, 1);
    CHECK(st.pages_moved == 0);
    CHECK(st.bytes_moved == 0);
    CHECK(st.total_cost_ns() == 0);

    CHECK(pt.migrate(std::vector<PageId>{}, TierId::HostDram, 1).pages_moved == 0);
    pt.check_invariants();
}

TEST_CASE("migrate of an unmapped page names it") {
    PageTable pt = small_table();
    pt.alloc(2, TierId::CxlMem);
    std::vector<PageId> bad = {0, 7};
    CHECK_THROWS_WITH_AS(pt.migrate(bad, TierId::HostDram, 1),
                         "migrate: virtual page 7 is not mapped", LookupError);
}

TEST_CASE("migrate is all-or-nothing on capacity") {
    PageTable pt = small_table(/*dram_cap=*/2);
    VirtRange r = pt.alloc(4, TierId::CxlMem);
    std::vector<PageId> all = {r.first, r.first + 1, r.first + 2};
    try {
        pt.migrate(all, TierId::HostDram, 1);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.requested == 3);
        CHECK(e.available == 2);
    }
    // Nothing moved.
    for (std::uint64_t i = 0; i < 4; ++i) CHECK(pt.lookup(r.first + i).tier == TierId::CxlMem);
    CHECK(pt.used_pages(TierId::HostDram) == 0);
    pt.check_invariants();

    // Only not-yet-resident movers count against free room: park one page
    // on DRAM (free drops to 1), then a 2-page request including it still
    // fits because just one page actually moves.
    pt.migrate(std::vector<PageId>{r.first}, TierId::HostDram, 1);
    MigrationStats st = pt.migrate(std::vector<PageId>{r.first, r.first + 1}, TierId::HostDram, 1);
    CHECK(st.pages_moved == 1);
    CHECK(pt.free_pages(TierId::HostDram) == 0);
}

TEST_CASE("released frames are reused lowest-first") {
    PageTable pt = small_table();
    VirtRange r = pt.alloc(4, TierId::CxlMem); // cxl frames 0..3
    std::vector<PageId> all = {r.first, r.first + 1, r.first + 2, r.first + 3};
    pt.migrate(all, TierId::HostDram, 1); // frees cxl frames 0..3

    pt.migrate(std::vector<PageId>{r.first + 2}, TierId::CxlMem, 1);
    CHECK(pt.lookup(r.first + 2).frame == 0); // smallest released frame
    pt.migrate(std::vector<PageId>{r.first + 3}, TierId::CxlMem, 1);
    CHECK(pt.lookup(r.first + 3).frame == 1);

    VirtRange fresh = pt.alloc(1, TierId::CxlMem);
    CHECK(pt.lookup(fresh.first).frame == 2); // heap before watermark
    pt.check_invariants();
}

TEST_CASE("migrating the documented page count moves the documented bytes") {
    PageTable pt(default_dram(), default_cxl());
    VirtRange r = pt.alloc(486587, TierId::CxlMem);
    std::vector<PageId> all;
    all.reserve(r.count);
    for (std::uint64_t i = 0; i < r.count; ++i) all.push_back(r.first + i);
    MigrationStats st = pt.migrate(all, TierId::HostDram, 2000);
    CHECK(st.pages_moved == 486587);
    CHECK(st.bytes_moved == 1'993'060'352ull); // ~1.86 GiB
    CHECK(pt.used_pages(TierId::HostDram) == 486587);
    CHECK(pt.used_pages(TierId::CxlMem) == 0);
}

TEST_CASE("randomized script agrees with a naive model") {
    // Independent model: a plain map vpage -> tier plus per-tier counts.
    PageTable pt = small_table(/*dram_cap=*/6, /*cxl_cap=*/24);
    std::map<PageId, TierId> model;
    std::uint64_t used[2] = {0, 0};
    auto cap = [](TierId t) { return t == TierId::HostDram ? 6ull : 24ull; };

    std::mt19937 gen(2024);
    auto pick_tier = [&] { return (gen() & 1) ? TierId::CxlMem : TierId::HostDram; };

    for (int step = 0; step < 400; ++step) {
        if (model.empty() || gen() % 3 == 0) {
            std::uint64_t n = gen() % 5;
            TierId t = pick_tier();
            if (used[static_cast<int>(t)] + n <= cap(t)) {
                VirtRange r = pt.alloc(n, t);
                for (std::uint64_t i = 0; i < n; ++i) model.emplace(r.first + i, t);
                used[static_cast<int>(t)] += n;
            } else {
                CHECK_THROWS_AS(pt.alloc(n, t), CapacityError);
            }
        } else {
            // Random subset of known pages to a random destination.
            TierId dst = pick_tier();
            std::vector<PageId> batch;
            for (const auto& [v, t] : model)
                if (gen() % 4 == 0) batch.push_back(v);
            std::uint64_t movers = 0;
            for (PageId v : batch)
                if (model.at(v) != dst) ++movers;
            if (used[static_cast<int>(dst)] + movers <= cap(dst)) {
                MigrationStats st = pt.migrate(batch, dst, 1);
                CHECK(st.pages_moved == movers);
                for (PageId v : batch) {
                    if (model.at(v) != dst) {
                        used[static_cast<int>(model.at(v))] -= 1;
                        used[static_cast<int>(dst)] += 1;
                        model[v] = dst;
                    }
                }
            } else {
                CHECK_THROWS_AS(pt.migrate(batch, dst, 1), CapacityError);
            }
        }

        // Model and table agree exactly after every step.
        pt.check_invariants();
        CHECK(pt.mapped_pages() == model.size());
        CHECK(pt.used_pages(TierId::HostDram) == used[0]);
        CHECK(pt.used_pages(TierId::CxlMem) == used[1]);
        for (const auto& [v, t] : model) {
            Placement pl = pt.lookup(v);
            CHECK(pl.tier == t);
            CHECK(pt.reverse_map(t, pl.frame) == v);
        }
    }
}

TEST_CASE("capture map snapshots frame -> virtual at capture time") {
    PageTable pt = small_table();
    VirtRange r = pt.alloc(4, TierId::CxlMem);
    CaptureMap cm = CaptureMap::capture(pt, r);
    CHECK(cm.size() == 4);
    for (std::uint64_t i = 0; i < 4; ++i) CHECK(cm.virtual_of(i) == r.first + i);

    // The snapshot survives promotion; the live table does not keep the
    // old frame.
    pt.migrate(std::vector<PageId>{r.first + 1}, TierId::HostDram, 1);
    CHECK(cm.virtual_of(1) == r.first + 1);
    CHECK_FALSE(pt.find_reverse(TierId::CxlMem, 1).has_value());

    CHECK_THROWS_AS(cm.virtual_of(4), LookupError);
    CHECK_FALSE(cm.find(4).has_value());
}

TEST_CASE("capture refuses ranges whose frames collide across tiers") {
    PageTable pt = small_table();
    pt.alloc(2, TierId::HostDram); // dram frames 0,1
    pt.alloc(2, TierId::CxlMem);   // cxl frames 0,1 -- same frame indices
    CHECK_THROWS_AS(CaptureMap::capture(pt, VirtRange{0, 4}), LookupError);
}

TEST_CASE("identity and passthrough capture maps") {
    CaptureMap id = CaptureMap::identity(3);
    CHECK(id.size() == 3);
    CHECK(id.virtual_of(2) == 2);
    CHECK_THROWS_AS(id.virtual_of(3), LookupError);

    CaptureMap pass = CaptureMap::passthrough();
    CHECK(pass.virtual_of(0xdeadbeef) == 0xdeadbeef);
    CHECK(pass.find(12345) == PageId{12345});
}
