/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/workload.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "tiersim/error.hpp"
#include "tiersim/rng.hpp"

namespace tiersim {

bool GroundTruth::contains(PageId p) const {
    return std::binary_search(hot_pages.begin(), hot_pages.end(), p);
}

static std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

void validate(const MmapBenchConfig& cfg) {
    if (cfg.hot_bytes > cfg.total_bytes)
        throw ConfigError("mmap: hot_bytes exceeds total_bytes");
    if (cfg.hot_access_fraction < 0.0 || cfg.hot_access_fraction > 1.0)
        throw ConfigError("mmap: hot_access_fraction outside [0,1]");
    if (cfg.write_fraction < 0.0 || cfg.write_fraction > 1.0)
        throw ConfigError("mmap: write_fraction outside [0,1]");
    if (cfg.access_align < 2 || !std::has_single_bit(cfg.access_align))
        throw ConfigError("mmap: access_align must be a power of two >= 2");
    if (cfg.total_bytes < cfg.access_align)
        throw ConfigError("mmap: total_bytes smaller than one access");
    if (cfg.hot_bytes % cfg.access_align != 0)
        throw ConfigError("mmap: hot_bytes must be a multiple of access_align");
}

namespace {

class MmapBenchStream final : public TraceStream {
public:
    MmapBenchStream(const MmapBenchConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
        hot_slots_ = cfg_.hot_bytes / cfg_.access_align;
        cold_slots_ = (cfg_.total_bytes - cfg_.hot_bytes) / cfg_.access_align;
    }

    bool next(AccessRecord& out) override {
        if (i_ >= cfg_.n_accesses) return false;
        // Fixed three draws per record: region coin, slot, op coin.
        double region = rng_.u01();
        bool hot = region < cfg_.hot_access_fraction;
        if (hot && hot_slots_ == 0) hot = false;
        if (!hot && cold_slots_ == 0) hot = true;
        std::uint64_t slot = rng_.bounded(hot ? hot_slots_ : cold_slots_);
        std::uint64_t base = hot ? 0 : cfg_.hot_bytes;
        double opc = rng_.u01();
        out.timestamp_ns = i_ * cfg_.tick_ns;
        out.phys_addr = base + slot * cfg_.access_align;
        out.op = opc < cfg_.write_fraction ? Op::Write : Op::Read;
        ++i_;
        return true;
    }

    std::uint64_t size() const override { return cfg_.n_accesses; }

    void reset() override {
        rng_ = Rng(cfg_.seed);
        i_ = 0;
    }

private:
    MmapBenchConfig cfg_;
    Rng rng_;
    std::uint64_t hot_slots_ = 0;
    std::uint64_t cold_slots_ = 0;
    std::uint64_t i_ = 0;
};

} // namespace

Workload gen_mmap_bench(const MmapBenchConfig& cfg, std::uint64_t page_size) {
    validate(cfg);
    if (!valid_page_size(page_size)) throw ConfigError("invalid page_size");
    Workload w;
    w.trace = std::make_unique<MmapBenchStream>(cfg);
    std::uint64_t k = cfg.hot_bytes == 0 ? 0 : ceil_div(cfg.hot_bytes, page_size);
    w.truth.hot_pages.reserve(k);
    for (std::uint64_t p = 0; p < k; ++p) w.truth.hot_pages.push_back(p);
    w.truth.k = k;
    w.truth.footprint_bytes = k * page_size;
    return w;
}

void validate(const DlrmConfig& cfg) {
    if (cfg.num_rows < 1) throw ConfigError("dlrm: num_rows must be >= 1");
    if (cfg.row_bytes < 2 || cfg.row_bytes % 2 != 0)
        throw ConfigError("dlrm: row_bytes must be even and >= 2");
    if (cfg.popular_rows > cfg.num_rows)
        throw ConfigError("dlrm: popular_rows exceeds num_rows");
    if (cfg.profile_batches > cfg.batches)
        throw ConfigError("dlrm: profile_batches exceeds batches");
    if (cfg.zipf_s < 0.0) throw ConfigError("dlrm: zipf_s must be >= 0");
}

std::uint64_t dlrm_table_bytes(const DlrmConfig& cfg) { return cfg.num_rows * cfg.row_bytes; }

std::uint64_t workload_total_pages(const MmapBenchConfig& cfg, std::uint64_t page_size) {
    return ceil_div(cfg.total_bytes, page_size);
}

std::uint64_t workload_total_pages(const DlrmConfig& cfg, std::uint64_t page_size) {
    return ceil_div(dlrm_table_bytes(cfg), page_size);
}

Workload gen_dlrm(const DlrmConfig& cfg, std::uint64_t page_size) {
    validate(cfg);
    if (!valid_page_size(page_size)) throw ConfigError("invalid page_size");

    std::uint64_t support = cfg.popular_rows == 0 ? cfg.num_rows : cfg.popular_rows;
    // Row popularity CDF; sampled by inversion so draws cost one u01 each.
    std::vector<double> cdf(support);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < support; ++i) {
        acc += std::pow(static_cast<double>(i + 1), -cfg.zipf_s);
        cdf[i] = acc;
    }

    Rng rng(cfg.seed);
    std::vector<AccessRecord> recs;
    std::set<PageId> truth_pages;
    Workload w;
    w.batch_offsets.reserve(cfg.batches + 1);

    for (std::uint64_t b = 0; b < cfg.batches; ++b) {
        w.batch_offsets.push_back(recs.size());
        for (std::uint64_t l = 0; l < cfg.lookups_per_batch; ++l) {
            double x = rng.u01() * acc;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
            std::uint64_t row =
                it == cdf.end() ? support - 1 : static_cast<std::uint64_t>(it - cdf.begin());
            std::uint64_t lo = row * cfg.row_bytes;
            std::uint64_t hi = lo + cfg.row_bytes - 1;
            for (PageId p = lo / page_size; p <= hi / page_size; ++p) {
                AccessRecord r;
                r.timestamp_ns = b * cfg.tick_ns;
                r.phys_addr = std::max(lo, p * page_size);
                r.op = Op::Read;
                recs.push_back(r);
                if (b < cfg.profile_batches) truth_pages.insert(p);
            }
        }
    }
    w.batch_offsets.push_back(recs.size());

    w.truth.hot_pages.assign(truth_pages.begin(), truth_pages.end());
    w.truth.k = w.truth.hot_pages.size();
    w.truth.footprint_bytes = w.truth.k * page_size;
    w.trace = std::make_unique<VectorTrace>(std::move(recs));
    return w;
}

} // namespace tiersim
