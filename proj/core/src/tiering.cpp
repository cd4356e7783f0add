/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/tiering.hpp"

#include <algorithm>
#include <unordered_set>

#include "tiersim/error.hpp"
#include "tiersim/log_codec.hpp"
#include "tiersim/perf_model.hpp"

namespace tiersim {

const char* const kBaselineDramOnly = "dram-only";
const char* const kBaselineNoPromotion = "no-promotion";
const char* const kBaselineHmu = "hmu";

PromotionPlan plan_top_k(const HotnessReport& report, std::uint64_t k) {
    PromotionPlan plan;
    plan.k_budget = k;
    std::uint64_t n = std::min<std::uint64_t>(k, report.ranked.size());
    plan.pages.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) plan.pages.push_back(report.ranked[i].first);
    return plan;
}

const char* tracker_name(TrackerKind t) noexcept {
    switch (t) {
    case TrackerKind::Hmu: return "hmu";
    case TrackerKind::Pebs: return "pebs";
    case TrackerKind::Nb: return "nb";
    default: return "none";
    }
}

const char* workload_name(WorkloadKind w) noexcept {
    return w == WorkloadKind::MmapBench ? "mmap-bench" : "dlrm";
}

TrackerKind tracker_from_name(const std::string& name) {
    if (name == "hmu") return TrackerKind::Hmu;
    if (name == "pebs") return TrackerKind::Pebs;
    if (name == "nb") return TrackerKind::Nb;
    if (name == "none") return TrackerKind::None;
    throw ConfigError("unknown tracker: " + name);
}

WorkloadKind workload_from_name(const std::string& name) {
    if (name == "mmap-bench" || name == "mmap_bench" || name == "mmap")
        return WorkloadKind::MmapBench;
    if (name == "dlrm") return WorkloadKind::Dlrm;
    throw ConfigError("unknown workload: " + name);
}

void validate(const ExperimentConfig& cfg) {
    if (!valid_page_size(cfg.page_size)) throw ConfigError("invalid page_size");
    if (!(cfg.warmup_fraction > 0.0) || !(cfg.warmup_fraction < 1.0))
        throw ConfigError("warmup_fraction must lie in (0, 1)");
    if (cfg.workload == WorkloadKind::MmapBench)
        validate(cfg.mmap);
    else
        validate(cfg.dlrm);
    for (const auto& b : cfg.baselines) {
        if (b != kBaselineDramOnly && b != kBaselineNoPromotion && b != kBaselineHmu)
            throw ConfigError("unknown baseline: " + b);
    }
}

namespace {

// Re-key a frame-indexed report onto virtual pages. Order-preserving.
HotnessReport to_virtual(const HotnessReport& rep, const CaptureMap& capture) {
    HotnessReport out;
    out.ranked.reserve(rep.ranked.size());
    for (const auto& [frame, count] : rep.ranked)
        out.ranked.emplace_back(capture.virtual_of(frame), count);
    out.total_observed = rep.total_observed;
    return out;
}

struct RunOutput {
    MeasureResult meas;
    MigrationStats migration;
    PromotionPlan plan;
    std::uint64_t resident_top = 0;
    std::uint64_t total_ns = 0; // measured + migration when configured
};

struct Session {
    const ExperimentConfig& cfg;
    std::span<const AccessRecord> records;
    std::uint64_t split = 0;
    std::uint64_t total_pages = 0;
    LatencyModel model;

    RunOutput run(TrackerKind kind, std::uint64_t k, TierId alloc_tier,
                  HotnessReport* ref_virtual_out) const {
        PageTable pt(cfg.dram, cfg.cxl, cfg.page_size);
        VirtRange range = pt.alloc(total_pages, alloc_tier);
        CaptureMap capture = CaptureMap::capture(pt, range);
        auto warmup = records.subspan(0, split);

        if (ref_virtual_out) {
            HmuTracker ref({.ceiling = ~std::uint64_t{0} >> 1,
                            .monitored_range = std::nullopt,
                            .page_size = cfg.page_size});
            for (const AccessRecord& r : warmup) ref.observe(r);
            *ref_virtual_out = to_virtual(ref.report(), capture);
        }

        HotnessReport report;
        switch (kind) {
        case TrackerKind::Hmu: {
            auto hc = cfg.params.hmu;
            hc.page_size = cfg.page_size;
            HmuTracker t(hc);
            for (const AccessRecord& r : warmup) t.observe(r);
            report = to_virtual(t.report(), capture);
            break;
        }
        case TrackerKind::Pebs: {
            auto pc = cfg.params.pebs;
            pc.page_size = cfg.page_size;
            PebsSampler t(pc);
            std::uint64_t i = 0;
            for (const AccessRecord& r : warmup) t.observe(i++, r, capture);
            report = t.report();
            break;
        }
        case TrackerKind::Nb: {
            auto nc = cfg.params.nb;
            nc.page_size = cfg.page_size;
            NbScanner t(nc, range);
            for (const AccessRecord& r : warmup) t.observe(r, capture);
            report = t.report();
            break;
        }
        case TrackerKind::None: break;
        }

        RunOutput out;
        out.plan = plan_top_k(report, k);
        out.migration = pt.migrate(out.plan.pages, TierId::HostDram, cfg.per_page_migration_ns);
        out.meas = measure(records.subspan(split), pt, capture, model);
        out.resident_top = pt.used_pages(TierId::HostDram);
        out.total_ns = out.meas.total_time_ns;
        if (cfg.include_migration) out.total_ns += out.migration.total_cost_ns();
        return out;
    }
};

double set_ratio(const std::vector<PageId>& plan, const std::unordered_set<PageId>& ref,
                 std::uint64_t denom) {
    if (denom == 0) return 1.0; // vacuous
    std::uint64_t inter = 0;
    for (PageId p : plan) inter += ref.count(p);
    return static_cast<double>(inter) / static_cast<double>(denom);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);

    Workload w = cfg.workload == WorkloadKind::MmapBench ? gen_mmap_bench(cfg.mmap, cfg.page_size)
                                                         : gen_dlrm(cfg.dlrm, cfg.page_size);
    std::vector<AccessRecord> records = materialize(*w.trace);
    if (records.empty()) throw ConfigError("experiment trace is empty");

    Session s{.cfg = cfg,
              .records = records,
              .split = static_cast<std::uint64_t>(static_cast<double>(records.size()) *
                                                  cfg.warmup_fraction),
              .total_pages = cfg.workload == WorkloadKind::MmapBench
                                 ? workload_total_pages(cfg.mmap, cfg.page_size)
                                 : workload_total_pages(cfg.dlrm, cfg.page_size),
              .model = LatencyModel{cfg.dram, cfg.cxl}};
    if (s.split >= records.size())
        throw ConfigError("warmup_fraction leaves no records to measure");

    std::uint64_t k = cfg.k_budget ? *cfg.k_budget : w.truth.k;
    TrackerKind main_kind = cfg.dram_only ? TrackerKind::None : cfg.tracker;
    std::uint64_t main_k = cfg.dram_only ? 0 : k;
    TierId main_tier = cfg.dram_only ? TierId::HostDram : TierId::CxlMem;

    HotnessReport ref_virtual;
    RunOutput main = s.run(main_kind, main_k, main_tier, &ref_virtual);

    ExperimentResult res;
    res.workload = workload_name(cfg.workload);
    res.tracker = tracker_name(main_kind);
    res.placement = cfg.dram_only ? "dram-only" : "tiered";
    res.page_size = cfg.page_size;
    res.seed = cfg.workload == WorkloadKind::MmapBench ? cfg.mmap.seed : cfg.dlrm.seed;
    res.fingerprint = trace_fingerprint(records);
    res.n_records = records.size();
    res.n_warmup = s.split;
    res.n_measured = records.size() - s.split;
    res.total_pages = s.total_pages;
    res.ground_truth_k = w.truth.k;
    res.k_budget = main_k;
    res.plan_pages = main.plan.pages.size();
    res.pages_promoted = main.migration.pages_moved;
    res.top_tier_footprint_bytes = main.migration.bytes_moved;
    res.resident_top_tier_pages = main.resident_top;

    PromotionPlan ref_plan = plan_top_k(ref_virtual, main_k);
    std::unordered_set<PageId> ref_set(ref_plan.pages.begin(), ref_plan.pages.end());
    // Ground-truth pages are device frames; the workload starts at
    // virtual page 0 of a fresh table, so frame f = virtual f here.
    std::unordered_set<PageId> gt_set(w.truth.hot_pages.begin(), w.truth.hot_pages.end());
    res.accuracy = set_ratio(main.plan.pages, ref_set, main.plan.pages.size());
    res.coverage = set_ratio(main.plan.pages, ref_set, main_k);
    res.accuracy_gt = set_ratio(main.plan.pages, gt_set, main.plan.pages.size());
    res.coverage_gt = set_ratio(main.plan.pages, gt_set, w.truth.k);

    res.migration = main.migration;
    res.migration_cost_ns = main.migration.total_cost_ns();
    res.measured_time_ns = main.meas.total_time_ns;
    res.total_time_ns = main.total_ns;
    res.include_migration = cfg.include_migration;
    res.avg_access_latency_ns =
        static_cast<double>(main.total_ns) / static_cast<double>(main.meas.n);
    res.throughput_accesses_per_s =
        static_cast<double>(main.meas.n) * 1e9 / static_cast<double>(main.total_ns);

    for (const auto& name : cfg.baselines) {
        RunOutput b;
        if (name == kBaselineDramOnly)
            b = s.run(TrackerKind::None, 0, TierId::HostDram, nullptr);
        else if (name == kBaselineNoPromotion)
            b = s.run(TrackerKind::None, 0, TierId::CxlMem, nullptr);
        else
            b = s.run(TrackerKind::Hmu, k, TierId::CxlMem, nullptr);
        res.speedup_vs[name] =
            static_cast<double>(b.total_ns) / static_cast<double>(main.total_ns);
    }
    return res;
}

CompareRow to_compare_row(const ExperimentResult& r, const std::string& name) {
    CompareRow row;
    row.name = name;
    row.fingerprint = r.fingerprint;
    row.total_time_ns = r.total_time_ns;
    row.avg_latency_ns = r.avg_access_latency_ns;
    row.pages_promoted = r.pages_promoted;
    row.footprint_bytes = r.top_tier_footprint_bytes;
    return row;
}

Comparison compare(std::span<const CompareRow> rows, const std::string& baseline_name) {
    if (rows.empty()) throw CompareError("nothing to compare");
    const CompareRow* base = nullptr;
    for (const auto& r : rows) {
        if (r.fingerprint != rows.front().fingerprint)
            throw CompareError("workload fingerprint mismatch: " + r.name + " vs " +
                               rows.front().name);
        if (r.name == baseline_name) base = &r;
    }
    if (!base) throw CompareError("baseline not among results: " + baseline_name);
    if (base->total_time_ns == 0) throw CompareError("baseline has zero time");
    Comparison cmp;
    cmp.baseline = baseline_name;
    cmp.rows.reserve(rows.size());
    for (const auto& r : rows) {
        ComparedRow cr;
        cr.row = r;
        cr.speedup_vs_baseline =
            static_cast<double>(base->total_time_ns) / static_cast<double>(r.total_time_ns);
        cmp.rows.push_back(std::move(cr));
    }
    return cmp;
}

} // namespace tiersim
