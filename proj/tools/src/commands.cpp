/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim_cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tiersim/error.hpp"
#include "tiersim/log_codec.hpp"
#include "tiersim/perf_model.hpp"
#include "tiersim/version.hpp"
#include "tiersim_cli/config.hpp"
#include "tiersim_cli/report_json.hpp"

namespace tiersim::cli {
namespace {

struct GenArgs {
    std::string config;
    std::string out;
    std::string encoding = "raw16";
};

struct TrackArgs {
    std::string in;
    std::string tracker = "hmu";
    std::string out;
    std::uint64_t period = 4096;
    std::uint64_t phase = 0;
    bool random = false;
    std::uint64_t scan_period = 1000;
    std::uint64_t scan_window = 256;
    std::uint64_t iterations = 2;
    std::uint64_t ceiling = 0xFFFF'FFFFull;
};

struct TierArgs {
    std::string config;
    std::string out;
    std::string tracker;
    std::string k_budget;
    bool include_migration = false;
    bool dram_only = false;
    std::vector<std::string> baselines;
};

struct CompareArgs {
    std::vector<std::string> reports;
    std::string baseline;
    std::string out;
};

LogEncoding encoding_from_name(const std::string& name) {
    if (name == "raw16") return LogEncoding::Raw16;
    if (name == "varlen") return LogEncoding::Varlen;
    throw ConfigError("unknown encoding: " + name + " (use raw16 or varlen)");
}

std::uint64_t stream_fingerprint(TraceStream& t) {
    t.reset();
    std::vector<AccessRecord> head;
    head.reserve(256);
    AccessRecord r;
    while (head.size() < 256 && t.next(r)) head.push_back(r);
    return trace_fingerprint(head);
}

void cmd_gen(const GenArgs& a, const Overrides& ov) {
    ConfigMap c = apply_overrides(load_config(a.config), ov);
    std::uint64_t page_size = get_u64(c, "run.page_size", kDefaultPageSize);
    LogEncoding enc = encoding_from_name(a.encoding);

    Workload w;
    WorkloadKind kind = workload_kind_from_config(c);
    if (kind == WorkloadKind::MmapBench)
        w = gen_mmap_bench(mmap_from_config(c), page_size);
    else
        w = gen_dlrm(dlrm_from_config(c), page_size);

    std::uint64_t fp = stream_fingerprint(*w.trace);
    write_log(a.out, *w.trace, enc, page_size);
    std::cout << "workload=" << workload_name(kind) << " records=" << w.trace->size()
              << " page_size=" << page_size << " K=" << w.truth.k
              << " footprint_bytes=" << w.truth.footprint_bytes << " fingerprint=" << hex_u64(fp)
              << " out=" << a.out << "\n";
}

void cmd_track(const TrackArgs& a, const Overrides& ov) {
    auto reader = open_log(a.in);
    std::uint64_t page_size = ov.page_size ? *ov.page_size : reader->header().page_size;
    CaptureMap pass = CaptureMap::passthrough();

    HotnessReport report;
    AccessRecord r;
    if (a.tracker == "hmu") {
        HmuTracker t({.ceiling = a.ceiling, .monitored_range = std::nullopt,
                      .page_size = page_size});
        while (reader->next(r)) t.observe(r);
        report = t.report();
    } else if (a.tracker == "pebs") {
        PebsSampler t({.period = a.period, .phase = a.phase, .random = a.random,
                       .seed = ov.seed ? *ov.seed : 0, .page_size = page_size});
        std::uint64_t i = 0;
        while (reader->next(r)) t.observe(i++, r, pass);
        report = t.report();
    } else if (a.tracker == "nb") {
        // The scanner walks the workload's page range; derive it from
        // the trace extent first.
        PageId max_page = 0;
        bool any = false;
        while (reader->next(r)) {
            max_page = std::max(max_page, page_of(r.phys_addr, page_size));
            any = true;
        }
        reader->reset();
        NbScanner t({.scan_period = a.scan_period, .scan_window_pages = a.scan_window,
                     .iterations = a.iterations, .page_size = page_size},
                    VirtRange{0, any ? max_page + 1 : 0});
        while (reader->next(r)) t.observe(r, pass);
        report = t.report();
    } else {
        throw ConfigError("unknown tracker: " + a.tracker + " (use hmu, pebs, or nb)");
    }

    write_report_csv(a.out + ".report.csv", report);
    if (!report.ranked.empty()) write_cdf_csv(a.out + ".cdf.csv", hotness_cdf(report));
    std::cout << "tracker=" << a.tracker << " records=" << reader->header().record_count
              << " total_observed=" << report.total_observed
              << " distinct_pages=" << report.ranked.size() << " out=" << a.out
              << ".report.csv\n";
}

void cmd_tier(const TierArgs& a, Overrides ov) {
    if (!a.tracker.empty()) ov.tracker = a.tracker;
    if (!a.k_budget.empty()) ov.k_budget = a.k_budget;
    if (a.include_migration) ov.include_migration = true;
    if (a.dram_only) ov.dram_only = true;
    ConfigMap c = apply_overrides(load_config(a.config), ov);
    if (!a.baselines.empty()) {
        std::string joined;
        for (const auto& b : a.baselines) {
            if (!joined.empty()) joined += ",";
            joined += b;
        }
        c["tiering.baselines"] = joined;
    }

    ExperimentConfig cfg = experiment_from_config(c);
    ExperimentResult res = run_experiment(cfg);

    Manifest m;
    m.version = kVersion;
    m.created_utc = now_utc_rfc3339();
    m.seed = res.seed;
    m.page_size = res.page_size;
    m.fingerprint_hex = hex_u64(res.fingerprint);
    m.config = c;

    std::string json = render_report_json(m, res);
    if (a.out.empty()) {
        std::cout << json;
    } else {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f.is_open()) throw IoError("cannot create report file: " + a.out);
        f << json;
        f.flush();
        if (!f) throw IoError("failed to write report file: " + a.out);
        std::cout << "tracker=" << res.tracker << " avg_latency_ns=" << res.avg_access_latency_ns
                  << " accuracy=" << res.accuracy << " coverage=" << res.coverage << " out="
                  << a.out << "\n";
    }
}

void cmd_compare(const CompareArgs& a) {
    if (a.reports.empty()) throw CompareError("no reports given");
    std::vector<CompareRow> rows;
    rows.reserve(a.reports.size());
    for (const auto& path : a.reports) {
        ParsedReport p = parse_report_json(path);
        CompareRow row;
        row.name = std::filesystem::path(path).stem().string();
        for (const auto& existing : rows)
            if (existing.name == row.name)
                throw CompareError("duplicate report name: " + row.name);
        row.fingerprint = p.fingerprint;
        row.total_time_ns = p.total_time_ns;
        row.avg_latency_ns = p.avg_latency_ns;
        row.pages_promoted = p.pages_promoted;
        row.footprint_bytes = p.footprint_bytes;
        rows.push_back(std::move(row));
    }
    std::string baseline = a.baseline.empty() ? rows.front().name : a.baseline;
    Comparison cmp = compare(rows, baseline);

    std::ostringstream o;
    o << "name,avg_latency_ns,total_time_ns,pages_promoted,footprint_bytes,speedup_vs_"
      << baseline << "\n";
    char buf[64];
    for (const auto& cr : cmp.rows) {
        std::snprintf(buf, sizeof buf, "%.4f", cr.row.avg_latency_ns);
        o << cr.row.name << ',' << buf << ',' << cr.row.total_time_ns << ','
          << cr.row.pages_promoted << ',' << cr.row.footprint_bytes << ',';
        std::snprintf(buf, sizeof buf, "%.4f", cr.speedup_vs_baseline);
        o << buf << "\n";
    }
    std::cout << o.str();
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f.is_open()) throw IoError("cannot create comparison file: " + a.out);
        f << o.str();
    }
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    if (dynamic_cast<const CodecError*>(&e)) return 4;
    if (dynamic_cast<const CapacityError*>(&e)) return 5;
    if (dynamic_cast<const CompareError*>(&e)) return 6;
    return 1;
}

const char* error_type_name(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const IoError*>(&e)) return "IoError";
    if (dynamic_cast<const CodecError*>(&e)) return "CodecError";
    if (dynamic_cast<const CapacityError*>(&e)) return "CapacityError";
    if (dynamic_cast<const CompareError*>(&e)) return "CompareError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "Exception";
}

} // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"tiersim: trace-driven two-tier memory telemetry and promotion simulator"};
    app.require_subcommand(1);

    Overrides ov;
    std::uint64_t seed_opt = 0;
    std::uint64_t page_opt = 0;
    auto* seed_flag = app.add_option("--seed", seed_opt, "Override run.seed");
    auto* page_flag = app.add_option("--page-size", page_opt, "Override run.page_size");

    GenArgs gen;
    auto* cgen = app.add_subcommand("gen", "Generate a workload trace (.mrl)");
    cgen->add_option("--config", gen.config, "Config file")->required();
    cgen->add_option("--out", gen.out, "Output trace path")->required();
    cgen->add_option("--encoding", gen.encoding, "raw16 or varlen");

    TrackArgs track;
    auto* ctrack = app.add_subcommand("track", "Run a hotness tracker over a trace");
    ctrack->add_option("--in", track.in, "Input trace (.mrl)")->required();
    ctrack->add_option("--tracker", track.tracker, "hmu, pebs, or nb");
    ctrack->add_option("--out", track.out, "Output prefix for report/CDF CSVs")->required();
    ctrack->add_option("--period", track.period, "pebs: sampling period");
    ctrack->add_option("--phase", track.phase, "pebs: sampling phase");
    ctrack->add_flag("--random", track.random, "pebs: random 1-in-period sampling");
    ctrack->add_option("--scan-period", track.scan_period, "nb: accesses per scan step");
    ctrack->add_option("--scan-window", track.scan_window, "nb: pages protected per step");
    ctrack->add_option("--iterations", track.iterations, "nb: full passes before stopping");
    ctrack->add_option("--ceiling", track.ceiling, "hmu: counter saturation ceiling");

    TierArgs tier;
    auto* ctier = app.add_subcommand("tier", "Run the profile/promote/measure experiment");
    ctier->add_option("--config", tier.config, "Config file")->required();
    ctier->add_option("--out", tier.out, "Report JSON path (stdout when omitted)");
    ctier->add_option("--tracker", tier.tracker, "Override telemetry.tracker");
    ctier->add_option("--k", tier.k_budget, "Override tiering.k_budget (count or 'auto')");
    ctier->add_flag("--include-migration", tier.include_migration,
                    "Fold migration cost into reported time");
    ctier->add_flag("--dram-only", tier.dram_only, "All-host-DRAM placement, no promotion");
    ctier->add_option("--baseline", tier.baselines,
                      "Baseline placements to run (repeatable; replaces config list)");

    CompareArgs cmp;
    auto* ccmp = app.add_subcommand("compare", "Tabulate reports that share a trace");
    ccmp->add_option("reports", cmp.reports, "Report JSON files")->required();
    ccmp->add_option("--baseline", cmp.baseline, "Baseline row name (default: first report)");
    ccmp->add_option("--out", cmp.out, "Also write the CSV table here");

    try {
        std::reverse(args.begin(), args.end()); // CLI11 takes reversed argv
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (*seed_flag) ov.seed = seed_opt;
    if (*page_flag) ov.page_size = page_opt;

    bool is_tier = ctier->parsed();
    try {
        if (cgen->parsed())
            cmd_gen(gen, ov);
        else if (ctrack->parsed())
            cmd_track(track, ov);
        else if (is_tier)
            cmd_tier(tier, ov);
        else if (ccmp->parsed())
            cmd_compare(cmp);
        return 0;
    } catch (const std::exception& e) {
        if (is_tier) {
            std::cerr << "{\"error\": {\"type\": \"" << error_type_name(e)
                      << "\", \"message\": \"" << json_escape(e.what()) << "\"}}\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return exit_code_for(e);
    }
}

} // namespace tiersim::cli
