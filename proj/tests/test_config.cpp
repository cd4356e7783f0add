/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "tiersim/error.hpp"
#include "tiersim_cli/config.hpp"

using namespace tiersim;
using namespace tiersim::cli;

namespace {

ConfigMap parse(const std::string& text) {
    std::stringstream ss(text);
    return parse_config(ss, "test.conf");
}

} // namespace

TEST_CASE("config parser flattens sections and strips noise") {
    ConfigMap c = parse(
        "# leading comment\n"
        "top = 1\n"
        "[workload]\n"
        "kind = mmap-bench   # trailing comment\n"
        "  total_bytes =   10 MiB  \r\n"
        "\n"
        "[run]\n"
        "seed=42\n");
    CHECK(c.at("top") == "1");
    CHECK(c.at("workload.kind") == "mmap-bench");
    CHECK(c.at("workload.total_bytes") == "10 MiB");
    CHECK(c.at("run.seed") == "42");
    CHECK(c.size() == 4);
}

TEST_CASE("config parser keeps the last duplicate") {
    ConfigMap c = parse("[a]\nx = 1\nx = 2\n");
    CHECK(c.at("a.x") == "2");
}

TEST_CASE("config parser reports file and line on errors") {
    auto check_error = [](const std::string& text, const std::string& needle) {
        try {
            parse(text);
            FAIL("expected ConfigError for: ", text);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            CHECK(msg.find("test.conf:") != std::string::npos);
            CHECK(msg.find(needle) != std::string::npos);
        }
    };
    check_error("[section\n", "unterminated section");
    check_error("[]\n", "empty section name");
    check_error("just a line\n", "expected key = value");
    check_error("= value\n", "empty key");
}

TEST_CASE("load_config names a missing path") {
    try {
        load_config("/nonexistent/tiersim.conf");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/tiersim.conf") != std::string::npos);
    }
}

TEST_CASE("typed getters fall back to defaults and validate values") {
    ConfigMap c = parse("[x]\nu = 17\nd = 0.25\nb1 = true\nb2 = no\nbad = zzz\n");
    CHECK(get_str(c, "x.u", "other") == "17");
    CHECK(get_str(c, "x.missing", "other") == "other");
    CHECK(get_u64(c, "x.u", 0) == 17);
    CHECK(get_u64(c, "x.missing", 5) == 5);
    CHECK(get_dbl(c, "x.d", 0.0) == 0.25);
    CHECK(get_dbl(c, "x.missing", 1.5) == 1.5);
    CHECK(get_bool(c, "x.b1", false));
    CHECK_FALSE(get_bool(c, "x.b2", true));
    CHECK(get_bool(c, "x.missing", true));

    CHECK_THROWS_AS(get_u64(c, "x.bad", 0), ConfigError);
    CHECK_THROWS_AS(get_u64(c, "x.d", 0), ConfigError); // "0.25" is not a u64
    CHECK_THROWS_AS(get_dbl(c, "x.bad", 0.0), ConfigError);
    CHECK_THROWS_AS(get_bool(c, "x.bad", false), ConfigError);
}

TEST_CASE("parse_size understands byte suffixes") {
    CHECK(parse_size("1048576") == 1048576);
    CHECK(parse_size("512B") == 512);
    CHECK(parse_size("4 KiB") == 4096);
    CHECK(parse_size("10MiB") == 10ull << 20);
    CHECK(parse_size("1 GiB") == 1ull << 30);
    CHECK(parse_size("2 TiB") == 2ull << 40);
    CHECK(parse_size("  64 KiB  ") == 65536);
    CHECK(parse_size("0") == 0);

    CHECK_THROWS_AS(parse_size(""), ConfigError);
    CHECK_THROWS_AS(parse_size("MiB"), ConfigError);
    CHECK_THROWS_AS(parse_size("10 MB"), ConfigError);  // decimal units unsupported
    CHECK_THROWS_AS(parse_size("10 KiBs"), ConfigError);
    CHECK_THROWS_AS(parse_size("-4 KiB"), ConfigError);

    ConfigMap c = parse("[w]\nsz = 3 MiB\nbad = 3 xB\n");
    CHECK(get_size(c, "w.sz", 0) == 3ull << 20);
    CHECK(get_size(c, "w.missing", 7) == 7);
    try {
        get_size(c, "w.bad", 0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("w.bad") != std::string::npos);
    }
}

TEST_CASE("overrides rewrite the effective key-value snapshot") {
    ConfigMap c = parse("[run]\nseed = 1\n[telemetry]\ntracker = hmu\n");
    Overrides ov;
    ov.seed = 99;
    ov.page_size = 8192;
    ov.tracker = "pebs";
    ov.k_budget = "128";
    ov.include_migration = true;
    ov.dram_only = true;
    ConfigMap out = apply_overrides(c, ov);
    CHECK(out.at("run.seed") == "99");
    CHECK(out.at("run.page_size") == "8192");
    CHECK(out.at("telemetry.tracker") == "pebs");
    CHECK(out.at("tiering.k_budget") == "128");
    CHECK(out.at("tiering.include_migration") == "true");
    CHECK(out.at("tiering.placement") == "dram-only");

    // Empty overrides leave the map alone.
    ConfigMap same = apply_overrides(c, Overrides{});
    CHECK(same == c);
}

TEST_CASE("experiment defaults come from an empty config") {
    ExperimentConfig e = experiment_from_config(ConfigMap{});
    CHECK(e.workload == WorkloadKind::MmapBench);
    CHECK(e.tracker == TrackerKind::Hmu);
    CHECK_FALSE(e.k_budget.has_value()); // "auto"
    CHECK(e.warmup_fraction == 0.1);
    CHECK(e.page_size == 4096);
    CHECK(e.per_page_migration_ns == 2000);
    CHECK_FALSE(e.include_migration);
    CHECK_FALSE(e.dram_only);
    CHECK(e.baselines.empty());
    CHECK(e.dram.capacity_pages == 16'777'216);
    CHECK(e.cxl.read_latency_ns == 350);
    CHECK(e.mmap.total_bytes == 10ull << 30);
    CHECK_FALSE(e.params.hmu.monitored_range.has_value());
}

TEST_CASE("experiment_from_config reads every section") {
    ConfigMap c = parse(
        "[workload]\n"
        "kind = dlrm\n"
        "num_rows = 1000\n"
        "row_bytes = 512\n"
        "batches = 4\n"
        "lookups_per_batch = 100\n"
        "zipf_s = 0.8\n"
        "popular_rows = 50\n"
        "profile_batches = 2\n"
        "[run]\n"
        "seed = 7\n"
        "page_size = 8192\n"
        "[telemetry]\n"
        "tracker = nb\n"
        "hmu_ceiling = 1000\n"
        "hmu_range_lo = 4 KiB\n"
        "hmu_range_hi = 64 KiB\n"
        "pebs_period = 123\n"
        "pebs_phase = 11\n"
        "pebs_random = true\n"
        "nb_scan_period = 500\n"
        "nb_scan_window_pages = 32\n"
        "nb_iterations = 3\n"
        "[tiering]\n"
        "k_budget = 77\n"
        "warmup_fraction = 0.25\n"
        "per_page_migration_ns = 900\n"
        "include_migration = yes\n"
        "placement = tiered\n"
        "baselines = dram-only, no-promotion\n"
        "[tiers]\n"
        "dram_capacity_pages = 1024\n"
        "dram_read_ns = 90\n"
        "dram_write_ns = 95\n"
        "cxl_capacity_pages = 4096\n"
        "cxl_read_ns = 300\n"
        "cxl_write_ns = 310\n");
    ExperimentConfig e = experiment_from_config(c);
    CHECK(e.workload == WorkloadKind::Dlrm);
    CHECK(e.dlrm.num_rows == 1000);
    CHECK(e.dlrm.row_bytes == 512);
    CHECK(e.dlrm.batches == 4);
    CHECK(e.dlrm.lookups_per_batch == 100);
    CHECK(e.dlrm.zipf_s == 0.8);
    CHECK(e.dlrm.popular_rows == 50);
    CHECK(e.dlrm.profile_batches == 2);
    CHECK(e.dlrm.seed == 7);
    CHECK(e.page_size == 8192);
    CHECK(e.tracker == TrackerKind::Nb);
    CHECK(e.params.hmu.ceiling == 1000);
    REQUIRE(e.params.hmu.monitored_range.has_value());
    CHECK(e.params.hmu.monitored_range->first == 4096);
    CHECK(e.params.hmu.monitored_range->second == 65536);
    CHECK(e.params.pebs.period == 123);
    CHECK(e.params.pebs.phase == 11);
    CHECK(e.params.pebs.random);
    CHECK(e.params.pebs.seed == 7);
    CHECK(e.params.nb.scan_period == 500);
    CHECK(e.params.nb.scan_window_pages == 32);
    CHECK(e.params.nb.iterations == 3);
    CHECK(e.k_budget == 77);
    CHECK(e.warmup_fraction == 0.25);
    CHECK(e.per_page_migration_ns == 900);
    CHECK(e.include_migration);
    CHECK_FALSE(e.dram_only);
    CHECK(e.baselines == std::vector<std::string>{"dram-only", "no-promotion"});
    CHECK(e.dram.capacity_pages == 1024);
    CHECK(e.dram.read_latency_ns == 90);
    CHECK(e.dram.write_latency_ns == 95);
    CHECK(e.cxl.capacity_pages == 4096);
    CHECK(e.cxl.read_latency_ns == 300);
    CHECK(e.cxl.write_latency_ns == 310);
}

TEST_CASE("placement accepts only the two documented values") {
    ConfigMap c = parse("[tiering]\nplacement = dram-only\n");
    CHECK(experiment_from_config(c).dram_only);
    c = parse("[tiering]\nplacement = tiered\n");
    CHECK_FALSE(experiment_from_config(c).dram_only);
    c = parse("[tiering]\nplacement = best-effort\n");
    CHECK_THROWS_AS(experiment_from_config(c), ConfigError);
}

TEST_CASE("k_budget is auto or a count") {
    ConfigMap c = parse("[tiering]\nk_budget = auto\n");
    CHECK_FALSE(experiment_from_config(c).k_budget.has_value());
    c = parse("[tiering]\nk_budget = 4096\n");
    CHECK(experiment_from_config(c).k_budget == 4096);
    c = parse("[tiering]\nk_budget = lots\n");
    CHECK_THROWS_AS(experiment_from_config(c), ConfigError);
}

TEST_CASE("mmap sizes accept suffixes through the config") {
    ConfigMap c = parse(
        "[workload]\n"
        "kind = mmap\n"
        "total_bytes = 2 MiB\n"
        "hot_bytes = 256 KiB\n"
        "n_accesses = 1000\n");
    MmapBenchConfig m = mmap_from_config(c);
    CHECK(m.total_bytes == 2ull << 20);
    CHECK(m.hot_bytes == 256ull << 10);
    CHECK(m.n_accesses == 1000);
    CHECK(workload_kind_from_config(c) == WorkloadKind::MmapBench);
}
