/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tiersim/error.hpp"

namespace tiersim::cli {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ConfigMap parse_config(std::istream& in, const std::string& name) {
    ConfigMap out;
    std::string line;
    std::string section;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        std::string full = section.empty() ? key : section + "." + key;
        out[full] = value;
    }
    return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f.is_open()) throw ConfigError("cannot open config file: " + path.string());
    return parse_config(f, path.string());
}

std::string get_str(const ConfigMap& c, const std::string& key, const std::string& dflt) {
    auto it = c.find(key);
    return it == c.end() ? dflt : it->second;
}

std::uint64_t get_u64(const ConfigMap& c, const std::string& key, std::uint64_t dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    std::uint64_t v = 0;
    const std::string& s = it->second;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ConfigError(key + ": expected unsigned integer, got '" + s + "'");
    return v;
}

double get_dbl(const ConfigMap& c, const std::string& key, double dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected number, got '" + it->second + "'");
    }
}

bool get_bool(const ConfigMap& c, const std::string& key, bool dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    const std::string& s = it->second;
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError(key + ": expected boolean, got '" + s + "'");
}

std::uint64_t parse_size(const std::string& text) {
    std::string s = trim(text);
    std::uint64_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr == s.data())
        throw ConfigError("bad size value: '" + text + "'");
    std::string suffix = trim(std::string(r.ptr, s.c_str() + s.size()));
    std::uint64_t mult = 1;
    if (suffix.empty() || suffix == "B")
        mult = 1;
    else if (suffix == "KiB")
        mult = 1ull << 10;
    else if (suffix == "MiB")
        mult = 1ull << 20;
    else if (suffix == "GiB")
        mult = 1ull << 30;
    else if (suffix == "TiB")
        mult = 1ull << 40;
    else
        throw ConfigError("bad size suffix in '" + text + "' (use B, KiB, MiB, GiB, TiB)");
    return v * mult;
}

std::uint64_t get_size(const ConfigMap& c, const std::string& key, std::uint64_t dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    try {
        return parse_size(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

ConfigMap apply_overrides(ConfigMap c, const Overrides& ov) {
    if (ov.seed) c["run.seed"] = std::to_string(*ov.seed);
    if (ov.page_size) c["run.page_size"] = std::to_string(*ov.page_size);
    if (ov.tracker) c["telemetry.tracker"] = *ov.tracker;
    if (ov.k_budget) c["tiering.k_budget"] = *ov.k_budget;
    if (ov.include_migration)
        c["tiering.include_migration"] = *ov.include_migration ? "true" : "false";
    if (ov.dram_only) c["tiering.placement"] = *ov.dram_only ? "dram-only" : "tiered";
    return c;
}

WorkloadKind workload_kind_from_config(const ConfigMap& c) {
    return workload_from_name(get_str(c, "workload.kind", "mmap-bench"));
}

MmapBenchConfig mmap_from_config(const ConfigMap& c) {
    MmapBenchConfig m;
    m.total_bytes = get_size(c, "workload.total_bytes", m.total_bytes);
    m.hot_bytes = get_size(c, "workload.hot_bytes", m.hot_bytes);
    m.hot_access_fraction = get_dbl(c, "workload.hot_fraction", m.hot_access_fraction);
    m.n_accesses = get_u64(c, "workload.n_accesses", m.n_accesses);
    m.write_fraction = get_dbl(c, "workload.write_fraction", m.write_fraction);
    m.access_align = get_u64(c, "workload.access_align", m.access_align);
    m.tick_ns = get_u64(c, "workload.tick_ns", m.tick_ns);
    m.seed = get_u64(c, "run.seed", m.seed);
    return m;
}

DlrmConfig dlrm_from_config(const ConfigMap& c) {
    DlrmConfig d;
    d.num_rows = get_u64(c, "workload.num_rows", d.num_rows);
    d.row_bytes = get_size(c, "workload.row_bytes", d.row_bytes);
    d.batches = get_u64(c, "workload.batches", d.batches);
    d.lookups_per_batch = get_u64(c, "workload.lookups_per_batch", d.lookups_per_batch);
    d.zipf_s = get_dbl(c, "workload.zipf_s", d.zipf_s);
    d.popular_rows = get_u64(c, "workload.popular_rows", d.popular_rows);
    d.profile_batches = get_u64(c, "workload.profile_batches", d.profile_batches);
    d.tick_ns = get_u64(c, "workload.tick_ns", d.tick_ns);
    d.seed = get_u64(c, "run.seed", d.seed);
    return d;
}

ExperimentConfig experiment_from_config(const ConfigMap& c) {
    ExperimentConfig e;
    e.workload = workload_kind_from_config(c);
    e.mmap = mmap_from_config(c);
    e.dlrm = dlrm_from_config(c);
    e.page_size = get_u64(c, "run.page_size", e.page_size);

    e.tracker = tracker_from_name(get_str(c, "telemetry.tracker", "hmu"));
    e.params.hmu.ceiling = get_u64(c, "telemetry.hmu_ceiling", e.params.hmu.ceiling);
    if (c.count("telemetry.hmu_range_lo") || c.count("telemetry.hmu_range_hi")) {
        std::uint64_t lo = get_size(c, "telemetry.hmu_range_lo", 0);
        std::uint64_t hi = get_size(c, "telemetry.hmu_range_hi", ~std::uint64_t{0});
        e.params.hmu.monitored_range = {{lo, hi}};
    }
    e.params.pebs.period = get_u64(c, "telemetry.pebs_period", e.params.pebs.period);
    e.params.pebs.phase = get_u64(c, "telemetry.pebs_phase", e.params.pebs.phase);
    e.params.pebs.random = get_bool(c, "telemetry.pebs_random", e.params.pebs.random);
    e.params.pebs.seed = get_u64(c, "run.seed", e.params.pebs.seed);
    e.params.nb.scan_period = get_u64(c, "telemetry.nb_scan_period", e.params.nb.scan_period);
    e.params.nb.scan_window_pages =
        get_u64(c, "telemetry.nb_scan_window_pages", e.params.nb.scan_window_pages);
    e.params.nb.iterations = get_u64(c, "telemetry.nb_iterations", e.params.nb.iterations);

    std::string k = get_str(c, "tiering.k_budget", "auto");
    if (k == "auto")
        e.k_budget = std::nullopt;
    else
        e.k_budget = get_u64(c, "tiering.k_budget", 0);
    e.warmup_fraction = get_dbl(c, "tiering.warmup_fraction", e.warmup_fraction);
    e.per_page_migration_ns =
        get_u64(c, "tiering.per_page_migration_ns", e.per_page_migration_ns);
    e.include_migration = get_bool(c, "tiering.include_migration", e.include_migration);
    std::string placement = get_str(c, "tiering.placement", "tiered");
    if (placement == "dram-only")
        e.dram_only = true;
    else if (placement != "tiered")
        throw ConfigError("tiering.placement: expected tiered or dram-only");

    std::string bl = get_str(c, "tiering.baselines", "");
    std::stringstream ss(bl);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) e.baselines.push_back(item);
    }

    e.dram.capacity_pages = get_u64(c, "tiers.dram_capacity_pages", e.dram.capacity_pages);
    e.dram.read_latency_ns = get_u64(c, "tiers.dram_read_ns", e.dram.read_latency_ns);
    e.dram.write_latency_ns = get_u64(c, "tiers.dram_write_ns", e.dram.write_latency_ns);
    e.cxl.capacity_pages = get_u64(c, "tiers.cxl_capacity_pages", e.cxl.capacity_pages);
    e.cxl.read_latency_ns = get_u64(c, "tiers.cxl_read_ns", e.cxl.read_latency_ns);
    e.cxl.write_latency_ns = get_u64(c, "tiers.cxl_write_ns", e.cxl.write_latency_ns);
    return e;
}

} // namespace tiersim::cli
