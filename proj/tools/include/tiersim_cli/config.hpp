/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "tiersim/tiering.hpp"

namespace tiersim::cli {

// Flat key-value config: `[section]` headers, `key = value` lines, `#`
// comments. Keys flatten to "section.key"; the map is ordered so config
// snapshots render deterministically.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in, const std::string& name);
ConfigMap load_config(const std::filesystem::path& path); // ConfigError names the path

std::string get_str(const ConfigMap& c, const std::string& key, const std::string& dflt);
std::uint64_t get_u64(const ConfigMap& c, const std::string& key, std::uint64_t dflt);
double get_dbl(const ConfigMap& c, const std::string& key, double dflt);
bool get_bool(const ConfigMap& c, const std::string& key, bool dflt);

// "1048576", "4 KiB", "10MiB", "1 GiB" -> bytes.
std::uint64_t parse_size(const std::string& text);
std::uint64_t get_size(const ConfigMap& c, const std::string& key, std::uint64_t dflt);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> page_size;
    std::optional<std::string> tracker;
    std::optional<std::string> k_budget; // "auto" or a count
    std::optional<bool> include_migration;
    std::optional<bool> dram_only;
};

// Applies `ov` onto the raw map (so manifests show effective values),
// then builds the experiment config.
ConfigMap apply_overrides(ConfigMap c, const Overrides& ov);
ExperimentConfig experiment_from_config(const ConfigMap& c);

// Workload-only subset, for `gen`.
WorkloadKind workload_kind_from_config(const ConfigMap& c);
MmapBenchConfig mmap_from_config(const ConfigMap& c);
DlrmConfig dlrm_from_config(const ConfigMap& c);

} // namespace tiersim::cli
