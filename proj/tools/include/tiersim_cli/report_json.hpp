/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <string>

#include "tiersim/tiering.hpp"
#include "tiersim_cli/config.hpp"

namespace tiersim::cli {

struct Manifest {
    std::string tool = "tiersim";
    std::string version;
    std::string created_utc; // the one line allowed to differ between reruns
    std::uint64_t seed = 0;
    std::uint64_t page_size = 0;
    std::string fingerprint_hex;
    ConfigMap config; // effective key=value snapshot
};

std::string now_utc_rfc3339();
std::string hex_u64(std::uint64_t v);
std::string json_escape(const std::string& s);

// Deterministic rendering (fixed key order, fixed number formatting):
// reruns with the same manifest differ only in the created_utc line.
// Latencies print as integer nanoseconds; ratios with 4 decimals.
std::string render_report_json(const Manifest& m, const ExperimentResult& r);

// The subset cmd_compare needs back out of a report file.
struct ParsedReport {
    std::string tracker;
    std::string placement;
    std::uint64_t fingerprint = 0;
    std::uint64_t total_time_ns = 0;
    double avg_latency_ns = 0.0;
    std::uint64_t pages_promoted = 0;
    std::uint64_t footprint_bytes = 0;
};

ParsedReport parse_report_json(const std::filesystem::path& path);

} // namespace tiersim::cli
