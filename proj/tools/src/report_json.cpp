/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim_cli/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tiersim/error.hpp"

namespace tiersim::cli {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(ch) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                out += buf;
            } else {
                out += ch;
            }
        }
    }
    return out;
}

namespace {

std::string ratio4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::string now_utc_rfc3339() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string render_report_json(const Manifest& m, const ExperimentResult& r) {
    std::ostringstream o;
    o << "{\n";
    o << "  \"manifest\": {\n";
    o << "    \"tool\": \"" << json_escape(m.tool) << "\",\n";
    o << "    \"version\": \"" << json_escape(m.version) << "\",\n";
    o << "    \"created_utc\": \"" << json_escape(m.created_utc) << "\",\n";
    o << "    \"seed\": " << m.seed << ",\n";
    o << "    \"page_size\": " << m.page_size << ",\n";
    o << "    \"workload_fingerprint\": \"" << json_escape(m.fingerprint_hex) << "\",\n";
    o << "    \"config\": {";
    bool first = true;
    for (const auto& [k, v] : m.config) {
        o << (first ? "\n" : ",\n") << "      \"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
        first = false;
    }
    o << (first ? "" : "\n    ") << "}\n";
    o << "  },\n";
    o << "  \"workload\": \"" << json_escape(r.workload) << "\",\n";
    o << "  \"tracker\": \"" << json_escape(r.tracker) << "\",\n";
    o << "  \"placement\": \"" << json_escape(r.placement) << "\",\n";
    o << "  \"n_records\": " << r.n_records << ",\n";
    o << "  \"n_warmup\": " << r.n_warmup << ",\n";
    o << "  \"n_measured\": " << r.n_measured << ",\n";
    o << "  \"total_pages\": " << r.total_pages << ",\n";
    o << "  \"ground_truth_k\": " << r.ground_truth_k << ",\n";
    o << "  \"k_budget\": " << r.k_budget << ",\n";
    o << "  \"plan_pages\": " << r.plan_pages << ",\n";
    o << "  \"pages_promoted\": " << r.pages_promoted << ",\n";
    o << "  \"top_tier_footprint_bytes\": " << r.top_tier_footprint_bytes << ",\n";
    o << "  \"resident_top_tier_pages\": " << r.resident_top_tier_pages << ",\n";
    o << "  \"accuracy\": " << ratio4(r.accuracy) << ",\n";
    o << "  \"coverage\": " << ratio4(r.coverage) << ",\n";
    o << "  \"accuracy_vs_ground_truth\": " << ratio4(r.accuracy_gt) << ",\n";
    o << "  \"coverage_vs_ground_truth\": " << ratio4(r.coverage_gt) << ",\n";
    o << "  \"pages_migrated\": " << r.migration.pages_moved << ",\n";
    o << "  \"bytes_migrated\": " << r.migration.bytes_moved << ",\n";
    o << "  \"migration_cost_ns\": " << r.migration_cost_ns << ",\n";
    o << "  \"include_migration\": " << (r.include_migration ? "true" : "false") << ",\n";
    o << "  \"measured_time_ns\": " << r.measured_time_ns << ",\n";
    o << "  \"total_time_ns\": " << r.total_time_ns << ",\n";
    o << "  \"avg_access_latency_ns\": "
      << static_cast<std::uint64_t>(std::llround(r.avg_access_latency_ns)) << ",\n";
    o << "  \"avg_access_latency_ns_exact\": " << ratio4(r.avg_access_latency_ns) << ",\n";
    o << "  \"throughput_accesses_per_s\": " << ratio4(r.throughput_accesses_per_s) << ",\n";
    o << "  \"speedup_vs\": {";
    first = true;
    for (const auto& [k, v] : r.speedup_vs) {
        o << (first ? "\n" : ",\n") << "    \"" << json_escape(k) << "\": " << ratio4(v);
        first = false;
    }
    o << (first ? "" : "\n  ") << "}\n";
    o << "}\n";
    return o.str();
}

ParsedReport parse_report_json(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f.is_open()) throw IoError("cannot open report: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CodecError("bad report json in " + path.string() + ": " + e.what(), 0);
    }
    try {
        ParsedReport r;
        r.tracker = j.at("tracker").get<std::string>();
        r.placement = j.value("placement", "tiered");
        std::string fp = j.at("manifest").at("workload_fingerprint").get<std::string>();
        r.fingerprint = std::stoull(fp, nullptr, 16);
        r.total_time_ns = j.at("total_time_ns").get<std::uint64_t>();
        r.avg_latency_ns = j.at("avg_access_latency_ns_exact").get<double>();
        r.pages_promoted = j.at("pages_promoted").get<std::uint64_t>();
        r.footprint_bytes = j.at("top_tier_footprint_bytes").get<std::uint64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw CodecError("report " + path.string() + " is missing fields: " + e.what(), 0);
    } catch (const std::exception& e) {
        throw CodecError("report " + path.string() + " has bad fields: " + e.what(), 0);
    }
}

} // namespace tiersim::cli
