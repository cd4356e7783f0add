/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>

#include "tiersim/error.hpp"

namespace tiersim {

HotnessReport ranked_report(const std::unordered_map<PageId, std::uint64_t>& counts,
                            std::uint64_t total_observed) {
    HotnessReport rep;
    rep.ranked.assign(counts.begin(), counts.end());
    std::sort(rep.ranked.begin(), rep.ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    rep.total_observed = total_observed;
    return rep;
}

void write_report_csv(const std::filesystem::path& path, const HotnessReport& report) {
    std::ofstream f(path, std::ios::trunc);
    if (!f.is_open()) throw IoError("cannot create report csv: " + path.string());
    f << "page_id,count\n";
    for (const auto& [page, count] : report.ranked) f << page << ',' << count << '\n';
    f.flush();
    if (!f) throw IoError("failed to write report csv: " + path.string());
}

HotnessReport read_report_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f.is_open()) throw IoError("cannot open report csv: " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw CodecError("empty report csv", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "page_id,count") throw CodecError("bad report csv header", 0);
    HotnessReport rep;
    std::uint64_t row = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw CodecError("report csv row missing comma", row);
        PageId page = 0;
        std::uint64_t count = 0;
        auto r1 = std::from_chars(line.data(), line.data() + comma, page);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), count);
        if (r1.ec != std::errc{} || r1.ptr != line.data() + comma || r2.ec != std::errc{} ||
            r2.ptr != line.data() + line.size())
            throw CodecError("bad report csv row", row);
        rep.ranked.emplace_back(page, count);
        rep.total_observed += count;
        ++row;
    }
    return rep;
}

HmuTracker::HmuTracker(Config cfg) : cfg_(cfg) {
    if (!valid_page_size(cfg_.page_size)) throw ConfigError("hmu: invalid page_size");
    if (cfg_.ceiling == 0) throw ConfigError("hmu: counter ceiling must be positive");
    if (cfg_.monitored_range && cfg_.monitored_range->first > cfg_.monitored_range->second)
        throw ConfigError("hmu: monitored_range is inverted");
}

void HmuTracker::observe(const AccessRecord& r) {
    if (cfg_.monitored_range) {
        if (r.phys_addr < cfg_.monitored_range->first ||
            r.phys_addr >= cfg_.monitored_range->second)
            return;
    }
    std::uint64_t& c = counters_[page_of(r.phys_addr, cfg_.page_size)];
    if (c < cfg_.ceiling) ++c;
    ++total_observed_;
}

HotnessReport HmuTracker::report() const { return ranked_report(counters_, total_observed_); }

PebsSampler::PebsSampler(Config cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.period == 0) throw ConfigError("pebs: period must be >= 1");
    if (!cfg_.random && cfg_.phase >= cfg_.period)
        throw ConfigError("pebs: phase must lie in [0, period)");
    if (!valid_page_size(cfg_.page_size)) throw ConfigError("pebs: invalid page_size");
}

void PebsSampler::observe(std::uint64_t index, const AccessRecord& r,
                          const CaptureMap& capture) {
    bool take;
    if (cfg_.random) {
        // One draw per record keeps the stream aligned with the index.
        take = rng_.u01() * static_cast<double>(cfg_.period) < 1.0;
    } else {
        take = index % cfg_.period == cfg_.phase;
    }
    if (!take) return;
    auto v = capture.find(page_of(r.phys_addr, cfg_.page_size));
    if (!v)
        throw TelemetryError("pebs: sampled access to unmapped frame at record " +
                             std::to_string(index));
    ++counters_[*v];
    ++samples_;
}

HotnessReport PebsSampler::report() const { return ranked_report(counters_, samples_); }

NbScanner::NbScanner(Config cfg, VirtRange range) : cfg_(cfg), range_(range) {
    if (cfg_.scan_period == 0) throw ConfigError("nb: scan_period must be >= 1");
    if (cfg_.scan_window_pages == 0) throw ConfigError("nb: scan_window_pages must be >= 1");
    if (!valid_page_size(cfg_.page_size)) throw ConfigError("nb: invalid page_size");
}

void NbScanner::scan_step() {
    ++scans_;
    for (std::uint64_t i = 0; i < cfg_.scan_window_pages; ++i) {
        if (passes_ >= cfg_.iterations || range_.count == 0) return;
        protected_.insert(range_.first + cursor_);
        if (++cursor_ == range_.count) {
            cursor_ = 0;
            ++passes_;
        }
    }
}

void NbScanner::observe(const AccessRecord& r, const CaptureMap& capture) {
    auto v = capture.find(page_of(r.phys_addr, cfg_.page_size));
    if (!v) throw TelemetryError("nb: access to unmapped frame");
    auto it = protected_.find(*v);
    if (it != protected_.end()) {
        protected_.erase(it); // the hint fault clears the protection
        if (faulted_set_.insert(*v).second) fault_order_.push_back(*v);
    }
    ++accesses_;
    // The scan tick fires after the access, so the first scan_period
    // accesses can never fault.
    if (accesses_ % cfg_.scan_period == 0 && passes_ < cfg_.iterations) scan_step();
}

HotnessReport NbScanner::report() const {
    HotnessReport rep;
    rep.ranked.reserve(fault_order_.size());
    for (PageId v : fault_order_) rep.ranked.emplace_back(v, 1);
    rep.total_observed = fault_order_.size();
    return rep;
}

} // namespace tiersim
