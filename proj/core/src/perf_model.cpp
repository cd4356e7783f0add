/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/perf_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "tiersim/error.hpp"

namespace tiersim {

MeasureResult measure(std::span<const AccessRecord> segment, const PageTable& pt,
                      const CaptureMap& capture, const LatencyModel& model, bool allow_empty) {
    if (segment.empty()) {
        if (allow_empty) return {};
        throw MeasureError("empty measurement segment");
    }
    MeasureResult res;
    std::uint64_t page_size = pt.page_size();
    for (const AccessRecord& r : segment) {
        PageId frame = page_of(r.phys_addr, page_size);
        auto v = capture.find(frame);
        if (!v) throw MeasureError("frame " + std::to_string(frame) + " not captured");
        auto pl = pt.find(*v);
        if (!pl) throw MeasureError("virtual page " + std::to_string(*v) + " not mapped");
        res.total_time_ns += model.latency_ns(pl->tier, r.op);
    }
    res.n = segment.size();
    res.avg_latency_ns = static_cast<double>(res.total_time_ns) / static_cast<double>(res.n);
    res.throughput_per_s =
        static_cast<double>(res.n) * 1e9 / static_cast<double>(res.total_time_ns);
    return res;
}

double HotnessCdf::value_at(double page_fraction) const {
    if (points.empty()) return 0.0;
    auto n = static_cast<double>(points.size());
    auto k = static_cast<std::size_t>(std::floor(page_fraction * n + 1e-9));
    if (k == 0) return 0.0;
    if (k > points.size()) k = points.size();
    return points[k - 1].second;
}

HotnessCdf hotness_cdf(const HotnessReport& report) {
    if (report.ranked.empty()) throw TelemetryError("cdf: empty hotness report");
    std::uint64_t total = 0;
    for (const auto& [page, count] : report.ranked) total += count;
    if (total == 0) throw TelemetryError("cdf: report has zero observations");
    HotnessCdf cdf;
    cdf.points.reserve(report.ranked.size());
    auto n = static_cast<double>(report.ranked.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < report.ranked.size(); ++i) {
        acc += report.ranked[i].second;
        cdf.points.emplace_back(static_cast<double>(i + 1) / n,
                                static_cast<double>(acc) / static_cast<double>(total));
    }
    return cdf;
}

void write_cdf_csv(const std::filesystem::path& path, const HotnessCdf& cdf) {
    std::ofstream f(path, std::ios::trunc);
    if (!f.is_open()) throw IoError("cannot create cdf csv: " + path.string());
    f << "page_fraction,access_fraction\n";
    char buf[64];
    for (const auto& [pf, af] : cdf.points) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", pf, af);
        f << buf;
    }
    f.flush();
    if (!f) throw IoError("failed to write cdf csv: " + path.string());
}

double speedup(double t_base, double t_new) {
    if (!(t_base > 0.0) || !(t_new > 0.0))
        throw MeasureError("speedup requires positive times");
    return t_base / t_new;
}

} // namespace tiersim
