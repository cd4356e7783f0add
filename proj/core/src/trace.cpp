/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/trace.hpp"

#include <bit>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "tiersim/error.hpp"

namespace tiersim {

bool valid_page_size(std::uint64_t page_size) noexcept {
    return page_size >= kMinPageSize && std::has_single_bit(page_size);
}

PageId page_of(std::uint64_t addr, std::uint64_t page_size) {
    if (!valid_page_size(page_size)) {
        throw ConfigError("page size must be a power of two >= 256, got " +
                          std::to_string(page_size));
    }
    return addr >> std::countr_zero(page_size);
}

bool VectorTrace::next(AccessRecord& out) {
    if (pos_ >= records_.size()) return false;
    out = records_[pos_++];
    return true;
}

std::vector<AccessRecord> materialize(TraceStream& trace) {
    trace.reset();
    std::vector<AccessRecord> out;
    out.reserve(trace.size());
    AccessRecord rec;
    while (trace.next(rec)) out.push_back(rec);
    return out;
}

void write_trace_csv(std::ostream& out, TraceStream& trace) {
    out << "timestamp_ns,phys_addr,op\n";
    trace.reset();
    AccessRecord rec;
    char addr_buf[19]; // "0x" + 16 hex digits + NUL
    while (trace.next(rec)) {
        addr_buf[0] = '0';
        addr_buf[1] = 'x';
        auto [p, ec] = std::to_chars(addr_buf + 2, addr_buf + sizeof(addr_buf), rec.phys_addr, 16);
        out << rec.timestamp_ns << ',';
        out.write(addr_buf, p - addr_buf);
        out << ',' << (rec.op == Op::Write ? 'W' : 'R') << '\n';
    }
}

VectorTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CodecError("empty trace CSV");
    if (line.ends_with('\r')) line.pop_back();
    if (line != "timestamp_ns,phys_addr,op") {
        throw CodecError("bad trace CSV header: " + line);
    }

    std::vector<AccessRecord> records;
    std::uint64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.ends_with('\r')) line.pop_back();
        if (line.empty()) continue;

        const char* p = line.data();
        const char* end = p + line.size();
        AccessRecord rec;

        auto r1 = std::from_chars(p, end, rec.timestamp_ns);
        if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',')
            throw CodecError("bad timestamp on line " + std::to_string(line_no), line_no);
        p = r1.ptr + 1;

        if (end - p < 3 || p[0] != '0' || (p[1] != 'x' && p[1] != 'X'))
            throw CodecError("address missing 0x prefix on line " + std::to_string(line_no), line_no);
        auto r2 = std::from_chars(p + 2, end, rec.phys_addr, 16);
        if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ',')
            throw CodecError("bad address on line " + std::to_string(line_no), line_no);
        p = r2.ptr + 1;

        if (end - p != 1 || (*p != 'R' && *p != 'W'))
            throw CodecError("bad op on line " + std::to_string(line_no), line_no);
        rec.op = (*p == 'W') ? Op::Write : Op::Read;
        records.push_back(rec);
    }
    return VectorTrace(std::move(records));
}

} // namespace tiersim
