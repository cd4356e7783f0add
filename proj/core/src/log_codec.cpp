/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tiersim/log_codec.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tiersim/error.hpp"

namespace tiersim {
namespace {

void put_u32le(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

void put_u64le(std::uint8_t* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t get_u64le(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

// Unsigned LEB128: 7 value bits per byte, low group first, bit 7 set on
// all but the last byte. At most 10 bytes for a u64.
std::size_t put_uleb128(std::uint8_t* p, std::uint64_t v) {
    std::size_t n = 0;
    do {
        std::uint8_t b = v & 0x7f;
        v >>= 7;
        if (v != 0) b |= 0x80;
        p[n++] = b;
    } while (v != 0);
    return n;
}

// Reads one ULEB128 group from `in`. Returns false on clean EOF at the
// first byte; throws CodecError(index) on EOF mid-number or overflow.
bool get_uleb128(std::istream& in, std::uint64_t& out, std::uint64_t index) {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
        int c = in.get();
        if (c == std::char_traits<char>::eof()) {
            if (shift == 0) return false;
            throw CodecError("truncated varint in log body", index);
        }
        auto b = static_cast<std::uint8_t>(c);
        if (shift == 63 && (b & 0x7e) != 0)
            throw CodecError("varint overflows 64 bits", index);
        if (shift > 63) throw CodecError("varint overflows 64 bits", index);
        v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
        if ((b & 0x80) == 0) break;
        shift += 7;
    }
    out = v;
    return true;
}

std::uint64_t pack_raw16(const AccessRecord& r) {
    return (r.phys_addr & ~std::uint64_t{1}) | static_cast<std::uint64_t>(r.op);
}

void write_header(std::ostream& out, const LogHeader& h) {
    std::uint8_t buf[kLogHeaderBytes] = {};
    std::memcpy(buf, kLogMagic, 4);
    put_u32le(buf + 4, static_cast<std::uint32_t>(h.page_size));
    buf[8] = static_cast<std::uint8_t>(h.encoding);
    put_u64le(buf + 16, h.record_count);
    out.write(reinterpret_cast<const char*>(buf), kLogHeaderBytes);
    if (!out) throw IoError("failed to write log header");
}

} // namespace

LogHeader read_log_header(std::istream& in) {
    std::uint8_t buf[kLogHeaderBytes];
    in.read(reinterpret_cast<char*>(buf), kLogHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kLogHeaderBytes))
        throw CodecError("log shorter than header", 0);
    if (std::memcmp(buf, kLogMagic, 4) != 0) throw CodecError("bad log magic", 0);
    LogHeader h;
    h.page_size = get_u32le(buf + 4);
    if (!valid_page_size(h.page_size)) throw CodecError("invalid page_size in log header", 0);
    auto enc = buf[8];
    if (enc > 1) throw CodecError("unknown log encoding " + std::to_string(enc), 0);
    h.encoding = static_cast<LogEncoding>(enc);
    for (int i = 9; i < 16; ++i)
        if (buf[i] != 0) throw CodecError("nonzero reserved bytes in log header", 0);
    h.record_count = get_u64le(buf + 16);
    return h;
}

void encode_log(std::ostream& out, TraceStream& trace, LogEncoding encoding,
                std::uint64_t page_size) {
    if (!valid_page_size(page_size)) throw ConfigError("invalid page_size for log");
    trace.reset();
    LogHeader h;
    h.page_size = page_size;
    h.encoding = encoding;
    h.record_count = trace.size();
    write_header(out, h);

    AccessRecord r;
    std::uint64_t index = 0;
    std::uint64_t prev_ts = 0;
    std::uint8_t buf[1 + 10 + 10]; // control + two max varints
    while (trace.next(r)) {
        if (r.timestamp_ns < prev_ts)
            throw CodecError("decreasing timestamp", index);
        if (encoding == LogEncoding::Raw16) {
            if (r.phys_addr & 1)
                throw CodecError("odd phys_addr not representable in RAW16", index);
            put_u64le(buf, r.timestamp_ns);
            put_u64le(buf + 8, pack_raw16(r));
            out.write(reinterpret_cast<const char*>(buf), 16);
        } else {
            buf[0] = static_cast<std::uint8_t>(r.op);
            std::size_t n = 1;
            n += put_uleb128(buf + n, r.timestamp_ns - prev_ts);
            n += put_uleb128(buf + n, r.phys_addr);
            out.write(reinterpret_cast<const char*>(buf), static_cast<std::streamsize>(n));
        }
        if (!out) throw IoError("failed to write log record " + std::to_string(index));
        prev_ts = r.timestamp_ns;
        ++index;
    }
    if (index != h.record_count)
        throw CodecError("trace yielded " + std::to_string(index) + " records, size() promised " +
                             std::to_string(h.record_count),
                         index);
}

std::vector<std::uint8_t> encode_log_bytes(TraceStream& trace, LogEncoding encoding,
                                           std::uint64_t page_size) {
    std::ostringstream out(std::ios::binary);
    encode_log(out, trace, encoding, page_size);
    auto s = std::move(out).str();
    return {s.begin(), s.end()};
}

LogReader::LogReader(std::unique_ptr<std::istream> in) : in_(std::move(in)) {
    header_ = read_log_header(*in_);
}

bool LogReader::next(AccessRecord& out) {
    if (decoded_ >= header_.record_count) return false;
    if (header_.encoding == LogEncoding::Raw16) {
        std::uint8_t buf[16];
        in_->read(reinterpret_cast<char*>(buf), 16);
        if (in_->gcount() != 16) throw CodecError("truncated log body", decoded_);
        out.timestamp_ns = get_u64le(buf);
        std::uint64_t packed = get_u64le(buf + 8);
        out.phys_addr = packed & ~std::uint64_t{1};
        out.op = static_cast<Op>(packed & 1);
    } else {
        int c = in_->get();
        if (c == std::char_traits<char>::eof()) throw CodecError("truncated log body", decoded_);
        auto ctrl = static_cast<std::uint8_t>(c);
        if (ctrl & 0xfe) throw CodecError("reserved control bits set", decoded_);
        std::uint64_t delta = 0;
        std::uint64_t addr = 0;
        if (!get_uleb128(*in_, delta, decoded_)) throw CodecError("truncated log body", decoded_);
        if (!get_uleb128(*in_, addr, decoded_)) throw CodecError("truncated log body", decoded_);
        out.op = static_cast<Op>(ctrl & 1);
        out.timestamp_ns = prev_ts_ + delta;
        out.phys_addr = addr;
        prev_ts_ = out.timestamp_ns;
    }
    ++decoded_;
    return true;
}

void LogReader::reset() {
    in_->clear();
    in_->seekg(static_cast<std::streamoff>(kLogHeaderBytes), std::ios::beg);
    if (!*in_) throw IoError("failed to seek log body");
    decoded_ = 0;
    prev_ts_ = 0;
}

std::unique_ptr<LogReader> decode_log_bytes(std::span<const std::uint8_t> bytes) {
    auto ss = std::make_unique<std::istringstream>(
        std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
        std::ios::binary);
    return std::make_unique<LogReader>(std::move(ss));
}

std::unique_ptr<LogReader> open_log(const std::filesystem::path& path) {
    auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!f->is_open()) throw IoError("cannot open log file: " + path.string());
    return std::make_unique<LogReader>(std::move(f));
}

void write_log(const std::filesystem::path& path, TraceStream& trace, LogEncoding encoding,
               std::uint64_t page_size) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f.is_open()) throw IoError("cannot create log file: " + path.string());
    encode_log(f, trace, encoding, page_size);
    f.flush();
    if (!f) throw IoError("failed to write log file: " + path.string());
}

std::uint64_t trace_fingerprint(std::span<const AccessRecord> records) {
    // FNV-1a, 64-bit, over the RAW16 image of at most 256 records. Odd
    // addresses are packed tolerantly (bit 0 overwritten by op) so the
    // fingerprint is defined for any trace.
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    std::size_t n = records.size() < 256 ? records.size() : 256;
    for (std::size_t i = 0; i < n; ++i) {
        mix(records[i].timestamp_ns);
        mix(pack_raw16(records[i]));
    }
    return h;
}

} // namespace tiersim
