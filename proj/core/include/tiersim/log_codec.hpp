/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "tiersim/trace.hpp"

namespace tiersim {

// Request-log container (.mrl). Header layout, little-endian:
//   bytes 0-3   magic "MRL1"
//   bytes 4-7   page_size (u32)
//   byte  8     encoding (0 = RAW16, 1 = VARLEN)
//   bytes 9-15  reserved, zero
//   bytes 16-23 record_count (u64)
//
// RAW16 body: per record, u64 timestamp then a u64 packed word whose
// bits 63..1 are the physical address bits 63..1 and whose bit 0 is the
// op (0 = read, 1 = write). Address bit 0 is not representable; the
// encoder rejects odd addresses.
//
// VARLEN body: per record, one control byte (bit 0 = op, bits 7..1
// reserved zero), a ULEB128 timestamp delta from the previous record
// (from zero for the first), and a ULEB128 absolute address.
enum class LogEncoding : std::uint8_t { Raw16 = 0, Varlen = 1 };

inline constexpr std::size_t kLogHeaderBytes = 24;
inline constexpr char kLogMagic[4] = {'M', 'R', 'L', '1'};

struct LogHeader {
    std::uint64_t page_size = kDefaultPageSize;
    LogEncoding encoding = LogEncoding::Raw16;
    std::uint64_t record_count = 0;
};

// Streams the header and all records of `trace` to `out`.
// Throws CodecError on a decreasing timestamp or (RAW16) an odd address,
// naming the offending record index.
void encode_log(std::ostream& out, TraceStream& trace, LogEncoding encoding,
                std::uint64_t page_size = kDefaultPageSize);

// Convenience form returning the encoded bytes.
std::vector<std::uint8_t> encode_log_bytes(TraceStream& trace, LogEncoding encoding,
                                           std::uint64_t page_size = kDefaultPageSize);

// Parses and validates a header. Throws CodecError on bad magic or a
// malformed header.
LogHeader read_log_header(std::istream& in);

// Streaming decoder; records are decoded one at a time on next(). A body
// that ends before record_count records throws CodecError whose `index`
// is the number of records successfully decoded.
class LogReader final : public TraceStream {
public:
    explicit LogReader(std::unique_ptr<std::istream> in);

    const LogHeader& header() const noexcept { return header_; }

    bool next(AccessRecord& out) override;
    std::uint64_t size() const override { return header_.record_count; }
    void reset() override;

private:
    std::unique_ptr<std::istream> in_;
    LogHeader header_;
    std::uint64_t decoded_ = 0;
    std::uint64_t prev_ts_ = 0;
};

// Decodes from an in-memory buffer (copies the bytes into the reader).
std::unique_ptr<LogReader> decode_log_bytes(std::span<const std::uint8_t> bytes);

std::unique_ptr<LogReader> open_log(const std::filesystem::path& path);
void write_log(const std::filesystem::path& path, TraceStream& trace, LogEncoding encoding,
               std::uint64_t page_size = kDefaultPageSize);

// FNV-1a over the RAW16 packed form of the first 4 KiB worth of records
// (256 records). Identifies a workload run independently of the on-disk
// encoding.
std::uint64_t trace_fingerprint(std::span<const AccessRecord> records);

} // namespace tiersim
