/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace tiersim {

enum class Op : std::uint8_t { Read = 0, Write = 1 };

// One memory request as the device-side logger sees it: physical byte
// address plus a logical timestamp. Timestamps are non-decreasing within
// a trace.
struct AccessRecord {
    std::uint64_t timestamp_ns = 0;
    std::uint64_t phys_addr = 0;
    Op op = Op::Read;

    friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

using PageId = std::uint64_t;

inline constexpr std::uint64_t kDefaultPageSize = 4096;
inline constexpr std::uint64_t kMinPageSize = 256;

// Power of two and >= 256 bytes.
bool valid_page_size(std::uint64_t page_size) noexcept;

// addr / page_size, truncated. Throws ConfigError for an invalid page size.
PageId page_of(std::uint64_t addr, std::uint64_t page_size);

// Ordered, possibly lazy stream of access records. Iteration is
// deterministic: reset() followed by next() yields the same sequence
// every time for the same source and seed.
class TraceStream {
public:
    virtual ~TraceStream() = default;

    // Fills `out` and returns true, or returns false at end of stream.
    virtual bool next(AccessRecord& out) = 0;

    // Total number of records this stream yields after a reset.
    virtual std::uint64_t size() const = 0;

    // Rewind to the first record.
    virtual void reset() = 0;
};

class VectorTrace final : public TraceStream {
public:
    VectorTrace() = default;
    explicit VectorTrace(std::vector<AccessRecord> records)
        : records_(std::move(records)) {}

    bool next(AccessRecord& out) override;
    std::uint64_t size() const override { return records_.size(); }
    void reset() override { pos_ = 0; }

    const std::vector<AccessRecord>& records() const noexcept { return records_; }
    std::vector<AccessRecord>&& take() && { return std::move(records_); }

private:
    std::vector<AccessRecord> records_;
    std::size_t pos_ = 0;
};

// Resets the stream and drains it into a vector.
std::vector<AccessRecord> materialize(TraceStream& trace);

// Text form for debugging and interop: header `timestamp_ns,phys_addr,op`,
// hex 0x-prefixed addresses, op R or W.
void write_trace_csv(std::ostream& out, TraceStream& trace);
VectorTrace read_trace_csv(std::istream& in);

} // namespace tiersim
