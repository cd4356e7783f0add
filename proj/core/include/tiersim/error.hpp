/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tiersim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed or unencodable trace log. `index` is the offending record
// index on encode, or the number of records successfully decoded on decode.
class CodecError : public Error {
public:
    explicit CodecError(const std::string& msg, std::uint64_t index = 0)
        : Error(msg), index(index) {}
    std::uint64_t index = 0;
};

// Tier ran out of frames. `available` is how many requests would have fit.
class CapacityError : public Error {
public:
    CapacityError(const std::string& msg, std::uint64_t requested, std::uint64_t available)
        : Error(msg), requested(requested), available(available) {}
    std::uint64_t requested = 0;
    std::uint64_t available = 0;
    std::uint64_t shortfall() const noexcept { return requested - available; }
};

// Unmapped frame or virtual page.
class LookupError : public Error {
public:
    using Error::Error;
};

// Trace and page table disagree (e.g. a record hits an unmapped frame).
class TelemetryError : public Error {
public:
    using Error::Error;
};

// Performance-model input error (unmapped page, empty segment, bad ratio).
class MeasureError : public Error {
public:
    using Error::Error;
};

// Reports being compared do not belong to the same workload run.
class CompareError : public Error {
public:
    using Error::Error;
};

} // namespace tiersim
