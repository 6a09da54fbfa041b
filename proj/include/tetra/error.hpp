#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tetra {

enum class ErrorCode {
    NonFinite,
    NonMonotonicTimestamps,
    NonContiguousDates,
    LengthMismatch,
    InvalidChangepoints,
    InvalidConfig,
    SeriesTooShort,
    BadWindow,
    EmptySegment,
    SegmentTooShort,
    Infeasible,
    NoFeasibleM,
    TooLargeForOracle,
    ParseError,
    EmptyFile,
    MissingColumn,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. `where` carries the offending
// position (array offset, CSV line number, or segment count) when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::int64_t> where = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::int64_t> where() const noexcept { return where_; }

private:
    ErrorCode code_;
    std::optional<std::int64_t> where_;
};

} // namespace tetra
