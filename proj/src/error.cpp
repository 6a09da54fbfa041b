#include "tetra/error.hpp"

namespace tetra {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::NonContiguousDates: return "NonContiguousDates";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidChangepoints: return "InvalidChangepoints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::SegmentTooShort: return "SegmentTooShort";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoFeasibleM: return "NoFeasibleM";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::int64_t> where) {
    std::string out(to_string(code));
    if (where)
        out += "(" + std::to_string(*where) + ")";
    if (!message.empty())
        out += ": " + message;
    return out;
}

} // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::int64_t> where)
    : std::runtime_error(decorate(code, message, where)), code_(code), where_(where) {}

} // namespace tetra
