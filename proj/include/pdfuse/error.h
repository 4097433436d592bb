#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdfuse {

enum class Errc {
    InvalidArgument,
    ParseError,
    HeaderMismatch,
    EmptyTable,
    NonMonotonicTimestamps,
    DuplicateColumn,
    EmptyIntersection,
    TooFewSamples,
    NonPositiveInput,
    DegenerateColumn,
    NotSymmetric,
    NoConvergence,
    FrameMismatch,
    InvalidMass,
    TotalConflict,
    EmptyConflict,
    InvalidConfig,
    DimensionMismatch,
    LengthMismatch,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace pdfuse
