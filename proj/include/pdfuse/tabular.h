#pragma once

#include "pdfuse/matrix.h"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdfuse {

/// Acquisition system a column comes from.
enum class SourceKind { operation, monitoring, environment };

std::string_view to_string(SourceKind kind) noexcept;
std::optional<SourceKind> source_kind_from_string(std::string_view text) noexcept;

struct AttributeMeta {
    SourceKind source_kind = SourceKind::operation;
    std::string name;
    std::string unit;

    friend bool operator==(const AttributeMeta&, const AttributeMeta&) = default;
};

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Immutable n x p table of finite reals keyed by strictly increasing
/// timestamps. Construction enforces every invariant.
class SampleTable {
public:
    SampleTable(std::vector<Timestamp> timestamps, Matrix values, std::vector<AttributeMeta> columns);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }

    const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
    const Matrix& values() const noexcept { return values_; }
    const std::vector<AttributeMeta>& columns() const noexcept { return columns_; }

    double at(std::size_t r, std::size_t c) const noexcept { return values_(r, c); }
    std::vector<double> column(std::size_t c) const { return values_.column(c); }

    /// Leading rows [0, count).
    SampleTable head(std::size_t count) const;
    /// Rows at the given (increasing) indices.
    SampleTable select_rows(std::span<const std::size_t> indices) const;
    /// Same timestamps and columns, new values.
    SampleTable with_values(Matrix values) const;

    friend bool operator==(const SampleTable&, const SampleTable&) = default;

private:
    std::vector<Timestamp> timestamps_;
    Matrix values_;
    std::vector<AttributeMeta> columns_;
};

struct ParseResult {
    SampleTable table;
    std::size_t dropped_rows = 0;
};

/// Reads `timestamp,<name>,...` CSV. The header's value columns must equal the
/// schema names in order. Rows with a bad timestamp, wrong field count or a
/// non-finite value are dropped and counted.
ParseResult parse_csv(std::string_view text, std::span<const AttributeMeta> schema);

/// Builds a schema from a CSV header, assigning every column the given kind.
std::vector<AttributeMeta> schema_from_header(std::string_view text, SourceKind kind);

/// Inverse of parse_csv; values rendered with 17 significant digits.
std::string serialize_csv(const SampleTable& table);

/// Inner join on exact timestamps; columns concatenated in input order.
SampleTable align_by_timestamp(std::span<const SampleTable> tables);

/// `%.17g` rendering; round-trip exact for doubles.
std::string format_real(double value);

}  // namespace pdfuse
