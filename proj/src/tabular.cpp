#include "pdfuse/tabular.h"

#include "pdfuse/error.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

namespace pdfuse {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        auto line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = pos + 1;
    }
    return lines;
}

std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void check_columns(const std::vector<AttributeMeta>& columns) {
    std::set<std::pair<SourceKind, std::string>> seen;
    for (const auto& c : columns) {
        if (c.name.empty()) throw Error(Errc::InvalidArgument, "column name must be nonempty");
        if (!seen.emplace(c.source_kind, c.name).second) {
            throw Error(Errc::DuplicateColumn,
                        "duplicate column '" + c.name + "' from source " + std::string(to_string(c.source_kind)));
        }
    }
}

}  // namespace

std::string_view to_string(SourceKind kind) noexcept {
    switch (kind) {
        case SourceKind::operation: return "operation";
        case SourceKind::monitoring: return "monitoring";
        case SourceKind::environment: return "environment";
    }
    return "operation";
}

std::optional<SourceKind> source_kind_from_string(std::string_view text) noexcept {
    if (text == "operation") return SourceKind::operation;
    if (text == "monitoring") return SourceKind::monitoring;
    if (text == "environment") return SourceKind::environment;
    return std::nullopt;
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{t}};
    const auto day = floor<days>(tp);
    const year_month_day ymd{day};
    const hh_mm_ss hms{tp - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

// Accepts YYYY-MM-DDTHH:MM:SS with an optional trailing Z; a space may
// replace the T.
std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    text = trim(text);
    if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
    if (text.size() != 19) return std::nullopt;
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
        text[16] != ':') {
        return std::nullopt;
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
        !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
        !parse_int(text.substr(14, 2), mi) || !parse_int(text.substr(17, 2), s)) {
        return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
    const sys_seconds tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return tp.time_since_epoch().count();
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

SampleTable::SampleTable(std::vector<Timestamp> timestamps, Matrix values, std::vector<AttributeMeta> columns)
    : timestamps_(std::move(timestamps)), values_(std::move(values)), columns_(std::move(columns)) {
    if (values_.rows() == 0 || timestamps_.empty()) throw Error(Errc::EmptyTable, "table has no rows");
    if (columns_.empty() || values_.cols() == 0) throw Error(Errc::InvalidArgument, "table has no columns");
    if (timestamps_.size() != values_.rows() || columns_.size() != values_.cols()) {
        throw Error(Errc::DimensionMismatch, "timestamps/columns do not match value matrix shape");
    }
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (timestamps_[i] <= timestamps_[i - 1]) {
            throw Error(Errc::NonMonotonicTimestamps,
                        "timestamp at row " + std::to_string(i) + " does not increase");
        }
    }
    for (double v : values_.data()) {
        if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "non-finite value in table");
    }
    check_columns(columns_);
}

SampleTable SampleTable::head(std::size_t count) const {
    count = std::min(count, rows());
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    return select_rows(idx);
}

SampleTable SampleTable::select_rows(std::span<const std::size_t> indices) const {
    std::vector<Timestamp> ts;
    Matrix vals(indices.size(), cols());
    ts.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto src = indices[r];
        if (src >= rows()) throw Error(Errc::InvalidArgument, "row index out of range");
        ts.push_back(timestamps_[src]);
        std::copy(values_.row(src).begin(), values_.row(src).end(), vals.row(r).begin());
    }
    return SampleTable(std::move(ts), std::move(vals), columns_);
}

SampleTable SampleTable::with_values(Matrix values) const {
    return SampleTable(timestamps_, std::move(values), columns_);
}

ParseResult parse_csv(std::string_view text, std::span<const AttributeMeta> schema) {
    const auto lines = split_lines(text);
    std::size_t li = 0;
    while (li < lines.size() && trim(lines[li]).empty()) ++li;
    if (li == lines.size()) throw Error(Errc::HeaderMismatch, "missing header row");

    auto header = lines[li++];
    if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
    const auto head_fields = split_fields(header);
    if (head_fields.size() != schema.size() + 1) {
        throw Error(Errc::HeaderMismatch, "header has " + std::to_string(head_fields.size() - 1) +
                                              " value columns, schema has " + std::to_string(schema.size()));
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
        if (trim(head_fields[j + 1]) != schema[j].name) {
            throw Error(Errc::HeaderMismatch, "header column " + std::to_string(j + 1) + " is '" +
                                                  std::string(trim(head_fields[j + 1])) + "', expected '" +
                                                  schema[j].name + "'");
        }
    }

    std::vector<Timestamp> ts;
    std::vector<double> data;
    std::size_t dropped = 0;
    std::vector<double> row(schema.size());
    for (; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const auto fields = split_fields(lines[li]);
        if (fields.size() != schema.size() + 1) {
            ++dropped;
            continue;
        }
        const auto t = parse_timestamp(fields[0]);
        bool ok = t.has_value();
        for (std::size_t j = 0; ok && j < schema.size(); ++j) {
            const auto v = parse_real(fields[j + 1]);
            ok = v.has_value() && std::isfinite(*v);
            if (ok) row[j] = *v;
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        ts.push_back(*t);
        data.insert(data.end(), row.begin(), row.end());
    }
    if (ts.empty()) throw Error(Errc::EmptyTable, "no valid rows (" + std::to_string(dropped) + " dropped)");
    const auto n = ts.size();
    return ParseResult{SampleTable(std::move(ts), Matrix(n, schema.size(), std::move(data)),
                                   std::vector<AttributeMeta>(schema.begin(), schema.end())),
                       dropped};
}

std::vector<AttributeMeta> schema_from_header(std::string_view text, SourceKind kind) {
    const auto lines = split_lines(text);
    for (auto line : lines) {
        if (trim(line).empty()) continue;
        if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
        const auto fields = split_fields(line);
        if (fields.size() < 2) throw Error(Errc::HeaderMismatch, "header needs a timestamp and one value column");
        std::vector<AttributeMeta> schema;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            schema.push_back(AttributeMeta{kind, std::string(trim(fields[j])), ""});
        }
        return schema;
    }
    throw Error(Errc::HeaderMismatch, "missing header row");
}

std::string serialize_csv(const SampleTable& table) {
    std::string out = "timestamp";
    for (const auto& c : table.columns()) {
        out += ',';
        out += c.name;
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        out += format_timestamp(table.timestamps()[r]);
        for (double v : table.values().row(r)) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

SampleTable align_by_timestamp(std::span<const SampleTable> tables) {
    if (tables.size() < 2) throw Error(Errc::InvalidArgument, "alignment needs at least two tables");

    std::vector<AttributeMeta> columns;
    for (const auto& t : tables) columns.insert(columns.end(), t.columns().begin(), t.columns().end());
    check_columns(columns);

    std::vector<Timestamp> common = tables.front().timestamps();
    for (std::size_t k = 1; k < tables.size(); ++k) {
        std::vector<Timestamp> next;
        const auto& other = tables[k].timestamps();
        std::set_intersection(common.begin(), common.end(), other.begin(), other.end(), std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) throw Error(Errc::EmptyIntersection, "tables share no timestamps");

    Matrix values(common.size(), columns.size());
    std::size_t col0 = 0;
    for (const auto& t : tables) {
        const auto& ts = t.timestamps();
        std::size_t src = 0;
        for (std::size_t r = 0; r < common.size(); ++r) {
            while (ts[src] != common[r]) ++src;
            for (std::size_t c = 0; c < t.cols(); ++c) values(r, col0 + c) = t.at(src, c);
        }
        col0 += t.cols();
    }
    return SampleTable(std::move(common), std::move(values), std::move(columns));
}

}  // namespace pdfuse
