#include "pdfuse/matrix.h"

#include "pdfuse/error.h"

#include <string>

namespace pdfuse {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(Errc::DimensionMismatch,
                    "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                        std::to_string(rows_ * cols_));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) {
            throw Error(Errc::DimensionMismatch, "ragged rows in matrix literal");
        }
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
    if (values.size() != rows_) throw Error(Errc::DimensionMismatch, "column length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
        case Errc::HeaderMismatch: return "HeaderMismatch";
        case Errc::EmptyTable: return "EmptyTable";
        case Errc::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
        case Errc::DuplicateColumn: return "DuplicateColumn";
        case Errc::EmptyIntersection: return "EmptyIntersection";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::NonPositiveInput: return "NonPositiveInput";
        case Errc::DegenerateColumn: return "DegenerateColumn";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::FrameMismatch: return "FrameMismatch";
        case Errc::InvalidMass: return "InvalidMass";
        case Errc::TotalConflict: return "TotalConflict";
        case Errc::EmptyConflict: return "EmptyConflict";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::LengthMismatch: return "LengthMismatch";
    }
    return "Unknown";
}

}  // namespace pdfuse
