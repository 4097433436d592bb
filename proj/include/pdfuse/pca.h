#pragma once

#include "pdfuse/matrix.h"

#include <cstddef>
#include <span>
#include <vector>

namespace pdfuse {

/// Sample covariance, divisor n - 1, symmetrized after accumulation.
Matrix covariance_matrix(const Matrix& data);

/// Covariance with nonnegative row weights, as if each row were replicated in
/// proportion to its weight. Divisor is the weight total; row weights need not
/// be integral. Weights summing to zero yield a zero matrix.
Matrix weighted_covariance(const Matrix& data, std::span<const double> weights);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k pairs with values[k]
    std::size_t sweeps = 0;
};

/// Cyclic Jacobi eigensolver for symmetric matrices up to 64 x 64.
/// Each eigenvector is signed so its largest-magnitude entry is positive
/// (first such entry on ties).
EigenDecomposition sym_eigen(const Matrix& a);

struct PcaResult {
    std::vector<double> mean;
    std::vector<double> eigenvalues;                // descending, tiny negatives clamped to 0
    std::vector<std::vector<double>> components;    // all p, same order as eigenvalues
    std::vector<double> explained_ratio;            // all zero when total variance is zero
    std::size_t retained = 1;                       // smallest m reaching the threshold, >= 1

    std::vector<double> project(std::span<const double> row) const;
    std::vector<double> reconstruct(std::span<const double> scores) const;
};

/// Smallest m whose cumulative ratio reaches `threshold`; always >= 1.
std::size_t retained_components(std::span<const double> explained_ratio, double threshold);

PcaResult principal_components(const Matrix& data, double variance_threshold);
PcaResult principal_components(const Matrix& data, std::span<const double> weights, double variance_threshold);

}  // namespace pdfuse
