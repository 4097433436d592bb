#pragma once

#include "pdfuse/matrix.h"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pdfuse {

struct ColumnStats {
    double mean = 0.0;
    double sample_std = 0.0;  // divisor n - 1
    double skewness = 0.0;    // m3 / m2^1.5, population moments; 0 for constant input
    double kurtosis = 0.0;    // excess, m4 / m2^2 - 3; 0 for constant input
};

ColumnStats column_stats(std::span<const double> column);

/// Box-Cox power transform; log branch when |lambda| <= 1e-10.
std::vector<double> boxcox(std::span<const double> column, double lambda);

/// Fitted transform for one column: y = boxcox(x + shift, lambda).
struct BoxCoxParam {
    double lambda = 1.0;
    double shift = 0.0;

    friend bool operator==(const BoxCoxParam&, const BoxCoxParam&) = default;
};

using BoxCoxParams = std::vector<BoxCoxParam>;

/// Candidate lambdas for the profile-likelihood search. Bounds must lie in [-5, 5].
struct LambdaGrid {
    double lo = -5.0;
    double hi = 5.0;
    double step = 0.01;

    void validate() const;
    std::vector<double> points() const;
};

/// 0 when every value is positive, otherwise 1 - min.
double positivity_shift(std::span<const double> column);

/// L(lambda) = -(n/2) ln var(y) + (lambda - 1) sum ln x, for positive x.
/// Returns -inf when the transformed variance is zero or not finite.
double boxcox_log_likelihood(std::span<const double> positive, double lambda);

/// Grid maximum-likelihood lambda. Ties go to the lambda closest to 1, then
/// the smaller one.
BoxCoxParam fit_lambda(std::span<const double> column, const LambdaGrid& grid = {});

struct ZScoreResult {
    Matrix values;
    std::vector<bool> degenerate;  // constant columns, output as zeros
};

ZScoreResult zscore_columns(const Matrix& m);

struct BcZscoreResult {
    Matrix values;
    BoxCoxParams params;
    std::vector<bool> degenerate;
};

/// Matrix form: per-column shift + Box-Cox, then column Z-score. Supplied
/// params are applied as-is (no refit). Constant columns get lambda 1 and are
/// flagged; columns with fewer than three rows are not fitted (lambda 1).
BcZscoreResult bc_zscore(const Matrix& input, const std::optional<BoxCoxParams>& params = std::nullopt,
                         const LambdaGrid& grid = {});

struct BcZscoreVector {
    std::vector<double> values;
    BoxCoxParam param;
    bool degenerate = false;
};

/// Vector form: the single-column case.
BcZscoreVector bc_zscore(std::span<const double> input, const std::optional<BoxCoxParam>& param = std::nullopt,
                         const LambdaGrid& grid = {});

/// Row-major N-d array; axis 0 is the sample axis.
struct NdArray {
    std::vector<std::size_t> shape;
    std::vector<double> data;
};

struct BcZscoreArray {
    NdArray values;
    BoxCoxParams params;
    std::vector<bool> degenerate;
};

/// Array form: viewed as shape[0] rows by prod(shape[1:]) columns, normalized
/// as a matrix and reshaped back.
BcZscoreArray bc_zscore(const NdArray& input, const std::optional<BoxCoxParams>& params = std::nullopt,
                        const LambdaGrid& grid = {});

}  // namespace pdfuse
