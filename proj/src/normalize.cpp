#include "pdfuse/normalize.h"

#include "pdfuse/error.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pdfuse {

namespace {

constexpr double kLogBranch = 1e-10;
constexpr double kLambdaBound = 5.0;

// Corrected two-pass mean: first estimate plus the mean residual.
double stable_mean(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    const double m = sum / static_cast<double>(x.size());
    double resid = 0.0;
    for (double v : x) resid += v - m;
    return m + resid / static_cast<double>(x.size());
}

bool is_constant(std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *lo == *hi;
}

void require_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "non-finite input value");
}

double transform_one(double lambda, double log_x) {
    if (std::abs(lambda) <= kLogBranch) return log_x;
    return std::expm1(lambda * log_x) / lambda;
}

}  // namespace

ColumnStats column_stats(std::span<const double> column) {
    if (column.size() < 2) throw Error(Errc::TooFewSamples, "column statistics need n >= 2");
    require_finite(column);
    const auto n = static_cast<double>(column.size());
    ColumnStats s;
    s.mean = stable_mean(column);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : column) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.sample_std = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0 && !is_constant(column)) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        s.sample_std = 0.0;
    }
    return s;
}

std::vector<double> boxcox(std::span<const double> column, double lambda) {
    if (!std::isfinite(lambda)) throw Error(Errc::InvalidArgument, "lambda must be finite");
    std::vector<double> out(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        const double x = column[i];
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw Error(Errc::NonPositiveInput, "Box-Cox input at index " + std::to_string(i) + " is not positive");
        }
        out[i] = lambda == 1.0 ? x - 1.0 : transform_one(lambda, std::log(x));
    }
    return out;
}

void LambdaGrid::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || step <= 0.0 || lo > hi ||
        lo < -kLambdaBound || hi > kLambdaBound) {
        throw Error(Errc::InvalidArgument, "lambda grid must satisfy -5 <= lo <= hi <= 5 and step > 0");
    }
}

std::vector<double> LambdaGrid::points() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Snap to 1e-9 so 0 and 1 land exactly on the grid.
        pts[i] = std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
    }
    return pts;
}

double positivity_shift(std::span<const double> column) {
    const double mn = *std::min_element(column.begin(), column.end());
    return mn > 0.0 ? 0.0 : 1.0 - mn;
}

namespace {

// Box-Cox output minus the transform of the geometric mean. Keeps full
// relative precision when the spread of the column is tiny next to its level.
std::vector<double> boxcox_offset_from_logs(std::span<const double> logs, double lambda) {
    const double ref = stable_mean(logs);
    const double level = std::exp(lambda * ref);
    std::vector<double> y(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const double d = logs[i] - ref;
        y[i] = std::abs(lambda) <= kLogBranch ? d : level * std::expm1(lambda * d) / lambda;
    }
    return y;
}

// Box-Cox output up to an additive constant, which Z-scoring removes.
std::vector<double> boxcox_offset(std::span<const double> positive, double lambda) {
    if (lambda == 1.0) return {positive.begin(), positive.end()};
    std::vector<double> logs(positive.size());
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (!(positive[i] > 0.0)) {
            throw Error(Errc::NonPositiveInput, "Box-Cox input at index " + std::to_string(i) + " is not positive");
        }
        logs[i] = std::log(positive[i]);
    }
    return boxcox_offset_from_logs(logs, lambda);
}

double log_likelihood_from_logs(std::span<const double> logs, double sum_log, double lambda) {
    const auto n = static_cast<double>(logs.size());
    const auto y = boxcox_offset_from_logs(logs, lambda);
    const double mean = stable_mean(y);
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    const double var = ss / n;
    if (!(var > 0.0) || !std::isfinite(var)) return -std::numeric_limits<double>::infinity();
    return -0.5 * n * std::log(var) + (lambda - 1.0) * sum_log;
}

// Profile log-likelihood at every grid point. Between exact resyncs,
// exp(lambda * d) advances by the per-sample factor exp(step * d); points with
// small |lambda * d| use expm1 directly so that exp - 1 does not cancel.
std::vector<double> grid_log_likelihoods(std::span<const double> logs, double sum_log,
                                         std::span<const double> lambdas, double step) {
    constexpr std::size_t kResync = 8;
    constexpr double kDirect = 0.5;
    const std::size_t n = logs.size();
    const auto nd = static_cast<double>(n);
    const double ref = stable_mean(logs);
    std::vector<double> d(n), ratio(n), cur(n), w(n);
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = logs[i] - ref;
        ratio[i] = std::exp(step * d[i]);
        dmax = std::max(dmax, std::abs(d[i]));
    }

    std::vector<double> out(lambdas.size(), -std::numeric_limits<double>::infinity());
    bool synced = false;
    double sync_lambda = 0.0;
    std::size_t since_sync = 0;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double lambda = lambdas[j];
        if (std::abs(lambda) <= kLogBranch) {
            std::copy(d.begin(), d.end(), w.begin());
            synced = false;
        } else if (std::abs(lambda) * dmax < kDirect) {
            for (std::size_t i = 0; i < n; ++i) w[i] = std::expm1(lambda * d[i]) / lambda;
            synced = false;
        } else {
            const double nominal = sync_lambda + static_cast<double>(since_sync + 1) * step;
            if (!synced || since_sync + 1 >= kResync || std::abs(nominal - lambda) > 1e-12) {
                for (std::size_t i = 0; i < n; ++i) cur[i] = std::exp(lambda * d[i]);
                synced = true;
                sync_lambda = lambda;
                since_sync = 0;
            } else {
                for (std::size_t i = 0; i < n; ++i) cur[i] *= ratio[i];
                ++since_sync;
            }
            for (std::size_t i = 0; i < n; ++i) w[i] = (cur[i] - 1.0) / lambda;
        }
        const double mean = stable_mean(w);
        double ss = 0.0;
        for (double v : w) ss += (v - mean) * (v - mean);
        const double var = ss / nd;
        if (!(var > 0.0) || !std::isfinite(var)) continue;
        // the dropped factor exp(lambda * ref) scales the variance by its square
        const double ll = -0.5 * nd * (std::log(var) + 2.0 * lambda * ref) + (lambda - 1.0) * sum_log;
        if (std::isfinite(ll)) out[j] = ll;
    }
    return out;
}

}  // namespace

double boxcox_log_likelihood(std::span<const double> positive, double lambda) {
    std::vector<double> logs(positive.size());
    double sum_log = 0.0;
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (!(positive[i] > 0.0)) throw Error(Errc::NonPositiveInput, "likelihood needs positive input");
        logs[i] = std::log(positive[i]);
        sum_log += logs[i];
    }
    return log_likelihood_from_logs(logs, sum_log, lambda);
}

BoxCoxParam fit_lambda(std::span<const double> column, const LambdaGrid& grid) {
    if (column.size() < 3) throw Error(Errc::TooFewSamples, "lambda fit needs n >= 3");
    require_finite(column);
    if (is_constant(column)) throw Error(Errc::DegenerateColumn, "cannot fit lambda on a constant column");

    BoxCoxParam best{1.0, positivity_shift(column)};
    std::vector<double> logs(column.size());
    double sum_log = 0.0;
    for (std::size_t i = 0; i < column.size(); ++i) {
        logs[i] = std::log(column[i] + best.shift);
        sum_log += logs[i];
    }

    const auto lambdas = grid.points();
    const auto lls = grid_log_likelihoods(logs, sum_log, lambdas, grid.step);
    double best_ll = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double lambda = lambdas[j], ll = lls[j];
        if (!std::isfinite(ll)) continue;
        bool take = !found || ll > best_ll;
        if (found && ll == best_ll) {
            const double da = std::abs(lambda - 1.0), db = std::abs(best.lambda - 1.0);
            take = da < db || (da == db && lambda < best.lambda);
        }
        if (take) {
            best.lambda = lambda;
            best_ll = ll;
            found = true;
        }
    }
    if (!found) throw Error(Errc::DegenerateColumn, "profile likelihood is not finite anywhere on the grid");
    return best;
}

ZScoreResult zscore_columns(const Matrix& m) {
    if (m.rows() < 2) throw Error(Errc::TooFewSamples, "Z-score needs n >= 2");
    ZScoreResult out{Matrix(m.rows(), m.cols()), std::vector<bool>(m.cols(), false)};
    const auto n = static_cast<double>(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto col = m.column(c);
        require_finite(col);
        if (is_constant(col)) {
            out.degenerate[c] = true;
            continue;
        }
        const double mean = stable_mean(col);
        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / (n - 1.0));
        if (!(sd > 0.0)) {
            out.degenerate[c] = true;
            continue;
        }
        for (std::size_t r = 0; r < m.rows(); ++r) out.values(r, c) = (col[r] - mean) / sd;
    }
    return out;
}

BcZscoreResult bc_zscore(const Matrix& input, const std::optional<BoxCoxParams>& params, const LambdaGrid& grid) {
    if (input.rows() < 2) throw Error(Errc::TooFewSamples, "BC-Zscore needs at least two rows");
    if (params && params->size() != input.cols()) {
        throw Error(Errc::DimensionMismatch, "supplied Box-Cox params cover " + std::to_string(params->size()) +
                                                 " columns, input has " + std::to_string(input.cols()));
    }
    BoxCoxParams fitted(input.cols());
    Matrix transformed(input.rows(), input.cols());
    for (std::size_t c = 0; c < input.cols(); ++c) {
        auto col = input.column(c);
        require_finite(col);
        BoxCoxParam p;
        if (params) {
            p = (*params)[c];
        } else if (is_constant(col) || col.size() < 3) {
            p = BoxCoxParam{1.0, positivity_shift(col)};
        } else {
            p = fit_lambda(col, grid);
        }
        for (double& v : col) v += p.shift;
        transformed.set_column(c, boxcox_offset(col, p.lambda));
        fitted[c] = p;
    }
    auto z = zscore_columns(transformed);
    return BcZscoreResult{std::move(z.values), std::move(fitted), std::move(z.degenerate)};
}

BcZscoreVector bc_zscore(std::span<const double> input, const std::optional<BoxCoxParam>& param,
                         const LambdaGrid& grid) {
    Matrix m(input.size(), 1, std::vector<double>(input.begin(), input.end()));
    std::optional<BoxCoxParams> ps;
    if (param) ps = BoxCoxParams{*param};
    auto r = bc_zscore(m, ps, grid);
    return BcZscoreVector{r.values.column(0), r.params.front(), r.degenerate.front()};
}

BcZscoreArray bc_zscore(const NdArray& input, const std::optional<BoxCoxParams>& params, const LambdaGrid& grid) {
    if (input.shape.empty()) throw Error(Errc::InvalidArgument, "array needs at least one axis");
    const std::size_t total = std::accumulate(input.shape.begin(), input.shape.end(), std::size_t{1},
                                              std::multiplies<>());
    if (total != input.data.size()) throw Error(Errc::DimensionMismatch, "array data does not match its shape");
    const std::size_t rows = input.shape.front();
    const std::size_t cols = rows == 0 ? 0 : total / rows;
    auto r = bc_zscore(Matrix(rows, cols, input.data), params, grid);
    return BcZscoreArray{NdArray{input.shape, r.values.data()}, std::move(r.params), std::move(r.degenerate)};
}

}  // namespace pdfuse
