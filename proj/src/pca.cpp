#include "pdfuse/pca.h"

#include "pdfuse/error.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pdfuse {

namespace {

constexpr std::size_t kMaxDim = 64;
constexpr std::size_t kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;
constexpr double kSymmetryTol = 1e-9;
constexpr double kClamp = 1e-12;
constexpr double kCumulativeSlack = 1e-12;
// Total variance at or below (kRelativeSpread * max|x|)^2 is rounding noise.
constexpr double kRelativeSpread = 1e-12;

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_off_diagonal(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

void symmetrize(Matrix& c) {
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = i + 1; j < c.cols(); ++j) {
            const double v = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = v;
            c(j, i) = v;
        }
}

// A <- P^T A P and V <- V P for the plane rotation zeroing a(p, q).
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

std::vector<double> column_means(const Matrix& data, std::span<const double> weights, double total) {
    std::vector<double> mean(data.cols(), 0.0);
    if (total <= 0.0) return mean;
    for (std::size_t r = 0; r < data.rows(); ++r)
        for (std::size_t c = 0; c < data.cols(); ++c) mean[c] += weights[r] * data(r, c);
    for (double& m : mean) m /= total;
    return mean;
}

PcaResult pca_from_covariance(std::vector<double> mean, const Matrix& cov, double threshold, double data_scale) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(Errc::InvalidArgument, "variance threshold must lie in (0, 1]");
    }
    auto eig = sym_eigen(cov);
    PcaResult out;
    out.mean = std::move(mean);
    const std::size_t p = cov.rows();
    out.eigenvalues.resize(p);
    out.components.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
        double ev = eig.values[k];
        if (ev < 0.0 && ev >= -kClamp) ev = 0.0;
        out.eigenvalues[k] = ev;
        out.components[k] = eig.vectors.column(k);
    }
    double total = 0.0;
    for (double ev : out.eigenvalues) total += std::max(ev, 0.0);
    out.explained_ratio.assign(p, 0.0);
    const double floor = kRelativeSpread * data_scale;
    if (total > floor * floor) {
        for (std::size_t k = 0; k < p; ++k) out.explained_ratio[k] = std::max(out.eigenvalues[k], 0.0) / total;
    }
    out.retained = retained_components(out.explained_ratio, threshold);
    return out;
}

}  // namespace

Matrix covariance_matrix(const Matrix& data) {
    if (data.rows() < 2) throw Error(Errc::TooFewSamples, "covariance needs n >= 2");
    const std::vector<double> ones(data.rows(), 1.0);
    const auto mean = column_means(data, ones, static_cast<double>(data.rows()));
    const std::size_t p = data.cols();
    Matrix c(p, p);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            const double di = data(r, i) - mean[i];
            for (std::size_t j = i; j < p; ++j) c(i, j) += di * (data(r, j) - mean[j]);
        }
    }
    const double denom = static_cast<double>(data.rows() - 1);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            c(i, j) /= denom;
            c(j, i) = c(i, j);
        }
    symmetrize(c);
    return c;
}

Matrix weighted_covariance(const Matrix& data, std::span<const double> weights) {
    if (weights.size() != data.rows()) throw Error(Errc::DimensionMismatch, "one weight per row required");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidArgument, "row weights must be >= 0");
        total += w;
    }
    const std::size_t p = data.cols();
    Matrix c(p, p);
    if (total <= 0.0) return c;
    const auto mean = column_means(data, weights, total);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            const double di = weights[r] * (data(r, i) - mean[i]);
            for (std::size_t j = i; j < p; ++j) c(i, j) += di * (data(r, j) - mean[j]);
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            c(i, j) /= total;
            c(j, i) = c(i, j);
        }
    return c;
}

EigenDecomposition sym_eigen(const Matrix& input) {
    const std::size_t n = input.rows();
    if (n == 0 || n != input.cols()) throw Error(Errc::InvalidArgument, "eigensolver needs a nonempty square matrix");
    if (n > kMaxDim) throw Error(Errc::InvalidArgument, "eigensolver supports p <= 64, got " + std::to_string(n));
    const double scale = std::max(1.0, max_abs(input));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(input(i, j) - input(j, i)) > kSymmetryTol * scale) {
                throw Error(Errc::NotSymmetric, "matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") differs from its transpose");
            }

    Matrix a = input;
    symmetrize(a);
    Matrix v = Matrix::identity(n);
    const double tol = kOffDiagonalTol * scale;

    std::size_t sweeps = 0;
    while (max_off_diagonal(a) >= tol) {
        if (sweeps == kMaxSweeps) throw Error(Errc::NoConvergence, "Jacobi iteration exceeded 100 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (a(p, q) != 0.0) rotate(a, v, p, q);
        ++sweeps;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition out{std::vector<double>(n), Matrix(n, n), sweeps};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src);
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v(i, src)) > std::abs(v(pivot, src))) pivot = i;
        const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
    }
    return out;
}

std::size_t retained_components(std::span<const double> explained_ratio, double threshold) {
    double cumulative = 0.0;
    for (std::size_t k = 0; k < explained_ratio.size(); ++k) {
        cumulative += explained_ratio[k];
        if (cumulative >= threshold - kCumulativeSlack) return k + 1;
    }
    return explained_ratio.empty() ? 0 : 1;
}

std::vector<double> PcaResult::project(std::span<const double> row) const {
    std::vector<double> scores(components.size(), 0.0);
    for (std::size_t k = 0; k < components.size(); ++k)
        for (std::size_t i = 0; i < row.size(); ++i) scores[k] += (row[i] - mean[i]) * components[k][i];
    return scores;
}

std::vector<double> PcaResult::reconstruct(std::span<const double> scores) const {
    std::vector<double> row = mean;
    for (std::size_t k = 0; k < scores.size(); ++k)
        for (std::size_t i = 0; i < row.size(); ++i) row[i] += scores[k] * components[k][i];
    return row;
}

PcaResult principal_components(const Matrix& data, double variance_threshold) {
    const auto cov = covariance_matrix(data);
    const std::vector<double> ones(data.rows(), 1.0);
    return pca_from_covariance(column_means(data, ones, static_cast<double>(data.rows())), cov,
                               variance_threshold, max_abs(data));
}

PcaResult principal_components(const Matrix& data, std::span<const double> weights, double variance_threshold) {
    if (data.rows() == 0) throw Error(Errc::TooFewSamples, "weighted PCA needs at least one row");
    const auto cov = weighted_covariance(data, weights);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    return pca_from_covariance(column_means(data, weights, total), cov, variance_threshold, max_abs(data));
}

}  // namespace pdfuse
