#include "oracles.h"

#include <cmath>

namespace oracle {

using pdfuse::FocalSet;

DenseMass to_dense(const pdfuse::MassFunction& m) {
    DenseMass d(std::size_t{1} << m.frame().size(), 0.0);
    for (const auto& [set, value] : m.masses()) d[set.bits()] += value;
    return d;
}

DenseMass brute_force_dempster(const DenseMass& m1, const DenseMass& m2) {
    DenseMass out(m1.size(), 0.0);
    long double conflict = 0.0L;
    for (std::uint32_t a = 0; a < m1.size(); ++a)
        for (std::uint32_t b = 0; b < m2.size(); ++b) {
            const long double p = static_cast<long double>(m1[a]) * m2[b];
            if ((a & b) == 0)
                conflict += p;
            else
                out[a & b] += static_cast<double>(p);
        }
    const long double k = 1.0L - conflict;
    for (double& v : out) v = static_cast<double>(v / k);
    return out;
}

double brute_belief(const DenseMass& m, std::uint32_t a) {
    long double s = 0.0L;
    for (std::uint32_t b = 1; b < m.size(); ++b)
        if ((b & ~a) == 0) s += m[b];
    return static_cast<double>(s);
}

double brute_plausibility(const DenseMass& m, std::uint32_t a) {
    long double s = 0.0L;
    for (std::uint32_t b = 1; b < m.size(); ++b)
        if ((b & a) != 0) s += m[b];
    return static_cast<double>(s);
}

namespace {

pdfuse::MassFunction weights_to_mass(const pdfuse::FramePtr& frame, const std::vector<std::uint32_t>& sets,
                                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(sets.size());
    double total = 0.0;
    for (double& x : w) total += (x = u(rng));
    pdfuse::MassAssignment a;
    for (std::size_t i = 0; i < sets.size(); ++i) a[FocalSet{sets[i]}] += w[i] / total;
    return pdfuse::MassFunction(frame, a);
}

}  // namespace

pdfuse::MassFunction random_mass(std::mt19937_64& rng, const pdfuse::FramePtr& frame, std::size_t max_focal) {
    const std::uint32_t full = (std::uint32_t{1} << frame->size()) - 1u;
    if (max_focal == 0) max_focal = full;
    std::uniform_int_distribution<std::size_t> count(1, max_focal);
    std::uniform_int_distribution<std::uint32_t> pick(1, full);
    const auto k = count(rng);
    std::vector<std::uint32_t> sets;
    for (std::size_t i = 0; i < k; ++i) sets.push_back(pick(rng));
    return weights_to_mass(frame, sets, rng);
}

pdfuse::MassFunction random_mass_containing(std::mt19937_64& rng, const pdfuse::FramePtr& frame, std::uint32_t core) {
    const std::uint32_t full = (std::uint32_t{1} << frame->size()) - 1u;
    std::uniform_int_distribution<std::uint32_t> pick(0, full);
    std::uniform_int_distribution<std::size_t> count(1, 4);
    const auto k = count(rng);
    std::vector<std::uint32_t> sets;
    for (std::size_t i = 0; i < k; ++i) sets.push_back(pick(rng) | core);
    return weights_to_mass(frame, sets, rng);
}

Moments moments(const std::vector<double>& x) {
    const auto n = static_cast<long double>(x.size());
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= n;
    long double m2 = 0.0L, m3 = 0.0L;
    for (double v : x) {
        const long double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    Moments out{};
    out.mean = static_cast<double>(mean);
    out.sample_std = x.size() > 1 ? static_cast<double>(std::sqrt(m2 / (n - 1.0L))) : 0.0;
    const long double pm2 = m2 / n, pm3 = m3 / n;
    out.skewness = pm2 > 0.0L ? static_cast<double>(pm3 / std::pow(pm2, 1.5L)) : 0.0;
    return out;
}

double eigen_residual(const pdfuse::Matrix& a, const std::vector<double>& values, const pdfuse::Matrix& vectors) {
    double worst = 0.0;
    const auto p = a.rows();
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t i = 0; i < p; ++i) {
            long double av = 0.0L;
            for (std::size_t j = 0; j < p; ++j) av += static_cast<long double>(a(i, j)) * vectors(j, k);
            worst = std::max(worst, static_cast<double>(std::fabs(av - values[k] * vectors(i, k))));
        }
    return worst;
}

double orthonormality_error(const pdfuse::Matrix& v) {
    double worst = 0.0;
    for (std::size_t a = 0; a < v.cols(); ++a)
        for (std::size_t b = 0; b < v.cols(); ++b) {
            long double dot = 0.0L;
            for (std::size_t i = 0; i < v.rows(); ++i) dot += static_cast<long double>(v(i, a)) * v(i, b);
            worst = std::max(worst, static_cast<double>(std::fabs(dot - (a == b ? 1.0L : 0.0L))));
        }
    return worst;
}

pdfuse::Matrix random_symmetric(std::mt19937_64& rng, std::size_t p) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    pdfuse::Matrix m(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

pdfuse::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 100.0);
    pdfuse::Matrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        const double s = scale(rng), off = nd(rng) * 50.0;
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = off + s * nd(rng);
    }
    return m;
}

}  // namespace oracle
