#include "pdfuse/fusion.h"

#include "pdfuse/error.h"
#include "pdfuse/pca.h"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pdfuse {

namespace {

constexpr double kNoConflict = 1e-12;
constexpr double kDegenerateScore = 1e-12;

ConflictMatrix matrix_from_terms(std::size_t hypotheses, const std::vector<ProductTerm>& conflicting) {
    ConflictMatrix cm;
    cm.hypotheses = hypotheses;
    for (const auto& term : conflicting) {
        const auto joint = term.first | term.second;
        const double share = term.mass / static_cast<double>(joint.cardinality());
        ConflictRow row{term.first, term.second, term.mass, std::vector<double>(hypotheses, 0.0)};
        for (std::size_t h = 0; h < hypotheses; ++h)
            if (joint.contains(h)) row.attribution[h] = share;
        cm.rows.push_back(std::move(row));
    }
    return cm;
}

using StepCallback = std::function<void(std::size_t step, const MassFunction& combined)>;

// Pairwise left fold; returns the final mass and fills per-step redistribution.
MassFunction fold(std::span<const MassFunction> masses, FusionMethod method, double threshold,
                  std::vector<double>& redistributed, std::size_t& retained, const StepCallback& on_step) {
    if (masses.size() < 2) throw Error(Errc::InvalidArgument, "fusion needs at least two mass functions");
    const auto& first = masses.front();
    redistributed.assign(first.frame().size(), 0.0);
    retained = 0;
    MassFunction acc = first;
    for (std::size_t i = 1; i < masses.size(); ++i) {
        if (method == FusionMethod::ds) {
            acc = dempster_combine(acc, masses[i]);
        } else {
            auto step = pca_ds_step(acc, masses[i], threshold);
            for (std::size_t h = 0; h < redistributed.size(); ++h) redistributed[h] += step.redistributed[h];
            if (step.reliability) retained = std::max(retained, step.reliability->retained);
            acc = std::move(step.combined);
        }
        if (on_step) on_step(i, acc);
    }
    return acc;
}

}  // namespace

double ConflictMatrix::total_mass() const noexcept {
    double t = 0.0;
    for (const auto& r : rows) t += r.product_mass;
    return t;
}

Matrix ConflictMatrix::attribution_matrix() const {
    Matrix m(rows.size(), hypotheses);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t h = 0; h < hypotheses; ++h) m(r, h) = rows[r].attribution[h];
    return m;
}

std::vector<double> ConflictMatrix::row_masses() const {
    std::vector<double> w;
    w.reserve(rows.size());
    for (const auto& r : rows) w.push_back(r.product_mass);
    return w;
}

ConflictMatrix build_conflict_matrix(const MassFunction& m1, const MassFunction& m2) {
    const auto products = conjunctive_products(m1, m2);
    return matrix_from_terms(m1.frame().size(), products.conflicting);
}

ReliabilityWeights component_reliability(const ConflictMatrix& cm, double threshold) {
    if (cm.empty()) throw Error(Errc::EmptyConflict, "no conflicting products to analyse");
    const auto pca = principal_components(cm.attribution_matrix(), cm.row_masses(), threshold);

    ReliabilityWeights out;
    out.retained = pca.retained;
    out.raw_scores.assign(cm.hypotheses, 0.0);
    for (std::size_t k = 0; k < pca.retained; ++k)
        for (std::size_t h = 0; h < cm.hypotheses; ++h)
            out.raw_scores[h] += pca.explained_ratio[k] * std::abs(pca.components[k][h]);

    std::vector<double> basis = out.raw_scores;
    const bool degenerate =
        std::all_of(basis.begin(), basis.end(), [](double s) { return s < kDegenerateScore; });
    if (degenerate) {
        out.fallback = true;
        std::fill(basis.begin(), basis.end(), 0.0);
        for (const auto& row : cm.rows)
            for (std::size_t h = 0; h < cm.hypotheses; ++h) basis[h] += row.attribution[h];
    }
    double total = 0.0;
    for (double b : basis) total += b;
    out.weights.resize(cm.hypotheses);
    for (std::size_t h = 0; h < cm.hypotheses; ++h) out.weights[h] = basis[h] / total;
    return out;
}

std::string_view to_string(FusionMethod method) noexcept { return method == FusionMethod::ds ? "ds" : "pca-ds"; }

std::optional<FusionMethod> fusion_method_from_string(std::string_view text) noexcept {
    if (text == "ds") return FusionMethod::ds;
    if (text == "pca-ds" || text == "pca_ds") return FusionMethod::pca_ds;
    return std::nullopt;
}

PcaDsStep pca_ds_step(const MassFunction& m1, const MassFunction& m2, double threshold) {
    const auto products = conjunctive_products(m1, m2);
    const double conflict = products.conflict();
    const double agreement = products.agreement();
    const std::size_t n = m1.frame().size();
    if (conflict <= kNoConflict) {
        return PcaDsStep{dempster_combine(m1, m2), agreement, conflict, std::vector<double>(n, 0.0), std::nullopt};
    }

    auto partial = products.intersections();
    auto reliability = component_reliability(matrix_from_terms(n, products.conflicting), threshold);
    std::vector<double> redistributed(n, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
        redistributed[h] = conflict * reliability.weights[h];
        if (redistributed[h] > 0.0) partial[FocalSet::singleton(h)] += redistributed[h];
    }
    return PcaDsStep{MassFunction(m1.frame_ptr(), partial), agreement, conflict, std::move(redistributed),
                     std::move(reliability)};
}

FusionReport fuse(std::span<const MassFunction> masses, FusionMethod method, double threshold) {
    if (masses.size() < 2) throw Error(Errc::InvalidArgument, "fusion needs at least two mass functions");
    std::vector<StepInterval> intervals;
    const std::size_t n = masses.front().frame().size();
    std::vector<double> redistributed;
    std::size_t retained = 0;
    auto combined = fold(masses, method, threshold, redistributed, retained,
                         [&](std::size_t step, const MassFunction& m) {
                             for (std::size_t h = 0; h < n; ++h)
                                 intervals.push_back(
                                     StepInterval{step, h, uncertainty_interval(m, FocalSet::singleton(h))});
                         });

    double moved = 0.0;
    for (double r : redistributed) moved += r;
    std::vector<double> weights(n, 0.0);
    if (moved > 0.0)
        for (std::size_t h = 0; h < n; ++h) weights[h] = redistributed[h] / moved;

    return FusionReport{method,           std::move(combined), joint_conflict(masses), std::move(weights),
                        retained,         std::move(intervals)};
}

FusionReport pca_ds_combine(std::span<const MassFunction> masses, double threshold) {
    return fuse(masses, FusionMethod::pca_ds, threshold);
}

FusionTrace fuse_sequence(std::span<const MassFunction> masses, FusionMethod method, FocalSet watch,
                          double threshold) {
    if (masses.size() < 2) throw Error(Errc::InvalidArgument, "fusion needs at least two mass functions");
    if (!watch.subset_of(masses.front().universe())) {
        throw Error(Errc::FrameMismatch, "watched set lies outside the frame");
    }
    FusionTrace trace;
    std::vector<double> redistributed;
    std::size_t retained = 0;
    fold(masses, method, threshold, redistributed, retained, [&](std::size_t step, const MassFunction& m) {
        trace.points.push_back(SequencePoint{step, uncertainty_interval(m, watch)});
    });
    trace.best_step = trace.points.front().step;
    double best_mu = trace.points.front().interval.mu;
    for (const auto& p : trace.points)
        if (p.interval.mu < best_mu) {
            best_mu = p.interval.mu;
            trace.best_step = p.step;
        }
    return trace;
}

}  // namespace pdfuse
