#pragma once

#include "pdfuse/evidence.h"
#include "pdfuse/matrix.h"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pdfuse {

inline constexpr double kDefaultVarianceThreshold = 0.85;

/// One conflicting product m1(first) * m2(second) with first ∩ second = ∅,
/// spread uniformly over the singletons of first ∪ second.
struct ConflictRow {
    FocalSet first;
    FocalSet second;
    double product_mass = 0.0;
    std::vector<double> attribution;  // per hypothesis, sums to product_mass
};

struct ConflictMatrix {
    std::size_t hypotheses = 0;
    std::vector<ConflictRow> rows;

    bool empty() const noexcept { return rows.empty(); }
    double total_mass() const noexcept;
    Matrix attribution_matrix() const;
    std::vector<double> row_masses() const;
};

ConflictMatrix build_conflict_matrix(const MassFunction& m1, const MassFunction& m2);

struct ReliabilityWeights {
    std::vector<double> weights;     // nonnegative, sums to 1
    std::vector<double> raw_scores;  // per-hypothesis component reliability before normalization
    std::size_t retained = 0;        // principal components used
    bool fallback = false;           // zero-variance case: attribution column shares
};

/// Principal components of the attribution rows (row-weighted by product
/// mass); hypothesis h scores sum_k ratio_k * |loading_k[h]| over the
/// retained components.
ReliabilityWeights component_reliability(const ConflictMatrix& cm, double threshold = kDefaultVarianceThreshold);

enum class FusionMethod { ds, pca_ds };

std::string_view to_string(FusionMethod method) noexcept;
std::optional<FusionMethod> fusion_method_from_string(std::string_view text) noexcept;

/// Result of one pairwise PCA-DS combination.
struct PcaDsStep {
    MassFunction combined;
    double agreement = 0.0;             // K: product mass on nonempty intersections
    double conflict = 0.0;              // product mass on empty intersections
    std::vector<double> redistributed;  // conflict mass handed to each singleton
    std::optional<ReliabilityWeights> reliability;
};

/// Dempster's rule when conflict <= 1e-12; otherwise the conflict mass goes to
/// singletons in proportion to component reliability instead of being
/// normalized away.
PcaDsStep pca_ds_step(const MassFunction& m1, const MassFunction& m2, double threshold = kDefaultVarianceThreshold);

struct StepInterval {
    std::size_t step = 0;  // 1-based fold index
    std::size_t hypothesis = 0;
    BeliefInterval interval;
};

struct FusionReport {
    FusionMethod method;
    MassFunction combined;
    double conflict_total = 0.0;               // classical 1 - K over all inputs
    std::vector<double> reliability_weights;   // share of redistributed mass per hypothesis
    std::size_t retained_components = 0;       // largest m used by any step
    std::vector<StepInterval> step_intervals;  // every singleton after every step
};

FusionReport pca_ds_combine(std::span<const MassFunction> masses, double threshold = kDefaultVarianceThreshold);

/// Report for either method; the ds branch throws TotalConflict like dempster_combine.
FusionReport fuse(std::span<const MassFunction> masses, FusionMethod method,
                  double threshold = kDefaultVarianceThreshold);

struct SequencePoint {
    std::size_t step = 0;
    BeliefInterval interval;
};

struct FusionTrace {
    std::vector<SequencePoint> points;
    std::size_t best_step = 0;  // step with minimal mu, earliest on ties
};

/// Interval of `watch` after each incremental combination.
FusionTrace fuse_sequence(std::span<const MassFunction> masses, FusionMethod method, FocalSet watch,
                          double threshold = kDefaultVarianceThreshold);

}  // namespace pdfuse
