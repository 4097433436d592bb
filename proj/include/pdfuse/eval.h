#pragma once

#include "pdfuse/evidence.h"
#include "pdfuse/fusion.h"
#include "pdfuse/normalize.h"
#include "pdfuse/simgen.h"
#include "pdfuse/tabular.h"

#include <cstdint>
#include <span>
#include <vector>

namespace pdfuse {

/// Converts normalized source rows into mass functions:
/// score_h = exp(-|row - prototype_h| / temperature),
/// m(h) = (1 - floor) * score_h / sum(score), m(U) = floor.
/// Distance scale of the evidence softmax, in normalized feature units.
inline constexpr double kDefaultTemperature = 0.1;

struct EvidenceBuilder {
    FramePtr frame;
    // [source][hypothesis] -> feature vector; empty when the class had no
    // training rows, in which case that hypothesis scores zero.
    std::vector<std::vector<std::vector<double>>> prototypes;
    double temperature = kDefaultTemperature;
    double ignorance_floor = 0.1;

    void validate() const;
};

/// Class means of the training rows of every source.
EvidenceBuilder fit_evidence_builder(FramePtr frame, std::span<const Matrix> sources,
                                     std::span<const std::size_t> labels, double temperature = kDefaultTemperature,
                                     double ignorance_floor = 0.1);

MassFunction build_source_evidence(std::span<const double> row, std::size_t source, const EvidenceBuilder& builder);

/// One mass per source; rows[s] is the row of source s.
std::vector<MassFunction> build_evidence(std::span<const std::vector<double>> rows, const EvidenceBuilder& builder);

/// Maximal pignistic probability, lowest frame index on ties.
std::size_t decide(const MassFunction& m);

/// Nearest prototype of one source; ties to the lowest index.
std::size_t nearest_prototype(std::span<const double> row, std::size_t source, const EvidenceBuilder& builder);

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels);

struct ColumnSummary {
    SourceKind source;
    std::string name;
    BoxCoxParam param;
    ColumnStats before;
    ColumnStats after;
    bool degenerate = false;
};

struct Experiment1Result {
    std::vector<SampleTable> normalized;  // one per input, restricted to common timestamps
    std::vector<ColumnSummary> columns;
    std::vector<std::string> excerpt_columns;
    std::vector<Timestamp> excerpt_timestamps;
    Matrix excerpt;  // 10 seeded rows (fewer if the table is shorter)
};

/// Column order of the excerpt when all six scenario columns are present.
const std::vector<std::string>& excerpt_layout();

Experiment1Result run_experiment1(std::span<const SampleTable> tables, std::uint64_t excerpt_seed = 0,
                                  const LambdaGrid& grid = {});

struct Experiment2Options {
    std::vector<std::size_t> sizes;  // extra leading-row counts for the accuracy series
    std::vector<FusionMethod> methods{FusionMethod::ds, FusionMethod::pca_ds};
    std::uint64_t split_seed = 7;
    double train_fraction = 0.7;
    double temperature = kDefaultTemperature;
    double ignorance_floor = 0.1;
    double threshold = kDefaultVarianceThreshold;
    LambdaGrid grid;
    bool normalized_input = false;  // skip BC-Zscore when sources are already normalized
    std::uint64_t excerpt_seed = 0;
};

struct MethodOutcome {
    FusionMethod method;
    double accuracy = 0.0;
    std::size_t correct = 0;
    std::size_t total = 0;
    std::size_t total_conflict_failures = 0;  // ds only; counted as wrong
    std::vector<std::size_t> predictions;
    std::vector<SequencePoint> mean_trace;  // true-class interval averaged per step
};

struct SizeAccuracy {
    std::size_t size = 0;
    FusionMethod method;
    double accuracy = 0.0;
};

struct ExperimentResult {
    std::vector<MethodOutcome> methods;  // full data set
    std::vector<SizeAccuracy> series;
    std::vector<std::size_t> test_labels;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    double mean_conflict = 0.0;  // mean classical conflict of the test observations
    EvidenceBuilder builder;
    std::vector<ColumnSummary> normalization;  // empty for pre-normalized input
    std::vector<std::string> excerpt_columns;
    std::vector<Timestamp> excerpt_timestamps;
    Matrix excerpt;

    const MethodOutcome& outcome(FusionMethod method) const;
};

ExperimentResult run_experiment2(const ScenarioConfig& scenario, const Experiment2Options& options);

/// Same experiment over existing source tables and per-row labels.
ExperimentResult run_experiment2(std::span<const SampleTable> sources, std::span<const std::size_t> labels,
                                 FramePtr frame, const Experiment2Options& options);

}  // namespace pdfuse
