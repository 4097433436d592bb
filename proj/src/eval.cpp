#include "pdfuse/eval.h"

#include "pdfuse/error.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdfuse {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(ss);
}

Matrix columns_of(const Matrix& m, std::size_t first, std::size_t count) {
    Matrix out(m.rows(), count);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, first + c);
    return out;
}

Matrix rows_of(const Matrix& m, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(rows[r], c);
    return out;
}

struct SizeRun {
    std::vector<MethodOutcome> outcomes;
    std::vector<std::size_t> test_labels;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    double mean_conflict = 0.0;
    EvidenceBuilder builder;
    Experiment1Result normalization;
};

SizeRun run_size(std::span<const SampleTable> sources, std::span<const std::size_t> labels, const FramePtr& frame,
                 std::size_t size, const Experiment2Options& opt) {
    std::vector<SampleTable> heads;
    for (const auto& s : sources) heads.push_back(s.head(size));

    SizeRun run;
    std::vector<Matrix> normalized;
    if (opt.normalized_input) {
        for (const auto& h : heads) normalized.push_back(h.values());
    } else {
        run.normalization = run_experiment1(heads, opt.excerpt_seed, opt.grid);
        for (const auto& t : run.normalization.normalized) normalized.push_back(t.values());
    }

    auto rng = make_stream(opt.split_seed, RngStream::split);
    auto perm = seeded_permutation(size, rng);
    auto n_train = static_cast<std::size_t>(std::llround(opt.train_fraction * static_cast<double>(size)));
    n_train = std::clamp<std::size_t>(n_train, 1, size - 1);
    std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    run.train_rows = train.size();
    run.test_rows = test.size();

    std::vector<Matrix> train_sources;
    for (const auto& m : normalized) train_sources.push_back(rows_of(m, train));
    std::vector<std::size_t> train_labels;
    for (auto r : train) train_labels.push_back(labels[r]);
    run.builder = fit_evidence_builder(frame, train_sources, train_labels, opt.temperature, opt.ignorance_floor);

    for (auto method : opt.methods) run.outcomes.push_back(MethodOutcome{method});
    std::vector<std::vector<SequencePoint>> trace_sums(opt.methods.size());
    const std::size_t invalid = frame->size();

    double conflict_sum = 0.0;
    for (auto r : test) {
        std::vector<std::vector<double>> rows;
        for (const auto& m : normalized) rows.emplace_back(m.row(r).begin(), m.row(r).end());
        const auto masses = build_evidence(rows, run.builder);
        const std::size_t truth = labels[r];
        run.test_labels.push_back(truth);
        conflict_sum += joint_conflict(masses);

        for (std::size_t k = 0; k < opt.methods.size(); ++k) {
            auto& outcome = run.outcomes[k];
            try {
                const auto report = fuse(masses, opt.methods[k], opt.threshold);
                outcome.predictions.push_back(decide(report.combined));
                auto& sums = trace_sums[k];
                for (const auto& si : report.step_intervals) {
                    if (si.hypothesis != truth) continue;
                    if (sums.size() < si.step) sums.resize(si.step);
                    auto& p = sums[si.step - 1];
                    p.step = si.step;
                    p.interval.bel += si.interval.bel;
                    p.interval.pl += si.interval.pl;
                    p.interval.mu += si.interval.mu;
                }
            } catch (const Error& e) {
                if (e.code() != Errc::TotalConflict) throw;
                outcome.predictions.push_back(invalid);
                ++outcome.total_conflict_failures;
            }
        }
    }

    run.mean_conflict = test.empty() ? 0.0 : conflict_sum / static_cast<double>(test.size());
    for (std::size_t k = 0; k < opt.methods.size(); ++k) {
        auto& outcome = run.outcomes[k];
        outcome.total = run.test_labels.size();
        outcome.accuracy = accuracy(outcome.predictions, run.test_labels);
        outcome.correct = static_cast<std::size_t>(std::llround(outcome.accuracy * static_cast<double>(outcome.total)));
        const double denom = static_cast<double>(outcome.total - outcome.total_conflict_failures);
        for (auto p : trace_sums[k]) {
            if (denom > 0.0) {
                p.interval.bel /= denom;
                p.interval.pl /= denom;
                p.interval.mu /= denom;
            }
            outcome.mean_trace.push_back(p);
        }
    }
    return run;
}

}  // namespace

void EvidenceBuilder::validate() const {
    if (!frame) throw Error(Errc::InvalidArgument, "evidence builder needs a frame");
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(Errc::InvalidArgument, "temperature must be positive");
    }
    if (!(ignorance_floor >= 0.0 && ignorance_floor < 1.0)) {
        throw Error(Errc::InvalidArgument, "ignorance floor must lie in [0, 1)");
    }
    for (const auto& source : prototypes) {
        if (source.size() != frame->size()) {
            throw Error(Errc::DimensionMismatch, "every hypothesis needs a prototype slot per source");
        }
    }
}

EvidenceBuilder fit_evidence_builder(FramePtr frame, std::span<const Matrix> sources,
                                     std::span<const std::size_t> labels, double temperature,
                                     double ignorance_floor) {
    EvidenceBuilder b{std::move(frame), {}, temperature, ignorance_floor};
    const std::size_t k = b.frame->size();
    for (const auto& m : sources) {
        if (m.rows() != labels.size()) throw Error(Errc::LengthMismatch, "one label per training row required");
        std::vector<std::vector<double>> sums(k, std::vector<double>(m.cols(), 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (labels[r] >= k) throw Error(Errc::InvalidArgument, "label index outside the frame");
            ++counts[labels[r]];
            for (std::size_t c = 0; c < m.cols(); ++c) sums[labels[r]][c] += m(r, c);
        }
        for (std::size_t h = 0; h < k; ++h) {
            if (counts[h] == 0) {
                sums[h].clear();
                continue;
            }
            for (double& v : sums[h]) v /= static_cast<double>(counts[h]);
        }
        b.prototypes.push_back(std::move(sums));
    }
    b.validate();
    return b;
}

MassFunction build_source_evidence(std::span<const double> row, std::size_t source, const EvidenceBuilder& builder) {
    if (source >= builder.prototypes.size()) throw Error(Errc::DimensionMismatch, "no prototypes for this source");
    const auto& protos = builder.prototypes[source];
    const std::size_t k = builder.frame->size();
    std::vector<double> dist(k, std::numeric_limits<double>::infinity());
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < k; ++h) {
        if (protos[h].empty()) continue;
        if (protos[h].size() != row.size()) {
            throw Error(Errc::DimensionMismatch, "row has " + std::to_string(row.size()) + " features, prototype has " +
                                                     std::to_string(protos[h].size()));
        }
        dist[h] = distance(row, protos[h]);
        nearest = std::min(nearest, dist[h]);
    }
    if (!std::isfinite(nearest)) throw Error(Errc::InvalidArgument, "source has no prototypes");

    // Shifting by the nearest distance leaves the ratios unchanged and avoids underflow.
    std::vector<double> score(k, 0.0);
    double total = 0.0;
    for (std::size_t h = 0; h < k; ++h) {
        if (!std::isfinite(dist[h])) continue;
        score[h] = std::exp(-(dist[h] - nearest) / builder.temperature);
        total += score[h];
    }
    MassAssignment a;
    for (std::size_t h = 0; h < k; ++h)
        if (score[h] > 0.0) a[FocalSet::singleton(h)] += (1.0 - builder.ignorance_floor) * score[h] / total;
    if (builder.ignorance_floor > 0.0) a[FocalSet::universe(k)] += builder.ignorance_floor;
    return MassFunction(builder.frame, a);
}

std::vector<MassFunction> build_evidence(std::span<const std::vector<double>> rows, const EvidenceBuilder& builder) {
    if (rows.size() != builder.prototypes.size()) {
        throw Error(Errc::DimensionMismatch, "one row per source required");
    }
    std::vector<MassFunction> out;
    for (std::size_t s = 0; s < rows.size(); ++s) out.push_back(build_source_evidence(rows[s], s, builder));
    return out;
}

std::size_t decide(const MassFunction& m) {
    const auto betp = pignistic(m);
    std::size_t best = 0;
    for (std::size_t h = 1; h < betp.size(); ++h)
        if (betp[h] > betp[best]) best = h;
    return best;
}

std::size_t nearest_prototype(std::span<const double> row, std::size_t source, const EvidenceBuilder& builder) {
    const auto& protos = builder.prototypes.at(source);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < protos.size(); ++h) {
        if (protos[h].empty()) continue;
        const double d = distance(row, protos[h]);
        if (d < best_d) {
            best_d = d;
            best = h;
        }
    }
    return best;
}

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
    if (predictions.size() != labels.size()) throw Error(Errc::LengthMismatch, "predictions and labels differ in length");
    if (labels.empty()) throw Error(Errc::LengthMismatch, "accuracy needs at least one label");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predictions[i] == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

const std::vector<std::string>& excerpt_layout() {
    static const std::vector<std::string> layout{"Electric energy", "Power factor", "Temperature",
                                                 "Wind speed",      "Line voltage", "Line current"};
    return layout;
}

Experiment1Result run_experiment1(std::span<const SampleTable> tables, std::uint64_t excerpt_seed,
                                  const LambdaGrid& grid) {
    if (tables.empty()) throw Error(Errc::InvalidArgument, "experiment needs at least one table");
    const SampleTable aligned = tables.size() >= 2 ? align_by_timestamp(tables) : tables.front();

    Experiment1Result out;
    std::vector<std::string> names;
    std::vector<std::vector<double>> normalized_columns;
    std::size_t col0 = 0;
    for (const auto& t : tables) {
        const Matrix raw = columns_of(aligned.values(), col0, t.cols());
        auto bz = bc_zscore(raw, std::nullopt, grid);
        for (std::size_t c = 0; c < t.cols(); ++c) {
            const auto before = raw.column(c);
            const auto after = bz.values.column(c);
            out.columns.push_back(ColumnSummary{t.columns()[c].source_kind, t.columns()[c].name, bz.params[c],
                                                column_stats(before), column_stats(after), bz.degenerate[c]});
            names.push_back(t.columns()[c].name);
            normalized_columns.push_back(after);
        }
        out.normalized.emplace_back(aligned.timestamps(), std::move(bz.values), t.columns());
        col0 += t.cols();
    }

    std::vector<std::size_t> order;
    const auto& layout = excerpt_layout();
    for (const auto& want : layout) {
        const auto it = std::find(names.begin(), names.end(), want);
        if (it == names.end()) {
            order.clear();
            break;
        }
        order.push_back(static_cast<std::size_t>(it - names.begin()));
    }
    if (order.empty())
        for (std::size_t c = 0; c < names.size(); ++c) order.push_back(c);

    auto rng = make_stream(excerpt_seed, RngStream::excerpt);
    auto perm = seeded_permutation(aligned.rows(), rng);
    perm.resize(std::min<std::size_t>(10, perm.size()));
    std::sort(perm.begin(), perm.end());

    out.excerpt = Matrix(perm.size(), order.size());
    for (std::size_t c = 0; c < order.size(); ++c) out.excerpt_columns.push_back(names[order[c]]);
    for (std::size_t r = 0; r < perm.size(); ++r) {
        out.excerpt_timestamps.push_back(aligned.timestamps()[perm[r]]);
        for (std::size_t c = 0; c < order.size(); ++c) out.excerpt(r, c) = normalized_columns[order[c]][perm[r]];
    }
    return out;
}

const MethodOutcome& ExperimentResult::outcome(FusionMethod method) const {
    for (const auto& m : methods)
        if (m.method == method) return m;
    throw Error(Errc::InvalidArgument, "method not part of this experiment");
}

ExperimentResult run_experiment2(std::span<const SampleTable> sources, std::span<const std::size_t> labels,
                                 FramePtr frame, const Experiment2Options& options) {
    if (sources.empty()) throw Error(Errc::InvalidArgument, "experiment needs source tables");
    if (!frame) throw Error(Errc::InvalidArgument, "experiment needs a frame");
    if (options.methods.empty()) throw Error(Errc::InvalidArgument, "experiment needs at least one method");
    const std::size_t n = sources.front().rows();
    for (const auto& s : sources)
        if (s.timestamps() != sources.front().timestamps()) {
            throw Error(Errc::DimensionMismatch, "source tables must share timestamps");
        }
    if (labels.size() != n) throw Error(Errc::LengthMismatch, "one label per observation required");
    if (n < 2) throw Error(Errc::TooFewSamples, "experiment needs at least two observations");
    if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
        throw Error(Errc::InvalidArgument, "train fraction must lie in (0, 1)");
    }
    for (auto s : options.sizes)
        if (s < 2 || s > n) {
            throw Error(Errc::InvalidArgument, "series size " + std::to_string(s) + " outside [2, " +
                                                   std::to_string(n) + "]");
        }

    auto full = run_size(sources, labels, frame, n, options);
    ExperimentResult out;
    out.methods = full.outcomes;
    out.test_labels = full.test_labels;
    out.train_rows = full.train_rows;
    out.test_rows = full.test_rows;
    out.mean_conflict = full.mean_conflict;
    out.builder = full.builder;
    out.normalization = full.normalization.columns;
    out.excerpt_columns = full.normalization.excerpt_columns;
    out.excerpt_timestamps = full.normalization.excerpt_timestamps;
    out.excerpt = full.normalization.excerpt;

    for (auto size : options.sizes) {
        const auto run = size == n ? full : run_size(sources, labels, frame, size, options);
        for (const auto& o : run.outcomes) out.series.push_back(SizeAccuracy{size, o.method, o.accuracy});
    }
    return out;
}

ExperimentResult run_experiment2(const ScenarioConfig& scenario, const Experiment2Options& options) {
    const auto data = generate_scenario(scenario);
    return run_experiment2(data.sources, data.labels, make_frame(scenario.hypotheses), options);
}

}  // namespace pdfuse
