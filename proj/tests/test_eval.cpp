#include "oracles.h"
#include "support.h"

#include "pdfuse/eval.h"
#include "pdfuse/simgen.h"

#include <doctest.h>

#include <cmath>

using namespace pdfuse;

namespace {

EvidenceBuilder two_class(double temperature, double floor) {
    EvidenceBuilder b;
    b.frame = make_frame({"h1", "h2"});
    b.prototypes = {{{0.0}, {3.0}}};
    b.temperature = temperature;
    b.ignorance_floor = floor;
    return b;
}

}  // namespace

TEST_CASE("source evidence closed form") {
    const auto b = two_class(1.0, 0.1);
    const std::vector<double> row{1.0};
    const auto m = build_source_evidence(row, 0, b);
    const double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
    CHECK(std::fabs(m.mass(FocalSet::singleton(0)) - 0.9 * e1 / (e1 + e2)) <= 1e-12);
    CHECK(std::fabs(m.mass(FocalSet::singleton(1)) - 0.9 * e2 / (e1 + e2)) <= 1e-12);
    CHECK(std::fabs(m.mass(FocalSet::universe(2)) - 0.1) <= 1e-12);
    CHECK(m.mass(FocalSet::singleton(0)) == doctest::Approx(0.65795).epsilon(1e-5));
    CHECK(m.mass(FocalSet::singleton(1)) == doctest::Approx(0.24205).epsilon(1e-5));
}

TEST_CASE("source evidence limits and symmetry") {
    const auto sharp = two_class(1e-6, 0.1);
    const std::vector<double> at{0.0};
    CHECK(build_source_evidence(at, 0, sharp).mass(FocalSet::singleton(0)) == doctest::Approx(0.9).epsilon(1e-12));

    EvidenceBuilder b;
    b.frame = make_frame({"a", "b", "c"});
    b.prototypes = {{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}}};
    const std::vector<double> centre{0.0, 0.0};
    const auto m = build_source_evidence(centre, 0, b);
    CHECK(m.mass(FocalSet::singleton(0)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(m.mass(FocalSet::singleton(1)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(m.mass(FocalSet::singleton(2)) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("absent classes score zero") {
    EvidenceBuilder b;
    b.frame = make_frame({"a", "b", "c"});
    b.prototypes = {{{0.0}, {}, {2.0}}};
    const std::vector<double> row{0.5};
    const auto m = build_source_evidence(row, 0, b);
    CHECK(m.mass(FocalSet::singleton(1)) == 0.0);
    CHECK(nearest_prototype(row, 0, b) == 0);
}

TEST_CASE("decide and accuracy") {
    const auto f = make_frame({"a", "b"});
    CHECK(decide(MassFunction(f, {{FocalSet::singleton(1), 0.6}, {FocalSet::universe(2), 0.4}})) == 1);
    CHECK(decide(MassFunction::vacuous(f)) == 0);

    const std::vector<std::size_t> x{0, 1, 2, 1};
    CHECK(accuracy(x, x) == 1.0);
    const std::vector<std::size_t> y{1, 2, 0, 0};
    CHECK(accuracy(x, y) == 0.0);
    const std::vector<std::size_t> z{0, 1, 2, 2};
    CHECK(accuracy(x, z) == 0.75);
    const std::vector<std::size_t> shorter{0};
    CHECK(thrown_code([&] { accuracy(x, shorter); }) == Errc::LengthMismatch);
}

TEST_CASE("experiment 1 on a skewed scenario") {
    ScenarioConfig c;
    c.n_observations = 1000;
    const auto s = generate_scenario(c);
    const auto r = run_experiment1(s.sources);
    CHECK(r.excerpt_columns == excerpt_layout());
    CHECK(r.excerpt.rows() == 10);
    CHECK(r.excerpt.cols() == 6);
    double before = 0.0, after = 0.0;
    for (const auto& col : r.columns) {
        before = std::max(before, std::fabs(col.before.skewness));
        after = std::max(after, std::fabs(col.after.skewness));
    }
    CHECK(before > 1.0);
    CHECK(after < 0.3);
    for (const auto& t : r.normalized)
        for (std::size_t col = 0; col < t.cols(); ++col) {
            const auto m = oracle::moments(t.column(col));
            CHECK(std::fabs(m.mean) <= 1e-12);
            CHECK(std::fabs(m.sample_std - 1.0) <= 1e-12);
        }
}

TEST_CASE("experiment 2 structure") {
    ScenarioConfig c;
    c.n_observations = 300;
    c.conflict_rate = 0.2;
    Experiment2Options o;
    o.sizes = {100, 300};
    const auto r = run_experiment2(c, o);
    CHECK(r.train_rows == 210);
    CHECK(r.test_rows == 90);
    CHECK(r.series.size() == 4);
    for (const auto& m : r.methods) {
        CHECK(m.mean_trace.size() == 2);
        CHECK(m.total == 90);
    }
    CHECK(r.outcome(FusionMethod::ds).method == FusionMethod::ds);
}

TEST_CASE("zero-conflict evidence gives identical predictions") {
    ScenarioConfig c;
    c.n_observations = 200;
    c.source_noise = {1e-4, 1e-4, 1e-4};
    Experiment2Options o;
    o.temperature = 1e-3;
    const auto r = run_experiment2(c, o);
    CHECK(r.outcome(FusionMethod::ds).predictions == r.outcome(FusionMethod::pca_ds).predictions);
    CHECK(r.outcome(FusionMethod::ds).accuracy == 1.0);
}

TEST_CASE("every uncorrupted source separates the classes on its own") {
    ScenarioConfig c;
    c.n_observations = 1000;
    const auto s = generate_scenario(c);
    std::vector<Matrix> normalized;
    for (const auto& t : s.sources) normalized.push_back(bc_zscore(t.values()).values);
    const auto builder = fit_evidence_builder(make_frame(c.hypotheses), normalized, s.labels);
    for (std::size_t src = 0; src < kSourceCount; ++src) {
        std::vector<std::size_t> pred;
        for (std::size_t r = 0; r < normalized[src].rows(); ++r)
            pred.push_back(nearest_prototype(normalized[src].row(r), src, builder));
        CHECK(accuracy(pred, s.labels) > 0.7);
    }
}
