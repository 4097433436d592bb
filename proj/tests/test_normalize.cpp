#include "oracles.h"
#include "support.h"

#include "pdfuse/normalize.h"
#include "pdfuse/simgen.h"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pdfuse;
using doctest::Approx;

TEST_CASE("column_stats") {
    const std::vector<double> a{1, 2, 3};
    const auto s = column_stats(a);
    CHECK(s.mean == 2.0);
    CHECK(s.sample_std == 1.0);
    CHECK(s.skewness == 0.0);

    const std::vector<double> c{5, 5, 5, 5};
    CHECK(column_stats(c).mean == 5.0);
    CHECK(column_stats(c).sample_std == 0.0);

    // scipy.stats.skew([1, 1, 1, 10]) from tests/oracles/boxcox_grid.py
    const std::vector<double> k{1, 1, 1, 10};
    CHECK(std::fabs(column_stats(k).skewness - 1.1547005383792515) < 1e-12);
}

TEST_CASE("boxcox closed forms") {
    const std::vector<double> x1{2, 3, 4};
    CHECK(boxcox(x1, 1.0) == std::vector<double>{1, 2, 3});

    const std::vector<double> x0{1, std::exp(1.0), std::exp(2.0)};
    const auto y0 = boxcox(x0, 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(y0[i] - static_cast<double>(i)) < 1e-15);

    const std::vector<double> xh{1, 4, 9};
    const auto yh = boxcox(xh, 0.5);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(yh[i] - 2.0 * static_cast<double>(i)) < 1e-14);

    const std::vector<double> bad{1, 0};
    CHECK(thrown_code([&] { boxcox(bad, 0.5); }) == Errc::NonPositiveInput);
}

TEST_CASE("fit_lambda on linear data matches the grid oracle") {
    std::vector<double> x(100);
    for (int i = 0; i < 100; ++i) x[i] = i + 1.0;
    // Grid argmax of scipy.stats.boxcox_llf, tests/oracles/boxcox_grid.py
    CHECK(fit_lambda(x).lambda == Approx(0.72).epsilon(1e-12));
    CHECK(fit_lambda(x).shift == 0.0);
}

TEST_CASE("fit_lambda restores lognormal columns") {
    auto rng = make_stream(2024, RngStream::features);
    std::vector<double> x(1000);
    for (double& v : x) v = std::exp(rng.normal());
    const auto p = fit_lambda(x);
    CHECK(p.lambda >= -0.2);
    CHECK(p.lambda <= 0.2);
}

TEST_CASE("fit_lambda shift and failure modes") {
    const std::vector<double> z{0, 1, 2, 5};
    CHECK(fit_lambda(z).shift == 1.0);
    const std::vector<double> neg{-3, 1, 2, 5};
    CHECK(fit_lambda(neg).shift == 4.0);
    const std::vector<double> two{1, 2};
    CHECK(thrown_code([&] { fit_lambda(two); }) == Errc::TooFewSamples);
    const std::vector<double> flat{3, 3, 3};
    CHECK(thrown_code([&] { fit_lambda(flat); }) == Errc::DegenerateColumn);
    CHECK(thrown_code([] { LambdaGrid{-6, 5, 0.01}.validate(); }) == Errc::InvalidArgument);
    CHECK(thrown_code([] { LambdaGrid{1, 0, 0.01}.validate(); }) == Errc::InvalidArgument);
}

TEST_CASE("lambda grid points") {
    const auto pts = LambdaGrid{}.points();
    CHECK(pts.size() == 1001);
    CHECK(pts.front() == -5.0);
    CHECK(pts.back() == 5.0);
    CHECK(pts[500] == 0.0);
    CHECK(LambdaGrid{1, 1, 1}.points() == std::vector<double>{1.0});
}

TEST_CASE("zscore_columns") {
    const auto m = Matrix::from_rows({{1, 7}, {2, 7}, {3, 7}});
    const auto z = zscore_columns(m);
    CHECK(z.values.column(0) == std::vector<double>{-1, 0, 1});
    CHECK(z.values.column(1) == std::vector<double>{0, 0, 0});
    CHECK(z.degenerate == std::vector<bool>{false, true});
}

TEST_CASE("zscore_columns on a random 100x4 matrix") {
    std::mt19937_64 rng(11);
    const auto m = oracle::random_matrix(rng, 100, 4);
    const auto z = zscore_columns(m);
    for (std::size_t c = 0; c < 4; ++c) {
        const auto s = oracle::moments(z.values.column(c));
        CHECK(std::fabs(s.mean) <= 1e-12);
        CHECK(std::fabs(s.sample_std - 1.0) <= 1e-12);
    }
}

TEST_CASE("bc_zscore vector form with a forced lambda reduces to zscore") {
    const std::vector<double> x{1, 2, 3};
    const auto r = bc_zscore(x, BoxCoxParam{1.0, 0.0});
    CHECK(r.values == std::vector<double>{-1, 0, 1});
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("bc_zscore on a six-column scenario table") {
    ScenarioConfig c;
    c.n_observations = 10;
    const auto s = generate_scenario(c);
    Matrix all(10, 6);
    for (std::size_t src = 0; src < 3; ++src)
        for (std::size_t r = 0; r < 10; ++r)
            for (std::size_t k = 0; k < 2; ++k) all(r, src * 2 + k) = s.sources[src].at(r, k);
    const auto out = bc_zscore(all);
    for (std::size_t col = 0; col < 6; ++col) {
        const auto st = oracle::moments(out.values.column(col));
        CHECK(std::fabs(st.mean) <= 1e-12);
        CHECK(std::fabs(st.sample_std - 1.0) <= 1e-12);
        CHECK(out.params[col].lambda >= -5.0);
        CHECK(out.params[col].lambda <= 5.0);
    }
}

TEST_CASE("bc_zscore reuses supplied params without refitting") {
    const auto m = Matrix::from_rows({{1, 10}, {2, 30}, {4, 20}, {8, 50}});
    const BoxCoxParams p{{0.0, 0.0}, {1.0, 0.0}};
    const auto out = bc_zscore(m, p);
    CHECK(out.params == p);
    const std::vector<double> logs{0, std::log(2.0), std::log(4.0), std::log(8.0)};
    const auto expect = bc_zscore(logs, BoxCoxParam{1.0, 1.0}).values;
    for (std::size_t r = 0; r < 4; ++r) CHECK(out.values(r, 0) == Approx(expect[r]).epsilon(1e-12));
    CHECK(thrown_code([&] { bc_zscore(m, BoxCoxParams{{1.0, 0.0}}); }) == Errc::DimensionMismatch);
}

TEST_CASE("bc_zscore flags constant columns") {
    const auto m = Matrix::from_rows({{7, 1}, {7, 2}, {7, 4}});
    const auto out = bc_zscore(m);
    CHECK(out.degenerate == std::vector<bool>{true, false});
    CHECK(out.values.column(0) == std::vector<double>{0, 0, 0});
}

TEST_CASE("bc_zscore array form") {
    NdArray a{{2, 3, 4}, {}};
    for (int i = 0; i < 24; ++i) a.data.push_back(1.0 + i * i);
    const auto out = bc_zscore(a);
    CHECK(out.values.shape == a.shape);
    CHECK(out.params.size() == 12);
    for (std::size_t c = 0; c < 12; ++c) {
        const double lo = out.values.data[c], hi = out.values.data[12 + c];
        CHECK(lo == Approx(-std::sqrt(0.5)).epsilon(1e-12));
        CHECK(hi == Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
    CHECK(thrown_code([] { bc_zscore(NdArray{{2, 3}, {1, 2}}); }) == Errc::DimensionMismatch);
}

TEST_CASE("fit_lambda agrees with an exact grid argmax") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> sigma(0.01, 2.0), level(-3.0, 6.0);
    const auto grid = LambdaGrid{}.points();
    for (int t = 0; t < 40; ++t) {
        std::vector<double> x(200);
        const double s = sigma(rng), l = level(rng);
        for (double& v : x) v = t % 2 ? std::exp(l + s * nd(rng)) : std::exp(l) + s * std::exp(l) * std::fabs(nd(rng));
        double best = -1e300, arg = 0.0;
        for (double lambda : grid) {
            const double ll = boxcox_log_likelihood(x, lambda);
            if (ll > best) best = ll, arg = lambda;
        }
        const double got = fit_lambda(x).lambda;
        // equal, or a numerically tied neighbour
        CHECK((got == arg || std::fabs(boxcox_log_likelihood(x, got) - best) <= 1e-9 * std::fabs(best)));
    }
}
