#include "oracles.h"
#include "support.h"

#include "pdfuse/evidence.h"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pdfuse;

namespace {

FramePtr abc() { return make_frame({"A", "B", "C"}); }
constexpr FocalSet A = FocalSet::singleton(0), B = FocalSet::singleton(1), C = FocalSet::singleton(2);
constexpr FocalSet U = FocalSet::universe(3);

}  // namespace

TEST_CASE("frame validation") {
    CHECK(thrown_code([] { make_frame({}); }) == Errc::InvalidArgument);
    CHECK(thrown_code([] { make_frame({"A", "A"}); }) == Errc::InvalidArgument);
    CHECK(thrown_code([] { make_frame({"A|B"}); }) == Errc::InvalidArgument);
    std::vector<std::string> many;
    for (int i = 0; i < 17; ++i) many.push_back("H" + std::to_string(i));
    CHECK(thrown_code([&] { make_frame(many); }) == Errc::InvalidArgument);
    CHECK(abc()->index_of("C") == 2);
}

TEST_CASE("validate_mass") {
    const auto f = abc();
    CHECK(validate_mass(*f, {{U, 1.0}}).empty());
    const auto empty = validate_mass(*f, {{FocalSet{}, 0.1}, {U, 0.9}});
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].kind == MassViolationKind::EmptySetMass);
    const auto over = validate_mass(*f, {{A, 0.6}, {B, 0.6}});
    REQUIRE(over.size() == 1);
    CHECK(over[0].kind == MassViolationKind::SumNotOne);
    CHECK(over[0].value == doctest::Approx(1.2));
    CHECK(validate_mass(*f, {{A, -0.1}, {U, 1.1}}).front().kind == MassViolationKind::NegativeMass);
    CHECK(validate_mass(*f, {{FocalSet{8}, 1.0}}).front().kind == MassViolationKind::OutsideFrame);
    CHECK(thrown_code([&] { MassFunction(f, {{A, 0.6}, {B, 0.6}}); }) == Errc::InvalidMass);
}

TEST_CASE("belief") {
    const auto f = abc();
    const MassFunction m(f, {{A, 0.5}, {A | B, 0.5}});
    CHECK(belief(m, U) == 1.0);
    CHECK(belief(m, FocalSet{}) == 0.0);
    CHECK(belief(m, A | B) == 1.0);
    CHECK(belief(m, A) == 0.5);
}

TEST_CASE("plausibility") {
    const auto f = abc();
    const MassFunction m(f, {{A, 0.5}, {B, 0.3}, {A | B, 0.2}});
    CHECK(plausibility(m, U) == 1.0);
    CHECK(plausibility(m, FocalSet{}) == 0.0);
    CHECK(plausibility(m, A) == doctest::Approx(0.7).epsilon(1e-15));
    const auto v = MassFunction::vacuous(f);
    for (std::uint32_t s = 1; s < 8; ++s) CHECK(plausibility(v, FocalSet{s}) == 1.0);
}

TEST_CASE("uncertainty_interval") {
    const auto f = abc();
    const auto vac = uncertainty_interval(MassFunction::vacuous(f), A);
    CHECK(vac.bel == 0.0);
    CHECK(vac.pl == 1.0);
    CHECK(vac.mu == 1.0);

    const MassFunction bayes(f, {{A, 0.2}, {B, 0.5}, {C, 0.3}});
    for (auto s : {A, B, C, A | C}) CHECK(uncertainty_interval(bayes, s).mu == 0.0);

    const MassFunction ss(f, {{A, 0.6}, {U, 0.4}});
    const auto i = uncertainty_interval(ss, A);
    CHECK(i.bel == 0.6);
    CHECK(i.pl == 1.0);
    CHECK(i.mu == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("conjunctive_products") {
    const auto f = abc();
    const MassFunction m(f, {{A, 0.6}, {U, 0.4}});
    CHECK(conjunctive_products(MassFunction::vacuous(f), m).conflict() == 0.0);
    CHECK(conjunctive_products(MassFunction(f, {{A, 1.0}}), MassFunction(f, {{B, 1.0}})).conflict() == 1.0);

    const MassFunction m2(f, {{B, 0.7}, {U, 0.3}});
    const auto p = conjunctive_products(m, m2);
    CHECK(p.conflict() == doctest::Approx(0.42).epsilon(1e-15));
    CHECK(p.conflicting.size() == 1);
    CHECK(p.intersecting.size() == 3);
}

TEST_CASE("dempster_combine fixtures") {
    const auto f = abc();
    const MassFunction m(f, {{A, 0.2}, {A | B, 0.5}, {U, 0.3}});
    const auto n = dempster_combine(m, MassFunction::vacuous(f));
    REQUIRE(n.masses().size() == m.masses().size());
    for (const auto& [set, value] : m.masses()) CHECK(std::fabs(n.mass(set) - value) <= 1e-12);

    const MassFunction z1(f, {{A, 0.99}, {B, 0.01}});
    const MassFunction z2(f, {{C, 0.99}, {B, 0.01}});
    const auto z = dempster_combine(z1, z2);
    CHECK(std::fabs(z.mass(B) - 1.0) <= 1e-12);
    CHECK(z.masses().size() == 1);

    const auto s = dempster_combine(MassFunction(f, {{A, 0.6}, {U, 0.4}}), MassFunction(f, {{A, 0.7}, {U, 0.3}}));
    CHECK(std::fabs(s.mass(A) - 0.88) <= 1e-12);
    CHECK(std::fabs(s.mass(U) - 0.12) <= 1e-12);

    CHECK(thrown_code([&] { dempster_combine(MassFunction(f, {{A, 1.0}}), MassFunction(f, {{B, 1.0}})); }) ==
          Errc::TotalConflict);
    CHECK(thrown_code([&] { dempster_combine(m, MassFunction::vacuous(make_frame({"A", "B"}))); }) ==
          Errc::FrameMismatch);
}

TEST_CASE("dempster_combine agrees with the brute-force oracle") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = make_frame({"a", "b", "c", "d"});
        const auto m1 = oracle::random_mass(rng, f), m2 = oracle::random_mass(rng, f);
        if (conjunctive_products(m1, m2).agreement() <= 1e-12) continue;
        const auto got = oracle::to_dense(dempster_combine(m1, m2));
        const auto want = oracle::brute_force_dempster(oracle::to_dense(m1), oracle::to_dense(m2));
        for (std::size_t s = 0; s < want.size(); ++s) CHECK(std::fabs(got[s] - want[s]) <= 1e-12);
    }
}

TEST_CASE("joint_conflict") {
    const auto f = abc();
    const std::vector<MassFunction> ms{MassFunction(f, {{A, 0.6}, {U, 0.4}}), MassFunction(f, {{B, 0.7}, {U, 0.3}}),
                                       MassFunction(f, {{A | B, 1.0}})};
    CHECK(joint_conflict(ms) == doctest::Approx(0.42).epsilon(1e-15));
    const std::vector<MassFunction> zadeh{MassFunction(f, {{A, 0.99}, {B, 0.01}}),
                                          MassFunction(f, {{C, 0.99}, {B, 0.01}})};
    CHECK(joint_conflict(zadeh) == doctest::Approx(0.9999).epsilon(1e-15));
}

TEST_CASE("pignistic and focal set names") {
    const auto f = abc();
    const MassFunction m(f, {{A, 0.3}, {B | C, 0.4}, {U, 0.3}});
    const auto p = pignistic(m);
    CHECK(p[0] == doctest::Approx(0.4));
    CHECK(p[1] == doctest::Approx(0.3));
    CHECK(p[2] == doctest::Approx(0.3));
    const auto g = make_frame({"F2", "F1", "F3"});
    CHECK(focal_set_name(*g, FocalSet{0b011}) == "F1|F2");
    CHECK(parse_focal_set(*g, "F1|F2") == FocalSet{0b011});
    CHECK(parse_focal_set(*g, "F3|F1") == FocalSet{0b110});
    CHECK(thrown_code([&] { parse_focal_set(*g, "F9"); }) == Errc::InvalidArgument);
}

TEST_CASE("renormalization within tolerance") {
    const auto f = abc();
    const MassFunction m(f, {{A, 0.5 + 4e-10}, {U, 0.5}});
    double total = 0.0;
    for (const auto& [s, v] : m.masses()) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(thrown_code([&] { MassFunction(f, {{A, 0.5 + 1e-6}, {U, 0.5}}); }) == Errc::InvalidMass);
}
