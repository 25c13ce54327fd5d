#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pauliform/canon.hpp"
#include "pauliform/matkit.hpp"
#include "pauliform/omega.hpp"
#include "pauliform/rng.hpp"

using namespace pauliform;

namespace {

HermitianOperator herm(std::initializer_list<std::initializer_list<cplx>> rows) {
    return HermitianOperator(ComplexMatrix::from_rows(rows));
}

// Multiset comparison of block content, ignoring basis positions.
struct FlatForm {
    std::vector<std::pair<double, double>> pairs;
    std::vector<std::pair<double, double>> singles;
};

FlatForm flatten(const CanonicalForm& form) {
    FlatForm flat;
    for (const PairBlock& p : form.pair_blocks) flat.pairs.push_back({p.a, p.b});
    for (const Singleton& s : form.singletons) flat.singles.push_back({s.alpha, s.beta});
    std::sort(flat.pairs.begin(), flat.pairs.end());
    std::sort(flat.singles.begin(), flat.singles.end());
    return flat;
}

FlatForm flatten(const BlockSpec& spec) {
    FlatForm flat;
    for (const PairSpec& p : spec.pairs) flat.pairs.push_back({p.a, p.b});
    for (const SingletonSpec& s : spec.singletons) flat.singles.push_back({s.alpha, s.beta});
    std::sort(flat.pairs.begin(), flat.pairs.end());
    std::sort(flat.singles.begin(), flat.singles.end());
    return flat;
}

bool flat_close(const FlatForm& x, const FlatForm& y, double tol) {
    if (x.pairs.size() != y.pairs.size() || x.singles.size() != y.singles.size()) return false;
    for (std::size_t i = 0; i < x.pairs.size(); ++i)
        if (std::abs(x.pairs[i].first - y.pairs[i].first) > tol ||
            std::abs(x.pairs[i].second - y.pairs[i].second) > tol)
            return false;
    for (std::size_t i = 0; i < x.singles.size(); ++i)
        if (std::abs(x.singles[i].first - y.singles[i].first) > tol ||
            std::abs(x.singles[i].second - y.singles[i].second) > tol)
            return false;
    return true;
}

}  // namespace

TEST_CASE("2x2 off-diagonal couplings reduce to a single pair block") {
    const HermitianOperator a = herm({{1.0, 0.0}, {0.0, -1.0}});
    for (cplx b_entry : {cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{1.0, 1.0}}) {
        const HermitianOperator b = herm({{0.0, b_entry}, {std::conj(b_entry), 0.0}});
        const CanonicalForm form = canonicalize(a, b);
        REQUIRE(form.pair_blocks.size() == 1);
        CHECK(form.singletons.empty());
        CHECK(form.pair_blocks[0].a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(form.pair_blocks[0].b == doctest::Approx(std::abs(b_entry)).epsilon(1e-12));
        const VerifyReport rep = verify(a, b, form);
        CHECK(rep.pass);
        CHECK(rep.residual_a <= 1e-10);
        CHECK(rep.residual_b <= 1e-10);
    }
}

TEST_CASE("3x3 coupling row gives pair (1,5) and an annihilated singleton") {
    const HermitianOperator a = herm({{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}});
    const HermitianOperator b =
        herm({{0.0, 3.0, 4.0}, {3.0, 0.0, 0.0}, {4.0, 0.0, 0.0}});
    const CanonicalForm form = canonicalize(a, b);
    REQUIRE(form.pair_blocks.size() == 1);
    REQUIRE(form.singletons.size() == 1);
    CHECK(form.pair_blocks[0].a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(form.pair_blocks[0].b == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(form.singletons[0].alpha == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(form.singletons[0].beta == 0.0);
    CHECK(form.pair_blocks[0].index_pair == std::array<int, 2>{0, 1});
    CHECK(form.singletons[0].index == 2);
    CHECK(verify(a, b, form).pass);
}

TEST_CASE("4x4 coupling row gives pair (1,7) and two annihilated singletons") {
    const HermitianOperator a = herm({{1.0, 0.0, 0.0, 0.0},
                                      {0.0, -1.0, 0.0, 0.0},
                                      {0.0, 0.0, -1.0, 0.0},
                                      {0.0, 0.0, 0.0, -1.0}});
    const HermitianOperator b = herm({{0.0, 2.0, 3.0, 6.0},
                                      {2.0, 0.0, 0.0, 0.0},
                                      {3.0, 0.0, 0.0, 0.0},
                                      {6.0, 0.0, 0.0, 0.0}});
    const CanonicalForm form = canonicalize(a, b);
    REQUIRE(form.pair_blocks.size() == 1);
    REQUIRE(form.singletons.size() == 2);
    CHECK(form.pair_blocks[0].a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(form.pair_blocks[0].b == doctest::Approx(7.0).epsilon(1e-12));
    for (const Singleton& s : form.singletons) {
        CHECK(s.alpha == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(s.beta == 0.0);
    }
    CHECK(verify(a, b, form).pass);
}

TEST_CASE("degenerate eigenvalues split into pair blocks ordered by coupling") {
    // A = diag(1,-1,1,-1); B couples the two copies of the +/-1 eigenspaces
    // through the 2x2 matrix diag(1, 2) after the SVD.
    const HermitianOperator a = herm({{1.0, 0.0, 0.0, 0.0},
                                      {0.0, -1.0, 0.0, 0.0},
                                      {0.0, 0.0, 1.0, 0.0},
                                      {0.0, 0.0, 0.0, -1.0}});
    const HermitianOperator b = herm({{0.0, 1.0, 0.0, 0.0},
                                      {1.0, 0.0, 0.0, 0.0},
                                      {0.0, 0.0, 0.0, 2.0},
                                      {0.0, 0.0, 2.0, 0.0}});
    const CanonicalForm form = canonicalize(a, b);
    REQUIRE(form.pair_blocks.size() == 2);
    CHECK(form.singletons.empty());
    CHECK(form.pair_blocks[0].a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(form.pair_blocks[0].b == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(form.pair_blocks[1].a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(form.pair_blocks[1].b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(form.pair_blocks[0].index_pair == std::array<int, 2>{0, 1});
    CHECK(form.pair_blocks[1].index_pair == std::array<int, 2>{2, 3});
    CHECK(verify(a, b, form).pass);
}

TEST_CASE("zero A leaves B diagonalized on the kernel") {
    const HermitianOperator a = herm({{0.0, 0.0}, {0.0, 0.0}});
    const HermitianOperator b = herm({{1.0, 0.0}, {0.0, -1.0}});
    const CanonicalForm form = canonicalize(a, b);
    CHECK(form.pair_blocks.empty());
    REQUIRE(form.singletons.size() == 2);
    CHECK(form.singletons[0].alpha == 0.0);
    CHECK(form.singletons[0].beta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(form.singletons[1].alpha == 0.0);
    CHECK(form.singletons[1].beta == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(verify(a, b, form).pass);
}

TEST_CASE("reconstruct places entries exactly") {
    CanonicalForm form{3,
                       {{2.0, 0.5, {0, 1}}},
                       {{-3.0, 0.0, 2}},
                       UnitaryMatrix(ComplexMatrix::identity(3)),
                       {1e-9, 1e-9, 1e-9}};
    const auto [a, b] = reconstruct(form);
    CHECK(a.matrix()(0, 1) == cplx{2.0, 0.0});
    CHECK(a.matrix()(1, 0) == cplx{2.0, 0.0});
    CHECK(a.matrix()(2, 2) == cplx{-3.0, 0.0});
    CHECK(b.matrix()(0, 1) == cplx{0.0, -0.5});
    CHECK(b.matrix()(1, 0) == cplx{0.0, 0.5});
    CHECK(b.matrix()(2, 2) == cplx{0.0, 0.0});
    CHECK(a.matrix()(0, 0) == cplx{0.0, 0.0});
}

TEST_CASE("reconstruct rejects malformed index sets") {
    CanonicalForm overlap{2,
                          {{1.0, 1.0, {0, 0}}},
                          {},
                          UnitaryMatrix(ComplexMatrix::identity(2)),
                          {1e-9, 1e-9, 1e-9}};
    CHECK_THROWS_AS((void)reconstruct(overlap), std::invalid_argument);
    CanonicalForm gap{3,
                      {{1.0, 1.0, {0, 1}}},
                      {},
                      UnitaryMatrix(ComplexMatrix::identity(3)),
                      {1e-9, 1e-9, 1e-9}};
    CHECK_THROWS_AS((void)reconstruct(gap), std::invalid_argument);
}

TEST_CASE("synthesized pairs anticommute and round-trip through canonicalize") {
    const std::vector<BlockSpec> specs = {
        {{{1.0, 2.0}}, {}},
        {{{2.5, 0.25}}, {{1.5, 0.0}}},
        {{{1.0, 1.0}, {3.0, 0.5}}, {{0.0, 2.0}, {-1.25, 0.0}}},
        {{}, {{1.0, 0.0}, {0.0, -2.0}, {0.0, 0.0}}},
        {{{0.75, 3.0}, {0.75, 1.0}, {2.0, 2.0}}, {{0.0, 4.5}}},
    };
    std::uint64_t seed = 2026;
    for (const BlockSpec& spec : specs) {
        const auto [a, b] = random_anticommuting_pair(spec, seed++);
        const OmegaClass cls = classify(a, b);
        CHECK((cls.kind == OmegaKind::Anticommute || cls.kind == OmegaKind::Degenerate));
        const CanonicalForm form = canonicalize(a, b);
        CHECK(flat_close(flatten(form), flatten(spec), 1e-9));
        const VerifyReport rep = verify(a, b, form);
        CHECK(rep.pass);
        CHECK(rep.unitarity <= rep.unitarity_bound);
    }
}

TEST_CASE("canonical ordering sorts pairs then singletons descending") {
    const BlockSpec spec{{{1.0, 5.0}, {2.0, 1.0}, {2.0, 3.0}}, {{0.0, 1.0}, {4.0, 0.0}}};
    const auto [a, b] = random_anticommuting_pair(spec, 99);
    const CanonicalForm form = canonicalize(a, b);
    REQUIRE(form.pair_blocks.size() == 3);
    REQUIRE(form.singletons.size() == 2);
    CHECK(form.pair_blocks[0].a == doctest::Approx(2.0));
    CHECK(form.pair_blocks[0].b == doctest::Approx(3.0));
    CHECK(form.pair_blocks[1].a == doctest::Approx(2.0));
    CHECK(form.pair_blocks[1].b == doctest::Approx(1.0));
    CHECK(form.pair_blocks[2].a == doctest::Approx(1.0));
    CHECK(form.pair_blocks[2].b == doctest::Approx(5.0));
    CHECK(form.singletons[0].alpha == doctest::Approx(4.0));
    CHECK(form.singletons[1].alpha == doctest::Approx(0.0));
    CHECK(form.singletons[1].beta == doctest::Approx(1.0));
    int expect = 0;
    for (const PairBlock& p : form.pair_blocks) {
        CHECK(p.index_pair[0] == expect);
        CHECK(p.index_pair[1] == expect + 1);
        expect += 2;
    }
    for (const Singleton& s : form.singletons) CHECK(s.index == expect++);
}

TEST_CASE("canonicalize is bit-identical across repeated runs") {
    const BlockSpec spec{{{1.5, 2.5}, {0.5, 0.5}}, {{3.0, 0.0}, {0.0, -1.0}}};
    const auto [a, b] = random_anticommuting_pair(spec, 7);
    const CanonicalForm f1 = canonicalize(a, b);
    const CanonicalForm f2 = canonicalize(a, b);
    REQUIRE(f1.pair_blocks.size() == f2.pair_blocks.size());
    for (std::size_t i = 0; i < f1.pair_blocks.size(); ++i) {
        CHECK(f1.pair_blocks[i].a == f2.pair_blocks[i].a);
        CHECK(f1.pair_blocks[i].b == f2.pair_blocks[i].b);
    }
    REQUIRE(f1.singletons.size() == f2.singletons.size());
    for (std::size_t i = 0; i < f1.singletons.size(); ++i) {
        CHECK(f1.singletons[i].alpha == f2.singletons[i].alpha);
        CHECK(f1.singletons[i].beta == f2.singletons[i].beta);
    }
    CHECK(frobenius_distance(f1.transform.matrix(), f2.transform.matrix()) == 0.0);
}

TEST_CASE("non-anticommuting input is rejected up front") {
    const HermitianOperator a = herm({{1.0, 0.0}, {0.0, -1.0}});
    CHECK_THROWS_AS((void)canonicalize(a, a), std::invalid_argument);
    const HermitianOperator c = herm({{0.0, 1.0}, {1.0, 0.0}});
    const HermitianOperator mix = herm({{1.0, 1.0}, {1.0, -1.0}});
    CHECK_THROWS_AS((void)canonicalize(c, mix), std::invalid_argument);
}

TEST_CASE("near-miss anticommutation inside the class gate is caught downstream") {
    // The stray B entry sits on an eigenvalue of size 1e-3, so its
    // anticommutator footprint is 2e-11 and classify at 1e-10 lets the pair
    // through; the unpaired eigenspace then fails its annihilation check.
    const HermitianOperator a = herm({{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, 1e-3}});
    const HermitianOperator b =
        herm({{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1e-8}});
    CHECK_THROWS_AS((void)canonicalize(a, b, 1e-10), std::runtime_error);
}

TEST_CASE("block spec validation rejects bad content") {
    CHECK_THROWS_AS((void)random_anticommuting_pair({{}, {}}, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)random_anticommuting_pair({{{-1.0, 2.0}}, {}}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)random_anticommuting_pair({{{1.0, 0.0}}, {}}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)random_anticommuting_pair({{}, {{1.0, 1.0}}}, 1),
                    std::invalid_argument);
}

TEST_CASE("verify flags a transform that does not match the pair") {
    const BlockSpec spec{{{1.0, 2.0}}, {}};
    const auto [a, b] = random_anticommuting_pair(spec, 11);
    CanonicalForm form = canonicalize(a, b);
    form.pair_blocks[0].b = 3.0;  // corrupt the content
    const VerifyReport rep = verify(a, b, form);
    CHECK_FALSE(rep.pass);
    CHECK(rep.residual_b > rep.bound);
}
