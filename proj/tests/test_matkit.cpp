#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pauliform/matkit.hpp"
#include "pauliform/rng.hpp"

using namespace pauliform;

namespace {

ComplexMatrix svd_reconstruct(const SvdResult& s, int rows, int cols) {
    ComplexMatrix sigma(rows, cols);
    for (int k = 0; k < static_cast<int>(s.singular_values.size()); ++k)
        sigma(k, k) = s.singular_values[k];
    return s.left.matrix() * sigma * s.right.matrix().adjoint();
}

double eig_residual(const HermitianOperator& h, const EigenDecomposition& ed) {
    const int n = h.dim();
    ComplexMatrix lambda(n, n);
    for (int i = 0; i < n; ++i) lambda(i, i) = ed.eigenvalues[i];
    return frobenius_distance(h.matrix() * ed.basis.matrix(), ed.basis.matrix() * lambda);
}

}  // namespace

TEST_CASE("frobenius distance on the 2x2 pauli pair") {
    // entrywise: |1+i|^2 + |1-i|^2 = 4
    CHECK(frobenius_distance(pauli_x(), pauli_y()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(frobenius_distance(pauli_x(), pauli_x()) == 0.0);
}

TEST_CASE("frobenius inner product is conjugate-linear in the first slot") {
    const cplx i{0.0, 1.0};
    ComplexMatrix a = ComplexMatrix::from_rows({{1.0 + i}});
    ComplexMatrix b = ComplexMatrix::from_rows({{2.0}});
    const cplx v = frobenius_inner(a, b);
    CHECK(v.real() == doctest::Approx(2.0));
    CHECK(v.imag() == doctest::Approx(-2.0));
}

TEST_CASE("matrix product and adjoint basics") {
    ComplexMatrix x = pauli_x();
    ComplexMatrix y = pauli_y();
    ComplexMatrix z = pauli_z();
    // sigma_x sigma_y = i sigma_z
    ComplexMatrix xy = x * y;
    CHECK(frobenius_distance(xy, cplx{0.0, 1.0} * z) == 0.0);
    CHECK(frobenius_distance(x.adjoint(), x) == 0.0);
    CHECK(frobenius_distance(x * x, ComplexMatrix::identity(2)) == 0.0);
    CHECK_THROWS_AS(x * ComplexMatrix(3, 3), std::invalid_argument);
}

TEST_CASE("hermitian wrapper validates") {
    CHECK_THROWS_AS(HermitianOperator(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(HermitianOperator(ComplexMatrix(2, 3)), std::invalid_argument);
    CHECK_NOTHROW(HermitianOperator(pauli_y()));
}

TEST_CASE("unitary wrapper validates") {
    CHECK_NOTHROW(UnitaryMatrix(ComplexMatrix::identity(4)));
    CHECK_THROWS_AS(UnitaryMatrix(2.0 * ComplexMatrix::identity(2)), std::invalid_argument);
}

TEST_CASE("eig of a diagonal sign matrix is a column permutation") {
    HermitianOperator h(pauli_z());
    const EigenDecomposition ed = eig_hermitian(h);
    REQUIRE(ed.eigenvalues.size() == 2);
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    ComplexMatrix expect = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(frobenius_distance(ed.basis.matrix(), expect) <= 1e-14);
}

TEST_CASE("eig of sigma_x fixes vector phases") {
    const EigenDecomposition ed = eig_hermitian(HermitianOperator(pauli_x()));
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    // first component of each vector real positive
    CHECK(std::abs(ed.basis.matrix()(0, 0) - cplx{r, 0.0}) <= 1e-14);
    CHECK(std::abs(ed.basis.matrix()(1, 0) - cplx{-r, 0.0}) <= 1e-14);
    CHECK(std::abs(ed.basis.matrix()(0, 1) - cplx{r, 0.0}) <= 1e-14);
    CHECK(std::abs(ed.basis.matrix()(1, 1) - cplx{r, 0.0}) <= 1e-14);
}

TEST_CASE("eig handles a repeated eigenvalue") {
    HermitianOperator h(ComplexMatrix::from_rows(
        {{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}}));
    const EigenDecomposition ed = eig_hermitian(h);
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig_residual(h, ed) <= 1e-10 * 3);
}

TEST_CASE("eig residual and ordering on random hermitians") {
    SeededRng rng(2001);
    for (int dim = 1; dim <= 12; ++dim) {
        for (int rep = 0; rep < 8; ++rep) {
            const HermitianOperator h = random_hermitian(dim, rng);
            const EigenDecomposition ed = eig_hermitian(h);
            REQUIRE(static_cast<int>(ed.eigenvalues.size()) == dim);
            for (int k = 1; k < dim; ++k) CHECK(ed.eigenvalues[k - 1] <= ed.eigenvalues[k]);
            const double bound = 1e-10 * std::max(1.0, h.matrix().frobenius_norm()) * dim;
            CHECK(eig_residual(h, ed) <= bound);
        }
    }
}

TEST_CASE("eig spectrum is invariant under unitary conjugation") {
    SeededRng rng(2002);
    for (int rep = 0; rep < 10; ++rep) {
        const int dim = 2 + rep % 7;
        const HermitianOperator h = random_hermitian(dim, rng);
        const UnitaryMatrix u = random_unitary(dim, rng);
        const HermitianOperator hc(conjugate(u, h.matrix()));
        const auto e1 = eig_hermitian(h).eigenvalues;
        const auto e2 = eig_hermitian(hc).eigenvalues;
        for (int k = 0; k < dim; ++k) CHECK(e1[k] == doctest::Approx(e2[k]).epsilon(1e-9));
        CHECK(std::abs(h.matrix().trace() - hc.matrix().trace()) <= 1e-12 * dim);
        CHECK(h.matrix().frobenius_norm() ==
              doctest::Approx(hc.matrix().frobenius_norm()).epsilon(1e-12));
    }
}

TEST_CASE("eig is deterministic for identical input") {
    SeededRng rng(2003);
    const HermitianOperator h = random_hermitian(7, rng);
    const EigenDecomposition e1 = eig_hermitian(h);
    const EigenDecomposition e2 = eig_hermitian(h);
    for (int k = 0; k < 7; ++k) CHECK(e1.eigenvalues[k] == e2.eigenvalues[k]);
    CHECK(frobenius_distance(e1.basis.matrix(), e2.basis.matrix()) == 0.0);
}

TEST_CASE("svd of a row vector") {
    ComplexMatrix m = ComplexMatrix::from_rows({{3.0, 4.0}});
    const SvdResult s = svd(m);
    REQUIRE(s.singular_values.size() == 1);
    CHECK(s.singular_values[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(s.left.dim() == 1);
    CHECK(s.right.dim() == 2);
    CHECK(frobenius_distance(svd_reconstruct(s, 1, 2), m) <= 1e-12);
    // left phase convention pins U to [1]
    CHECK(std::abs(s.left.matrix()(0, 0) - cplx{1.0, 0.0}) <= 1e-14);
}

TEST_CASE("svd of the zero matrix completes bases") {
    ComplexMatrix z(3, 2);
    const SvdResult s = svd(z);
    CHECK(s.singular_values[0] == 0.0);
    CHECK(s.singular_values[1] == 0.0);
    CHECK(frobenius_distance(s.left.matrix(), ComplexMatrix::identity(3)) <= 1e-14);
    CHECK(frobenius_distance(s.right.matrix(), ComplexMatrix::identity(2)) <= 1e-14);
}

TEST_CASE("svd singular values of a 2x2 match the closed form") {
    SeededRng rng(2004);
    for (int rep = 0; rep < 20; ++rep) {
        ComplexMatrix b(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) b(i, j) = rng.gauss_cplx();
        // eigenvalues of B^dag B: trace p, determinant |det B|^2
        const double p = b.frobenius_norm() * b.frobenius_norm();
        const cplx det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
        const double q = std::abs(det);
        const double disc = std::sqrt(std::max(0.0, p * p - 4.0 * q * q));
        const double hi = std::sqrt((p + disc) / 2.0);
        const double lo = std::sqrt(std::max(0.0, (p - disc) / 2.0));
        const SvdResult s = svd(b);
        CHECK(s.singular_values[0] == doctest::Approx(hi).epsilon(1e-12));
        CHECK(s.singular_values[1] == doctest::Approx(lo).epsilon(1e-10));
    }
}

TEST_CASE("svd reconstruction on random rectangular matrices") {
    SeededRng rng(2005);
    const int shapes[][2] = {{1, 1}, {2, 5}, {5, 2}, {4, 4}, {7, 3}, {6, 6}, {3, 8}};
    for (const auto& sh : shapes) {
        ComplexMatrix m(sh[0], sh[1]);
        for (int i = 0; i < sh[0]; ++i)
            for (int j = 0; j < sh[1]; ++j) m(i, j) = rng.gauss_cplx();
        const SvdResult s = svd(m);
        const int nmin = std::min(sh[0], sh[1]);
        REQUIRE(static_cast<int>(s.singular_values.size()) == nmin);
        for (int k = 0; k < nmin; ++k) {
            CHECK(s.singular_values[k] >= 0.0);
            if (k > 0) CHECK(s.singular_values[k - 1] >= s.singular_values[k]);
        }
        const double bound = 1e-10 * std::max(1.0, m.frobenius_norm()) * std::max(sh[0], sh[1]);
        CHECK(frobenius_distance(svd_reconstruct(s, sh[0], sh[1]), m) <= bound);
    }
}

TEST_CASE("svd handles rank deficiency") {
    // rank-1: outer product of (1, 2i, -1) with (1, 1)
    ComplexMatrix m(3, 2);
    const cplx col[3] = {cplx{1.0, 0.0}, cplx{0.0, 2.0}, cplx{-1.0, 0.0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = col[i];
    const SvdResult s = svd(m);
    CHECK(s.singular_values[0] == doctest::Approx(std::sqrt(12.0)).epsilon(1e-12));
    CHECK(s.singular_values[1] <= 1e-12);
    CHECK(frobenius_distance(svd_reconstruct(s, 3, 2), m) <= 1e-10 * 3);
}

TEST_CASE("svd singular values are invariant under unitary factors") {
    SeededRng rng(2006);
    ComplexMatrix m(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = rng.gauss_cplx();
    const UnitaryMatrix u = random_unitary(5, rng);
    const auto s1 = svd(m).singular_values;
    const auto s2 = svd(u.matrix() * m).singular_values;
    for (int k = 0; k < 5; ++k) CHECK(s1[k] == doctest::Approx(s2[k]).epsilon(1e-9));
}

TEST_CASE("svd is deterministic for identical input") {
    SeededRng rng(2007);
    ComplexMatrix m(4, 6);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) m(i, j) = rng.gauss_cplx();
    const SvdResult s1 = svd(m);
    const SvdResult s2 = svd(m);
    for (std::size_t k = 0; k < s1.singular_values.size(); ++k)
        CHECK(s1.singular_values[k] == s2.singular_values[k]);
    CHECK(frobenius_distance(s1.left.matrix(), s2.left.matrix()) == 0.0);
    CHECK(frobenius_distance(s1.right.matrix(), s2.right.matrix()) == 0.0);
}

TEST_CASE("conjugate flips a diagonal sign pattern under a swap permutation") {
    // permutation exchanging the two middle basis vectors of a 4-dim space
    ComplexMatrix f(4, 4);
    f(0, 0) = 1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 3) = 1.0;
    ComplexMatrix a(4, 4);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    a(2, 2) = 1.0;
    a(3, 3) = -1.0;
    ComplexMatrix expect(4, 4);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0;
    expect(2, 2) = -1.0;
    expect(3, 3) = -1.0;
    CHECK(frobenius_distance(conjugate(UnitaryMatrix(f), a), expect) == 0.0);
}

TEST_CASE("conjugate preserves hermiticity, trace, and norm") {
    SeededRng rng(2008);
    for (int rep = 0; rep < 10; ++rep) {
        const int dim = 2 + rep % 6;
        const HermitianOperator h = random_hermitian(dim, rng);
        const UnitaryMatrix u = random_unitary(dim, rng);
        const ComplexMatrix c = conjugate(u, h.matrix());
        CHECK(frobenius_distance(c, c.adjoint()) <= 1e-12 * std::max(1.0, c.frobenius_norm()));
        CHECK(std::abs(c.trace() - h.matrix().trace()) <= 1e-12 * dim);
        CHECK(c.frobenius_norm() ==
              doctest::Approx(h.matrix().frobenius_norm()).epsilon(1e-12));
    }
}

TEST_CASE("kron dimensions and values") {
    ComplexMatrix k = kron(pauli_z(), pauli_x());
    REQUIRE(k.rows() == 4);
    CHECK(k(0, 1) == cplx{1.0, 0.0});
    CHECK(k(2, 3) == cplx{-1.0, 0.0});
    CHECK(k(0, 0) == cplx{0.0, 0.0});
}

TEST_CASE("random unitary is unitary and seed-stable") {
    SeededRng r1(99);
    SeededRng r2(99);
    const UnitaryMatrix u1 = random_unitary(6, r1);
    const UnitaryMatrix u2 = random_unitary(6, r2);
    CHECK(frobenius_distance(u1.matrix(), u2.matrix()) == 0.0);
    CHECK(frobenius_distance(u1.matrix().adjoint() * u1.matrix(), ComplexMatrix::identity(6)) <=
          1e-13 * 6);
}
