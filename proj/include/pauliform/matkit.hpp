#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace pauliform {

using cplx = std::complex<double>;

inline constexpr double kDefaultValidationTol = 1e-9;

// Dense row-major complex matrix. Plain value type, no views, no sparsity;
// dimensions are expected to stay desk-scale (tens, not thousands).
class ComplexMatrix {
public:
    ComplexMatrix(int rows, int cols);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }

private:
    int rows_;
    int cols_;
    std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// <X, Y> = sum_ij conj(x_ij) y_ij, conjugate-linear in the first argument.
cplx frobenius_inner(const ComplexMatrix& x, const ComplexMatrix& y);
double frobenius_distance(const ComplexMatrix& m1, const ComplexMatrix& m2);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Square matrix within validation_tol of its own adjoint, relative to max(1, ||M||_F).
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m, double validation_tol = kDefaultValidationTol);

    const ComplexMatrix& matrix() const { return mat_; }
    int dim() const { return mat_.rows(); }
    double validation_tol() const { return tol_; }

private:
    ComplexMatrix mat_;
    double tol_;
};

// Square matrix with ||U^dag U - I||_F <= validation_tol * dim.
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(ComplexMatrix m, double validation_tol = kDefaultValidationTol);

    const ComplexMatrix& matrix() const { return mat_; }
    int dim() const { return mat_.rows(); }
    double validation_tol() const { return tol_; }

private:
    ComplexMatrix mat_;
    double tol_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    UnitaryMatrix basis;              // column k is the eigenvector for eigenvalues[k]
};

struct SvdResult {
    UnitaryMatrix left;
    std::vector<double> singular_values;  // nonnegative, descending
    UnitaryMatrix right;
};

// Cyclic complex Jacobi. Deterministic for identical input: fixed sweep order,
// eigenvalues ascending, each eigenvector's first component above 1e-12 made
// real positive. Residual ||H v - lambda v|| stays within 1e-10 * max(1, ||H||_F) * dim.
EigenDecomposition eig_hermitian(const HermitianOperator& h);

// One-sided Jacobi, m = left * diag(singular_values) * right^dag. Same
// determinism and phase conventions as eig_hermitian, applied to left vectors.
SvdResult svd(const ComplexMatrix& m);

// U * M * U^dag.
ComplexMatrix conjugate(const UnitaryMatrix& u, const ComplexMatrix& m);

}  // namespace pauliform
