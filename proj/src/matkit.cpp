#include "pauliform/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace pauliform {

namespace {

constexpr int kMaxJacobiSweeps = 60;
constexpr double kOffDiagTol = 1e-14;   // sweep termination, relative to ||H||_F
constexpr double kOrthoTol = 1e-14;     // column-cosine target for one-sided Jacobi
constexpr double kPhaseTol = 1e-12;     // "first nonzero component" cutoff on unit columns
constexpr double kRankRelEps = 1e-13;   // columns this far below sigma_max get basis completion

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

// Unitary J = [[c, s], [-s*conj(phi), c*conj(phi)]] acting in the (p,q) plane,
// chosen so J^dag [[alpha, beta], [conj(beta), gamma]] J is diagonal.
struct JacobiRotation {
    double c;
    double s;
    cplx phi;
};

JacobiRotation make_rotation(double alpha, double gamma, cplx beta) {
    const double absb = std::abs(beta);
    const cplx phi = beta / absb;
    const double tau = (gamma - alpha) / (2.0 * absb);
    const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, phi};
}

// columns (p, q) <- columns (p, q) * J
void rotate_columns(ComplexMatrix& m, int p, int q, const JacobiRotation& r) {
    const cplx phib = std::conj(r.phi);
    for (int k = 0; k < m.rows(); ++k) {
        const cplx mp = m(k, p);
        const cplx mq = m(k, q);
        m(k, p) = r.c * mp - r.s * phib * mq;
        m(k, q) = r.s * mp + r.c * phib * mq;
    }
}

// rows (p, q) <- J^dag * rows (p, q)
void rotate_rows(ComplexMatrix& m, int p, int q, const JacobiRotation& r) {
    for (int k = 0; k < m.cols(); ++k) {
        const cplx mp = m(p, k);
        const cplx mq = m(q, k);
        m(p, k) = r.c * mp - r.s * r.phi * mq;
        m(q, k) = r.s * mp + r.c * r.phi * mq;
    }
}

double offdiag_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (int p = 0; p < m.rows(); ++p)
        for (int q = 0; q < m.cols(); ++q)
            if (p != q) acc += std::norm(m(p, q));
    return std::sqrt(acc);
}

// Rotates column j by a unit phase so its first component with magnitude
// above kPhaseTol becomes real positive. Returns the phase applied.
cplx fix_column_phase(ComplexMatrix& m, int j) {
    for (int i = 0; i < m.rows(); ++i) {
        const cplx x = m(i, j);
        const double ax = std::abs(x);
        if (ax > kPhaseTol) {
            const cplx f = std::conj(x) / ax;
            for (int k = 0; k < m.rows(); ++k) m(k, j) *= f;
            return f;
        }
    }
    return {1.0, 0.0};
}

void scale_column(ComplexMatrix& m, int j, cplx f) {
    for (int k = 0; k < m.rows(); ++k) m(k, j) *= f;
}

double column_norm(const ComplexMatrix& m, int j) {
    double acc = 0.0;
    for (int k = 0; k < m.rows(); ++k) acc += std::norm(m(k, j));
    return std::sqrt(acc);
}

struct RawSvd {
    ComplexMatrix u;
    std::vector<double> sigma;
    ComplexMatrix v;
};

// Fills u columns [filled, total) with an orthonormal extension. Candidates
// are canonical basis vectors; the one with the largest residual against the
// current span wins, which keeps the choice deterministic.
void complete_basis(ComplexMatrix& u, int filled) {
    const int m = u.rows();
    for (int slot = filled; slot < u.cols(); ++slot) {
        int best = -1;
        double best_norm = -1.0;
        std::vector<cplx> best_col;
        for (int cand = 0; cand < m; ++cand) {
            std::vector<cplx> w(m, cplx{0.0, 0.0});
            w[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int j = 0; j < slot; ++j) {
                    cplx proj{0.0, 0.0};
                    for (int k = 0; k < m; ++k) proj += std::conj(u(k, j)) * w[k];
                    for (int k = 0; k < m; ++k) w[k] -= proj * u(k, j);
                }
            }
            double nrm = 0.0;
            for (const cplx& x : w) nrm += std::norm(x);
            nrm = std::sqrt(nrm);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = cand;
                best_col = std::move(w);
            }
        }
        if (best < 0 || best_norm <= 0.0)
            throw std::runtime_error("complete_basis: no extension direction found");
        for (int k = 0; k < m; ++k) u(k, slot) = best_col[k] / best_norm;
    }
}

// One-sided Jacobi on the columns; requires rows >= cols. No phase convention
// applied here, the caller handles that once transposition games are done.
RawSvd one_sided_jacobi(const ComplexMatrix& input) {
    const int m = input.rows();
    const int n = input.cols();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);

    bool converged = false;
    for (int sweep = 0; sweep <= kMaxJacobiSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq{0.0, 0.0};
                for (int k = 0; k < m; ++k) {
                    app += std::norm(a(k, p));
                    aqq += std::norm(a(k, q));
                    apq += std::conj(a(k, p)) * a(k, q);
                }
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= kOrthoTol * std::sqrt(app * aqq)) continue;
                const JacobiRotation r = make_rotation(app, aqq, apq);
                rotate_columns(a, p, q, r);
                rotate_columns(v, p, q, r);
                rotated = true;
            }
        }
        converged = !rotated || n == 1;
    }
    if (!converged) throw std::runtime_error("svd: Jacobi sweep limit exceeded");

    std::vector<double> norms(n);
    for (int j = 0; j < n; ++j) norms[j] = column_norm(a, j);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return norms[x] > norms[y]; });

    const double smax = norms[order[0]];
    RawSvd out{ComplexMatrix(m, m), std::vector<double>(n), ComplexMatrix(n, n)};
    int filled = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.sigma[j] = norms[src];
        for (int k = 0; k < n; ++k) out.v(k, j) = v(k, src);
        if (norms[src] > smax * kRankRelEps * std::max(m, n)) {
            if (filled != j)
                throw std::runtime_error("svd: rank cutoff out of order");
            for (int k = 0; k < m; ++k) out.u(k, j) = a(k, src) / norms[src];
            ++filled;
        }
    }
    complete_basis(out.u, filled);
    return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    data_.assign(static_cast<std::size_t>(rows) * cols, cplx{0.0, 0.0});
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const int r = static_cast<int>(rows.size());
    if (r == 0) throw std::invalid_argument("ComplexMatrix: empty row list");
    const int c = static_cast<int>(rows.begin()->size());
    ComplexMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("ComplexMatrix: ragged row list");
        int j = 0;
        for (const cplx& x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

cplx ComplexMatrix::trace() const {
    if (!square()) throw std::invalid_argument("trace: matrix must be square");
    cplx acc{0.0, 0.0};
    for (int i = 0; i < rows_; ++i) acc += (*this)(i, i);
    return acc;
}

double ComplexMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (const cplx& x : data_) acc += std::norm(x);
    return std::sqrt(acc);
}

bool ComplexMatrix::all_finite() const {
    for (const cplx& x : data_)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    check_same_shape(*this, rhs, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    check_same_shape(*this, rhs, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& x : data_) x *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("operator*: inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

cplx frobenius_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    check_same_shape(x, y, "frobenius_inner");
    cplx acc{0.0, 0.0};
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) acc += std::conj(x(i, j)) * y(i, j);
    return acc;
}

double frobenius_distance(const ComplexMatrix& m1, const ComplexMatrix& m2) {
    check_same_shape(m1, m2, "frobenius_distance");
    double acc = 0.0;
    for (int i = 0; i < m1.rows(); ++i)
        for (int j = 0; j < m1.cols(); ++j) acc += std::norm(m1(i, j) - m2(i, j));
    return std::sqrt(acc);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v) {
    if (m.cols() != static_cast<int>(v.size()))
        throw std::invalid_argument("apply: dimension mismatch");
    std::vector<cplx> out(m.rows(), cplx{0.0, 0.0});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() {
    return ComplexMatrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

HermitianOperator::HermitianOperator(ComplexMatrix m, double validation_tol)
    : mat_(std::move(m)), tol_(validation_tol) {
    if (!mat_.square())
        throw std::invalid_argument("HermitianOperator: matrix must be square");
    if (!(tol_ >= 0.0))
        throw std::invalid_argument("HermitianOperator: negative validation tolerance");
    const double dev = frobenius_distance(mat_, mat_.adjoint());
    const double bound = tol_ * std::max(1.0, mat_.frobenius_norm());
    if (!(dev <= bound))
        throw std::invalid_argument("HermitianOperator: not Hermitian within tolerance (deviation " +
                                    std::to_string(dev) + ")");
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, double validation_tol)
    : mat_(std::move(m)), tol_(validation_tol) {
    if (!mat_.square())
        throw std::invalid_argument("UnitaryMatrix: matrix must be square");
    if (!(tol_ >= 0.0))
        throw std::invalid_argument("UnitaryMatrix: negative validation tolerance");
    const double dev = frobenius_distance(mat_.adjoint() * mat_, ComplexMatrix::identity(mat_.rows()));
    const double bound = tol_ * mat_.rows();
    if (!(dev <= bound))
        throw std::invalid_argument("UnitaryMatrix: not unitary within tolerance (deviation " +
                                    std::to_string(dev) + ")");
}

EigenDecomposition eig_hermitian(const HermitianOperator& h) {
    const ComplexMatrix& src = h.matrix();
    const int n = src.rows();

    // Exact-Hermitian working copy; the wrapper admits slack up to its tolerance.
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = std::real(src(i, i));
        for (int j = i + 1; j < n; ++j) {
            const cplx x = 0.5 * (src(i, j) + std::conj(src(j, i)));
            a(i, j) = x;
            a(j, i) = std::conj(x);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double norm = a.frobenius_norm();
    if (norm > 0.0 && n > 1) {
        bool converged = false;
        for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
            if (offdiag_norm(a) <= kOffDiagTol * norm) {
                converged = true;
                break;
            }
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    if (std::abs(a(p, q)) == 0.0) continue;
                    const JacobiRotation r =
                        make_rotation(std::real(a(p, p)), std::real(a(q, q)), a(p, q));
                    rotate_columns(a, p, q, r);
                    rotate_rows(a, p, q, r);
                    // the rotation zeroes (p,q) by construction; pin it exactly
                    a(p, q) = a(q, p) = cplx{0.0, 0.0};
                    a(p, p) = std::real(a(p, p));
                    a(q, q) = std::real(a(q, q));
                    rotate_columns(v, p, q, r);
                }
            }
        }
        if (!converged) throw std::runtime_error("eig_hermitian: Jacobi sweep limit exceeded");
    }

    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = std::real(a(i, i));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

    std::vector<double> values(n);
    ComplexMatrix basis(n, n);
    for (int j = 0; j < n; ++j) {
        values[j] = diag[order[j]];
        for (int k = 0; k < n; ++k) basis(k, j) = v(k, order[j]);
    }
    for (int j = 0; j < n; ++j) fix_column_phase(basis, j);

    return {std::move(values), UnitaryMatrix(std::move(basis))};
}

SvdResult svd(const ComplexMatrix& m) {
    if (!m.all_finite()) throw std::invalid_argument("svd: input has non-finite entries");

    RawSvd raw = [&] {
        if (m.rows() >= m.cols()) return one_sided_jacobi(m);
        RawSvd t = one_sided_jacobi(m.adjoint());
        return RawSvd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }();

    const int npair = std::min(m.rows(), m.cols());
    for (int j = 0; j < raw.u.cols(); ++j) {
        const cplx f = fix_column_phase(raw.u, j);
        if (j < npair && f != cplx{1.0, 0.0}) scale_column(raw.v, j, f);
    }

    return {UnitaryMatrix(std::move(raw.u)), std::move(raw.sigma), UnitaryMatrix(std::move(raw.v))};
}

ComplexMatrix conjugate(const UnitaryMatrix& u, const ComplexMatrix& m) {
    if (!m.square() || m.rows() != u.dim())
        throw std::invalid_argument("conjugate: shape mismatch");
    return u.matrix() * m * u.matrix().adjoint();
}

}  // namespace pauliform
