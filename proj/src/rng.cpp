#include "pauliform/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pauliform {

double SeededRng::gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 is kept away from zero so the log is finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi_v<double> * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

int SeededRng::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const int span = hi - lo + 1;
    int k = static_cast<int>(uniform() * span);
    if (k >= span) k = span - 1;
    return lo + k;
}

ComplexMatrix random_hermitian_matrix(int dim, SeededRng& rng) {
    ComplexMatrix h(dim, dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = rng.gauss();
        for (int j = i + 1; j < dim; ++j) {
            const cplx x = rng.gauss_cplx() * inv_sqrt2;
            h(i, j) = x;
            h(j, i) = std::conj(x);
        }
    }
    return h;
}

HermitianOperator random_hermitian(int dim, SeededRng& rng) {
    return HermitianOperator(random_hermitian_matrix(dim, rng));
}

UnitaryMatrix random_unitary(int dim, SeededRng& rng) {
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.gauss_cplx();

    // Modified Gram-Schmidt, two projection passes per column.
    for (int j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                cplx proj{0.0, 0.0};
                for (int k = 0; k < dim; ++k) proj += std::conj(g(k, i)) * g(k, j);
                for (int k = 0; k < dim; ++k) g(k, j) -= proj * g(k, i);
            }
        }
        double nrm = 0.0;
        for (int k = 0; k < dim; ++k) nrm += std::norm(g(k, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-10) {
            // Gaussian draws are almost surely nonsingular; redraw this column.
            for (int k = 0; k < dim; ++k) g(k, j) = rng.gauss_cplx();
            --j;
            continue;
        }
        for (int k = 0; k < dim; ++k) g(k, j) /= nrm;
    }
    return UnitaryMatrix(std::move(g));
}

}  // namespace pauliform
