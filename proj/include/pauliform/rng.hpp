#pragma once

#include <cstdint>
#include <random>

#include "pauliform/matkit.hpp"

namespace pauliform {

// Deterministic random source. Raw bits come from mt19937_64 and are shaped
// here rather than through library distribution objects, so a seed pins the
// whole stream regardless of standard library version.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double gauss();
    cplx gauss_cplx() {
        const double re = gauss();
        const double im = gauss();
        return {re, im};
    }

    // inclusive bounds
    int uniform_int(int lo, int hi);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

ComplexMatrix random_hermitian_matrix(int dim, SeededRng& rng);
HermitianOperator random_hermitian(int dim, SeededRng& rng);
UnitaryMatrix random_unitary(int dim, SeededRng& rng);

}  // namespace pauliform
