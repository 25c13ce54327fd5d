#pragma once

#include <cstdint>
#include <string>

#include "pauliform/matkit.hpp"

namespace pauliform {

// Verdict for the relation A B = omega B A. Both is reserved: if the pair
// satisfies both signs the product A B must itself be negligible, which the
// Degenerate branch catches first, so classify never emits Both.
enum class OmegaKind { Commute, Anticommute, Both, Degenerate, None };

std::string to_string(OmegaKind kind);

struct OmegaClass {
    OmegaKind kind;
    double residual_commute;      // ||AB - BA||_F
    double residual_anticommute;  // ||AB + BA||_F
};

// ||A B - omega B A||_F for an arbitrary complex omega.
double omega_residual(const HermitianOperator& a, const HermitianOperator& b, cplx omega);

// Degenerate when ||AB||_F <= tol * max(1, ||A||_F ||B||_F); otherwise the
// first of Commute / Anticommute whose residual clears the same bound; None
// when neither does.
OmegaClass classify(const HermitianOperator& a, const HermitianOperator& b,
                    double tol = kDefaultValidationTol);

struct PhaseScanReport {
    int dim = 0;
    long long trials = 0;
    long long degenerate = 0;
    long long commuting = 0;
    long long anticommuting = 0;
    long long none = 0;
    // pairs whose best-fit unit omega gives a vanishing residual with omega
    // away from both +1 and -1; expected to stay at zero
    long long counterexamples = 0;
    std::uint64_t seed = 0;
};

// Draws `trials` random Hermitian pairs, classifies each, and for every pair
// with nonnegligible A B fits the unit-modulus omega minimizing
// ||AB - omega BA||_F, namely omega = <BA, AB> / |<BA, AB>| in the Frobenius
// inner product. Counts how often that optimum both vanishes and sits away
// from +1 and -1.
PhaseScanReport phase_theorem_scan(int dim, long long trials, std::uint64_t seed);

}  // namespace pauliform
