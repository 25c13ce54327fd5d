#include "pauliform/omega.hpp"

#include <cmath>
#include <stdexcept>

#include "pauliform/rng.hpp"

namespace pauliform {

namespace {

constexpr double kOmegaSeparation = 1e-6;  // distance from +1/-1 before a fit counts as "other"

double pair_scale(const HermitianOperator& a, const HermitianOperator& b) {
    return std::max(1.0, a.matrix().frobenius_norm() * b.matrix().frobenius_norm());
}

}  // namespace

std::string to_string(OmegaKind kind) {
    switch (kind) {
        case OmegaKind::Commute: return "commute";
        case OmegaKind::Anticommute: return "anticommute";
        case OmegaKind::Both: return "both";
        case OmegaKind::Degenerate: return "degenerate";
        case OmegaKind::None: return "none";
    }
    return "unknown";
}

double omega_residual(const HermitianOperator& a, const HermitianOperator& b, cplx omega) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("omega_residual: dimension mismatch");
    const ComplexMatrix ab = a.matrix() * b.matrix();
    const ComplexMatrix ba = b.matrix() * a.matrix();
    return frobenius_distance(ab, omega * ba);
}

OmegaClass classify(const HermitianOperator& a, const HermitianOperator& b, double tol) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("classify: dimension mismatch");
    if (!(tol >= 0.0))
        throw std::invalid_argument("classify: negative tolerance");

    const ComplexMatrix ab = a.matrix() * b.matrix();
    const ComplexMatrix ba = b.matrix() * a.matrix();
    const double r_commute = frobenius_distance(ab, ba);
    const double r_anticommute = frobenius_distance(ab, -1.0 * ba);
    const double bound = tol * pair_scale(a, b);

    OmegaKind kind = OmegaKind::None;
    if (ab.frobenius_norm() <= bound)
        kind = OmegaKind::Degenerate;
    else if (r_commute <= bound)
        kind = OmegaKind::Commute;
    else if (r_anticommute <= bound)
        kind = OmegaKind::Anticommute;
    return {kind, r_commute, r_anticommute};
}

PhaseScanReport phase_theorem_scan(int dim, long long trials, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("phase_theorem_scan: dimension must be positive");
    if (trials < 1) throw std::invalid_argument("phase_theorem_scan: trial count must be positive");

    constexpr double tol = kDefaultValidationTol;
    PhaseScanReport report;
    report.dim = dim;
    report.trials = trials;
    report.seed = seed;

    SeededRng rng(seed);
    for (long long t = 0; t < trials; ++t) {
        const HermitianOperator a = random_hermitian(dim, rng);
        const HermitianOperator b = random_hermitian(dim, rng);

        const OmegaClass cls = classify(a, b, tol);
        switch (cls.kind) {
            case OmegaKind::Degenerate: ++report.degenerate; break;
            case OmegaKind::Commute: ++report.commuting; break;
            case OmegaKind::Anticommute: ++report.anticommuting; break;
            default: ++report.none; break;
        }

        const ComplexMatrix ab = a.matrix() * b.matrix();
        const double scale = pair_scale(a, b);
        if (ab.frobenius_norm() <= tol * scale) continue;

        const ComplexMatrix ba = b.matrix() * a.matrix();
        const cplx inner = frobenius_inner(ba, ab);
        if (std::abs(inner) == 0.0) continue;  // residual is constant in omega, never vanishes here
        const cplx omega = inner / std::abs(inner);
        const double fit_residual = frobenius_distance(ab, omega * ba);
        const bool vanishes = fit_residual <= tol * scale;
        const bool away = std::abs(omega - cplx{1.0, 0.0}) > kOmegaSeparation &&
                          std::abs(omega + cplx{1.0, 0.0}) > kOmegaSeparation;
        if (vanishes && away) ++report.counterexamples;
    }
    return report;
}

}  // namespace pauliform
