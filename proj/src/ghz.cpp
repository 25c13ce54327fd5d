#include "pauliform/ghz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pauliform/omega.hpp"

namespace pauliform {

namespace {

constexpr int kMaxTotalDim = 1024;
constexpr long long kMaxAssignments = 10'000'000;
constexpr long long kMaxPairTuples = 4096;

ComplexMatrix kron_fold(const std::vector<const ComplexMatrix*>& factors) {
    ComplexMatrix acc = *factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, *factors[i]);
    return acc;
}

long long checked_product(long long acc, long long factor, long long limit, const char* what) {
    if (factor <= 0 || acc > limit / factor)
        throw std::runtime_error(std::string(what) + " exceeds the enumeration guard");
    return acc * factor;
}

}  // namespace

StateVector::StateVector(std::vector<cplx> amplitudes, double tol)
    : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw std::invalid_argument("StateVector: empty amplitude list");
    double norm2 = 0.0;
    for (const cplx& x : amplitudes_) norm2 += std::norm(x);
    if (!std::isfinite(norm2) || std::abs(std::sqrt(norm2) - 1.0) > tol)
        throw std::invalid_argument("StateVector: amplitudes are not unit norm");
}

GhzSet build_ghz_set(const std::vector<std::pair<HermitianOperator, HermitianOperator>>& pairs,
                     double tol) {
    const int n = static_cast<int>(pairs.size());
    if (n < 3) throw std::invalid_argument("build_ghz_set: needs at least 3 local pairs");

    GhzSet gs{n, {}, 1, {}, ComplexMatrix(1, 1), std::nullopt, 0.0, {}, {}};
    long long total = 1;
    for (int i = 0; i < n; ++i) {
        const auto& [a, b] = pairs[i];
        if (a.dim() != b.dim())
            throw std::invalid_argument("build_ghz_set: local pair dimensions differ at site " +
                                        std::to_string(i));
        const OmegaClass cls = classify(a, b, tol);
        if (cls.kind != OmegaKind::Anticommute && cls.kind != OmegaKind::Degenerate)
            throw std::invalid_argument("build_ghz_set: local pair at site " + std::to_string(i) +
                                        " is not anticommuting (classified " +
                                        to_string(cls.kind) + ")");
        gs.local_dims.push_back(a.dim());
        total *= a.dim();
        if (total > kMaxTotalDim)
            throw std::invalid_argument("build_ghz_set: total dimension exceeds " +
                                        std::to_string(kMaxTotalDim));
        gs.a_spectra.push_back(clustered_spectrum(a, tol));
        gs.b_spectra.push_back(clustered_spectrum(b, tol));
    }
    gs.total_dim = static_cast<int>(total);

    for (int k = 0; k < n; ++k) {
        std::vector<const ComplexMatrix*> factors;
        for (int i = 0; i < n; ++i)
            factors.push_back(i == k ? &pairs[i].first.matrix() : &pairs[i].second.matrix());
        gs.operators.push_back(kron_fold(factors));
    }
    std::vector<const ComplexMatrix*> all_a;
    for (int i = 0; i < n; ++i) all_a.push_back(&pairs[i].first.matrix());
    gs.product_operator = kron_fold(all_a);

    ComplexMatrix prod = gs.operators[0];
    for (int k = 1; k < n; ++k) prod = prod * gs.operators[k];
    // squared norm via the inner product so integer-entry cases stay exact
    const double ref2 = std::real(frobenius_inner(gs.product_operator, gs.product_operator));
    if (ref2 > 0.0) {
        const double s = std::real(frobenius_inner(gs.product_operator, prod)) / ref2;
        const ComplexMatrix diff = prod - s * gs.product_operator;
        gs.product_sign_residual =
            diff.frobenius_norm() / std::max(1.0, prod.frobenius_norm());
        if (gs.product_sign_residual <= tol) gs.product_sign = s;
    } else {
        gs.product_sign_residual = prod.frobenius_norm() > 0.0 ? 1.0 : 0.0;
        if (gs.product_sign_residual == 0.0) gs.product_sign = 0.0;
    }
    return gs;
}

CommutationReport check_mutual_commutation(const std::vector<ComplexMatrix>& ops, double tol) {
    for (const ComplexMatrix& op : ops)
        if (!op.square() || op.rows() != ops.front().rows())
            throw std::invalid_argument("check_mutual_commutation: operators must be square and "
                                        "of equal dimension");
    CommutationReport rep{true, 0.0, {-1, -1}, {}, {}, {}};
    const int m = static_cast<int>(ops.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double res = frobenius_distance(ops[i] * ops[j], ops[j] * ops[i]);
            const double bound =
                tol * std::max(1.0, ops[i].frobenius_norm() * ops[j].frobenius_norm());
            rep.index_pairs.push_back({i, j});
            rep.residuals.push_back(res);
            rep.bounds.push_back(bound);
            if (res > bound) rep.all_commute = false;
            if (res > rep.max_residual) {
                rep.max_residual = res;
                rep.worst_pair = {i, j};
            }
        }
    }
    return rep;
}

CommutationReport check_mutual_commutation(const GhzSet& gs, double tol) {
    std::vector<ComplexMatrix> ops = gs.operators;
    ops.push_back(gs.product_operator);
    return check_mutual_commutation(ops, tol);
}

StateVector ghz_state(int parties) {
    if (parties < 2) throw std::invalid_argument("ghz_state: needs at least 2 parties");
    if (parties > 20) throw std::invalid_argument("ghz_state: party count exceeds 20");
    std::vector<cplx> amps(std::size_t{1} << parties, cplx{0.0, 0.0});
    const double r = 1.0 / std::sqrt(2.0);
    amps.front() = r;
    amps.back() = -r;
    return StateVector(std::move(amps));
}

std::vector<double> joint_eigenvalues(const std::vector<ComplexMatrix>& ops,
                                      const StateVector& psi, double tol) {
    std::vector<double> values;
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const ComplexMatrix& op = ops[k];
        if (!op.square() || op.rows() != psi.dim())
            throw std::invalid_argument("joint_eigenvalues: operator " + std::to_string(k) +
                                        " does not act on the state space");
        const std::vector<cplx> phi = apply(op, psi.amplitudes());
        cplx overlap{0.0, 0.0};
        for (int i = 0; i < psi.dim(); ++i)
            overlap += std::conj(psi.amplitudes()[i]) * phi[i];
        const double lambda = std::real(overlap);
        double res2 = 0.0;
        for (int i = 0; i < psi.dim(); ++i)
            res2 += std::norm(phi[i] - lambda * psi.amplitudes()[i]);
        const double res = std::sqrt(res2);
        if (res > tol)
            throw std::runtime_error("joint_eigenvalues: state is not an eigenstate of operator " +
                                     std::to_string(k) + " (residual " + std::to_string(res) +
                                     ")");
        values.push_back(lambda);
    }
    return values;
}

std::vector<double> clustered_spectrum(const HermitianOperator& op, double tol) {
    const EigenDecomposition ed = eig_hermitian(op);
    const double threshold = tol * std::max(1.0, op.matrix().frobenius_norm());
    std::vector<double> out;
    std::size_t lo = 0;
    for (std::size_t k = 1; k <= ed.eigenvalues.size(); ++k) {
        if (k == ed.eigenvalues.size() || ed.eigenvalues[k] - ed.eigenvalues[k - 1] > threshold) {
            double mean = 0.0;
            for (std::size_t j = lo; j < k; ++j) mean += ed.eigenvalues[j];
            out.push_back(mean / (k - lo));
            lo = k;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

LhvResult enumerate_assignments(const LhvProblem& problem, double tol) {
    const int n = static_cast<int>(problem.a_spectra.size());
    if (n < 1 || problem.b_spectra.size() != problem.a_spectra.size())
        throw std::invalid_argument("enumerate_assignments: need matching A and B spectra");
    for (int i = 0; i < n; ++i)
        if (problem.a_spectra[i].empty() || problem.b_spectra[i].empty())
            throw std::invalid_argument("enumerate_assignments: empty spectrum at site " +
                                        std::to_string(i));
    for (const LhvConstraint& c : problem.constraints)
        for (const LhvSlot& slot : c.slots)
            if (slot.site < 0 || slot.site >= n || slot.observable < 0 || slot.observable > 1)
                throw std::invalid_argument("enumerate_assignments: constraint slot out of range");
    if (!(tol > 0.0)) throw std::invalid_argument("enumerate_assignments: tolerance must be positive");

    long long total = 1;
    std::vector<int> radix;
    for (int i = 0; i < n; ++i) {
        radix.push_back(static_cast<int>(problem.a_spectra[i].size()));
        radix.push_back(static_cast<int>(problem.b_spectra[i].size()));
        total = checked_product(total, radix[2 * i], kMaxAssignments,
                                "enumerate_assignments: assignment space");
        total = checked_product(total, radix[2 * i + 1], kMaxAssignments,
                                "enumerate_assignments: assignment space");
    }

    LhvResult result{total, {}, {}};
    for (const LhvConstraint& c : problem.constraints) result.targets.push_back(c.target);

    std::vector<int> digit(radix.size(), 0);
    LhvAssignment assign{std::vector<double>(n), std::vector<double>(n)};
    for (long long step = 0; step < total; ++step) {
        for (int i = 0; i < n; ++i) {
            assign.a_values[i] = problem.a_spectra[i][digit[2 * i]];
            assign.b_values[i] = problem.b_spectra[i][digit[2 * i + 1]];
        }
        bool ok = true;
        for (const LhvConstraint& c : problem.constraints) {
            double prod = 1.0;
            for (const LhvSlot& slot : c.slots)
                prod *= slot.observable == 0 ? assign.a_values[slot.site]
                                             : assign.b_values[slot.site];
            if (std::abs(prod - c.target) > tol * std::max(1.0, std::abs(c.target))) {
                ok = false;
                break;
            }
        }
        if (ok) result.satisfying.push_back(assign);
        for (int d = static_cast<int>(digit.size()) - 1; d >= 0; --d) {
            if (++digit[d] < radix[d]) break;
            digit[d] = 0;
        }
    }
    return result;
}

LhvResult lhv_search(const GhzSet& gs, const std::vector<double>& targets, double tol) {
    if (static_cast<int>(targets.size()) != gs.parties + 1)
        throw std::invalid_argument("lhv_search: need one target per operator plus the product");
    LhvProblem problem{gs.a_spectra, gs.b_spectra, {}};
    for (int k = 0; k < gs.parties; ++k) {
        LhvConstraint c{{}, targets[k]};
        for (int i = 0; i < gs.parties; ++i) c.slots.push_back({i, i == k ? 0 : 1});
        problem.constraints.push_back(std::move(c));
    }
    LhvConstraint all_a{{}, targets[gs.parties]};
    for (int i = 0; i < gs.parties; ++i) all_a.slots.push_back({i, 0});
    problem.constraints.push_back(std::move(all_a));
    return enumerate_assignments(problem, tol);
}

TrivialityReport triviality_report(
    const std::vector<std::pair<HermitianOperator, HermitianOperator>>& pairs, double tol) {
    const GhzSet gs = build_ghz_set(pairs, tol);
    const int n = gs.parties;

    TrivialityReport rep{n,    gs.total_dim, {}, {}, 0.0, true, 1, 0, {}, false, false};
    for (const auto& [a, b] : pairs) rep.forms.push_back(canonicalize(a, b, tol));

    std::vector<const ComplexMatrix*> transforms;
    for (const CanonicalForm& form : rep.forms) transforms.push_back(&form.transform.matrix());
    const UnitaryMatrix joint(kron_fold(transforms));

    // Per-site map from canonical basis position to block id, pairs first.
    std::vector<std::vector<int>> block_of_pos;
    long long pair_tuple_count = 1;
    for (const CanonicalForm& form : rep.forms) {
        std::vector<int> ids(form.dim, -1);
        for (std::size_t p = 0; p < form.pair_blocks.size(); ++p) {
            ids[form.pair_blocks[p].index_pair[0]] = static_cast<int>(p);
            ids[form.pair_blocks[p].index_pair[1]] = static_cast<int>(p);
        }
        for (std::size_t s = 0; s < form.singletons.size(); ++s)
            ids[form.singletons[s].index] = static_cast<int>(form.pair_blocks.size() + s);
        block_of_pos.push_back(std::move(ids));
        const long long blocks =
            static_cast<long long>(form.pair_blocks.size() + form.singletons.size());
        rep.tuple_count *= blocks;
        pair_tuple_count *= static_cast<long long>(form.pair_blocks.size());
    }
    if (pair_tuple_count > kMaxPairTuples)
        throw std::runtime_error("triviality_report: pair tuple count exceeds " +
                                 std::to_string(kMaxPairTuples));
    rep.singleton_tuple_count = rep.tuple_count - pair_tuple_count;

    // Tuple code per global index: equal codes mean same block at every site.
    std::vector<long long> code(gs.total_dim);
    for (int g = 0; g < gs.total_dim; ++g) {
        long long c = 0;
        int rest = g;
        for (int i = n - 1; i >= 0; --i) {
            const int d = gs.local_dims[i];
            c = c * (static_cast<long long>(block_of_pos[i].size()) + 1) +
                block_of_pos[i][rest % d];
            rest /= d;
        }
        code[g] = c;
    }

    std::vector<const ComplexMatrix*> family;
    for (const ComplexMatrix& op : gs.operators) family.push_back(&op);
    family.push_back(&gs.product_operator);
    double norm_scale = 1.0;
    for (const ComplexMatrix* op : family)
        norm_scale = std::max(norm_scale, op->frobenius_norm());
    rep.off_tuple_bound = tol * norm_scale;
    for (const ComplexMatrix* op : family) {
        const ComplexMatrix conj_op = conjugate(joint, *op);
        double worst = 0.0;
        for (int r = 0; r < gs.total_dim; ++r)
            for (int c = 0; c < gs.total_dim; ++c)
                if (code[r] != code[c]) worst = std::max(worst, std::abs(conj_op(r, c)));
        rep.off_tuple_max.push_back(worst);
        if (worst > rep.off_tuple_bound) rep.block_diagonal = false;
    }

    if (pair_tuple_count > 0) {
        const ComplexMatrix sx = pauli_x();
        const ComplexMatrix sy = pauli_y();
        const StateVector psi = ghz_state(n);
        std::vector<int> choice(n, 0);
        for (long long step = 0; step < pair_tuple_count; ++step) {
            EffectiveSubproblem sub{choice, {}, {}, {}, 0, 0};
            std::vector<std::pair<HermitianOperator, HermitianOperator>> eff;
            for (int i = 0; i < n; ++i) {
                const PairBlock& blk = rep.forms[i].pair_blocks[choice[i]];
                sub.a_scales.push_back(blk.a);
                sub.b_scales.push_back(blk.b);
                eff.push_back({HermitianOperator(blk.a * sx), HermitianOperator(blk.b * sy)});
            }
            const GhzSet eff_gs = build_ghz_set(eff, tol);
            std::vector<ComplexMatrix> eff_ops = eff_gs.operators;
            eff_ops.push_back(eff_gs.product_operator);
            double eff_scale = 1.0;
            for (const ComplexMatrix& op : eff_ops)
                eff_scale = std::max(eff_scale, op.frobenius_norm());
            sub.targets = joint_eigenvalues(eff_ops, psi, 1e-12 * eff_scale);
            const LhvResult lhv = lhv_search(eff_gs, sub.targets);
            sub.lhv_total = lhv.total_assignments;
            sub.lhv_satisfying = static_cast<long long>(lhv.satisfying.size());
            rep.pair_tuples.push_back(std::move(sub));
            for (int i = n - 1; i >= 0; --i) {
                if (++choice[i] < static_cast<int>(rep.forms[i].pair_blocks.size())) break;
                choice[i] = 0;
            }
        }
        rep.contradiction_possible = true;
        rep.contradiction_reproduced = true;
        for (const EffectiveSubproblem& sub : rep.pair_tuples)
            if (sub.lhv_satisfying != 0) rep.contradiction_reproduced = false;
    }
    return rep;
}

}  // namespace pauliform
