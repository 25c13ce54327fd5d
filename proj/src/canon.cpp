#include "pauliform/canon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pauliform/omega.hpp"
#include "pauliform/rng.hpp"

namespace pauliform {

namespace {

// Eigenvalue cluster of A: columns [lo, hi) of the eigenbasis, mean value.
struct Cluster {
    double mean;
    int lo;
    int hi;
    int size() const { return hi - lo; }
};

ComplexMatrix column_slice(const ComplexMatrix& m, int lo, int hi) {
    ComplexMatrix out(m.rows(), hi - lo);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = lo; j < hi; ++j) out(i, j - lo) = m(i, j);
    return out;
}

ComplexMatrix single_column(const ComplexMatrix& m, int j) { return column_slice(m, j, j + 1); }

// Block under construction: its content plus its basis columns in the
// original coordinates.
struct BuiltBlock {
    bool is_pair;
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    ComplexMatrix cols;

    static BuiltBlock pair(double a, double b, ComplexMatrix two_cols) {
        BuiltBlock blk{true, a, b, 0.0, 0.0, std::move(two_cols)};
        return blk;
    }
    static BuiltBlock singleton(double alpha, double beta, ComplexMatrix one_col) {
        BuiltBlock blk{false, 0.0, 0.0, alpha, beta, std::move(one_col)};
        return blk;
    }
};

std::vector<Cluster> cluster_eigenvalues(const std::vector<double>& values, double threshold) {
    std::vector<Cluster> out;
    const int n = static_cast<int>(values.size());
    int lo = 0;
    for (int k = 1; k <= n; ++k) {
        if (k == n || values[k] - values[k - 1] > threshold) {
            double mean = 0.0;
            for (int j = lo; j < k; ++j) mean += values[j];
            mean /= (k - lo);
            out.push_back({mean, lo, k});
            lo = k;
        }
    }
    return out;
}

void validate_block_spec(const BlockSpec& spec) {
    if (spec.pairs.empty() && spec.singletons.empty())
        throw std::invalid_argument("random_anticommuting_pair: empty block spec");
    for (const PairSpec& p : spec.pairs) {
        if (!(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b))
            throw std::invalid_argument("random_anticommuting_pair: pair scales must be finite and positive");
    }
    for (const SingletonSpec& s : spec.singletons) {
        if (!std::isfinite(s.alpha) || !std::isfinite(s.beta))
            throw std::invalid_argument("random_anticommuting_pair: singleton values must be finite");
        const double scale = std::max({1.0, s.alpha * s.alpha, s.beta * s.beta});
        if (std::abs(s.alpha * s.beta) > 1e-9 * scale)
            throw std::invalid_argument("random_anticommuting_pair: singleton needs alpha * beta = 0");
    }
}

// Canonical matrices for a block layout: pairs first, then singletons, in the
// order given. Returns (A, B).
std::pair<ComplexMatrix, ComplexMatrix> assemble(const std::vector<PairBlock>& pairs,
                                                 const std::vector<Singleton>& singles, int dim) {
    ComplexMatrix a(dim, dim);
    ComplexMatrix b(dim, dim);
    for (const PairBlock& p : pairs) {
        const int i = p.index_pair[0];
        const int j = p.index_pair[1];
        a(i, j) = p.a;
        a(j, i) = p.a;
        b(i, j) = cplx{0.0, -p.b};
        b(j, i) = cplx{0.0, p.b};
    }
    for (const Singleton& s : singles) {
        a(s.index, s.index) = s.alpha;
        b(s.index, s.index) = s.beta;
    }
    return {std::move(a), std::move(b)};
}

}  // namespace

CanonicalForm canonicalize(const HermitianOperator& a_op, const HermitianOperator& b_op,
                           double tol) {
    const int n = a_op.dim();
    if (b_op.dim() != n) throw std::invalid_argument("canonicalize: dimension mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("canonicalize: tolerance must be positive");

    const OmegaClass cls = classify(a_op, b_op, tol);
    if (cls.kind != OmegaKind::Anticommute && cls.kind != OmegaKind::Degenerate)
        throw std::invalid_argument("canonicalize: pair is not anticommuting (classified " +
                                    to_string(cls.kind) + ")");

    const ComplexMatrix& b = b_op.matrix();
    const double norm_a = a_op.matrix().frobenius_norm();
    const double norm_b = b.frobenius_norm();
    const double cluster_thr = tol * std::max(1.0, norm_a);
    const double rank_thr = tol * std::max(1.0, norm_b);
    const double assert_thr = tol * std::max(1.0, norm_b) * n;

    const EigenDecomposition ed = eig_hermitian(a_op);
    const ComplexMatrix& basis = ed.basis.matrix();
    const std::vector<Cluster> clusters = cluster_eigenvalues(ed.eigenvalues, cluster_thr);

    // Split by sign of the cluster mean; |mean| <= threshold is the kernel.
    std::vector<int> positives, negatives;
    int kernel = -1;
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
        if (std::abs(clusters[c].mean) <= cluster_thr)
            kernel = c;
        else if (clusters[c].mean > 0.0)
            positives.push_back(c);
        else
            negatives.push_back(c);
    }
    // descending mu keeps the construction order deterministic
    std::sort(positives.begin(), positives.end(),
              [&](int x, int y) { return clusters[x].mean > clusters[y].mean; });

    std::vector<int> partner(clusters.size(), -1);
    std::vector<bool> taken(clusters.size(), false);
    for (int c : positives) {
        const double mu = clusters[c].mean;
        int best = -1;
        double best_gap = cluster_thr;
        for (int d : negatives) {
            if (taken[d]) continue;
            const double gap = std::abs(clusters[d].mean + mu);
            if (gap <= best_gap) {
                best_gap = gap;
                best = d;
            }
        }
        if (best >= 0) {
            partner[c] = best;
            taken[best] = true;
        }
    }

    std::vector<BuiltBlock> built;

    auto emit_annihilated = [&](const Cluster& c) {
        // anticommutation maps this eigenspace into the one at -mu, which is
        // empty, so B must kill it
        const ComplexMatrix vc = column_slice(basis, c.lo, c.hi);
        if ((b * vc).frobenius_norm() > assert_thr)
            throw std::runtime_error(
                "canonicalize: B does not annihilate the unpaired eigenspace at " +
                std::to_string(c.mean) + "; anticommutation violated beyond tolerance");
        for (int j = 0; j < c.size(); ++j)
            built.push_back(BuiltBlock::singleton(c.mean, 0.0, single_column(vc, j)));
    };

    for (int c : positives) {
        const Cluster& pos = clusters[c];
        if (partner[c] < 0) {
            emit_annihilated(pos);
            continue;
        }
        const Cluster& neg = clusters[partner[c]];
        const double mu = pos.mean;
        const ComplexMatrix vp = column_slice(basis, pos.lo, pos.hi);
        const ComplexMatrix vn = column_slice(basis, neg.lo, neg.hi);

        // B carries E(+mu) into E(-mu); any block of B inside one eigenspace
        // breaks anticommutation
        const ComplexMatrix bvp = b * vp;
        const ComplexMatrix bvn = b * vn;
        if ((vp.adjoint() * bvp).frobenius_norm() > assert_thr ||
            (vn.adjoint() * bvn).frobenius_norm() > assert_thr)
            throw std::runtime_error(
                "canonicalize: B has a block inside the eigenspace at " + std::to_string(mu) +
                "; anticommutation violated beyond tolerance");

        const ComplexMatrix cross = vp.adjoint() * bvn;
        const SvdResult sv = svd(cross);
        const ComplexMatrix wp = vp * sv.left.matrix();
        const ComplexMatrix wn = vn * sv.right.matrix();

        int rank = 0;
        while (rank < static_cast<int>(sv.singular_values.size()) &&
               sv.singular_values[rank] > rank_thr)
            ++rank;

        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int k = 0; k < rank; ++k) {
            // basis (w+ + i w-, w+ - i w-)/sqrt(2) turns (mu sigma_z, s sigma_x)
            // on (w+, w-) into (mu sigma_x, s sigma_y)
            ComplexMatrix two(n, 2);
            for (int r = 0; r < n; ++r) {
                const cplx p = wp(r, k);
                const cplx m = wn(r, k);
                two(r, 0) = (p + cplx{0.0, 1.0} * m) * inv_sqrt2;
                two(r, 1) = (p - cplx{0.0, 1.0} * m) * inv_sqrt2;
            }
            built.push_back(BuiltBlock::pair(mu, sv.singular_values[k], std::move(two)));
        }
        for (int k = rank; k < pos.size(); ++k)
            built.push_back(BuiltBlock::singleton(mu, 0.0, single_column(wp, k)));
        for (int k = rank; k < neg.size(); ++k)
            built.push_back(BuiltBlock::singleton(-mu, 0.0, single_column(wn, k)));
    }

    for (int c : negatives)
        if (!taken[c]) emit_annihilated(clusters[c]);

    if (kernel >= 0) {
        const Cluster& ker = clusters[kernel];
        const ComplexMatrix v0 = column_slice(basis, ker.lo, ker.hi);
        const ComplexMatrix bv0 = b * v0;
        ComplexMatrix restricted = v0.adjoint() * bv0;
        if ((bv0 - v0 * restricted).frobenius_norm() > assert_thr)
            throw std::runtime_error(
                "canonicalize: B does not preserve the kernel of A; anticommutation violated "
                "beyond tolerance");
        // exact symmetrization before the nested eigensolve
        for (int i = 0; i < restricted.rows(); ++i) {
            restricted(i, i) = std::real(restricted(i, i));
            for (int j = i + 1; j < restricted.cols(); ++j) {
                const cplx x = 0.5 * (restricted(i, j) + std::conj(restricted(j, i)));
                restricted(i, j) = x;
                restricted(j, i) = std::conj(x);
            }
        }
        const EigenDecomposition ke = eig_hermitian(HermitianOperator(std::move(restricted)));
        const ComplexMatrix w0 = v0 * ke.basis.matrix();
        for (int j = 0; j < ker.size(); ++j)
            built.push_back(BuiltBlock::singleton(0.0, ke.eigenvalues[j], single_column(w0, j)));
    }

    std::stable_sort(built.begin(), built.end(), [](const BuiltBlock& x, const BuiltBlock& y) {
        if (x.is_pair != y.is_pair) return x.is_pair;  // pairs first
        if (x.is_pair) {
            if (x.a != y.a) return x.a > y.a;
            return x.b > y.b;
        }
        if (x.alpha != y.alpha) return x.alpha > y.alpha;
        return x.beta > y.beta;
    });

    CanonicalForm form{n, {}, {}, UnitaryMatrix(ComplexMatrix::identity(1)),
                       {tol, cluster_thr, rank_thr}};
    ComplexMatrix q(n, n);
    int pos = 0;
    for (const BuiltBlock& blk : built) {
        for (int j = 0; j < blk.cols.cols(); ++j)
            for (int r = 0; r < n; ++r) q(r, pos + j) = blk.cols(r, j);
        if (blk.is_pair)
            form.pair_blocks.push_back({blk.a, blk.b, {pos, pos + 1}});
        else
            form.singletons.push_back({blk.alpha, blk.beta, pos});
        pos += blk.cols.cols();
    }
    if (pos != n) throw std::runtime_error("canonicalize: block columns do not fill the space");

    form.transform = UnitaryMatrix(q.adjoint());
    return form;
}

std::pair<HermitianOperator, HermitianOperator> reconstruct(const CanonicalForm& form) {
    if (form.dim < 1) throw std::invalid_argument("reconstruct: dimension must be positive");
    std::vector<int> seen(form.dim, 0);
    auto touch = [&](int idx) {
        if (idx < 0 || idx >= form.dim)
            throw std::invalid_argument("reconstruct: block index out of range");
        if (seen[idx]++)
            throw std::invalid_argument("reconstruct: overlapping block indices");
    };
    for (const PairBlock& p : form.pair_blocks) {
        touch(p.index_pair[0]);
        touch(p.index_pair[1]);
    }
    for (const Singleton& s : form.singletons) touch(s.index);
    for (int i = 0; i < form.dim; ++i)
        if (!seen[i]) throw std::invalid_argument("reconstruct: block indices leave gaps");

    auto [a, b] = assemble(form.pair_blocks, form.singletons, form.dim);
    return {HermitianOperator(std::move(a)), HermitianOperator(std::move(b))};
}

VerifyReport verify(const HermitianOperator& a, const HermitianOperator& b,
                    const CanonicalForm& form, double tol) {
    if (a.dim() != form.dim || b.dim() != form.dim)
        throw std::invalid_argument("verify: dimension mismatch");
    const auto [ta, tb] = reconstruct(form);
    VerifyReport rep{};
    rep.residual_a = frobenius_distance(conjugate(form.transform, a.matrix()), ta.matrix());
    rep.residual_b = frobenius_distance(conjugate(form.transform, b.matrix()), tb.matrix());
    rep.unitarity = frobenius_distance(form.transform.matrix().adjoint() * form.transform.matrix(),
                                       ComplexMatrix::identity(form.dim));
    rep.bound = tol * std::max(1.0, a.matrix().frobenius_norm() + b.matrix().frobenius_norm()) *
                form.dim;
    rep.unitarity_bound = tol * form.dim;
    rep.pass = rep.residual_a <= rep.bound && rep.residual_b <= rep.bound &&
               rep.unitarity <= rep.unitarity_bound;
    return rep;
}

std::pair<HermitianOperator, HermitianOperator> random_anticommuting_pair(const BlockSpec& spec,
                                                                          std::uint64_t seed) {
    validate_block_spec(spec);
    const int dim = spec.dim();

    std::vector<PairBlock> pairs;
    std::vector<Singleton> singles;
    int pos = 0;
    for (const PairSpec& p : spec.pairs) {
        pairs.push_back({p.a, p.b, {pos, pos + 1}});
        pos += 2;
    }
    for (const SingletonSpec& s : spec.singletons) singles.push_back({s.alpha, s.beta, pos++});
    auto [a0, b0] = assemble(pairs, singles, dim);

    SeededRng rng(seed);
    const UnitaryMatrix q = random_unitary(dim, rng);
    ComplexMatrix a = conjugate(q, a0);
    ComplexMatrix b = conjugate(q, b0);
    // conjugation leaves eps-level asymmetry; pin hermiticity exactly
    for (ComplexMatrix* m : {&a, &b}) {
        for (int i = 0; i < dim; ++i) {
            (*m)(i, i) = std::real((*m)(i, i));
            for (int j = i + 1; j < dim; ++j) {
                const cplx x = 0.5 * ((*m)(i, j) + std::conj((*m)(j, i)));
                (*m)(i, j) = x;
                (*m)(j, i) = std::conj(x);
            }
        }
    }
    return {HermitianOperator(std::move(a)), HermitianOperator(std::move(b))};
}

}  // namespace pauliform
