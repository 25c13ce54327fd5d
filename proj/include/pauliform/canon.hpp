#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pauliform/matkit.hpp"

namespace pauliform {

// One 2x2 block of the canonical form: on its two basis positions the
// transformed pair reads exactly (a * sigma_x, b * sigma_y), a > 0, b > 0.
struct PairBlock {
    double a;
    double b;
    std::array<int, 2> index_pair;  // 0-based positions in the canonical basis
};

// One 1x1 block: transformed A carries alpha, transformed B carries beta,
// and alpha * beta = 0 within tolerance.
struct Singleton {
    double alpha;
    double beta;
    int index;
};

struct CanonTolerances {
    double tol;                // the tolerance canonicalize was called with
    double cluster_threshold;  // eigenvalue gap bound, tol * max(1, ||A||_F)
    double rank_threshold;     // singular value cutoff, tol * max(1, ||B||_F)
};

// Full reduction of an anticommuting Hermitian pair: transform * A * transform^dag
// is the direct sum described by the blocks. Pair blocks come first, sorted by
// a descending then b descending; singletons follow, sorted by (alpha, beta)
// descending. Block index sets partition 0..dim-1.
struct CanonicalForm {
    int dim;
    std::vector<PairBlock> pair_blocks;
    std::vector<Singleton> singletons;
    UnitaryMatrix transform;
    CanonTolerances tolerances;
};

// Reduces a pair classified Anticommute or Degenerate to canonical blocks.
//
// The construction walks the spectrum of A: eigenvalues are clustered by gap,
// clusters are matched mu <-> -mu, and the piece of B coupling each matched
// eigenspace pair is diagonalized by an SVD. Every surviving singular value
// becomes a pair block; null directions, unpaired eigenspaces (B must
// annihilate them), and the kernel of A (B must preserve it, and is
// diagonalized there) all become singletons. Anticommutation violations
// beyond tolerance surface as std::runtime_error.
CanonicalForm canonicalize(const HermitianOperator& a, const HermitianOperator& b,
                           double tol = kDefaultValidationTol);

// Builds the block-diagonal pair the form describes. Rejects forms whose
// indices fail to partition 0..dim-1.
std::pair<HermitianOperator, HermitianOperator> reconstruct(const CanonicalForm& form);

struct VerifyReport {
    bool pass;
    double residual_a;
    double residual_b;
    double unitarity;
    double bound;            // tol * max(1, ||A||_F + ||B||_F) * dim
    double unitarity_bound;  // tol * dim
};

VerifyReport verify(const HermitianOperator& a, const HermitianOperator& b,
                    const CanonicalForm& form, double tol = 1e-10);

struct PairSpec {
    double a;
    double b;
};

struct SingletonSpec {
    double alpha;
    double beta;
};

// Block content without basis positions; used to synthesize test pairs.
struct BlockSpec {
    std::vector<PairSpec> pairs;
    std::vector<SingletonSpec> singletons;
    int dim() const { return 2 * static_cast<int>(pairs.size()) + static_cast<int>(singletons.size()); }
};

// Assembles the canonical matrices for the given blocks and hides them behind
// a seeded random unitary. The returned pair anticommutes by construction,
// within 1e-12 times its norm scale.
std::pair<HermitianOperator, HermitianOperator> random_anticommuting_pair(const BlockSpec& spec,
                                                                          std::uint64_t seed);

}  // namespace pauliform
