#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pauliform/canon.hpp"
#include "pauliform/matkit.hpp"

namespace pauliform {

// Unit vector in the tensor-product space. Site 0 is the leftmost (most
// significant) factor of every tensor index.
class StateVector {
  public:
    explicit StateVector(std::vector<cplx> amplitudes, double tol = 1e-12);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }

  private:
    std::vector<cplx> amplitudes_;
};

// n-party operator family built from one anticommuting local pair (A_I, B_I)
// per site: operators[k] carries A at site k and B everywhere else, and
// product_operator carries A at every site. product_sign is set when the
// matrix product operators[0] * ... * operators[n-1] is a scalar multiple of
// product_operator (true whenever every local B squares to the identity);
// product_sign_residual records how far the best scalar fit is off, relative
// to the product's norm.
struct GhzSet {
    int parties;
    std::vector<int> local_dims;
    int total_dim;
    std::vector<ComplexMatrix> operators;
    ComplexMatrix product_operator;
    std::optional<double> product_sign;
    double product_sign_residual;
    std::vector<std::vector<double>> a_spectra;  // distinct eigenvalues, descending
    std::vector<std::vector<double>> b_spectra;
};

// Requires n >= 3 local pairs, each classified anticommuting (a vanishing
// product also counts), and a total dimension of at most 1024.
GhzSet build_ghz_set(const std::vector<std::pair<HermitianOperator, HermitianOperator>>& pairs,
                     double tol = kDefaultValidationTol);

// Pairwise commutator norms. Entry order is (0,1), (0,2), ..., upper
// triangle row by row; each norm is held to tol * max(1, ||Oi|| * ||Oj||).
struct CommutationReport {
    bool all_commute;
    double max_residual;
    std::array<int, 2> worst_pair;
    std::vector<std::array<int, 2>> index_pairs;
    std::vector<double> residuals;
    std::vector<double> bounds;
};

// Fewer than two operators passes vacuously.
CommutationReport check_mutual_commutation(const std::vector<ComplexMatrix>& ops,
                                           double tol = 1e-10);

// Checks the n set operators plus product_operator, which gets index n.
CommutationReport check_mutual_commutation(const GhzSet& gs, double tol = 1e-10);

// (e_0 - e_{2^n - 1}) / sqrt(2) on n two-dimensional sites; 2 <= n <= 20.
StateVector ghz_state(int parties);

// Best eigenvalue per operator, taken as <psi|O psi>. Throws std::runtime_error
// if some ||O psi - lambda psi|| exceeds tol: psi must be a common eigenstate.
std::vector<double> joint_eigenvalues(const std::vector<ComplexMatrix>& ops,
                                      const StateVector& psi, double tol = 1e-9);

// Distinct eigenvalues of op, descending; values closer than
// tol * max(1, ||op||_F) merge into their mean.
std::vector<double> clustered_spectrum(const HermitianOperator& op,
                                       double tol = kDefaultValidationTol);

// One chosen value per site and per local observable.
struct LhvAssignment {
    std::vector<double> a_values;
    std::vector<double> b_values;
};

struct LhvSlot {
    int site;
    int observable;  // 0 picks the site's A value, 1 its B value
};

// The product of the slot values must equal target.
struct LhvConstraint {
    std::vector<LhvSlot> slots;
    double target;
};

struct LhvProblem {
    std::vector<std::vector<double>> a_spectra;
    std::vector<std::vector<double>> b_spectra;
    std::vector<LhvConstraint> constraints;
};

struct LhvResult {
    long long total_assignments;
    std::vector<LhvAssignment> satisfying;  // in enumeration order
    std::vector<double> targets;
};

// Exhaustive walk over every combination of one spectrum value per site and
// observable; site 0 varies slowest, the B choice faster than the A choice.
// An assignment satisfies a constraint when its slot product is within
// tol * max(1, |target|). Refuses to enumerate more than 10^7 assignments.
LhvResult enumerate_assignments(const LhvProblem& problem, double tol = 1e-9);

// Constrains the n set operators and then product_operator; targets has
// length parties + 1, spectra come from the set.
LhvResult lhv_search(const GhzSet& gs, const std::vector<double>& targets, double tol = 1e-9);

// One all-pair-block tuple: the family restricted to it acts as the
// two-dimensional set scaled by (a_I, b_I) per site.
struct EffectiveSubproblem {
    std::vector<int> block_choice;  // per site, index into that site's pair blocks
    std::vector<double> a_scales;
    std::vector<double> b_scales;
    std::vector<double> targets;  // joint eigenvalues of the scaled set, product last
    long long lhv_total;
    long long lhv_satisfying;
};

// Outcome of reducing every site to canonical blocks: the family is block
// diagonal over tuples of local blocks, tuples with a singleton admit a
// direct value assignment, and each all-pair tuple is a rescaled copy of the
// two-dimensional problem.
struct TrivialityReport {
    int parties;
    int total_dim;
    std::vector<CanonicalForm> forms;
    std::vector<double> off_tuple_max;  // per operator, product_operator last
    double off_tuple_bound;
    bool block_diagonal;
    long long tuple_count;
    long long singleton_tuple_count;
    std::vector<EffectiveSubproblem> pair_tuples;
    bool contradiction_possible;    // some tuple is all pair blocks
    bool contradiction_reproduced;  // every such tuple defeats its own targets
};

// Canonicalizes each local pair, conjugates the family by the tensor product
// of the per-site transforms, and reports the block-tuple structure.
// Canonicalization failures propagate; pair tuples are capped at 4096.
TrivialityReport triviality_report(
    const std::vector<std::pair<HermitianOperator, HermitianOperator>>& pairs,
    double tol = kDefaultValidationTol);

}  // namespace pauliform
