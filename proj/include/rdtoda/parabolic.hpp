#ifndef RDTODA_PARABOLIC_HPP
#define RDTODA_PARABOLIC_HPP

#include <vector>

namespace rdtoda {

/// Normalized weight tuple in the polytope P:
/// a_1 >= ... >= a_r >= a_1 - 1, sum a_i = 0.
struct AVector {
    int r = 0;
    std::vector<double> a;
};

/// Pole weight tuple in P_{r,m}:
/// b_1 >= ... >= b_r >= b_1 - m, sum b_i = -r(r+1)/2.
struct BVector {
    int r = 0;
    int m = 1;
    std::vector<double> b;
};

/// Integer log-correction vector; within each block of tied weights the
/// values run s-1, s-3, ..., -(s-1).
struct KVector {
    std::vector<long long> k;
};

enum class PolytopeKind { P, P_R, P_QP, P_QP_R };

/// Constraint check with 1e-12 absolute slack. For P_QP / P_QP_R, m is the
/// pole order; ignored otherwise.
bool is_member(const std::vector<double>& vec, int r, PolytopeKind kind, int m = 1);

/// Positions of strict descents: 1 <= nu_1 < ... < nu_ell < r with
/// vec[nu_j - 1] > vec[nu_j] (1-based positions).
std::vector<int> nu_indices(const std::vector<double>& vec);

/// Block rule: partition indices into blocks of equal entries; if the wrap
/// equality holds (last = first - drop, with drop = 1 for P and m for P_QP)
/// merge the last and first blocks cyclically, last-block indices first;
/// each block of size s receives s-1, s-3, ..., -(s-1) in order.
KVector k_vector(const std::vector<double>& vec, double wrap_drop, double tie_tol = 1e-9);

KVector k_vector(const AVector& a);
KVector k_vector(const BVector& b);

/// a_i = (b_i + (r+1)/2) / r, defined when m = r; and its inverse.
AVector convert_b_to_a(const BVector& b);
BVector convert_a_to_b(const AVector& a);

enum class Distinguished { COMPLETE, Q_DOMINATED };

struct DistinguishedWeights {
    BVector b;
    AVector a;
};
DistinguishedWeights distinguished_weights(int r, int m, Distinguished which);

/// Euclidean projection onto the constraint polytope (exact active-set
/// enumeration over the order and wrap constraints); idempotent on members.
std::vector<double> project_to_polytope(const std::vector<double>& raw, int r,
                                        PolytopeKind kind, int m = 1);

/// Independent oracle for k_vector: build the nilpotent chain map attached to
/// the tied/wrapped weight pattern as an explicit 0/1 matrix, and read each
/// index's weight from ranks of matrix powers (depth in the image filtration
/// vs. surviving powers). Shares no code path with the block rule.
KVector weight_filtration_oracle(const std::vector<double>& vec, double wrap_drop,
                                 double tie_tol = 1e-9);

/// The printed closed-form for non-wrap members, for cross-checking:
/// k_i = nu_{j+1} + nu_j + 1 - 2i on the block (nu_j, nu_{j+1}].
KVector printed_formula_nonwrap(const std::vector<double>& vec);

} // namespace rdtoda

#endif
