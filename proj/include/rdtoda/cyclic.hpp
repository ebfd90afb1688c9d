#ifndef RDTODA_CYCLIC_HPP
#define RDTODA_CYCLIC_HPP

#include <complex>
#include <vector>

namespace rdtoda {

using Cplx = std::complex<double>;

/// One fiber of the cyclic bundle: basis e_0..e_{r-1} with the automorphism
/// f(e_i) = e_{i+1} for i < r-1 and f(e_{r-1}) = alpha^r e_0.
struct CyclicFiber {
    int r = 2;
    Cplx alpha{1.0, 0.0};
};

/// Invariant Hermitian metric, diagonal in the e-basis with unit determinant.
struct GInvariantMetric {
    std::vector<double> diag; // h_j = h(e_j, e_j) > 0, product 1

    void validate() const; // throws on broken invariants
};

using CMatrix = std::vector<std::vector<Cplx>>;

/// Matrix of f in the e-basis.
CMatrix f_matrix(const CyclicFiber& fiber);

/// Columns v_i = sum_j tau^{-ij} alpha^{-j} e_j, tau = e^{2 pi i / r};
/// conjugates f to diag(tau^i alpha).
CMatrix v_basis(const CyclicFiber& fiber);

/// h_j = |alpha|^{-(r-1)+2j}; the unique invariant metric making the v-basis
/// orthogonal with common norm^2 r|alpha|^{-(r-1)}.
GInvariantMetric canonical_metric(const CyclicFiber& fiber);

/// Gram matrix h(v_i, v_l) = sum_j tau^{j(l-i)} |alpha|^{-2j} h_j.
CMatrix v_gram(const GInvariantMetric& h, const CyclicFiber& fiber);

/// b(h) = h(v_i, v_i), independent of i.
double b_of_h(const GInvariantMetric& h, const CyclicFiber& fiber);

/// Spectral operator norm of f under h. For the weighted cyclic matrix this
/// is the largest column weight: max(max_j sqrt(h_{j+1}/h_j),
/// |alpha|^r sqrt(h_0/h_{r-1})).
double f_norm(const GInvariantMetric& h, const CyclicFiber& fiber);

struct EpsOrthReport {
    bool applicable = false; // hypothesis |h(v_i,v_j)| <= eps b(h) held
    bool bound_holds = false;
    double eps_measured = 0.0;
    double lhs_max = 0.0; // max_j |log(h_j / h_can_j)|
    double rhs = 0.0;     // 2 C_delta eps
};

/// If the off-diagonal Gram entries satisfy |h(v_i,v_j)| <= eps b(h) and
/// (r-1) eps < delta < 1, the diagonal deviates from canonical by at most
/// 2 C_delta eps with C_delta = (r-1)/(1-delta).
EpsOrthReport check_eps_orthogonality(const GInvariantMetric& h, const CyclicFiber& fiber,
                                      double eps, double delta);

struct NormBoundReport {
    bool applicable = false; // |f|_h <= C and C >= sqrt(r)|alpha| held
    bool bounds_hold = false;
    double f_norm_value = 0.0;
};

/// Under |f|_h <= C with C >= sqrt(r)|alpha|, audits
/// |e_i|_h <= |alpha|^{-r} C^{(r+1)/2+i} for i <= r-2,
/// |e_{r-1}|_h <= C^{(r-1)/2}, and the two-sided bounds
/// |alpha|^r (C+1)^{-2r} <= |e_i|_h <= |alpha|^{-r} (C+1)^{2r}.
NormBoundReport norm_bounds(const GInvariantMetric& h, const CyclicFiber& fiber, double C);

/// Ratio bound between two metrics both dominated by C:
/// |alpha|^{2r}(C+1)^{-4r} <= |e_i|_{h1}/|e_i|_{h2} <= |alpha|^{-2r}(C+1)^{4r}.
bool ratio_bounds(const GInvariantMetric& h1, const GInvariantMetric& h2,
                  const CyclicFiber& fiber, double C);

/// Reconstruction identity residual: h(e_j,e_j) against
/// b(h)|alpha|^{2j}/r + (1/r^2) sum_{i != l} |alpha|^{2j} tau^{j(i-l)} h(v_i,v_l).
double reconstruction_residual(const GInvariantMetric& h, const CyclicFiber& fiber);

/// Commutator norm of f with its h-adjoint (zero iff f is h-normal).
double normality_defect(const GInvariantMetric& h, const CyclicFiber& fiber);

} // namespace rdtoda

#endif
