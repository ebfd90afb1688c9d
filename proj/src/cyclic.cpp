#include "rdtoda/cyclic.hpp"

#include <cmath>
#include <stdexcept>

namespace rdtoda {

namespace {

Cplx tau_pow(int r, long long e) {
    const double t = 2.0 * M_PI * static_cast<double>(e) / r;
    return Cplx(std::cos(t), std::sin(t));
}

Cplx cplx_pow_int(Cplx z, int n) {
    bool inv = n < 0;
    if (inv) n = -n;
    Cplx acc(1.0, 0.0), base = z;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return inv ? Cplx(1.0, 0.0) / acc : acc;
}

CMatrix zeros(int r) { return CMatrix(r, std::vector<Cplx>(r, Cplx(0.0, 0.0))); }

CMatrix mul(const CMatrix& A, const CMatrix& B) {
    const int r = static_cast<int>(A.size());
    CMatrix C = zeros(r);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k)
            for (int j = 0; j < r; ++j) C[i][j] += A[i][k] * B[k][j];
    return C;
}

} // namespace

void GInvariantMetric::validate() const {
    double logprod = 0.0;
    for (double h : diag) {
        if (!(h > 0.0)) throw std::invalid_argument("GInvariantMetric: entries must be positive");
        logprod += std::log(h);
    }
    if (std::abs(logprod) > 1e-10)
        throw std::invalid_argument("GInvariantMetric: determinant must be 1");
}

CMatrix f_matrix(const CyclicFiber& fiber) {
    CMatrix F = zeros(fiber.r);
    for (int i = 0; i + 1 < fiber.r; ++i) F[i + 1][i] = Cplx(1.0, 0.0);
    F[0][fiber.r - 1] = cplx_pow_int(fiber.alpha, fiber.r);
    return F;
}

CMatrix v_basis(const CyclicFiber& fiber) {
    const int r = fiber.r;
    CMatrix V = zeros(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            V[j][i] = tau_pow(r, -static_cast<long long>(i) * j) * cplx_pow_int(fiber.alpha, -j);
    return V;
}

GInvariantMetric canonical_metric(const CyclicFiber& fiber) {
    GInvariantMetric h;
    const double aa = std::abs(fiber.alpha);
    for (int j = 0; j < fiber.r; ++j)
        h.diag.push_back(std::pow(aa, -(fiber.r - 1) + 2 * j));
    return h;
}

CMatrix v_gram(const GInvariantMetric& h, const CyclicFiber& fiber) {
    const int r = fiber.r;
    const double aa = std::abs(fiber.alpha);
    CMatrix G = zeros(r);
    for (int i = 0; i < r; ++i)
        for (int l = 0; l < r; ++l)
            for (int j = 0; j < r; ++j)
                G[i][l] += tau_pow(r, static_cast<long long>(j) * (l - i)) *
                           std::pow(aa, -2 * j) * h.diag[j];
    return G;
}

double b_of_h(const GInvariantMetric& h, const CyclicFiber& fiber) {
    const double aa = std::abs(fiber.alpha);
    double b = 0.0;
    for (int j = 0; j < fiber.r; ++j) b += std::pow(aa, -2 * j) * h.diag[j];
    return b;
}

double f_norm(const GInvariantMetric& h, const CyclicFiber& fiber) {
    // Each column of f maps a basis vector to a multiple of another basis
    // vector, so the h-weighted matrix has orthogonal columns and its spectral
    // norm is the largest column weight.
    double best = 0.0;
    for (int i = 0; i + 1 < fiber.r; ++i)
        best = std::max(best, std::sqrt(h.diag[i + 1] / h.diag[i]));
    const double aa = std::abs(fiber.alpha);
    best = std::max(best, std::pow(aa, fiber.r) *
                              std::sqrt(h.diag[0] / h.diag[fiber.r - 1]));
    return best;
}

EpsOrthReport check_eps_orthogonality(const GInvariantMetric& h, const CyclicFiber& fiber,
                                      double eps, double delta) {
    EpsOrthReport rep;
    if (!((fiber.r - 1) * eps < delta && delta < 1.0)) return rep;
    const CMatrix G = v_gram(h, fiber);
    const double b = b_of_h(h, fiber);
    double off = 0.0;
    for (int i = 0; i < fiber.r; ++i)
        for (int j = 0; j < fiber.r; ++j)
            if (i != j) off = std::max(off, std::abs(G[i][j]));
    rep.eps_measured = off / b;
    if (off > eps * b * (1.0 + 1e-12)) return rep; // hypothesis fails
    rep.applicable = true;
    const GInvariantMetric hc = canonical_metric(fiber);
    for (int j = 0; j < fiber.r; ++j)
        rep.lhs_max = std::max(rep.lhs_max, std::abs(std::log(h.diag[j] / hc.diag[j])));
    const double C_delta = (fiber.r - 1) / (1.0 - delta);
    rep.rhs = 2.0 * C_delta * eps;
    rep.bound_holds = rep.lhs_max <= rep.rhs * (1.0 + 1e-9) + 1e-12;
    return rep;
}

NormBoundReport norm_bounds(const GInvariantMetric& h, const CyclicFiber& fiber, double C) {
    NormBoundReport rep;
    const int r = fiber.r;
    const double aa = std::abs(fiber.alpha);
    rep.f_norm_value = f_norm(h, fiber);
    if (C < std::sqrt(static_cast<double>(r)) * aa * (1.0 - 1e-12)) return rep;
    if (rep.f_norm_value > C * (1.0 + 1e-12)) return rep;
    rep.applicable = true;
    rep.bounds_hold = true;
    const double slack = 1.0 + 1e-9;
    for (int i = 0; i < r; ++i) {
        const double ei = std::sqrt(h.diag[i]);
        if (i <= r - 2 &&
            ei > std::pow(aa, -r) * std::pow(C, 0.5 * (r + 1) + i) * slack)
            rep.bounds_hold = false;
        if (i == r - 1 && ei > std::pow(C, 0.5 * (r - 1)) * slack)
            rep.bounds_hold = false;
        const double lo = std::pow(aa, r) * std::pow(C + 1.0, -2 * r);
        const double hi = std::pow(aa, -r) * std::pow(C + 1.0, 2 * r);
        if (ei < lo / slack || ei > hi * slack) rep.bounds_hold = false;
    }
    return rep;
}

bool ratio_bounds(const GInvariantMetric& h1, const GInvariantMetric& h2,
                  const CyclicFiber& fiber, double C) {
    const int r = fiber.r;
    const double aa = std::abs(fiber.alpha);
    const double lo = std::pow(aa, 2 * r) * std::pow(C + 1.0, -4 * r);
    const double hi = std::pow(aa, -2 * r) * std::pow(C + 1.0, 4 * r);
    const double slack = 1.0 + 1e-9;
    for (int i = 0; i < r; ++i) {
        const double ratio = std::sqrt(h1.diag[i] / h2.diag[i]);
        if (ratio < lo / slack || ratio > hi * slack) return false;
    }
    return true;
}

double reconstruction_residual(const GInvariantMetric& h, const CyclicFiber& fiber) {
    const int r = fiber.r;
    const double aa = std::abs(fiber.alpha);
    const CMatrix G = v_gram(h, fiber);
    const double b = b_of_h(h, fiber);
    double worst = 0.0;
    for (int j = 0; j < r; ++j) {
        Cplx acc(0.0, 0.0);
        for (int i = 0; i < r; ++i)
            for (int l = 0; l < r; ++l)
                if (i != l)
                    acc += tau_pow(r, static_cast<long long>(j) * (i - l)) * G[i][l];
        const double rhs = b * std::pow(aa, 2 * j) / r +
                           std::pow(aa, 2 * j) * acc.real() / (r * r);
        worst = std::max(worst, std::abs(h.diag[j] - rhs));
    }
    return worst;
}

double normality_defect(const GInvariantMetric& h, const CyclicFiber& fiber) {
    const int r = fiber.r;
    const CMatrix F = f_matrix(fiber);
    CMatrix Fd = zeros(r); // h-adjoint: Fd = H^{-1} F^H H
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            Fd[i][j] = std::conj(F[j][i]) * h.diag[j] / h.diag[i];
    const CMatrix A = mul(F, Fd);
    const CMatrix B = mul(Fd, F);
    double frob = 0.0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) frob += std::norm(A[i][j] - B[i][j]);
    return std::sqrt(frob);
}

} // namespace rdtoda
