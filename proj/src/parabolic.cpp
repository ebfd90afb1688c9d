#include "rdtoda/parabolic.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rdtoda {

namespace {

constexpr double kMemberTol = 1e-12;

double target_sum(int r, PolytopeKind kind) {
    if (kind == PolytopeKind::P || kind == PolytopeKind::P_R) return 0.0;
    return -0.5 * static_cast<double>(r) * (r + 1);
}

double wrap_drop_of(PolytopeKind kind, int m) {
    return (kind == PolytopeKind::P || kind == PolytopeKind::P_R) ? 1.0
                                                                  : static_cast<double>(m);
}

/// Solve the square system M x = rhs by Gaussian elimination with partial
/// pivoting; returns false if M is singular to working precision.
bool solve_dense(std::vector<std::vector<double>> M, std::vector<double> rhs,
                 std::vector<double>& x) {
    const std::size_t n = M.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
        if (std::abs(M[piv][col]) < 1e-11) return false;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = M[i][col] / M[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) M[i][j] -= f * M[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= M[i][j] * x[j];
        x[i] = s / M[i][i];
    }
    return true;
}

std::vector<std::vector<std::size_t>> tie_blocks(const std::vector<double>& vec,
                                                 double tie_tol) {
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i == 0 || std::abs(vec[i - 1] - vec[i]) > tie_tol) blocks.push_back({});
        blocks.back().push_back(i);
    }
    return blocks;
}

} // namespace

bool is_member(const std::vector<double>& vec, int r, PolytopeKind kind, int m) {
    if (static_cast<int>(vec.size()) != r || r < 2) return false;
    if ((kind == PolytopeKind::P_QP || kind == PolytopeKind::P_QP_R) && m < 1) return false;
    for (int i = 0; i + 1 < r; ++i)
        if (vec[i] < vec[i + 1] - kMemberTol) return false;
    if (vec[r - 1] < vec[0] - wrap_drop_of(kind, m) - kMemberTol) return false;
    double sum = 0.0;
    for (double v : vec) sum += v;
    if (std::abs(sum - target_sum(r, kind)) > kMemberTol * r) return false;
    if (kind == PolytopeKind::P_R) {
        for (int i = 0; i < r; ++i)
            if (std::abs(vec[i] + vec[r - 1 - i]) > kMemberTol) return false;
    }
    if (kind == PolytopeKind::P_QP_R) {
        for (int i = 0; i < r; ++i)
            if (std::abs(vec[i] + vec[r - 1 - i] + r + 1) > kMemberTol) return false;
    }
    return true;
}

std::vector<int> nu_indices(const std::vector<double>& vec) {
    std::vector<int> nu;
    for (std::size_t i = 0; i + 1 < vec.size(); ++i)
        if (vec[i] > vec[i + 1] + 1e-9) nu.push_back(static_cast<int>(i) + 1);
    return nu;
}

KVector k_vector(const std::vector<double>& vec, double wrap_drop, double tie_tol) {
    const std::size_t r = vec.size();
    auto blocks = tie_blocks(vec, tie_tol);
    const bool wrap =
        blocks.size() >= 2 && std::abs(vec[r - 1] - (vec[0] - wrap_drop)) <= tie_tol;
    if (wrap) {
        // Merge last and first blocks cyclically, last-block indices first.
        std::vector<std::size_t> merged = blocks.back();
        merged.insert(merged.end(), blocks.front().begin(), blocks.front().end());
        blocks.pop_back();
        blocks.front() = merged;
    }
    KVector out;
    out.k.assign(r, 0);
    for (const auto& blk : blocks) {
        const long long s = static_cast<long long>(blk.size());
        for (std::size_t p = 0; p < blk.size(); ++p)
            out.k[blk[p]] = s - 1 - 2 * static_cast<long long>(p);
    }
    return out;
}

KVector k_vector(const AVector& a) {
    if (!is_member(a.a, a.r, PolytopeKind::P))
        throw std::invalid_argument("k_vector: not a member of P");
    return k_vector(a.a, 1.0);
}

KVector k_vector(const BVector& b) {
    if (!is_member(b.b, b.r, PolytopeKind::P_QP, b.m))
        throw std::invalid_argument("k_vector: not a member of P_{r,m}");
    return k_vector(b.b, static_cast<double>(b.m));
}

AVector convert_b_to_a(const BVector& b) {
    if (b.m != b.r) throw std::invalid_argument("convert_b_to_a: requires m = r");
    AVector a;
    a.r = b.r;
    for (double v : b.b) a.a.push_back((v + 0.5 * (b.r + 1)) / b.r);
    return a;
}

BVector convert_a_to_b(const AVector& a) {
    BVector b;
    b.r = a.r;
    b.m = a.r;
    for (double v : a.a) b.b.push_back(a.r * v - 0.5 * (a.r + 1));
    return b;
}

DistinguishedWeights distinguished_weights(int r, int m, Distinguished which) {
    if (m < 1) throw std::invalid_argument("distinguished_weights: m >= 1 required");
    DistinguishedWeights out;
    out.b.r = r;
    out.b.m = m;
    out.a.r = r;
    for (int i = 1; i <= r; ++i) {
        if (which == Distinguished::COMPLETE) {
            out.b.b.push_back(-0.5 * (r + 1));
            out.a.a.push_back(0.0);
        } else {
            out.b.b.push_back(-static_cast<double>(r + 1 - 2 * i) / r * m - i);
            out.a.a.push_back(static_cast<double>(r + 1 - 2 * i) / (2.0 * r));
        }
    }
    return out;
}

std::vector<double> project_to_polytope(const std::vector<double>& raw, int r,
                                        PolytopeKind kind, int m) {
    if (static_cast<int>(raw.size()) != r)
        throw std::invalid_argument("project_to_polytope: size mismatch");
    const double drop = wrap_drop_of(kind, m);
    const double S = target_sum(r, kind);

    // Constraint rows: equalities first (always the sum; plus the symmetric
    // pairings for the _R kinds), then the active subset of inequalities
    // c_j . x <= rhs_j with c_j = e_{j+2} - e_{j+1} (rhs 0) for j < r-1 and
    // c_{r-1} = e_1 - e_r (rhs drop).
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    eq_rows.emplace_back(r, 1.0);
    eq_rhs.push_back(S);
    if (kind == PolytopeKind::P_R || kind == PolytopeKind::P_QP_R) {
        const double pair_sum = (kind == PolytopeKind::P_R) ? 0.0 : -(r + 1.0);
        for (int i = 0; i < r / 2; ++i) {
            std::vector<double> row(r, 0.0);
            row[i] = 1.0;
            row[r - 1 - i] = 1.0;
            eq_rows.push_back(row);
            eq_rhs.push_back(pair_sum);
        }
        if (r % 2 == 1 && kind == PolytopeKind::P_QP_R) {
            std::vector<double> row(r, 0.0);
            row[r / 2] = 2.0;
            eq_rows.push_back(row);
            eq_rhs.push_back(pair_sum);
        }
    }
    std::vector<std::vector<double>> ineq_rows;
    std::vector<double> ineq_rhs;
    for (int j = 0; j + 1 < r; ++j) {
        std::vector<double> row(r, 0.0);
        row[j + 1] = 1.0;
        row[j] = -1.0;
        ineq_rows.push_back(row);
        ineq_rhs.push_back(0.0);
    }
    {
        std::vector<double> row(r, 0.0);
        row[0] = 1.0;
        row[r - 1] = -1.0;
        ineq_rows.push_back(row);
        ineq_rhs.push_back(drop);
    }
    const std::size_t ni = ineq_rows.size();

    std::vector<double> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (std::size_t{1} << ni); ++mask) {
        std::vector<std::vector<double>> A = eq_rows;
        std::vector<double> b = eq_rhs;
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < ni; ++j) {
            if (mask & (std::size_t{1} << j)) {
                A.push_back(ineq_rows[j]);
                b.push_back(ineq_rhs[j]);
                active.push_back(j);
            }
        }
        const std::size_t nc = A.size();
        if (nc > static_cast<std::size_t>(r)) continue;
        // x = y + A^T lambda with (A A^T) lambda = b - A y.
        std::vector<std::vector<double>> G(nc, std::vector<double>(nc, 0.0));
        std::vector<double> rhs(nc, 0.0);
        for (std::size_t i = 0; i < nc; ++i) {
            for (std::size_t j = 0; j < nc; ++j)
                for (int t = 0; t < r; ++t) G[i][j] += A[i][t] * A[j][t];
            rhs[i] = b[i];
            for (int t = 0; t < r; ++t) rhs[i] -= A[i][t] * raw[t];
        }
        std::vector<double> lambda;
        if (!solve_dense(G, rhs, lambda)) continue;
        std::vector<double> x(raw);
        for (std::size_t i = 0; i < nc; ++i)
            for (int t = 0; t < r; ++t) x[t] += lambda[i] * A[i][t];
        // Dual feasibility: multipliers of active inequalities nonnegative
        // (the stationarity sign makes that -lambda >= 0).
        bool ok = true;
        for (std::size_t i = 0; i < active.size(); ++i)
            if (lambda[eq_rows.size() + i] > 1e-9) { ok = false; break; }
        if (!ok) continue;
        // Primal feasibility of inactive inequalities.
        for (std::size_t j = 0; j < ni && ok; ++j) {
            double v = 0.0;
            for (int t = 0; t < r; ++t) v += ineq_rows[j][t] * x[t];
            if (v > ineq_rhs[j] + 1e-9) ok = false;
        }
        if (!ok) continue;
        double dist = 0.0;
        for (int t = 0; t < r; ++t) dist += (x[t] - raw[t]) * (x[t] - raw[t]);
        if (dist < best_dist) {
            best_dist = dist;
            best = x;
        }
    }
    if (best.empty())
        throw std::runtime_error("project_to_polytope: active-set search failed");
    return best;
}

KVector weight_filtration_oracle(const std::vector<double>& vec, double wrap_drop,
                                 double tie_tol) {
    const int r = static_cast<int>(vec.size());
    // Nilpotent chain map: N e_i = e_{i+1} on ties, N e_{r-1} = e_0 on wrap.
    std::vector<std::vector<int>> N(r, std::vector<int>(r, 0));
    for (int i = 0; i + 1 < r; ++i)
        if (std::abs(vec[i] - vec[i + 1]) <= tie_tol) N[i + 1][i] = 1;
    bool all_tied = true;
    for (int i = 0; i + 1 < r; ++i)
        if (!N[i + 1][i]) all_tied = false;
    if (!all_tied && std::abs(vec[r - 1] - (vec[0] - wrap_drop)) <= tie_tol) N[0][r - 1] = 1;

    auto matmul = [r](const std::vector<std::vector<int>>& X,
                      const std::vector<std::vector<int>>& Y) {
        std::vector<std::vector<int>> Z(r, std::vector<int>(r, 0));
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < r; ++k)
                if (X[i][k])
                    for (int j = 0; j < r; ++j) Z[i][j] += X[i][k] * Y[k][j];
        return Z;
    };
    // Powers N^0 .. N^r.
    std::vector<std::vector<std::vector<int>>> pw;
    std::vector<std::vector<int>> I(r, std::vector<int>(r, 0));
    for (int i = 0; i < r; ++i) I[i][i] = 1;
    pw.push_back(I);
    for (int p = 1; p <= r; ++p) pw.push_back(matmul(pw.back(), N));

    KVector out;
    out.k.assign(r, 0);
    for (int i = 0; i < r; ++i) {
        // Depth: largest p with e_i in the image of N^p.
        int depth = 0;
        for (int p = 1; p <= r; ++p) {
            bool in_image = false;
            for (int j = 0; j < r; ++j)
                if (pw[p][i][j]) in_image = true;
            if (in_image) depth = p;
        }
        // Survival: largest t with N^t e_i nonzero.
        int surv = 0;
        for (int t = 1; t <= r; ++t) {
            bool nonzero = false;
            for (int j = 0; j < r; ++j)
                if (pw[t][j][i]) nonzero = true;
            if (nonzero) surv = t;
        }
        out.k[i] = surv - depth;
    }
    return out;
}

KVector printed_formula_nonwrap(const std::vector<double>& vec) {
    const int r = static_cast<int>(vec.size());
    std::vector<int> nu = nu_indices(vec);
    nu.insert(nu.begin(), 0);
    nu.push_back(r);
    KVector out;
    out.k.assign(r, 0);
    for (std::size_t j = 0; j + 1 < nu.size(); ++j) {
        for (int i = nu[j] + 1; i <= nu[j + 1]; ++i)
            out.k[i - 1] = nu[j + 1] - nu[j] + 1 - 2 * (i - nu[j]);
    }
    return out;
}

} // namespace rdtoda
