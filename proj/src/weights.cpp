#include "rdtoda/weights.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace rdtoda {

namespace {

struct FitResult {
    std::array<double, 3> coeff{}; // constant, linear, log
    double max_residual = 0.0;
};

/// Least-squares fit of y against {1, t, logterm(t)} via 3x3 normal equations
/// in extended precision; also reports the condition number of the normal
/// matrix (squared condition of the design matrix).
class ThreeTermFitter {
  public:
    ThreeTermFitter(const std::vector<double>& t, const std::vector<double>& logt)
        : t_(t), logt_(logt) {
        for (std::size_t p = 0; p < t.size(); ++p) {
            const long double row[3] = {1.0L, t[p], logt[p]};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) G_[i][j] += row[i] * row[j];
        }
    }

    /// sqrt of (largest / smallest eigenvalue of the normal matrix).
    double design_condition() const {
        // Jacobi sweeps on the symmetric 3x3.
        long double A[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A[i][j] = G_[i][j];
        for (int sweep = 0; sweep < 50; ++sweep) {
            for (int p = 0; p < 3; ++p)
                for (int q = p + 1; q < 3; ++q) {
                    if (fabsl(A[p][q]) < 1e-30L) continue;
                    const long double phi = 0.5L * atan2l(2.0L * A[p][q], A[q][q] - A[p][p]);
                    const long double c = cosl(phi), s = sinl(phi);
                    for (int k = 0; k < 3; ++k) {
                        const long double ap = c * A[p][k] - s * A[q][k];
                        const long double aq = s * A[p][k] + c * A[q][k];
                        A[p][k] = ap;
                        A[q][k] = aq;
                    }
                    for (int k = 0; k < 3; ++k) {
                        const long double ap = c * A[k][p] - s * A[k][q];
                        const long double aq = s * A[k][p] + c * A[k][q];
                        A[k][p] = ap;
                        A[k][q] = aq;
                    }
                }
        }
        long double lo = A[0][0], hi = A[0][0];
        for (int i = 1; i < 3; ++i) {
            lo = std::min(lo, A[i][i]);
            hi = std::max(hi, A[i][i]);
        }
        if (lo <= 0.0L) return 1e300;
        return std::sqrt(static_cast<double>(hi / lo));
    }

    FitResult fit(const std::vector<double>& y) const {
        long double rhs[3] = {0.0L, 0.0L, 0.0L};
        for (std::size_t p = 0; p < y.size(); ++p) {
            rhs[0] += y[p];
            rhs[1] += y[p] * static_cast<long double>(t_[p]);
            rhs[2] += y[p] * static_cast<long double>(logt_[p]);
        }
        long double M[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) M[i][j] = G_[i][j];
            M[i][3] = rhs[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int i = col + 1; i < 3; ++i)
                if (fabsl(M[i][col]) > fabsl(M[piv][col])) piv = i;
            for (int j = 0; j < 4; ++j) std::swap(M[piv][j], M[col][j]);
            for (int i = col + 1; i < 3; ++i) {
                const long double f = M[i][col] / M[col][col];
                for (int j = col; j < 4; ++j) M[i][j] -= f * M[col][j];
            }
        }
        FitResult out;
        long double x[3];
        for (int i = 3; i-- > 0;) {
            long double s = M[i][3];
            for (int j = i + 1; j < 3; ++j) s -= M[i][j] * x[j];
            x[i] = s / M[i][i];
        }
        for (int i = 0; i < 3; ++i) out.coeff[i] = static_cast<double>(x[i]);
        for (std::size_t p = 0; p < y.size(); ++p) {
            const double pred = out.coeff[0] + out.coeff[1] * t_[p] + out.coeff[2] * logt_[p];
            out.max_residual = std::max(out.max_residual, std::abs(y[p] - pred));
        }
        return out;
    }

  private:
    std::vector<double> t_, logt_;
    long double G_[3][3] = {};
};

constexpr double kStructureTol = 0.1;

/// Euclidean projection onto the affine subspace spanned by the detected
/// structure: entries tied within tol collapse to their block mean, the wrap
/// equality (last = first - drop) merges the outer blocks with that offset,
/// and a uniform shift restores the target sum. Returns the input when the
/// snapped vector falls outside the polytope.
std::vector<double> snap_structure(const std::vector<double>& vec, int r, PolytopeKind kind,
                                   int m, double target_sum) {
    const double drop = (kind == PolytopeKind::P) ? 1.0 : static_cast<double>(m);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i == 0 || std::abs(vec[i - 1] - vec[i]) > kStructureTol) blocks.push_back({});
        blocks.back().push_back(i);
    }
    const bool wrap = blocks.size() >= 2 &&
                      std::abs(vec[r - 1] - (vec[0] - drop)) <= kStructureTol;
    std::vector<double> out(vec);
    if (wrap) {
        // First-block entries snap to v, last-block entries to v - drop.
        const auto first_blk = blocks.front(), last_blk = blocks.back();
        double v = 0.0;
        for (std::size_t i : first_blk) v += vec[i];
        for (std::size_t i : last_blk) v += vec[i] + drop;
        v /= first_blk.size() + last_blk.size();
        for (std::size_t i : first_blk) out[i] = v;
        for (std::size_t i : last_blk) out[i] = v - drop;
        blocks.pop_back();
        blocks.erase(blocks.begin());
    }
    for (const auto& blk : blocks) {
        double mean = 0.0;
        for (std::size_t i : blk) mean += vec[i];
        mean /= blk.size();
        for (std::size_t i : blk) out[i] = mean;
    }
    double sum = 0.0;
    for (double v : out) sum += v;
    for (double& v : out) v += (target_sum - sum) / r;
    if (!is_member(out, r, kind, m)) return vec;
    return out;
}

} // namespace

WeightFit extract_pole_weights(const TodaState& state, const std::vector<double>& radii,
                               int m) {
    if (state.grid.chart != Chart::LOG_POLAR)
        throw std::invalid_argument("extract_pole_weights: LOG_POLAR state required");
    if (radii.size() < 4)
        throw std::invalid_argument("extract_pole_weights: need >= 4 sample radii");
    for (double s : radii)
        if (!(s < 0.0) || s < state.grid.x0 || s > state.grid.x1)
            throw std::invalid_argument("extract_pole_weights: radii must lie in the grid, s < 0");

    std::vector<double> logs;
    for (double s : radii) logs.push_back(std::log(-2.0 * s));
    ThreeTermFitter fitter(radii, logs);
    WeightFit out;
    out.pole = true;
    out.r = state.r;
    out.m = m;
    out.samples = radii;
    out.condition = fitter.design_condition();
    if (out.condition > 1e8)
        throw std::runtime_error("extract_pole_weights: ill-posed radii (condition " +
                                 std::to_string(out.condition) + ")");
    for (int t = 0; t < state.r; ++t) {
        std::vector<double> M;
        for (double s : radii) {
            double avg = 0.0;
            for (int j = 0; j < state.grid.ny; ++j)
                avg += interpolate(state.grid, state.w[t], s, state.grid.yc(j));
            M.push_back(avg / state.grid.ny);
        }
        const FitResult fr = fitter.fit(M);
        // M_i(s) = -(2 b_i + r + 1) s + k_i log(-2s) + const.
        out.raw.push_back(-0.5 * (fr.coeff[1] + state.r + 1));
        out.khat_real.push_back(fr.coeff[2]);
        out.max_fit_residual = std::max(out.max_fit_residual, fr.max_residual);
    }
    out.projected = out.raw;
    if (!is_member(out.raw, state.r, PolytopeKind::P_QP, m))
        out.projected = project_to_polytope(out.raw, state.r, PolytopeKind::P_QP, m);
    out.projected = snap_structure(out.projected, state.r, PolytopeKind::P_QP, m,
                                   -0.5 * state.r * (state.r + 1));
    out.k = k_vector(out.projected, static_cast<double>(m), 1e-6);
    return out;
}

WeightFit extract_special_weights(const TodaState& state, const std::vector<double>& yvals) {
    if (state.grid.chart != Chart::CARTESIAN)
        throw std::invalid_argument("extract_special_weights: CARTESIAN state required");
    if (yvals.size() < 8)
        throw std::invalid_argument("extract_special_weights: need >= 8 ray samples");
    std::vector<double> logs;
    for (double y : yvals) {
        if (y < state.grid.y0 || y > state.grid.y1)
            throw std::invalid_argument("extract_special_weights: samples outside the grid");
        logs.push_back(std::log(y + 2.0));
    }
    ThreeTermFitter fitter(yvals, logs);
    WeightFit out;
    out.pole = false;
    out.r = state.r;
    out.m = 1;
    out.samples = yvals;
    out.condition = fitter.design_condition();
    if (out.condition > 1e8)
        throw std::runtime_error("extract_special_weights: ill-posed samples (condition " +
                                 std::to_string(out.condition) + ")");
    const double xmid = 0.5 * (state.grid.x0 + state.grid.x1);
    for (int t = 0; t < state.r; ++t) {
        std::vector<double> vals;
        for (double y : yvals) vals.push_back(interpolate(state.grid, state.w[t], xmid, y));
        const FitResult fr = fitter.fit(vals);
        // w_i = 2 a_i R + k_i log(R + 2) + const.
        out.raw.push_back(0.5 * fr.coeff[1]);
        out.khat_real.push_back(fr.coeff[2]);
        out.max_fit_residual = std::max(out.max_fit_residual, fr.max_residual);
    }
    out.projected = out.raw;
    if (!is_member(out.raw, state.r, PolytopeKind::P))
        out.projected = project_to_polytope(out.raw, state.r, PolytopeKind::P);
    out.projected = snap_structure(out.projected, state.r, PolytopeKind::P, 1, 0.0);
    out.k = k_vector(out.projected, 1.0, 1e-6);
    return out;
}

WeightCompare compare_weights(const std::vector<double>& prescribed, const KVector& k_prescribed,
                              const WeightFit& fit, double tol_w) {
    WeightCompare rep;
    for (std::size_t i = 0; i < prescribed.size(); ++i)
        rep.max_weight_dev = std::max(rep.max_weight_dev,
                                      std::abs(prescribed[i] - fit.projected[i]));
    rep.weights_pass = rep.max_weight_dev <= tol_w;
    rep.k_pass = true;
    for (std::size_t i = 0; i < k_prescribed.k.size(); ++i) {
        const long long d = std::llabs(k_prescribed.k[i] - fit.k.k[i]);
        rep.max_k_dev = std::max(rep.max_k_dev, d);
        if (d != 0) rep.k_pass = false;
    }
    rep.pass = rep.weights_pass && rep.k_pass;
    return rep;
}

} // namespace rdtoda
