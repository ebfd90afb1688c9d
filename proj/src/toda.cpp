#include "rdtoda/toda.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdtoda {

Complex ChartGrid::z(int i, int j) const {
    if (chart == Chart::LOG_POLAR) {
        const double s = xc(i), t = yc(j);
        return std::exp(s) * Complex(std::cos(t), std::sin(t));
    }
    return Complex(xc(i), yc(j));
}

void ChartGrid::validate() const {
    if (nx < 8 || ny < 8) throw std::invalid_argument("ChartGrid: node counts must be >= 8");
    if (!(x1 > x0)) throw std::invalid_argument("ChartGrid: empty x-range");
    if (chart == Chart::CARTESIAN && !(y1 > y0))
        throw std::invalid_argument("ChartGrid: empty y-range");
}

namespace {

/// 5-point Laplacian of field f at interior node (i,j); theta-periodic for
/// LOG_POLAR grids.
inline double lap_at(const ChartGrid& g, const Field& f, int i, int j, double ihx2,
                     double ihy2) {
    const int n = g.ny;
    const int jm = (g.chart == Chart::LOG_POLAR) ? (j + n - 1) % n : j - 1;
    const int jp = (g.chart == Chart::LOG_POLAR) ? (j + 1) % n : j + 1;
    const double c = f[g.idx(i, j)];
    return (f[g.idx(i - 1, j)] - 2.0 * c + f[g.idx(i + 1, j)]) * ihx2 +
           (f[g.idx(i, jm)] - 2.0 * c + f[g.idx(i, jp)]) * ihy2;
}

/// Rung weights rho_t = exp(w_{t+1}-w_t) (t < r-1), rho_{r-1} = qnorm *
/// exp(w_0 - w_{r-1}), per node.
Fields rung_weights(int r, const Fields& w, const Field& qnorm) {
    const std::size_t n = qnorm.size();
    Fields rho(r, Field(n, 0.0));
    for (int t = 0; t + 1 < r; ++t)
        for (std::size_t p = 0; p < n; ++p) rho[t][p] = std::exp(w[t + 1][p] - w[t][p]);
    for (std::size_t p = 0; p < n; ++p)
        rho[r - 1][p] = qnorm[p] * std::exp(w[0][p] - w[r - 1][p]);
    return rho;
}

Fields residual_of(int r, const ChartGrid& g, const Fields& w, const Field& qnorm) {
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    const Fields rho = rung_weights(r, w, qnorm);
    Fields R(r, Field(g.nnodes(), 0.0));
    for (int i = 1; i + 1 < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            if (!g.interior(i, j)) continue;
            const int p = g.idx(i, j);
            for (int t = 0; t < r; ++t) {
                const int tm = (t + r - 1) % r;
                const double F = rho[tm][p] - rho[t][p];
                R[t][p] = 0.5 * lap_at(g, w[t], i, j, ihx2, ihy2) - F;
            }
        }
    }
    return R;
}

double sup_of(const Fields& F) {
    double m = 0.0;
    for (const auto& f : F)
        for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double l2_of(const Fields& F) {
    double s = 0.0;
    for (const auto& f : F)
        for (double v : f) s += v * v;
    return std::sqrt(s);
}

/// Matrix-vector product of the (SPD) linearized operator
/// A v = -(1/2) Lap v + J(w) v, acting on interior entries (boundary zero).
/// rho == nullptr drops the J term (pure Laplace).
void apply_operator(int r, const ChartGrid& g, const Fields* rho, const Fields& v,
                    Fields& out) {
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    for (int t = 0; t < r; ++t) std::fill(out[t].begin(), out[t].end(), 0.0);
    for (int i = 1; i + 1 < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            if (!g.interior(i, j)) continue;
            const int p = g.idx(i, j);
            for (int t = 0; t < r; ++t) {
                double acc = -0.5 * lap_at(g, v[t], i, j, ihx2, ihy2);
                if (rho) {
                    const int tm = (t + r - 1) % r, tp = (t + 1) % r;
                    acc += (*rho)[tm][p] * (v[t][p] - v[tm][p]) +
                           (*rho)[t][p] * (v[t][p] - v[tp][p]);
                }
                out[t][p] = acc;
            }
        }
    }
}

/// Jacobi-preconditioned conjugate gradients for A x = b on interior nodes.
/// Returns the iteration count; x must carry zeros on the boundary.
int cg_solve(int r, const ChartGrid& g, const Fields* rho, const Fields& b, Fields& x,
             double rel_tol, int max_iter) {
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    const int n = g.nnodes();
    Fields diag(r, Field(n, 1.0));
    for (int i = 1; i + 1 < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            if (!g.interior(i, j)) continue;
            const int p = g.idx(i, j);
            for (int t = 0; t < r; ++t) {
                double d = ihx2 + ihy2;
                if (rho) {
                    const int tm = (t + r - 1) % r;
                    d += (*rho)[tm][p] + (*rho)[t][p];
                }
                diag[t][p] = d;
            }
        }
    Fields res = b, z(r, Field(n, 0.0)), pdir(r, Field(n, 0.0)), Ap(r, Field(n, 0.0));
    for (int t = 0; t < r; ++t) std::fill(x[t].begin(), x[t].end(), 0.0);
    auto dot = [&](const Fields& a, const Fields& c) {
        double s = 0.0;
        for (int t = 0; t < r; ++t)
            for (int p = 0; p < n; ++p) s += a[t][p] * c[t][p];
        return s;
    };
    const double b0 = std::sqrt(dot(b, b));
    if (b0 == 0.0) return 0;
    for (int t = 0; t < r; ++t)
        for (int p = 0; p < n; ++p) z[t][p] = res[t][p] / diag[t][p];
    pdir = z;
    double rz = dot(res, z);
    int it = 0;
    for (; it < max_iter; ++it) {
        apply_operator(r, g, rho, pdir, Ap);
        const double pAp = dot(pdir, Ap);
        if (pAp <= 0.0) break;
        const double alpha = rz / pAp;
        for (int t = 0; t < r; ++t)
            for (int p = 0; p < n; ++p) {
                x[t][p] += alpha * pdir[t][p];
                res[t][p] -= alpha * Ap[t][p];
            }
        if (std::sqrt(dot(res, res)) <= rel_tol * b0) { ++it; break; }
        for (int t = 0; t < r; ++t)
            for (int p = 0; p < n; ++p) z[t][p] = res[t][p] / diag[t][p];
        const double rz_new = dot(res, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int t = 0; t < r; ++t)
            for (int p = 0; p < n; ++p) pdir[t][p] = z[t][p] + beta * pdir[t][p];
    }
    return it;
}

/// Discrete-harmonic extension of the boundary data of each field.
Fields harmonic_extension(int r, const ChartGrid& g, const Fields& boundary,
                          const SolverConfig& cfg, int max_cg) {
    Fields w(r, Field(g.nnodes(), 0.0));
    for (int t = 0; t < r; ++t)
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                if (!g.interior(i, j)) w[t][g.idx(i, j)] = boundary[t][g.idx(i, j)];
    // Solve -(1/2) Lap (w + v) = 0 for the interior correction v.
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    Fields rhs(r, Field(g.nnodes(), 0.0));
    for (int i = 1; i + 1 < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (g.interior(i, j))
                for (int t = 0; t < r; ++t)
                    rhs[t][g.idx(i, j)] = 0.5 * lap_at(g, w[t], i, j, ihx2, ihy2);
    Fields v(r, Field(g.nnodes(), 0.0));
    cg_solve(r, g, nullptr, rhs, v, cfg.cg_tol, max_cg);
    for (int t = 0; t < r; ++t)
        for (int p = 0; p < g.nnodes(); ++p) w[t][p] += v[t][p];
    return w;
}

} // namespace

void assemble_qnorm(const RDifferential& q, const ChartGrid& grid, Field& out,
                    std::vector<unsigned char>& flags) {
    const RDifferential qdz = convert_frame(q, Frame::DZ);
    if (grid.chart == Chart::LOG_POLAR && qdz.puncture != Puncture::ZERO)
        throw std::invalid_argument("assemble_qnorm: LOG_POLAR grids require the z=0 chart");
    out.assign(grid.nnodes(), 0.0);
    flags.assign(grid.nnodes(), 0);
    const double scale = std::pow(2.0, qdz.rank);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const int p = grid.idx(i, j);
            const Complex zz = grid.z(i, j);
            EvalResult ev = evaluate(qdz, zz);
            Complex coef = ev.value;
            if (grid.chart == Chart::LOG_POLAR) {
                // (dz)^r = e^{r zeta} (d zeta)^r.
                const Complex zeta(grid.xc(i), grid.yc(j));
                coef *= std::exp(static_cast<double>(qdz.rank) * zeta);
            }
            out[p] = scale * std::norm(coef);
            flags[p] = ev.overflow ? 1 : 0;
        }
    }
}

Fields residual(const TodaState& state) {
    return residual_of(state.r, state.grid, state.w, state.qnorm);
}

TodaState solve_dirichlet(int r, const ChartGrid& grid, const Field& qnorm,
                          const std::vector<unsigned char>& qflags, const Fields& boundary,
                          const SolverConfig& cfg, SolveReport* report,
                          bool zero_initial_guess) {
    grid.validate();
    for (unsigned char f : qflags)
        if (f) throw std::runtime_error("solve_dirichlet: overflowing qnorm nodes in domain");
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            if (grid.interior(i, j)) continue;
            double tr = 0.0;
            for (int t = 0; t < r; ++t) tr += boundary[t][grid.idx(i, j)];
            if (std::abs(tr) > 1e-9)
                throw std::invalid_argument("solve_dirichlet: boundary trace must vanish");
        }

    const int max_cg =
        cfg.max_cg > 0 ? cfg.max_cg
                       : static_cast<int>(20.0 * std::sqrt(double(r) * grid.nnodes())) + 200;
    TodaState st;
    st.r = r;
    st.grid = grid;
    st.qnorm = qnorm;
    st.qflag = qflags;
    if (zero_initial_guess) {
        st.w.assign(r, Field(grid.nnodes(), 0.0));
        for (int t = 0; t < r; ++t)
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    if (!grid.interior(i, j))
                        st.w[t][grid.idx(i, j)] = boundary[t][grid.idx(i, j)];
    } else {
        st.w = harmonic_extension(r, grid, boundary, cfg, max_cg);
    }

    SolveReport rep;
    Fields R = residual_of(r, grid, st.w, qnorm);
    double sup = sup_of(R), l2 = l2_of(R);
    rep.residual_history.push_back(sup);
    Fields delta(r, Field(grid.nnodes(), 0.0));
    int picard_left = 20;
    while (sup > cfg.newton_tol && rep.newton_iters < cfg.max_newton) {
        const Fields rho = rung_weights(r, st.w, qnorm);
        cg_solve(r, grid, &rho, R, delta, cfg.cg_tol, max_cg);
        double t = 1.0;
        bool accepted = false;
        Fields wtrial = st.w;
        while (t >= cfg.min_step) {
            for (int f = 0; f < r; ++f)
                for (int p = 0; p < grid.nnodes(); ++p)
                    wtrial[f][p] = st.w[f][p] + t * delta[f][p];
            Fields Rt = residual_of(r, grid, wtrial, qnorm);
            const double l2t = l2_of(Rt);
            if (l2t <= (1.0 - 1e-4 * t) * l2) {
                st.w.swap(wtrial);
                R.swap(Rt);
                l2 = l2t;
                accepted = true;
                break;
            }
            t *= cfg.damping_factor;
        }
        if (!accepted) {
            if (picard_left-- <= 0) break;
            // Lagged-nonlinearity sweep: solve (1/2) Lap w_new = F(w_old).
            rep.used_picard = true;
            cg_solve(r, grid, nullptr, R, delta, cfg.cg_tol, max_cg);
            for (int f = 0; f < r; ++f)
                for (int p = 0; p < grid.nnodes(); ++p) st.w[f][p] += delta[f][p];
            R = residual_of(r, grid, st.w, qnorm);
            l2 = l2_of(R);
        }
        sup = sup_of(R);
        rep.residual_history.push_back(sup);
        ++rep.newton_iters;
    }
    rep.converged = sup <= cfg.newton_tol;
    rep.final_residual = sup;
    for (int p = 0; p < grid.nnodes(); ++p) {
        double tr = 0.0;
        for (int t = 0; t < r; ++t) tr += st.w[t][p];
        rep.max_trace_dev = std::max(rep.max_trace_dev, std::abs(tr));
    }
    if (report) *report = rep;
    if (!rep.converged)
        throw std::runtime_error("solve_dirichlet: Newton failed to reach tolerance (final " +
                                 std::to_string(rep.final_residual) + ")");
    return st;
}

TodaState hyperbolic_oracle(double a, const ChartGrid& grid) {
    TodaState st;
    st.r = 2;
    st.grid = grid;
    st.qnorm.assign(grid.nnodes(), 0.0);
    st.qflag.assign(grid.nnodes(), 0);
    st.w.assign(2, Field(grid.nnodes(), 0.0));
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const int p = grid.idx(i, j);
            double gz; // metric coefficient against dz dzbar
            const double az = std::abs(grid.z(i, j));
            if (a > 0.0) {
                const double ra = std::pow(az, a);
                gz = 2.0 * a * a * std::pow(az, 2.0 * (a - 1.0)) / ((1.0 - ra * ra) * (1.0 - ra * ra));
            } else {
                const double l = std::log(az * az);
                gz = 2.0 / (az * az * l * l);
            }
            double gchart = gz;
            if (grid.chart == Chart::LOG_POLAR) gchart = gz * std::exp(2.0 * grid.xc(i));
            st.w[0][p] = -0.5 * std::log(gchart);
            st.w[1][p] = -st.w[0][p];
        }
    }
    return st;
}

Field log_tr_s(const TodaState& s1, const TodaState& s2) {
    Field out(s1.grid.nnodes(), 0.0);
    for (int p = 0; p < s1.grid.nnodes(); ++p) {
        double acc = 0.0;
        for (int t = 0; t < s1.r; ++t) acc += std::exp(s2.w[t][p] - s1.w[t][p]);
        out[p] = std::log(acc);
    }
    return out;
}

Fields convert_convention(const TodaState& state) {
    Fields u = state.w;
    for (int t = 0; t < state.r; ++t) {
        const double shift = 0.5 * (state.r + 1 - 2 * (t + 1)) * std::log(2.0);
        for (double& v : u[t]) v += shift;
    }
    return u;
}

Fields primed_residual(const TodaState& state) {
    const Fields u = convert_convention(state);
    Field qn = state.qnorm;
    const double scale = std::pow(2.0, -state.r);
    for (double& v : qn) v *= scale;
    // Same rung structure; the primed operator is (1/4) Lap = (1/2) * (1/2) Lap.
    Fields R = residual_of(state.r, state.grid, u, qn);
    const ChartGrid& g = state.grid;
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    for (int i = 1; i + 1 < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (g.interior(i, j))
                for (int t = 0; t < state.r; ++t)
                    R[t][g.idx(i, j)] -= 0.25 * lap_at(g, u[t], i, j, ihx2, ihy2);
    return R;
}

Fields pole_model_fields(const BVector& b, const KVector& k, const ChartGrid& grid,
                         Complex alpha) {
    if (grid.chart != Chart::LOG_POLAR || grid.x1 >= 0.0)
        throw std::invalid_argument("pole_model_fields: needs a LOG_POLAR grid with s < 0");
    const int r = b.r;
    // Constants c_t: within each block of tied weights (merged cyclically when
    // the wrap equality b_r = b_1 - m holds) the log-corrected chain balances
    // only when consecutive rungs carry the coefficients q(sz-q)/(2 s^2); the
    // wrap rung additionally carries the 2^r |alpha|^2 factor of |q|^2_g.
    std::vector<double> c(r, 0.0);
    {
        const double tol = 1e-9;
        std::vector<std::vector<int>> blocks;
        for (int i = 0; i < r; ++i) {
            if (i == 0 || std::abs(b.b[i - 1] - b.b[i]) > tol) blocks.push_back({});
            blocks.back().push_back(i);
        }
        const bool wrap =
            blocks.size() >= 2 && std::abs(b.b[r - 1] - (b.b[0] - b.m)) <= tol;
        if (wrap) {
            std::vector<int> merged = blocks.back();
            merged.insert(merged.end(), blocks.front().begin(), blocks.front().end());
            blocks.pop_back();
            blocks.front() = merged;
        }
        const double wrap_log = r * std::log(2.0) + 2.0 * std::log(std::abs(alpha));
        for (const auto& blk : blocks) {
            const int sz = static_cast<int>(blk.size());
            double acc = 0.0, mean = 0.0;
            std::vector<double> off(sz, 0.0);
            for (int q = 1; q < sz; ++q) {
                double step = std::log(2.0 * q * (sz - q));
                if (blk[q - 1] == r - 1 && blk[q] == 0) step -= wrap_log;
                acc += step;
                off[q] = acc;
                mean += acc;
            }
            mean /= sz;
            for (int q = 0; q < sz; ++q) c[blk[q]] = off[q] - mean;
        }
    }
    Fields w(r, Field(grid.nnodes(), 0.0));
    for (int t = 0; t < r; ++t) {
        const double slope = -(2.0 * b.b[t] + r + 1);
        for (int i = 0; i < grid.nx; ++i) {
            const double s = grid.xc(i);
            const double v = slope * s + k.k[t] * std::log(-2.0 * s) + c[t];
            for (int j = 0; j < grid.ny; ++j) w[t][grid.idx(i, j)] = v;
        }
    }
    return w;
}

Fields special_model_fields(const AVector& a, const KVector& k, Complex alpha, double rho,
                            const ChartGrid& grid) {
    Fields w(a.r, Field(grid.nnodes(), 0.0));
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const Complex zz = grid.z(i, j);
            const double R = -(alpha * std::pow(zz, rho)).real();
            if (R < -1.0)
                throw std::invalid_argument("special_model_fields: node outside the model region");
            const int p = grid.idx(i, j);
            for (int t = 0; t < a.r; ++t)
                w[t][p] = 2.0 * a.a[t] * R + k.k[t] * std::log(R + 2.0);
        }
    }
    return w;
}

Fields flat_model_fields(int r, double qnorm_const, const ChartGrid& grid) {
    Fields w(r, Field(grid.nnodes(), 0.0));
    const double L = 0.5 * std::log(qnorm_const);
    for (int t = 0; t < r; ++t) {
        const double v = -static_cast<double>(r + 1 - 2 * (t + 1)) / r * L;
        std::fill(w[t].begin(), w[t].end(), v);
    }
    return w;
}

double interpolate(const ChartGrid& grid, const Field& f, double x, double y) {
    const double hx = grid.hx(), hy = grid.hy();
    double fx = (x - grid.x0) / hx;
    fx = std::clamp(fx, 0.0, static_cast<double>(grid.nx - 1));
    int i = std::min(static_cast<int>(fx), grid.nx - 2);
    const double tx = fx - i;
    int j, jp;
    double ty;
    if (grid.chart == Chart::LOG_POLAR) {
        double fy = y / hy;
        fy -= std::floor(fy / grid.ny) * grid.ny;
        j = static_cast<int>(fy) % grid.ny;
        jp = (j + 1) % grid.ny;
        ty = fy - std::floor(fy);
    } else {
        double fy = (y - grid.y0) / hy;
        fy = std::clamp(fy, 0.0, static_cast<double>(grid.ny - 1));
        j = std::min(static_cast<int>(fy), grid.ny - 2);
        jp = j + 1;
        ty = fy - j;
    }
    const double v00 = f[grid.idx(i, j)], v01 = f[grid.idx(i, jp)];
    const double v10 = f[grid.idx(i + 1, j)], v11 = f[grid.idx(i + 1, jp)];
    return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
}

ExhaustionReport exhaustion_solve(
    int r, const std::vector<ChartGrid>& grids,
    const std::function<void(const ChartGrid&, Field&, std::vector<unsigned char>&)>& qnorm_rule,
    const std::function<Fields(const ChartGrid&)>& boundary_rule, const SolverConfig& cfg,
    const std::vector<std::pair<double, double>>& core_points) {
    ExhaustionReport rep;
    std::vector<std::vector<double>> samples;
    for (const auto& g : grids) {
        Field qn;
        std::vector<unsigned char> flags;
        qnorm_rule(g, qn, flags);
        const Fields bnd = boundary_rule(g);
        rep.states.push_back(solve_dirichlet(r, g, qn, flags, bnd, cfg));
        std::vector<double> vals;
        for (const auto& pt : core_points)
            for (int t = 0; t < r; ++t)
                vals.push_back(interpolate(g, rep.states.back().w[t], pt.first, pt.second));
        samples.push_back(vals);
    }
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        double gap = 0.0;
        for (std::size_t i = 0; i < samples[k].size(); ++i)
            gap = std::max(gap, std::abs(samples[k + 1][i] - samples[k][i]));
        rep.core_gaps.push_back(gap);
    }
    return rep;
}

Field laplacian_field(const ChartGrid& grid, const Field& f) {
    Field out(grid.nnodes(), 0.0);
    const double ihx2 = 1.0 / (grid.hx() * grid.hx()), ihy2 = 1.0 / (grid.hy() * grid.hy());
    for (int i = 1; i + 1 < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            if (grid.interior(i, j)) out[grid.idx(i, j)] = lap_at(grid, f, i, j, ihx2, ihy2);
    return out;
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double max_interior_diff(const ChartGrid& grid, const Field& a, const Field& b) {
    double m = 0.0;
    for (int i = 1; i + 1 < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            if (grid.interior(i, j))
                m = std::max(m, std::abs(a[grid.idx(i, j)] - b[grid.idx(i, j)]));
    return m;
}

} // namespace rdtoda
