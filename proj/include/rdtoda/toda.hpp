#ifndef RDTODA_TODA_HPP
#define RDTODA_TODA_HPP

#include <functional>
#include <string>
#include <vector>

#include "rdtoda/parabolic.hpp"
#include "rdtoda/rdiff.hpp"

namespace rdtoda {

enum class Chart { LOG_POLAR, CARTESIAN };

/// Uniform finite-difference grid on a planar chart. LOG_POLAR covers the
/// annulus e^{x0} <= |z| <= e^{x1} with zeta = s + i theta, theta periodic on
/// ny equispaced nodes; CARTESIAN covers the rectangle [x0,x1] x [y0,y1] with
/// Dirichlet boundary on all four sides.
struct ChartGrid {
    Chart chart = Chart::LOG_POLAR;
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0; // ignored for LOG_POLAR (theta spans [0, 2pi))
    int nx = 8, ny = 8;

    double hx() const { return (x1 - x0) / (nx - 1); }
    double hy() const {
        return chart == Chart::LOG_POLAR ? 2.0 * M_PI / ny : (y1 - y0) / (ny - 1);
    }
    int nnodes() const { return nx * ny; }
    int idx(int i, int j) const { return i * ny + j; }
    double xc(int i) const { return x0 + i * hx(); }
    double yc(int j) const { return chart == Chart::LOG_POLAR ? j * hy() : y0 + j * hy(); }
    bool interior(int i, int j) const {
        if (i <= 0 || i >= nx - 1) return false;
        if (chart == Chart::CARTESIAN && (j <= 0 || j >= ny - 1)) return false;
        return true;
    }
    Complex z(int i, int j) const;
    void validate() const;
};

using Field = std::vector<double>;       // one scalar per node
using Fields = std::vector<Field>;       // r scalars per node

/// Discretized solution of the Toda system: r log-metric fields with
/// sum_i w_i = 0 and the precomputed |q|^2_g field, on a Euclidean-in-chart
/// background.
struct TodaState {
    int r = 2;
    ChartGrid grid;
    Fields w;
    Field qnorm;
    std::vector<unsigned char> qflag; // overflow flags from assembly
};

struct SolverConfig {
    double newton_tol = 1e-10;   // residual sup-norm target
    int max_newton = 50;
    double damping_factor = 0.5; // backtracking factor
    double min_step = 1.0 / (1 << 20);
    double cg_tol = 1e-12;       // relative CG tolerance
    int max_cg = 0;              // 0 = auto (20 * sqrt(#unknowns) + 200)
};

struct SolveReport {
    bool converged = false;
    int newton_iters = 0;
    std::vector<double> residual_history; // sup-norms
    double final_residual = 0.0;
    double max_trace_dev = 0.0; // max |sum_i w_i|
    bool used_picard = false;
};

/// |q|^2_g on the grid under the convention |(d zeta)^r|^2_g = 2^r:
/// 2^r |coefficient of q against (d zeta)^r|^2. Overflowing nodes are flagged.
void assemble_qnorm(const RDifferential& q, const ChartGrid& grid, Field& out,
                    std::vector<unsigned char>& flags);

/// Interior residual fields R_i = (1/2) Lap(w_i) - F_i(w); zero on boundary.
Fields residual(const TodaState& state);

/// Damped Newton solve of the Dirichlet problem. `boundary` supplies w values
/// on boundary nodes (interior entries ignored); trace must vanish there.
TodaState solve_dirichlet(int r, const ChartGrid& grid, const Field& qnorm,
                          const std::vector<unsigned char>& qflags, const Fields& boundary,
                          const SolverConfig& cfg, SolveReport* report = nullptr,
                          bool zero_initial_guess = false);

/// Exact r=2, q=0 state from the hyperbolic metric of curvature -2 on the
/// punctured disc (a > 0: conical family; a = 0: cusp).
TodaState hyperbolic_oracle(double a, const ChartGrid& grid);

/// log sum_i exp(w_i^{(2)} - w_i^{(1)}) on the common grid.
Field log_tr_s(const TodaState& s1, const TodaState& s2);

/// Primed-convention fields u_i = w_i + ((r+1-2i)/2) log 2.
Fields convert_convention(const TodaState& state);

/// Residual of the primed-convention system: (1/4) Lap(u_i) minus the rung
/// differences with |q|'^2 = |q|^2 / 2^r.
Fields primed_residual(const TodaState& state);

/// Boundary template at a pole (LOG_POLAR, s < 0):
/// w_i = -(2 b_i + r + 1) s + k_i log(-2s) + c_i, with the constants c_i
/// balancing the log-corrected rungs within tied blocks (alpha is the leading
/// coefficient of q, entering through the wrap rung); fills every node.
Fields pole_model_fields(const BVector& b, const KVector& k, const ChartGrid& grid,
                         Complex alpha = Complex(1.0, 0.0));

/// Boundary template toward a special interval on a CARTESIAN chart:
/// w_i = 2 a_i R + k_i log(R + 2) with R(z) = -Re(alpha z^rho) (chart at
/// infinity); for q = e^{iz}(dz)^r this is R = Im z.
Fields special_model_fields(const AVector& a, const KVector& k, Complex alpha, double rho,
                            const ChartGrid& grid);

/// Flat-solution constants w_i = -((r+1-2i)/r) log|q|_g for constant qnorm.
Fields flat_model_fields(int r, double qnorm_const, const ChartGrid& grid);

/// Dirichlet solves on a nested family of grids with a shared boundary rule;
/// reports sup differences between consecutive states sampled (bilinearly)
/// at the given core points.
struct ExhaustionReport {
    std::vector<TodaState> states;
    std::vector<double> core_gaps; // between consecutive states
};
ExhaustionReport exhaustion_solve(
    int r, const std::vector<ChartGrid>& grids,
    const std::function<void(const ChartGrid&, Field&, std::vector<unsigned char>&)>& qnorm_rule,
    const std::function<Fields(const ChartGrid&)>& boundary_rule, const SolverConfig& cfg,
    const std::vector<std::pair<double, double>>& core_points);

/// Bilinear sample of one field at chart coordinates (x, y).
double interpolate(const ChartGrid& grid, const Field& f, double x, double y);

/// Discrete 5-point Laplacian of a field at interior nodes (0 elsewhere).
Field laplacian_field(const ChartGrid& grid, const Field& f);

double sup_norm(const Field& f);
double max_interior_diff(const ChartGrid& grid, const Field& a, const Field& b);

} // namespace rdtoda

#endif
