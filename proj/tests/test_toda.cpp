#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rdtoda/toda.hpp"

using namespace rdtoda;

namespace {

ChartGrid annulus(double r_in, double r_out, int nx, int ny) {
    ChartGrid g;
    g.chart = Chart::LOG_POLAR;
    g.x0 = std::log(r_in);
    g.x1 = std::log(r_out);
    g.nx = nx;
    g.ny = ny;
    g.validate();
    return g;
}

ChartGrid rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
    ChartGrid g;
    g.chart = Chart::CARTESIAN;
    g.x0 = x0;
    g.x1 = x1;
    g.y0 = y0;
    g.y1 = y1;
    g.nx = nx;
    g.ny = ny;
    g.validate();
    return g;
}

ExpMonomialSum mono(const Rational& e, Complex c) {
    ExpMonomialSum s;
    s.add_term(e, c);
    return s;
}

} // namespace

TEST_CASE("metric norm of q on a grid") {
    // Constant q = (dz)^r on a rectangle: |q|^2_g = 2^r.
    RDifferential q;
    q.rank = 3;
    q.puncture = Puncture::INFINITY_;
    q.frame = Frame::DZ;
    q.terms.push_back({mono(Rational(0), 1.0), {}});
    const ChartGrid rect = rectangle(0.0, 1.0, 0.0, 1.0, 9, 9);
    Field qn;
    std::vector<unsigned char> flags;
    assemble_qnorm(q, rect, qn, flags);
    for (double v : qn) CHECK(v == doctest::Approx(8.0));

    // q = alpha z^m (dz/z)^r on an annulus: |q|^2_g = 2^r |alpha|^2 e^{2ms}.
    RDifferential p;
    p.rank = 2;
    p.puncture = Puncture::ZERO;
    p.frame = Frame::DZ_OVER_Z;
    p.terms.push_back({mono(Rational(3), Complex(0.0, 2.0)), {}});
    const ChartGrid ann = annulus(0.05, 0.5, 9, 8);
    assemble_qnorm(p, ann, qn, flags);
    for (int i = 0; i < ann.nx; ++i)
        for (int j = 0; j < ann.ny; ++j)
            CHECK(qn[ann.idx(i, j)] ==
                  doctest::Approx(4.0 * 4.0 * std::exp(6.0 * ann.xc(i))));
}

TEST_CASE("residual of closed-form states") {
    const ChartGrid rect = rectangle(0.0, 1.0, 0.0, 1.0, 17, 17);

    // Flat constants for constant qnorm give zero residual.
    TodaState flat;
    flat.r = 3;
    flat.grid = rect;
    flat.qnorm.assign(rect.nnodes(), 8.0);
    flat.qflag.assign(rect.nnodes(), 0);
    flat.w = flat_model_fields(3, 8.0, rect);
    for (const Field& R : residual(flat))
        for (double v : R) CHECK(std::abs(v) <= 1e-12);

    // w = 0, q = 0, r = 2: F_1 = -1 and F_2 = +1, so R = -F = (+1, -1).
    TodaState zero;
    zero.r = 2;
    zero.grid = rect;
    zero.qnorm.assign(rect.nnodes(), 0.0);
    zero.qflag.assign(rect.nnodes(), 0);
    zero.w.assign(2, Field(rect.nnodes(), 0.0));
    const Fields R = residual(zero);
    for (int i = 1; i < rect.nx - 1; ++i)
        for (int j = 1; j < rect.ny - 1; ++j) {
            CHECK(R[0][rect.idx(i, j)] == doctest::Approx(1.0));
            CHECK(R[1][rect.idx(i, j)] == doctest::Approx(-1.0));
        }
}

TEST_CASE("residuals telescope to the Laplacian of the trace") {
    const ChartGrid ann = annulus(0.1, 0.5, 12, 8);
    TodaState s;
    s.r = 3;
    s.grid = ann;
    s.qnorm.assign(ann.nnodes(), 1.0);
    s.qflag.assign(ann.nnodes(), 0);
    s.w.assign(3, Field(ann.nnodes()));
    Field trace(ann.nnodes(), 0.0);
    for (int t = 0; t < 3; ++t)
        for (int i = 0; i < ann.nx; ++i)
            for (int j = 0; j < ann.ny; ++j) {
                const double v = std::sin(1.7 * t + 0.3 * i) * std::cos(0.2 * j + t);
                s.w[t][ann.idx(i, j)] = v;
                trace[ann.idx(i, j)] += v;
            }
    const Fields R = residual(s);
    const Field lap = laplacian_field(ann, trace);
    for (int i = 1; i < ann.nx - 1; ++i)
        for (int j = 0; j < ann.ny; ++j) {
            double sum = 0.0;
            for (int t = 0; t < 3; ++t) sum += R[t][ann.idx(i, j)];
            CHECK(sum == doctest::Approx(0.5 * lap[ann.idx(i, j)]).epsilon(1e-10));
        }
}

TEST_CASE("constant q solves to the flat state") {
    const ChartGrid rect = rectangle(-0.5, 0.5, -0.5, 0.5, 17, 17);
    const Field qn(rect.nnodes(), 8.0);
    const std::vector<unsigned char> flags(rect.nnodes(), 0);
    const Fields boundary = flat_model_fields(3, 8.0, rect);
    SolveReport rep;
    const TodaState s = solve_dirichlet(3, rect, qn, flags, boundary, SolverConfig{}, &rep);
    CHECK(rep.converged);
    CHECK(rep.max_trace_dev <= 1e-9);
    for (int t = 0; t < 3; ++t)
        CHECK(max_interior_diff(rect, s.w[t], boundary[t]) <= 1e-8);
}

TEST_CASE("hyperbolic oracle values and consistency") {
    // Conical metric coefficient at z = 0.25, a = 1: 2 / (1 - |z|^2)^2.
    const ChartGrid ann = annulus(0.05, 0.5, 33, 16);
    const TodaState oracle = hyperbolic_oracle(1.0, ann);
    const double s25 = std::log(0.25);
    const double g_coeff = 2.0 / std::pow(1.0 - 0.0625, 2);
    // w_0 = -(1/2) log(g e^{2s}).
    const double expected = -0.5 * std::log(g_coeff * std::exp(2.0 * s25));
    CHECK(interpolate(ann, oracle.w[0], s25, 0.0) ==
          doctest::Approx(expected).epsilon(1e-3)); // bilinear sampling between nodes

    // The oracle satisfies the discrete equation to second order in h.
    const auto sup_residual = [](double a, int n) {
        const TodaState o = hyperbolic_oracle(a, annulus(0.05, 0.5, n, n));
        double worst = 0.0;
        for (const Field& R : residual(o)) worst = std::max(worst, sup_norm(R));
        return worst;
    };
    for (double a : {1.0, 0.0}) {
        const double ratio = sup_residual(a, 32) / sup_residual(a, 64);
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }
}

TEST_CASE("solver reproduces the hyperbolic oracle") {
    const ChartGrid ann = annulus(0.05, 0.5, 48, 48);
    const TodaState oracle = hyperbolic_oracle(1.0, ann);
    const Field qn(ann.nnodes(), 0.0);
    const std::vector<unsigned char> flags(ann.nnodes(), 0);
    SolveReport rep;
    const TodaState s = solve_dirichlet(2, ann, qn, flags, oracle.w, SolverConfig{}, &rep);
    CHECK(rep.converged);
    CHECK(max_interior_diff(ann, s.w[0], oracle.w[0]) <= 1e-3);

    // Same solve from the zero initial guess lands on the same state.
    const TodaState z = solve_dirichlet(2, ann, qn, flags, oracle.w, SolverConfig{}, nullptr,
                                        /*zero_initial_guess=*/true);
    CHECK(max_interior_diff(ann, s.w[0], z.w[0]) <= 1e-8);
}

TEST_CASE("log trace field of identical states") {
    const ChartGrid ann = annulus(0.1, 0.5, 9, 8);
    const TodaState o = hyperbolic_oracle(0.5, ann);
    for (double v : log_tr_s(o, o)) CHECK(v == doctest::Approx(std::log(2.0)));
}

TEST_CASE("convention conversion") {
    const ChartGrid ann = annulus(0.1, 0.5, 9, 8);
    TodaState s;
    s.r = 3;
    s.grid = ann;
    s.qnorm.assign(ann.nnodes(), 1.0);
    s.qflag.assign(ann.nnodes(), 0);
    s.w.assign(3, Field(ann.nnodes(), 0.0));
    for (int i = 0; i < ann.nnodes(); ++i) {
        s.w[0][i] = 0.3;
        s.w[1][i] = -0.1;
        s.w[2][i] = -0.2;
    }
    const Fields u = convert_convention(s);
    CHECK(u[0][0] == doctest::Approx(0.3 + std::log(2.0)));   // (r+1-2i)/2 = 1 at i=1
    CHECK(u[1][0] == doctest::Approx(-0.1));                  // middle index unchanged
    CHECK(u[2][0] == doctest::Approx(-0.2 - std::log(2.0)));
    CHECK(u[0][0] + u[1][0] + u[2][0] == doctest::Approx(s.w[0][0] + s.w[1][0] + s.w[2][0]));
}

TEST_CASE("boundary templates have zero trace") {
    const ChartGrid ann = annulus(1e-3, 1e-1, 17, 8);
    const BVector b{2, 1, {-1.0, -2.0}};
    const Fields pole = pole_model_fields(b, k_vector(b), ann);
    for (int i = 0; i < ann.nnodes(); ++i)
        CHECK(std::abs(pole[0][i] + pole[1][i]) <= 1e-12);

    // Linear parts -(2 b_i + r + 1) s differ in slope by -2(b_1 - b_2) = -2;
    // the log corrections contribute O(1/s) on top.
    const double slope0 = (pole[0][ann.idx(2, 0)] - pole[0][ann.idx(1, 0)]) / ann.hx();
    const double slope1 = (pole[1][ann.idx(2, 0)] - pole[1][ann.idx(1, 0)]) / ann.hx();
    CHECK(slope0 - slope1 == doctest::Approx(-2.0).epsilon(0.2));

    const ChartGrid strip = rectangle(-10.0, 10.0, 0.0, 20.0, 9, 9);
    const AVector a{2, {0.25, -0.25}};
    const Fields special =
        special_model_fields(a, k_vector(a), Complex(0.0, 1.0), 1.0, strip);
    for (int i = 0; i < strip.nnodes(); ++i)
        CHECK(std::abs(special[0][i] + special[1][i]) <= 1e-12);
}

TEST_CASE("single-grid exhaustion equals a direct solve") {
    const ChartGrid ann = annulus(0.05, 0.5, 24, 16);
    const auto qnorm_rule = [](const ChartGrid& g, Field& qn, std::vector<unsigned char>& fl) {
        qn.assign(g.nnodes(), 0.0);
        fl.assign(g.nnodes(), 0);
    };
    const auto boundary_rule = [](const ChartGrid& g) { return hyperbolic_oracle(1.0, g).w; };
    const ExhaustionReport rep =
        exhaustion_solve(2, {ann}, qnorm_rule, boundary_rule, SolverConfig{}, {});
    REQUIRE(rep.states.size() == 1);
    CHECK(rep.core_gaps.empty());

    Field qn(ann.nnodes(), 0.0);
    const std::vector<unsigned char> flags(ann.nnodes(), 0);
    const TodaState direct =
        solve_dirichlet(2, ann, qn, flags, hyperbolic_oracle(1.0, ann).w, SolverConfig{});
    CHECK(max_interior_diff(ann, rep.states[0].w[0], direct.w[0]) <= 1e-12);
}

TEST_CASE("bilinear interpolation reproduces node values") {
    const ChartGrid ann = annulus(0.1, 0.5, 9, 8);
    Field f(ann.nnodes());
    for (int i = 0; i < ann.nx; ++i)
        for (int j = 0; j < ann.ny; ++j) f[ann.idx(i, j)] = 3.0 * ann.xc(i) - ann.yc(j);
    CHECK(interpolate(ann, f, ann.xc(3), ann.yc(2)) ==
          doctest::Approx(3.0 * ann.xc(3) - ann.yc(2)));
    // Linear functions are interpolated exactly between nodes (in s).
    const double mid = 0.5 * (ann.xc(3) + ann.xc(4));
    CHECK(interpolate(ann, f, mid, ann.yc(2)) == doctest::Approx(3.0 * mid - ann.yc(2)));
}
