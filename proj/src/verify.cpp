#include "rdtoda/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rdtoda/cyclic.hpp"
#include "rdtoda/expzeros.hpp"
#include "rdtoda/growth.hpp"
#include "rdtoda/parabolic.hpp"
#include "rdtoda/rdiff.hpp"
#include "rdtoda/toda.hpp"
#include "rdtoda/weights.hpp"

namespace rdtoda {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ChartGrid annulus_grid(double r_in, double r_out, int nx, int ny) {
    ChartGrid g;
    g.chart = Chart::LOG_POLAR;
    g.x0 = std::log(r_in);
    g.x1 = std::log(r_out);
    g.nx = nx;
    g.ny = ny;
    return g;
}

/// q = alpha z^m (dz/z)^r at z = 0.
RDifferential monomial_q(int r, long long m, Complex alpha = Complex(1.0, 0.0)) {
    RDifferential q;
    q.rank = r;
    q.puncture = Puncture::ZERO;
    q.frame = Frame::DZ_OVER_Z;
    RDifferential::QTerm t;
    t.poly.add_term(Rational(m), alpha);
    q.terms.push_back(t);
    return q;
}

/// q = sum_k coeff_k e^{i alpha_k z} (dz)^r at z = infinity.
RDifferential expsum_q(int r, const std::vector<std::pair<Complex, Complex>>& terms) {
    RDifferential q;
    q.rank = r;
    q.puncture = Puncture::INFINITY_;
    q.frame = Frame::DZ;
    for (const auto& [coeff, alpha] : terms) {
        RDifferential::QTerm t;
        t.poly.add_term(Rational(0), coeff);
        t.exp_arg.add_term(Rational(1), Complex(0.0, 1.0) * alpha);
        q.terms.push_back(t);
    }
    return q;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

} // namespace

CheckResult check_hyperbolic_accuracy() {
    CheckResult res{1, "hyperbolic oracle accuracy", true, ""};
    std::ostringstream os;
    for (double a : {1.0, 0.5, 0.0}) {
        double errs[2] = {0.0, 0.0};
        const int sizes[2] = {128, 256};
        for (int g = 0; g < 2; ++g) {
            const ChartGrid grid = annulus_grid(0.05, 0.5, sizes[g], sizes[g]);
            const TodaState oracle = hyperbolic_oracle(a, grid);
            const Field qn(grid.nnodes(), 0.0);
            const std::vector<unsigned char> fl(grid.nnodes(), 0);
            const auto t0 = std::chrono::steady_clock::now();
            const TodaState st = solve_dirichlet(2, grid, qn, fl, oracle.w, SolverConfig{});
            const double secs = seconds_since(t0);
            for (int t = 0; t < 2; ++t)
                errs[g] = std::max(errs[g], max_interior_diff(grid, st.w[t], oracle.w[t]));
            if (secs > 30.0) {
                res.pass = false;
                os << "a=" << a << " n=" << sizes[g] << " took " << secs << "s (>30); ";
            }
        }
        const double ratio = errs[0] / errs[1];
        if (!(errs[0] <= 1e-3)) res.pass = false;
        if (!(ratio >= 3.0 && ratio <= 5.0)) res.pass = false;
        os << "a=" << a << " err128=" << errs[0] << " ratio=" << ratio << "; ";
    }
    res.detail = os.str();
    return res;
}

CheckResult check_flat_recovery() {
    CheckResult res{2, "flat solution recovery", true, ""};
    std::ostringstream os;
    for (int r : {2, 3, 4}) {
        ChartGrid grid;
        grid.chart = Chart::CARTESIAN;
        grid.x0 = 0.3;
        grid.x1 = 1.7;
        grid.y0 = -0.4;
        grid.y1 = 0.8;
        grid.nx = 32;
        grid.ny = 40;
        const double qc = 2.5;
        TodaState flat;
        flat.r = r;
        flat.grid = grid;
        flat.w = flat_model_fields(r, qc, grid);
        flat.qnorm.assign(grid.nnodes(), qc);
        flat.qflag.assign(grid.nnodes(), 0);
        double res_sup = 0.0;
        for (const auto& f : residual(flat)) res_sup = std::max(res_sup, sup_norm(f));
        const TodaState st =
            solve_dirichlet(r, grid, flat.qnorm, flat.qflag, flat.w, SolverConfig{});
        double dev = 0.0;
        for (int t = 0; t < r; ++t)
            dev = std::max(dev, max_interior_diff(grid, st.w[t], flat.w[t]));
        if (!(res_sup <= 1e-8 && dev <= 1e-8)) res.pass = false;
        os << "r=" << r << " template_res=" << res_sup << " solve_dev=" << dev << "; ";
    }
    res.detail = os.str();
    return res;
}

CheckResult check_pole_weight_roundtrip() {
    CheckResult res{3, "pole weight round trip", true, ""};
    std::ostringstream os;
    struct Case {
        int r, m;
        std::vector<double> b;
    };
    const std::vector<Case> cases = {
        {2, 1, {-1.5, -1.5}},
        {2, 1, {-1.0, -2.0}},
        {3, 2, {-1.4, -2.0, -2.6}},
    };
    for (const auto& c : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const ChartGrid grid = annulus_grid(1e-3, 1e-1, 96, 96);
        const RDifferential q = monomial_q(c.r, c.m);
        Field qn;
        std::vector<unsigned char> fl;
        assemble_qnorm(q, grid, qn, fl);
        BVector b{c.r, c.m, c.b};
        const KVector k = k_vector(b);
        const Fields bnd = pole_model_fields(b, k, grid);
        const TodaState st = solve_dirichlet(c.r, grid, qn, fl, bnd, SolverConfig{});
        const WeightFit fit = extract_pole_weights(st, linspace(-6.6, -4.2, 16), c.m);
        const WeightCompare cmp = compare_weights(c.b, k, fit, 0.05);
        const double secs = seconds_since(t0);
        if (!cmp.pass || secs > 120.0) res.pass = false;
        os << "r=" << c.r << " m=" << c.m << " dev_b=" << cmp.max_weight_dev
           << " dev_k=" << cmp.max_k_dev << " t=" << secs << "s; ";
    }
    res.detail = os.str();
    return res;
}

CheckResult check_special_weight_roundtrip() {
    CheckResult res{4, "special interval round trip", true, ""};
    std::ostringstream os;
    ChartGrid grid;
    grid.chart = Chart::CARTESIAN;
    grid.x0 = -6.0;
    grid.x1 = 6.0;
    grid.y0 = 0.0;
    grid.y1 = 20.0;
    grid.nx = 72;
    grid.ny = 120;
    const RDifferential q = expsum_q(2, {{Complex(1.0, 0.0), Complex(1.0, 0.0)}});
    Field qn;
    std::vector<unsigned char> fl;
    assemble_qnorm(q, grid, qn, fl);
    for (const auto& avals : std::vector<std::vector<double>>{{0.0, 0.0}, {0.25, -0.25}}) {
        AVector a{2, avals};
        const KVector k = k_vector(a);
        const Fields bnd = special_model_fields(a, k, Complex(0.0, 1.0), 1.0, grid);
        const TodaState st = solve_dirichlet(2, grid, qn, fl, bnd, SolverConfig{});
        const WeightFit fit = extract_special_weights(st, linspace(3.0, 17.0, 15));
        const WeightCompare cmp = compare_weights(avals, k, fit, 0.02);
        if (!cmp.pass) res.pass = false;
        os << "a=(" << avals[0] << "," << avals[1] << ") dev_a=" << cmp.max_weight_dev
           << " dev_k=" << cmp.max_k_dev << "; ";
    }
    res.detail = os.str();
    return res;
}

CheckResult check_classification_fixtures() {
    CheckResult res{5, "classification fixtures", true, ""};
    std::ostringstream os;
    auto fail = [&](const std::string& what) {
        res.pass = false;
        os << "FAIL " << what << "; ";
    };

    // e^{iz}(dz)^2: a single length-pi factor interval (0, pi).
    {
        const auto d = classify_moduli(expsum_q(2, {{Complex(1, 0), Complex(1, 0)}}));
        if (d.factors.size() != 1 || d.factors[0].kind != ModuliDescriptor::Kind::P_FACTOR ||
            !d.factors[0].interval ||
            !d.factors[0].interval->theta1.same_as(Angle(Rational(0))) ||
            !d.factors[0].interval->theta2().same_as(Angle(Rational(1))))
            fail("e^{iz}");
        else
            os << "e^{iz}: (0,pi); ";
    }
    // cos z (dz)^2 = (1/2)(e^{iz} + e^{-iz})(dz)^2: unique solution.
    {
        const auto d = classify_moduli(expsum_q(
            2, {{Complex(0.5, 0), Complex(1, 0)}, {Complex(0.5, 0), Complex(-1, 0)}}));
        if (!d.unique()) fail("cos z");
        else os << "cos z: unique; ";
    }
    // Mixed directions e^{iz} + e^{-iz} + e^{z}: no full negative interval.
    {
        const auto d = classify_moduli(expsum_q(2, {{Complex(1, 0), Complex(1, 0)},
                                                    {Complex(1, 0), Complex(-1, 0)},
                                                    {Complex(1, 0), Complex(0, -1)}}));
        if (!d.unique()) fail("mixed directions");
        else os << "mixed: unique; ";
    }
    // Airy preset: interval (-pi/3, pi/3).
    {
        const auto d = classify_moduli(airy_preset());
        if (d.factors.size() != 1 || d.factors[0].kind != ModuliDescriptor::Kind::P_FACTOR ||
            !d.factors[0].interval ||
            !d.factors[0].interval->theta1.same_as(Angle(Rational(-1, 3))) ||
            !d.factors[0].interval->theta2().same_as(Angle(Rational(1, 3))))
            fail("airy");
        else
            os << "airy: (-pi/3,pi/3); ";
    }
    // Meromorphic z^m (dz/z)^r: unique for m <= 0, pole factor for m > 0.
    for (long long m : {-1LL, 0LL, 2LL}) {
        const auto d = classify_moduli(monomial_q(2, m));
        const bool want_unique = m <= 0;
        if (want_unique != d.unique()) fail("z^m m=" + std::to_string(m));
        if (!want_unique &&
            (d.factors[0].kind != ModuliDescriptor::Kind::P_QP_FACTOR || d.factors[0].m != m))
            fail("z^m pole factor m=" + std::to_string(m));
    }
    os << "z^m: ok";
    res.detail = os.str();
    return res;
}

namespace {

/// Visit all non-increasing integer tuples (in units of 1/12) with the given
/// sum, spread bound, and per-entry denominator filter (reduced denominator of
/// n/12 at most 4, i.e. gcd(n mod 12, 12) >= 3).
template <typename Fn>
void enumerate_members(int r, long long sum12, long long spread12, const Fn& fn) {
    auto allowed = [](long long n) {
        const long long m = ((n % 12) + 12) % 12;
        return std::gcd(m, 12LL) >= 3;
    };
    std::vector<long long> n(r, 0);
    // n[0] between ceil(sum/r) and (sum + (r-1)*spread)/r.
    const long long lo0 = static_cast<long long>(std::ceil(double(sum12) / r));
    const long long hi0 =
        static_cast<long long>(std::floor(double(sum12 + (r - 1) * spread12) / r));
    std::function<void(int, long long)> rec = [&](int idx, long long remaining) {
        if (idx == r) {
            if (remaining == 0) fn(n);
            return;
        }
        const long long hi = std::min(n[idx - 1], remaining - (r - 1 - idx) * (n[0] - spread12));
        const long long lo = n[0] - spread12;
        for (long long v = hi; v >= lo; --v) {
            if (!allowed(v)) continue;
            // Remaining entries are each at most v: prune infeasible sums.
            if (remaining - v > (r - 1 - idx) * v) break;
            n[idx] = v;
            rec(idx + 1, remaining - v);
        }
    };
    for (long long v0 = lo0; v0 <= hi0; ++v0) {
        if (!allowed(v0)) continue;
        n[0] = v0;
        rec(1, sum12 - v0);
    }
}

} // namespace

CheckResult check_correction_vector_enumeration() {
    CheckResult res{6, "integer correction vector oracle agreement", true, ""};
    long long cases = 0, mismatches = 0, formula_mismatches = 0;
    std::ostringstream bad;
    auto run_one = [&](const std::vector<long long>& n, double drop) {
        std::vector<double> v;
        for (long long x : n) v.push_back(double(x) / 12.0);
        ++cases;
        const KVector kb = k_vector(v, drop);
        const KVector ko = weight_filtration_oracle(v, drop);
        if (kb.k != ko.k) {
            ++mismatches;
            if (mismatches <= 3) {
                bad << "mismatch at (";
                for (long long x : n) bad << x << "/12 ";
                bad << ") drop=" << drop << "; ";
            }
        }
        const int r = static_cast<int>(v.size());
        if (std::abs(v[r - 1] - (v[0] - drop)) > 1e-9) {
            const KVector kp = printed_formula_nonwrap(v);
            if (kb.k != kp.k) ++formula_mismatches;
        }
    };
    for (int r = 2; r <= 5; ++r) {
        // Normalized weights: sum 0, spread at most 1.
        enumerate_members(r, 0, 12, [&](const std::vector<long long>& n) { run_one(n, 1.0); });
        // Pole weights: sum -r(r+1)/2, spread at most m.
        for (int m = 1; m <= 8; ++m)
            enumerate_members(r, -6LL * r * (r + 1), 12LL * m,
                              [&](const std::vector<long long>& n) { run_one(n, double(m)); });
    }
    std::ostringstream os;
    os << cases << " members, " << mismatches << " oracle mismatches, " << formula_mismatches
       << " closed-form mismatches; " << bad.str();
    if (cases < 10000 || mismatches != 0 || formula_mismatches != 0) res.pass = false;
    res.detail = os.str();
    return res;
}

CheckResult check_fiber_inequalities(std::uint64_t seed) {
    CheckResult res{7, "cyclic fiber inequality audit", true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ulog(-0.5, 0.5), uphase(0.0, 2.0 * M_PI),
        upert(-0.25, 0.25);
    long long violations = 0, skipped = 0;
    const int trials = 10000;
    std::ostringstream bad;
    auto flag = [&](const char* what, int trial) {
        ++violations;
        if (violations <= 5) bad << what << "@" << trial << "; ";
    };
    for (int trial = 0; trial < trials; ++trial) {
        CyclicFiber fiber;
        fiber.r = 2 + static_cast<int>(rng() % 5);
        const double mod = std::exp(ulog(rng));
        const double ph = uphase(rng);
        fiber.alpha = mod * Cplx(std::cos(ph), std::sin(ph));
        const int r = fiber.r;
        const double aa = std::abs(fiber.alpha);

        const GInvariantMetric hc = canonical_metric(fiber);
        auto perturbed = [&]() {
            std::vector<double> eta(r);
            double mean = 0.0;
            for (double& e : eta) { e = upert(rng); mean += e; }
            mean /= r;
            GInvariantMetric h;
            for (int j = 0; j < r; ++j) h.diag.push_back(hc.diag[j] * std::exp(eta[j] - mean));
            return h;
        };
        const GInvariantMetric h1 = perturbed(), h2 = perturbed();
        h1.validate();

        // Canonical-metric identities.
        if (std::abs(f_norm(hc, fiber) - aa) > 1e-9 * (1.0 + aa)) flag("fnorm_can", trial);
        if (normality_defect(hc, fiber) > 1e-8 * (1.0 + std::pow(aa, 2 * r)))
            flag("normal_can", trial);

        // v-basis conjugates f to diag(tau^i alpha).
        {
            const CMatrix F = f_matrix(fiber), V = v_basis(fiber);
            double scale = 0.0, dev = 0.0;
            for (int i = 0; i < r; ++i) {
                const double t = 2.0 * M_PI * i / r;
                const Cplx lam = fiber.alpha * Cplx(std::cos(t), std::sin(t));
                for (int j = 0; j < r; ++j) {
                    Cplx fv(0.0, 0.0);
                    for (int l = 0; l < r; ++l) fv += F[j][l] * V[l][i];
                    dev = std::max(dev, std::abs(fv - lam * V[j][i]));
                    scale = std::max(scale, std::abs(V[j][i]));
                }
            }
            if (dev > 1e-9 * (1.0 + scale * (1.0 + aa))) flag("conjugation", trial);
        }

        // Gram diagonal is constant and equals b(h); reconstruction identity.
        {
            const CMatrix G = v_gram(h1, fiber);
            const double b = b_of_h(h1, fiber);
            for (int i = 0; i < r; ++i)
                if (std::abs(G[i][i] - b) > 1e-9 * b) flag("gram_diag", trial);
            if (reconstruction_residual(h1, fiber) > 1e-8 * b) flag("reconstruction", trial);

            // Epsilon-orthogonality bound with the measured epsilon.
            double off = 0.0;
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    if (i != j) off = std::max(off, std::abs(G[i][j]));
            const double eps = off / b * (1.0 + 1e-9) + 1e-15;
            if ((r - 1) * eps < 0.999) {
                const double delta = 0.5 * (1.0 + (r - 1) * eps);
                const auto rep = check_eps_orthogonality(h1, fiber, eps, delta);
                if (!rep.applicable || !rep.bound_holds) flag("eps_orth", trial);
            } else {
                ++skipped;
            }
        }

        // Frame norm bounds and two-metric ratio bounds.
        const double C =
            std::max({f_norm(h1, fiber), f_norm(h2, fiber), std::sqrt(double(r)) * aa}) *
            (1.0 + 1e-9);
        const auto nb = norm_bounds(h1, fiber, C);
        if (!nb.applicable || !nb.bounds_hold) flag("norm_bounds", trial);
        if (!ratio_bounds(h1, h2, fiber, C)) flag("ratio_bounds", trial);
    }
    std::ostringstream os;
    os << trials << " fibers, " << violations << " violations, " << skipped
       << " eps-orth skips; " << bad.str();
    if (violations != 0) res.pass = false;
    res.detail = os.str();
    return res;
}

CheckResult check_trace_subharmonicity() {
    CheckResult res{8, "endomorphism trace subharmonicity", true, ""};
    std::ostringstream os;
    int pair_no = 0;
    auto run_pair = [&](int r, const ChartGrid& grid, const Field& qn, const Fields& bnd1,
                        const Fields& bnd2) {
        ++pair_no;
        const std::vector<unsigned char> fl(grid.nnodes(), 0);
        SolveReport rep1, rep2;
        const TodaState s1 = solve_dirichlet(r, grid, qn, fl, bnd1, SolverConfig{}, &rep1);
        const TodaState s2 = solve_dirichlet(r, grid, qn, fl, bnd2, SolverConfig{}, &rep2);
        const Field phi = log_tr_s(s1, s2);
        const Field lap = laplacian_field(grid, phi);
        double min_lap = 0.0, min_phi = phi[0];
        for (int i = 1; i + 1 < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j)
                if (grid.interior(i, j)) min_lap = std::min(min_lap, lap[grid.idx(i, j)]);
        for (double v : phi) min_phi = std::min(min_phi, v);
        const double eps = 1e3 * (rep1.final_residual + rep2.final_residual) + 1e-9;
        const bool ok = min_lap >= -eps && min_phi >= std::log(double(r)) - 1e-8;
        if (!ok) res.pass = false;
        os << "pair" << pair_no << " min_lap=" << min_lap << " eps=" << eps
           << " min_logtr=" << min_phi << " (log r=" << std::log(double(r)) << "); ";
    };

    // Pole-template pairs on an annulus with q = z (dz/z)^2.
    {
        const ChartGrid grid = annulus_grid(1e-2, 0.4, 64, 64);
        Field qn;
        std::vector<unsigned char> fl;
        assemble_qnorm(monomial_q(2, 1), grid, qn, fl);
        const BVector bA{2, 1, {-1.5, -1.5}}, bB{2, 1, {-1.2, -1.8}}, bC{2, 1, {-1.0, -2.0}};
        run_pair(2, grid, qn, pole_model_fields(bA, k_vector(bA), grid),
                 pole_model_fields(bB, k_vector(bB), grid));
        run_pair(2, grid, qn, pole_model_fields(bC, k_vector(bC), grid),
                 pole_model_fields(bA, k_vector(bA), grid));
    }
    // Hyperbolic boundaries with q = 0.
    {
        const ChartGrid grid = annulus_grid(0.05, 0.5, 64, 64);
        const Field qn(grid.nnodes(), 0.0);
        run_pair(2, grid, qn, hyperbolic_oracle(1.0, grid).w, hyperbolic_oracle(0.5, grid).w);
    }
    // Flat vs. perturbed boundary, r = 3.
    {
        ChartGrid grid;
        grid.chart = Chart::CARTESIAN;
        grid.x0 = 0.0;
        grid.x1 = 1.0;
        grid.y0 = 0.0;
        grid.y1 = 1.0;
        grid.nx = 48;
        grid.ny = 48;
        const Field qn(grid.nnodes(), 1.7);
        const Fields flat = flat_model_fields(3, 1.7, grid);
        Fields pert = flat;
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j)
                if (!grid.interior(i, j)) {
                    const double g = 0.3 * std::sin(3.0 * grid.xc(i) + 2.0 * grid.yc(j));
                    pert[0][grid.idx(i, j)] += g;
                    pert[2][grid.idx(i, j)] -= g;
                }
        run_pair(3, grid, qn, flat, pert);
    }
    // Special-interval templates on a strip with q = e^{iz}(dz)^2.
    {
        ChartGrid grid;
        grid.chart = Chart::CARTESIAN;
        grid.x0 = -4.0;
        grid.x1 = 4.0;
        grid.y0 = 0.0;
        grid.y1 = 12.0;
        grid.nx = 64;
        grid.ny = 96;
        Field qn;
        std::vector<unsigned char> fl;
        assemble_qnorm(expsum_q(2, {{Complex(1, 0), Complex(1, 0)}}), grid, qn, fl);
        const AVector aA{2, {0.0, 0.0}}, aB{2, {0.25, -0.25}};
        run_pair(2, grid, qn,
                 special_model_fields(aA, k_vector(aA), Complex(0, 1), 1.0, grid),
                 special_model_fields(aB, k_vector(aB), Complex(0, 1), 1.0, grid));
    }
    res.detail = os.str();
    return res;
}

CheckResult check_zero_counting(std::uint64_t seed) {
    CheckResult res{9, "exponential sum zero counting", true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    long long density_fail = 0, additivity_fail = 0, oracle_fail = 0, split_tested = 0;
    const int cases = 100;
    for (int cs = 0; cs < cases; ++cs) {
        const int n = 1 + static_cast<int>(rng() % 4);
        ExpSum F;
        double c = -3.0 * u01(rng);
        for (int k = 0; k <= n; ++k) {
            F.c.push_back(c);
            c += 0.3 + 1.2 * u01(rng);
            const double mod = 0.3 + 1.2 * u01(rng), ph = 2.0 * M_PI * u01(rng);
            F.a.emplace_back(mod * std::cos(ph), mod * std::sin(ph));
        }
        // Nudge each vertical contour line to a spot where |F| stays well
        // away from zero along the whole line, so the winding integrals are
        // well conditioned.
        const auto clear_line = [&F](double x0) {
            double scale = 0.0;
            for (const auto& ak : F.a) scale += std::abs(ak);
            const double H = zero_strip(F) + 1.0;
            double best_x = x0, best_min = -1.0;
            for (int j = 0; j <= 20; ++j) {
                const double x = x0 + 0.05 * j;
                double mn = 1e300;
                for (int s = 0; s <= 256; ++s) {
                    const double y = -H + 2.0 * H * s / 256.0;
                    mn = std::min(mn, std::abs(F.eval({x, y})));
                }
                if (mn > 0.02 * scale) return x;
                if (mn > best_min) {
                    best_min = mn;
                    best_x = x;
                }
            }
            return best_x;
        };
        const double x1 = clear_line(-20.0 + 40.0 * u01(rng));
        const double len = 2.0 + 48.0 * u01(rng);
        const double x3 = clear_line(x1 + len);
        const double x2 = clear_line(x1 + len * (0.25 + 0.5 * u01(rng)));

        const auto density = verify_density_bound(F, x1, x3);
        if (!density.pass) ++density_fail;

        const ZeroCount full = count_zeros(F, x1, x3);
        if (x2 <= x1 + 0.05 || x2 >= x3 - 0.05) {
            // Degenerate split after nudging; the count itself is still audited.
        } else {
            const ZeroCount left = count_zeros(F, x1, x2);
            const ZeroCount right = count_zeros(F, x2, x3);
            if (!full.perturbed && !left.perturbed && !right.perturbed) {
                ++split_tested;
                if (left.count + right.count != full.count) ++additivity_fail;
            }
        }

        if (n == 1) {
            // Two-term sums have explicitly known zeros on an arithmetic
            // progression: e^{i(c1-c0)z} = -a0/a1.
            const double gap = F.c[1] - F.c[0];
            const double phase = std::arg(-F.a[0] / F.a[1]);
            long long exact = 0;
            const long long k0 = static_cast<long long>(std::floor((full.x1 * gap - phase) /
                                                                   (2.0 * M_PI))) - 2;
            for (long long k = k0; k < k0 + 64; ++k) {
                const double x = (phase + 2.0 * M_PI * k) / gap;
                if (x > full.x1 && x < full.x2) ++exact;
            }
            if (exact != full.count) ++oracle_fail;
        }
    }
    std::ostringstream os;
    os << cases << " sums: " << density_fail << " density fails, " << additivity_fail
       << " additivity fails (" << split_tested << " splits tested), " << oracle_fail
       << " two-term oracle fails";
    if (density_fail != 0 || additivity_fail != 0 || oracle_fail != 0 || split_tested < 60)
        res.pass = false;
    res.detail = os.str();
    return res;
}

CheckResult check_domain_exhaustion() {
    CheckResult res{10, "nested annulus exhaustion convergence", true, ""};
    std::vector<ChartGrid> grids;
    for (int k = 3; k <= 6; ++k) {
        const double len = std::log(0.5) + k;
        const int nx = static_cast<int>(std::lround(len / 0.02)) + 1;
        ChartGrid g = annulus_grid(std::exp(-double(k)), 0.5, nx, 64);
        grids.push_back(g);
    }
    auto qnorm_rule = [](const ChartGrid& g, Field& qn, std::vector<unsigned char>& fl) {
        assemble_qnorm(monomial_q(2, 1), g, qn, fl);
    };
    // Boundary model = cusp + corrections. With w_0 = log(-s sqrt(2)) + d the
    // q-rung perturbation equation (1/2) d'' = 8 s^2 e^{2s} has particular
    // solution d_q = (4 s^2 - 8 s + 6) e^{2s}. On top of that the limit
    // carries a decaying harmonic mode c/s + d/s^2 whose coefficients are set
    // by the (fixed) outer-circle data; they are calibrated below from one
    // wide reference solve. A taper keeps the outer-circle data at the plain
    // cusp values so the calibration and the official solves share a limit.
    const auto taper = [](double s) {
        return std::min(1.0, std::max(0.0, (-s - 1.0) / 1.5));
    };
    const auto q_correction = [](double s) {
        return (4.0 * s * s - 8.0 * s + 6.0) * std::exp(2.0 * s);
    };
    double c_tail = 0.0, d_tail = 0.0;
    {
        const double s_out = std::log(0.5), s_in = -20.0;
        const int nx = static_cast<int>(std::lround((s_out - s_in) / 0.02)) + 1;
        ChartGrid ref = annulus_grid(std::exp(s_in), 0.5, nx, 8);
        Field qn;
        std::vector<unsigned char> fl;
        assemble_qnorm(monomial_q(2, 1), ref, qn, fl);
        Fields bc = hyperbolic_oracle(0.0, ref).w;
        for (int i = 0; i < ref.nx; ++i) {
            const double corr = taper(ref.xc(i)) * q_correction(ref.xc(i));
            for (int j = 0; j < ref.ny; ++j) {
                bc[0][ref.idx(i, j)] += corr;
                bc[1][ref.idx(i, j)] -= corr;
            }
        }
        const TodaState rs = solve_dirichlet(2, ref, qn, fl, bc, SolverConfig{});
        // Least squares of s * (w_0 - model) against {1, 1/s} on -6 <= s <= -3.
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (int i = 0; i < ref.nx; ++i) {
            const double s = ref.xc(i);
            if (s < -6.0 || s > -3.0) continue;
            const double y =
                s * (rs.w[0][ref.idx(i, 0)] - std::log(-s * std::sqrt(2.0)) - q_correction(s));
            a11 += 1.0;
            a12 += 1.0 / s;
            a22 += 1.0 / (s * s);
            b1 += y;
            b2 += y / s;
        }
        const double det = a11 * a22 - a12 * a12;
        c_tail = (a22 * b1 - a12 * b2) / det;
        d_tail = (a11 * b2 - a12 * b1) / det;
    }
    auto boundary_rule = [&](const ChartGrid& g) {
        Fields w = hyperbolic_oracle(0.0, g).w;
        for (int i = 0; i < g.nx; ++i) {
            const double s = g.xc(i);
            const double corr =
                taper(s) * (q_correction(s) + c_tail / s + d_tail / (s * s));
            for (int j = 0; j < g.ny; ++j) {
                w[0][g.idx(i, j)] += corr;
                w[1][g.idx(i, j)] -= corr;
            }
        }
        return w;
    };
    std::vector<std::pair<double, double>> core;
    for (double s : linspace(std::log(0.2), std::log(0.4), 5))
        for (double th : {0.3, 1.9, 3.5, 5.1}) core.emplace_back(s, th);
    const ExhaustionReport rep =
        exhaustion_solve(2, grids, qnorm_rule, boundary_rule, SolverConfig{}, core);
    std::ostringstream os;
    os << "core gaps:";
    for (double g : rep.core_gaps) os << " " << g;
    for (std::size_t i = 0; i + 1 < rep.core_gaps.size(); ++i)
        if (!(rep.core_gaps[i + 1] < rep.core_gaps[i])) res.pass = false;
    if (!(rep.core_gaps.back() <= 1e-3)) res.pass = false;
    res.detail = os.str();
    return res;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed) {
    std::vector<CheckResult> out;
    if (suite == "oracle" || suite == "all") {
        out.push_back(check_hyperbolic_accuracy());
        out.push_back(check_flat_recovery());
    }
    if (suite == "roundtrip" || suite == "all") {
        out.push_back(check_pole_weight_roundtrip());
        out.push_back(check_special_weight_roundtrip());
    }
    if (suite == "all") out.push_back(check_classification_fixtures());
    if (suite == "parabolic" || suite == "all")
        out.push_back(check_correction_vector_enumeration());
    if (suite == "fibers" || suite == "all") out.push_back(check_fiber_inequalities(seed));
    if (suite == "all") out.push_back(check_trace_subharmonicity());
    if (suite == "zeros" || suite == "all") out.push_back(check_zero_counting(seed));
    if (suite == "all") out.push_back(check_domain_exhaustion());
    if (out.empty()) throw std::invalid_argument("unknown verify suite: " + suite);
    return out;
}

} // namespace rdtoda
