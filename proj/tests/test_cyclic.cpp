#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rdtoda/cyclic.hpp"

using namespace rdtoda;

namespace {

// Max |F V - V diag(tau^i alpha)| entrywise.
double conjugation_residual(const CyclicFiber& fiber) {
    const CMatrix F = f_matrix(fiber);
    const CMatrix V = v_basis(fiber);
    const int r = fiber.r;
    double worst = 0.0;
    for (int i = 0; i < r; ++i) {
        const Cplx tau = std::polar(1.0, 2.0 * M_PI * i / r);
        const Cplx lambda = tau * fiber.alpha;
        for (int row = 0; row < r; ++row) {
            Cplx fv{0.0, 0.0};
            for (int k = 0; k < r; ++k) fv += F[row][k] * V[k][i];
            worst = std::max(worst, std::abs(fv - lambda * V[row][i]));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("eigenbasis of the cyclic automorphism") {
    const CyclicFiber f2{2, Cplx(1.0, 0.0)};
    const CMatrix V = v_basis(f2);
    // v_0 = e_0 + e_1, v_1 = e_0 - e_1.
    CHECK(std::abs(V[0][0] - Cplx(1.0)) <= 1e-15);
    CHECK(std::abs(V[1][0] - Cplx(1.0)) <= 1e-15);
    CHECK(std::abs(V[0][1] - Cplx(1.0)) <= 1e-15);
    CHECK(std::abs(V[1][1] + Cplx(1.0)) <= 1e-15);
    CHECK(conjugation_residual(f2) <= 1e-12);

    CHECK(conjugation_residual({3, Cplx(1.0, 0.0)}) <= 1e-12);
    CHECK(conjugation_residual({5, Cplx(0.3, -1.1)}) <= 1e-12);
}

TEST_CASE("canonical metric") {
    const auto h32 = canonical_metric({3, Cplx(2.0, 0.0)});
    CHECK(h32.diag[0] == doctest::Approx(0.25));
    CHECK(h32.diag[1] == doctest::Approx(1.0));
    CHECK(h32.diag[2] == doctest::Approx(4.0));

    const auto h21 = canonical_metric({2, Cplx(1.0, 0.0)});
    CHECK(h21.diag == std::vector<double>{1.0, 1.0});

    // The eigenbasis is orthogonal under the canonical metric with common
    // norm^2 r |alpha|^{-(r-1)}.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const CyclicFiber fiber{2 + static_cast<int>(rng() % 5), Cplx(u(rng), u(rng))};
        if (std::abs(fiber.alpha) < 0.1) continue;
        const auto h = canonical_metric(fiber);
        const CMatrix G = v_gram(h, fiber);
        const double b = fiber.r * std::pow(std::abs(fiber.alpha), -(fiber.r - 1));
        for (int i = 0; i < fiber.r; ++i)
            for (int j = 0; j < fiber.r; ++j)
                CHECK(std::abs(G[i][j] - (i == j ? Cplx(b) : Cplx(0.0))) <= 1e-12 * b);
    }
}

TEST_CASE("eigenbasis Gram of a stretched metric") {
    const CyclicFiber fiber{2, Cplx(1.0, 0.0)};
    const GInvariantMetric h{{4.0, 0.25}};
    const CMatrix G = v_gram(h, fiber);
    CHECK(G[0][0].real() == doctest::Approx(4.25));
    CHECK(G[1][1].real() == doctest::Approx(4.25));
    CHECK(G[0][1].real() == doctest::Approx(3.75));
    CHECK(b_of_h(h, fiber) == doctest::Approx(4.25));
}

TEST_CASE("diagonal reconstruction identity") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 5);
        const CyclicFiber fiber{r, std::polar(0.5 + u(rng) + 0.9, u(rng))};
        GInvariantMetric h;
        double logsum = 0.0;
        for (int j = 0; j < r; ++j) {
            h.diag.push_back(std::exp(u(rng)));
            logsum += std::log(h.diag.back());
        }
        for (double& d : h.diag) d *= std::exp(-logsum / r);
        h.validate();
        CHECK(reconstruction_residual(h, fiber) <= 1e-12);
        CHECK(b_of_h(h, fiber) > 0.0);
    }
}

TEST_CASE("near-orthogonality controls the diagonal") {
    const CyclicFiber fiber{2, Cplx(1.0, 0.0)};

    const auto exact = check_eps_orthogonality(canonical_metric(fiber), fiber, 0.1, 0.5);
    CHECK(exact.applicable);
    CHECK(exact.bound_holds);
    CHECK(exact.lhs_max <= 1e-14);

    const GInvariantMetric near{{std::exp(0.01), std::exp(-0.01)}};
    const CMatrix G = v_gram(near, fiber);
    const double eps = std::abs(G[0][1]) / b_of_h(near, fiber) + 1e-12;
    const auto rep = check_eps_orthogonality(near, fiber, eps, 0.5);
    CHECK(rep.applicable);
    CHECK(rep.bound_holds);

    // Hypothesis failure is reported, not asserted.
    const GInvariantMetric far{{std::exp(2.0), std::exp(-2.0)}};
    CHECK(!check_eps_orthogonality(far, fiber, 1e-6, 0.5).applicable);
}

TEST_CASE("operator norm and basis-vector bounds") {
    const CyclicFiber fiber{3, Cplx(1.3, 0.4)};
    const auto hc = canonical_metric(fiber);
    // f is normal under the canonical metric, so its spectral norm is |alpha|.
    CHECK(f_norm(hc, fiber) == doctest::Approx(std::abs(fiber.alpha)));
    CHECK(normality_defect(hc, fiber) <= 1e-12);

    const auto rep = norm_bounds(hc, fiber, std::sqrt(3.0) * std::abs(fiber.alpha));
    CHECK(rep.applicable);
    CHECK(rep.bounds_hold);

    const CyclicFiber f2{2, Cplx(1.0, 0.0)};
    const GInvariantMetric stretched{{4.0, 0.25}};
    const double C = f_norm(stretched, f2);
    CHECK(C == doctest::Approx(4.0)); // max column weight sqrt(h_0/h_1) = 4
    CHECK(norm_bounds(stretched, f2, C).bounds_hold);
    CHECK(ratio_bounds(stretched, canonical_metric(f2), f2, C));
}

TEST_CASE("metric validation") {
    GInvariantMetric bad{{2.0, 1.0}}; // determinant != 1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    GInvariantMetric neg{{-1.0, -1.0}};
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}
