#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rdtoda/parabolic.hpp"

using namespace rdtoda;

TEST_CASE("polytope membership") {
    CHECK(is_member({0.5, 0.0, -0.5}, 3, PolytopeKind::P));
    CHECK(is_member({0.5, 0.0, -0.5}, 3, PolytopeKind::P_R));
    CHECK(is_member({-1.0, -2.0}, 2, PolytopeKind::P_QP, 1));
    CHECK(!is_member({0.5, 0.5, -1.0}, 3, PolytopeKind::P)); // last < first - 1
    CHECK(!is_member({0.5, 0.1, -0.6}, 3, PolytopeKind::P)); // sum != 0
}

TEST_CASE("descent positions") {
    CHECK(nu_indices({0.0, 0.0, 0.0}).empty());
    CHECK(nu_indices({1.0 / 3, 0.0, -1.0 / 3}) == std::vector<int>{1, 2});
    CHECK(nu_indices({1.0 / 3, 1.0 / 3, -2.0 / 3}) == std::vector<int>{2});
}

TEST_CASE("log-correction vector by the block rule") {
    // Single block of three: k_i = r + 1 - 2i.
    CHECK(k_vector(AVector{3, {0.0, 0.0, 0.0}}).k == std::vector<long long>{2, 0, -2});
    // Three singleton blocks, no wrap.
    CHECK(k_vector(AVector{3, {1.0 / 3, 0.0, -1.0 / 3}}).k ==
          std::vector<long long>{0, 0, 0});
    // Wrap equality a_r = a_1 - 1 merges the outer blocks cyclically.
    CHECK(k_vector(AVector{3, {1.0 / 3, 1.0 / 3, -2.0 / 3}}).k ==
          std::vector<long long>{0, -2, 2});
}

TEST_CASE("block rule matches the filtration oracle and the closed form") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> twelfth(-12, 12);
    int tested = 0;
    while (tested < 200) {
        const int r = 2 + static_cast<int>(rng() % 4);
        std::vector<double> a(r);
        double sum = 0.0;
        for (int i = 0; i < r; ++i) sum += (a[i] = twelfth(rng) / 12.0);
        for (int i = 0; i < r; ++i) a[i] -= sum / r;
        if (!is_member(a, r, PolytopeKind::P)) continue;
        ++tested;
        const KVector blocks = k_vector(a, 1.0);
        CHECK(blocks.k == weight_filtration_oracle(a, 1.0).k);
        long long total = 0;
        for (long long k : blocks.k) total += k;
        CHECK(total == 0);
        // Closed form applies only off the wrap face.
        if (a[r - 1] > a[0] - 1.0 + 1e-9)
            CHECK(blocks.k == printed_formula_nonwrap(a).k);
    }
}

TEST_CASE("pole-weight to normalized-weight conversion") {
    const AVector tie = convert_b_to_a(BVector{2, 2, {-1.5, -1.5}});
    CHECK(tie.a[0] == doctest::Approx(0.0));
    CHECK(tie.a[1] == doctest::Approx(0.0));

    const AVector split = convert_b_to_a(BVector{2, 2, {-1.0, -2.0}});
    CHECK(split.a[0] == doctest::Approx(0.25));
    CHECK(split.a[1] == doctest::Approx(-0.25));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 4);
        std::vector<double> a(r);
        double sum = 0.0;
        for (int i = 0; i < r; ++i) sum += (a[i] = u(rng));
        std::sort(a.begin(), a.end(), std::greater<>());
        for (int i = 0; i < r; ++i) a[i] -= sum / r;
        if (!is_member(a, r, PolytopeKind::P)) continue;
        const BVector b = convert_a_to_b(AVector{r, a});
        const AVector back = convert_b_to_a(b);
        for (int i = 0; i < r; ++i) CHECK(back.a[i] == doctest::Approx(a[i]));
        CHECK(k_vector(AVector{r, a}).k == k_vector(b).k);
    }
}

TEST_CASE("distinguished weight tuples") {
    const auto complete = distinguished_weights(2, 1, Distinguished::COMPLETE);
    CHECK(complete.b.b == std::vector<double>{-1.5, -1.5});
    CHECK(complete.a.a == std::vector<double>{0.0, 0.0});

    // At r = 2, m = 1 the q-dominated weights coincide with the complete ones.
    const auto dom21 = distinguished_weights(2, 1, Distinguished::Q_DOMINATED);
    CHECK(dom21.b.b[0] == doctest::Approx(-1.5));
    CHECK(dom21.b.b[1] == doctest::Approx(-1.5));

    const auto dom3 = distinguished_weights(3, 1, Distinguished::Q_DOMINATED);
    CHECK(dom3.a.a[0] == doctest::Approx(1.0 / 3));
    CHECK(dom3.a.a[1] == doctest::Approx(0.0));
    CHECK(dom3.a.a[2] == doctest::Approx(-1.0 / 3));
}

TEST_CASE("projection onto the polytope") {
    // Members are fixed points.
    const std::vector<double> member{0.25, -0.25};
    CHECK(project_to_polytope(member, 2, PolytopeKind::P) == member);

    // Only the trace constraint is active.
    const auto p1 = project_to_polytope({0.3, -0.2}, 2, PolytopeKind::P);
    CHECK(p1[0] == doctest::Approx(0.25));
    CHECK(p1[1] == doctest::Approx(-0.25));

    // At r = 2 any spread beyond 1 hits the wrap face a_2 = a_1 - 1.
    const auto p3 = project_to_polytope({0.6, -0.5}, 2, PolytopeKind::P);
    CHECK(p3[0] == doctest::Approx(0.5));
    CHECK(p3[1] == doctest::Approx(-0.5));

    // After recentring, the wrap constraint a_2 >= a_1 - 1 binds.
    const auto p2 = project_to_polytope({0.2, -1.0}, 2, PolytopeKind::P);
    CHECK(p2[0] == doctest::Approx(0.5));
    CHECK(p2[1] == doctest::Approx(-0.5));

    // Projected points are members.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw{u(rng), u(rng), u(rng)};
        CHECK(is_member(project_to_polytope(raw, 3, PolytopeKind::P), 3, PolytopeKind::P));
        CHECK(is_member(project_to_polytope(raw, 3, PolytopeKind::P_QP, 2), 3,
                        PolytopeKind::P_QP, 2));
    }
}
