#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "rdtoda/json_io.hpp"

using namespace rdtoda;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("rdtoda_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("fixed-width double rendering round trips") {
    for (double v : {0.0, 1.0, -1.5, M_PI, 1e-17, 6.02214076e23, -0.1}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
        CHECK(format_double(v) == s); // stable
    }
}

TEST_CASE("differential JSON round trip") {
    const Json j = {{"rank", 2},
                    {"puncture", "infinity"},
                    {"frame", "dz"},
                    {"terms", Json::array({{{"poly", Json::array({{0, 1, 1.0, 0.0}})},
                                            {"exp_arg", Json::array({{1, 1, 0.0, 1.0}})}}})}};
    const RDifferential q = rdiff_from_json(j);
    CHECK(q.rank == 2);
    CHECK(q.puncture == Puncture::INFINITY_);
    CHECK(q.terms[0].exp_arg.top().coeff == Complex(0.0, 1.0));

    const RDifferential back = rdiff_from_json(rdiff_to_json(q));
    const Complex z(0.7, 0.4);
    CHECK(std::abs(evaluate(back, z).value - evaluate(q, z).value) <= 1e-15);

    CHECK(rdiff_from_json({{"preset", "airy"}}).airy_preset);
    CHECK_THROWS(rdiff_from_json({{"preset", "bessel"}}));
}

TEST_CASE("grid JSON parsing") {
    const ChartGrid ann = grid_from_json(
        {{"chart", "log_polar"}, {"ranges", {-3.0, -0.7}}, {"nodes", {32, 16}}});
    CHECK(ann.chart == Chart::LOG_POLAR);
    CHECK(ann.x0 == -3.0);
    CHECK(ann.nx == 32);

    const ChartGrid rect = grid_from_json(
        {{"chart", "cartesian"}, {"ranges", {0.0, 1.0, 2.0, 3.0}}, {"nodes", {8, 9}}});
    CHECK(rect.chart == Chart::CARTESIAN);
    CHECK(rect.y1 == 3.0);
    CHECK_THROWS(grid_from_json({{"chart", "polar"}, {"ranges", {0, 1}}, {"nodes", {8, 8}}}));
}

TEST_CASE("state CSV round trip is exact and deterministic") {
    TempDir tmp;
    ChartGrid g;
    g.chart = Chart::LOG_POLAR;
    g.x0 = -3.0;
    g.x1 = -0.7;
    g.nx = 9;
    g.ny = 8;
    g.validate();

    TodaState s;
    s.r = 2;
    s.grid = g;
    s.qnorm.assign(g.nnodes(), 0.0);
    s.qflag.assign(g.nnodes(), 0);
    s.w.assign(2, Field(g.nnodes()));
    for (int i = 0; i < g.nnodes(); ++i) {
        s.w[0][i] = std::sin(0.1 * i) * M_PI;
        s.w[1][i] = -s.w[0][i];
        s.qnorm[i] = std::abs(std::cos(0.2 * i));
    }

    const std::string a = tmp.file("a.csv"), b = tmp.file("b.csv");
    write_state_csv(s, a);
    write_state_csv(s, b);
    CHECK(file_hash(a) == file_hash(b)); // byte identical across writes

    const TodaState r = read_state_csv(a);
    CHECK(r.r == 2);
    CHECK(r.grid.nx == g.nx);
    CHECK(r.grid.x0 == g.x0);
    for (int i = 0; i < g.nnodes(); ++i) {
        CHECK(r.w[0][i] == s.w[0][i]);
        CHECK(r.qnorm[i] == s.qnorm[i]);
    }

    write_state_csv(r, b);
    CHECK(file_hash(a) == file_hash(b)); // read-write fixed point
}

TEST_CASE("weight and exponential-sum JSON") {
    const WeightSpec ws =
        weights_from_json({{"kind", "b"}, {"r", 2}, {"m", 1}, {"values", {-1.0, -2.0}}});
    CHECK(ws.pole);
    CHECK(ws.values == std::vector<double>{-1.0, -2.0});

    const ExpSum F = expsum_from_json(
        {{"terms", Json::array({{0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}})}});
    CHECK(F.n() == 1);
    CHECK(F.c == std::vector<double>{0.0, 1.0});

    WeightFit fit;
    fit.pole = true;
    fit.r = 2;
    fit.m = 1;
    fit.raw = {-1.01, -1.99};
    fit.projected = {-1.0, -2.0};
    fit.khat_real = {0.01, -0.01};
    fit.k.k = {0, 0};
    const Json out = weight_fit_to_json(fit);
    CHECK(out.at("kind") == "b");
    CHECK(out.at("values").size() == 2);
    CHECK(out.at("k") == Json::array({0, 0}));
}
