#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rdtoda/rdiff.hpp"

using namespace rdtoda;

namespace {

ExpMonomialSum mono(const Rational& e, Complex c) {
    ExpMonomialSum s;
    s.add_term(e, c);
    return s;
}

RDifferential single_term(int rank, Puncture p, Frame fr, ExpMonomialSum poly,
                          ExpMonomialSum exp_arg = {}) {
    RDifferential q;
    q.rank = rank;
    q.puncture = p;
    q.frame = fr;
    q.terms.push_back({std::move(poly), std::move(exp_arg)});
    q.validate();
    return q;
}

} // namespace

TEST_CASE("evaluate constant differential") {
    const auto q = single_term(3, Puncture::INFINITY_, Frame::DZ, mono(Rational(0), 1.0));
    CHECK(evaluate(q, Complex(0.7, -2.1)).value == Complex(1.0, 0.0));
    CHECK(!evaluate(q, Complex(5.0, 0.0)).overflow);
}

TEST_CASE("evaluate polynomial times essential factor") {
    // z e^{1/z} (dz)^2 at z = 1 -> e.
    const auto q = single_term(2, Puncture::ZERO, Frame::DZ, mono(Rational(1), 1.0),
                               mono(Rational(-1), 1.0));
    CHECK(evaluate(q, Complex(1.0, 0.0)).value.real() == doctest::Approx(std::exp(1.0)));
    CHECK(evaluate(q, Complex(1.0, 0.0)).value.imag() == doctest::Approx(0.0));
}

TEST_CASE("evaluate pure exponential at infinity") {
    // e^{iz} (dz)^3 at z = pi -> -1.
    const auto q = single_term(3, Puncture::INFINITY_, Frame::DZ, mono(Rational(0), 1.0),
                               mono(Rational(1), Complex(0.0, 1.0)));
    const Complex v = evaluate(q, Complex(M_PI, 0.0)).value;
    CHECK(v.real() == doctest::Approx(-1.0));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("evaluate flags overflowing exponent") {
    const auto q = single_term(2, Puncture::ZERO, Frame::DZ, mono(Rational(0), 1.0),
                               mono(Rational(-1), 1.0));
    CHECK(evaluate(q, Complex(1e-6, 0.0)).overflow);
}

TEST_CASE("local form of a monomial") {
    const auto q = single_term(2, Puncture::ZERO, Frame::DZ_OVER_Z, mono(Rational(3), 1.0));
    const LocalForm lf = local_form(q);
    CHECK(lf.meromorphic);
    CHECK(lf.m_P == 3);
    CHECK(lf.alpha0 == Complex(1.0, 0.0));
}

TEST_CASE("local form with an exponential factor is not meromorphic") {
    const auto q = single_term(2, Puncture::INFINITY_, Frame::DZ, mono(Rational(0), 1.0),
                               mono(Rational(1), Complex(0.0, 1.0)));
    CHECK(!local_form(q).meromorphic);
}

TEST_CASE("local form reads the exponent in the dz/z frame") {
    // z^{-2} (dz)^2 = z^0 (dz/z)^2.
    const auto q = single_term(2, Puncture::ZERO, Frame::DZ, mono(Rational(-2), 1.0));
    const LocalForm lf = local_form(q);
    CHECK(lf.meromorphic);
    CHECK(lf.m_P == 0);
}

TEST_CASE("frame conversion shifts exponents by the rank") {
    const auto q = single_term(2, Puncture::ZERO, Frame::DZ_OVER_Z, mono(Rational(1), 1.0));
    const RDifferential c = convert_frame(q, Frame::DZ);
    REQUIRE(c.terms.size() == 1);
    REQUIRE(c.terms[0].poly.size() == 1);
    CHECK(c.terms[0].poly.top().exponent == Rational(-1));
}

TEST_CASE("identity frame conversion returns an equal structure") {
    const auto q = single_term(2, Puncture::ZERO, Frame::DZ, mono(Rational(2), Complex(0, 1)));
    const RDifferential c = convert_frame(q, Frame::DZ);
    REQUIRE(c.terms.size() == 1);
    CHECK(c.terms[0].poly == q.terms[0].poly);
    CHECK(c.frame == Frame::DZ);
}

TEST_CASE("frame conversion preserves the differential pointwise") {
    const auto q = single_term(3, Puncture::ZERO, Frame::DZ, mono(Rational(2), Complex(1.5, 0.5)),
                               mono(Rational(-1), Complex(0.0, 0.3)));
    const RDifferential c = convert_frame(q, Frame::DZ_OVER_Z);
    for (const Complex z : {Complex(0.4, 0.2), Complex(-0.3, 0.7), Complex(1.1, -0.9)}) {
        const Complex lhs = evaluate(c, z).value;
        const Complex rhs = evaluate(q, z).value * std::pow(z, 3);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("chart inversion of an exponential differential") {
    // e^{iz}(dz)^2 -> w^{-4} e^{i/w} (dw)^2, checked pointwise.
    const auto q = single_term(2, Puncture::INFINITY_, Frame::DZ, mono(Rational(0), 1.0),
                               mono(Rational(1), Complex(0.0, 1.0)));
    const RDifferential inv = invert_chart(q);
    CHECK(inv.puncture == Puncture::ZERO);
    const Complex w(0.3, 0.1);
    const Complex expect = std::exp(Complex(0.0, 1.0) / w) / std::pow(w, 4);
    const Complex got = evaluate(inv, w).value;
    CHECK(std::abs(got - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("chart inversion of polynomial differentials") {
    const auto c2 = single_term(2, Puncture::INFINITY_, Frame::DZ, mono(Rational(0), 1.0));
    const RDifferential ic2 = invert_chart(c2);
    REQUIRE(ic2.terms.size() == 1);
    CHECK(ic2.terms[0].poly.top().exponent == Rational(-4));

    const auto z2 = single_term(2, Puncture::INFINITY_, Frame::DZ, mono(Rational(1), 1.0));
    const RDifferential iz2 = invert_chart(z2);
    CHECK(iz2.terms[0].poly.top().exponent == Rational(-5));
}

TEST_CASE("monomial sums keep terms sorted and merged") {
    ExpMonomialSum s;
    s.add_term(Rational(1), 1.0);
    s.add_term(Rational(3), 2.0);
    s.add_term(Rational(1), Complex(-1.0, 0.0)); // cancels the first term
    REQUIRE(s.size() == 1);
    CHECK(s.top().exponent == Rational(3));
    CHECK((s - s).empty());
    CHECK(s.inverted().top().exponent == Rational(-3));
    CHECK(s.shifted(Rational(1, 2)).top().exponent == Rational(7, 2));
}

TEST_CASE("validation rejects broken invariants") {
    RDifferential q;
    q.rank = 1;
    q.terms.push_back({mono(Rational(0), 1.0), {}});
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);

    RDifferential p;
    p.rank = 2;
    p.puncture = Puncture::ZERO;
    p.terms.push_back({mono(Rational(0), 1.0), mono(Rational(1), 1.0)}); // wrong sign at 0
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
