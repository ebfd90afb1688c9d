#include "rdtoda/rdiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdtoda {

namespace {

Complex pow_principal(Complex z, const Rational& e) {
    if (e.num == 0) return Complex(1.0, 0.0);
    if (e.den == 1) {
        // Exact integer power by repeated squaring to avoid log-branch noise.
        long long n = e.num;
        bool inv = n < 0;
        if (inv) n = -n;
        Complex base = z, acc(1.0, 0.0);
        while (n > 0) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return inv ? Complex(1.0, 0.0) / acc : acc;
    }
    return std::exp(e.value() * std::log(z)); // principal branch
}

} // namespace

ExpMonomialSum::ExpMonomialSum(std::vector<Term> t) {
    for (const auto& term : t) add_term(term.exponent, term.coeff);
}

void ExpMonomialSum::add_term(const Rational& e, Complex c) {
    if (c == Complex(0.0, 0.0)) return;
    auto it = std::lower_bound(terms.begin(), terms.end(), e,
                               [](const Term& t, const Rational& x) { return x < t.exponent; });
    if (it != terms.end() && it->exponent == e) {
        it->coeff += c;
        if (it->coeff == Complex(0.0, 0.0)) terms.erase(it);
    } else {
        terms.insert(it, Term{e, c});
    }
}

Complex ExpMonomialSum::evaluate(Complex z) const {
    Complex acc(0.0, 0.0);
    for (const auto& t : terms) acc += t.coeff * pow_principal(z, t.exponent);
    return acc;
}

ExpMonomialSum operator+(const ExpMonomialSum& a, const ExpMonomialSum& b) {
    ExpMonomialSum out = a;
    for (const auto& t : b.terms) out.add_term(t.exponent, t.coeff);
    return out;
}

ExpMonomialSum operator-(const ExpMonomialSum& a, const ExpMonomialSum& b) {
    ExpMonomialSum out = a;
    for (const auto& t : b.terms) out.add_term(t.exponent, -t.coeff);
    return out;
}

ExpMonomialSum ExpMonomialSum::operator-() const {
    ExpMonomialSum out;
    out.terms = terms;
    for (auto& t : out.terms) t.coeff = -t.coeff;
    return out;
}

bool operator==(const ExpMonomialSum& a, const ExpMonomialSum& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (a.terms[i].exponent != b.terms[i].exponent) return false;
        if (a.terms[i].coeff != b.terms[i].coeff) return false;
    }
    return true;
}

ExpMonomialSum ExpMonomialSum::inverted() const {
    ExpMonomialSum out;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it)
        out.terms.push_back(Term{-it->exponent, it->coeff});
    return out;
}

ExpMonomialSum ExpMonomialSum::shifted(const Rational& e) const {
    ExpMonomialSum out = *this;
    for (auto& t : out.terms) t.exponent = t.exponent + e;
    return out;
}

ExpMonomialSum ExpMonomialSum::scaled(Complex c) const {
    ExpMonomialSum out;
    if (c == Complex(0.0, 0.0)) return out;
    out.terms = terms;
    for (auto& t : out.terms) t.coeff *= c;
    return out;
}

void RDifferential::validate() const {
    if (rank < 2) throw std::invalid_argument("RDifferential: rank must be >= 2");
    if (terms.empty() && !airy_preset)
        throw std::invalid_argument("RDifferential: at least one term required");
    for (const auto& t : terms) {
        for (const auto& e : t.exp_arg.terms) {
            if (e.exponent.num == 0)
                throw std::invalid_argument("RDifferential: exp_arg exponents must be nonzero");
            const bool neg = e.exponent < Rational(0);
            if (puncture == Puncture::ZERO && !neg)
                throw std::invalid_argument("RDifferential: exp_arg exponents must be negative at z=0");
            if (puncture == Puncture::INFINITY_ && neg)
                throw std::invalid_argument("RDifferential: exp_arg exponents must be positive at z=inf");
        }
        for (const auto& e : t.poly.terms) {
            if (e.exponent.den != 1)
                throw std::invalid_argument("RDifferential: poly exponents must be integers");
        }
    }
}

EvalResult evaluate(const RDifferential& q, Complex z) {
    EvalResult out{Complex(0.0, 0.0), false};
    for (const auto& t : q.terms) {
        Complex a = t.exp_arg.evaluate(z);
        if (a.real() > 700.0) {
            out.overflow = true;
            a = Complex(700.0, a.imag());
        }
        out.value += t.poly.evaluate(z) * std::exp(a);
    }
    return out;
}

LocalForm local_form(const RDifferential& q) {
    for (const auto& t : q.terms) {
        if (!t.exp_arg.empty()) return LocalForm{false, 0, Complex(0.0, 0.0)};
    }
    RDifferential p = q;
    if (p.puncture == Puncture::INFINITY_) p = invert_chart(p);
    p = convert_frame(p, Frame::DZ_OVER_Z);
    // Combine coefficients across (exp-free) terms into one Laurent polynomial.
    ExpMonomialSum poly;
    for (const auto& t : p.terms) poly = poly + t.poly;
    if (poly.empty()) throw std::invalid_argument("local_form: q is identically zero");
    const auto& low = poly.bottom(); // lowest exponent dominates as z -> 0
    return LocalForm{true, low.exponent.num, low.coeff};
}

RDifferential convert_frame(const RDifferential& q, Frame target) {
    if (q.frame == target) return q;
    RDifferential out = q;
    out.frame = target;
    // (dz)^r = z^r (dz/z)^r: coefficients against (dz/z)^r pick up z^{+r}.
    const Rational shift(target == Frame::DZ_OVER_Z ? q.rank : -q.rank);
    for (auto& t : out.terms) t.poly = t.poly.shifted(shift);
    return out;
}

RDifferential invert_chart(const RDifferential& q) {
    RDifferential p = convert_frame(q, Frame::DZ);
    RDifferential out;
    out.rank = p.rank;
    out.frame = Frame::DZ;
    out.puncture = (p.puncture == Puncture::INFINITY_) ? Puncture::ZERO : Puncture::INFINITY_;
    // z = 1/w, (dz)^r = (-1)^r w^{-2r} (dw)^r.
    const Complex sign((p.rank % 2 == 0) ? 1.0 : -1.0, 0.0);
    for (const auto& t : p.terms) {
        RDifferential::QTerm nt;
        nt.poly = t.poly.inverted().shifted(Rational(-2 * p.rank)).scaled(sign);
        nt.exp_arg = t.exp_arg.inverted();
        out.terms.push_back(nt);
    }
    return out;
}

RDifferential airy_preset() {
    RDifferential q;
    q.rank = 2;
    q.puncture = Puncture::INFINITY_;
    q.frame = Frame::DZ;
    q.airy_preset = true;
    return q;
}

} // namespace rdtoda
