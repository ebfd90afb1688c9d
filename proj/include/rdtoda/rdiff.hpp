#ifndef RDTODA_RDIFF_HPP
#define RDTODA_RDIFF_HPP

#include <complex>
#include <optional>
#include <vector>

#include "rdtoda/rational.hpp"

namespace rdtoda {

using Complex = std::complex<double>;

/// Finite sum of monomials c * z^e with exact rational exponents, kept sorted
/// by strictly decreasing exponent with no zero coefficients.
struct ExpMonomialSum {
    struct Term {
        Rational exponent;
        Complex coeff;
    };
    std::vector<Term> terms;

    ExpMonomialSum() = default;
    explicit ExpMonomialSum(std::vector<Term> t);

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    void add_term(const Rational& e, Complex c);

    /// Largest exponent present (requires non-empty).
    const Term& top() const { return terms.front(); }
    /// Smallest exponent present (requires non-empty).
    const Term& bottom() const { return terms.back(); }

    Complex evaluate(Complex z) const;

    friend ExpMonomialSum operator+(const ExpMonomialSum& a, const ExpMonomialSum& b);
    friend ExpMonomialSum operator-(const ExpMonomialSum& a, const ExpMonomialSum& b);
    ExpMonomialSum operator-() const;
    friend bool operator==(const ExpMonomialSum& a, const ExpMonomialSum& b);

    /// Substitute z -> 1/z (negate all exponents).
    ExpMonomialSum inverted() const;
    /// Multiply by z^e.
    ExpMonomialSum shifted(const Rational& e) const;
    /// Multiply by a scalar.
    ExpMonomialSum scaled(Complex c) const;
};

enum class Puncture { ZERO, INFINITY_ };
enum class Frame { DZ, DZ_OVER_Z };

/// An r-differential q = sum_t poly_t(z) * exp(exp_arg_t(z)) * frame^r,
/// anchored at the puncture z = 0 or z = infinity.
struct RDifferential {
    int rank = 2;
    Puncture puncture = Puncture::ZERO;
    Frame frame = Frame::DZ;
    struct QTerm {
        ExpMonomialSum poly;     // integer exponents (Laurent polynomial)
        ExpMonomialSum exp_arg;  // nonzero exponents; sign matched to puncture
    };
    std::vector<QTerm> terms;
    bool airy_preset = false;

    void validate() const; // throws std::invalid_argument on broken invariants
};

struct EvalResult {
    Complex value;
    bool overflow = false;
};

struct SectorialGrowthData; // defined in growth.hpp

/// Local analytic type at the puncture.
struct LocalForm {
    bool meromorphic = false;
    // Meromorphic case: q = z^{m_P} * alpha0 * (1 + O(z)) * (dz/z)^r at the puncture.
    long long m_P = 0;
    Complex alpha0;
};

EvalResult evaluate(const RDifferential& q, Complex z);
LocalForm local_form(const RDifferential& q);
RDifferential convert_frame(const RDifferential& q, Frame target);
RDifferential invert_chart(const RDifferential& q);

/// The Airy differential as a preset carrying its sectorial growth data
/// (single sector |arg z| < pi, growth exponent -(2/3) z^{3/2}, a = -1/4, j = 0).
RDifferential airy_preset();

} // namespace rdtoda

#endif
