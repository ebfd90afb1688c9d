#ifndef RDTODA_ANGLE_HPP
#define RDTODA_ANGLE_HPP

#include <cmath>
#include <complex>

#include "rdtoda/rational.hpp"

namespace rdtoda {

/// An angle split as (rational multiple of pi) + (transcendental remainder).
/// Angles produced from structural data (sector boundaries, turning directions
/// of axis-aligned coefficients) carry remainder == 0 and compare exactly;
/// angles involving arg() of a generic complex coefficient carry the arg in
/// the remainder and compare within a tolerance band.
struct Angle {
    Rational pi_coeff;   // contribution pi_coeff * pi
    double remainder = 0.0;

    Angle() = default;
    explicit Angle(Rational pc, double rem = 0.0) : pi_coeff(pc), remainder(rem) {}

    double value() const { return pi_coeff.value() * M_PI + remainder; }

    bool exact() const { return remainder == 0.0; }

    /// Shift by an even integer multiple of pi so that value() lands in [0, 2pi).
    Angle normalized() const {
        Angle a = *this;
        // Reduce the rational part mod 2 first to keep the floating value small.
        std::int64_t whole = rational_floor(a.pi_coeff / Rational(2));
        a.pi_coeff = a.pi_coeff - Rational(2 * whole);
        while (a.value() < 0.0) a.pi_coeff = a.pi_coeff + Rational(2);
        while (a.value() >= 2.0 * M_PI - 1e-15) a.pi_coeff = a.pi_coeff - Rational(2);
        if (a.value() < 0.0) a.pi_coeff = a.pi_coeff + Rational(2);
        return a;
    }

    friend Angle operator+(const Angle& a, const Angle& b) {
        return Angle(a.pi_coeff + b.pi_coeff, a.remainder + b.remainder);
    }
    friend Angle operator-(const Angle& a, const Angle& b) {
        return Angle(a.pi_coeff - b.pi_coeff, a.remainder - b.remainder);
    }
    friend Angle operator*(const Rational& c, const Angle& a) {
        return Angle(c * a.pi_coeff, c.value() * a.remainder);
    }
    friend Angle operator/(const Angle& a, const Rational& c) {
        return Angle(a.pi_coeff / c, a.remainder / c.value());
    }

    /// Exact equality when both remainders coincide bit-for-bit (the common
    /// case: both derived from the same coefficient), else a 1e-12 band.
    bool same_as(const Angle& o) const {
        if (pi_coeff == o.pi_coeff && remainder == o.remainder) return true;
        return std::abs(value() - o.value()) <= 1e-12;
    }
};

/// Decompose arg(c) of a nonzero complex number as an Angle. Axis-aligned
/// coefficients (purely real or purely imaginary) yield exact multiples of pi.
inline Angle exact_arg(std::complex<double> c) {
    if (c.imag() == 0.0) {
        return Angle(Rational(c.real() > 0.0 ? 0 : 1));
    }
    if (c.real() == 0.0) {
        return Angle(Rational(c.imag() > 0.0 ? 1 : -1, 2));
    }
    return Angle(Rational(0), std::arg(c));
}

/// Sign of cos(angle) with exact zero detection for exact angles.
/// Returns +1, 0, or -1; the numeric branch treats |cos| <= 1e-12 as zero
/// after reducing the argument to keep cancellation small.
inline int sign_cos(const Angle& psi) {
    Angle a = psi.normalized();
    if (a.exact()) {
        const Rational r = a.pi_coeff; // in [0,2)
        if (r == Rational(1, 2) || r == Rational(3, 2)) return 0;
        return (r < Rational(1, 2) || r > Rational(3, 2)) ? +1 : -1;
    }
    const long double x = static_cast<long double>(a.pi_coeff.value()) * M_PIl +
                          static_cast<long double>(a.remainder);
    const long double v = cosl(x);
    if (fabsl(v) <= 1e-12L) return 0;
    return v > 0 ? +1 : -1;
}

} // namespace rdtoda

#endif
