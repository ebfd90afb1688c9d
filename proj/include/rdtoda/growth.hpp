#ifndef RDTODA_GROWTH_HPP
#define RDTODA_GROWTH_HPP

#include <optional>
#include <vector>

#include "rdtoda/angle.hpp"
#include "rdtoda/rdiff.hpp"

namespace rdtoda {

/// Per-direction growth data of a multiple-growth-order function: a list of
/// distinct growth exponents (exp_arg sums) valid on each angular sector.
/// The chart tag records whether directions are read at z=0 (exp_arg exponents
/// negative, growth alpha*z^{-rho}) or z=infinity (positive, alpha*z^{rho}).
struct SectorialGrowthData {
    struct GrowthTerm {
        ExpMonomialSum exp_arg; // empty means the neutral (bounded) part
        double a = 0.0;         // power-law exponent of the prefactor
        int j = 0;              // log-power of the prefactor
    };
    struct Sector {
        Angle lo, hi;           // lo.value() < hi.value(), hi - lo <= 2*pi
        bool full_circle = false;
        std::vector<GrowthTerm> terms;
    };
    Puncture chart = Puncture::ZERO;
    std::vector<Sector> sectors;
};

enum class DirectionKind { SIMPLY_POSITIVE, SIMPLY_NEGATIVE, NEUTRAL, TURNING, NON_SINGLE };

struct DirectionClass {
    Angle theta;
    DirectionKind kind;
    std::optional<ExpMonomialSum> dominant; // absent exactly for NON_SINGLE
};

enum class CompareResult { LESS, GREATER, EQUAL, INCOMPARABLE };

/// Angular interval (theta1, theta1 + pi/rho) on which the dominant growth
/// exponent alpha * z^{-+rho} has strictly negative real part, vanishing
/// exactly at both endpoints.
struct SpecialInterval {
    Angle theta1;
    Rational rho;
    Complex alpha;
    Puncture chart = Puncture::ZERO;

    Angle theta2() const { return theta1 + Angle(Rational(1) / rho); }
};

/// Product decomposition of the solution space attached to q.
struct ModuliDescriptor {
    enum class Kind { UNIQUE, P_FACTOR, P_QP_FACTOR };
    struct Factor {
        Kind kind;
        long long m = 0;                         // P_QP_FACTOR pole order
        std::optional<SpecialInterval> interval; // P_FACTOR provenance
    };
    std::vector<Factor> factors; // UNIQUE appears alone
    bool unique() const {
        return factors.size() == 1 && factors[0].kind == Kind::UNIQUE;
    }
};

/// Sign of the real part of the top growth term of aa at direction theta:
/// sign of Re(alpha_top e^{-i rho theta}) in the z=0 chart (e^{+i rho theta}
/// at z=infinity). Exact when theta is a rational multiple of pi and the top
/// coefficient is axis-aligned.
int leading_sign(const ExpMonomialSum& aa, const Angle& theta, Puncture chart);

CompareResult compare(const ExpMonomialSum& aa, const ExpMonomialSum& bb,
                      const Angle& theta, Puncture chart);

/// Build sectorial growth data from an r-differential (merges terms with
/// equal growth exponents; handles the Airy preset).
SectorialGrowthData growth_data(const RDifferential& q);

DirectionClass classify_direction(const SectorialGrowthData& data, const Angle& theta);

/// All directions where classification is TURNING or NON_SINGLE, sorted.
std::vector<Angle> turning_set(const SectorialGrowthData& data);

std::vector<SpecialInterval> special_intervals(const SectorialGrowthData& data);

ModuliDescriptor classify_moduli(const RDifferential& q);

/// Refined data of q = z^l e^{a(z)} (dz/z)^r with nowhere-vanishing
/// single-term coefficient: (l, pole order m of the exponent, l/m + r, and
/// the set of central directions T).
struct RefinedExponents {
    long long ell = 0;
    long long m = 0;
    Rational d;
    std::vector<Angle> T;
};
RefinedExponents refined_exponents(const RDifferential& q);

} // namespace rdtoda

#endif
