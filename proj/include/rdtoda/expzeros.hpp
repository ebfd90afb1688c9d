#ifndef RDTODA_EXPZEROS_HPP
#define RDTODA_EXPZEROS_HPP

#include <complex>
#include <vector>

namespace rdtoda {

/// Finite exponential sum F(zeta) = sum_k a_k e^{i c_k zeta} with strictly
/// increasing real frequencies and nonzero coefficients, n = #terms - 1 >= 1.
struct ExpSum {
    std::vector<double> c;
    std::vector<std::complex<double>> a;

    int n() const { return static_cast<int>(c.size()) - 1; }
    void validate() const;
    std::complex<double> eval(std::complex<double> zeta) const;
    std::complex<double> deriv(std::complex<double> zeta) const;
};

/// Strip half-height: all zeros satisfy |Im zeta| < L, with an extremal term
/// strictly dominant outside.
double zero_strip(const ExpSum& F);

struct ZeroCount {
    long long count = 0;
    double raw_integral = 0.0; // winding before rounding
    bool perturbed = false;    // endpoints moved off a near-contour zero
    double x1 = 0.0, x2 = 0.0; // endpoints actually used
};

/// Number of zeros (with multiplicity) in the window x1 < Re zeta < x2, by the
/// argument principle over the rectangle of height 2(L+1), adaptive trapezoid
/// refinement until within 0.1 of an integer.
ZeroCount count_zeros(const ExpSum& F, double x1, double x2);

/// Same integral over a circle (multiplicity probing around a cluster).
ZeroCount count_zeros_circle(const ExpSum& F, std::complex<double> center, double radius);

struct DensityReport {
    long long count = 0;
    double lo = 0.0, hi = 0.0; // -+3n + span * length / (2 pi)
    bool pass = false;
};

/// Zero-density bound with the relaxed +-3n constants valid for arbitrary
/// window endpoints.
DensityReport verify_density_bound(const ExpSum& F, double x1, double x2);

} // namespace rdtoda

#endif
