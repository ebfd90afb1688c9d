#ifndef RDTODA_WEIGHTS_HPP
#define RDTODA_WEIGHTS_HPP

#include <vector>

#include "rdtoda/parabolic.hpp"
#include "rdtoda/toda.hpp"

namespace rdtoda {

/// Regression result against the asymptotic templates: per-index weight
/// estimates before and after projection, real-valued log-correction
/// estimates, and the structurally rounded integer vector.
struct WeightFit {
    bool pole = true; // pole fit (b) vs. special-interval fit (a)
    int r = 0;
    int m = 1;
    std::vector<double> raw;       // slope-read weights before projection
    std::vector<double> projected; // polytope member
    std::vector<double> khat_real; // log-term coefficients as fitted
    KVector k;                     // block-rounded from the projected weights
    std::vector<double> samples;   // s values (pole) or R values (special)
    double max_fit_residual = 0.0;
    double condition = 0.0;
};

/// Fit circle averages M_i(s) of a LOG_POLAR state against
/// M_i(s) = -(2 b_i + r + 1) s + k_i log(-2s) + const
/// (the chart-corrected form of the pole asymptotics) over the basis
/// {1, s, log(-2s)}; m is the pole order of q used for polytope membership.
WeightFit extract_pole_weights(const TodaState& state, const std::vector<double>& radii,
                               int m);

/// Fit samples of a CARTESIAN strip state along the central column against
/// w_i = 2 a_i R + k_i log(R + 2) + const with R = y, over {1, R, log(R+2)}.
WeightFit extract_special_weights(const TodaState& state, const std::vector<double>& yvals);

struct WeightCompare {
    bool pass = false;
    bool weights_pass = false;
    bool k_pass = false;
    double max_weight_dev = 0.0;
    long long max_k_dev = 0;
};

WeightCompare compare_weights(const std::vector<double>& prescribed, const KVector& k_prescribed,
                              const WeightFit& fit, double tol_w);

} // namespace rdtoda

#endif
