#include "rdtoda/expzeros.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rdtoda {

using Cx = std::complex<double>;

void ExpSum::validate() const {
    if (c.size() != a.size() || c.size() < 2)
        throw std::invalid_argument("ExpSum: need >= 2 matched (c, a) pairs");
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
        if (!(c[k] < c[k + 1]))
            throw std::invalid_argument("ExpSum: frequencies must strictly increase");
    for (const auto& ak : a)
        if (ak == Cx(0.0, 0.0))
            throw std::invalid_argument("ExpSum: zero coefficient");
}

Cx ExpSum::eval(Cx zeta) const {
    Cx s(0.0, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) s += a[k] * std::exp(Cx(0.0, c[k]) * zeta);
    return s;
}

Cx ExpSum::deriv(Cx zeta) const {
    Cx s(0.0, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k)
        s += a[k] * Cx(0.0, c[k]) * std::exp(Cx(0.0, c[k]) * zeta);
    return s;
}

double zero_strip(const ExpSum& F) {
    F.validate();
    double gap = F.c[1] - F.c[0];
    for (std::size_t k = 1; k + 1 < F.c.size(); ++k) gap = std::min(gap, F.c[k + 1] - F.c[k]);
    double L = 0.0;
    for (std::size_t k : {std::size_t{0}, F.c.size() - 1}) {
        double others = 0.0;
        for (std::size_t j = 0; j < F.a.size(); ++j)
            if (j != k) others += std::abs(F.a[j]);
        L = std::max(L, std::log(others / std::abs(F.a[k])) / gap + 1.0);
    }
    return std::max(L, 0.5);
}

namespace {

/// Trapezoid value of (1/2 pi i) \int F'/F along the polyline through pts
/// (closed: last point should equal first).
double winding_integral(const ExpSum& F, const std::vector<Cx>& pts) {
    Cx acc(0.0, 0.0);
    Cx prev_val = F.deriv(pts[0]) / F.eval(pts[0]);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const Cx cur_val = F.deriv(pts[k]) / F.eval(pts[k]);
        acc += 0.5 * (prev_val + cur_val) * (pts[k] - pts[k - 1]);
        prev_val = cur_val;
    }
    return (acc / Cx(0.0, 2.0 * M_PI)).real();
}

std::vector<Cx> rectangle_points(double x1, double x2, double H, std::size_t per_unit) {
    const Cx corners[5] = {Cx(x1, -H), Cx(x2, -H), Cx(x2, H), Cx(x1, H), Cx(x1, -H)};
    std::vector<Cx> pts;
    for (int e = 0; e < 4; ++e) {
        const Cx d = corners[e + 1] - corners[e];
        const std::size_t steps = std::max<std::size_t>(
            8, static_cast<std::size_t>(std::abs(d) * per_unit));
        for (std::size_t s = 0; s < steps; ++s)
            pts.push_back(corners[e] + d * (static_cast<double>(s) / steps));
    }
    pts.push_back(corners[0]);
    return pts;
}

ZeroCount refine_to_integer(const ExpSum& F,
                            const std::function<std::vector<Cx>(std::size_t)>& contour) {
    ZeroCount out;
    std::size_t per_unit = 8;
    for (int attempt = 0; attempt < 12; ++attempt, per_unit *= 2) {
        const double v = winding_integral(F, contour(per_unit));
        const double nearest = std::round(v);
        if (std::abs(v - nearest) < 0.1) {
            out.count = static_cast<long long>(nearest);
            out.raw_integral = v;
            return out;
        }
    }
    throw std::runtime_error("count_zeros: contour integral failed to stabilize");
}

} // namespace

ZeroCount count_zeros(const ExpSum& F, double x1, double x2) {
    F.validate();
    if (!(x1 < x2)) throw std::invalid_argument("count_zeros: x1 < x2 required");
    const double H = zero_strip(F) + 1.0;
    // Keep the vertical contour edges away from zeros.
    double scale = 0.0;
    for (const auto& ak : F.a) scale += std::abs(ak);
    bool perturbed = false;
    for (int tries = 0; tries < 8; ++tries) {
        bool close = false;
        for (double x : {x1, x2}) {
            for (int s = 0; s <= 64; ++s) {
                const double y = -H + 2.0 * H * s / 64.0;
                if (std::abs(F.eval(Cx(x, y))) < 1e-6 * scale) close = true;
            }
        }
        if (!close) break;
        x1 += 1e-3;
        x2 += 1e-3;
        perturbed = true;
    }
    ZeroCount out = refine_to_integer(
        F, [&](std::size_t per_unit) { return rectangle_points(x1, x2, H, per_unit); });
    out.perturbed = perturbed;
    out.x1 = x1;
    out.x2 = x2;
    return out;
}

ZeroCount count_zeros_circle(const ExpSum& F, Cx center, double radius) {
    F.validate();
    ZeroCount out = refine_to_integer(F, [&](std::size_t per_unit) {
        const std::size_t steps =
            std::max<std::size_t>(64, static_cast<std::size_t>(2 * M_PI * radius * per_unit));
        std::vector<Cx> pts;
        for (std::size_t s = 0; s <= steps; ++s) {
            const double t = 2.0 * M_PI * s / steps;
            pts.push_back(center + radius * Cx(std::cos(t), std::sin(t)));
        }
        return pts;
    });
    out.x1 = center.real() - radius;
    out.x2 = center.real() + radius;
    return out;
}

DensityReport verify_density_bound(const ExpSum& F, double x1, double x2) {
    DensityReport rep;
    const ZeroCount zc = count_zeros(F, x1, x2);
    rep.count = zc.count;
    const double span = F.c.back() - F.c.front();
    const double base = span * (zc.x2 - zc.x1) / (2.0 * M_PI);
    rep.lo = -3.0 * F.n() + base;
    rep.hi = 3.0 * F.n() + base;
    rep.pass = rep.count >= rep.lo - 1e-9 && rep.count <= rep.hi + 1e-9;
    return rep;
}

} // namespace rdtoda
