#include "rdtoda/growth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdtoda {

namespace {

/// Dominant growth term of a nonzero exponent sum: (rho, c) with the growth
/// behaving like c * z^{-rho} at z=0 (c * z^{+rho} at z=infinity), rho > 0.
std::pair<Rational, Complex> top_growth(const ExpMonomialSum& aa, Puncture chart) {
    if (aa.empty()) throw std::logic_error("top_growth: empty exponent sum");
    if (chart == Puncture::ZERO) {
        const auto& t = aa.bottom(); // most negative exponent grows fastest
        return {-t.exponent, t.coeff};
    }
    const auto& t = aa.top();
    return {t.exponent, t.coeff};
}

/// Phase whose cosine carries the sign of Re(c z^{-+rho}) along direction
/// theta: arg(c) - rho*theta at z=0, arg(c) + rho*theta at z=infinity.
Angle growth_phase(Complex c, const Rational& rho, const Angle& theta, Puncture chart) {
    const Rational signed_rho = (chart == Puncture::ZERO) ? rho : -rho;
    return exact_arg(c) - signed_rho * theta;
}

bool sector_contains(const SectorialGrowthData::Sector& sec, const Angle& theta) {
    if (sec.full_circle) return true;
    const double lo = sec.lo.value() - 1e-12, hi = sec.hi.value() + 1e-12;
    for (int shift = -1; shift <= 1; ++shift) {
        const double v = theta.value() + 2.0 * M_PI * shift;
        if (v >= lo && v <= hi) return true;
    }
    return false;
}

const SectorialGrowthData::Sector* find_sector(const SectorialGrowthData& data,
                                               const Angle& theta) {
    for (const auto& sec : data.sectors)
        if (sector_contains(sec, theta)) return &sec;
    return nullptr;
}

/// Re-anchor theta (by +-2pi) so its value lies in [lo, lo + 2pi).
Angle anchor_to(const Angle& theta, double lo) {
    Angle a = theta;
    while (a.value() < lo - 1e-12) a.pi_coeff = a.pi_coeff + Rational(2);
    while (a.value() >= lo + 2.0 * M_PI - 1e-12) a.pi_coeff = a.pi_coeff - Rational(2);
    return a;
}

} // namespace

int leading_sign(const ExpMonomialSum& aa, const Angle& theta, Puncture chart) {
    const auto [rho, c] = top_growth(aa, chart);
    return sign_cos(growth_phase(c, rho, theta, chart));
}

CompareResult compare(const ExpMonomialSum& aa, const ExpMonomialSum& bb,
                      const Angle& theta, Puncture chart) {
    if (aa == bb) return CompareResult::EQUAL;
    const ExpMonomialSum diff = bb - aa;
    if (diff.empty()) return CompareResult::EQUAL;
    switch (leading_sign(diff, theta, chart)) {
        case +1: return CompareResult::LESS;
        case -1: return CompareResult::GREATER;
        default: return CompareResult::INCOMPARABLE;
    }
}

SectorialGrowthData growth_data(const RDifferential& q) {
    SectorialGrowthData data;
    if (q.airy_preset) {
        // Single sector |arg z| < pi at infinity; growth exponent -(2/3) z^{3/2},
        // prefactor z^{-1/4} with no log.
        data.chart = Puncture::INFINITY_;
        SectorialGrowthData::Sector sec;
        sec.lo = Angle(Rational(-1));
        sec.hi = Angle(Rational(1));
        SectorialGrowthData::GrowthTerm t;
        t.exp_arg.add_term(Rational(3, 2), Complex(-2.0 / 3.0, 0.0));
        t.a = -0.25;
        t.j = 0;
        sec.terms.push_back(t);
        data.sectors.push_back(sec);
        return data;
    }
    q.validate();
    data.chart = q.puncture;
    SectorialGrowthData::Sector sec;
    sec.lo = Angle(Rational(0));
    sec.hi = Angle(Rational(2));
    sec.full_circle = true;
    // Merge q-terms sharing the same growth exponent; drop exact cancellations.
    std::vector<std::pair<ExpMonomialSum, ExpMonomialSum>> grouped; // (exp_arg, poly)
    for (const auto& t : q.terms) {
        bool merged = false;
        for (auto& g : grouped) {
            if (g.first == t.exp_arg) {
                g.second = g.second + t.poly;
                merged = true;
                break;
            }
        }
        if (!merged) grouped.emplace_back(t.exp_arg, t.poly);
    }
    for (const auto& g : grouped) {
        if (g.second.empty()) continue; // coefficient cancelled identically
        SectorialGrowthData::GrowthTerm t;
        t.exp_arg = g.first;
        t.a = g.second.top().exponent.value();
        t.j = 0;
        sec.terms.push_back(t);
    }
    if (sec.terms.empty())
        throw std::invalid_argument("growth_data: q is identically zero");
    data.sectors.push_back(sec);
    return data;
}

DirectionClass classify_direction(const SectorialGrowthData& data, const Angle& theta) {
    const auto* sec = find_sector(data, theta);
    if (!sec) throw std::invalid_argument("classify_direction: direction not covered");
    std::vector<const ExpMonomialSum*> maximal;
    for (const auto& t : sec->terms) {
        bool dominated = false;
        for (const auto& u : sec->terms) {
            if (&t == &u) continue;
            if (compare(t.exp_arg, u.exp_arg, theta, data.chart) == CompareResult::LESS) {
                dominated = true;
                break;
            }
        }
        if (!dominated) maximal.push_back(&t.exp_arg);
    }
    DirectionClass out{theta, DirectionKind::NON_SINGLE, std::nullopt};
    if (maximal.size() != 1) return out;
    const ExpMonomialSum& m = *maximal.front();
    out.dominant = m;
    if (m.empty()) {
        out.kind = DirectionKind::NEUTRAL;
        return out;
    }
    switch (leading_sign(m, theta, data.chart)) {
        case +1: out.kind = DirectionKind::SIMPLY_POSITIVE; break;
        case -1: out.kind = DirectionKind::SIMPLY_NEGATIVE; break;
        default: out.kind = DirectionKind::TURNING; break;
    }
    return out;
}

namespace {

/// Candidate angles where some difference of growth exponents (or a single
/// exponent) has vanishing leading real part, restricted to the sector.
std::vector<Angle> turning_candidates(const SectorialGrowthData& data,
                                      const SectorialGrowthData::Sector& sec) {
    std::vector<ExpMonomialSum> diffs;
    const auto& ts = sec.terms;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!ts[i].exp_arg.empty()) diffs.push_back(ts[i].exp_arg);
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
            ExpMonomialSum d = ts[j].exp_arg - ts[i].exp_arg;
            if (!d.empty()) diffs.push_back(d);
        }
    }
    std::vector<Angle> cands;
    for (const auto& d : diffs) {
        const auto [rho, c] = top_growth(d, data.chart);
        const Rational signed_rho = (data.chart == Puncture::ZERO) ? rho : -rho;
        // cos(arg c - signed_rho * theta) = 0  <=>
        // theta = (arg c - pi/2 - k pi) / signed_rho.
        const long long K = 8 * (std::llabs(rho.num) / rho.den + 2);
        for (long long k = -K; k <= K; ++k) {
            Angle th = (exact_arg(c) - Angle(Rational(1, 2) + Rational(k))) / signed_rho;
            if (sec.full_circle) th = th.normalized();
            else th = anchor_to(th, sec.lo.value());
            if (!sector_contains(sec, th)) continue;
            bool dup = false;
            for (const auto& e : cands)
                if (e.same_as(th)) { dup = true; break; }
            if (!dup) cands.push_back(th);
        }
    }
    if (!sec.full_circle) {
        for (const Angle& b : {sec.lo, sec.hi}) {
            bool dup = false;
            for (const auto& e : cands)
                if (e.same_as(b)) { dup = true; break; }
            if (!dup) cands.push_back(b);
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Angle& a, const Angle& b) { return a.value() < b.value(); });
    return cands;
}

} // namespace

std::vector<Angle> turning_set(const SectorialGrowthData& data) {
    std::vector<Angle> out;
    for (const auto& sec : data.sectors) {
        for (const auto& th : turning_candidates(data, sec)) {
            const auto cls = classify_direction(data, th);
            if (cls.kind == DirectionKind::TURNING || cls.kind == DirectionKind::NON_SINGLE)
                out.push_back(th);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Angle& a, const Angle& b) { return a.value() < b.value(); });
    return out;
}

namespace {

struct Segment {
    Angle lo, hi; // unrolled: hi.value() > lo.value()
    bool negative = false;
    Rational rho;
    Complex c;
    bool non_single = false;
};

std::vector<Segment> sector_segments(const SectorialGrowthData& data,
                                     const SectorialGrowthData::Sector& sec,
                                     const std::vector<Angle>& zset) {
    std::vector<Angle> pts = zset;
    std::vector<Segment> segs;
    if (sec.full_circle) {
        if (pts.empty()) return segs; // constant classification, nothing special
        pts.push_back(pts.front() + Angle(Rational(2)));
    } else {
        // Boundaries already included as turning-candidate endpoints when they
        // classify as turning; ensure they bound the segment list regardless.
        if (pts.empty() || !pts.front().same_as(sec.lo)) pts.insert(pts.begin(), sec.lo);
        if (!pts.back().same_as(sec.hi)) pts.push_back(sec.hi);
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Segment s;
        s.lo = pts[i];
        s.hi = pts[i + 1];
        if (s.hi.value() - s.lo.value() < 1e-12) continue;
        const Angle mid = (s.lo + s.hi) / Rational(2);
        const auto cls = classify_direction(data, mid);
        s.non_single = cls.kind == DirectionKind::NON_SINGLE;
        s.negative = cls.kind == DirectionKind::SIMPLY_NEGATIVE;
        if (s.negative) {
            const auto [rho, c] = top_growth(*cls.dominant, data.chart);
            s.rho = rho;
            s.c = c;
        }
        segs.push_back(s);
    }
    return segs;
}

} // namespace

std::vector<SpecialInterval> special_intervals(const SectorialGrowthData& data) {
    std::vector<SpecialInterval> out;
    for (const auto& sec : data.sectors) {
        const auto zset = turning_set(data);
        auto segs = sector_segments(data, sec, zset);
        if (segs.empty()) continue;
        const std::size_t n = segs.size();
        // Scan maximal runs of negative segments; in the full-circle case the
        // run may wrap, so scan a doubled list and start runs only at
        // positions whose predecessor is non-negative.
        const std::size_t total = sec.full_circle ? 2 * n : n;
        std::vector<bool> used(n, false);
        for (std::size_t start = 0; start < n; ++start) {
            if (!segs[start].negative || used[start]) continue;
            if (sec.full_circle) {
                const std::size_t prev = (start + n - 1) % n;
                if (segs[prev].negative && n > 1) continue; // run starts earlier
            } else if (start > 0 && segs[start - 1].negative) {
                continue;
            }
            // Accumulate the run.
            std::vector<std::size_t> run;
            Angle unroll_shift(Rational(0));
            Angle a = segs[start].lo, b = segs[start].hi;
            for (std::size_t off = 0; off < total; ++off) {
                const std::size_t idx = (start + off) % n;
                if (!segs[idx].negative) break;
                if (sec.full_circle && start + off >= n && idx == start) break; // full wrap
                run.push_back(idx);
                used[idx] = true;
                const Angle shift((start + off >= n) ? Rational(2) : Rational(0));
                b = segs[idx].hi + shift;
                if (!sec.full_circle && idx + 1 == n) break;
            }
            // Consistent leading pair across the run.
            bool ok = true;
            const Rational rho = segs[run.front()].rho;
            const Complex c = segs[run.front()].c;
            for (std::size_t idx : run) {
                if (!(segs[idx].rho == rho)) { ok = false; break; }
                if (std::abs(segs[idx].c - c) > 1e-12 * (1.0 + std::abs(c))) { ok = false; break; }
            }
            if (!ok) continue;
            // Length must equal pi/rho exactly.
            const Angle len = b - a;
            const bool exact_len = (len.pi_coeff == Rational(1) / rho) && len.remainder == 0.0;
            const bool numeric_len = std::abs(len.value() - M_PI / rho.value()) <= 1e-10;
            if (!exact_len && !numeric_len) continue;
            // Endpoint real parts must vanish.
            if (sign_cos(growth_phase(c, rho, a, data.chart)) != 0) continue;
            if (sign_cos(growth_phase(c, rho, b, data.chart)) != 0) continue;
            SpecialInterval si;
            si.theta1 = sec.full_circle ? a.normalized() : a;
            si.rho = rho;
            si.alpha = c;
            si.chart = data.chart;
            out.push_back(si);
        }
    }
    std::sort(out.begin(), out.end(), [](const SpecialInterval& x, const SpecialInterval& y) {
        return x.theta1.value() < y.theta1.value();
    });
    return out;
}

ModuliDescriptor classify_moduli(const RDifferential& q) {
    ModuliDescriptor out;
    bool essential = q.airy_preset;
    for (const auto& t : q.terms)
        if (!t.exp_arg.empty()) essential = true;
    if (!essential) {
        const LocalForm lf = local_form(q);
        ModuliDescriptor::Factor f;
        if (lf.m_P > 0) {
            f.kind = ModuliDescriptor::Kind::P_QP_FACTOR;
            f.m = lf.m_P;
        } else {
            f.kind = ModuliDescriptor::Kind::UNIQUE;
        }
        out.factors.push_back(f);
        return out;
    }
    const SectorialGrowthData data = growth_data(q);
    // Reject growth data with a non-unique dominant on an open set.
    for (const auto& sec : data.sectors) {
        const auto zset = turning_set(data);
        for (const auto& s : sector_segments(data, sec, zset)) {
            if (s.non_single)
                throw std::runtime_error(
                    "classify_moduli: non-single dominant growth on an open set (malformed data)");
        }
    }
    for (const auto& si : special_intervals(data)) {
        ModuliDescriptor::Factor f;
        f.kind = ModuliDescriptor::Kind::P_FACTOR;
        f.interval = si;
        out.factors.push_back(f);
    }
    if (out.factors.empty())
        out.factors.push_back(ModuliDescriptor::Factor{ModuliDescriptor::Kind::UNIQUE, 0, {}});
    return out;
}

RefinedExponents refined_exponents(const RDifferential& q) {
    RDifferential p = q;
    if (p.puncture == Puncture::INFINITY_) p = invert_chart(p);
    p = convert_frame(p, Frame::DZ_OVER_Z);
    if (p.terms.size() != 1)
        throw std::invalid_argument("refined_exponents: expected a single term");
    const auto& t = p.terms.front();
    if (t.poly.size() != 1)
        throw std::invalid_argument(
            "refined_exponents: coefficient must be a nowhere-vanishing monomial");
    if (t.exp_arg.empty())
        throw std::invalid_argument("refined_exponents: exponential part required");
    RefinedExponents out;
    out.ell = t.poly.top().exponent.num;
    const auto [rho, alpha] = top_growth(t.exp_arg, Puncture::ZERO);
    if (rho.den != 1)
        throw std::invalid_argument("refined_exponents: integer pole order required");
    out.m = rho.num;
    out.d = Rational(out.ell) / rho + Rational(p.rank);
    // Solve -m theta + arg(alpha) = pi (mod 2pi): m directions in [0, 2pi).
    for (long long k = 0; k < out.m; ++k) {
        Angle th = (exact_arg(alpha) - Angle(Rational(1)) + Angle(Rational(2 * k))) / rho;
        out.T.push_back(th.normalized());
    }
    std::sort(out.T.begin(), out.T.end(),
              [](const Angle& a, const Angle& b) { return a.value() < b.value(); });
    return out;
}

} // namespace rdtoda
