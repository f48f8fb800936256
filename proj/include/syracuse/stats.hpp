// Star discrepancy, the growth constant tau = (2+sqrt(3))/4 via closed form
// and quadrature, Crandall's partial product, orbit segments with certified
// mod-2 residues, and the growth-bound and discrepancy-floor checks built on
// them.

#pragma once

#include "syracuse/maps.hpp"
#include "syracuse/parallel.hpp"
#include "syracuse/integer_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace syracuse::stats {

class empty_sequence : public kernel_domain_error {
public:
    explicit empty_sequence(const std::string& what) : kernel_domain_error(what) {}
};

class precondition_violated : public kernel_domain_error {
public:
    explicit precondition_violated(const std::string& what) : kernel_domain_error(what) {}
};

// -- star discrepancy ----------------------------------------------------------

// D*_n of points in [a, b]: normalize, sort, and take
// max_i max(i/n - u_(i), u_(i) - (i-1)/n).
inline double star_discrepancy(std::vector<double> pts, double a, double b) {
    if (pts.empty()) throw empty_sequence("star_discrepancy: no points");
    if (!(b > a)) throw kernel_domain_error("star_discrepancy: empty interval");
    const double n = static_cast<double>(pts.size());
    for (double& x : pts) {
        x = (x - a) / (b - a);
        if (x < -1e-12 || x > 1.0 + 1e-12)
            throw kernel_domain_error("star_discrepancy: point outside [a, b]");
        x = std::min(1.0, std::max(0.0, x));
    }
    std::sort(pts.begin(), pts.end());
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double up = (static_cast<double>(i) + 1.0) / n - pts[i];
        double dn = pts[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(up, dn));
    }
    return d;
}

// -- tau -------------------------------------------------------------------------

struct TauConstant {
    Ball alpha;           // 2 + sqrt(3)
    Ball tau;             // alpha / 4
    Real quadrature_tau;  // exp((1/2) integral_0^2 ln g), independent route
    long quadrature_nodes = 0;
};

// Closed form only: tau = (2 + sqrt(3)) / 4.
inline Ball tau_closed(prec_t prec = 128) {
    prec_t wp = prec + 16;
    Ball alpha = Ball::add(Ball::exact(Real::of(2L, wp)),
                           Ball::sqrt(Ball::exact(Real::of(3L, wp)), wp), prec);
    return Ball::mul_2si(alpha, -2);
}

class quadrature_divergence : public kernel_domain_error {
public:
    explicit quadrature_divergence(const std::string& what) : kernel_domain_error(what) {}
};

// Composite midpoint rule over one full period of the analytic integrand
// ln g; node count doubles until two levels agree. Nodes (2i+1)/N with N a
// power of two are dyadic, so the cos(pi x) reduction stays exact.
inline TauConstant tau_constant(prec_t prec = 192) {
    TauConstant out;
    prec_t wp = prec + 32;
    Ball three = Ball::exact(Real::of(3L, wp));
    out.alpha = Ball::add(Ball::exact(Real::of(2L, wp)), Ball::sqrt(three, wp), prec);
    out.tau = Ball::mul_2si(out.alpha, -2);

    Real prev(wp);
    bool have_prev = false;
    Real tol = Real::pow2(-static_cast<long>(prec) + 16, 32);
    for (long N = 32; N <= (1L << 20); N *= 2) {
        Real sum = Real::of(0L, wp);
        for (long i = 0; i < N; ++i) {
            Real node(wp);
            mpfr_set_si(node.raw(), 2 * i + 1, MPFR_RNDN);
            mpfr_div_si(node.raw(), node.raw(), N, MPFR_RNDN);  // exact: N is a power of two
            Real gval = maps::g_point(node, wp);
            sum = Real::add(sum, Real::log(gval, wp), wp);
        }
        Real integral = Real::div(Real::mul_2si(sum, 1), Real::of(N, wp), wp);  // (2/N) * sum
        if (have_prev && Real::abs(Real::sub(integral, prev, wp)) < tol) {
            out.quadrature_tau = Real::exp(Real::mul_2si(integral, -1), prec);
            out.quadrature_nodes = N;
            return out;
        }
        prev = integral;
        have_prev = true;
    }
    throw quadrature_divergence("tau quadrature did not stabilize");
}

// -- Crandall's product ------------------------------------------------------------

// Partial product of (3/2^i)^(1/2^i); the full product is 3/4.
inline Real crandall_product(int k, prec_t prec = 128) {
    if (k < 1) throw kernel_domain_error("crandall_product: k must be >= 1");
    prec_t wp = prec + 16;
    Real ln3 = Real::log(Real::of(3L, wp), wp);
    Real ln2 = Real::log(Real::of(2L, wp), wp);
    Real acc = Real::of(0L, wp);
    for (int i = 1; i <= k; ++i) {
        Real term = Real::sub(ln3, Real::mul(Real::of(i, wp), ln2, wp), wp);
        acc = Real::add(acc, Real::mul_2si(term, -i), wp);
    }
    return Real::exp(acc, prec);
}

// -- orbit segments -----------------------------------------------------------------

struct OrbitSegment {
    Real start{64};
    long n = 0;                    // steps; values has n+1 entries
    std::vector<Ball> values;
    std::vector<double> residues;  // mod-2 of values[0..n-1]
    double residue_err = 0.0;      // absolute error bound on every residue
    Ball min_abs;                  // M = min |values[i]| over i < n, as an interval
    Ball growth;                   // (1/n) ln(values[n]/values[0])
    prec_t bits = 0;
};

// Builds the orbit segment of x0 (an exactly representable start) with at
// most max_steps steps, stopping early when |f^k(x)| drops below stop_below.
// Escalates precision until every residue is certified to residue_tol.
inline OrbitSegment build_segment(const Real& x0, long max_steps, double stop_below,
                                  const PrecisionPolicy& policy, double residue_tol = 1e-24) {
    policy.validate();
    if (x0.is_zero()) throw precondition_violated("build_segment: x0 must be nonzero");

    for (prec_t p = policy.start_bits;; p = policy.next(p)) {
        if (p > policy.max_bits)
            throw escalation_exhausted("build_segment: residues not certifiable within policy");

        OrbitSegment seg;
        seg.start = x0;
        seg.bits = p;
        // exact promotion of the start to the working precision
        Ball x = Ball::exact(Real::add(x0, Real::of(0L, p), p));
        seg.values.push_back(x);

        bool precision_ok = true;
        Real stop = Real::of(stop_below, 64);
        for (long k = 0; k < max_steps; ++k) {
            if (Real::abs(x.mid()) < stop && k > 0) break;
            x = maps::f_ball(x, p);
            seg.values.push_back(x);
            if (!(x.rad() < Real::of(residue_tol * 0.5, 32))) { precision_ok = false; break; }
        }
        if (!precision_ok) continue;

        seg.n = static_cast<long>(seg.values.size()) - 1;
        if (seg.n < 1) throw precondition_violated("build_segment: zero-length segment");

        try {
            double err = 0.0;
            for (long i = 0; i < seg.n; ++i) {
                Ball r = mod2(seg.values[static_cast<std::size_t>(i)]);
                seg.residues.push_back(r.mid().to_double());
                err = std::max(err, r.rad().to_double());
            }
            seg.residue_err = err;
        } catch (const ambiguous_floor&) {
            if (policy.next(p) > policy.max_bits) throw;
            seg.residues.clear();
            continue;
        }

        // M over all but the last value, as an interval.
        Real m_lo = seg.values[0].inf_abs();
        Real m_hi = seg.values[0].sup_abs();
        for (long i = 1; i < seg.n; ++i) {
            m_lo = Real::min(m_lo, seg.values[static_cast<std::size_t>(i)].inf_abs());
            m_hi = Real::min(m_hi, seg.values[static_cast<std::size_t>(i)].sup_abs());
        }
        seg.min_abs = Ball::from_interval(m_lo, m_hi, 64);

        Ball ratio = Ball::div(Ball::abs(seg.values.back()), Ball::abs(seg.values.front()), p);
        seg.growth = Ball::mul(Ball::log(ratio, p),
                               Ball::exact(Real::div(Real::of(1L, p), Real::of(seg.n, p), p)), p);
        return seg;
    }
}

// -- growth-bound and discrepancy-floor inequality checks ----------------------------

struct GrowthBoundCheck {
    Ball lhs;        // |(1/n) ln(f^n(x)/x) - ln tau|
    Ball rhs;        // 2 ln3 D*_n(S mod 2) - ln(1 - 1/(3M))
    double dstar = 0.0;
    bool precondition_ok = false;  // M > 1/3 certified
    bool holds = false;            // lhs < rhs certified
};

inline GrowthBoundCheck growth_bound_check(const OrbitSegment& seg, prec_t p = 128) {
    GrowthBoundCheck out;
    if (seg.n < 1) throw precondition_violated("growth_bound_check: empty segment");

    Real third = Real::div(Real::of(1L, 64), Real::of(3L, 64), 64);
    out.precondition_ok = seg.min_abs.lo() > third;
    if (!out.precondition_ok)
        throw precondition_violated("growth_bound_check: min |f^i(x)| <= 1/3");

    out.dstar = star_discrepancy(seg.residues, 0.0, 2.0);

    Ball ln_tau = Ball::log(tau_closed(p), p);
    out.lhs = Ball::abs(Ball::sub(seg.growth, ln_tau, p));

    // D* from double residues; each residue carries residue_err, each point
    // moves D* by at most err/(b-a), plus double-sort slack.
    double dstar_pad = seg.residue_err / 2.0 + 1e-14;
    Ball dstar_ball = Ball::midrad(Real::of(out.dstar, p), Real::of(dstar_pad, 32));

    // Any M below the true minimum gives a valid instance; use the certified lower
    // bound of the min.
    Ball M = Ball::exact(seg.min_abs.lo());
    Ball one = Ball::exact(Real::of(1L, 8));
    Ball inv3M = Ball::div(one, Ball::mul_exact(M, Real::of(3L, 8), p), p);
    Ball log_term = Ball::log(Ball::sub(one, inv3M, p), p);
    Ball ln3 = Ball::log(Ball::exact(Real::of(3L, p)), p);
    out.rhs = Ball::sub(Ball::mul(Ball::mul_2si(ln3, 1), dstar_ball, p), log_term, p);

    out.holds = surely_lt(out.lhs, out.rhs);
    return out;
}

// Lower bound on the limit discrepancy of orbits pinned above the floor:
// ln(1 + (a-1)(1-tau)/(a tau)) / (2 ln 3).
inline Real discrepancy_floor_bound(const Real& a, prec_t p = 128) {
    prec_t wp = p + 16;
    Real tau = tau_closed(wp).mid();
    Real one = Real::of(1L, wp);
    Real num = Real::mul(Real::sub(a, one, wp), Real::sub(one, tau, wp), wp);
    Real den = Real::mul(a, tau, wp);
    Real arg = Real::add(one, Real::div(num, den, wp), wp);
    Real ln3 = Real::log(Real::of(3L, wp), wp);
    return Real::div(Real::log(arg, wp), Real::mul_2si(ln3, 1), p);
}

struct DiscrepancyFloorCheck {
    Real bound{64};         // liminf lower bound for this a
    Real threshold{64};     // a / (3 (1 - tau)): required orbit floor
    double dstar = 0.0;     // empirical D* of the prefix residues
    bool precondition_ok = false;
};

inline DiscrepancyFloorCheck discrepancy_floor_check(const OrbitSegment& seg, const Real& a, prec_t p = 128) {
    if (!(a > Real::of(1L, 32))) throw precondition_violated("discrepancy_floor_check: a must exceed 1");
    DiscrepancyFloorCheck out;
    out.bound = discrepancy_floor_bound(a, p);
    Real one_minus_tau = Real::sub(Real::of(1L, p), tau_closed(p).mid(), p);
    out.threshold = Real::div(a, Real::mul(Real::of(3L, p), one_minus_tau, p), p);
    out.precondition_ok = true;
    for (long i = 0; i <= seg.n; ++i) {
        if (!(seg.values[static_cast<std::size_t>(i)].inf_abs() >= out.threshold)) {
            out.precondition_ok = false;
            break;
        }
    }
    if (!out.precondition_ok)
        throw precondition_violated("discrepancy_floor_check: orbit prefix dips below a/(3(1-tau))");
    out.dstar = star_discrepancy(seg.residues, 0.0, 2.0);
    return out;
}

// -- growth experiments ----------------------------------------------------------------

struct GrowthRow {
    double x0 = 0.0;
    long n = 0;
    double dstar = 0.0;
    double growth = 0.0;
    double min_abs = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    prec_t bits = 0;
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    long violations = 0;  // growth-bound failures; must stay 0
    long skipped = 0;     // ambiguous-floor or degenerate samples
    double mean_growth = 0.0;
    double mean_dstar = 0.0;
};

struct GrowthSpec {
    double x_lo = 1e3;
    double x_hi = 1e4;
    long count = 100;
    long max_steps = 200;
    double stop_below = 0.35;   // keeps M > 1/3 by construction
    std::uint64_t seed = 20260808;
    unsigned workers = 0;
};

// Random real starts: per-sample orbit segment, discrepancy, growth rate and
// the growth-bound check. A violation would be a soundness bug, so callers treat
// report.violations != 0 as fatal.
inline GrowthReport growth_experiment(const GrowthSpec& spec, const PrecisionPolicy& policy) {
    if (spec.count < 1) throw kernel_domain_error("growth_experiment: count must be >= 1");
    GrowthReport report;
    report.rows.resize(static_cast<std::size_t>(spec.count));
    std::vector<char> ok(static_cast<std::size_t>(spec.count), 0);

    parallel_for(0, spec.count, [&](std::int64_t i) {
        std::mt19937_64 rng(spec.seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> dist(spec.x_lo, spec.x_hi);
        double x0d = dist(rng);
        GrowthRow row;
        row.x0 = x0d;
        try {
            OrbitSegment seg = build_segment(Real::of(x0d, 64), spec.max_steps, spec.stop_below, policy);
            GrowthBoundCheck chk = growth_bound_check(seg, 128);
            row.n = seg.n;
            row.dstar = chk.dstar;
            row.growth = seg.growth.mid().to_double();
            row.min_abs = seg.min_abs.mid().to_double();
            row.lhs = chk.lhs.mid().to_double();
            row.rhs = chk.rhs.mid().to_double();
            row.holds = chk.holds;
            row.bits = seg.bits;
            ok[static_cast<std::size_t>(i)] = 1;
        } catch (const ambiguous_floor&) {
            ok[static_cast<std::size_t>(i)] = 0;
        } catch (const precondition_violated&) {
            ok[static_cast<std::size_t>(i)] = 0;
        }
        report.rows[static_cast<std::size_t>(i)] = row;
    }, spec.workers, 1);

    std::vector<GrowthRow> kept;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        if (!ok[i]) { ++report.skipped; continue; }
        kept.push_back(report.rows[i]);
        if (!report.rows[i].holds) ++report.violations;
        report.mean_growth += report.rows[i].growth;
        report.mean_dstar += report.rows[i].dstar;
    }
    report.rows = std::move(kept);
    if (!report.rows.empty()) {
        report.mean_growth /= static_cast<double>(report.rows.size());
        report.mean_dstar /= static_cast<double>(report.rows.size());
    }
    return report;
}

// Integer starts: exact orbits, residues in {0, 1}, growth toward ln(sqrt(3)/2).
inline GrowthReport integer_growth(std::uint64_t n_lo, long count, long cap = 100000) {
    GrowthReport report;
    for (long i = 0; i < count; ++i) {
        mpz_class n(static_cast<unsigned long>(n_lo) + static_cast<unsigned long>(i));
        dynamics::IntegerOrbit orbit = dynamics::t_orbit(n, cap);
        if (!orbit.terminated || orbit.values.size() < 2) { ++report.skipped; continue; }
        GrowthRow row;
        row.x0 = n.get_d();
        row.n = static_cast<long>(orbit.values.size()) - 1;
        std::vector<double> residues;
        residues.reserve(orbit.values.size() - 1);
        for (std::size_t k = 0; k + 1 < orbit.values.size(); ++k)
            residues.push_back(mpz_odd_p(orbit.values[k].get_mpz_t()) ? 1.0 : 0.0);
        row.dstar = star_discrepancy(residues, 0.0, 2.0);
        row.growth = -std::log(n.get_d()) / static_cast<double>(row.n);
        row.min_abs = 1.0;
        row.holds = true;
        report.rows.push_back(row);
        report.mean_growth += row.growth;
        report.mean_dstar += row.dstar;
    }
    if (!report.rows.empty()) {
        report.mean_growth /= static_cast<double>(report.rows.size());
        report.mean_dstar /= static_cast<double>(report.rows.size());
    }
    return report;
}

}  // namespace syracuse::stats
