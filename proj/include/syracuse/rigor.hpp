// Interval-arithmetic verification suites: the critical-point brackets, the
// J-interval inclusion f(J^a_n) in J^a_{f(n)}, the invariant intervals on
// both half-lines, the capture chains through the shadow intervals of 13,
// 16, 20 and 40, and wrappers for the growth-bound inequality checks.
//
// Verdicts are honest: "certified" only when ball evaluation proves the
// claim, "failed" only when a point evaluation disproves it, otherwise
// "inconclusive" once the subdivision budget is spent.

#pragma once

#include "syracuse/attractors.hpp"
#include "syracuse/critical_points.hpp"
#include "syracuse/stats.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace syracuse::rigor {

enum class Verdict { certified, failed, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::failed: return "failed";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Certificate {
    std::string claim;
    std::vector<std::pair<std::string, std::string>> params;
    Verdict verdict = Verdict::inconclusive;
    long subdivisions = 0;
    prec_t bits = 0;
    std::string detail;
};

struct CertBudget {
    long max_pieces = 1L << 14;
};

using BallFn = std::function<Ball(const Ball&, prec_t)>;

// -- adaptive bound certification -----------------------------------------------

namespace detail {

// Certifies sup fn <= bound (or < with strict) over [lo, hi] by adaptive
// bisection. A definite counterexample at a midpoint gives "failed".
inline Verdict certify_upper(const BallFn& fn, Real lo, Real hi, const Real& bound,
                             bool strict, prec_t p, const CertBudget& budget, long& pieces) {
    std::vector<std::pair<Real, Real>> stack;
    stack.emplace_back(std::move(lo), std::move(hi));
    while (!stack.empty()) {
        if (++pieces > budget.max_pieces) return Verdict::inconclusive;
        auto [a, b] = std::move(stack.back());
        stack.pop_back();
        Ball X = Ball::from_interval(a, b, p);
        Ball Y = fn(X, p);
        bool ok = strict ? (Y.hi() < bound) : (Y.hi() <= bound);
        if (ok) continue;
        Ball Ym = fn(Ball::exact(X.mid()), p);
        bool bad = strict ? (Ym.lo() >= bound) : (Ym.lo() > bound);
        if (bad) return Verdict::failed;
        Real m = X.mid();
        if (!(a < m && m < b)) return Verdict::inconclusive;  // width exhausted
        stack.emplace_back(a, m);
        stack.emplace_back(m, b);
    }
    return Verdict::certified;
}

inline Verdict certify_lower(const BallFn& fn, Real lo, Real hi, const Real& bound,
                             bool strict, prec_t p, const CertBudget& budget, long& pieces) {
    BallFn negged = [&fn](const Ball& x, prec_t q) { return Ball::neg(fn(x, q)); };
    return certify_upper(negged, std::move(lo), std::move(hi), Real::neg(bound), strict, p,
                         budget, pieces);
}

// Certifies sign of fn on [lo, hi] (+1 or -1, strictly).
inline Verdict certify_sign(const BallFn& fn, const Real& lo, const Real& hi, int sign,
                            prec_t p, const CertBudget& budget, long& pieces) {
    Real zero = Real::of(0L, 8);
    if (sign > 0) return certify_lower(fn, lo, hi, zero, true, p, budget, pieces);
    return certify_upper(fn, lo, hi, zero, true, p, budget, pieces);
}

inline BallFn f_fn() {
    return [](const Ball& x, prec_t q) { return maps::f_ball(x, q); };
}

inline BallFn f_prime_fn() {
    return [](const Ball& x, prec_t q) { return maps::f_prime_ball(x, q); };
}

inline void push_param(Certificate& c, const std::string& k, const std::string& v) {
    c.params.emplace_back(k, v);
}

}  // namespace detail

// -- critical-point bracket check ---------------------------------------------------

// Certifies that the enclosure of c_n lies strictly inside the tight bracket
// (n - 1/(pi^2 n), n) for even n / (n, n + 3/(pi^2 n)) for odd n, and inside
// (n - 1/2, n) / (n, n + 1/2).
inline Certificate critical_bracket_certificate(long n, const PrecisionPolicy& policy) {
    Certificate cert;
    cert.claim = "critical_bracket";
    detail::push_param(cert, "n", std::to_string(n));
    if (n <= 0) {
        cert.detail = "tight brackets cover n > 0 only";
        return cert;
    }
    critical::CriticalPoint cp = critical::critical_point(n, policy);
    cert.bits = cp.bits;
    prec_t p = cp.bits;
    const bool odd = (n % 2) != 0;

    Ball pi = Ball::midrad(const_pi(p), Real::pow2(1 - static_cast<long>(p)));
    Ball pi2n = Ball::mul(Ball::mul(pi, pi, p), Ball::exact(Real::of(n, p)), p);
    Ball off = Ball::div(Ball::exact(Real::of(odd ? 3L : 1L, 8)), pi2n, p);
    Real nn = Real::of(n, p);
    Real half = Real::of(0.5, 8);

    bool ok;
    if (odd) {
        Ball upper = Ball::add(Ball::exact(nn), off, p);
        ok = cp.enclosure.lo() > nn && cp.enclosure.hi() < upper.lo() &&
             cp.enclosure.hi() < Real::add(nn, half, p);
    } else {
        Ball lower = Ball::sub(Ball::exact(nn), off, p);
        ok = cp.enclosure.hi() < nn && cp.enclosure.lo() > lower.hi() &&
             cp.enclosure.lo() > Real::sub(nn, half, p);
    }
    cert.verdict = ok ? Verdict::certified : Verdict::failed;
    return cert;
}

// -- shadow-interval inclusion f(J^a_n) in J^a_{f(n)} --------------------------------

struct RationalParam {
    long num = 7;
    long den = 2;
};

inline Certificate shadow_inclusion_certificate(long n, RationalParam a, const PrecisionPolicy& policy,
                                      CertBudget budget = {}) {
    Certificate cert;
    cert.claim = "shadow_inclusion";
    detail::push_param(cert, "n", std::to_string(n));
    detail::push_param(cert, "a", std::to_string(a.num) + "/" + std::to_string(a.den));
    if (n <= 0) throw kernel_domain_error("shadow_inclusion_certificate: n must be positive");
    if (a.den <= 0 || 8 * a.num <= 27 * a.den || a.num >= 6 * a.den)
        throw kernel_domain_error("shadow_inclusion_certificate: parameter must lie in (27/8, 6)");

    policy.validate();
    const bool odd = (n % 2) != 0;
    long fn_int = odd ? (3 * n + 1) / 2 : n / 2;

    for (prec_t p = std::max<prec_t>(policy.start_bits, 128);; p = policy.next(p)) {
        if (p > policy.max_bits) { cert.verdict = Verdict::inconclusive; return cert; }
        cert.bits = p;
        long pieces = 0;

        Ball pi = Ball::midrad(const_pi(p), Real::pow2(1 - static_cast<long>(p)));
        Ball pi2 = Ball::mul(pi, pi, p);
        Ball aball = Ball::div(Ball::exact(Real::of(a.num, p)), Ball::exact(Real::of(a.den, p)), p);
        Ball width_n = Ball::div(aball, Ball::mul_exact(pi2, Real::of(n, p), p), p);
        Ball right_n = Ball::add(Ball::exact(Real::of(n, p)), width_n, p);
        Real sup_domain = right_n.hi();  // superset of J's right end

        Ball width_fn = Ball::div(aball, Ball::mul_exact(pi2, Real::of(fn_int, p), p), p);
        Ball right_fn = Ball::add(Ball::exact(Real::of(fn_int, p)), width_fn, p);
        Real target_hi = right_fn.lo();  // certified lower bound of J' right end
        Real target_lo = Real::of(fn_int, p);

        Real nn = Real::of(n, p);
        Verdict v = Verdict::certified;

        if (!odd) {
            // f increasing on J: endpoint images settle everything.
            Verdict mono = detail::certify_sign(detail::f_prime_fn(), nn, sup_domain, +1, p, budget, pieces);
            if (mono == Verdict::certified) {
                Ball image = maps::f_ball(Ball::exact(sup_domain), p);
                if (!(image.hi() <= target_hi)) v = Verdict::inconclusive;
            } else {
                v = mono;
            }
        } else {
            // sup via adaptive bound over [n + w, R], monotone rise on [n, n + w].
            critical::CriticalPoint cp;
            try {
                PrecisionPolicy local = policy;
                local.start_bits = p;
                local.max_bits = p;
                cp = critical::critical_point(n, local, -(static_cast<long>(p) / 2));
            } catch (const kernel_domain_error&) {
                v = Verdict::inconclusive;
            }
            if (v == Verdict::certified) {
                Real w = Real::mul_2si(Real::sub(cp.enclosure.lo(), nn, p), -1);
                Real mid_w = Real::add(nn, w, p);
                if (!(w.sgn() > 0)) {
                    v = Verdict::inconclusive;
                } else {
                    Verdict rising = detail::certify_sign(detail::f_prime_fn(), nn, mid_w, +1, p, budget, pieces);
                    Verdict sup_ok = detail::certify_upper(detail::f_fn(), mid_w, sup_domain,
                                                           target_hi, false, p, budget, pieces);
                    Verdict inf_ok = detail::certify_lower(detail::f_fn(), mid_w, sup_domain,
                                                           target_lo, false, p, budget, pieces);
                    if (rising == Verdict::failed || sup_ok == Verdict::failed || inf_ok == Verdict::failed)
                        v = Verdict::failed;
                    else if (rising != Verdict::certified || sup_ok != Verdict::certified ||
                             inf_ok != Verdict::certified)
                        v = Verdict::inconclusive;
                }
            }
        }

        cert.subdivisions = pieces;
        if (v == Verdict::certified || v == Verdict::failed) {
            cert.verdict = v;
            return cert;
        }
        if (policy.next(p) > policy.max_bits) { cert.verdict = Verdict::inconclusive; return cert; }
    }
}

inline std::vector<Certificate> shadow_inclusion_sweep(long n_lo, long n_hi, RationalParam a,
                                             const PrecisionPolicy& policy, unsigned workers = 0) {
    if (n_lo < 1 || n_hi < n_lo) throw kernel_domain_error("shadow_inclusion_sweep: bad range");
    std::vector<Certificate> out(static_cast<std::size_t>(n_hi - n_lo + 1));
    parallel_for(n_lo, n_hi + 1, [&](std::int64_t n) {
        out[static_cast<std::size_t>(n - n_lo)] = shadow_inclusion_certificate(static_cast<long>(n), a, policy);
    }, workers, 8);
    return out;
}

// Polynomial sufficient conditions for the inclusion, evaluated directly as a
// second route: B = pi^2 n (2(a-6)n + a) + 2a^2 and
// C = 4 pi^2 n^2 ((27-8a)n + 9) + 81n + 27; both negative make the general
// even/odd estimates go through.
struct ShadowPolynomials {
    Ball B;
    Ball C;
    int sign_B = 0;
    int sign_C = 0;
};

inline ShadowPolynomials shadow_inclusion_polynomials(long n, RationalParam a, prec_t p = 128) {
    Ball pi = Ball::midrad(const_pi(p), Real::pow2(1 - static_cast<long>(p)));
    Ball pi2 = Ball::mul(pi, pi, p);
    Ball aball = Ball::div(Ball::exact(Real::of(a.num, p)), Ball::exact(Real::of(a.den, p)), p);
    Ball nb = Ball::exact(Real::of(n, p));
    Ball six = Ball::exact(Real::of(6L, 8));

    ShadowPolynomials out;
    Ball inner = Ball::add(Ball::mul(Ball::mul_2si(Ball::sub(aball, six, p), 1), nb, p), aball, p);
    Ball a2 = Ball::mul(aball, aball, p);
    out.B = Ball::add(Ball::mul(Ball::mul(pi2, nb, p), inner, p), Ball::mul_2si(a2, 1), p);

    Ball n2 = Ball::mul(nb, nb, p);
    Ball c_inner = Ball::add(Ball::mul(Ball::sub(Ball::exact(Real::of(27L, 8)),
                                                 Ball::mul_exact(aball, Real::of(8L, 8), p), p), nb, p),
                             Ball::exact(Real::of(9L, 8)), p);
    Ball c_lead = Ball::mul(Ball::mul_exact(Ball::mul(pi2, n2, p), Real::of(4L, 8), p), c_inner, p);
    Ball c_tail = Ball::add(Ball::mul_exact(nb, Real::of(81L, 8), p), Ball::exact(Real::of(27L, 8)), p);
    out.C = Ball::add(c_lead, c_tail, p);

    out.sign_B = out.B.certain_sign();
    out.sign_C = out.C.certain_sign();
    return out;
}

// -- invariant intervals ---------------------------------------------------------------

namespace detail {

struct MonotonePiece {
    Real lo{64};
    Real hi{64};
};

// Certifies f([lo, hi]) within [v, w] via a monotone decomposition: on each
// monotone piece the range is spanned by the endpoint images; across each
// critical enclosure the whole ball image is checked directly.
inline Verdict invariant_by_decomposition(const Real& lo, const Real& hi,
                                          const std::vector<Ball>& crits,
                                          const Real& v, const Real& w,
                                          prec_t p, const CertBudget& budget, long& pieces) {
    std::vector<Real> cuts;
    cuts.push_back(lo);
    for (const auto& c : crits) {
        cuts.push_back(c.lo());
        cuts.push_back(c.hi());
    }
    cuts.push_back(hi);

    auto value_ok = [&](const Ball& y) { return y.lo() >= v && y.hi() <= w; };

    // endpoint and critical-ball images
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!value_ok(maps::f_ball(Ball::exact(cuts[i]), p))) return Verdict::inconclusive;
    }
    for (const auto& c : crits) {
        if (!value_ok(maps::f_ball(c, p))) return Verdict::inconclusive;
    }

    // monotone pieces between cuts 0-1, 2-3, ... (skip the crit gaps)
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
        const Real& a = cuts[i];
        const Real& b = cuts[i + 1];
        if (!(a < b)) continue;
        Verdict up = certify_sign(f_prime_fn(), a, b, +1, p, budget, pieces);
        if (up == Verdict::certified) continue;
        Verdict dn = certify_sign(f_prime_fn(), a, b, -1, p, budget, pieces);
        if (dn != Verdict::certified) return Verdict::inconclusive;
    }
    return Verdict::certified;
}

}  // namespace detail

// Certifies the four invariant intervals. Exact fixed points are not binary
// representable, so each certificate proves invariance of the interval with
// the fixed-point endpoint replaced by the nearest certified bound on the
// invariant side; the enclosure radii are recorded in the params.
inline std::vector<Certificate> verify_invariant_intervals(const PrecisionPolicy& policy,
                                                           CertBudget budget = {}) {
    policy.validate();
    prec_t p = std::max<prec_t>(policy.start_bits, 128);

    auto fps = critical::fixed_points(3.0, policy);
    // mu1 and mu3 by value: mus are ordered mu0 < mu1 < ...
    const critical::FixedPointInfo* mu1 = nullptr;
    const critical::FixedPointInfo* mu3 = nullptr;
    const critical::FixedPointInfo* nu1 = nullptr;
    for (const auto& fp : fps) {
        if (fp.label == "mu1") mu1 = &fp;
        if (fp.label == "mu3") mu3 = &fp;
        if (fp.label == "nu1") nu1 = &fp;
    }
    if (!mu1 || !mu3 || !nu1)
        throw kernel_domain_error("verify_invariant_intervals: fixed points missing");

    critical::CriticalPoint c1 = critical::critical_point(1, policy);
    critical::CriticalPoint c2 = critical::critical_point(2, policy);

    std::vector<Certificate> out;

    {
        Certificate cert;
        cert.claim = "invariant_interval";
        detail::push_param(cert, "interval", "[0, mu1]");
        detail::push_param(cert, "mu1_radius", mu1->enclosure.rad().str(4));
        cert.bits = p;
        long pieces = 0;
        Real zero = Real::of(0L, p);
        Real u = mu1->enclosure.lo();
        cert.verdict = detail::invariant_by_decomposition(zero, u, {}, zero, u, p, budget, pieces);
        cert.subdivisions = pieces;
        out.push_back(cert);
    }
    {
        Certificate cert;
        cert.claim = "invariant_interval";
        detail::push_param(cert, "interval", "[mu1, mu3]");
        cert.bits = p;
        long pieces = 0;
        Real v = mu1->enclosure.hi();
        Real w = mu3->enclosure.lo();
        cert.verdict = detail::invariant_by_decomposition(v, w, {c1.enclosure, c2.enclosure},
                                                          v, w, p, budget, pieces);
        cert.subdivisions = pieces;
        out.push_back(cert);
    }
    {
        Certificate cert;
        cert.claim = "invariant_interval";
        detail::push_param(cert, "interval", "[-1, 0]");
        cert.bits = p;
        long pieces = 0;
        Real minus1 = Real::of(-1L, p);
        Real zero = Real::of(0L, p);
        cert.verdict = detail::invariant_by_decomposition(minus1, zero, {}, minus1, zero, p,
                                                          budget, pieces);
        cert.subdivisions = pieces;
        out.push_back(cert);
    }
    {
        Certificate cert;
        cert.claim = "invariant_interval";
        detail::push_param(cert, "interval", "[nu1, -1]");
        detail::push_param(cert, "nu1_radius", nu1->enclosure.rad().str(4));
        cert.bits = p;
        long pieces = 0;
        Real v1 = nu1->enclosure.lo();
        Real minus1 = Real::of(-1L, p);
        cert.verdict = detail::invariant_by_decomposition(v1, minus1, {}, v1, minus1, p,
                                                          budget, pieces);
        cert.subdivisions = pieces;
        out.push_back(cert);
    }
    {
        // Monotonicity direction on [nu1, 0]: certified increasing (f' > 0).
        Certificate cert;
        cert.claim = "monotone_direction";
        detail::push_param(cert, "interval", "[nu1, 0]");
        cert.bits = p;
        long pieces = 0;
        Real v1 = nu1->enclosure.lo();
        Real zero = Real::of(0L, p);
        Verdict v = detail::certify_sign(detail::f_prime_fn(), v1, zero, +1, p, budget, pieces);
        cert.verdict = v;
        cert.subdivisions = pieces;
        cert.detail = v == Verdict::certified ? "f strictly increasing on [nu1, 0]" : "";
        out.push_back(cert);
    }
    return out;
}

// -- capture chains: shadow intervals funnelled below x1 -----------------------------------

struct ImageCheck {
    std::string name;
    Ball value;
    double expected = 0.0;
    bool value_ok = false;     // |mid - expected| <= 1e-4 and radius below 1e-6
    std::string relation;
    bool relation_ok = false;  // the strict ball inequality
};

struct CaptureChainReport {
    std::vector<ImageCheck> checks;
    bool all_ok = false;
    prec_t bits = 0;
};

inline CaptureChainReport verify_capture_chains(const PrecisionPolicy& policy) {
    policy.validate();
    prec_t p = std::max<prec_t>(policy.start_bits, 128);
    CaptureChainReport rep;
    rep.bits = p;

    critical::CriticalPoint c13 = critical::critical_point(13, policy);
    critical::CriticalPoint c5 = critical::critical_point(5, policy);
    critical::FixedPointInfo x1 = critical::x1_fixed_point(policy);

    auto j_right = [&](long n, long den_factor) {
        // n + 7/(den_factor * pi^2) as a ball
        Ball pi = Ball::midrad(const_pi(p), Real::pow2(1 - static_cast<long>(p)));
        Ball pi2 = Ball::mul(pi, pi, p);
        Ball num = Ball::exact(Real::of(7L, p));
        Ball den = Ball::mul_exact(pi2, Real::of(den_factor, p), p);
        return Ball::add(Ball::exact(Real::of(n, p)), Ball::div(num, den, p), p);
    };

    auto add_check = [&rep](const std::string& name, const Ball& value, double expected,
                            const std::string& relation, bool relation_ok) {
        ImageCheck chk;
        chk.name = name;
        chk.value = value;
        chk.expected = expected;
        double mid = value.mid().to_double();
        chk.value_ok = std::abs(mid - expected) <= 1e-4 && value.rad().to_double() < 1e-6;
        chk.relation = relation;
        chk.relation_ok = relation_ok;
        rep.checks.push_back(chk);
    };

    {
        Ball z3 = maps::f_iterate_ball(c13.enclosure, 3, p);
        add_check("f3(c13)", z3, 5.0249, "f3(c13) < c5", surely_lt(z3, c5.enclosure));
        Ball z7 = maps::f_iterate_ball(z3, 4, p);
        add_check("f7(c13)", z7, 1.0184, "f7(c13) < x1", surely_lt(z7, x1.enclosure));
    }
    {
        Ball z4 = maps::f_iterate_ball(j_right(16, 32), 4, p);
        add_check("f4(right(J16))", z4, 1.0227, "f4 < x1", surely_lt(z4, x1.enclosure));
    }
    {
        Ball z3 = maps::f_iterate_ball(j_right(40, 80), 3, p);
        add_check("f3(right(J40))", z3, 5.0118, "f3 < c5", surely_lt(z3, c5.enclosure));
        Ball z7 = maps::f_iterate_ball(z3, 4, p);
        add_check("f7(right(J40))", z7, 1.0047, "f7 < x1", surely_lt(z7, x1.enclosure));
    }
    {
        // The near-miss: f^6 of the right end of J20 lands just above x1.
        Ball z6 = maps::f_iterate_ball(j_right(20, 40), 6, p);
        add_check("f6(right(J20))", z6, 1.023691, "f6 > x1", surely_gt(z6, x1.enclosure));
    }

    rep.all_ok = true;
    for (const auto& c : rep.checks)
        if (!c.value_ok || !c.relation_ok) rep.all_ok = false;
    return rep;
}

// -- unimodality on J^{7/2}_n ---------------------------------------------------------------

inline Certificate unimodal_certificate(long odd_n, const PrecisionPolicy& policy,
                                        CertBudget budget = {}) {
    if (odd_n < 1 || odd_n % 2 == 0)
        throw kernel_domain_error("unimodal_certificate: odd positive n required");
    Certificate cert;
    cert.claim = "unimodal_on_J";
    detail::push_param(cert, "n", std::to_string(odd_n));
    prec_t p = std::max<prec_t>(policy.start_bits, 128);
    cert.bits = p;

    critical::CriticalPoint cp = critical::critical_point(odd_n, policy);
    Ball pi = Ball::midrad(const_pi(p), Real::pow2(1 - static_cast<long>(p)));
    Ball pi2n = Ball::mul(Ball::mul(pi, pi, p), Ball::exact(Real::of(odd_n, p)), p);
    Ball width = Ball::div(Ball::exact(Real::of(3.5, 8)), pi2n, p);
    Real right = Ball::add(Ball::exact(Real::of(odd_n, p)), width, p).hi();

    long pieces = 0;
    Verdict up = detail::certify_sign(detail::f_prime_fn(), Real::of(odd_n, p),
                                      cp.enclosure.lo(), +1, p, budget, pieces);
    Verdict dn = detail::certify_sign(detail::f_prime_fn(), cp.enclosure.hi(), right, -1, p,
                                      budget, pieces);
    cert.subdivisions = pieces;
    cert.verdict = (up == Verdict::certified && dn == Verdict::certified)
                       ? Verdict::certified
                       : (up == Verdict::failed || dn == Verdict::failed ? Verdict::failed
                                                                         : Verdict::inconclusive);
    return cert;
}

// -- growth-bound / discrepancy-floor wrappers --------------------------------------------------

using stats::OrbitSegment;

inline stats::GrowthBoundCheck check_growth_bound(const OrbitSegment& seg, prec_t p = 128) {
    return stats::growth_bound_check(seg, p);
}

inline stats::DiscrepancyFloorCheck check_discrepancy_floor(const OrbitSegment& seg, const Real& a, prec_t p = 128) {
    return stats::discrepancy_floor_check(seg, a, p);
}

}  // namespace syracuse::rigor
