// Midpoint-radius ball arithmetic with outward rounding.
//
// A Ball (m, r) encloses every real x with |x - m| <= r. Every operation
// guarantees containment: the true image of any point of the input ball lies
// in the output ball. Radii live at a small fixed precision and are always
// rounded upward; propagated radius terms are computed from the *input*
// midpoints only, so re-running an expression at higher precision never
// inflates the radius.

#pragma once

#include "syracuse/real.hpp"

namespace syracuse {

class ball_domain_error : public kernel_domain_error {
public:
    explicit ball_domain_error(const std::string& what) : kernel_domain_error(what) {}
};

class ambiguous_floor : public kernel_domain_error {
public:
    explicit ambiguous_floor(const std::string& what) : kernel_domain_error(what) {}
};

class Ball {
public:
    static constexpr prec_t RAD_PREC = 32;

    Ball() : mid_(64), rad_(RAD_PREC) {}

    static Ball exact(Real m) {
        Ball b;
        b.mid_ = std::move(m);
        return b;
    }

    static Ball exact(long v, prec_t prec) { return exact(Real::of(v, prec)); }

    static Ball midrad(Real m, Real r) {
        if (r.sgn() < 0) throw ball_domain_error("negative ball radius");
        Ball b;
        b.mid_ = std::move(m);
        mpfr_set(b.rad_.raw(), r.raw(), MPFR_RNDU);
        return b;
    }

    // Smallest ball containing [lo, hi].
    static Ball from_interval(const Real& lo, const Real& hi, prec_t prec) {
        if (lo > hi) throw ball_domain_error("from_interval: lo > hi");
        Real m = Real::mul_2si(Real::add(lo, hi, prec), -1);
        Real r(RAD_PREC);
        mpfr_sub(r.raw(), hi.raw(), lo.raw(), MPFR_RNDU);
        mpfr_mul_2si(r.raw(), r.raw(), -1, MPFR_RNDU);
        Ball b = midrad(std::move(m), r);
        // m was rounded; absorb its displacement from the true center.
        Real slip(RAD_PREC);
        mpfr_sub(slip.raw(), b.mid_.raw(), lo.raw(), MPFR_RNDU);
        if (slip.sgn() < 0) mpfr_neg(slip.raw(), slip.raw(), MPFR_RNDU);
        Real slip2(RAD_PREC);
        mpfr_sub(slip2.raw(), hi.raw(), b.mid_.raw(), MPFR_RNDU);
        if (slip2.sgn() < 0) mpfr_neg(slip2.raw(), slip2.raw(), MPFR_RNDU);
        Real widest = Real::max(slip, slip2);
        mpfr_set(b.rad_.raw(), widest.raw(), MPFR_RNDU);
        return b;
    }

    const Real& mid() const { return mid_; }
    const Real& rad() const { return rad_; }
    prec_t prec() const { return mid_.prec(); }
    bool is_exact() const { return rad_.is_zero(); }

    // Certified interval bounds (directed rounding at full precision).
    Real lo() const {
        Real r(mid_.prec());
        mpfr_sub(r.raw(), mid_.raw(), rad_.raw(), MPFR_RNDD);
        return r;
    }

    Real hi() const {
        Real r(mid_.prec());
        mpfr_add(r.raw(), mid_.raw(), rad_.raw(), MPFR_RNDU);
        return r;
    }

    bool contains_zero() const {
        Real a(RAD_PREC);
        mpfr_abs(a.raw(), mid_.raw(), MPFR_RNDD);
        return mpfr_cmp(a.raw(), rad_.raw()) <= 0;
    }

    bool contains(const Real& x) const {
        Real d(RAD_PREC);
        mpfr_sub(d.raw(), x.raw(), mid_.raw(), MPFR_RNDU);
        mpfr_abs(d.raw(), d.raw(), MPFR_RNDU);
        return mpfr_cmp(d.raw(), rad_.raw()) <= 0;
    }

    // Certified subset test: |mid - outer.mid| + rad <= outer.rad.
    bool inside(const Ball& outer) const {
        Real d(RAD_PREC);
        mpfr_sub(d.raw(), mid_.raw(), outer.mid_.raw(), MPFR_RNDU);
        mpfr_abs(d.raw(), d.raw(), MPFR_RNDU);
        mpfr_add(d.raw(), d.raw(), rad_.raw(), MPFR_RNDU);
        return mpfr_cmp(d.raw(), outer.rad_.raw()) <= 0;
    }

    // +1 / -1 when the whole ball is strictly on one side of zero, else 0.
    int certain_sign() const {
        if (contains_zero()) return 0;
        return mid_.sgn();
    }

    // sup |x| over the ball, rounded up.
    Real sup_abs() const {
        Real s(RAD_PREC);
        mpfr_abs(s.raw(), mid_.raw(), MPFR_RNDU);
        mpfr_add(s.raw(), s.raw(), rad_.raw(), MPFR_RNDU);
        return s;
    }

    // inf |x| over the ball, rounded down; zero if the ball straddles 0.
    Real inf_abs() const {
        Real s(RAD_PREC);
        mpfr_abs(s.raw(), mid_.raw(), MPFR_RNDD);
        mpfr_sub(s.raw(), s.raw(), rad_.raw(), MPFR_RNDD);
        if (s.sgn() < 0) mpfr_set_zero(s.raw(), 1);
        return s;
    }

    friend bool surely_lt(const Ball& a, const Ball& b) { return a.hi() < b.lo(); }
    friend bool surely_gt(const Ball& a, const Ball& b) { return a.lo() > b.hi(); }

    // -- arithmetic ----------------------------------------------------------

    static Ball add(const Ball& a, const Ball& b, prec_t p) {
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_add(out.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        rad_sum(out.rad_, a.rad_, b.rad_);
        add_ulp_error(out, t);
        return out;
    }

    static Ball sub(const Ball& a, const Ball& b, prec_t p) {
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_sub(out.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        rad_sum(out.rad_, a.rad_, b.rad_);
        add_ulp_error(out, t);
        return out;
    }

    static Ball neg(const Ball& a) {
        Ball out = a;
        mpfr_neg(out.mid_.raw(), out.mid_.raw(), MPFR_RNDN);  // exact
        return out;
    }

    static Ball abs(const Ball& a) {
        Ball out = a;
        mpfr_abs(out.mid_.raw(), out.mid_.raw(), MPFR_RNDN);  // exact
        return out;
    }

    static Ball mul(const Ball& a, const Ball& b, prec_t p) {
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_mul(out.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        // |a|rb + |b|ra + ra rb, everything upward.
        Real am = up_abs(a.mid_), bm = up_abs(b.mid_);
        Real r1(RAD_PREC), r2(RAD_PREC), r3(RAD_PREC);
        mpfr_mul(r1.raw(), am.raw(), b.rad_.raw(), MPFR_RNDU);
        mpfr_mul(r2.raw(), bm.raw(), a.rad_.raw(), MPFR_RNDU);
        mpfr_mul(r3.raw(), a.rad_.raw(), b.rad_.raw(), MPFR_RNDU);
        mpfr_add(out.rad_.raw(), r1.raw(), r2.raw(), MPFR_RNDU);
        mpfr_add(out.rad_.raw(), out.rad_.raw(), r3.raw(), MPFR_RNDU);
        add_ulp_error(out, t);
        return out;
    }

    static Ball div(const Ball& a, const Ball& b, prec_t p) {
        // Requires 0 outside b.
        Real blo = down_abs_minus_rad(b);
        if (blo.sgn() <= 0) throw ball_domain_error("ball division by ball containing zero");
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_div(out.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        // (ra|b| + |a|rb) / (|b| * (|b|-rb))
        Real am = up_abs(a.mid_), bm = up_abs(b.mid_);
        Real num1(RAD_PREC), num2(RAD_PREC), num(RAD_PREC), den(RAD_PREC);
        mpfr_mul(num1.raw(), a.rad_.raw(), bm.raw(), MPFR_RNDU);
        mpfr_mul(num2.raw(), am.raw(), b.rad_.raw(), MPFR_RNDU);
        mpfr_add(num.raw(), num1.raw(), num2.raw(), MPFR_RNDU);
        Real bm_down(RAD_PREC);
        mpfr_abs(bm_down.raw(), b.mid_.raw(), MPFR_RNDD);
        mpfr_mul(den.raw(), bm_down.raw(), blo.raw(), MPFR_RNDD);
        mpfr_div(out.rad_.raw(), num.raw(), den.raw(), MPFR_RNDU);
        add_ulp_error(out, t);
        return out;
    }

    static Ball sqrt(const Ball& a, prec_t p) {
        Real alo = down_lo(a);
        if (alo.sgn() <= 0) throw ball_domain_error("ball sqrt needs a strictly positive ball");
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_sqrt(out.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        // Lipschitz bound 1 / (2 sqrt(lo)).
        Real s(RAD_PREC);
        mpfr_sqrt(s.raw(), alo.raw(), MPFR_RNDD);
        mpfr_mul_2si(s.raw(), s.raw(), 1, MPFR_RNDD);
        mpfr_div(out.rad_.raw(), a.rad_.raw(), s.raw(), MPFR_RNDU);
        add_ulp_error(out, t);
        return out;
    }

    static Ball log(const Ball& a, prec_t p) {
        Real alo = down_lo(a);
        if (alo.sgn() <= 0) throw ball_domain_error("ball log needs a strictly positive ball");
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_log(out.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        mpfr_div(out.rad_.raw(), a.rad_.raw(), alo.raw(), MPFR_RNDU);
        add_ulp_error(out, t);
        return out;
    }

    static Ball exp(const Ball& a, prec_t p) {
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_exp(out.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        // Lipschitz bound exp(hi).
        Real ahi(RAD_PREC);
        mpfr_add(ahi.raw(), a.mid_.raw(), a.rad_.raw(), MPFR_RNDU);
        Real l(RAD_PREC);
        mpfr_exp(l.raw(), ahi.raw(), MPFR_RNDU);
        mpfr_mul(out.rad_.raw(), l.raw(), a.rad_.raw(), MPFR_RNDU);
        add_ulp_error(out, t);
        return out;
    }

    // Plain cosine; Lipschitz constant 1 in the (radian) argument.
    static Ball cos(const Ball& a, prec_t p) {
        Ball out;
        out.mid_ = Real(p);
        int t = mpfr_cos(out.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        mpfr_set(out.rad_.raw(), a.rad_.raw(), MPFR_RNDU);
        add_ulp_error(out, t);
        return out;
    }

    // Exact scaling by 2^e.
    static Ball mul_2si(const Ball& a, long e) {
        Ball out = a;
        mpfr_mul_2si(out.mid_.raw(), out.mid_.raw(), e, MPFR_RNDN);
        mpfr_mul_2si(out.rad_.raw(), out.rad_.raw(), e, MPFR_RNDU);
        return out;
    }

    static Ball add_exact(const Ball& a, const Real& c, prec_t p) { return add(a, exact(c), p); }
    static Ball mul_exact(const Ball& a, const Real& c, prec_t p) { return mul(a, exact(c), p); }

    // Pad the radius by r (upward).
    static Ball widen(const Ball& a, const Real& r) {
        Ball out = a;
        mpfr_add(out.rad_.raw(), out.rad_.raw(), r.raw(), MPFR_RNDU);
        return out;
    }

private:
    friend Ball cospi(const Ball&, prec_t);
    friend Ball sinpi(const Ball&, prec_t);
    friend Ball mod2(const Ball&);

    static Real up_abs(const Real& x) {
        Real r(RAD_PREC);
        mpfr_abs(r.raw(), x.raw(), MPFR_RNDU);
        return r;
    }

    // |mid| - rad, rounded down (inf of |x| assuming sign-definite ball).
    static Real down_abs_minus_rad(const Ball& b) {
        Real r(RAD_PREC);
        mpfr_abs(r.raw(), b.mid_.raw(), MPFR_RNDD);
        mpfr_sub(r.raw(), r.raw(), b.rad_.raw(), MPFR_RNDD);
        return r;
    }

    // mid - rad rounded down.
    static Real down_lo(const Ball& b) {
        Real r(RAD_PREC);
        mpfr_sub(r.raw(), b.mid_.raw(), b.rad_.raw(), MPFR_RNDD);
        return r;
    }

    static void rad_sum(Real& out, const Real& ra, const Real& rb) {
        mpfr_add(out.raw(), ra.raw(), rb.raw(), MPFR_RNDU);
    }

    // One ulp of the freshly rounded midpoint, added when rounding was inexact.
    static void add_ulp_error(Ball& b, int ternary) {
        if (ternary == 0) return;
        if (mpfr_zero_p(b.mid_.raw()))
            throw ball_domain_error("ball midpoint underflowed to zero");
        mpfr_exp_t e = mpfr_get_exp(b.mid_.raw());
        Real u(RAD_PREC);
        mpfr_set_ui_2exp(u.raw(), 1, e - b.mid_.prec(), MPFR_RNDU);
        mpfr_add(b.rad_.raw(), b.rad_.raw(), u.raw(), MPFR_RNDU);
    }

    Real mid_;
    Real rad_;
};

namespace detail {

// x reduced mod 2 into (-2, 2), bit-exact. The remainder of a binary float
// by 2 needs no more significand bits than the input carries.
inline Real mod2_reduce_exact(const Real& x) {
    Real two = Real::of(2L, 8);
    Real r(std::max<prec_t>(x.prec(), 64) + 8);
    int t = mpfr_fmod(r.raw(), x.raw(), two.raw(), MPFR_RNDN);
    if (t != 0) throw kernel_domain_error("mod2 reduction unexpectedly inexact");
    return r;
}

// Classifies an exactly reduced argument against the half-integer lattice.
// Returns 2 when not a half-integer.
inline int half_integer_class(const Real& r, long& twice) {
    Real dbl = Real::mul_2si(r, 1);
    if (!dbl.is_integer()) return 2;
    twice = dbl.to_long();  // |r| < 2 so this fits comfortably
    return 0;
}

}  // namespace detail

namespace detail {

// Absolute evaluation error bound 2^(2-p) for the reduced cos/sin below:
// pi rounding contributes < 2^(-p-12), the final rounding < 2^(1-p).
inline Real trig_eval_err(prec_t p) { return Real::pow2(2 - static_cast<long>(p)); }

// 3.1416015625 > pi, exact in 20 bits.
inline Real pi_upper_bound() { return Real::of(3.1416015625, 24); }

inline Real cospi_impl(const Real& x, prec_t p, bool& exact) {
    Real r = mod2_reduce_exact(x);
    long twice = 0;
    if (half_integer_class(r, twice) == 0) {
        exact = true;
        long m = ((twice % 4) + 4) % 4;  // r = m/2 mod 2
        switch (m) {
            case 0: return Real::of(1L, p);
            case 2: return Real::of(-1L, p);
            default: return Real::of(0L, p);
        }
    }
    exact = false;
    prec_t wp = p + 16;
    Real arg = Real::mul(const_pi(wp), r, wp);
    Real out(p);
    mpfr_cos(out.raw(), arg.raw(), MPFR_RNDN);
    return out;
}

inline Real sinpi_impl(const Real& x, prec_t p, bool& exact) {
    Real r = mod2_reduce_exact(x);
    long twice = 0;
    if (half_integer_class(r, twice) == 0) {
        exact = true;
        long m = ((twice % 4) + 4) % 4;  // r = m/2 mod 2
        switch (m) {
            case 0: case 2: return Real::of(0L, p);
            case 1: return Real::of(1L, p);
            default: return Real::of(-1L, p);
        }
    }
    exact = false;
    prec_t wp = p + 16;
    Real arg = Real::mul(const_pi(wp), r, wp);
    Real out(p);
    mpfr_sin(out.raw(), arg.raw(), MPFR_RNDN);
    return out;
}

}  // namespace detail

// cos(pi x) with argument reduction performed on x (exactly, mod 2) rather
// than on pi*x, so the absolute accuracy is independent of |x|. Exact at
// half-integers.
inline Real cospi_point(const Real& x, prec_t p) {
    bool exact = false;
    return detail::cospi_impl(x, p, exact);
}

inline Real sinpi_point(const Real& x, prec_t p) {
    bool exact = false;
    return detail::sinpi_impl(x, p, exact);
}

inline Ball cospi(const Ball& a, prec_t p) {
    bool exact_val = false;
    Real m = detail::cospi_impl(a.mid(), p, exact_val);
    Real r(Ball::RAD_PREC);
    mpfr_mul(r.raw(), detail::pi_upper_bound().raw(), a.rad().raw(), MPFR_RNDU);
    if (!exact_val)
        mpfr_add(r.raw(), r.raw(), detail::trig_eval_err(p).raw(), MPFR_RNDU);
    return Ball::midrad(std::move(m), r);
}

inline Ball sinpi(const Ball& a, prec_t p) {
    bool exact_val = false;
    Real m = detail::sinpi_impl(a.mid(), p, exact_val);
    Real r(Ball::RAD_PREC);
    mpfr_mul(r.raw(), detail::pi_upper_bound().raw(), a.rad().raw(), MPFR_RNDU);
    if (!exact_val)
        mpfr_add(r.raw(), r.raw(), detail::trig_eval_err(p).raw(), MPFR_RNDU);
    return Ball::midrad(std::move(m), r);
}

// x mod 2 as a value in [0, 2), carrying the input's absolute error through.
// Throws ambiguous_floor when the enclosure straddles an even integer, i.e.
// the floor in x - 2*floor(x/2) is not certain.
inline Ball mod2(const Ball& x) {
    Real r = detail::mod2_reduce_exact(x.mid());
    if (r.sgn() < 0) {
        Real shifted(r.prec());
        int t = mpfr_add_ui(shifted.raw(), r.raw(), 2, MPFR_RNDN);
        if (t != 0) throw kernel_domain_error("mod2 shift unexpectedly inexact");
        r = std::move(shifted);
    }
    if (!x.rad().is_zero()) {
        // Distance from the residue to the nearest even integer must exceed rad.
        Real d0(Ball::RAD_PREC);
        mpfr_set(d0.raw(), r.raw(), MPFR_RNDD);
        Real d2(Ball::RAD_PREC);
        Real two = Real::of(2L, 8);
        mpfr_sub(d2.raw(), two.raw(), r.raw(), MPFR_RNDD);
        if (mpfr_cmp(d0.raw(), x.rad().raw()) < 0 || mpfr_cmp(d2.raw(), x.rad().raw()) < 0)
            throw ambiguous_floor("mod2: enclosure straddles an even integer");
    }
    return Ball::midrad(std::move(r), x.rad());
}

}  // namespace syracuse
