// The integer maps T (3x+1) and U (3x-1), and the real-analytic extension
//
//     f(x) = x + 1/4 - (x/2 + 1/4) cos(pi x)
//
// with closed-form derivatives up to third order, the Schwarzian, the
// asymptotic factor g and periodic correction h, and mod-2 reduction.
//
// Ball evaluation of f and f' uses the mean value form: the image of
// (m, r) is f(m) +- sup|f'| * r with the derivative range bounded over the
// input ball. Near integers the naive composed radius would grow like
// pi*|x|/2 per step while the true local Lipschitz constant is O(1); the
// mean value form is what keeps long orbit enclosures usable.

#pragma once

#include "syracuse/ball.hpp"

#include <gmpxx.h>

namespace syracuse::maps {

enum class Side { negative, zero, positive };

inline Side side_of(const Real& x) {
    int s = x.sgn();
    return s < 0 ? Side::negative : (s > 0 ? Side::positive : Side::zero);
}

// -- integer maps ------------------------------------------------------------

// T(n) = (3n+1)/2 if n odd, n/2 if n even.
inline mpz_class t_step(const mpz_class& n) {
    if (mpz_odd_p(n.get_mpz_t())) return (3 * n + 1) / 2;
    return n / 2;
}

// U(n) = (3n-1)/2 if n odd, n/2 if n even.
inline mpz_class u_step(const mpz_class& n) {
    if (mpz_odd_p(n.get_mpz_t())) return (3 * n - 1) / 2;
    return n / 2;
}

// Signed step of f restricted to the integers: f(n) = T(n) for n > 0 and
// f(-n) = -U(n), which is the conjugation the negative half-line runs on.
inline mpz_class f_integer_step(const mpz_class& n) {
    if (n >= 0) return t_step(n);
    mpz_class m = -n;
    return -u_step(m);
}

// -- point evaluation (round-to-nearest, no enclosure) ------------------------

inline Real f_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real c = cospi_point(x, wp);
    Real quarter = Real::of(0.25, wp);
    Real q = Real::add(Real::mul_2si(x, -1), quarter, wp);
    return Real::sub(Real::add(x, quarter, wp), Real::mul(q, c, wp), p);
}

// f'(x) = 1 - cos(pi x)/2 + pi (x/2 + 1/4) sin(pi x)
inline Real f_prime_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real c = cospi_point(x, wp);
    Real s = sinpi_point(x, wp);
    Real q = Real::add(Real::mul_2si(x, -1), Real::of(0.25, wp), wp);
    Real term = Real::mul(Real::mul(const_pi(wp), q, wp), s, wp);
    Real out = Real::sub(Real::of(1L, wp), Real::mul_2si(c, -1), wp);
    return Real::add(out, term, p);
}

// f''(x) = pi sin(pi x) + pi^2 (x/2 + 1/4) cos(pi x)
inline Real f_second_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real c = cospi_point(x, wp);
    Real s = sinpi_point(x, wp);
    Real pi = const_pi(wp);
    Real q = Real::add(Real::mul_2si(x, -1), Real::of(0.25, wp), wp);
    Real t1 = Real::mul(pi, s, wp);
    Real t2 = Real::mul(Real::mul(Real::mul(pi, pi, wp), q, wp), c, wp);
    return Real::add(t1, t2, p);
}

// f'''(x) = (3 pi^2/2) cos(pi x) - pi^3 (x/2 + 1/4) sin(pi x)
inline Real f_third_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real c = cospi_point(x, wp);
    Real s = sinpi_point(x, wp);
    Real pi = const_pi(wp);
    Real pi2 = Real::mul(pi, pi, wp);
    Real q = Real::add(Real::mul_2si(x, -1), Real::of(0.25, wp), wp);
    Real t1 = Real::mul(Real::mul_2si(Real::mul(pi2, Real::of(3L, wp), wp), -1), c, wp);
    Real t2 = Real::mul(Real::mul(Real::mul(pi2, pi, wp), q, wp), s, wp);
    return Real::sub(t1, t2, p);
}

inline Real f_deriv_point(const Real& x, int order, prec_t p) {
    switch (order) {
        case 1: return f_prime_point(x, p);
        case 2: return f_second_point(x, p);
        case 3: return f_third_point(x, p);
        default: throw kernel_domain_error("f_deriv_point: order must be 1, 2 or 3");
    }
}

// -- ball evaluation ----------------------------------------------------------

namespace detail {

// x/2 + 1/4 as a ball (exact halving, quarter exact).
inline Ball half_plus_quarter(const Ball& x, prec_t p) {
    return Ball::add(Ball::mul_2si(x, -1), Ball::exact(Real::of(0.25, 8)), p);
}

}  // namespace detail

// Naive composed enclosure of f''; used as the Lipschitz bound for f'.
inline Ball f_second_ball(const Ball& x, prec_t p) {
    Ball c = cospi(x, p);
    Ball s = sinpi(x, p);
    Ball pi = Ball::midrad(const_pi(p), Real::pow2(2 - static_cast<long>(p)));
    Ball q = detail::half_plus_quarter(x, p);
    Ball t1 = Ball::mul(pi, s, p);
    Ball t2 = Ball::mul(Ball::mul(Ball::mul(pi, pi, p), q, p), c, p);
    return Ball::add(t1, t2, p);
}

inline Ball f_third_ball(const Ball& x, prec_t p) {
    Ball c = cospi(x, p);
    Ball s = sinpi(x, p);
    Ball pi = Ball::midrad(const_pi(p), Real::pow2(2 - static_cast<long>(p)));
    Ball pi2 = Ball::mul(pi, pi, p);
    Ball q = detail::half_plus_quarter(x, p);
    Ball t1 = Ball::mul(Ball::mul_2si(Ball::mul_exact(pi2, Real::of(3L, 8), p), -1), c, p);
    Ball t2 = Ball::mul(Ball::mul(Ball::mul(pi2, pi, p), q, p), s, p);
    return Ball::sub(t1, t2, p);
}

// f' over a ball: mean value form around the midpoint with f'' as the
// derivative bound.
inline Ball f_prime_ball(const Ball& x, prec_t p) {
    Ball at_mid = [&] {
        Ball xm = Ball::exact(x.mid());
        Ball c = cospi(xm, p);
        Ball s = sinpi(xm, p);
        Ball pi = Ball::midrad(const_pi(p), Real::pow2(2 - static_cast<long>(p)));
        Ball q = detail::half_plus_quarter(xm, p);
        Ball term = Ball::mul(Ball::mul(pi, q, p), s, p);
        Ball out = Ball::sub(Ball::exact(Real::of(1L, 8)), Ball::mul_2si(c, -1), p);
        return Ball::add(out, term, p);
    }();
    if (x.rad().is_zero()) return at_mid;
    Real lip = f_second_ball(x, Ball::RAD_PREC + 16).sup_abs();
    Real pad(Ball::RAD_PREC);
    mpfr_mul(pad.raw(), lip.raw(), x.rad().raw(), MPFR_RNDU);
    return Ball::widen(at_mid, pad);
}

// f over a ball: mean value form with f' as the derivative bound.
inline Ball f_ball(const Ball& x, prec_t p) {
    Ball at_mid = [&] {
        Ball xm = Ball::exact(x.mid());
        Ball c = cospi(xm, p);
        Ball q = detail::half_plus_quarter(xm, p);
        Ball quarter = Ball::exact(Real::of(0.25, 8));
        return Ball::sub(Ball::add(xm, quarter, p), Ball::mul(q, c, p), p);
    }();
    if (x.rad().is_zero()) return at_mid;
    Real lip = f_prime_ball(x, Ball::RAD_PREC + 16).sup_abs();
    Real pad(Ball::RAD_PREC);
    mpfr_mul(pad.raw(), lip.raw(), x.rad().raw(), MPFR_RNDU);
    return Ball::widen(at_mid, pad);
}

inline Ball f_deriv_ball(const Ball& x, int order, prec_t p) {
    switch (order) {
        case 1: return f_prime_ball(x, p);
        case 2: return f_second_ball(x, p);
        case 3: return f_third_ball(x, p);
        default: throw kernel_domain_error("f_deriv_ball: order must be 1, 2 or 3");
    }
}

inline Ball f_iterate_ball(Ball x, long k, prec_t p) {
    for (long i = 0; i < k; ++i) x = f_ball(x, p);
    return x;
}

// -- Schwarzian ---------------------------------------------------------------

class derivative_vanishes : public kernel_domain_error {
public:
    explicit derivative_vanishes(const std::string& what) : kernel_domain_error(what) {}
};

// Sf = f'''/f' - (3/2)(f''/f')^2
inline Real schwarzian_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real d1 = f_prime_point(x, wp);
    if (d1.is_zero()) throw derivative_vanishes("schwarzian: f'(x) = 0");
    Real d2 = f_second_point(x, wp);
    Real d3 = f_third_point(x, wp);
    Real ratio = Real::div(d2, d1, wp);
    Real sq = Real::mul(ratio, ratio, wp);
    Real out = Real::div(d3, d1, wp);
    return Real::sub(out, Real::add(sq, Real::mul_2si(sq, -1), wp), p);
}

inline Ball schwarzian_ball(const Ball& x, prec_t p) {
    Ball d1 = f_prime_ball(x, p);
    if (d1.contains_zero()) throw derivative_vanishes("schwarzian: f' enclosure contains 0");
    Ball d2 = f_second_ball(x, p);
    Ball d3 = f_third_ball(x, p);
    Ball ratio = Ball::div(d2, d1, p);
    Ball sq = Ball::mul(ratio, ratio, p);
    Ball out = Ball::div(d3, d1, p);
    return Ball::sub(out, Ball::add(sq, Ball::mul_2si(sq, -1), p), p);
}

// -- asymptotic decomposition f(x) = g(x) (x + h(x)) ---------------------------

// g(x) = 1 - cos(pi x)/2
inline Real g_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real c = cospi_point(x, wp);
    return Real::sub(Real::of(1L, wp), Real::mul_2si(c, -1), p);
}

inline Ball g_ball(const Ball& x, prec_t p) {
    Ball c = cospi(x, p);
    return Ball::sub(Ball::exact(Real::of(1L, 8)), Ball::mul_2si(c, -1), p);
}

// h(x) = (1 - cos(pi x)) / (4 - 2 cos(pi x)), valued in [0, 1/3].
inline Real h_point(const Real& x, prec_t p) {
    prec_t wp = p + 8;
    Real c = cospi_point(x, wp);
    Real one = Real::of(1L, wp);
    Real num = Real::sub(one, c, wp);
    Real den = Real::sub(Real::of(4L, wp), Real::mul_2si(c, 1), wp);
    return Real::div(num, den, p);
}

inline Ball h_ball(const Ball& x, prec_t p) {
    Ball c = cospi(x, p);
    Ball one = Ball::exact(Real::of(1L, 8));
    Ball num = Ball::sub(one, c, p);
    Ball den = Ball::sub(Ball::exact(Real::of(4L, 8)), Ball::mul_2si(c, 1), p);
    return Ball::div(num, den, p);
}

}  // namespace syracuse::maps
