// Certified critical points c_n of f (roots of f' adjacent to the integer n)
// and the fixed-point catalogue: mu_i on the positive axis, the reflected
// nu_i = -1 - mu_i, and the period-2 fixed point x1 of f^2 in (1, c_1).
//
// Brackets for n > 0 follow the sign analysis of f' near the integers:
//   n even:  n - 1/(pi^2 n) < c_n < n
//   n odd:   n < c_n < n + 3/(pi^2 n)
// For n < 0 the brackets mirror (even: right of n, odd: left of n); these are
// derived from the same sign analysis, so each one is certified by a ball sign change
// and widened adaptively if the first guess is too tight.

#pragma once

#include "syracuse/maps.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace syracuse::critical {

class bracket_failure : public kernel_domain_error {
public:
    explicit bracket_failure(const std::string& what) : kernel_domain_error(what) {}
};

struct CriticalPoint {
    long n = 0;
    Ball enclosure;
    prec_t bits = 0;
    bool derived_bracket = false;  // negative-side bracket (not covered by the positive-side bounds)
};

namespace detail {

// Certified sign of fn at an exact point; 0 when the ball straddles zero.
template <typename FnBall>
int point_sign(FnBall&& fn, const Real& x, prec_t p) {
    return fn(Ball::exact(x), p).certain_sign();
}

// Bisection on certified signs. Requires sign(lo) = -sign(hi), both nonzero.
// Narrows [lo, hi] until width <= width_goal or the sign at the midpoint
// becomes uncertain (fine: Newton takes over from the midpoint).
template <typename FnBall>
void bisect(FnBall&& fn, Real& lo, Real& hi, int sign_lo, const Real& width_goal, prec_t p) {
    for (int i = 0; i < 200; ++i) {
        Real width = Real::sub(hi, lo, p);
        if (width <= width_goal) return;
        Real mid = Real::mul_2si(Real::add(lo, hi, p), -1);
        int s = point_sign(fn, mid, p);
        if (s == 0) {
            // nudge off the root
            Real step = Real::mul_2si(width, -6);
            mid = Real::add(mid, step, p);
            s = point_sign(fn, mid, p);
            if (s == 0) return;
        }
        if (s == sign_lo) lo = mid; else hi = mid;
    }
}

}  // namespace detail

// Enclosure of the unique root of f' in the one-sided bracket adjacent to the
// integer n. target_rad_exp e asks for radius <= 2^e.
inline CriticalPoint critical_point(long n, const PrecisionPolicy& policy, long target_rad_exp = 0) {
    if (n == 0) throw kernel_domain_error("critical_point: n must be nonzero");
    policy.validate();
    if (target_rad_exp == 0)
        target_rad_exp = -(static_cast<long>(policy.agreement_digits * 3.33) + 8);

    auto fprime = [](const Ball& b, prec_t p) { return maps::f_prime_ball(b, p); };

    const bool negative = n < 0;
    const long absn = std::labs(n);
    const bool odd = (absn % 2) != 0;

    for (prec_t p = std::max<prec_t>(policy.start_bits, 96);; p = policy.next(p)) {
        if (p > policy.max_bits)
            throw escalation_exhausted("critical_point(" + std::to_string(n) + "): precision exhausted");

        Real pi = const_pi(p);
        Real pi2n = Real::mul(Real::mul(pi, pi, p), Real::of(absn, p), p);
        Real nn = Real::of(n, p);

        // Base offset away from n: 1/(pi^2 n) on the even side, 3/(pi^2 n) odd.
        Real base = Real::div(Real::of(odd ? 3L : 1L, p), pi2n, p);
        // n > 0: even root left of n, odd right. n < 0: mirrored.
        const bool root_right = (!negative && odd) || (negative && !odd);

        Ball enclosure;
        bool found = false;

        // The base brackets are asymptotic; small |n| can need a wider arm.
        for (double expand : {1.0, 1.25, 1.5, 2.0, 3.0}) {
            Real off = Real::mul(base, Real::of(expand, p), p);
            Real lo = root_right ? nn : Real::sub(nn, off, p);
            Real hi = root_right ? Real::add(nn, off, p) : nn;
            int s_lo = detail::point_sign(fprime, lo, p);
            int s_hi = detail::point_sign(fprime, hi, p);
            if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) continue;  // widen and retry

            // ~16 certified bits from bisection, then Newton on f'.
            Real width_goal = Real::mul_2si(Real::sub(hi, lo, p), -16);
            detail::bisect(fprime, lo, hi, s_lo, width_goal, p);
            Real x = Real::mul_2si(Real::add(lo, hi, p), -1);
            for (int it = 0; it < 64; ++it) {
                Real d1 = maps::f_prime_point(x, p);
                Real d2 = maps::f_second_point(x, p);
                if (d2.is_zero()) break;
                Real step = Real::div(d1, d2, p);
                x = Real::sub(x, step, p);
                if (Real::abs(step) < Real::pow2(target_rad_exp - 8, 32)) break;
            }

            // Certify a sign change across [x - eps, x + eps].
            for (long ee = target_rad_exp; ee < target_rad_exp + 40; ee += 4) {
                Real eps = Real::pow2(ee, 32);
                Real a = Real::sub(x, eps, p);
                Real b = Real::add(x, eps, p);
                int sa = detail::point_sign(fprime, a, p);
                int sb = detail::point_sign(fprime, b, p);
                if (sa != 0 && sb != 0 && sa == -sb && sa == s_lo) {
                    enclosure = Ball::midrad(x, eps);
                    found = true;
                    break;
                }
            }
            if (found) break;
            // Bracket was fine but certification failed: retry at higher precision.
            break;
        }

        if (found) {
            CriticalPoint cp;
            cp.n = n;
            cp.enclosure = enclosure;
            cp.bits = p;
            cp.derived_bracket = negative;
            return cp;
        }
        if (policy.next(p) > policy.max_bits)
            throw bracket_failure("critical_point(" + std::to_string(n) +
                                  "): no certified sign change in any candidate bracket");
    }
}

// -- fixed points ---------------------------------------------------------------

struct FixedPointInfo {
    std::string label;     // mu0, mu1, ..., nu0, nu1, ..., x1
    Ball enclosure;
    Ball multiplier;       // f'(p) (or (f^2)'(p) for x1)
    bool attractive = false;
    prec_t bits = 0;
};

namespace detail {

// f(x) - x as a ball.
inline Ball fixed_gap(const Ball& x, prec_t p) {
    return Ball::sub(maps::f_ball(x, p), x, p);
}

}  // namespace detail

// All fixed points mu_i of f in [0, x_max], ordered, plus their reflections
// nu_i = -1 - mu_i. mu_0 = 0 and nu_0 = -1 are exact.
inline std::vector<FixedPointInfo> fixed_points(double x_max, const PrecisionPolicy& policy) {
    if (x_max < 1.0) throw kernel_domain_error("fixed_points: x_max must be >= 1");
    policy.validate();
    prec_t p = std::max<prec_t>(policy.start_bits, 128);

    auto gap = [](const Ball& b, prec_t q) { return detail::fixed_gap(b, q); };

    std::vector<FixedPointInfo> mus;
    {
        FixedPointInfo zero;
        zero.label = "mu0";
        zero.enclosure = Ball::exact(Real::of(0L, p));
        zero.multiplier = maps::f_prime_ball(zero.enclosure, p);
        zero.attractive = true;
        zero.bits = p;
        mus.push_back(zero);
    }

    const int grid = 32;
    long cells = static_cast<long>(std::ceil(x_max));
    int prev_sign = 0;
    Real prev_x = Real::of(0L, p);
    for (long cell = 0; cell < cells; ++cell) {
        for (int j = (cell == 0 ? 1 : 0); j <= grid; ++j) {
            Real x = Real::add(Real::of(cell, p),
                               Real::div(Real::of(j, p), Real::of(grid, p), p), p);
            if (x.to_double() > x_max + 1e-12) break;
            int s = detail::point_sign(gap, x, p);
            if (s != 0 && prev_sign != 0 && s != prev_sign) {
                // bracketed root in [prev_x, x]
                Real lo = prev_x, hi = x;
                Real width_goal = Real::pow2(-24, 32);
                detail::bisect(gap, lo, hi, prev_sign, width_goal, p);
                Real root = Real::mul_2si(Real::add(lo, hi, p), -1);
                for (int it = 0; it < 64; ++it) {
                    Real d = Real::sub(maps::f_prime_point(root, p), Real::of(1L, p), p);
                    if (d.is_zero()) break;
                    Real val = Real::sub(maps::f_point(root, p), root, p);
                    Real step = Real::div(val, d, p);
                    root = Real::sub(root, step, p);
                    if (Real::abs(step) < Real::pow2(-static_cast<long>(p) + 16, 32)) break;
                }
                // certify
                for (long ee = -static_cast<long>(p) + 24; ee < -8; ee += 8) {
                    Real eps = Real::pow2(ee, 32);
                    Real a = Real::sub(root, eps, p);
                    Real b = Real::add(root, eps, p);
                    int sa = detail::point_sign(gap, a, p);
                    int sb = detail::point_sign(gap, b, p);
                    if (sa != 0 && sb != 0 && sa == -sb) {
                        FixedPointInfo fp;
                        fp.label = "mu" + std::to_string(mus.size());
                        fp.enclosure = Ball::midrad(root, eps);
                        fp.multiplier = maps::f_prime_ball(fp.enclosure, p);
                        Real sup = fp.multiplier.sup_abs();
                        Real inf = fp.multiplier.inf_abs();
                        fp.attractive = sup < Real::of(1L, 32);
                        if (!fp.attractive && !(inf > Real::of(1L, 32)))
                            throw kernel_domain_error("fixed_points: stability of " + fp.label +
                                                      " undecided at this precision");
                        fp.bits = p;
                        mus.push_back(fp);
                        break;
                    }
                }
            }
            if (s != 0) { prev_sign = s; prev_x = x; }
        }
    }

    // Reflections nu_i = -1 - mu_i (functional-equation image of the mu_i).
    std::vector<FixedPointInfo> out = mus;
    for (std::size_t i = 0; i < mus.size(); ++i) {
        FixedPointInfo nu;
        nu.label = "nu" + std::to_string(i);
        Ball minus_one = Ball::exact(Real::of(-1L, p));
        nu.enclosure = Ball::sub(minus_one, mus[i].enclosure, p);
        nu.multiplier = maps::f_prime_ball(nu.enclosure, p);
        Real sup = nu.multiplier.sup_abs();
        Real inf = nu.multiplier.inf_abs();
        nu.attractive = sup < Real::of(1L, 32);
        if (!nu.attractive && !(inf > Real::of(1L, 32)))
            throw kernel_domain_error("fixed_points: stability of " + nu.label + " undecided");
        nu.bits = p;
        out.push_back(nu);
    }
    return out;
}

// The unique fixed point x1 of f^2 in (1, c_1), certified repulsive.
inline FixedPointInfo x1_fixed_point(const PrecisionPolicy& policy) {
    policy.validate();
    prec_t p = std::max<prec_t>(policy.start_bits, 128);

    CriticalPoint c1 = critical_point(1, policy);

    auto gap2 = [](const Ball& b, prec_t q) {
        return Ball::sub(maps::f_ball(maps::f_ball(b, q), q), b, q);
    };

    Real lo = Real::add(Real::of(1L, p), Real::pow2(-6, p), p);  // clear of the cycle point 1
    Real hi = c1.enclosure.lo();
    int s_lo = detail::point_sign(gap2, lo, p);
    int s_hi = detail::point_sign(gap2, hi, p);
    if (s_lo == 0 || s_hi == 0 || s_lo == s_hi)
        throw bracket_failure("x1_fixed_point: bracket (1, c1) not certified");

    Real width_goal = Real::pow2(-24, 32);
    detail::bisect(gap2, lo, hi, s_lo, width_goal, p);
    Real x = Real::mul_2si(Real::add(lo, hi, p), -1);
    for (int it = 0; it < 64; ++it) {
        Real fx = maps::f_point(x, p);
        Real val = Real::sub(maps::f_point(fx, p), x, p);
        Real deriv = Real::sub(Real::mul(maps::f_prime_point(fx, p), maps::f_prime_point(x, p), p),
                               Real::of(1L, p), p);
        if (deriv.is_zero()) break;
        Real step = Real::div(val, deriv, p);
        x = Real::sub(x, step, p);
        if (Real::abs(step) < Real::pow2(-static_cast<long>(p) + 16, 32)) break;
    }

    for (long ee = -static_cast<long>(p) + 24; ee < -8; ee += 8) {
        Real eps = Real::pow2(ee, 32);
        Real a = Real::sub(x, eps, p);
        Real b = Real::add(x, eps, p);
        int sa = detail::point_sign(gap2, a, p);
        int sb = detail::point_sign(gap2, b, p);
        if (sa != 0 && sb != 0 && sa == -sb) {
            FixedPointInfo fp;
            fp.label = "x1";
            fp.enclosure = Ball::midrad(x, eps);
            Ball fx = maps::f_ball(fp.enclosure, p);
            fp.multiplier = Ball::mul(maps::f_prime_ball(fx, p), maps::f_prime_ball(fp.enclosure, p), p);
            if (!(fp.multiplier.inf_abs() > Real::of(1L, 32)))
                throw kernel_domain_error("x1_fixed_point: repulsiveness not certified");
            fp.attractive = false;
            fp.bits = p;
            return fp;
        }
    }
    throw bracket_failure("x1_fixed_point: no certified enclosure");
}

}  // namespace syracuse::critical
