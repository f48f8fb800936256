// Numeric kernel: escalating evaluation, ball containment, outward rounding,
// monotone refinement, determinism.

#include <doctest.h>

#include "syracuse/ball.hpp"
#include "syracuse/maps.hpp"

#include <cmath>
#include <random>

using namespace syracuse;

namespace {

double sample_in(const Ball& b, double t) {  // t in [-1, 1]
    return b.mid().to_double() + t * b.rad().to_double();
}

}  // namespace

TEST_CASE("escalating evaluation stabilizes on pi at the first level") {
    PrecisionPolicy policy;
    auto result = eval_escalating(
        [](prec_t p) {
            Real pi(p);
            mpfr_const_pi(pi.raw(), MPFR_RNDN);
            return pi;
        },
        policy);
    CHECK(result.achieved_bits == policy.start_bits);
    Real reference = Real::from_str("3.14159265358979323846264338327950288", 160);
    CHECK(Real::abs(Real::sub(result.value, reference, 160)) < Real::from_str("1e-35", 64));
}

TEST_CASE("f(2) is exactly 1 at every precision level") {
    for (prec_t p : {64L, 128L, 512L, 4096L}) {
        Real v = maps::f_point(Real::of(2L, p), p);
        CHECK(v == Real::of(1L, 64));
        Ball b = maps::f_ball(Ball::exact(Real::of(2L, p)), p);
        CHECK(b.is_exact());
        CHECK(b.mid() == Real::of(1L, 64));
    }
}

TEST_CASE("absolute-mode escalation certifies residues of huge arguments") {
    PrecisionPolicy policy;
    // x mod 2 for x ~ 2^200: relative agreement of x itself says nothing about
    // the residue; absolute mode compares the residues directly.
    auto residue = [](prec_t p) {
        Real x = Real::add(Real::pow2(200, p), Real::of(0.3, p), p);
        return mod2(Ball::exact(x)).mid();
    };
    auto rel = eval_escalating(residue, policy, false);
    auto abs_mode = eval_escalating(residue, policy, true);
    CHECK(std::abs(abs_mode.value.to_double() - 0.3) < 1e-9);
    CHECK(std::abs(rel.value.to_double() - 0.3) < 1e-9);
    // at 128 bits the stored 2^200 + 0.3 has no fractional part at all; the
    // residue only stabilizes once the precision clears the magnitude
    CHECK(abs_mode.achieved_bits > 200);
}

TEST_CASE("escalation exhaustion is reported") {
    PrecisionPolicy policy;
    policy.max_bits = 512;
    // A "computation" that never agrees with its refinement.
    auto diverging = [](prec_t p) { return Real::of(static_cast<long>(p), p); };
    CHECK_THROWS_AS(eval_escalating(diverging, policy), escalation_exhausted);
}

TEST_CASE("ball containment fuzz across the kernel operations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mids(-30.0, 30.0);
    std::uniform_real_distribution<double> rads(0.0, 0.25);
    std::uniform_real_distribution<double> ts(-1.0, 1.0);
    const prec_t p = 96;

    long checked = 0;
    for (int iter = 0; iter < 2000; ++iter) {
        Ball a = Ball::midrad(Real::of(mids(rng), p), Real::of(rads(rng), 32));
        Ball b = Ball::midrad(Real::of(mids(rng), p), Real::of(rads(rng), 32));
        int op = iter % 7;
        // keep divisors/log arguments away from zero
        if (op == 3 && std::abs(b.mid().to_double()) < 1.0) continue;
        if (op == 5 && a.mid().to_double() < 1.0) continue;

        Ball out;
        switch (op) {
            case 0: out = Ball::add(a, b, p); break;
            case 1: out = Ball::sub(a, b, p); break;
            case 2: out = Ball::mul(a, b, p); break;
            case 3: out = Ball::div(a, b, p); break;
            case 4: out = Ball::cos(a, p); break;
            case 5: out = Ball::log(a, p); break;
            default: out = Ball::exp(Ball::mul_2si(a, -3), p); break;
        }

        for (int s = 0; s < 8; ++s) {
            double xa = sample_in(a, ts(rng));
            double xb = sample_in(b, ts(rng));
            double y = 0;
            switch (op) {
                case 0: y = xa + xb; break;
                case 1: y = xa - xb; break;
                case 2: y = xa * xb; break;
                case 3: y = xa / xb; break;
                case 4: y = std::cos(xa); break;
                case 5: y = std::log(xa); break;
                default: y = std::exp(xa / 8.0); break;
            }
            // the double image carries its own rounding slop; pad by 1e-12 relative
            double pad = 1e-12 * (1.0 + std::abs(y));
            CHECK(y >= out.lo().to_double() - pad);
            CHECK(y <= out.hi().to_double() + pad);
            ++checked;
        }
    }
    CHECK(checked > 10000);
}

TEST_CASE("monotone refinement: doubling precision never widens an expression's ball") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vals(-8.0, 8.0);
    for (int iter = 0; iter < 200; ++iter) {
        double x = vals(rng), y = vals(rng);
        auto eval = [&](prec_t p) {
            Ball a = Ball::exact(Real::of(x, p));
            Ball b = Ball::exact(Real::of(y, p));
            Ball t = Ball::mul(Ball::add(a, b, p), Ball::cos(a, p), p);
            return Ball::exp(Ball::mul_2si(t, -4), p);
        };
        for (prec_t p : {64L, 128L, 256L}) {
            Ball coarse = eval(p);
            Ball fine = eval(2 * p);
            CHECK(fine.rad() <= coarse.rad());
        }
    }
}

TEST_CASE("determinism: identical inputs and precision give bit-identical results") {
    Real x = Real::of(0.1, 128);
    Real a = maps::f_point(x, 128);
    Real b = maps::f_point(x, 128);
    CHECK(mpfr_cmp(a.raw(), b.raw()) == 0);
    CHECK(mpfr_get_prec(a.raw()) == mpfr_get_prec(b.raw()));

    Ball ba = maps::f_ball(Ball::midrad(x, Real::pow2(-40, 32)), 128);
    Ball bb = maps::f_ball(Ball::midrad(x, Real::pow2(-40, 32)), 128);
    CHECK(mpfr_cmp(ba.mid().raw(), bb.mid().raw()) == 0);
    CHECK(mpfr_cmp(ba.rad().raw(), bb.rad().raw()) == 0);
}

TEST_CASE("cospi and sinpi are exact on the half-integer lattice") {
    const prec_t p = 128;
    CHECK(cospi_point(Real::of(2L, p), p) == Real::of(1L, 8));
    CHECK(cospi_point(Real::of(3L, p), p) == Real::of(-1L, 8));
    CHECK(cospi_point(Real::of(0.5, p), p) == Real::of(0L, 8));
    CHECK(cospi_point(Real::of(-1.5, p), p) == Real::of(0L, 8));
    CHECK(sinpi_point(Real::of(0.5, p), p) == Real::of(1L, 8));
    CHECK(sinpi_point(Real::of(1.5, p), p) == Real::of(-1L, 8));
    CHECK(sinpi_point(Real::of(-0.5, p), p) == Real::of(-1L, 8));
    CHECK(sinpi_point(Real::of(7L, p), p) == Real::of(0L, 8));

    // huge arguments keep absolute accuracy: the reduction of 2^100 + t is t
    Real t = Real::div(Real::of(1L, 200), Real::of(3L, 200), 200);
    Real big = Real::add(Real::pow2(100, 320), t, 320);  // exact sum at 320 bits
    Real c = cospi_point(big, 128);
    Real expect = cospi_point(t, 128);
    CHECK(Real::abs(Real::sub(c, expect, 128)) < Real::pow2(-100, 32));
    CHECK(std::abs(expect.to_double() - 0.5) < 1e-15);
}

TEST_CASE("mod2 reduces exactly and reports ambiguity") {
    const prec_t p = 128;
    Ball r1 = mod2(Ball::exact(Real::of(5.25, p)));
    CHECK(r1.mid() == Real::of(1.25, 8));
    Ball r2 = mod2(Ball::exact(Real::of(-0.5, p)));
    CHECK(r2.mid() == Real::of(1.5, 8));

    // 10^6 + 0.3 at 64-bit absolute accuracy reduces to ~0.3
    Real x = Real::add(Real::of(1000000L, p), Real::of(0.3, p), p);
    Ball r3 = mod2(Ball::midrad(x, Real::pow2(-64, 32)));
    CHECK(std::abs(r3.mid().to_double() - 0.3) < 1e-15);

    // enclosure straddling an even integer is refused
    Ball near_even = Ball::midrad(Real::of(4L, p), Real::of(1e-6, 32));
    CHECK_THROWS_AS(mod2(near_even), ambiguous_floor);
    // exact even integer is fine
    CHECK(mod2(Ball::exact(Real::of(4L, p))).mid().is_zero());
}

TEST_CASE("ball interval views and subset tests are certified") {
    Ball a = Ball::midrad(Real::of(1.0, 64), Real::of(0.25, 32));
    Ball b = Ball::midrad(Real::of(1.0, 64), Real::of(0.5, 32));
    CHECK(a.inside(b));
    CHECK(!b.inside(a));
    CHECK(b.contains(Real::of(1.49, 64)));
    CHECK(!b.contains(Real::of(1.51, 64)));
    CHECK(Ball::midrad(Real::of(0.1, 64), Real::of(0.2, 32)).contains_zero());
    CHECK(Ball::midrad(Real::of(0.1, 64), Real::of(0.05, 32)).certain_sign() == 1);
}
