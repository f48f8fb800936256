// The integer maps, the real extension f and its derivatives, the Schwarzian,
// the g/h decomposition, and their agreement properties.

#include <doctest.h>

#include "syracuse/maps.hpp"

#include <cmath>
#include <random>

using namespace syracuse;
using namespace syracuse::maps;

TEST_CASE("integer map steps") {
    CHECK(t_step(1) == 2);
    CHECK(t_step(2) == 1);
    CHECK(t_step(27) == 41);
    CHECK(u_step(5) == 7);
    CHECK(u_step(7) == 10);
    CHECK(u_step(10) == 5);
    CHECK(u_step(1) == 1);
    CHECK(u_step(17) == 25);
}

TEST_CASE("f agrees with T on integers and with -U by conjugation") {
    const prec_t p = 96;
    for (long n = 1; n <= 10000; ++n) {
        Real fn = f_point(Real::of(n, p), p);
        CHECK(fn.is_integer());
        CHECK(fn.to_long() == t_step(n).get_si());
        Real fneg = f_point(Real::of(-n, p), p);
        CHECK(fneg.is_integer());
        CHECK(fneg.to_long() == -u_step(n).get_si());
    }
}

TEST_CASE("f fixed values") {
    const prec_t p = 128;
    CHECK(f_point(Real::of(0L, p), p).is_zero());
    CHECK(f_point(Real::of(-1L, p), p) == Real::of(-1L, 8));
    CHECK(f_point(Real::of(1L, p), p) == Real::of(2L, 8));
    CHECK(f_point(Real::of(2L, p), p) == Real::of(1L, 8));

    // f(1 + 7/(2 pi^2)) = 2.013...
    Real pi = const_pi(p);
    Real arg = Real::add(Real::of(1L, p),
                         Real::div(Real::of(7L, p), Real::mul_2si(Real::mul(pi, pi, p), 1), p), p);
    double v = f_point(arg, p).to_double();
    CHECK(std::abs(v - 2.013) < 1e-3);
    CHECK(v > 2.0);
}

TEST_CASE("functional equation f(x) - f(-1-x) = 2x + 1") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-50.0, 50.0);
    const prec_t p = 128;
    for (int i = 0; i < 1000; ++i) {
        double xd = xs(rng);
        Ball x = Ball::exact(Real::of(xd, p));
        Ball reflected = Ball::sub(Ball::exact(Real::of(-1L, p)), x, p);
        Ball lhs = Ball::sub(f_ball(x, p), f_ball(reflected, p), p);
        Ball rhs = Ball::add(Ball::mul_2si(x, 1), Ball::exact(Real::of(1L, p)), p);
        Ball gap = Ball::sub(lhs, rhs, p);
        CHECK(gap.contains_zero());
        CHECK(gap.rad().to_double() < 1e-25);
    }
}

TEST_CASE("f preserves the sign of its argument") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(0.001, 200.0);
    const prec_t p = 96;
    for (int i = 0; i < 1000; ++i) {
        double xd = xs(rng);
        CHECK(f_point(Real::of(xd, p), p).sgn() > 0);
        CHECK(f_point(Real::of(-xd, p), p).sgn() < 0);
    }
    CHECK(side_of(Real::of(3.5, 64)) == Side::positive);
    CHECK(side_of(Real::of(-3.5, 64)) == Side::negative);
    CHECK(side_of(Real::of(0L, 64)) == Side::zero);
}

TEST_CASE("closed-form derivatives match central differences") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> xs(-20.0, 20.0);
    const prec_t p = 256;
    Real h = Real::pow2(-40, p);
    for (int i = 0; i < 100; ++i) {
        Real x = Real::of(xs(rng), p);
        Real fp_closed = f_prime_point(x, p);
        Real plus = f_point(Real::add(x, h, p), p);
        Real minus = f_point(Real::sub(x, h, p), p);
        Real fd = Real::div(Real::sub(plus, minus, p), Real::mul_2si(h, 1), p);
        // truncation error ~ f''' h^2 / 6 with h = 2^-40
        double err = std::abs(Real::sub(fp_closed, fd, p).to_double());
        CHECK(err < 1e-20);
    }
}

TEST_CASE("derivative values at integers are exact rationals") {
    const prec_t p = 128;
    CHECK(f_prime_point(Real::of(1L, p), p) == Real::of(1.5, 8));
    CHECK(f_prime_point(Real::of(2L, p), p) == Real::of(0.5, 8));
    for (long n = 1; n <= 100; ++n)
        CHECK(f_prime_point(Real::of(n, p), p).sgn() > 0);
}

TEST_CASE("Schwarzian derivative values") {
    const prec_t p = 128;
    double sf = schwarzian_point(Real::of(-0.2, p), p).to_double();
    CHECK(std::abs(sf - 39.961) < 1e-3);

    CHECK(schwarzian_point(Real::of(0.5, p), p).sgn() < 0);

    // negative across (0, 100): sampled instance check
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> xs(0.01, 100.0);
    for (int i = 0; i < 1000; ++i) {
        Real x = Real::of(xs(rng), p);
        if (Real::abs(f_prime_point(x, p)) < Real::pow2(-20, 32)) continue;  // next to a critical point
        CHECK(schwarzian_point(x, p).sgn() < 0);
    }

    Ball near_crit = Ball::midrad(Real::of(1.18093870897, 128), Real::of(1e-4, 32));
    CHECK_THROWS_AS(schwarzian_ball(near_crit, p), derivative_vanishes);
}

TEST_CASE("g and h endpoint values and the decomposition identity") {
    const prec_t p = 128;
    CHECK(g_point(Real::of(0L, p), p) == Real::of(0.5, 8));
    CHECK(g_point(Real::of(1L, p), p) == Real::of(1.5, 8));

    // h(1) = 1/3 is the maximum of h
    Real h1 = h_point(Real::of(1L, p), p);
    Real third = Real::div(Real::of(1L, p), Real::of(3L, p), p);
    CHECK(Real::abs(Real::sub(h1, third, p)) < Real::pow2(-120, 32));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> xs(-100.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        Real hv = h_point(Real::of(xs(rng), p), p);
        CHECK(hv.sgn() >= 0);
        CHECK(hv <= Real::add(third, Real::pow2(-100, p), p));
    }

    // f(x) = g(x) (x + h(x)) within ball radius
    for (int i = 0; i < 1000; ++i) {
        double xd = xs(rng);
        Ball x = Ball::exact(Real::of(xd, p));
        Ball lhs = f_ball(x, p);
        Ball rhs = Ball::mul(g_ball(x, p), Ball::add(x, h_ball(x, p), p), p);
        CHECK(Ball::sub(lhs, rhs, p).contains_zero());
    }
}
