// Verification suites: bracket certificates, the J-interval inclusion, the
// invariant intervals, the capture chains, and the growth inequality.

#include <doctest.h>

#include "syracuse/rigor.hpp"

#include <cmath>
#include <random>

using namespace syracuse;
using namespace syracuse::rigor;

TEST_CASE("critical-point bracket certificates hold on a sweep") {
    PrecisionPolicy policy;
    for (long n = 1; n <= 200; ++n) {
        auto cert = critical_bracket_certificate(n, policy);
        CHECK(cert.verdict == Verdict::certified);
    }
}

TEST_CASE("shadow-interval inclusion certificates") {
    PrecisionPolicy policy;

    for (long n = 1; n <= 200; ++n) {
        auto cert = shadow_inclusion_certificate(n, {7, 2}, policy);
        CHECK(cert.verdict == Verdict::certified);
    }

    // other parameter values inside (27/8, 6)
    CHECK(shadow_inclusion_certificate(5, {4, 1}, policy).verdict == Verdict::certified);
    CHECK(shadow_inclusion_certificate(12, {11, 2}, policy).verdict == Verdict::certified);

    // parameter domain is (27/8, 6)
    CHECK_THROWS(shadow_inclusion_certificate(5, {27, 8}, policy));
    CHECK_THROWS(shadow_inclusion_certificate(5, {6, 1}, policy));
    CHECK_THROWS(shadow_inclusion_certificate(0, {7, 2}, policy));
}

TEST_CASE("inclusion certificates chain along the orbit of 7 for 20 steps") {
    PrecisionPolicy policy;
    mpz_class m(7);
    for (int k = 0; k < 20; ++k) {
        auto cert = shadow_inclusion_certificate(m.get_si(), {7, 2}, policy);
        CHECK(cert.verdict == Verdict::certified);
        m = maps::t_step(m);
    }
    CHECK(m == 2);  // orbit: 7 11 17 26 13 20 10 5 8 4 2 1 2 1 ...
}

TEST_CASE("polynomial sufficient conditions as a second route") {
    // for a = 7/2: B peaks at B(2) = 49/2 - 13 pi^2 < 0 over the even case
    // (n >= 2), and C < 0 exactly from n = 11 on
    for (long n : {2L, 3L, 5L, 9L, 11L, 100L, 10000L}) {
        auto poly = shadow_inclusion_polynomials(n, {7, 2});
        CHECK(poly.sign_B == -1);
        if (n >= 11)
            CHECK(poly.sign_C == -1);
        else
            CHECK(poly.sign_C == +1);
    }
    {
        auto poly2 = shadow_inclusion_polynomials(2, {7, 2});
        // the even-case bound is attained at n = 2
        double bound = 24.5 - 13 * M_PI * M_PI;
        CHECK(std::abs(poly2.B.mid().to_double() - bound) < 1e-9);
        CHECK(shadow_inclusion_polynomials(1, {7, 2}).sign_B == +1);  // outside the even case
    }
    // small odd cases settle numerically: f(c_n) < f(n) + 7/((3n+1) pi^2)
    PrecisionPolicy policy;
    for (long n : {1L, 3L, 5L, 7L, 9L}) {
        auto cp = critical::critical_point(n, policy);
        prec_t p = 128;
        Ball fc = maps::f_ball(cp.enclosure, p);
        Ball pi = Ball::midrad(const_pi(p), Real::pow2(1 - 128L));
        Ball bound = Ball::add(Ball::exact(Real::of((3 * n + 1) / 2, p)),
                               Ball::div(Ball::exact(Real::of(7L, p)),
                                         Ball::mul_exact(Ball::mul(pi, pi, p),
                                                         Real::of(3 * n + 1, p), p), p), p);
        CHECK(surely_lt(fc, bound));
    }
}

TEST_CASE("invariant interval certificates") {
    PrecisionPolicy policy;
    auto certs = verify_invariant_intervals(policy);
    REQUIRE(certs.size() == 5);
    int certified = 0;
    for (const auto& c : certs) {
        if (c.verdict == Verdict::certified) ++certified;
    }
    CHECK(certified == 5);
    // the direction probe documents increasing monotonicity on [nu1, 0]
    CHECK(certs.back().claim == "monotone_direction");
    CHECK(certs.back().detail == "f strictly increasing on [nu1, 0]");

    // disjointness sanity: mu3 lies outside [0, mu1]
    auto fps = critical::fixed_points(3.0, policy);
    const critical::FixedPointInfo *mu1 = nullptr, *mu3 = nullptr;
    for (const auto& fp : fps) {
        if (fp.label == "mu1") mu1 = &fp;
        if (fp.label == "mu3") mu3 = &fp;
    }
    REQUIRE(mu1);
    REQUIRE(mu3);
    CHECK(mu3->enclosure.lo() > mu1->enclosure.hi());
}

TEST_CASE("capture chains through the shadow intervals") {
    PrecisionPolicy policy;
    auto rep = verify_capture_chains(policy);
    CHECK(rep.all_ok);
    REQUIRE(rep.checks.size() == 6);
    for (const auto& chk : rep.checks) {
        CHECK(chk.value_ok);
        CHECK(chk.relation_ok);
    }
    CHECK(rep.checks[0].name == "f3(c13)");
    CHECK(std::abs(rep.checks[0].value.mid().to_double() - 5.0249) < 1e-4);
    CHECK(std::abs(rep.checks[5].value.mid().to_double() - 1.023691) < 1e-4);
}

TEST_CASE("unimodality on the J intervals for odd n") {
    PrecisionPolicy policy;
    for (long n = 1; n <= 99; n += 2) {
        auto cert = unimodal_certificate(n, policy);
        CHECK(cert.verdict == Verdict::certified);
    }
    CHECK_THROWS(unimodal_certificate(2, policy));
}

TEST_CASE("growth-bound inequality on specific segments") {
    PrecisionPolicy policy;

    // near-constant-parity start far out on the real line
    Real x0 = Real::add(Real::of(1000000L, 64), Real::of(0.5, 64), 64);
    auto seg = stats::build_segment(x0, 100, 0.35, policy);
    auto chk = check_growth_bound(seg, 128);
    CHECK(chk.precondition_ok);
    CHECK(chk.holds);

    // tiny M: rhs is dominated by -ln(1 - 1/(3M)) > 1.79
    auto tiny = stats::build_segment(Real::of(0.4, 64), 1, 0.0, policy);
    auto chk2 = check_growth_bound(tiny, 128);
    CHECK(chk2.holds);
    CHECK(chk2.rhs.lo().to_double() > 1.79);

    // violated precondition surfaces as an error
    auto low = stats::build_segment(Real::of(0.2, 64), 1, 0.0, policy);
    CHECK_THROWS_AS(check_growth_bound(low, 128), stats::precondition_violated);
}

TEST_CASE("growth-bound inequality over random segments") {
    PrecisionPolicy policy;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> xs(1e3, 1e4);
    int done = 0;
    for (int i = 0; i < 100; ++i) {
        auto seg = stats::build_segment(Real::of(xs(rng), 64), 200, 0.35, policy);
        auto chk = check_growth_bound(seg, 128);
        CHECK(chk.holds);
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("certified verdicts are reproducible at doubled precision") {
    PrecisionPolicy base;
    PrecisionPolicy doubled = base;
    doubled.start_bits = base.start_bits * 2;
    for (long n : {1L, 2L, 13L, 100L, 1001L}) {
        auto a = shadow_inclusion_certificate(n, {7, 2}, base);
        auto b = shadow_inclusion_certificate(n, {7, 2}, doubled);
        CHECK(a.verdict == Verdict::certified);
        CHECK(b.verdict == Verdict::certified);
    }
    auto certs = verify_invariant_intervals(doubled);
    for (const auto& c : certs) CHECK(c.verdict == Verdict::certified);
}

TEST_CASE("discrepancy floor bound and threshold") {
    // bound formula at a = 2, frozen from an independent evaluation
    Real bound = stats::discrepancy_floor_bound(Real::of(2L, 128), 128);
    CHECK(std::abs(bound.to_double() - 0.0160516386) < 1e-9);

    // a -> 1+ sends the bound to 0
    Real near_one = stats::discrepancy_floor_bound(Real::from_str("1.0000001", 128), 128);
    CHECK(near_one.to_double() > 0);
    CHECK(near_one.to_double() < 1e-7);

    // the orbit floor 1/(3(1-tau)) = 4.97...
    PrecisionPolicy policy;
    Real x0 = Real::of(1000000L, 64);
    auto seg = stats::build_segment(Real::add(x0, Real::of(0.5, 64), 64), 60, 11.0, policy);
    auto chk = check_discrepancy_floor(seg, Real::of(2L, 128), 128);
    CHECK(chk.precondition_ok);
    CHECK(std::abs(chk.threshold.to_double() / 2 - 4.976) < 1e-2);
    CHECK(chk.dstar > chk.bound.to_double());  // reported comparison on the finite prefix

    // prefix dipping below the floor violates the precondition
    auto shallow = stats::build_segment(Real::of(6.5, 64), 40, 0.35, policy);
    CHECK_THROWS_AS(check_discrepancy_floor(shallow, Real::of(2L, 128), 128), stats::precondition_violated);
}
