// Arbitrary-precision real scalar on top of MPFR, plus the precision
// escalation policy shared by the whole workbench.
//
// Real is an immutable-after-construction value type carrying its own
// precision in bits. All rounding is to nearest unless a directed mode is
// passed explicitly (the ball layer does its own outward rounding).

#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace syracuse {

using prec_t = mpfr_prec_t;

class kernel_domain_error : public std::runtime_error {
public:
    explicit kernel_domain_error(const std::string& what) : std::runtime_error(what) {}
};

class escalation_exhausted : public kernel_domain_error {
public:
    explicit escalation_exhausted(const std::string& what) : kernel_domain_error(what) {}
};

class Real {
public:
    explicit Real(prec_t prec = 64) {
        mpfr_init2(v_, clamp_prec(prec));
        mpfr_set_zero(v_, 1);
    }

    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    Real(Real&& o) noexcept {
        v_[0] = o.v_[0];
        mpfr_init2(o.v_, MPFR_PREC_MIN);
    }

    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    // -- construction helpers ------------------------------------------------

    static Real of(long v, prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, v, MPFR_RNDN);
        return r;
    }

    static Real of(int v, prec_t prec) { return of(static_cast<long>(v), prec); }

    static Real of(double v, prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, v, MPFR_RNDN);
        return r;
    }

    static Real from_str(const std::string& s, prec_t prec) {
        Real r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw kernel_domain_error("Real::from_str: unparsable literal '" + s + "'");
        return r;
    }

    static Real from_mpz(const mpz_class& z, prec_t prec) {
        Real r(prec);
        mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
        return r;
    }

    // 2^e, exact.
    static Real pow2(long e, prec_t prec = 32) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    // -- observers -----------------------------------------------------------

    prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    int sgn() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_integer() const { return mpfr_integer_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    std::string str(int digits = 20) const {
        char* s = nullptr;
        if (mpfr_asprintf(&s, "%.*Rg", digits, v_) < 0) return "<fmt-error>";
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    // -- arithmetic (explicit precision, round to nearest) ---------------------

    static Real add(const Real& a, const Real& b, prec_t p) { return bin(mpfr_add, a, b, p); }
    static Real sub(const Real& a, const Real& b, prec_t p) { return bin(mpfr_sub, a, b, p); }
    static Real mul(const Real& a, const Real& b, prec_t p) { return bin(mpfr_mul, a, b, p); }
    static Real div(const Real& a, const Real& b, prec_t p) { return bin(mpfr_div, a, b, p); }

    static Real neg(const Real& a) {
        Real r(a.prec());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    static Real abs(const Real& a) {
        Real r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    static Real sqrt(const Real& a, prec_t p) {
        if (a.sgn() < 0) throw kernel_domain_error("sqrt of negative value");
        Real r(p);
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    static Real log(const Real& a, prec_t p) {
        if (a.sgn() <= 0) throw kernel_domain_error("log of nonpositive value");
        Real r(p);
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    static Real exp(const Real& a, prec_t p) {
        Real r(p);
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    static Real pow(const Real& a, const Real& b, prec_t p) {
        Real r(p);
        mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    // Exact scaling by 2^e; never rounds.
    static Real mul_2si(const Real& a, long e) {
        Real r(a.prec());
        mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }

    static Real floor(const Real& a, prec_t p) {
        Real r(p);
        mpfr_floor(r.v_, a.v_);
        return r;
    }

    static Real min(const Real& a, const Real& b) { return cmp(a, b) <= 0 ? a : b; }
    static Real max(const Real& a, const Real& b) { return cmp(a, b) >= 0 ? a : b; }

    // -- operators (result precision = max of operands) -----------------------

    friend Real operator+(const Real& a, const Real& b) { return add(a, b, std::max(a.prec(), b.prec())); }
    friend Real operator-(const Real& a, const Real& b) { return sub(a, b, std::max(a.prec(), b.prec())); }
    friend Real operator*(const Real& a, const Real& b) { return mul(a, b, std::max(a.prec(), b.prec())); }
    friend Real operator/(const Real& a, const Real& b) { return div(a, b, std::max(a.prec(), b.prec())); }
    friend Real operator-(const Real& a) { return neg(a); }

    static int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }

    friend bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

    static prec_t clamp_prec(prec_t p) { return p < MPFR_PREC_MIN ? MPFR_PREC_MIN : p; }

private:
    using mpfr_bin_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

    static Real bin(mpfr_bin_fn fn, const Real& a, const Real& b, prec_t p) {
        Real r(p);
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

// pi at the requested precision. Cached per thread; MPFR itself caches the
// underlying computation, this avoids re-rounding on every call.
inline const Real& const_pi(prec_t prec) {
    thread_local Real cached(MPFR_PREC_MIN);
    thread_local prec_t cached_prec = 0;
    if (cached_prec != prec) {
        Real p(prec);
        mpfr_const_pi(p.raw(), MPFR_RNDN);
        cached = std::move(p);
        cached_prec = prec;
    }
    return cached;
}

// ---------------------------------------------------------------------------
// Precision escalation policy
// ---------------------------------------------------------------------------

struct PrecisionPolicy {
    prec_t start_bits = 128;
    prec_t max_bits = 32768;   // ~9800 decimal digits
    double escalation = 2.0;
    int agreement_digits = 20;

    void validate() const {
        if (start_bits < 64) throw kernel_domain_error("policy: start_bits must be >= 64");
        if (start_bits > max_bits) throw kernel_domain_error("policy: start_bits > max_bits");
        if (escalation <= 1.0) throw kernel_domain_error("policy: escalation must be > 1");
        if (agreement_digits < 1) throw kernel_domain_error("policy: agreement_digits must be >= 1");
    }

    prec_t next(prec_t p) const {
        auto n = static_cast<prec_t>(static_cast<double>(p) * escalation);
        return n > p ? n : p + 1;
    }
};

// Leading-decimal-digit agreement between two evaluations of the same
// quantity. Relative by default; absolute mode serves mod-2 consumers where
// the residue of a huge value has no meaningful relative scale.
inline bool agree_to_digits(const Real& a, const Real& b, int digits, bool absolute = false) {
    prec_t wp = std::max(a.prec(), b.prec()) + 16;
    Real diff = Real::abs(Real::sub(a, b, wp));
    Real tol = Real::pow(Real::of(10L, wp), Real::of(static_cast<long>(-digits), wp), wp);
    if (absolute) return diff <= tol;
    Real scale = Real::max(Real::abs(a), Real::abs(b));
    if (scale.is_zero()) return true;
    return diff <= Real::mul(scale, tol, wp);
}

struct Escalated {
    Real value;
    prec_t achieved_bits;
};

// Evaluates `compute` at increasing precision until two consecutive levels
// agree to policy.agreement_digits leading decimal digits. Returns the first
// stable result together with the bits it was computed at.
inline Escalated eval_escalating(const std::function<Real(prec_t)>& compute,
                                 const PrecisionPolicy& policy,
                                 bool absolute = false) {
    policy.validate();
    prec_t p = policy.start_bits;
    Real prev = compute(p);
    while (true) {
        prec_t q = policy.next(p);
        if (q > policy.max_bits)
            throw escalation_exhausted("eval_escalating: no stabilization up to " +
                                       std::to_string(policy.max_bits) + " bits");
        Real cur = compute(q);
        if (agree_to_digits(prev, cur, policy.agreement_digits, absolute))
            return Escalated{std::move(prev), p};
        prev = std::move(cur);
        p = q;
    }
}

}  // namespace syracuse
