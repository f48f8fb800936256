// Registry of the known attractors of f on both half-lines, certified cycle
// enclosures and multipliers, trap neighbourhoods, adaptive-precision basin
// classification, and the critical-point scan campaigns.
//
// "Attracted to L" is a certificate, not a heuristic: an orbit is classified
// as attracted exactly when its enclosure lands inside a precomputed trap
// interval I around a cycle point of L with f^period(I) inside I and
// |(f^period)'| < 1 uniformly on I, both proved by ball evaluation.

#pragma once

#include "syracuse/critical_points.hpp"
#include "syracuse/integer_dynamics.hpp"
#include "syracuse/parallel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace syracuse::attractors {

class cycle_not_found : public kernel_domain_error {
public:
    explicit cycle_not_found(const std::string& what) : kernel_domain_error(what) {}
};

class not_a_cycle : public kernel_domain_error {
public:
    explicit not_a_cycle(const std::string& what) : kernel_domain_error(what) {}
};

enum class AttractorId { ZERO, A1, A2, NU1, B1, B2, B3, B4 };

inline const char* label(AttractorId id) {
    switch (id) {
        case AttractorId::ZERO: return "ZERO";
        case AttractorId::A1: return "A1";
        case AttractorId::A2: return "A2";
        case AttractorId::NU1: return "NU1";
        case AttractorId::B1: return "B1";
        case AttractorId::B2: return "B2";
        case AttractorId::B3: return "B3";
        case AttractorId::B4: return "B4";
    }
    return "?";
}

enum class ScanSide { positive, negative };

struct Attractor {
    AttractorId id = AttractorId::ZERO;
    int period = 1;
    std::vector<Ball> points;  // cycle in orbit order; points[0] is the anchor
    Ball multiplier;           // product of f' over the cycle
    std::vector<Ball> traps;   // certified trap per cycle point
    prec_t bits = 0;
};

// -- multipliers -----------------------------------------------------------------

// Exact multiplier of an integer cycle: f' is 3/2 at odd and 1/2 at even
// integers (either sign), so the product is 3^odd / 2^length.
inline mpq_class integer_cycle_multiplier(const std::vector<mpz_class>& cycle) {
    if (cycle.empty()) throw not_a_cycle("integer cycle is empty");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const mpz_class& next = cycle[(i + 1) % cycle.size()];
        if (maps::f_integer_step(cycle[i]) != next)
            throw not_a_cycle("integer sequence is not a cycle of f");
    }
    unsigned long odds = 0;
    for (const auto& v : cycle)
        if (mpz_odd_p(v.get_mpz_t())) ++odds;
    mpz_class num, den;
    mpz_ui_pow_ui(num.get_mpz_t(), 3, odds);
    mpz_ui_pow_ui(den.get_mpz_t(), 2, cycle.size());
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// Ball multiplier of a real cycle; verifies the points do step to each other.
inline Ball cycle_multiplier(const std::vector<Ball>& cycle, prec_t p) {
    if (cycle.empty()) throw not_a_cycle("cycle is empty");
    Real tol = Real::pow2(-8, 32);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        Ball image = maps::f_ball(cycle[i], p);
        const Ball& next = cycle[(i + 1) % cycle.size()];
        Real gap = Real::abs(Real::sub(image.mid(), next.mid(), 64));
        if (gap > tol) throw not_a_cycle("points do not form a cycle under f");
    }
    Ball prod = Ball::exact(Real::of(1L, p));
    for (const auto& pt : cycle) prod = Ball::mul(prod, maps::f_prime_ball(pt, p), p);
    return prod;
}

// -- registry ---------------------------------------------------------------------

namespace detail {

struct Seed {
    AttractorId id;
    int period;
    const char* literal;  // printed digits of the anchor; Newton target
    bool exact_integer;
};

inline const std::vector<Seed>& seeds(ScanSide side) {
    static const std::vector<Seed> pos = {
        {AttractorId::ZERO, 1, "0", true},
        {AttractorId::A1, 2, "1", true},
        {AttractorId::A2, 2, "1.192", false},
    };
    static const std::vector<Seed> neg = {
        {AttractorId::NU1, 1, "-1.2773", false},
        {AttractorId::B1, 3, "-5.046002", false},
        {AttractorId::B2, 3, "-4.998739", false},
        {AttractorId::B3, 11, "-17.002728", false},
        {AttractorId::B4, 11, "-16.999991", false},
    };
    return side == ScanSide::positive ? pos : neg;
}

// G(x) = f^period(x) - x and its derivative along the orbit.
inline Real cycle_gap_point(const Real& x, int period, prec_t p) {
    Real y = x;
    for (int i = 0; i < period; ++i) y = maps::f_point(y, p);
    return Real::sub(y, x, p);
}

inline Ball cycle_gap_ball(const Ball& x, int period, prec_t p) {
    Ball y = x;
    for (int i = 0; i < period; ++i) y = maps::f_ball(y, p);
    return Ball::sub(y, x, p);
}

inline Ball cycle_gap_deriv_ball(const Ball& x, int period, prec_t p) {
    Ball y = x;
    Ball prod = Ball::exact(Real::of(1L, p));
    for (int i = 0; i < period; ++i) {
        prod = Ball::mul(prod, maps::f_prime_ball(y, p), p);
        y = maps::f_ball(y, p);
    }
    return Ball::sub(prod, Ball::exact(Real::of(1L, 8)), p);
}

}  // namespace detail

// Recomputes one attractor from its seed at the requested precision:
// point Newton on f^period(x) - x, then an interval Newton pass for a
// certified anchor enclosure, then cycle points, multiplier and traps.
inline Attractor compute_attractor(AttractorId id, int period, const std::string& seed_literal,
                                   bool exact_integer, prec_t p) {
    Attractor att;
    att.id = id;
    att.period = period;
    att.bits = p;

    Real anchor(p);
    if (exact_integer) {
        anchor = Real::from_str(seed_literal, p);
    } else {
        Real x = Real::from_str(seed_literal, p);
        Real seed = x;
        bool converged = false;
        for (int it = 0; it < 80; ++it) {
            Real val = detail::cycle_gap_point(x, period, p);
            Ball dball = detail::cycle_gap_deriv_ball(Ball::exact(x), period, p);
            if (dball.contains_zero())
                throw cycle_not_found(std::string(label(id)) + ": derivative vanished during Newton");
            Real step = Real::div(val, dball.mid(), p);
            x = Real::sub(x, step, p);
            if (Real::abs(Real::sub(x, seed, p)) > Real::of(0.4, 32))
                throw cycle_not_found(std::string(label(id)) + ": Newton left the seed neighbourhood");
            if (Real::abs(step) < Real::pow2(-static_cast<long>(p) + 24, 32)) { converged = true; break; }
        }
        if (!converged) throw cycle_not_found(std::string(label(id)) + ": Newton did not converge");
        anchor = x;

        // Interval Newton: N(X) = m - G(m)/G'(X); N inside X certifies a unique
        // root of f^period - id in N.
        Ball X = Ball::midrad(anchor, Real::pow2(-28, 32));
        bool certified = false;
        for (int it = 0; it < 8; ++it) {
            Real m = X.mid();
            Ball Gm = detail::cycle_gap_ball(Ball::exact(m), period, p);
            Ball Gp = detail::cycle_gap_deriv_ball(X, period, p);
            if (Gp.contains_zero()) break;
            Ball N = Ball::sub(Ball::exact(m), Ball::div(Gm, Gp, p), p);
            if (!N.inside(X)) break;
            certified = true;
            X = N;
            if (X.rad() < Real::pow2(-static_cast<long>(p) + 48, 32)) break;
        }
        if (!certified) throw cycle_not_found(std::string(label(id)) + ": interval Newton refused the enclosure");
        att.points.push_back(X);
    }

    if (exact_integer) {
        // Integer-anchored cycles are exact.
        mpz_class m(seed_literal);
        for (int i = 0; i < period; ++i) {
            att.points.push_back(Ball::exact(Real::from_mpz(m, p)));
            m = maps::f_integer_step(m);
        }
    } else {
        for (int i = 1; i < period; ++i)
            att.points.push_back(maps::f_ball(att.points.back(), p));
        // Distinct cycle points, not a shorter period in disguise.
        for (int i = 1; i < period; ++i) {
            Real gap = Real::abs(Real::sub(att.points[static_cast<std::size_t>(i)].mid(),
                                           att.points[0].mid(), 64));
            if (gap < Real::pow2(-16, 32))
                throw cycle_not_found(std::string(label(id)) + ": period collapsed");
        }
    }

    att.multiplier = cycle_multiplier(att.points, p);
    if (!(att.multiplier.sup_abs() < Real::of(1L, 32)))
        throw cycle_not_found(std::string(label(id)) + ": |multiplier| < 1 not certified");

    // Trap per cycle point: largest dyadic radius 2^-k (k <= 40) with
    // certified self-mapping and uniform contraction under f^period.
    for (int j = 0; j < period; ++j) {
        bool trapped = false;
        for (long k = 8; k <= 40; ++k) {
            Ball trap = Ball::midrad(att.points[static_cast<std::size_t>(j)].mid(), Real::pow2(-k, 32));
            Ball y = trap;
            Ball prod = Ball::exact(Real::of(1L, p));
            for (int s = 0; s < period; ++s) {
                prod = Ball::mul(prod, maps::f_prime_ball(y, p), p);
                y = maps::f_ball(y, p);
            }
            if (y.inside(trap) && prod.sup_abs() < Real::of(1L, 32)) {
                att.traps.push_back(trap);
                trapped = true;
                break;
            }
        }
        if (!trapped)
            throw cycle_not_found(std::string(label(id)) + ": no certifiable trap at point " +
                                  std::to_string(j));
    }
    return att;
}

// The known attractors on one half-line, recomputed at the requested
// precision from the documented seeds. 0 sits on the boundary and is listed
// with the positive side.
inline std::vector<Attractor> known_attractors(ScanSide side, prec_t p = 192) {
    std::vector<Attractor> out;
    for (const auto& s : detail::seeds(side))
        out.push_back(compute_attractor(s.id, s.period, s.literal, s.exact_integer, p));
    return out;
}

// Registry used to classify orbits on a side: the side's attractors plus the
// shared fixed point 0, which attracts from (-1, 0) as well.
inline std::vector<Attractor> classification_registry(ScanSide side, prec_t p = 192) {
    std::vector<Attractor> out = known_attractors(side, p);
    if (side == ScanSide::negative) {
        out.push_back(compute_attractor(AttractorId::ZERO, 1, "0", true, p));
    }
    return out;
}

// -- classification -----------------------------------------------------------------

struct ClassifyCaps {
    long max_iter = 1000000;
    double max_magnitude = 1e30;
};

enum class OutcomeKind { attracted, unresolved, cap_exceeded, magnitude_escape };

inline const char* outcome_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::attracted: return "ATTRACTED";
        case OutcomeKind::unresolved: return "UNRESOLVED";
        case OutcomeKind::cap_exceeded: return "CAP_EXCEEDED";
        case OutcomeKind::magnitude_escape: return "MAGNITUDE_ESCAPE";
    }
    return "?";
}

struct ClassificationOutcome {
    OutcomeKind kind = OutcomeKind::unresolved;
    AttractorId which = AttractorId::ZERO;  // valid when attracted
    long iterations = 0;
    prec_t bits_used = 0;
    std::string note;

    std::string result_label() const {
        return kind == OutcomeKind::attracted ? label(which) : outcome_name(kind);
    }
};

struct OrbitObserver {
    std::function<void(prec_t)> on_restart;
    std::function<void(long, const Ball&)> on_step;  // (k, enclosure of f^k(x0))
};

// Iterates f with escalating precision until the enclosure lands in a trap,
// escapes in magnitude, or the caps run out. `start` recomputes the starting
// enclosure at each precision level.
inline ClassificationOutcome classify_orbit(const std::function<Ball(prec_t)>& start,
                                            const std::vector<Attractor>& registry,
                                            const PrecisionPolicy& policy,
                                            const ClassifyCaps& caps = {},
                                            const OrbitObserver* observer = nullptr) {
    policy.validate();

    // Flat trap list with double prefilters.
    struct TrapRef {
        const Ball* trap;
        AttractorId id;
        double center;
        double radius;
    };
    std::vector<TrapRef> traps;
    for (const auto& att : registry)
        for (const auto& t : att.traps)
            traps.push_back(TrapRef{&t, att.id, t.mid().to_double(), t.rad().to_double()});

    const Real magnitude_cap = Real::of(caps.max_magnitude, 64);
    const Real fat = Real::pow2(-4, 32);

    bool hit_iteration_cap_thin = false;
    long thin_cap_iters = 0;
    prec_t thin_cap_bits = 0;

    for (prec_t p = policy.start_bits;; p = policy.next(p)) {
        if (p > policy.max_bits) break;
        Ball x;
        try {
            x = start(p);
        } catch (const kernel_domain_error&) {
            continue;  // start not computable at this precision; escalate
        }
        if (observer && observer->on_restart) observer->on_restart(p);
        if (observer && observer->on_step) observer->on_step(0, x);

        bool need_escalation = false;
        for (long k = 0;; ++k) {
            if (x.inf_abs() > magnitude_cap) {
                ClassificationOutcome out;
                out.kind = OutcomeKind::magnitude_escape;
                out.iterations = k;
                out.bits_used = p;
                return out;
            }
            double xd = x.mid().to_double();
            for (const auto& t : traps) {
                if (std::abs(xd - t.center) > t.radius * 1.001 + 1e-300) continue;
                if (x.inside(*t.trap)) {
                    ClassificationOutcome out;
                    out.kind = OutcomeKind::attracted;
                    out.which = t.id;
                    out.iterations = k;
                    out.bits_used = p;
                    return out;
                }
            }
            if (!(x.rad() < fat)) {
                need_escalation = true;
                break;
            }
            if (k >= caps.max_iter) {
                hit_iteration_cap_thin = true;
                thin_cap_iters = k;
                thin_cap_bits = p;
                break;
            }
            x = maps::f_ball(x, p);
            if (observer && observer->on_step) observer->on_step(k + 1, x);
        }
        if (!need_escalation && hit_iteration_cap_thin) {
            // The enclosure stayed sharp and the orbit still did not resolve;
            // more precision will not add iterations.
            ClassificationOutcome out;
            out.kind = OutcomeKind::cap_exceeded;
            out.iterations = thin_cap_iters;
            out.bits_used = thin_cap_bits;
            return out;
        }
        if (policy.next(p) > policy.max_bits) break;
    }

    ClassificationOutcome out;
    out.kind = OutcomeKind::unresolved;
    out.note = "escalation exhausted at " + std::to_string(policy.max_bits) + " bits";
    out.bits_used = policy.max_bits;
    return out;
}

// Convenience: classify a fixed real starting point. The start is promoted
// exactly, so every precision level sees the same real number.
inline ClassificationOutcome classify_point(const Real& x0,
                                            const std::vector<Attractor>& registry,
                                            const PrecisionPolicy& policy,
                                            const ClassifyCaps& caps = {}) {
    return classify_orbit(
        [x0](prec_t p) {
            prec_t wide = std::max(p, x0.prec());
            return Ball::exact(Real::add(x0, Real::of(0L, wide), wide));
        },
        registry, policy, caps);
}

// -- critical-point scans --------------------------------------------------------------

struct ScanRecord {
    long n = 0;
    ClassificationOutcome outcome;
    bool proche = true;                 // orbit of c_n stayed within 1/2 of the orbit of n
    long first_divergence_step = -1;    // first k with |f^k(c_n) - f^k(n)| >= 1/2
};

// Classifies the orbit of c_n against the registry while tracking how long it
// shadows the integer orbit of n.
inline ScanRecord scan_one(long n, const std::vector<Attractor>& registry,
                           const PrecisionPolicy& policy, const ClassifyCaps& caps = {}) {
    if (n == 0) throw kernel_domain_error("scan_one: n must be nonzero");

    struct Tracker {
        mpz_class value;
        long next_k = 0;
        bool diverged = false;
        long first_div = -1;
    };
    Tracker tracker;
    mpz_class n0(n);

    OrbitObserver obs;
    obs.on_restart = [&tracker, &n0](prec_t) {
        tracker.value = n0;
        tracker.next_k = 0;
        tracker.diverged = false;
        tracker.first_div = -1;
    };
    Real half = Real::of(0.5, 32);
    obs.on_step = [&tracker, half](long k, const Ball& x) {
        if (tracker.diverged) return;
        while (tracker.next_k < k) {
            tracker.value = maps::f_integer_step(tracker.value);
            ++tracker.next_k;
        }
        // exact integer conversion so the 1/2 threshold stays meaningful for
        // large orbit values
        prec_t ip = std::max<prec_t>(64, mpz_sizeinbase(tracker.value.get_mpz_t(), 2) + 8);
        Real iv = Real::from_mpz(tracker.value, ip);
        Real d = Real::abs(Real::sub(x.mid(), iv, ip));
        if (!(d < half)) {
            tracker.diverged = true;
            tracker.first_div = k;
        }
    };

    PrecisionPolicy cp_policy = policy;
    auto start = [n, &cp_policy](prec_t p) {
        PrecisionPolicy local = cp_policy;
        local.start_bits = std::max<prec_t>(p, 96);
        local.max_bits = local.start_bits;
        // enclosure radius tied to the level so long orbits have headroom
        return critical::critical_point(n, local, -(static_cast<long>(p) - 48)).enclosure;
    };

    ScanRecord rec;
    rec.n = n;
    rec.outcome = classify_orbit(start, registry, policy, caps, &obs);
    rec.proche = !tracker.diverged;
    rec.first_divergence_step = tracker.first_div;
    return rec;
}

struct ScanRequest {
    long n_lo = 1;                 // inclusive; same sign as n_hi, zero excluded
    long n_hi = 100;               // inclusive
    PrecisionPolicy policy;
    ClassifyCaps caps;
    unsigned workers = 0;
    std::set<long> skip;           // indices already done (resume)
};

inline std::vector<ScanRecord> scan_critical(const ScanRequest& req,
                                             const std::vector<Attractor>& registry,
                                             const std::function<void(const ScanRecord&)>& sink = {}) {
    if (req.n_lo > req.n_hi) throw kernel_domain_error("scan_critical: empty range");
    if (req.n_lo <= 0 && req.n_hi >= 0)
        throw kernel_domain_error("scan_critical: range must not contain 0");

    std::vector<long> todo;
    for (long n = req.n_lo; n <= req.n_hi; ++n)
        if (!req.skip.count(n)) todo.push_back(n);

    std::vector<ScanRecord> records(todo.size());
    std::mutex sink_mu;
    parallel_for(0, static_cast<std::int64_t>(todo.size()), [&](std::int64_t i) {
        // Per-record failures are recorded, never abort the scan.
        ScanRecord rec;
        try {
            rec = scan_one(todo[static_cast<std::size_t>(i)], registry, req.policy, req.caps);
        } catch (const std::exception& e) {
            rec.n = todo[static_cast<std::size_t>(i)];
            rec.outcome.kind = OutcomeKind::unresolved;
            rec.outcome.note = e.what();
        }
        records[static_cast<std::size_t>(i)] = rec;
        if (sink) {
            std::lock_guard<std::mutex> lock(sink_mu);
            sink(records[static_cast<std::size_t>(i)]);
        }
    }, req.workers, 1);
    return records;
}

// Indices per attractor label, ascending; non-attracted outcomes keyed by
// their outcome name.
inline std::map<std::string, std::vector<long>> summarize(const std::vector<ScanRecord>& records) {
    std::map<std::string, std::vector<long>> by_label;
    for (const auto& r : records) by_label[r.outcome.result_label()].push_back(r.n);
    for (auto& [k, v] : by_label) std::sort(v.begin(), v.end());
    return by_label;
}

}  // namespace syracuse::attractors
