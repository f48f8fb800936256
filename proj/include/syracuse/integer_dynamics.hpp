// Orbits, flight times, verification sweeps, statistics, and the inverse
// tree for the integer maps T and U.

#pragma once

#include "syracuse/maps.hpp"
#include "syracuse/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace syracuse::dynamics {

using u128 = unsigned __int128;

struct IntegerOrbit {
    mpz_class start;
    std::vector<mpz_class> values;  // includes the start; last is the stop value when terminated
    bool terminated = false;        // hit the stop set (vs. cap)
};

// -- flight time ---------------------------------------------------------------

struct FlightOutcome {
    bool capped = false;
    long time = 0;                   // valid when !capped
    std::vector<mpz_class> partial;  // filled when capped
};

namespace detail {

constexpr u128 kU128Safe = (u128(1) << 125);

inline u128 t_step_fast(u128 n) { return (n & 1) ? (3 * n + 1) >> 1 : n >> 1; }

inline bool fits_u128(const mpz_class& n) {
    return mpz_sizeinbase(n.get_mpz_t(), 2) <= 120 && n > 0;
}

inline u128 to_u128(const mpz_class& n) {
    u128 out = 0;
    mpz_class tmp = n;
    int shift = 0;
    while (tmp > 0) {
        out |= u128(mpz_class(tmp & 0xffffffffUL).get_ui()) << shift;
        tmp >>= 32;
        shift += 32;
    }
    return out;
}

}  // namespace detail

// Smallest k with T^k(n) = 1, or the capped partial orbit.
inline FlightOutcome flight_time(const mpz_class& n, long cap = 100000) {
    if (n < 1) throw kernel_domain_error("flight_time: n must be >= 1");
    FlightOutcome out;
    if (detail::fits_u128(n)) {
        u128 m = detail::to_u128(n);
        long k = 0;
        bool overflowed = false;
        while (m != 1 && k < cap) {
            if (m >= detail::kU128Safe) { overflowed = true; break; }
            m = detail::t_step_fast(m);
            ++k;
        }
        if (!overflowed) {
            if (m == 1) { out.time = k; return out; }
            out.capped = true;  // partial orbit reconstructed below
        }
    }
    // mpz path (huge starts, overflow escapes, or cap bookkeeping).
    mpz_class m = n;
    long k = 0;
    std::vector<mpz_class> trail;
    trail.push_back(m);
    while (m != 1 && k < cap) {
        m = maps::t_step(m);
        trail.push_back(m);
        ++k;
    }
    if (m == 1) { out.capped = false; out.time = k; return out; }
    out.capped = true;
    out.partial = std::move(trail);
    return out;
}

inline IntegerOrbit t_orbit(const mpz_class& n, long cap = 100000) {
    IntegerOrbit orbit;
    orbit.start = n;
    mpz_class m = n;
    orbit.values.push_back(m);
    long k = 0;
    while (m != 1 && k < cap) {
        m = maps::t_step(m);
        orbit.values.push_back(m);
        ++k;
    }
    orbit.terminated = (m == 1);
    return orbit;
}

// Orbit of U halting at the first visit to {1, 5, 17} (the minima of the
// three known U-cycles) or at the cap.
inline IntegerOrbit u_orbit(const mpz_class& n, long cap = 100000) {
    if (n < 1) throw kernel_domain_error("u_orbit: n must be >= 1");
    IntegerOrbit orbit;
    orbit.start = n;
    mpz_class m = n;
    orbit.values.push_back(m);
    long k = 0;
    auto stopped = [](const mpz_class& v) { return v == 1 || v == 5 || v == 17; };
    while (!stopped(m) && k < cap) {
        m = maps::u_step(m);
        orbit.values.push_back(m);
        ++k;
    }
    orbit.terminated = stopped(m);
    return orbit;
}

// -- range verification ---------------------------------------------------------

struct RangeVerifyReport {
    std::uint64_t verified_below = 0;  // every 1 <= n < verified_below reaches 1
    std::uint64_t worst_n = 1;         // start with the longest climb before dropping under itself
    long worst_drop_steps = 0;         // steps until that orbit first drops below its start
    long worst_flight = 0;             // full flight time of worst_n
};

class cap_exceeded : public kernel_domain_error {
public:
    explicit cap_exceeded(const std::string& what) : kernel_domain_error(what) {}
};

// Confirms that every n < N reaches 1, using the standard shortcut of
// stopping as soon as an orbit drops below its start (induction over n).
inline RangeVerifyReport range_verify(std::uint64_t N, unsigned workers = 0, long cap = 100000000) {
    if (N < 2) return RangeVerifyReport{N, 1, 0, 0};

    std::atomic<bool> failed{false};
    std::atomic<std::uint64_t> failed_n{0};
    std::mutex merge_mu;
    long worst_steps = 0;
    std::uint64_t worst_n = 1;

    parallel_for_chunked(2, static_cast<std::int64_t>(N), [&](std::int64_t a, std::int64_t b) {
        long local_worst = -1;
        std::uint64_t local_n = 1;
        for (std::int64_t i = a; i < b; ++i) {
            if (failed.load(std::memory_order_relaxed)) return;
            u128 start = static_cast<std::uint64_t>(i);
            u128 m = start;
            long steps = 0;
            while (m >= start) {
                if (m >= detail::kU128Safe || steps >= cap) {
                    failed.store(true);
                    failed_n.store(static_cast<std::uint64_t>(i));
                    return;
                }
                m = detail::t_step_fast(m);
                ++steps;
            }
            if (steps > local_worst) { local_worst = steps; local_n = static_cast<std::uint64_t>(i); }
        }
        std::lock_guard<std::mutex> lock(merge_mu);
        if (local_worst > worst_steps || (local_worst == worst_steps && local_n < worst_n)) {
            worst_steps = local_worst;
            worst_n = local_n;
        }
    }, workers, 8192);

    if (failed.load())
        throw cap_exceeded("range_verify: orbit of " + std::to_string(failed_n.load()) +
                           " exceeded the iteration/width cap");

    RangeVerifyReport rep;
    rep.verified_below = N;
    rep.worst_drop_steps = worst_steps;
    rep.worst_n = worst_n;
    rep.worst_flight = flight_time(mpz_class(rep.worst_n)).time;
    return rep;
}

// -- inverse tree ----------------------------------------------------------------

struct InverseTreeNode {
    std::uint64_t value = 1;
    std::int64_t parent = -1;  // index into nodes; -1 for the root
    int depth = 0;
};

struct InverseTree {
    int depth = 0;
    std::vector<InverseTreeNode> nodes;  // BFS order, root first

    bool contains(std::uint64_t v) const {
        for (const auto& n : nodes)
            if (n.value == v) return true;
        return false;
    }
};

// All n with T^k(n) = 1 for some k <= depth. Preimages of m are {2m} always,
// plus (2m-1)/3 when m = 2 (mod 3); that odd preimage is excluded when it
// equals 1 so the trivial cycle does not re-enter the tree.
inline InverseTree inverse_tree(int depth) {
    if (depth < 0) throw kernel_domain_error("inverse_tree: depth must be >= 0");
    if (depth > 62) throw kernel_domain_error("inverse_tree: depth capped at 62 (node values overflow)");
    InverseTree tree;
    tree.depth = depth;
    tree.nodes.push_back(InverseTreeNode{1, -1, 0});
    std::size_t frontier_begin = 0;
    for (int d = 0; d < depth; ++d) {
        std::size_t frontier_end = tree.nodes.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            std::uint64_t m = tree.nodes[i].value;
            tree.nodes.push_back(InverseTreeNode{2 * m, static_cast<std::int64_t>(i), d + 1});
            if (m % 3 == 2) {
                std::uint64_t odd = (2 * m - 1) / 3;
                if (odd > 1)
                    tree.nodes.push_back(InverseTreeNode{odd, static_cast<std::int64_t>(i), d + 1});
            }
        }
        frontier_begin = frontier_end;
    }
    return tree;
}

// -- statistics -------------------------------------------------------------------

// (T^k(n) / n)^(1/k) over the recorded orbit.
inline double mean_speed(const IntegerOrbit& orbit) {
    if (orbit.values.size() < 2) throw kernel_domain_error("mean_speed: orbit must have length >= 1");
    long k = static_cast<long>(orbit.values.size()) - 1;
    Real first = Real::from_mpz(orbit.values.front(), 64);
    Real last = Real::from_mpz(orbit.values.back(), 64);
    Real ratio = Real::div(Real::log(last, 64), Real::of(static_cast<long>(k), 64), 64);
    Real adj = Real::div(Real::log(first, 64), Real::of(static_cast<long>(k), 64), 64);
    return std::exp(ratio.to_double() - adj.to_double());
}

struct RangeFlightStats {
    double mean_flight = 0;
    double predicted_flight = 0;    // 2 ln n / ln(4/3) at the range midpoint
    double mean_speed = 0;          // per-step ensemble speed exp(-sum ln n / sum k):
                                    // the estimator of the geometric mean of the step ratios
    double mean_speed_per_orbit = 0;  // arithmetic mean of (1/n)^(1/k); Jensen-skewed low
    std::uint64_t count = 0;
};

inline RangeFlightStats flight_stats(std::uint64_t lo, std::uint64_t count, unsigned workers = 0) {
    if (count == 0) throw kernel_domain_error("flight_stats: empty range");
    std::vector<long> flights(count, 0);
    parallel_for(0, static_cast<std::int64_t>(count), [&](std::int64_t i) {
        flights[static_cast<std::size_t>(i)] = flight_time(mpz_class(static_cast<unsigned long>(lo + i))).time;
    }, workers, 256);
    RangeFlightStats st;
    st.count = count;
    double sum = 0, speed_sum = 0, sum_ln = 0, sum_k = 0;
    std::uint64_t speed_n = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        sum += static_cast<double>(flights[i]);
        std::uint64_t n = lo + i;
        if (flights[i] > 0 && n > 1) {
            double ln_n = std::log(static_cast<double>(n));
            speed_sum += std::exp(-ln_n / static_cast<double>(flights[i]));
            sum_ln += ln_n;
            sum_k += static_cast<double>(flights[i]);
            ++speed_n;
        }
    }
    st.mean_flight = sum / static_cast<double>(count);
    double mid = static_cast<double>(lo) + static_cast<double>(count) / 2.0;
    st.predicted_flight = 2.0 * std::log(mid) / std::log(4.0 / 3.0);
    st.mean_speed = sum_k > 0 ? std::exp(-sum_ln / sum_k) : 0.0;
    st.mean_speed_per_orbit = speed_n ? speed_sum / static_cast<double>(speed_n) : 0.0;
    return st;
}

}  // namespace syracuse::dynamics
