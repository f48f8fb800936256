// The published scan outcomes that the workbench reproduces and diffs
// against: the 26 positive indices attracted to A2 below 2000, the
// negative-side exception prefix with its targets, and the prefix of the
// positive "not proche" list (truncated at the source, so entries beyond it
// are reported as findings rather than asserted).

#pragma once

#include "syracuse/attractors.hpp"

#include <vector>

namespace syracuse::published {

inline const std::vector<long>& a2_indices_positive() {
    static const std::vector<long> list = {
        1,    3,    5,    382,  496,  502,  504,  508,  530,  550,  644,  646,  656,
        666,  754,  830,  874,  1078, 1150, 1214, 1534, 1590, 1598, 1614, 1662, 1854,
    };
    return list;
}

struct NegException {
    long n;
    attractors::AttractorId target;
};

// Even negative indices whose critical orbit does not follow the even rule,
// with the published targets.
inline const std::vector<NegException>& negative_exception_prefix() {
    using attractors::AttractorId;
    static const std::vector<NegException> list = {
        {-34, AttractorId::B3},  {-66, AttractorId::B1},  {-98, AttractorId::B3},
        {-130, AttractorId::NU1}, {-132, AttractorId::B3}, {-162, AttractorId::B1},
        {-174, AttractorId::NU1}, {-194, AttractorId::B1}, {-202, AttractorId::NU1},
        {-226, AttractorId::NU1},
    };
    return list;
}

// Positive indices reported to lose contact with the integer orbit, besides
// the residue class n = -2 (mod 64). The published list is truncated after
// 500.
inline const std::vector<long>& not_proche_positive_prefix() {
    static const std::vector<long> list = {54, 334, 338, 366, 390, 442, 444, 470, 484, 486, 496, 500};
    return list;
}

// Expected attractor for an odd negative index: the U-orbit of |n| ends in
// the stop set {1, 5, 17}, which maps to {nu1, B1, B3}.
inline attractors::AttractorId odd_rule_target(long stop_value) {
    using attractors::AttractorId;
    switch (stop_value) {
        case 1: return AttractorId::NU1;
        case 5: return AttractorId::B1;
        case 17: return AttractorId::B3;
    }
    throw kernel_domain_error("odd_rule_target: stop value outside {1,5,17}");
}

// Expected attractor for an even negative index under the no-exception rule.
inline attractors::AttractorId even_rule_target(long stop_value) {
    using attractors::AttractorId;
    switch (stop_value) {
        case 1: return AttractorId::ZERO;
        case 5: return AttractorId::B2;
        case 17: return AttractorId::B4;
    }
    throw kernel_domain_error("even_rule_target: stop value outside {1,5,17}");
}

}  // namespace syracuse::published
