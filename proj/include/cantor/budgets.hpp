#pragma once

#include <cstddef>

namespace cantor {

// Exploration limits. Every quantity the analysis cannot decide exactly is
// bounded by one of these; exhausting a budget is reported explicitly
// (an `unknown` verdict or a BudgetError), never silently approximated.
struct Budgets {
    std::size_t ball_elements = 20000;  // max distinct group elements per ball
    int machine_states = 10000;         // transducer state cap after minimization
    int pe_pairs = 4096;                // prefix-exchange table cap

    int depth = 10;           // working depth for orbit closures, oracle, quotients
    int radius = 6;           // ball radius for recurrence / proximality searches
    int max_n = 12;           // tower depth before declaring non-stabilization
    int translate_depth = 4;  // compute translate counts for m <= n <= this

    int point_bound = 6;       // |u|+|v| bound for the standard point sample
    int sample_cap = 6;        // points per quantified condition inside analyze
    int recur_min_layer = 2;   // first ball layer tested for recurrence (r0)
    int recur_cone_cap = 4;    // max |c| for cone witnesses (n_max)
    int orbit_follow = 16;       // how far orbits are followed for witnesses
    int orbit_points_cap = 512;  // point-orbit enumeration cap (finite-orbit check)
    int proximity_gain = 8;    // extra agreement depth required for a proximal hit
    int stability_window = 3;  // depths compared when certifying a closed relation
};

}  // namespace cantor
