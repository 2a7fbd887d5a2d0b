#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cantor/clopen.hpp"
#include "cantor/genset.hpp"

namespace cantor {

struct ShellLevel {
    ClopenSet v;                // V_n
    ClopenSet w;                // W_n = V_n \ V_{n+1}
    std::optional<ClopenSet> p; // P_n = (U_{g in S^n} g V_n) \ V_1, when ball(n) fit
};

// The tower V_0 = /\_{s in S} sV, V_{n+1} = /\_{s in S} s V_n with shells
// W_n and outer shells P_n. With 1 in S = S^{-1} this incremental
// recurrence agrees with V_n = /\_{g in S^n} g V_0 (a tested invariant).
// V_infinity is present exactly when the chain stabilizes; the stabilized
// set is G-invariant (checked at construction).
struct ShellTower {
    ClopenSet base;                        // V
    std::vector<ShellLevel> levels;        // indices 0..computed
    std::optional<int> stabilized_at;      // least n with V_n = V_{n+1}
    std::optional<ClopenSet> v_infinity;   // = V_n at stabilization
    // |{g V_n : g in S^m}| for m <= n <= translate_depth.
    std::map<std::pair<int, int>, std::size_t> translate_counts;
    bool p_truncated = false;  // deep P_n levels skipped by ball budget

    bool stabilized() const { return stabilized_at.has_value(); }
    // V_infinity when stabilized, else the deepest computed V_n as an
    // upper approximation (callers must treat it as flagged).
    const ClopenSet& v_infinity_approx() const {
        return v_infinity ? *v_infinity : levels.back().v;
    }
};

ShellTower build_tower(const GeneratingSet& S, const ClopenSet& V, int max_n,
                       const Budgets& budgets);

// The distinct translates { g V : g in S^m }, via the enumerated ball.
std::vector<ClopenSet> translate_family(const BallTable& ball, const ClopenSet& v, int m);

// Same family by the recurrence T_0 = {V}, T_{k+1} = { s T : T in T_k };
// equality of the two routes is a tested invariant.
std::vector<ClopenSet> translate_family_incremental(const GeneratingSet& S, const ClopenSet& v,
                                                    int m);

struct ShellWalkStep {
    int level;                 // m with h x in W_m
    Homeomorphism element;     // h_m
    std::vector<int> word;     // generator-index witness, product left to right
    Point image;               // h_m x
};

// Shell descent: given x in V_n \ V_inf, produces h_m with
// h_m x in W_m for all 0 <= m <= n. Fails only on a violated precondition
// or inconsistent tower data.
std::vector<ShellWalkStep> shell_walk(const GeneratingSet& S, const ShellTower& tower,
                                      const Point& x, int n, const Budgets& budgets);

struct OrbitWitness {
    Point point;  // x outside V_infinity whose orbit enters every computed V_n
    // One (level, word, image) triple per computed level, shortest found.
    std::vector<ShellWalkStep> entries;
};

struct VInfinityVerdict {
    enum class Openness { Open, NotOpen, Unknown };
    Openness verdict = Openness::Unknown;
    ShellTower tower;
    std::optional<ClopenSet> v_infinity;   // when Open
    std::optional<OrbitWitness> witness;   // when NotOpen
    std::string note;
};

// Theorem-level verdict: "Open" with V_infinity on stabilization, "NotOpen"
// with a machine-verified witness orbit, "Unknown" when budgets ran out.
VInfinityVerdict v_infinity_verdict(const GeneratingSet& S, const ClopenSet& V,
                                    const Budgets& budgets);

}  // namespace cantor
