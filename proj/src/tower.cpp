#include "cantor/tower.hpp"

#include <algorithm>
#include <set>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

ClopenSet intersect_translates(const GeneratingSet& S, const ClopenSet& v) {
    ClopenSet out = v;  // the identity term
    for (std::size_t i = 1; i < S.size(); ++i) out = set_intersect(out, S.element(i).image(v));
    return out;
}

}  // namespace

ShellTower build_tower(const GeneratingSet& S, const ClopenSet& V, int max_n,
                       const Budgets& budgets) {
    if (max_n < 0) throw PreconditionError("tower depth must be nonnegative");
    if (V.alphabet() != S.alphabet()) throw PreconditionError("alphabet mismatch");

    std::vector<ClopenSet> v;
    v.push_back(intersect_translates(S, V));  // V_0
    std::optional<int> stabilized;
    for (int n = 0; n <= max_n; ++n) {
        ClopenSet next = intersect_translates(S, v.back());
        if (next == v.back()) {
            stabilized = n;
            break;
        }
        if (n == max_n) break;  // computed V_{max_n+1} only to define W_{max_n}
        v.push_back(std::move(next));
    }

    ShellTower tower{V, {}, stabilized, std::nullopt, {}, false};
    if (stabilized) {
        tower.v_infinity = v[*stabilized];
        for (std::size_t i = 1; i < S.size(); ++i)
            if (S.element(i).image(*tower.v_infinity) != *tower.v_infinity)
                throw InternalError("stabilized tower level is not invariant");
    }

    // Ball for the P_n levels (and the translate counts); a budget overflow
    // here truncates P, never the V/W chain.
    int want_radius = static_cast<int>(v.size()) - 1;
    std::optional<BallTable> ball;
    try {
        ball.emplace(S, want_radius, budgets);
    } catch (const BudgetError&) {
        tower.p_truncated = true;
    }
    if (ball && !ball->complete()) tower.p_truncated = true;

    ClopenSet v_one = v.size() > 1 ? v[1]
                      : (stabilized ? v[0] : intersect_translates(S, v[0]));
    for (std::size_t n = 0; n < v.size(); ++n) {
        const ClopenSet& vn = v[n];
        ClopenSet vnext = (n + 1 < v.size()) ? v[n + 1]
                           : (stabilized ? v[*stabilized]
                                         : intersect_translates(S, v.back()));
        ShellLevel level{vn, set_difference(vn, vnext), std::nullopt};
        if (ball && static_cast<int>(n) <= ball->radius_reached()) {
            ClopenSet orbit_union = ClopenSet::empty_set(S.alphabet());
            for (const BallEntry& e : ball->entries()) {
                if (e.length > static_cast<int>(n)) break;
                orbit_union = set_union(orbit_union, e.element.image(vn));
            }
            level.p = set_difference(orbit_union, v_one);
        } else {
            tower.p_truncated = true;
        }
        tower.levels.push_back(std::move(level));
    }

    int tdepth = std::min<int>(static_cast<int>(tower.levels.size()) - 1, budgets.translate_depth);
    if (ball)
        for (int n = 0; n <= tdepth; ++n)
            for (int m = 0; m <= n && m <= ball->radius_reached(); ++m)
                tower.translate_counts[{m, n}] =
                    translate_family(*ball, tower.levels[n].v, m).size();
    return tower;
}

std::vector<ClopenSet> translate_family(const BallTable& ball, const ClopenSet& v, int m) {
    if (ball.radius_reached() < m)
        throw BudgetError("ball radius insufficient for the translate family",
                          ball.radius_reached());
    std::set<ClopenSet> seen;
    for (const BallEntry& e : ball.entries()) {
        if (e.length > m) break;
        seen.insert(e.element.image(v));
    }
    return {seen.begin(), seen.end()};
}

std::vector<ClopenSet> translate_family_incremental(const GeneratingSet& S, const ClopenSet& v,
                                                    int m) {
    std::set<ClopenSet> family{v};
    for (int step = 0; step < m; ++step) {
        std::set<ClopenSet> next = family;  // 1 in S keeps every previous translate
        for (const ClopenSet& t : family)
            for (std::size_t i = 1; i < S.size(); ++i) next.insert(S.element(i).image(t));
        if (next == family) break;
        family = std::move(next);
    }
    return {family.begin(), family.end()};
}

std::vector<ShellWalkStep> shell_walk(const GeneratingSet& S, const ShellTower& tower,
                                      const Point& x, int n, const Budgets& budgets) {
    if (n < 0 || n >= static_cast<int>(tower.levels.size()))
        throw PreconditionError("shell_walk level outside the computed tower");
    const ClopenSet& v_inf = tower.v_infinity_approx();
    if (!tower.levels[n].v.contains(x) || v_inf.contains(x))
        throw PreconditionError("shell_walk requires x in V_n \\ V_infinity");

    // Deepest level still containing x; x sits in its shell W_{n'}.
    int top = n;
    while (top + 1 < static_cast<int>(tower.levels.size()) && tower.levels[top + 1].v.contains(x))
        ++top;
    if (!tower.levels[top].w.contains(x))
        throw InternalError("point escaped its shell; tower data inconsistent");

    std::vector<ShellWalkStep> steps;
    Point y = x;
    Homeomorphism h = S.identity();
    std::vector<int> word;
    for (int m = top; m >= 0; --m) {
        if (m <= n) steps.push_back({m, h, word, y});
        if (m == 0) break;
        // y in W_m: some s in S pushes it out of V_m, and every s keeps it
        // inside V_{m-1}.
        bool moved = false;
        for (std::size_t i = 1; i < S.size() && !moved; ++i) {
            Point z = S.element(i).apply(y);
            if (!tower.levels[m].v.contains(z)) {
                if (!tower.levels[m - 1].v.contains(z))
                    throw InternalError("shell descent left the next level; tower inconsistent");
                y = z;
                h = compose(S.element(i), h, budgets);
                word.insert(word.begin(), static_cast<int>(i));
                moved = true;
            }
        }
        if (!moved) throw InternalError("shell descent found no mover; tower inconsistent");
    }
    std::reverse(steps.begin(), steps.end());  // ascending level
    return steps;
}

VInfinityVerdict v_infinity_verdict(const GeneratingSet& S, const ClopenSet& V,
                                    const Budgets& budgets) {
    VInfinityVerdict out{VInfinityVerdict::Openness::Unknown,
                         build_tower(S, V, budgets.max_n, budgets), std::nullopt, std::nullopt,
                         ""};
    const ShellTower& tower = out.tower;
    if (tower.stabilized()) {
        out.verdict = VInfinityVerdict::Openness::Open;
        out.v_infinity = tower.v_infinity;
        out.note = "stabilized at level " + std::to_string(*tower.stabilized_at);
        return out;
    }

    // Unstabilized: hunt for a point outside V_1 whose orbit still enters
    // every computed level. Candidates live in the deepest available P_n.
    const ClopenSet* candidate_region = nullptr;
    for (auto it = tower.levels.rbegin(); it != tower.levels.rend(); ++it)
        if (it->p) {
            candidate_region = &*it->p;
            break;
        }
    if (!candidate_region || candidate_region->is_empty()) {
        out.note = "no candidate region within budget";
        return out;
    }

    std::optional<BallTable> ball;
    try {
        ball.emplace(S, budgets.orbit_follow, budgets);
    } catch (const BudgetError&) {
        out.note = "orbit-follow ball exceeded budget";
        return out;
    }

    const int last = static_cast<int>(tower.levels.size()) - 1;
    for (const Point& x : enumerate_points(S.alphabet(), budgets.point_bound)) {
        if (!candidate_region->contains(x)) continue;
        OrbitWitness witness{x, {}};
        bool all = true;
        for (int n = 0; n <= last && all; ++n) {
            bool found = false;
            for (const BallEntry& e : ball->entries()) {
                Point img = e.element.apply(x);
                if (tower.levels[n].v.contains(img)) {
                    witness.entries.push_back({n, e.element, e.witness, img});
                    found = true;
                    break;
                }
            }
            all = found;
        }
        if (all) {
            out.verdict = VInfinityVerdict::Openness::NotOpen;
            out.witness = std::move(witness);
            out.note = "witness orbit reaches every computed level";
            return out;
        }
    }
    out.note = "no witness found within budgets; tower unstabilized at depth " +
               std::to_string(last);
    return out;
}

}  // namespace cantor
