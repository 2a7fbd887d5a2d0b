// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cantor/analyzer.hpp"
#include "cantor/errors.hpp"
#include "cantor/oracle.hpp"
#include "cantor/system.hpp"
#include "cantor/tower.hpp"

#include "support.hpp"

using namespace cantor;
using Clock = std::chrono::steady_clock;

namespace {

const Alphabet kBinary(2);
int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++g_failures;
}

ClopenSet cs(const std::string& t) { return ClopenSet::parse(kBinary, t); }
Point pt(const std::string& t) { return Point::parse(kBinary, t); }

// The standard U family: X, every depth-1 and depth-2 cylinder.
std::vector<ClopenSet> u_family() {
    std::vector<ClopenSet> out{ClopenSet::full_space(kBinary)};
    for (int len = 1; len <= 2; ++len)
        for (const Word& w : kBinary.words_of_length(len))
            out.push_back(ClopenSet::cylinder(kBinary, w));
    return out;
}

// --------------------------------------------------------------------------
// 1. Theorem consistency across the catalog at default budgets, under 30 s.
// --------------------------------------------------------------------------
void criterion_1() {
    auto t0 = Clock::now();
    bool all_consistent = true;
    std::string detail;
    for (const SystemDescription& sys : catalog()) {
        Analyzer analyzer(sys.generating_set(), Budgets{});
        for (const ClopenSet& U : u_family()) {
            ConditionReport rep = analyzer.theorem_consistency(U);
            if (!rep.consistent) {
                all_consistent = false;
                detail = sys.name + " with U = " + U.text() + " is inconsistent";
            }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_time = secs <= 30.0;
    if (detail.empty())
        detail = "49 reports consistent in " + std::to_string(secs).substr(0, 5) + " s";
    report(1, "six-condition consistency on catalog x U family", all_consistent && in_time,
           detail);
}

// --------------------------------------------------------------------------
// 2. Theorem on V_infinity, both directions, exact set equality.
// --------------------------------------------------------------------------
void criterion_2() {
    bool pass = true;
    std::string detail;

    VInfinityVerdict odo = v_infinity_verdict(catalog_entry("odometer").generating_set(),
                                              cs("1"), Budgets{});
    if (odo.verdict != VInfinityVerdict::Openness::Open || !odo.v_infinity ||
        !odo.v_infinity->is_empty() || odo.tower.stabilized_at != 0) {
        pass = false;
        detail = "odometer direction failed";
    }

    Budgets b;
    b.max_n = 12;
    VInfinityVerdict ch = v_infinity_verdict(catalog_entry("contract-h").generating_set(),
                                             cs("0"), b);
    if (ch.verdict != VInfinityVerdict::Openness::NotOpen || ch.tower.stabilized()) {
        pass = false;
        detail = "contract-h verdict wrong";
    } else {
        for (int n = 0; n <= 12; ++n)
            if (ch.tower.levels[n].v != cs(Word(static_cast<std::size_t>(n) + 2, '0'))) {
                pass = false;
                detail = "V_" + std::to_string(n) + " differs from [0^(n+2)]";
            }
        // Witness orbit must be machine-verified into every computed level.
        if (!ch.witness || ch.witness->entries.size() != ch.tower.levels.size()) {
            pass = false;
            detail = "missing witness entries";
        } else {
            GeneratingSet S = catalog_entry("contract-h").generating_set();
            for (const ShellWalkStep& s : ch.witness->entries) {
                Homeomorphism g = S.identity();
                for (int i : s.word) g = compose(g, S.element(i));
                Point img = g.apply(ch.witness->point);
                if (img != s.image || !ch.tower.levels[s.level].v.contains(img)) {
                    pass = false;
                    detail = "witness replay failed at level " + std::to_string(s.level);
                }
            }
        }
    }
    report(2, "V_infinity openness, both directions, exact", pass, detail);
}

// --------------------------------------------------------------------------
// 3. Shell suite on 50 randomized small systems: zero violations.
// --------------------------------------------------------------------------
void criterion_3() {
    std::mt19937 rng(0xACCE5503);
    Budgets b;
    b.max_n = 6;
    b.ball_elements = 3000;
    int violations = 0;
    int built = 0;
    int walks = 0;
    std::vector<Point> sample = enumerate_points(kBinary, 6);
    for (int t = 0; t < 50; ++t) {
        bool synchronous = t % 2 == 0;
        GeneratingSet S = testsupport::random_system(rng, kBinary, synchronous, 3,
                                                     synchronous ? 4 : 6);
        ClopenSet V = testsupport::random_clopen(rng, kBinary, 3, 4);
        ShellTower tower = build_tower(S, V, 6, b);
        ++built;
        const auto& L = tower.levels;
        for (std::size_t n = 0; n + 1 < L.size(); ++n) {
            if (!L[n + 1].v.is_subset_of(L[n].v)) ++violations;
            if (L[n].w != set_difference(L[n].v, L[n + 1].v)) ++violations;
            if (L[n].p && L[n + 1].p && !L[n + 1].p->is_subset_of(*L[n].p)) ++violations;
            if (!L[n + 1].w.is_empty() && L[n].w.is_empty()) ++violations;
        }
        for (std::size_t n = 0; n < L.size(); ++n)
            for (std::size_t m = n + 1; m < L.size(); ++m)
                if (!set_intersect(L[n].w, L[m].w).is_empty()) ++violations;
        // Shell walks for every applicable (x, n) from the sample.
        const ClopenSet& vinf = tower.v_infinity_approx();
        for (const Point& x : sample) {
            for (std::size_t n = 0; n < L.size(); ++n) {
                if (!L[n].v.contains(x) || vinf.contains(x)) continue;
                try {
                    auto steps = shell_walk(S, tower, x, static_cast<int>(n), b);
                    ++walks;
                    if (steps.size() != n + 1) ++violations;
                    for (const ShellWalkStep& s : steps)
                        if (!L[s.level].w.contains(s.image) || s.element.apply(x) != s.image)
                            ++violations;
                } catch (const Error&) {
                    ++violations;
                }
            }
        }
    }
    report(3, "shell suite on 50 randomized systems", violations == 0,
           std::to_string(built) + " towers, " + std::to_string(walks) + " walks, " +
               std::to_string(violations) + " violations");
}

// --------------------------------------------------------------------------
// 4. Translate-family finiteness: ball route == incremental route, m <= n <= 4.
// --------------------------------------------------------------------------
void criterion_4() {
    bool pass = true;
    std::string detail;
    Budgets b;
    for (const SystemDescription& sys : catalog()) {
        GeneratingSet S = sys.generating_set();
        ShellTower tower = build_tower(S, cs("0"), 4, b);
        BallTable ball(S, 4, b);
        for (int n = 0; n < static_cast<int>(tower.levels.size()) && n <= 4; ++n) {
            for (int m = 0; m <= n; ++m) {
                auto by_ball = translate_family(ball, tower.levels[n].v, m);
                auto by_inc = translate_family_incremental(S, tower.levels[n].v, m);
                if (by_ball != by_inc) {
                    pass = false;
                    detail = sys.name + " at (m,n) = (" + std::to_string(m) + "," +
                             std::to_string(n) + ")";
                }
                auto it = tower.translate_counts.find({m, n});
                if (it != tower.translate_counts.end() && it->second != by_ball.size()) {
                    pass = false;
                    detail = sys.name + " stored count differs";
                }
            }
        }
    }
    report(4, "translate families finite and route-equal", pass, detail);
}

// --------------------------------------------------------------------------
// 5. Almost-periodicity equivalence and recurrence implication: zero
//    contradictions over the standard sample.
// --------------------------------------------------------------------------
void criterion_5() {
    int contradictions = 0;
    int points = 0;
    for (const SystemDescription& sys : catalog()) {
        Analyzer analyzer(sys.generating_set(), Budgets{});
        for (const Point& x : analyzer.standard_sample()) {
            ++points;
            Verdict minimal = analyzer.minimal_on_closure(x).verdict;
            Verdict ap = analyzer.almost_periodic(x).verdict;
            if ((minimal == Verdict::Holds && ap == Verdict::Fails) ||
                (minimal == Verdict::Fails && ap == Verdict::Holds))
                ++contradictions;
            if (ap == Verdict::Holds) {
                for (int depth = 1; depth <= 2; ++depth) {
                    try {
                        SRecurrenceResult r = analyzer.s_recurrent(
                            x, ClopenSet::cylinder(kBinary, x.prefix(depth)),
                            analyzer.budgets().radius, analyzer.budgets().recur_cone_cap);
                        if (r.verdict == Verdict::Fails) ++contradictions;
                    } catch (const BudgetError&) {
                    }
                }
            }
        }
    }
    report(5, "almost-periodic equivalences over the sample", contradictions == 0,
           std::to_string(points) + " points, " + std::to_string(contradictions) +
               " contradictions");
}

// --------------------------------------------------------------------------
// 6. Oracle equivalence at depth 10: catalog synchronous systems and 200
//    randomized scripts, bit-exact.
// --------------------------------------------------------------------------
void criterion_6() {
    bool pass = true;
    std::string detail;
    int scripts = 0;
    for (const SystemDescription& sys : catalog()) {
        GeneratingSet S = sys.generating_set();
        if (!S.is_synchronous()) continue;
        int per_system = 40;  // 5 synchronous systems x 40 = 200 scripts
        for (int s = 0; s < per_system; ++s) {
            OracleDiff diff = oracle_check(S, 10, 0xACCE5506 + s, 50);
            ++scripts;
            if (!diff.pass) {
                pass = false;
                detail = sys.name + " script " + std::to_string(s) + ": " + diff.detail;
            }
        }
        // Tower levels and orbit closures against the oracle.
        Analyzer analyzer(S, Budgets{});
        BitsetOracle oracle(S, 10);
        ShellTower tower = build_tower(S, cs("0"), 3, Budgets{});
        levels::Bits v = oracle.from_clopen(cs("0"));
        for (const ShellLevel& level : tower.levels) {
            v = oracle.tower_step(v);
            if (!oracle.matches(v, level.v)) {
                pass = false;
                detail = sys.name + " tower level mismatch";
                break;
            }
        }
        for (const Point& x : {pt("(0)"), pt("0(1)"), pt("10(01)")}) {
            OrbitClosureApprox oc = analyzer.orbit_closure(x, 10);
            if (!oracle.matches(oracle.orbit_reach(x.prefix(10)),
                                ClopenSet::normalize(kBinary, oc.reached))) {
                pass = false;
                detail = sys.name + " orbit closure mismatch at " + x.text();
            }
        }
    }
    report(6, "bitset-oracle equivalence at depth 10", pass,
           detail.empty() ? std::to_string(scripts) + " scripts bit-exact" : detail);
}

// --------------------------------------------------------------------------
// 7. Isometry exactness: structural distality and no proximal witnesses on
//    100 random distinct pairs at radius 8.
// --------------------------------------------------------------------------
void criterion_7() {
    std::mt19937 rng(0xACCE5507);
    bool pass = true;
    std::string detail;
    int pairs = 0;
    for (const SystemDescription& sys : catalog()) {
        GeneratingSet S = sys.generating_set();
        if (!S.is_synchronous()) continue;
        Budgets b;
        b.radius = 8;
        Analyzer analyzer(S, b);
        DistalReport rep = analyzer.distal_report({{pt("(0)"), pt("(1)")}});
        if (!rep.structurally_distal || !rep.lemma_violations.empty()) {
            pass = false;
            detail = sys.name + " lost the structural distality certificate";
        }
        for (int t = 0; t < 20; ++t) {
            Point x = testsupport::random_point(rng, kBinary, 5);
            Point y = testsupport::random_point(rng, kBinary, 5);
            if (x == y) continue;
            ++pairs;
            if (analyzer.proximal(x, y).witness_found) {
                pass = false;
                detail = sys.name + ": false proximal witness for (" + x.text() + ", " +
                         y.text() + ")";
            }
        }
    }
    report(7, "isometric systems show zero proximal witnesses", pass && pairs >= 90,
           detail.empty() ? std::to_string(pairs) + " pairs, zero witnesses" : detail);
}

// --------------------------------------------------------------------------
// 8. Negative-control fidelity: contract-h produces failure evidence on
//    (i)-(v) and every piece replays through apply/contains.
// --------------------------------------------------------------------------
void criterion_8() {
    Analyzer analyzer(catalog_entry("contract-h").generating_set(), Budgets{});
    ConditionReport rep = analyzer.theorem_consistency(ClopenSet::full_space(kBinary));
    bool pass = rep.consistent;
    std::string detail;
    int replayed = 0;
    for (int i = 0; i < 5; ++i) {
        const ConditionResult& c = rep.conditions[i];
        if (c.verdict != Verdict::Fails) {
            pass = false;
            detail = "condition " + std::to_string(i + 1) + " did not fail";
            continue;
        }
        if (c.evidence.empty()) {
            pass = false;
            detail = "condition " + std::to_string(i + 1) + " carries no evidence";
            continue;
        }
        for (const Evidence& e : c.evidence) {
            if (!replay_evidence(analyzer.generators(), analyzer.budgets(), e)) {
                pass = false;
                detail = "evidence '" + e.kind + "' on condition " + std::to_string(i + 1) +
                         " failed to replay";
            } else {
                ++replayed;
            }
        }
    }
    report(8, "negative control evidence replays 100%", pass,
           detail.empty() ? std::to_string(replayed) + " evidence items replayed" : detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
    else std::printf("all 8 criteria passed\n");
    return g_failures ? 1 : 0;
}
