#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "cantor/analyzer.hpp"
#include "cantor/errors.hpp"
#include "cantor/oracle.hpp"
#include "cantor/report.hpp"
#include "cantor/system.hpp"

#include "support.hpp"

using namespace cantor;

namespace {
const Alphabet kBinary(2);

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/cantordyn_test_" + name + ".json";
    std::ofstream out(path);
    out << content;
    return path;
}
}  // namespace

TEST_CASE("load_system: valid descriptions and positional errors") {
    std::string odo = write_temp("odometer", R"({
      "name": "odometer",
      "alphabet": 2,
      "generators": [{"type": "mealy", "name": "a", "states": 2, "initial": 0,
                      "delta": [[1, 0], [1, 1]], "lambda": [[1, 0], [0, 1]]}]
    })");
    SystemDescription sys = load_system(odo);
    CHECK(sys.generating_set().size() == 3);  // identity and inverse adjoined

    std::string id_only = write_temp("identity", R"({
      "name": "id", "alphabet": 2,
      "generators": [{"type": "mealy", "states": 1, "initial": 0,
                      "delta": [[0, 0]], "lambda": [[0, 1]]}]
    })");
    CHECK(load_system(id_only).generating_set().size() == 1);

    // Range code with a hole is rejected with a maximal-antichain error.
    std::string bad = write_temp("bad_pe", R"({
      "name": "bad", "alphabet": 2,
      "generators": [{"type": "prefix_exchange", "pairs": [["0", "00"], ["10", "01"], ["11", "011"]]}]
    })");
    CHECK_THROWS_WITH_AS(load_system(bad), doctest::Contains("antichain"), ParseError);

    CHECK_THROWS_AS(load_system("/tmp/does_not_exist_cantordyn.json"), ParseError);
    std::string garbage = write_temp("garbage", "{not json");
    CHECK_THROWS_AS(load_system(garbage), ParseError);
}

TEST_CASE("catalog contents and round-trip") {
    const auto& systems = catalog();
    CHECK(systems.size() == 7);
    for (const char* name : {"identity", "odometer", "bitflip", "grigorchuk", "lamplighter",
                             "half-odometer", "contract-h"})
        CHECK_NOTHROW(catalog_entry(name));
    CHECK_THROWS_AS(catalog_entry("nope"), ParseError);

    for (const SystemDescription& sys : systems) {
        SystemDescription back = system_from_json(system_to_json(sys));
        REQUIRE(back.generators.size() == sys.generators.size());
        for (std::size_t i = 0; i < sys.generators.size(); ++i)
            CHECK(back.generators[i] == sys.generators[i]);
    }
}

TEST_CASE("grigorchuk and lamplighter facts are pinned computationally") {
    // Level-transitivity of the Grigorchuk action: one orbit class per level.
    Budgets b;
    Analyzer grig(catalog_entry("grigorchuk").generating_set(), b);
    for (int d = 1; d <= 6; ++d) {
        OrbitClosureApprox oc = grig.orbit_closure(Point(kBinary, "", "0"), d);
        CHECK(oc.reached.size() == (std::size_t(1) << d));
    }
    // All four generators are involutions.
    GeneratingSet S = catalog_entry("grigorchuk").generating_set();
    CHECK(S.size() == 5);  // e, a, b, c, d: closed under inverses already
    for (const Homeomorphism& g : catalog_entry("grigorchuk").generators)
        CHECK(compose(g, g).is_identity());

    // Lamplighter: level-transitive as well; generators have infinite order
    // (no small power collapses to the identity).
    Analyzer lamp(catalog_entry("lamplighter").generating_set(), b);
    for (int d = 1; d <= 6; ++d) {
        OrbitClosureApprox oc = lamp.orbit_closure(Point(kBinary, "", "0"), d);
        CHECK(oc.reached.size() == (std::size_t(1) << d));
    }
    Homeomorphism a = catalog_entry("lamplighter").generators[0];
    Homeomorphism p = a;
    for (int k = 2; k <= 6; ++k) {
        p = compose(p, a);
        CHECK_FALSE(p.is_identity());
    }
}

TEST_CASE("bitset oracle agrees with the symbolic path") {
    for (const char* name : {"odometer", "bitflip", "half-odometer", "grigorchuk"}) {
        GeneratingSet S = catalog_entry(name).generating_set();
        BitsetOracle oracle(S, 8);
        std::mt19937 rng(9400);
        for (int t = 0; t < 10; ++t) {
            ClopenSet c = testsupport::random_clopen(rng, kBinary, 5, 6);
            levels::Bits bits = oracle.from_clopen(c);
            CHECK(oracle.to_clopen(bits) == c);
            for (std::size_t i = 0; i < S.size(); ++i) {
                CHECK(oracle.matches(oracle.image(i, bits), S.element(i).image(c)));
                CHECK(oracle.matches(oracle.preimage(i, bits), S.element(i).preimage(c)));
            }
        }
        // Tower step agrees with the symbolic V_0 construction.
        ClopenSet v = ClopenSet::parse(kBinary, name[0] == 'o' ? "1" : "0");
        ShellTower tower = build_tower(S, v, 0, Budgets{});
        CHECK(oracle.matches(oracle.tower_step(oracle.from_clopen(v)), tower.levels[0].v));
    }
}

TEST_CASE("oracle scripts: pass, empty, and the corrupted negative control") {
    GeneratingSet S = catalog_entry("odometer").generating_set();
    OracleDiff pass = oracle_check(S, 8, 42, 60);
    CHECK(pass.pass);
    CHECK(pass.operations == 60);

    OracleDiff empty = oracle_check(S, 8, 42, 0);
    CHECK(empty.pass);

    // A corrupted induced map must be caught with a localized diff.
    OracleDiff corrupt = oracle_check(S, 8, 42, 60, 1);
    CHECK_FALSE(corrupt.pass);
    CHECK(!corrupt.detail.empty());
}

TEST_CASE("orbit closures match the oracle reach") {
    for (const char* name : {"odometer", "bitflip", "grigorchuk", "half-odometer"}) {
        GeneratingSet S = catalog_entry(name).generating_set();
        Budgets b;
        Analyzer an(S, b);
        BitsetOracle oracle(S, 8);
        std::mt19937 rng(9500);
        for (int t = 0; t < 6; ++t) {
            Point x = testsupport::random_point(rng, kBinary, 4);
            OrbitClosureApprox oc = an.orbit_closure(x, 8);
            levels::Bits reach = oracle.orbit_reach(x.prefix(8));
            CHECK(oracle.matches(reach, ClopenSet::normalize(kBinary, oc.reached)));
        }
    }
}

TEST_CASE("reports render deterministically") {
    Budgets b;
    Analyzer an(catalog_entry("odometer").generating_set(), b);
    ConditionReport rep = an.theorem_consistency(ClopenSet::full_space(kBinary));
    EquicontinuityReport eq = an.equicontinuity_report(3);
    auto j1 = analyze_report_json("odometer", rep, eq, b);
    auto j2 = analyze_report_json("odometer", rep, eq, b);
    CHECK(j1.dump() == j2.dump());
    CHECK(j1["schema"] == 1);
    CHECK(j1["consistent"] == true);
    CHECK(j1["conditions"]["i"]["verdict"] == "holds");

    std::string text = analyze_report_text("odometer", rep, eq);
    CHECK(text.find("consistent: yes") != std::string::npos);

    VInfinityVerdict vv = v_infinity_verdict(catalog_entry("contract-h").generating_set(),
                                             ClopenSet::parse(kBinary, "0"), b);
    auto tj = tower_report_json(catalog_entry("contract-h").generating_set(), vv);
    CHECK(tj["verdict"] == "not-open");
    CHECK(tj["levels"].size() == 13);

    std::optional<QuotientY> q = an.quotient(ClopenSet::full_space(kBinary), 2);
    std::string dot = dot_reachability(an, 2, q);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("cluster_0") != std::string::npos);
}
