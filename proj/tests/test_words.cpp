#include "doctest.h"

#include <map>

#include "cantor/errors.hpp"
#include "cantor/genset.hpp"
#include "cantor/system.hpp"

#include "support.hpp"

using namespace cantor;

namespace {
const Alphabet kBinary(2);

GeneratingSet gens(const std::string& name) { return catalog_entry(name).generating_set(); }

// Exhaustive product enumeration: the free-monoid image of all words of
// length <= n over S, with the first word length reaching each element.
std::map<std::string, int> brute_lengths(const GeneratingSet& S, int n) {
    std::map<std::string, int> best{{S.identity().key(), 0}};
    std::vector<Homeomorphism> frontier{S.identity()};
    for (int len = 1; len <= n; ++len) {
        std::vector<Homeomorphism> next;
        for (const Homeomorphism& g : frontier)
            for (std::size_t i = 1; i < S.size(); ++i) {
                Homeomorphism p = compose(g, S.element(i));
                if (best.emplace(p.key(), len).second) next.push_back(p);
            }
        frontier = std::move(next);
    }
    return best;
}
}  // namespace

TEST_CASE("symmetrization adjoins identity and inverses") {
    GeneratingSet S = gens("odometer");
    CHECK(S.size() == 3);  // e, a, a^-1
    CHECK(S.identity().is_identity());
    CHECK(S.adjoined().size() == 2);  // e and a'
    GeneratingSet flip = gens("bitflip");
    CHECK(flip.size() == 2);  // the involution is its own inverse
    GeneratingSet id = gens("identity");
    CHECK(id.size() == 1);
}

TEST_CASE("ball enumeration on reference systems") {
    Budgets b;
    BallTable odo(gens("odometer"), 2, b);
    CHECK(odo.entries().size() == 5);  // 1, a, a^-1, a^2, a^-2
    CHECK(odo.complete());

    BallTable only_id(gens("identity"), 7, b);
    CHECK(only_id.entries().size() == 1);
    CHECK(only_id.complete());
    CHECK(only_id.radius_reached() == 7);

    BallTable flip(gens("bitflip"), 2, b);
    CHECK(flip.entries().size() == 2);  // sigma^2 minimizes to the identity
}

TEST_CASE("word lengths are BFS layers") {
    Budgets b;
    GeneratingSet S = gens("odometer");
    BallTable ball(S, 3, b);
    Homeomorphism a = catalog_entry("odometer").generators[0];
    CHECK(ball.word_length(S.identity()) == 0);
    CHECK(ball.word_length(a) == 1);
    CHECK(ball.word_length(compose(a, a)) == 2);
    CHECK(ball.word_length(a.inverse()) == 1);
    CHECK_THROWS_AS(ball.word_length(compose(compose(a, a), compose(a, a))),
                    PreconditionError);

    GeneratingSet flip = gens("bitflip");
    BallTable fb(flip, 2, b);
    CHECK(fb.word_length(catalog_entry("bitflip").generators[0].inverse()) == 1);
}

TEST_CASE("layer soundness against exhaustive word enumeration") {
    Budgets b;
    for (const char* name : {"odometer", "bitflip", "half-odometer", "grigorchuk"}) {
        GeneratingSet S = gens(name);
        int n = std::string(name) == "grigorchuk" ? 3 : 4;
        BallTable ball(S, n, b);
        std::map<std::string, int> truth = brute_lengths(S, n);
        CHECK(ball.entries().size() == truth.size());
        for (const BallEntry& e : ball.entries()) {
            REQUIRE(truth.count(e.element.key()));
            CHECK(truth.at(e.element.key()) == e.length);
            // The stored witness evaluates to the element and has length |g|.
            CHECK(static_cast<int>(e.witness.size()) == e.length);
            CHECK(ball.evaluate_word(e.witness, b) == e.element);
        }
    }
}

TEST_CASE("cone members: examples and brute-force identity") {
    Budgets b;
    GeneratingSet S = gens("odometer");
    BallTable ball(S, 7, b);
    Homeomorphism a = catalog_entry("odometer").generators[0];
    Homeomorphism a2 = compose(a, a);

    // K(a^2) = S^1 a^2 = {a, a^2, a^3}; capped at length 1 only a remains.
    auto cone1 = cone_members(ball, a2, 1, b);
    REQUIRE(cone1.size() == 1);
    CHECK(ball.entries()[cone1[0]].element == a);

    // |g| = 1: K(g) = {g}.
    auto cone_g = cone_members(ball, a, 7, b);
    REQUIRE(cone_g.size() == 1);
    CHECK(ball.entries()[cone_g[0]].element == a);

    // Brute force S^{|g|-1} g for |g| <= 4 must agree with the membership test.
    for (const char* name : {"odometer", "bitflip", "half-odometer"}) {
        GeneratingSet T = gens(name);
        BallTable tb(T, 8, b);
        for (const BallEntry& e : tb.entries()) {
            if (e.length < 1 || e.length > 4) continue;
            std::set<std::string> expected;
            for (const BallEntry& f : tb.entries()) {
                if (f.length > e.length - 1) break;
                expected.insert(compose(f.element, e.element, b).key());
            }
            std::set<std::string> got;
            for (std::size_t ci : cone_members(tb, e.element, 2 * e.length, b))
                got.insert(tb.entries()[ci].element.key());
            // Restrict the brute set to elements the ball can see.
            std::set<std::string> visible;
            for (const std::string& k : expected)
                for (const BallEntry& f : tb.entries())
                    if (f.element.key() == k && f.length <= 2 * e.length) visible.insert(k);
            CHECK(got == visible);
        }
    }
}

TEST_CASE("replete constant and the geodesic suffix extractor") {
    Budgets b;
    GeneratingSet S = gens("odometer");
    BallTable ball(S, 7, b);
    Homeomorphism a = catalog_entry("odometer").generators[0];
    Homeomorphism a2 = compose(a, a);

    CHECK(replete_constant(ball, {S.identity()}) == 1);
    CHECK(replete_constant(ball, {S.identity(), a}) == 2);
    CHECK(replete_constant(ball, {a2}) == 3);

    // For F = {1, a}, n = 2: every g with |g| >= 2 yields a suffix c with
    // |c| = 2 and F c inside K(g).
    std::vector<Homeomorphism> F{S.identity(), a};
    int n = replete_constant(ball, F);
    for (const BallEntry& e : ball.entries()) {
        if (e.length < n || e.length > 5) continue;
        Homeomorphism c = geodesic_suffix(ball, e.element, n, b);
        CHECK(ball.word_length(c) == n);
        Homeomorphism ginv = e.element.inverse();
        for (const Homeomorphism& f : F) {
            Homeomorphism fc_ginv = compose(compose(f, c, b), ginv, b);
            CHECK(ball.word_length(fc_ginv) <= e.length - 1);
        }
    }
}

TEST_CASE("ball budget exhaustion reports the partial radius") {
    Budgets tiny;
    tiny.ball_elements = 4;
    GeneratingSet S = gens("odometer");
    BallTable ball(S, 6, tiny);
    CHECK_FALSE(ball.complete());
    CHECK(ball.radius_reached() < 6);
    CHECK_THROWS_AS(ball.require_complete(), BudgetError);
    // Published layers stay sound: all lengths <= reached radius.
    for (const BallEntry& e : ball.entries()) CHECK(e.length <= ball.radius_reached());
}

TEST_CASE("word_text renders witnesses with generator names") {
    GeneratingSet S = gens("odometer");
    CHECK(S.word_text({}) == "e");
    Budgets b;
    BallTable ball(S, 2, b);
    for (const BallEntry& e : ball.entries())
        if (e.length == 2) CHECK(S.word_text(e.witness).size() >= 3);
}
