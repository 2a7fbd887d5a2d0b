#include "doctest.h"

#include "cantor/errors.hpp"
#include "cantor/oracle.hpp"
#include "cantor/system.hpp"

#include "support.hpp"

using namespace cantor;

namespace {
const Alphabet kBinary(2);
}

TEST_CASE("parallel level kernels match the serial reference") {
    std::mt19937 rng(9600);
    for (int t = 0; t < 8; ++t) {
        Homeomorphism g = testsupport::random_mealy(rng, kBinary, 4);
        const MealyMachine& m = g.mealy();
        for (int depth : {6, 10, 13}) {
            auto serial = levels::induced_map_serial(m, 2, depth);
            auto parallel = levels::induced_map(m, 2, depth);
            CHECK(serial == parallel);

            auto inv_s = levels::invert_map_serial(serial);
            auto inv_p = levels::invert_map(serial);
            CHECK(inv_s == inv_p);

            std::size_t n = levels::word_count(2, depth);
            levels::Bits set = levels::make_bits(n);
            for (std::size_t i = 0; i < n; i += 5) levels::set_bit(set, i);
            CHECK(levels::apply_map_serial(set, inv_s, n) == levels::apply_map(set, inv_s, n));

            levels::Bits a = set, b1 = set, b2 = set;
            levels::bits_not(a, n);
            levels::Bits a2 = set;
            levels::bits_not_serial(a2, n);
            CHECK(a == a2);
            levels::bits_or(b1, a);
            levels::bits_or_serial(b2, a);
            CHECK(b1 == b2);
            levels::bits_and(b1, set);
            levels::bits_and_serial(b2, set);
            CHECK(b1 == b2);
        }
    }
}

TEST_CASE("induced maps of invertible machines are permutations") {
    std::mt19937 rng(9601);
    for (int t = 0; t < 6; ++t) {
        Homeomorphism g = testsupport::random_mealy(rng, kBinary, 4);
        auto map = levels::induced_map(g.mealy(), 2, 9);
        std::vector<char> seen(map.size(), 0);
        for (std::uint32_t v : map) {
            REQUIRE(v < map.size());
            CHECK_FALSE(seen[v]);
            seen[v] = 1;
        }
        // Inverse machine induces the inverse permutation.
        auto inv = levels::induced_map(g.inverse().mealy(), 2, 9);
        for (std::size_t r = 0; r < map.size(); ++r)
            CHECK(inv[map[r]] == static_cast<std::uint32_t>(r));
    }
}

TEST_CASE("parallel reach equals serial reach") {
    GeneratingSet S = catalog_entry("grigorchuk").generating_set();
    std::vector<std::vector<std::uint32_t>> maps;
    for (std::size_t i = 1; i < S.size(); ++i)
        maps.push_back(levels::induced_map(S.element(i).mealy(), 2, 11));
    std::size_t n = levels::word_count(2, 11);
    for (std::size_t seed : {std::size_t(0), std::size_t(5), std::size_t(2047)}) {
        auto serial = levels::reach_serial(seed, maps, n);
        auto parallel = levels::reach(seed, maps, n);
        CHECK(serial == parallel);
    }
}

TEST_CASE("word_count guards the level size") {
    CHECK(levels::word_count(2, 10) == 1024);
    CHECK_THROWS_AS(levels::word_count(2, 40), BudgetError);
}
