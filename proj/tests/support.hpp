#pragma once

// Shared test utilities: deterministic random structures and small
// brute-force oracles kept independent of the library's symbolic path.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cantor/clopen.hpp"
#include "cantor/genset.hpp"
#include "cantor/machine.hpp"
#include "cantor/point.hpp"

namespace testsupport {

using namespace cantor;

inline Word random_word(std::mt19937& rng, int arity, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> letter(0, arity - 1);
    Word w;
    int l = len(rng);
    for (int i = 0; i < l; ++i) w.push_back(static_cast<char>('0' + letter(rng)));
    return w;
}

inline ClopenSet random_clopen(std::mt19937& rng, const Alphabet& a, int max_len,
                               int max_words) {
    std::uniform_int_distribution<int> howmany(0, max_words);
    std::vector<Word> words;
    int k = howmany(rng);
    for (int i = 0; i < k; ++i) words.push_back(random_word(rng, a.size(), max_len));
    return ClopenSet::normalize(a, std::move(words));
}

inline Point random_point(std::mt19937& rng, const Alphabet& a, int max_len) {
    std::uniform_int_distribution<int> letter(0, a.size() - 1);
    std::uniform_int_distribution<int> ulen(0, max_len - 1);
    Word u = random_word(rng, a.size(), ulen(rng));
    std::uniform_int_distribution<int> vlen(1, std::max(1, max_len - static_cast<int>(u.size())));
    Word v;
    int l = vlen(rng);
    for (int i = 0; i < l; ++i) v.push_back(static_cast<char>('0' + letter(rng)));
    return Point(a, u, v);
}

inline Homeomorphism random_mealy(std::mt19937& rng, const Alphabet& a, int max_states) {
    std::uniform_int_distribution<int> nstates(1, max_states);
    int n = nstates(rng);
    std::uniform_int_distribution<int> state(0, n - 1);
    MealyMachine m;
    m.states = n;
    m.initial = 0;
    m.delta.assign(n, std::vector<int>(a.size()));
    m.lambda.assign(n, std::vector<int>(a.size()));
    for (int q = 0; q < n; ++q) {
        std::vector<int> perm(a.size());
        for (int i = 0; i < a.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < a.size(); ++i) {
            m.delta[q][i] = state(rng);
            m.lambda[q][i] = perm[i];
        }
    }
    return Homeomorphism::from_mealy(a, std::move(m));
}

// A random complete prefix code built by repeatedly splitting a leaf.
inline std::vector<Word> random_code(std::mt19937& rng, const Alphabet& a, int max_pairs) {
    std::vector<Word> code{Word()};
    std::uniform_int_distribution<int> splits(0, std::max(0, (max_pairs - 1) / (a.size() - 1)));
    int k = splits(rng);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, code.size() - 1);
        std::size_t at = pick(rng);
        Word base = code[at];
        code.erase(code.begin() + static_cast<long>(at));
        for (int l = 0; l < a.size(); ++l) code.push_back(base + a.letter_char(l));
    }
    return code;
}

inline Homeomorphism random_prefix_exchange(std::mt19937& rng, const Alphabet& a,
                                            int max_pairs) {
    for (;;) {
        std::vector<Word> dom = random_code(rng, a, max_pairs);
        std::vector<Word> rng_code = random_code(rng, a, max_pairs);
        if (dom.size() != rng_code.size()) continue;
        std::shuffle(rng_code.begin(), rng_code.end(), rng);
        PrefixExchangeMap pe;
        for (std::size_t i = 0; i < dom.size(); ++i) pe.pairs.emplace_back(dom[i], rng_code[i]);
        return Homeomorphism::from_prefix_exchange(a, pe);
    }
}

inline GeneratingSet random_system(std::mt19937& rng, const Alphabet& a, bool synchronous,
                                   int gens, int size_cap) {
    std::vector<Homeomorphism> hs;
    std::uniform_int_distribution<int> howmany(1, gens);
    int k = howmany(rng);
    for (int i = 0; i < k; ++i)
        hs.push_back(synchronous ? random_mealy(rng, a, size_cap)
                                 : random_prefix_exchange(rng, a, size_cap));
    return GeneratingSet(a, synchronous ? MachineClass::Mealy : MachineClass::PrefixExchange,
                         std::move(hs));
}

// ---------------------------------------------------------------------------
// Brute-force truth models
// ---------------------------------------------------------------------------

// Membership model for a clopen set: a plain bit per depth-d word.
struct SetModel {
    int arity;
    int depth;
    std::vector<char> bits;  // indexed by word rank

    SetModel(const Alphabet& a, int d, const ClopenSet& c)
        : arity(a.size()), depth(d), bits(1, 0) {
        std::size_t n = 1;
        for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(arity);
        bits.assign(n, 0);
        for (std::size_t r = 0; r < n; ++r) {
            Word w = word_at(r);
            for (const Word& p : c.prefixes())
                if (p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin())) {
                    bits[r] = 1;
                    break;
                }
        }
    }

    Word word_at(std::size_t r) const {
        Word w(depth, '0');
        for (int i = depth - 1; i >= 0; --i) {
            w[i] = static_cast<char>('0' + static_cast<int>(r % arity));
            r /= static_cast<std::size_t>(arity);
        }
        return w;
    }

    bool same_as(const SetModel& o) const { return bits == o.bits; }
};

// Letterwise machine expansion: the image of the first n letters of x,
// computed over the flat letter string, not the (u, v) cycle algebra.
inline Word expand_apply(const Homeomorphism& h, const Point& x, int n) {
    if (h.cls() == MachineClass::Mealy) {
        const MealyMachine& m = h.mealy();
        Word out;
        int q = m.initial;
        for (int i = 0; i < n; ++i) {
            int a = x.letter(i) - '0';
            out.push_back(static_cast<char>('0' + m.lambda[q][a]));
            q = m.delta[q][a];
        }
        return out;
    }
    const PrefixExchangeMap& m = h.prefix_exchange();
    for (const auto& [p, q] : m.pairs) {
        bool match = true;
        for (std::size_t i = 0; i < p.size() && match; ++i)
            if (x.letter(i) != p[i]) match = false;
        if (!match) continue;
        Word out = q;
        for (std::size_t i = p.size(); out.size() < static_cast<std::size_t>(n); ++i)
            out.push_back(x.letter(i));
        out.resize(n);
        return out;
    }
    return Word();
}

}  // namespace testsupport
