#include "cantor/oracle.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "cantor/analyzer.hpp"
#include "cantor/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cantor {

namespace levels {

std::size_t word_count(int arity, int depth) {
    std::size_t n = 1;
    for (int i = 0; i < depth; ++i) {
        n *= static_cast<std::size_t>(arity);
        if (n > (std::size_t(1) << 28)) throw BudgetError("level too large", i);
    }
    return n;
}

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }

namespace {

inline std::uint32_t run_word(const MealyMachine& m, int arity, int depth, std::size_t rank) {
    // Letters from most significant digit; walk the raw tables directly.
    std::uint32_t out = 0;
    int q = m.initial;
    std::size_t div = 1;
    for (int i = 1; i < depth; ++i) div *= static_cast<std::size_t>(arity);
    for (int i = 0; i < depth; ++i) {
        int a = static_cast<int>((rank / div) % static_cast<std::size_t>(arity));
        out = out * static_cast<std::uint32_t>(arity) +
              static_cast<std::uint32_t>(m.lambda[q][a]);
        q = m.delta[q][a];
        div /= static_cast<std::size_t>(arity);
        if (div == 0) div = 1;
    }
    return out;
}

}  // namespace

std::vector<std::uint32_t> induced_map_serial(const MealyMachine& m, int arity, int depth) {
    std::size_t n = word_count(arity, depth);
    std::vector<std::uint32_t> map(n);
    for (std::size_t r = 0; r < n; ++r) map[r] = run_word(m, arity, depth, r);
    return map;
}

std::vector<std::uint32_t> induced_map(const MealyMachine& m, int arity, int depth) {
    std::size_t n = word_count(arity, depth);
    std::vector<std::uint32_t> map(n);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < static_cast<long long>(n); ++r)
        map[static_cast<std::size_t>(r)] = run_word(m, arity, depth, static_cast<std::size_t>(r));
    return map;
}

std::vector<std::uint32_t> invert_map_serial(const std::vector<std::uint32_t>& map) {
    std::vector<std::uint32_t> inv(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) inv[map[i]] = static_cast<std::uint32_t>(i);
    return inv;
}

std::vector<std::uint32_t> invert_map(const std::vector<std::uint32_t>& map) {
    std::vector<std::uint32_t> inv(map.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(map.size()); ++i)
        inv[map[static_cast<std::size_t>(i)]] = static_cast<std::uint32_t>(i);
    return inv;
}

void bits_or_serial(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] |= b[i];
}

void bits_or(Bits& a, const Bits& b) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.size()); ++i)
        a[static_cast<std::size_t>(i)] |= b[static_cast<std::size_t>(i)];
}

void bits_and_serial(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
}

void bits_and(Bits& a, const Bits& b) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.size()); ++i)
        a[static_cast<std::size_t>(i)] &= b[static_cast<std::size_t>(i)];
}

void bits_not_serial(Bits& a, std::size_t n) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = ~a[i];
    if (n & 63) a.back() &= (std::uint64_t(1) << (n & 63)) - 1;
}

void bits_not(Bits& a, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.size()); ++i)
        a[static_cast<std::size_t>(i)] = ~a[static_cast<std::size_t>(i)];
    if (n & 63) a.back() &= (std::uint64_t(1) << (n & 63)) - 1;
}

std::size_t bits_count(const Bits& a) {
    std::size_t c = 0;
    for (std::uint64_t w : a) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
}

Bits apply_map_serial(const Bits& set, const std::vector<std::uint32_t>& inverse_map,
                      std::size_t n) {
    Bits out = make_bits(n);
    for (std::size_t j = 0; j < n; ++j)
        if (get_bit(set, inverse_map[j])) set_bit(out, j);
    return out;
}

Bits apply_map(const Bits& set, const std::vector<std::uint32_t>& inverse_map, std::size_t n) {
    Bits out = make_bits(n);
#pragma omp parallel for schedule(static)
    for (long long blk = 0; blk < static_cast<long long>(out.size()); ++blk) {
        std::uint64_t w = 0;
        std::size_t base = static_cast<std::size_t>(blk) * 64;
        std::size_t top = std::min<std::size_t>(64, n - base);
        for (std::size_t k = 0; k < top; ++k)
            if (get_bit(set, inverse_map[base + k])) w |= std::uint64_t(1) << k;
        out[static_cast<std::size_t>(blk)] = w;
    }
    return out;
}

Bits reach_serial(std::size_t seed, const std::vector<std::vector<std::uint32_t>>& maps,
                  std::size_t n) {
    Bits visited = make_bits(n);
    std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(seed)};
    set_bit(visited, seed);
    while (!frontier.empty()) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t r : frontier)
            for (const auto& map : maps) {
                std::uint32_t t = map[r];
                if (!get_bit(visited, t)) {
                    set_bit(visited, t);
                    next.push_back(t);
                }
            }
        frontier = std::move(next);
    }
    return visited;
}

Bits reach(std::size_t seed, const std::vector<std::vector<std::uint32_t>>& maps,
           std::size_t n) {
    // Narrow frontiers expand serially (parallel-region setup dominates on
    // long thin orbits); wide frontiers fan out across threads.
    constexpr std::size_t kParallelFrontier = 4096;
    Bits visited = make_bits(n);
    std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(seed)};
    set_bit(visited, seed);
    while (!frontier.empty()) {
        std::vector<std::uint32_t> next;
        if (frontier.size() < kParallelFrontier) {
            for (std::uint32_t r : frontier)
                for (const auto& map : maps) {
                    std::uint32_t t = map[r];
                    if (!get_bit(visited, t)) {
                        set_bit(visited, t);
                        next.push_back(t);
                    }
                }
        } else {
#pragma omp parallel
            {
                std::vector<std::uint32_t> local;
#pragma omp for schedule(static)
                for (long long fi = 0; fi < static_cast<long long>(frontier.size()); ++fi) {
                    std::uint32_t r = frontier[static_cast<std::size_t>(fi)];
                    for (const auto& map : maps) {
                        std::uint32_t t = map[r];
                        std::uint64_t bit = std::uint64_t(1) << (t & 63);
                        std::uint64_t old;
#pragma omp atomic capture
                        {
                            old = visited[t >> 6];
                            visited[t >> 6] |= bit;
                        }
                        if (!(old & bit)) local.push_back(t);
                    }
                }
#pragma omp critical
                next.insert(next.end(), local.begin(), local.end());
            }
            std::sort(next.begin(), next.end());
        }
        frontier = std::move(next);
    }
    return visited;
}

}  // namespace levels

BitsetOracle::BitsetOracle(const GeneratingSet& S, int depth) : S_(&S), depth_(depth) {
    if (!S.is_synchronous())
        throw PreconditionError("the bitset oracle models synchronous systems only");
    if (depth < 1 || depth > 14) throw PreconditionError("oracle depth must be in 1..14");
    count_ = levels::word_count(S.alphabet().size(), depth);
    for (std::size_t i = 0; i < S.size(); ++i) {
        maps_.push_back(levels::induced_map(S.element(i).mealy(), S.alphabet().size(), depth));
        inverse_.push_back(levels::invert_map(maps_.back()));
    }
}

levels::Bits BitsetOracle::from_clopen(const ClopenSet& c) const {
    // Independent route: direct prefix matching per rank, not depth_slice.
    levels::Bits out = levels::make_bits(count_);
    const int arity = S_->alphabet().size();
    for (std::size_t r = 0; r < count_; ++r) {
        Word w(depth_, '0');
        std::size_t v = r;
        for (int i = depth_ - 1; i >= 0; --i) {
            w[i] = static_cast<char>('0' + static_cast<int>(v % arity));
            v /= static_cast<std::size_t>(arity);
        }
        for (const Word& p : c.prefixes()) {
            if (p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin())) {
                levels::set_bit(out, r);
                break;
            }
        }
    }
    return out;
}

ClopenSet BitsetOracle::to_clopen(const levels::Bits& b) const {
    const int arity = S_->alphabet().size();
    std::vector<Word> words;
    for (std::size_t r = 0; r < count_; ++r) {
        if (!levels::get_bit(b, r)) continue;
        Word w(depth_, '0');
        std::size_t v = r;
        for (int i = depth_ - 1; i >= 0; --i) {
            w[i] = static_cast<char>('0' + static_cast<int>(v % arity));
            v /= static_cast<std::size_t>(arity);
        }
        words.push_back(std::move(w));
    }
    return ClopenSet::normalize(S_->alphabet(), std::move(words));
}

bool BitsetOracle::matches(const levels::Bits& b, const ClopenSet& c) const {
    return to_clopen(b) == c;
}

levels::Bits BitsetOracle::full() const {
    levels::Bits b = levels::make_bits(count_);
    levels::bits_not(b, count_);
    return b;
}

levels::Bits BitsetOracle::image(std::size_t i, const levels::Bits& b) const {
    return levels::apply_map(b, inverse_[i], count_);
}

levels::Bits BitsetOracle::preimage(std::size_t i, const levels::Bits& b) const {
    return levels::apply_map(b, maps_[i], count_);
}

levels::Bits BitsetOracle::tower_step(const levels::Bits& b) const {
    levels::Bits acc = b;  // identity translate
    for (std::size_t i = 1; i < S_->size(); ++i) {
        levels::Bits t = image(i, b);
        levels::bits_and(acc, t);
    }
    return acc;
}

levels::Bits BitsetOracle::orbit_reach(const Word& seed) const {
    std::size_t r = 0;
    for (char c : seed) r = r * S_->alphabet().size() + static_cast<std::size_t>(letter_value(c));
    return levels::reach(r, maps_, count_);
}

bool BitsetOracle::contains_point(const levels::Bits& b, const Point& x) const {
    std::size_t r = 0;
    for (int i = 0; i < depth_; ++i)
        r = r * S_->alphabet().size() + static_cast<std::size_t>(letter_value(x.letter(i)));
    return levels::get_bit(b, r);
}

void BitsetOracle::corrupt_for_selftest(std::size_t gen_index) {
    if (gen_index >= maps_.size() || count_ < 2) return;
    // Precompose with a first-letter flip: still a permutation, but a
    // different machine, so any image of a set that separates [0] from [1]
    // through this generator disagrees with the symbolic route.
    std::size_t half = count_ / 2;
    for (std::size_t i = 0; i < half; ++i)
        std::swap(maps_[gen_index][i], maps_[gen_index][i + half]);
    inverse_[gen_index] = levels::invert_map(maps_[gen_index]);
}

OracleDiff oracle_check(const GeneratingSet& S, int depth, std::uint64_t seed, int operations,
                        int corrupt_gen) {
    OracleDiff diff;
    BitsetOracle oracle(S, depth);
    if (corrupt_gen >= 0) oracle.corrupt_for_selftest(static_cast<std::size_t>(corrupt_gen));
    std::optional<Analyzer> analyzer;  // lazily built for the orbit ops

    std::mt19937_64 rng(seed);
    auto random_set = [&]() {
        std::uniform_int_distribution<int> len(0, std::max(1, depth - 1));
        std::uniform_int_distribution<int> letter(0, S.alphabet().size() - 1);
        std::uniform_int_distribution<int> howmany(0, 4);
        std::vector<Word> words;
        int k = howmany(rng);
        for (int i = 0; i < k; ++i) {
            Word w;
            int l = len(rng);
            for (int j = 0; j < l; ++j)
                w.push_back(static_cast<char>('0' + letter(rng)));
            words.push_back(std::move(w));
        }
        return ClopenSet::normalize(S.alphabet(), std::move(words));
    };

    std::vector<ClopenSet> sym;
    std::vector<levels::Bits> bits;
    auto push = [&](const ClopenSet& c) {
        sym.push_back(c);
        bits.push_back(oracle.from_clopen(c));
    };
    push(random_set());

    std::uniform_int_distribution<int> op(0, 8);
    std::uniform_int_distribution<std::size_t> gen(0, S.size() - 1);
    for (int t = 0; t < operations; ++t) {
        ++diff.operations;
        int o = op(rng);
        if (o == 7) {
            // Tower step: V |-> /\_{s in S} sV on both routes.
            ClopenSet v = sym.back();
            for (std::size_t i = 1; i < S.size(); ++i)
                v = set_intersect(v, S.element(i).image(sym.back()));
            sym.back() = std::move(v);
            bits.back() = oracle.tower_step(bits.back());
        } else if (o == 8) {
            // Orbit reach from a random seed word, both routes.
            std::uniform_int_distribution<int> letter(0, S.alphabet().size() - 1);
            Word seed;
            for (int i = 0; i < depth; ++i)
                seed.push_back(static_cast<char>('0' + letter(rng)));
            if (!analyzer) analyzer.emplace(S, Budgets{});
            OrbitClosureApprox oc =
                analyzer->orbit_closure(Point(S.alphabet(), seed, Word(1, '0')), depth);
            if (oc.depth == depth) {
                push(ClopenSet::normalize(S.alphabet(), oc.reached));
                bits.back() = oracle.orbit_reach(seed);
            } else {
                push(random_set());
            }
        } else if (o == 0 || sym.size() < 2) {
            push(random_set());
        } else if (o == 1) {
            sym.back() = set_union(sym[sym.size() - 2], sym.back());
            levels::Bits b = bits[bits.size() - 2];
            levels::bits_or(b, bits.back());
            bits.back() = std::move(b);
        } else if (o == 2) {
            sym.back() = set_intersect(sym[sym.size() - 2], sym.back());
            levels::Bits b = bits[bits.size() - 2];
            levels::bits_and(b, bits.back());
            bits.back() = std::move(b);
        } else if (o == 3) {
            sym.back() = set_complement(sym.back());
            levels::bits_not(bits.back(), oracle.words());
        } else if (o == 4) {
            sym.back() = set_difference(sym[sym.size() - 2], sym.back());
            levels::Bits b = bits.back();
            levels::bits_not(b, oracle.words());
            levels::bits_and(b, bits[bits.size() - 2]);
            bits.back() = std::move(b);
        } else if (o == 5) {
            std::size_t i = gen(rng);
            sym.back() = S.element(i).image(sym.back());
            bits.back() = oracle.image(i, bits.back());
        } else {
            std::size_t i = gen(rng);
            sym.back() = S.element(i).preimage(sym.back());
            bits.back() = oracle.preimage(i, bits.back());
        }
        if (!oracle.matches(bits.back(), sym.back())) {
            diff.pass = false;
            diff.detail = "operation " + std::to_string(t) + ": oracle " +
                          oracle.to_clopen(bits.back()).text() + " vs symbolic " +
                          sym.back().text();
            return diff;
        }
        if (sym.size() > 6) {
            sym.erase(sym.begin());
            bits.erase(bits.begin());
        }
    }
    return diff;
}

}  // namespace cantor
