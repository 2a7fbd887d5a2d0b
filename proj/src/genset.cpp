#include "cantor/genset.hpp"

#include <algorithm>
#include <map>

#include "cantor/errors.hpp"

namespace cantor {

GeneratingSet::GeneratingSet(const Alphabet& alphabet, MachineClass cls,
                             std::vector<Homeomorphism> gens, std::vector<std::string> names)
    : alphabet_(alphabet), cls_(cls) {
    if (names.empty())
        for (std::size_t i = 0; i < gens.size(); ++i) names.push_back("g" + std::to_string(i));
    if (names.size() != gens.size())
        throw PreconditionError("generator name list does not match the generator list");

    std::map<std::string, std::pair<Homeomorphism, std::string>> pool;  // key -> (elem, name)
    std::vector<std::string> adjoined;
    Homeomorphism id = Homeomorphism::identity(alphabet, cls);
    if (!pool.count(id.key())) {
        pool.emplace(id.key(), std::make_pair(id, std::string("e")));
        bool given = false;
        for (const auto& g : gens)
            if (g.key() == id.key()) given = true;
        if (!given) adjoined.push_back("e");
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Homeomorphism& g = gens[i];
        if (g.alphabet() != alphabet || g.cls() != cls)
            throw PreconditionError("generating set must be homogeneous (one alphabet, one class)");
        pool.emplace(g.key(), std::make_pair(g, names[i]));
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Homeomorphism inv = gens[i].inverse();
        std::string iname = names[i] + "'";
        if (pool.emplace(inv.key(), std::make_pair(inv, iname)).second) adjoined.push_back(iname);
    }

    // Identity first, then sorted by normal form.
    elements_.push_back(pool.at(id.key()).first);
    names_.push_back(pool.at(id.key()).second);
    pool.erase(id.key());
    for (auto& [key, val] : pool) {
        elements_.push_back(val.first);
        names_.push_back(val.second);
    }
    adjoined_ = std::move(adjoined);
}

std::string GeneratingSet::word_text(const std::vector<int>& word) const {
    if (word.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += '.';
        out += names_[word[i]];
    }
    return out;
}

BallTable::BallTable(const GeneratingSet& S, int radius, const Budgets& budgets)
    : S_(&S), radius_requested_(radius), radius_reached_(0) {
    if (radius < 0) throw PreconditionError("ball radius must be nonnegative");

    struct Work {
        Homeomorphism element;
        int length;
        std::vector<int> witness;
    };
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<Work> discovered;
    discovered.push_back({S.identity(), 0, {}});
    seen.emplace(S.identity().key(), 0);

    // Layered BFS with right multiplication; frontiers are processed in
    // witness order and generators in index order, so the first discovery
    // of an element carries its lexicographically least geodesic.
    std::vector<std::size_t> frontier = {0};
    bool truncated = false;
    for (int layer = 1; layer <= radius && !truncated; ++layer) {
        std::vector<std::size_t> next;
        for (std::size_t fi : frontier) {
            for (std::size_t si = 0; si < S.size() && !truncated; ++si) {
                if (S.element(si).is_identity()) continue;
                Homeomorphism prod = [&] {
                    try {
                        return compose(discovered[fi].element, S.element(si), budgets);
                    } catch (const BudgetError&) {
                        truncated = true;
                        return S.identity();
                    }
                }();
                if (truncated) break;
                auto [it, fresh] = seen.emplace(prod.key(), discovered.size());
                if (!fresh) continue;
                if (discovered.size() >= budgets.ball_elements) {
                    seen.erase(it);
                    truncated = true;
                    break;
                }
                std::vector<int> w = discovered[fi].witness;
                w.push_back(static_cast<int>(si));
                next.push_back(discovered.size());
                discovered.push_back({prod, layer, std::move(w)});
            }
            if (truncated) break;
        }
        if (truncated) break;  // the layer is partial; do not publish it
        radius_reached_ = layer;
        if (next.empty()) {
            radius_reached_ = radius;  // the whole group is enumerated
            break;
        }
        frontier = std::move(next);
    }

    // Publish only fully enumerated layers, sorted by (length, normal form).
    for (Work& w : discovered)
        if (w.length <= radius_reached_)
            entries_.push_back({w.element, w.length, std::move(w.witness)});
    std::sort(entries_.begin(), entries_.end(), [](const BallEntry& a, const BallEntry& b) {
        if (a.length != b.length) return a.length < b.length;
        return a.element.key() < b.element.key();
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].element.key(), i);
}

void BallTable::require_complete() const {
    if (!complete())
        throw BudgetError("ball enumeration stopped at radius " + std::to_string(radius_reached_) +
                              " of " + std::to_string(radius_requested_),
                          radius_reached_);
}

std::optional<std::size_t> BallTable::find(const Homeomorphism& g) const {
    auto it = index_.find(g.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int BallTable::word_length(const Homeomorphism& g) const {
    auto idx = find(g);
    if (!idx)
        throw PreconditionError("element lies outside the enumerated ball (radius " +
                                std::to_string(radius_reached_) + ")");
    return entries_[*idx].length;
}

std::vector<std::size_t> BallTable::layer(int k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].length == k) out.push_back(i);
    return out;
}

Homeomorphism BallTable::evaluate_word(const std::vector<int>& word,
                                       const Budgets& budgets) const {
    Homeomorphism acc = S_->identity();
    for (int i : word) acc = compose(acc, S_->element(i), budgets);
    return acc;
}

std::vector<std::size_t> cone_members(const BallTable& ball, const Homeomorphism& g,
                                      int length_cap, const Budgets& budgets) {
    int glen = ball.word_length(g);
    if (glen == 0) throw PreconditionError("K(g) is undefined for the identity (|g| = 0)");
    if (ball.radius_reached() < std::max(length_cap, glen - 1))
        throw BudgetError("ball radius insufficient for the cone membership test",
                          ball.radius_reached());
    Homeomorphism ginv = g.inverse();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ball.entries().size(); ++i) {
        const BallEntry& e = ball.entries()[i];
        if (e.length > length_cap) break;  // entries sorted by length
        Homeomorphism t = compose(e.element, ginv, budgets);
        auto idx = ball.find(t);
        if (idx && ball.entries()[*idx].length <= glen - 1) out.push_back(i);
    }
    return out;
}

int replete_constant(const BallTable& ball, const std::vector<Homeomorphism>& F) {
    int m = 0;
    for (const Homeomorphism& f : F) m = std::max(m, ball.word_length(f));
    return m + 1;
}

Homeomorphism geodesic_suffix(const BallTable& ball, const Homeomorphism& g, int n,
                              const Budgets& budgets) {
    auto idx = ball.find(g);
    if (!idx) throw PreconditionError("element lies outside the enumerated ball");
    const std::vector<int>& w = ball.entries()[*idx].witness;
    if (static_cast<int>(w.size()) < n)
        throw PreconditionError("geodesic shorter than the requested suffix");
    std::vector<int> suffix(w.end() - n, w.end());
    return ball.evaluate_word(suffix, budgets);
}

}  // namespace cantor
