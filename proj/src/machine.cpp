#include "cantor/machine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

// ---------------------------------------------------------------------------
// Mealy machinery
// ---------------------------------------------------------------------------

void validate_mealy(const Alphabet& alphabet, const MealyMachine& m) {
    const int A = alphabet.size();
    if (m.states <= 0) throw ParseError("transducer needs at least one state");
    if (m.initial < 0 || m.initial >= m.states) throw ParseError("initial state out of range");
    if (static_cast<int>(m.delta.size()) != m.states ||
        static_cast<int>(m.lambda.size()) != m.states)
        throw ParseError("delta/lambda must have one row per state");
    for (int q = 0; q < m.states; ++q) {
        if (static_cast<int>(m.delta[q].size()) != A || static_cast<int>(m.lambda[q].size()) != A)
            throw ParseError("delta/lambda rows must have one entry per letter");
        std::vector<bool> seen(A, false);
        for (int a = 0; a < A; ++a) {
            if (m.delta[q][a] < 0 || m.delta[q][a] >= m.states)
                throw ParseError("transition target out of range");
            int out = m.lambda[q][a];
            if (out < 0 || out >= A) throw ParseError("output letter out of range");
            if (seen[out]) throw ParseError("state output row is not a permutation (non-invertible)");
            seen[out] = true;
        }
    }
}

// Restrict to states reachable from the initial state.
MealyMachine reachable_part(const MealyMachine& m) {
    const int A = static_cast<int>(m.delta[0].size());
    std::vector<int> remap(m.states, -1);
    std::vector<int> order;
    std::queue<int> bfs;
    remap[m.initial] = 0;
    order.push_back(m.initial);
    bfs.push(m.initial);
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (int a = 0; a < A; ++a) {
            int t = m.delta[q][a];
            if (remap[t] < 0) {
                remap[t] = static_cast<int>(order.size());
                order.push_back(t);
                bfs.push(t);
            }
        }
    }
    MealyMachine out;
    out.states = static_cast<int>(order.size());
    out.initial = 0;
    out.delta.assign(out.states, std::vector<int>(A));
    out.lambda.assign(out.states, std::vector<int>(A));
    for (int i = 0; i < out.states; ++i) {
        int q = order[i];
        for (int a = 0; a < A; ++a) {
            out.delta[i][a] = remap[m.delta[q][a]];
            out.lambda[i][a] = m.lambda[q][a];
        }
    }
    return out;
}

// Partition refinement on behavior, then BFS renumbering; yields the unique
// canonical form, so machine equality is structural equality.
MealyMachine canonicalize_mealy(const MealyMachine& input) {
    MealyMachine m = reachable_part(input);
    const int A = static_cast<int>(m.delta[0].size());

    std::vector<int> cls(m.states);
    {
        std::map<std::vector<int>, int> by_output;
        for (int q = 0; q < m.states; ++q) {
            auto [it, _] = by_output.try_emplace(m.lambda[q], static_cast<int>(by_output.size()));
            cls[q] = it->second;
        }
    }
    int classes_before = static_cast<int>(
        std::set<int>(cls.begin(), cls.end()).size());
    for (;;) {
        std::map<std::vector<int>, int> next_ids;
        std::vector<int> next(m.states);
        for (int q = 0; q < m.states; ++q) {
            std::vector<int> sig;
            sig.reserve(A + 1);
            sig.push_back(cls[q]);
            for (int a = 0; a < A; ++a) sig.push_back(cls[m.delta[q][a]]);
            auto [it, _] = next_ids.try_emplace(std::move(sig), static_cast<int>(next_ids.size()));
            next[q] = it->second;
        }
        // The signature embeds the old class, so `next` refines `cls`;
        // stability is exactly an unchanged class count.
        int classes_after = static_cast<int>(next_ids.size());
        cls = std::move(next);
        if (classes_after == classes_before) break;
        classes_before = classes_after;
    }

    int classes = *std::max_element(cls.begin(), cls.end()) + 1;
    MealyMachine quo;
    quo.states = classes;
    quo.initial = cls[m.initial];
    quo.delta.assign(classes, std::vector<int>(A));
    quo.lambda.assign(classes, std::vector<int>(A));
    for (int q = 0; q < m.states; ++q)
        for (int a = 0; a < A; ++a) {
            quo.delta[cls[q]][a] = cls[m.delta[q][a]];
            quo.lambda[cls[q]][a] = m.lambda[q][a];
        }
    return reachable_part(quo);  // BFS order from the initial state
}

Word mealy_run(const MealyMachine& m, const Word& w, int from, int* end_state) {
    Word out;
    out.reserve(w.size());
    int q = from;
    for (char c : w) {
        int a = letter_value(c);
        out.push_back(static_cast<char>('0' + m.lambda[q][a]));
        q = m.delta[q][a];
    }
    if (end_state) *end_state = q;
    return out;
}

MealyMachine invert_mealy(const MealyMachine& m) {
    const int A = static_cast<int>(m.delta[0].size());
    MealyMachine inv;
    inv.states = m.states;
    inv.initial = m.initial;
    inv.delta.assign(m.states, std::vector<int>(A));
    inv.lambda.assign(m.states, std::vector<int>(A));
    for (int q = 0; q < m.states; ++q)
        for (int a = 0; a < A; ++a) {
            int b = m.lambda[q][a];  // forward output; inverse input
            inv.lambda[q][b] = a;
            inv.delta[q][b] = m.delta[q][a];
        }
    return inv;
}

// g . h on the reachable product (h consumes the input, g its output).
MealyMachine compose_mealy(const MealyMachine& g, const MealyMachine& h, int state_cap) {
    const int A = static_cast<int>(g.delta[0].size());
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> order;
    auto intern = [&](int qg, int qh) {
        auto [it, fresh] = ids.try_emplace(std::make_pair(qg, qh), static_cast<int>(order.size()));
        if (fresh) {
            order.emplace_back(qg, qh);
            if (static_cast<int>(order.size()) > state_cap)
                throw BudgetError("transducer composition exceeded the state budget", state_cap);
        }
        return it->second;
    };
    std::vector<std::vector<int>> delta, lambda;
    intern(g.initial, h.initial);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [qg, qh] = order[i];
        std::vector<int> drow(A), lrow(A);
        for (int a = 0; a < A; ++a) {
            int b = h.lambda[qh][a];
            lrow[a] = g.lambda[qg][b];
            drow[a] = intern(g.delta[qg][b], h.delta[qh][a]);
        }
        delta.push_back(std::move(drow));
        lambda.push_back(std::move(lrow));
    }
    MealyMachine out;
    out.states = static_cast<int>(order.size());
    out.initial = 0;
    out.delta = std::move(delta);
    out.lambda = std::move(lambda);
    return out;
}

std::string mealy_key(const MealyMachine& m) {
    std::ostringstream os;
    os << "M:" << m.delta[0].size() << ':' << m.states << ':' << m.initial << ':';
    for (int q = 0; q < m.states; ++q) {
        for (std::size_t a = 0; a < m.delta[q].size(); ++a)
            os << m.delta[q][a] << ',' << m.lambda[q][a] << (a + 1 < m.delta[q].size() ? "," : "");
        os << ';';
    }
    return os.str();
}

bool mealy_is_identity(const MealyMachine& m) {
    if (m.states != 1) return false;
    for (std::size_t a = 0; a < m.lambda[0].size(); ++a)
        if (m.lambda[0][a] != static_cast<int>(a)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Prefix-exchange machinery
// ---------------------------------------------------------------------------

bool word_is_prefix(const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

// A maximal antichain: every node of the trie is either a terminal leaf or
// has all |A| children, recursively.
void validate_complete_code(const Alphabet& alphabet, const std::vector<Word>& code,
                            const char* side) {
    std::set<Word> words(code.begin(), code.end());
    if (words.size() != code.size())
        throw ParseError(std::string(side) + " code contains a duplicate word");
    for (const Word& w : code) alphabet.check_word(w);

    // Recursive cover check from the root.
    std::function<void(const Word&)> check = [&](const Word& at) {
        if (words.count(at)) {
            // Terminal: must be a leaf (no code word strictly below).
            for (const Word& w : words)
                if (w.size() > at.size() && word_is_prefix(at, w))
                    throw ParseError(std::string(side) + " code is not an antichain near '" + at +
                                     "'");
            return;
        }
        bool any_below = false;
        for (const Word& w : words)
            if (word_is_prefix(at, w)) {
                any_below = true;
                break;
            }
        if (!any_below)
            throw ParseError(std::string(side) + " code is not a maximal antichain (hole at '" +
                             at + "')");
        for (int a = 0; a < alphabet.size(); ++a) check(at + alphabet.letter_char(a));
    };
    check(Word());
}

// Collapse letter-complete sibling blocks whose images form the matching
// sibling block, until none remain. The fully reduced table is unique.
std::vector<std::pair<Word, Word>> reduce_pairs(int arity,
                                                std::vector<std::pair<Word, Word>> pairs) {
    std::map<Word, Word> table(pairs.begin(), pairs.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = table.begin(); it != table.end(); ++it) {
            const Word& p = it->first;
            if (p.empty()) continue;
            Word parent = p.substr(0, p.size() - 1);
            bool collapsible = true;
            Word z;
            for (int a = 0; a < arity && collapsible; ++a) {
                auto sib = table.find(parent + static_cast<char>('0' + a));
                if (sib == table.end() || sib->second.empty() ||
                    sib->second.back() != static_cast<char>('0' + a)) {
                    collapsible = false;
                    break;
                }
                Word head = sib->second.substr(0, sib->second.size() - 1);
                if (a == 0)
                    z = head;
                else if (head != z)
                    collapsible = false;
            }
            if (!collapsible) continue;
            for (int a = 0; a < arity; ++a) table.erase(parent + static_cast<char>('0' + a));
            table[parent] = z;
            changed = true;
            break;  // iterator invalidated; rescan
        }
    }
    return {table.begin(), table.end()};  // map iteration = sorted by domain
}

std::string pe_key(const PrefixExchangeMap& m, int arity) {
    std::ostringstream os;
    os << "P:" << arity << ':';
    for (const auto& [p, q] : m.pairs) os << p << '>' << q << ';';
    return os.str();
}

bool pe_is_identity(const PrefixExchangeMap& m) {
    return m.pairs.size() == 1 && m.pairs[0].first.empty() && m.pairs[0].second.empty();
}

}  // namespace

MealyMachine MealyMachine::identity(int arity) {
    MealyMachine m;
    m.states = 1;
    m.initial = 0;
    m.delta.assign(1, std::vector<int>(arity, 0));
    m.lambda.assign(1, std::vector<int>(arity));
    std::iota(m.lambda[0].begin(), m.lambda[0].end(), 0);
    return m;
}

PrefixExchangeMap PrefixExchangeMap::identity() {
    PrefixExchangeMap m;
    m.pairs.emplace_back(Word(), Word());
    return m;
}

std::size_t PrefixExchangeMap::max_domain_length() const {
    std::size_t n = 0;
    for (const auto& [p, q] : pairs) n = std::max(n, p.size());
    return n;
}

// ---------------------------------------------------------------------------
// Homeomorphism
// ---------------------------------------------------------------------------

struct Homeomorphism::Data {
    Alphabet alphabet;
    MachineClass cls;
    MealyMachine mealy;
    PrefixExchangeMap pe;
    MealyMachine mealy_inverse;
    PrefixExchangeMap pe_inverse;
    std::string key;

    explicit Data(Alphabet a) : alphabet(a), cls(MachineClass::Mealy) {}
};

Homeomorphism Homeomorphism::from_mealy(const Alphabet& alphabet, MealyMachine m) {
    validate_mealy(alphabet, m);
    auto d = std::make_shared<Data>(alphabet);
    d->cls = MachineClass::Mealy;
    d->mealy = canonicalize_mealy(m);
    d->mealy_inverse = canonicalize_mealy(invert_mealy(d->mealy));
    d->key = mealy_key(d->mealy);
    return Homeomorphism(std::move(d));
}

Homeomorphism Homeomorphism::from_prefix_exchange(const Alphabet& alphabet, PrefixExchangeMap m) {
    std::vector<Word> dom, rng;
    for (const auto& [p, q] : m.pairs) {
        dom.push_back(p);
        rng.push_back(q);
    }
    validate_complete_code(alphabet, dom, "domain");
    validate_complete_code(alphabet, rng, "range");
    auto d = std::make_shared<Data>(alphabet);
    d->cls = MachineClass::PrefixExchange;
    d->pe.pairs = reduce_pairs(alphabet.size(), m.pairs);
    d->pe_inverse.pairs.reserve(d->pe.pairs.size());
    for (const auto& [p, q] : d->pe.pairs) d->pe_inverse.pairs.emplace_back(q, p);
    d->pe_inverse.pairs = reduce_pairs(alphabet.size(), d->pe_inverse.pairs);
    d->key = pe_key(d->pe, alphabet.size());
    return Homeomorphism(std::move(d));
}

Homeomorphism Homeomorphism::identity(const Alphabet& alphabet, MachineClass cls) {
    if (cls == MachineClass::Mealy)
        return from_mealy(alphabet, MealyMachine::identity(alphabet.size()));
    return from_prefix_exchange(alphabet, PrefixExchangeMap::identity());
}

const Alphabet& Homeomorphism::alphabet() const { return data_->alphabet; }
MachineClass Homeomorphism::cls() const { return data_->cls; }
const std::string& Homeomorphism::key() const { return data_->key; }

bool Homeomorphism::is_identity() const {
    return data_->cls == MachineClass::Mealy ? mealy_is_identity(data_->mealy)
                                             : pe_is_identity(data_->pe);
}

const MealyMachine& Homeomorphism::mealy() const {
    if (data_->cls != MachineClass::Mealy) throw PreconditionError("not a synchronous transducer");
    return data_->mealy;
}

const PrefixExchangeMap& Homeomorphism::prefix_exchange() const {
    if (data_->cls != MachineClass::PrefixExchange)
        throw PreconditionError("not a prefix exchange");
    return data_->pe;
}

std::size_t Homeomorphism::machine_size() const {
    return data_->cls == MachineClass::Mealy ? static_cast<std::size_t>(data_->mealy.states)
                                             : data_->pe.pairs.size();
}

Homeomorphism Homeomorphism::inverse() const {
    auto d = std::make_shared<Data>(data_->alphabet);
    d->cls = data_->cls;
    if (d->cls == MachineClass::Mealy) {
        d->mealy = data_->mealy_inverse;
        d->mealy_inverse = data_->mealy;
        d->key = mealy_key(d->mealy);
    } else {
        d->pe = data_->pe_inverse;
        d->pe_inverse = data_->pe;
        d->key = pe_key(d->pe, d->alphabet.size());
    }
    return Homeomorphism(std::move(d));
}

bool Homeomorphism::operator==(const Homeomorphism& o) const {
    return data_->cls == o.data_->cls && data_->key == o.data_->key;
}

Point Homeomorphism::apply(const Point& x) const {
    const Alphabet& A = data_->alphabet;
    if (data_->cls == MachineClass::Mealy) {
        const MealyMachine& m = data_->mealy;
        int q = 0;
        Word head = mealy_run(m, x.preperiod(), m.initial, &q);
        // Walk (state, phase) pairs over the period until they repeat.
        const Word& v = x.period();
        std::map<std::pair<int, int>, int> seen;
        std::vector<char> emitted;
        int phase = 0;
        int step = 0;
        int cycle_start = -1;
        for (;;) {
            auto [it, fresh] = seen.try_emplace({q, phase}, step);
            if (!fresh) {
                cycle_start = it->second;
                break;
            }
            int a = letter_value(v[phase]);
            emitted.push_back(static_cast<char>('0' + m.lambda[q][a]));
            q = m.delta[q][a];
            phase = (phase + 1) % static_cast<int>(v.size());
            ++step;
        }
        Word out_u = head + Word(emitted.begin(), emitted.begin() + cycle_start);
        Word out_v(emitted.begin() + cycle_start, emitted.end());
        return Point(A, out_u, out_v);
    }

    // One-shot front substitution: x = p.y |-> q.y, the tail verbatim.
    const PrefixExchangeMap& m = data_->pe;
    if (pe_is_identity(m)) return x;
    const Word& u = x.preperiod();
    const Word& v = x.period();
    for (const auto& [p, q] : m.pairs) {
        bool match = true;
        for (std::size_t i = 0; i < p.size() && match; ++i)
            if (x.letter(i) != p[i]) match = false;
        if (!match) continue;
        if (p.size() <= u.size()) return Point(A, q + u.substr(p.size()), v);
        // The tail starts inside the period: rotate it to the match end.
        std::size_t phase = (p.size() - u.size()) % v.size();
        return Point(A, q, v.substr(phase) + v.substr(0, phase));
    }
    throw InternalError("prefix-exchange domain code failed to match the point");
}

Word Homeomorphism::apply_prefix(const Word& w) const {
    return mealy_run(mealy(), w, mealy().initial, nullptr);
}

ClopenSet Homeomorphism::image(const ClopenSet& c) const {
    if (data_->alphabet != c.alphabet()) throw PreconditionError("alphabet mismatch");
    std::vector<Word> words;
    if (data_->cls == MachineClass::Mealy) {
        for (const Word& p : c.prefixes()) words.push_back(apply_prefix(p));
    } else {
        for (const Word& p : c.prefixes()) {
            bool matched = false;
            for (const auto& [dom, rng] : data_->pe.pairs) {
                if (word_is_prefix(dom, p)) {
                    words.push_back(rng + p.substr(dom.size()));
                    matched = true;
                    break;  // domain words form an antichain
                }
            }
            if (!matched)
                for (const auto& [dom, rng] : data_->pe.pairs)
                    if (word_is_prefix(p, dom)) words.push_back(rng);
        }
    }
    return ClopenSet::normalize(data_->alphabet, std::move(words));
}

ClopenSet Homeomorphism::preimage(const ClopenSet& c) const { return inverse().image(c); }

int Homeomorphism::modulus(int d) const {
    if (d < 0) throw PreconditionError("modulus depth must be nonnegative");
    if (data_->cls == MachineClass::Mealy) return d;  // levelwise permutations: isometry
    return d + static_cast<int>(data_->pe.max_domain_length());
}

Homeomorphism compose(const Homeomorphism& g, const Homeomorphism& h, const Budgets& budgets) {
    if (g.alphabet() != h.alphabet()) throw PreconditionError("alphabet mismatch");
    if (g.is_identity()) return h;
    if (h.is_identity()) return g;
    if (g.cls() != h.cls())
        throw PreconditionError("cannot compose a transducer with a prefix exchange");
    if (g.cls() == MachineClass::Mealy)
        return Homeomorphism::from_mealy(
            g.alphabet(), compose_mealy(g.mealy(), h.mealy(), budgets.machine_states));

    // Prefix exchanges: route each h-pair through g's table, refining the
    // domain where g's code is finer than h's range.
    std::vector<std::pair<Word, Word>> pairs;
    for (const auto& [p, q] : h.prefix_exchange().pairs) {
        bool through = false;
        for (const auto& [r, s] : g.prefix_exchange().pairs) {
            if (word_is_prefix(r, q)) {
                pairs.emplace_back(p, s + q.substr(r.size()));
                through = true;
                break;
            }
        }
        if (!through)
            for (const auto& [r, s] : g.prefix_exchange().pairs)
                if (word_is_prefix(q, r)) pairs.emplace_back(p + r.substr(q.size()), s);
        if (static_cast<int>(pairs.size()) > budgets.pe_pairs)
            throw BudgetError("prefix-exchange composition exceeded the table budget",
                              budgets.pe_pairs);
    }
    PrefixExchangeMap out;
    out.pairs = std::move(pairs);
    return Homeomorphism::from_prefix_exchange(g.alphabet(), out);
}

}  // namespace cantor
