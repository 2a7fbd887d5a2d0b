#include "cantor/clopen.hpp"

#include <algorithm>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

// Trie over A used for canonicalization. A node marked `covered` denotes
// the whole cylinder at that node.
struct Trie {
    struct Node {
        std::vector<int> child;  // index per letter, -1 if absent
        bool covered = false;
        explicit Node(int arity) : child(arity, -1) {}
    };
    int arity;
    std::vector<Node> nodes;

    explicit Trie(int arity_) : arity(arity_) { nodes.emplace_back(arity); }

    void insert(const Word& w) {
        int cur = 0;
        for (char c : w) {
            if (nodes[cur].covered) return;  // already absorbed by a prefix
            int a = letter_value(c);
            if (nodes[cur].child[a] < 0) {
                nodes[cur].child[a] = static_cast<int>(nodes.size());
                nodes.emplace_back(arity);
            }
            cur = nodes[cur].child[a];
        }
        nodes[cur].covered = true;
    }

    // Marks every node whose subtree is completely covered, collapsing
    // complete sibling families bottom-up.
    bool full(int idx) {
        Node& n = nodes[idx];
        if (n.covered) return true;
        bool all = true;
        bool any_child = false;
        for (int a = 0; a < arity; ++a) {
            if (n.child[a] < 0) {
                all = false;
                continue;
            }
            any_child = true;
            if (!full(n.child[a])) all = false;
        }
        if (any_child && all) n.covered = true;
        return n.covered;
    }

    void collect(int idx, Word& path, std::vector<Word>& out) const {
        const Node& n = nodes[idx];
        if (n.covered) {
            out.push_back(path);
            return;
        }
        for (int a = 0; a < arity; ++a) {
            if (n.child[a] < 0) continue;
            path.push_back(static_cast<char>('0' + a));
            collect(n.child[a], path, out);
            path.pop_back();
        }
    }

    // Complement: cylinders at absent or non-full branch points.
    void complement(int idx, Word& path, std::vector<Word>& out) const {
        const Node& n = nodes[idx];
        if (n.covered) return;
        for (int a = 0; a < arity; ++a) {
            path.push_back(static_cast<char>('0' + a));
            if (n.child[a] < 0)
                out.push_back(path);
            else
                complement(n.child[a], path, out);
            path.pop_back();
        }
    }
};

void require_same_alphabet(const ClopenSet& a, const ClopenSet& b) {
    if (a.alphabet() != b.alphabet()) throw PreconditionError("clopen sets over different alphabets");
}

bool is_prefix(const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

}  // namespace

ClopenSet ClopenSet::normalize(const Alphabet& alphabet, std::vector<Word> raw) {
    for (const Word& w : raw) alphabet.check_word(w);
    if (raw.empty()) return empty_set(alphabet);
    Trie t(alphabet.size());
    for (const Word& w : raw) t.insert(w);
    t.full(0);
    std::vector<Word> words;
    Word path;
    t.collect(0, path, words);
    return ClopenSet(alphabet, std::move(words));  // DFS order is lexicographic
}

std::size_t ClopenSet::max_prefix_length() const {
    std::size_t m = 0;
    for (const Word& w : prefixes_) m = std::max(m, w.size());
    return m;
}

bool ClopenSet::contains(const Point& x) const {
    for (const Word& p : prefixes_) {
        bool match = true;
        for (std::size_t i = 0; i < p.size() && match; ++i)
            if (x.letter(i) != p[i]) match = false;
        if (match) return true;
    }
    return false;
}

bool ClopenSet::is_subset_of(const ClopenSet& other) const {
    require_same_alphabet(*this, other);
    // Canonical antichains: [p] is covered iff some prefix-or-equal of p
    // is present in the other set.
    for (const Word& p : prefixes_) {
        bool covered = false;
        for (const Word& q : other.prefixes_)
            if (is_prefix(q, p)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

std::vector<Word> ClopenSet::depth_slice(int d) const {
    if (d < 0 || static_cast<std::size_t>(d) < max_prefix_length())
        throw PreconditionError("depth_slice depth is below the deepest prefix");
    std::vector<Word> out;
    for (const Word& p : prefixes_) {
        std::vector<Word> tails = alphabet_.words_of_length(d - static_cast<int>(p.size()));
        for (const Word& t : tails) out.push_back(p + t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string ClopenSet::text() const {
    if (is_empty()) return "⊥";
    if (is_full()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < prefixes_.size(); ++i) {
        if (i) out += ',';
        out += prefixes_[i];
    }
    return out;
}

ClopenSet ClopenSet::parse(const Alphabet& alphabet, const std::string& text) {
    if (text == "⊥" || text == "_" || text == "empty") return empty_set(alphabet);
    if (text == "ε" || text == "e" || text == "full") return full_space(alphabet);
    std::vector<Word> words;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        Word w = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (w.empty()) throw ParseError("empty prefix in clopen set '" + text + "'");
        alphabet.check_word(w);
        words.push_back(w);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return normalize(alphabet, std::move(words));
}

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
    require_same_alphabet(a, b);
    std::vector<Word> words = a.prefixes();
    words.insert(words.end(), b.prefixes().begin(), b.prefixes().end());
    return ClopenSet::normalize(a.alphabet(), std::move(words));
}

ClopenSet set_intersect(const ClopenSet& a, const ClopenSet& b) {
    require_same_alphabet(a, b);
    // For comparable prefixes the deeper one is the intersection cylinder.
    std::vector<Word> words;
    for (const Word& p : a.prefixes())
        for (const Word& q : b.prefixes()) {
            if (is_prefix(p, q))
                words.push_back(q);
            else if (is_prefix(q, p))
                words.push_back(p);
        }
    return ClopenSet::normalize(a.alphabet(), std::move(words));
}

ClopenSet set_complement(const ClopenSet& a) {
    if (a.is_empty()) return ClopenSet::full_space(a.alphabet());
    Trie t(a.alphabet().size());
    for (const Word& w : a.prefixes()) t.insert(w);
    std::vector<Word> words;
    Word path;
    t.complement(0, path, words);
    return ClopenSet::normalize(a.alphabet(), std::move(words));
}

ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) {
    return set_intersect(a, set_complement(b));
}

}  // namespace cantor
