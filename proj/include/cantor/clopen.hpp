#pragma once

#include <string>
#include <vector>

#include "cantor/alphabet.hpp"
#include "cantor/point.hpp"

namespace cantor {

// A clopen subset of A^omega as the canonical minimal antichain of finite
// words: no word is a prefix of another, no complete sibling family
// {w.a : a in A} is left uncollapsed, and the list is sorted. The empty
// set is the empty list, the full space is {epsilon}. Canonical form makes
// set equality structural, and keeps towers exact at unbounded depth.
// Immutable after construction.
class ClopenSet {
  public:
    // Canonicalizes an arbitrary word list denoting the union of cylinders.
    static ClopenSet normalize(const Alphabet& alphabet, std::vector<Word> raw);

    static ClopenSet empty_set(const Alphabet& alphabet) { return ClopenSet(alphabet, {}); }
    static ClopenSet full_space(const Alphabet& alphabet) { return ClopenSet(alphabet, {Word()}); }
    static ClopenSet cylinder(const Alphabet& alphabet, const Word& w) {
        alphabet.check_word(w);
        return ClopenSet(alphabet, {w});
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Word>& prefixes() const { return prefixes_; }

    bool is_empty() const { return prefixes_.empty(); }
    bool is_full() const { return prefixes_.size() == 1 && prefixes_[0].empty(); }
    std::size_t max_prefix_length() const;

    bool contains(const Point& x) const;
    bool is_subset_of(const ClopenSet& other) const;

    bool operator==(const ClopenSet& o) const {
        return alphabet_ == o.alphabet_ && prefixes_ == o.prefixes_;
    }
    bool operator!=(const ClopenSet& o) const { return !(*this == o); }
    bool operator<(const ClopenSet& o) const { return prefixes_ < o.prefixes_; }

    // Exactly the depth-d words whose cylinders lie inside the set.
    // Requires d >= max prefix length.
    std::vector<Word> depth_slice(int d) const;

    // Textual form: comma-separated prefixes, "⊥" for empty, "ε" for full.
    std::string text() const;
    static ClopenSet parse(const Alphabet& alphabet, const std::string& text);

  private:
    ClopenSet(Alphabet alphabet, std::vector<Word> canonical)
        : alphabet_(alphabet), prefixes_(std::move(canonical)) {}

    Alphabet alphabet_;
    std::vector<Word> prefixes_;
};

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b);
ClopenSet set_intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet set_complement(const ClopenSet& a);
ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b);

}  // namespace cantor
