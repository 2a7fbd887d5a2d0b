#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cantor/budgets.hpp"
#include "cantor/machine.hpp"

namespace cantor {

// A finite symmetric generating set: 1 in S and S = S^{-1}, enforced at
// construction by adjoining the identity and all inverses, deduplicating by
// normal form. All elements share one alphabet and one machine class.
// Element 0 is always the identity; the rest are sorted by normal form.
class GeneratingSet {
  public:
    GeneratingSet(const Alphabet& alphabet, MachineClass cls, std::vector<Homeomorphism> gens,
                  std::vector<std::string> names = {});

    const Alphabet& alphabet() const { return alphabet_; }
    MachineClass cls() const { return cls_; }
    bool is_synchronous() const { return cls_ == MachineClass::Mealy; }

    std::size_t size() const { return elements_.size(); }
    const Homeomorphism& element(std::size_t i) const { return elements_[i]; }
    const std::vector<Homeomorphism>& elements() const { return elements_; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const Homeomorphism& identity() const { return elements_[0]; }

    // Display names of elements symmetrization had to adjoin.
    const std::vector<std::string>& adjoined() const { return adjoined_; }

    // Renders a generator-index word like "a.b'.a".
    std::string word_text(const std::vector<int>& word) const;

  private:
    Alphabet alphabet_;
    MachineClass cls_;
    std::vector<Homeomorphism> elements_;
    std::vector<std::string> names_;
    std::vector<std::string> adjoined_;
};

struct BallEntry {
    Homeomorphism element;
    int length;                // true word length: BFS layer of first discovery
    std::vector<int> witness;  // lexicographically least geodesic (generator indices)
};

// The ball S^n as a deduplicated element table with exact word lengths.
// `radius_reached` is always a fully enumerated layer: an element whose
// normal form is absent from the table has word length > radius_reached.
class BallTable {
  public:
    BallTable(const GeneratingSet& S, int radius, const Budgets& budgets);

    const GeneratingSet& generators() const { return *S_; }
    int radius_requested() const { return radius_requested_; }
    int radius_reached() const { return radius_reached_; }
    bool complete() const { return radius_reached_ == radius_requested_; }
    void require_complete() const;

    // Entries sorted by (length, normal form); deterministic.
    const std::vector<BallEntry>& entries() const { return entries_; }
    std::optional<std::size_t> find(const Homeomorphism& g) const;
    // BFS layer index; throws PreconditionError when g was not enumerated.
    int word_length(const Homeomorphism& g) const;
    // Indices of the entries at exactly word length k.
    std::vector<std::size_t> layer(int k) const;

    // Product of a generator-index word, left to right.
    Homeomorphism evaluate_word(const std::vector<int>& word, const Budgets& budgets) const;

  private:
    const GeneratingSet* S_;
    int radius_requested_;
    int radius_reached_;
    std::vector<BallEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// { c in K(g) : |c| <= length_cap } where K(g) = S^{|g|-1} g, computed by
// the membership identity c in K(g) <=> c g^{-1} in S^{|g|-1}.
// Requires the ball to reach max(length_cap, |g|-1).
std::vector<std::size_t> cone_members(const BallTable& ball, const Homeomorphism& g,
                                      int length_cap, const Budgets& budgets);

// Least n with F inside S^{n-1}; for every g with |g| >= n the geodesic
// suffix c of length n satisfies F c in K(g).
int replete_constant(const BallTable& ball, const std::vector<Homeomorphism>& F);

// The length-n suffix of g's stored geodesic, as an element.
Homeomorphism geodesic_suffix(const BallTable& ball, const Homeomorphism& g, int n,
                              const Budgets& budgets);

}  // namespace cantor
