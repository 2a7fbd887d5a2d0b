#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cantor/alphabet.hpp"
#include "cantor/budgets.hpp"
#include "cantor/clopen.hpp"
#include "cantor/point.hpp"

namespace cantor {

// Letter-to-letter (synchronous) Mealy machine. Every state's output row
// must be a permutation of the alphabet, which makes the induced map on
// A^omega an invertible isometry of the depth metric.
struct MealyMachine {
    int states = 1;
    int initial = 0;
    std::vector<std::vector<int>> delta;   // delta[q][a]  -> next state
    std::vector<std::vector<int>> lambda;  // lambda[q][a] -> output letter

    static MealyMachine identity(int arity);
};

// Homeomorphism given by a bijection between two maximal prefix codes:
// x = p_i . y  |->  q_i . y. Generally not an isometry.
struct PrefixExchangeMap {
    std::vector<std::pair<Word, Word>> pairs;  // sorted by domain word

    static PrefixExchangeMap identity();
    std::size_t max_domain_length() const;
};

enum class MachineClass { Mealy, PrefixExchange };

// An exact homeomorphism of A^omega, held in canonical normal form
// (minimized + BFS-numbered transducer, or reduced prefix-exchange table).
// Normal-form equality decides extensional equality within each class.
// Values are immutable; the inverse is computed once at construction.
class Homeomorphism {
  public:
    static Homeomorphism from_mealy(const Alphabet& alphabet, MealyMachine m);
    static Homeomorphism from_prefix_exchange(const Alphabet& alphabet, PrefixExchangeMap m);
    static Homeomorphism identity(const Alphabet& alphabet, MachineClass cls);

    const Alphabet& alphabet() const;
    MachineClass cls() const;
    bool is_identity() const;

    // Canonical serialization; equal keys <=> identical action (same class).
    const std::string& key() const;

    const MealyMachine& mealy() const;                  // requires Mealy class
    const PrefixExchangeMap& prefix_exchange() const;   // requires PE class

    std::size_t machine_size() const;  // states or table pairs

    Homeomorphism inverse() const;

    Point apply(const Point& x) const;
    // Image of a depth-|w| cylinder prefix under a synchronous machine
    // (length-preserving). Mealy class only.
    Word apply_prefix(const Word& w) const;

    ClopenSet image(const ClopenSet& c) const;
    ClopenSet preimage(const ClopenSet& c) const;

    // Uniform modulus of continuity for the depth uniformity: agreement to
    // the returned depth forces image agreement to depth d. Transducers are
    // isometries (returns d); prefix exchanges return the sound bound
    // d + max |p_i|.
    int modulus(int d) const;

    bool operator==(const Homeomorphism& o) const;
    bool operator!=(const Homeomorphism& o) const { return !(*this == o); }

  private:
    struct Data;
    explicit Homeomorphism(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

// g . h : apply h first, then g. Classes must match unless one side is the
// identity (in which case the other side is returned unchanged).
Homeomorphism compose(const Homeomorphism& g, const Homeomorphism& h,
                      const Budgets& budgets = Budgets{});

inline bool equal(const Homeomorphism& g, const Homeomorphism& h) { return g == h; }

}  // namespace cantor
