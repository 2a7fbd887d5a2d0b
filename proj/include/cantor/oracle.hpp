#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cantor/clopen.hpp"
#include "cantor/genset.hpp"

namespace cantor {

// Depth-d kernels over the full word level A^d: induced letter maps, packed
// set operations, reachability. Each kernel has a serial reference
// implementation (the `_serial` variants, kept for testing) and an
// OpenMP-parallel default used by the oracle; bench_levels compares them.
namespace levels {

using Bits = std::vector<std::uint64_t>;

std::size_t word_count(int arity, int depth);

inline bool get_bit(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1u; }
inline void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t(1) << (i & 63); }
Bits make_bits(std::size_t n);

// out[r] = rank of the machine image of the rank-r word.
std::vector<std::uint32_t> induced_map_serial(const MealyMachine& m, int arity, int depth);
std::vector<std::uint32_t> induced_map(const MealyMachine& m, int arity, int depth);

std::vector<std::uint32_t> invert_map_serial(const std::vector<std::uint32_t>& map);
std::vector<std::uint32_t> invert_map(const std::vector<std::uint32_t>& map);

void bits_or_serial(Bits& a, const Bits& b);
void bits_or(Bits& a, const Bits& b);
void bits_and_serial(Bits& a, const Bits& b);
void bits_and(Bits& a, const Bits& b);
void bits_not_serial(Bits& a, std::size_t n);
void bits_not(Bits& a, std::size_t n);
std::size_t bits_count(const Bits& a);

// Image of a packed set under an induced map, via gather over the inverse.
Bits apply_map_serial(const Bits& set, const std::vector<std::uint32_t>& inverse_map,
                      std::size_t n);
Bits apply_map(const Bits& set, const std::vector<std::uint32_t>& inverse_map, std::size_t n);

// All ranks reachable from the seed under the given maps.
Bits reach_serial(std::size_t seed, const std::vector<std::vector<std::uint32_t>>& maps,
                  std::size_t n);
Bits reach(std::size_t seed, const std::vector<std::vector<std::uint32_t>>& maps, std::size_t n);

}  // namespace levels

// Brute-force model of the clopen algebra and the induced action at one
// fixed depth, used as the independent verification oracle for the
// symbolic machinery. Synchronous systems only. Built directly from the
// machines' raw tables; it shares no code with the symbolic path.
class BitsetOracle {
  public:
    BitsetOracle(const GeneratingSet& S, int depth);

    int depth() const { return depth_; }
    std::size_t words() const { return count_; }
    const GeneratingSet& generators() const { return *S_; }

    levels::Bits from_clopen(const ClopenSet& c) const;
    ClopenSet to_clopen(const levels::Bits& b) const;
    bool matches(const levels::Bits& b, const ClopenSet& c) const;

    levels::Bits empty() const { return levels::make_bits(count_); }
    levels::Bits full() const;

    // Image/preimage of a packed set under generator index i of S.
    levels::Bits image(std::size_t i, const levels::Bits& b) const;
    levels::Bits preimage(std::size_t i, const levels::Bits& b) const;

    // /\_{s in S} s(b): one tower step.
    levels::Bits tower_step(const levels::Bits& b) const;

    // Depth-d orbit closure footprint from a seed word.
    levels::Bits orbit_reach(const Word& seed) const;

    bool contains_point(const levels::Bits& b, const Point& x) const;

    // Test hook: corrupts one induced map (swaps two entries) so the
    // self-test can prove the diffing machinery catches disagreements.
    void corrupt_for_selftest(std::size_t gen_index);

  private:
    const GeneratingSet* S_;
    int depth_;
    std::size_t count_;
    std::vector<std::vector<std::uint32_t>> maps_;      // per generator index
    std::vector<std::vector<std::uint32_t>> inverse_;   // inverse per generator
};

// Replays a deterministic random script of set operations, images, tower
// steps and orbit reaches through both the symbolic implementation and the
// oracle, diffing after every operation.
struct OracleDiff {
    bool pass = true;
    int operations = 0;
    std::string detail;  // first mismatch, when any
};

OracleDiff oracle_check(const GeneratingSet& S, int depth, std::uint64_t seed, int operations,
                        int corrupt_gen = -1);

}  // namespace cantor
