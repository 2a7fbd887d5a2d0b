#pragma once

#include <string>
#include <vector>

#include "cantor/errors.hpp"

namespace cantor {

// Finite words over the alphabet are stored as digit strings ('0'..'9'),
// so lexicographic string order coincides with the letter order and
// serialization is the identity. The empty word is "".
using Word = std::string;

// The letter alphabet A. X = A^omega is fixed for a whole analysis session.
// Sizes are capped at 10 so that the digit-based textual interface stays
// unambiguous.
class Alphabet {
  public:
    explicit Alphabet(int size) : size_(size) {
        if (size < 2) throw ParseError("alphabet size must be at least 2");
        if (size > 10) throw ParseError("alphabet size must be at most 10 (digit serialization)");
    }

    int size() const { return size_; }
    bool operator==(const Alphabet& o) const { return size_ == o.size_; }
    bool operator!=(const Alphabet& o) const { return size_ != o.size_; }

    char letter_char(int a) const { return static_cast<char>('0' + a); }

    // Validates that every character of w is a letter of this alphabet.
    void check_word(const Word& w) const {
        for (char c : w)
            if (c < '0' || c >= '0' + size_)
                throw ParseError(std::string("letter '") + c + "' out of alphabet range");
    }

    // All words of the given length, in lexicographic order.
    std::vector<Word> words_of_length(int len) const;

  private:
    int size_;
};

inline int letter_value(char c) { return c - '0'; }

// Depth-based entourage E_d = {(x,y) : x,y agree on the first d letters}.
// These generate the standard ultrametric uniformity on A^omega; E_d is
// finer than E_d' exactly when d >= d'.
struct Entourage {
    int depth = 0;
    bool refines(const Entourage& other) const { return depth >= other.depth; }
};

}  // namespace cantor
