#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cantor/alphabet.hpp"

namespace cantor {

// An ultimately periodic point u * v^omega of A^omega, kept in the unique
// canonical form: v primitive (not a proper power) and u as short as
// possible (u's last letter differs from the matching rotation of v).
// Two Points denote the same infinite word iff they compare equal.
class Point {
  public:
    Point(Alphabet alphabet, Word preperiod, Word period);

    const Alphabet& alphabet() const { return alphabet_; }
    const Word& preperiod() const { return u_; }
    const Word& period() const { return v_; }

    // i-th letter of the infinite word, 0-based.
    char letter(std::size_t i) const {
        if (i < u_.size()) return u_[i];
        return v_[(i - u_.size()) % v_.size()];
    }

    Word prefix(std::size_t len) const;

    bool operator==(const Point& o) const { return u_ == o.u_ && v_ == o.v_; }
    bool operator!=(const Point& o) const { return !(*this == o); }
    bool operator<(const Point& o) const {
        return u_ != o.u_ ? u_ < o.u_ : v_ < o.v_;
    }

    // Textual form "u(v)", e.g. "0(1)" for 01^omega, "(0)" for 0^omega.
    std::string text() const { return u_ + "(" + v_ + ")"; }
    static Point parse(const Alphabet& alphabet, const std::string& text);

  private:
    Alphabet alphabet_;
    Word u_;
    Word v_;
};

// Depth of agreement of two points: the length of their longest common
// prefix, or unbounded (max int) when they are the same point.
int agreement_depth(const Point& x, const Point& y);

// All canonical ultimately periodic points with |u| + |v| <= bound,
// sorted and deduplicated. Dense in A^omega as bound grows.
std::vector<Point> enumerate_points(const Alphabet& alphabet, int bound);

}  // namespace cantor
