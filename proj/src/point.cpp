#include "cantor/point.hpp"

#include <algorithm>
#include <set>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

// Shortest period p of v with p | |v| and v = (v[0..p))^(|v|/p).
std::size_t primitive_root_length(const Word& v) {
    for (std::size_t p = 1; p <= v.size(); ++p) {
        if (v.size() % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < v.size() && ok; ++i)
            if (v[i] != v[i - p]) ok = false;
        if (ok) return p;
    }
    return v.size();
}

}  // namespace

Point::Point(Alphabet alphabet, Word preperiod, Word period)
    : alphabet_(alphabet), u_(std::move(preperiod)), v_(std::move(period)) {
    if (v_.empty()) throw ParseError("point period must be nonempty");
    alphabet_.check_word(u_);
    alphabet_.check_word(v_);
    v_.resize(primitive_root_length(v_));
    // u.a (v)^w = u (a v[0..k-1])^w whenever a equals v's last letter;
    // rotating preserves primitivity, so this reaches the unique shortest u.
    while (!u_.empty() && u_.back() == v_.back()) {
        u_.pop_back();
        v_ = Word(1, v_.back()) + v_.substr(0, v_.size() - 1);
    }
}

Word Point::prefix(std::size_t len) const {
    Word out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back(letter(i));
    return out;
}

Point Point::parse(const Alphabet& alphabet, const std::string& text) {
    auto open = text.find('(');
    auto close = text.find(')');
    if (open == std::string::npos || close == std::string::npos || close != text.size() - 1 ||
        close < open)
        throw ParseError("point must have the form u(v), got '" + text + "'");
    Word u = text.substr(0, open);
    Word v = text.substr(open + 1, close - open - 1);
    if (v.empty()) throw ParseError("point period must be nonempty in '" + text + "'");
    return Point(alphabet, u, v);
}

int agreement_depth(const Point& x, const Point& y) {
    if (x == y) return std::numeric_limits<int>::max();
    // Distinct canonical forms always differ within one combined period
    // past both preperiods.
    std::size_t horizon = x.preperiod().size() + y.preperiod().size() +
                          2 * (x.period().size() * y.period().size()) + 2;
    for (std::size_t i = 0; i < horizon; ++i)
        if (x.letter(i) != y.letter(i)) return static_cast<int>(i);
    return static_cast<int>(horizon);
}

std::vector<Point> enumerate_points(const Alphabet& alphabet, int bound) {
    std::set<Point> seen;
    std::vector<Word> stack;
    // All (u, v) with |u| + |v| <= bound; canonicalization dedups.
    for (int lu = 0; lu + 1 <= bound; ++lu) {
        for (int lv = 1; lu + lv <= bound; ++lv) {
            std::vector<Word> us = alphabet.words_of_length(lu);
            std::vector<Word> vs = alphabet.words_of_length(lv);
            for (const Word& u : us)
                for (const Word& v : vs) seen.insert(Point(alphabet, u, v));
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<Word> Alphabet::words_of_length(int len) const {
    std::vector<Word> out;
    if (len == 0) {
        out.push_back(Word());
        return out;
    }
    std::vector<Word> shorter = words_of_length(len - 1);
    out.reserve(shorter.size() * size_);
    for (const Word& w : shorter)
        for (int a = 0; a < size_; ++a) out.push_back(w + letter_char(a));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cantor
