#include "cantor/analyzer.hpp"

#include <algorithm>
#include <climits>
#include <queue>
#include <set>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

std::string join_indices(const std::vector<int>& word) {
    if (word.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(word[i]);
    }
    return out;
}

std::vector<int> parse_indices(const std::string& text) {
    if (text == "e" || text.empty()) return {};
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '.')) out.push_back(std::stoi(tok));
    return out;
}

std::size_t word_rank(const Word& w, int arity) {
    std::size_t r = 0;
    for (char c : w) r = r * arity + letter_value(c);
    return r;
}

Word word_of_rank(std::size_t r, int length, int arity) {
    Word w(length, '0');
    for (int i = length - 1; i >= 0; --i) {
        w[i] = static_cast<char>('0' + static_cast<int>(r % arity));
        r /= arity;
    }
    return w;
}

// Deterministic spread over a sorted sample, so a small cap still sees
// points from every region rather than one lexicographic end.
std::vector<Point> spread_cap(const std::vector<Point>& points, int cap) {
    if (static_cast<int>(points.size()) <= cap) return points;
    if (cap <= 1) return {points.front()};
    std::vector<Point> out;
    for (int i = 0; i < cap; ++i)
        out.push_back(points[(static_cast<std::size_t>(i) * (points.size() - 1)) /
                             static_cast<std::size_t>(cap - 1)]);
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Ultimately periodic fixed points of a single homeomorphism, up to `cap`.
std::vector<Point> fixed_points(const Homeomorphism& h, int cap) {
    const Alphabet& A = h.alphabet();
    std::vector<Point> out;
    if (h.cls() == MachineClass::Mealy) {
        // Fixed points are the infinite paths of the sub-automaton keeping
        // letters unchanged; ultimately periodic ones are its lassos.
        const MealyMachine& m = h.mealy();
        std::set<Point> found;
        std::vector<int> path_states{m.initial};
        Word letters;
        std::function<void(int)> dfs = [&](int q) {
            if (static_cast<int>(found.size()) >= cap) return;
            for (int a = 0; a < A.size(); ++a) {
                if (m.lambda[q][a] != a) continue;
                int t = m.delta[q][a];
                letters.push_back(A.letter_char(a));
                auto it = std::find(path_states.begin(), path_states.end(), t);
                if (it != path_states.end()) {
                    std::size_t at = static_cast<std::size_t>(it - path_states.begin());
                    found.insert(Point(A, letters.substr(0, at), letters.substr(at)));
                } else if (letters.size() <= 2 * static_cast<std::size_t>(m.states) + 2) {
                    path_states.push_back(t);
                    dfs(t);
                    path_states.pop_back();
                }
                letters.pop_back();
                if (static_cast<int>(found.size()) >= cap) return;
            }
        };
        dfs(m.initial);
        out.assign(found.begin(), found.end());
    } else {
        std::set<Point> found;
        for (const auto& [p, q] : h.prefix_exchange().pairs) {
            if (p == q) {
                for (int a = 0; a < A.size() && static_cast<int>(found.size()) < cap; ++a)
                    found.insert(Point(A, p, Word(1, A.letter_char(a))));
            } else if (p.size() < q.size() && q.compare(0, p.size(), p) == 0) {
                found.insert(Point(A, p, q.substr(p.size())));
            } else if (q.size() < p.size() && p.compare(0, q.size(), q) == 0) {
                found.insert(Point(A, q, p.substr(q.size())));
            }
        }
        out.assign(found.begin(), found.end());
        if (static_cast<int>(out.size()) > cap) out.erase(out.begin() + cap, out.end());
    }
    return out;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        default: return "unknown";
    }
}

Analyzer::Analyzer(GeneratingSet S, Budgets budgets) : S_(std::move(S)), budgets_(budgets) {}

int Analyzer::effective_depth(int wanted) const {
    int d = 0;
    std::size_t count = 1;
    while (d < wanted && count * S_.alphabet().size() <= (1u << 20)) {
        count *= S_.alphabet().size();
        ++d;
    }
    return std::max(d, 1);
}

const BallTable& Analyzer::ball(int radius) {
    if (!ball_ || (ball_->radius_requested() < radius && ball_->complete()))
        ball_.emplace(S_, radius, budgets_);
    return *ball_;
}

UStarResult Analyzer::u_star(const ClopenSet& U) {
    ShellTower tower = build_tower(S_, U, budgets_.max_n, budgets_);
    if (tower.stabilized()) return {*tower.v_infinity, true, tower.stabilized_at};
    return {tower.levels.back().v, false, std::nullopt};
}

const Analyzer::LevelPartition& Analyzer::level_partition(int depth) {
    auto it = partitions_.find(depth);
    if (it != partitions_.end()) return it->second;

    const int A = S_.alphabet().size();
    std::size_t count = 1;
    for (int i = 0; i < depth; ++i) {
        count *= A;
        if (count > (1u << 20)) throw BudgetError("level partition too large at this depth", i);
    }
    UnionFind uf(count);
    const bool sync = S_.is_synchronous();
    for (std::size_t r = 0; r < count; ++r) {
        Word w = word_of_rank(r, depth, A);
        for (std::size_t i = 1; i < S_.size(); ++i) {
            const Homeomorphism& s = S_.element(i);
            if (sync) {
                uf.unite(static_cast<int>(r),
                         static_cast<int>(word_rank(s.apply_prefix(w), A)));
            } else {
                // Over-approximation: all depth-d words meeting s([w]).
                ClopenSet img = s.image(ClopenSet::cylinder(S_.alphabet(), w));
                for (const Word& q : img.prefixes()) {
                    if (static_cast<int>(q.size()) >= depth) {
                        uf.unite(static_cast<int>(r),
                                 static_cast<int>(word_rank(q.substr(0, depth), A)));
                    } else {
                        std::size_t base = word_rank(q, A);
                        std::size_t fan = 1;
                        for (std::size_t k = q.size(); k < static_cast<std::size_t>(depth); ++k)
                            fan *= A;
                        for (std::size_t t = 0; t < fan; ++t)
                            uf.unite(static_cast<int>(r), static_cast<int>(base * fan + t));
                    }
                }
            }
        }
    }
    LevelPartition part{depth, sync, std::vector<int>(count), {}};
    std::map<int, int> root_to_class;
    std::vector<std::vector<Word>> classes;
    for (std::size_t r = 0; r < count; ++r) {
        int root = uf.find(static_cast<int>(r));
        auto [rit, fresh] = root_to_class.try_emplace(root, static_cast<int>(classes.size()));
        if (fresh) classes.emplace_back();
        part.class_of[r] = rit->second;
        classes[rit->second].push_back(word_of_rank(r, depth, A));
    }
    part.classes = std::move(classes);
    if (sync) {
        // Group action: every class must be closed under every generator,
        // i.e. the reach of each seed is its whole class. Verified once here.
        for (std::size_t r = 0; r < count; ++r) {
            Word w = word_of_rank(r, depth, A);
            for (std::size_t i = 1; i < S_.size(); ++i)
                if (part.class_of[word_rank(S_.element(i).apply_prefix(w), A)] !=
                    part.class_of[r])
                    throw InternalError("orbit class not generator-closed");
        }
    }
    auto [pit, _] = partitions_.emplace(depth, std::move(part));
    return pit->second;
}

std::vector<Word> Analyzer::reach_words(const Word& seed, int depth) {
    const LevelPartition& part = level_partition(depth);
    int cls = part.class_of[word_rank(seed, S_.alphabet().size())];
    return part.classes[cls];
}

FiniteOrbitResult Analyzer::finite_orbit(const Point& x) {
    auto it = orbit_cache_.find(x.text());
    if (it != orbit_cache_.end()) return it->second;

    FiniteOrbitResult res;
    std::set<Point> seen{x};
    std::queue<Point> work;
    work.push(x);
    bool capped = false;
    while (!work.empty() && !capped) {
        Point y = work.front();
        work.pop();
        for (std::size_t i = 1; i < S_.size(); ++i) {
            Point z = S_.element(i).apply(y);
            if (seen.insert(z).second) {
                if (static_cast<int>(seen.size()) > budgets_.orbit_points_cap) {
                    capped = true;
                    break;
                }
                work.push(z);
            }
        }
    }
    res.finite = !capped;
    res.points.assign(seen.begin(), seen.end());
    orbit_cache_.emplace(x.text(), res);
    return res;
}

OrbitClosureApprox Analyzer::orbit_closure(const Point& x, int depth) {
    int d = effective_depth(depth);
    if (S_.is_synchronous())
        return {x, d, reach_words(x.prefix(d), d), true};
    FiniteOrbitResult fo = finite_orbit(x);
    if (fo.finite) {
        std::set<Word> words;
        for (const Point& p : fo.points) words.insert(p.prefix(d));
        return {x, d, {words.begin(), words.end()}, true};
    }
    return {x, d, reach_words(x.prefix(d), d), false};
}

bool Analyzer::closure_member(const Point& x, const Point& y, bool& exact,
                              std::vector<std::pair<std::vector<int>, int>>* chain) {
    if (x == y) {
        exact = true;
        return true;
    }
    const int D = effective_depth(budgets_.depth);
    FiniteOrbitResult fo = finite_orbit(x);
    if (fo.finite) {
        exact = true;
        return std::binary_search(fo.points.begin(), fo.points.end(), y);
    }
    if (S_.is_synchronous()) {
        // Exact to depth D: the reach class is exactly the closure footprint.
        exact = false;
        const LevelPartition& part = level_partition(D);
        const int A = S_.alphabet().size();
        return part.class_of[word_rank(x.prefix(D), A)] ==
               part.class_of[word_rank(y.prefix(D), A)];
    }
    // Prefix exchange, infinite orbit: certify by strictly growing
    // agreement of exact orbit points with y.
    exact = false;
    const BallTable& b = ball(budgets_.radius);
    const std::vector<Point>& images = ball_images(x);
    int best = -1;
    for (std::size_t i = 0; i < images.size(); ++i) {
        int depth_now = agreement_depth(images[i], y);
        if (depth_now > best) {
            best = depth_now;
            if (chain) chain->emplace_back(b.entries()[i].witness, depth_now);
            if (best >= D) return true;
        }
    }
    return false;
}

const std::vector<Point>& Analyzer::ball_images(const Point& x) {
    auto it = ball_image_cache_.find(x.text());
    if (it == ball_image_cache_.end()) {
        const BallTable& b = ball(budgets_.radius);
        auto images = std::make_shared<std::vector<Point>>();
        images->reserve(b.entries().size());
        for (const BallEntry& e : b.entries()) images->push_back(e.element.apply(x));
        it = ball_image_cache_.emplace(x.text(), std::move(images)).first;
    }
    return *it->second;
}

bool Analyzer::certified_in_invariant_subset(const Point& y, const ClopenSet& U) {
    if (S_.is_synchronous()) {
        // Closure(y) lies in U iff its depth-D footprint lies in U's slice,
        // once D reaches U's deepest prefix. Exact for the synchronous class.
        int d = std::max<int>(effective_depth(budgets_.depth),
                              static_cast<int>(U.max_prefix_length()));
        std::vector<Word> slice = U.depth_slice(d);
        for (const Word& w : reach_words(y.prefix(d), d))
            if (!std::binary_search(slice.begin(), slice.end(), w)) return false;
        return true;
    }
    FiniteOrbitResult fo = finite_orbit(y);
    if (!fo.finite) return false;
    for (const Point& p : fo.points)
        if (!U.contains(p)) return false;
    return true;  // finite orbit: compact, invariant, inside U
}

ConditionResult Analyzer::minimal_on_closure(const Point& x) {
    ConditionResult res;
    if (S_.is_synchronous()) {
        // Each level partition verifies its generator-closure at build time;
        // the reach class of the prefix being one whole class at every depth
        // is exactly the minimality certificate.
        const int D = effective_depth(budgets_.depth);
        for (int d = 1; d <= D; ++d) {
            const LevelPartition& part = level_partition(d);
            int cls = part.class_of[word_rank(x.prefix(d), S_.alphabet().size())];
            if (d == D) {
                Evidence e{"single-class", true, {}};
                e.fields.emplace_back("depth", std::to_string(d));
                e.fields.emplace_back("class_size", std::to_string(part.classes[cls].size()));
                res.evidence.push_back(std::move(e));
            }
        }
        res.verdict = Verdict::Holds;
        res.note = "reach class of every prefix is a single orbit at each depth";
        return res;
    }

    FiniteOrbitResult fo = finite_orbit(x);
    if (fo.finite) {
        Evidence e{"finite-orbit", true, {}};
        std::string pts;
        for (std::size_t i = 0; i < fo.points.size(); ++i) {
            if (i) pts += ';';
            pts += fo.points[i].text();
        }
        e.fields.emplace_back("point", x.text());
        e.fields.emplace_back("orbit", pts);
        res.verdict = Verdict::Holds;
        res.evidence.push_back(std::move(e));
        res.note = "orbit verified finite; closure = orbit is minimal";
        return res;
    }

    const int D = effective_depth(budgets_.depth);
    for (const Point& y : standard_sample()) {
        if (y == x) continue;
        bool exact_in = false;
        std::vector<std::pair<std::vector<int>, int>> chain;
        if (!closure_member(x, y, exact_in, &chain)) continue;
        // y is (certified) in closure(x); does x return into closure(y)?
        FiniteOrbitResult fy = finite_orbit(y);
        bool fails = false;
        Evidence e{"asymmetric-pair", exact_in, {}};
        e.fields.emplace_back("x", x.text());
        e.fields.emplace_back("y", y.text());
        std::string approach;
        for (const auto& [word, depth_now] : chain) {
            if (!approach.empty()) approach += ';';
            approach += join_indices(word) + "|" + std::to_string(depth_now);
        }
        e.fields.emplace_back("approach", approach);
        if (fy.finite) {
            if (!std::binary_search(fy.points.begin(), fy.points.end(), x)) {
                fails = true;
                std::string pts;
                for (std::size_t i = 0; i < fy.points.size(); ++i) {
                    if (i) pts += ';';
                    pts += fy.points[i].text();
                }
                e.fields.emplace_back("closure_y", pts);
            }
        } else {
            std::vector<Word> reach_y = reach_words(y.prefix(D), D);
            if (!std::binary_search(reach_y.begin(), reach_y.end(), x.prefix(D))) {
                fails = true;
                e.exact = false;
                e.fields.emplace_back("closure_y_overapprox_missing", x.prefix(D));
            }
        }
        if (fails) {
            res.verdict = Verdict::Fails;
            res.evidence.push_back(std::move(e));
            res.note = "closure point does not return: minimality fails";
            return res;
        }
    }
    res.verdict = Verdict::Unknown;
    res.note = "no certificate within budgets (infinite orbit, no failing pair sampled)";
    return res;
}

ConditionResult Analyzer::almost_periodic(const Point& x) {
    ConditionResult res = minimal_on_closure(x);
    if (res.verdict != Verdict::Holds) return res;

    // Syndetic certificate for the depth-1 cylinder neighbourhood: finitely
    // many translates of U /\ closure cover the closure.
    Evidence cert{"syndetic-cover", true, {}};
    cert.fields.emplace_back("point", x.text());
    cert.fields.emplace_back("neighbourhood", x.prefix(1));
    if (S_.is_synchronous()) {
        Word seed = x.prefix(1);
        std::map<Word, std::vector<int>> witness{{seed, {}}};
        std::queue<Word> work;
        work.push(seed);
        while (!work.empty()) {
            Word w = work.front();
            work.pop();
            for (std::size_t i = 1; i < S_.size(); ++i) {
                Word img = S_.element(i).apply_prefix(w);
                if (witness.count(img)) continue;
                std::vector<int> wd = witness[w];
                wd.push_back(static_cast<int>(i));
                witness.emplace(img, std::move(wd));
                work.push(img);
            }
        }
        std::string cover;
        for (const auto& [q, word] : witness) {
            if (!cover.empty()) cover += ';';
            // The stored word maps [seed] onto [q] as a product applied
            // left-to-right in discovery order: compose in reverse.
            std::vector<int> prod(word.rbegin(), word.rend());
            cover += q + "|" + join_indices(prod);
        }
        cert.fields.emplace_back("cover", cover);
        cert.fields.emplace_back("F_size", std::to_string(witness.size()));
    } else {
        FiniteOrbitResult fo = finite_orbit(x);
        std::string cover;
        for (const Point& p : fo.points) {
            if (!cover.empty()) cover += ';';
            cover += p.text();
        }
        cert.fields.emplace_back("orbit_cover", cover);
        cert.fields.emplace_back("F_size", std::to_string(fo.points.size()));
    }
    res.evidence.push_back(std::move(cert));
    return res;
}

bool Analyzer::in_cone(const BallTable& b, const Homeomorphism& c, const Homeomorphism& g_inv,
                       const std::string& g_key, int g_len) {
    std::string key = c.key() + "|" + g_key;
    auto it = cone_length_.find(key);
    int len;
    if (it != cone_length_.end()) {
        len = it->second;
        if (len < 0 && -(len + 1) < g_len - 1) it = cone_length_.end();  // stale bound
    }
    if (it == cone_length_.end()) {
        Homeomorphism t = compose(c, g_inv, budgets_);
        auto idx = b.find(t);
        len = idx ? b.entries()[*idx].length : -(b.radius_reached() + 1);
        cone_length_[key] = len;
    }
    return len >= 0 && len <= g_len - 1;
}

SRecurrenceResult Analyzer::s_recurrent(const Point& x, const ClopenSet& U, int radius,
                                        int cone_cap) {
    if (!U.contains(x))
        throw PreconditionError("s_recurrent requires x in U (the neighbourhood is of x)");
    SRecurrenceResult res;
    const BallTable& b = ball(std::max(radius, cone_cap));
    if (b.radius_reached() < radius)
        throw BudgetError("ball does not reach the requested recurrence radius",
                          b.radius_reached());

    std::vector<std::size_t> candidates;  // |c| in [1, cone_cap], sorted by length
    for (std::size_t i = 0; i < b.entries().size(); ++i) {
        int len = b.entries()[i].length;
        if (len >= 1 && len <= cone_cap) candidates.push_back(i);
    }
    std::vector<char> candidate_in_U(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k)
        candidate_in_U[k] = U.contains(b.entries()[candidates[k]].element.apply(x));

    int worst = 0;
    bool any_gap = false;
    bool tested_any = false;
    std::map<std::string, bool> witnessed;  // element key -> has a cone witness
    std::vector<std::size_t> top_layer_failures;
    for (std::size_t gi = 0; gi < b.entries().size(); ++gi) {
        const BallEntry& g = b.entries()[gi];
        if (g.length < budgets_.recur_min_layer || g.length > radius) continue;
        tested_any = true;
        Homeomorphism g_inv = g.element.inverse();
        int found = INT_MAX;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            const BallEntry& c = b.entries()[candidates[k]];
            if (c.length >= found) break;  // candidates sorted by length
            if (!candidate_in_U[k]) continue;
            if (in_cone(b, c.element, g_inv, g.element.key(), g.length)) found = c.length;
        }
        witnessed[g.element.key()] = found != INT_MAX;
        if (found == INT_MAX) {
            any_gap = true;
            if (g.length == radius) top_layer_failures.push_back(gi);
        } else {
            worst = std::max(worst, found);
        }
    }

    if (!tested_any) {
        res.verdict = Verdict::Holds;
        res.vacuous = true;
        res.note = "no elements in the tested layers; recurrence is vacuous";
        return res;
    }

    // A counterexample candidate needs more than one bad sphere element:
    // the failure must persist along the whole geodesic of a top-layer
    // element, the finite shadow of a net with |g| -> infinity whose cones
    // stay empty. Sporadic gaps are reported as unknown.
    for (std::size_t gi : top_layer_failures) {
        const BallEntry& g = b.entries()[gi];
        bool ray_fails = true;
        for (int k = budgets_.recur_min_layer; k < radius && ray_fails; ++k) {
            std::vector<int> prefix(g.witness.begin(), g.witness.begin() + k);
            Homeomorphism gk = b.evaluate_word(prefix, budgets_);
            auto it = witnessed.find(gk.key());
            if (it == witnessed.end() || it->second) ray_fails = false;
        }
        if (!ray_fails) continue;
        res.verdict = Verdict::Fails;
        res.note = "counterexample candidate: the cone stays empty along a whole geodesic "
                   "ray up to the cap (the true property quantifies over all n)";
        Evidence e{"recurrence-counterexample", true, {}};
        e.fields.emplace_back("point", x.text());
        e.fields.emplace_back("set", U.text());
        e.fields.emplace_back("g_word", join_indices(g.witness));
        e.fields.emplace_back("layer", std::to_string(g.length));
        Homeomorphism g_inv = g.element.inverse();
        std::string cone;
        for (std::size_t ci : candidates) {
            const BallEntry& c = b.entries()[ci];
            if (!in_cone(b, c.element, g_inv, g.element.key(), g.length)) continue;
            if (!cone.empty()) cone += ';';
            cone += join_indices(c.witness) + "|" + c.element.apply(x).text();
        }
        e.fields.emplace_back("cone", cone);
        res.evidence.push_back(std::move(e));
        return res;
    }

    if (any_gap) {
        res.verdict = Verdict::Unknown;
        res.note = "some tested sphere elements lack cone witnesses at this cap, but no "
                   "witness-less geodesic ray was found";
        return res;
    }
    res.verdict = Verdict::Holds;
    res.bound = worst;
    res.note = "every tested layer admits cone witnesses of length <= " + std::to_string(worst);
    return res;
}

ProximalResult Analyzer::proximal(const Point& x, const Point& y) {
    ProximalResult res;
    if (x == y) {
        res.witness_found = true;
        res.note = "diagonal pair: trivially proximal";
        return res;
    }
    int base = agreement_depth(x, y);
    const BallTable& b = ball(budgets_.radius);
    int best = base;
    for (const BallEntry& e : b.entries()) {
        int d = agreement_depth(e.element.apply(x), e.element.apply(y));
        if (d > best) {
            best = d;
            res.chain.emplace_back(e.witness, d);
        }
    }
    res.witness_found = best >= base + budgets_.proximity_gain;
    res.note = res.witness_found
                   ? "agreement depth grew from " + std::to_string(base) + " to " +
                         std::to_string(best)
                   : "no witness up to radius " + std::to_string(b.radius_reached()) +
                         " (agreement stayed <= " + std::to_string(best) + ")";
    return res;
}

DistalReport Analyzer::distal_report(const std::vector<std::pair<Point, Point>>& sample) {
    DistalReport rep;
    rep.structurally_distal = S_.is_synchronous();
    for (const auto& [x, y] : sample) {
        if (x == y) continue;
        ProximalResult pr = proximal(x, y);
        rep.pairs.push_back({x, y, pr.witness_found, pr.chain});
        if (pr.witness_found && rep.structurally_distal)
            rep.lemma_violations.push_back("isometric system produced a proximal witness for (" +
                                           x.text() + ", " + y.text() + ")");
    }
    if (rep.structurally_distal)
        for (const auto& [x, y] : sample)
            for (const Point& p : {x, y})
                if (minimal_on_closure(p).verdict == Verdict::Fails)
                    rep.lemma_violations.push_back(
                        "distal point with non-minimal orbit closure: " + p.text());
    return rep;
}

ConditionResult Analyzer::relation_closed(const ClopenSet& W, int depth) {
    ConditionResult res;
    if (W.is_empty()) {
        res.verdict = Verdict::Holds;
        res.note = "empty W: the restricted relation is trivially closed";
        return res;
    }
    bool identity_only = S_.size() == 1;
    if (identity_only) {
        res.verdict = Verdict::Holds;
        res.note = "identity action: the relation is the diagonal, which is closed";
        return res;
    }
    int d = effective_depth(depth);
    if (static_cast<std::size_t>(d) < W.max_prefix_length()) {
        res.verdict = Verdict::Unknown;
        res.note = "W is deeper than the working depth";
        return res;
    }

    if (S_.is_synchronous()) {
        int d0 = std::max(1, d - budgets_.stability_window);
        std::size_t last_count = 0;
        for (int dd = d0; dd <= d; ++dd) {
            const LevelPartition& part = level_partition(dd);
            if (dd > d0) {
                const LevelPartition& prev = level_partition(dd - 1);
                for (const auto& cls : part.classes) {
                    std::set<int> projected;
                    for (const Word& w : cls)
                        projected.insert(
                            prev.class_of[word_rank(w.substr(0, dd - 1), S_.alphabet().size())]);
                    if (projected.size() != 1)
                        throw InternalError("depth projection split an orbit class");
                }
            }
            if (dd == d) {
                std::set<int> w_classes;
                for (const Word& w : W.depth_slice(dd))
                    w_classes.insert(part.class_of[word_rank(w, S_.alphabet().size())]);
                last_count = w_classes.size();
            }
        }
        res.verdict = Verdict::Holds;
        Evidence e{"class-partition", true, {}};
        e.fields.emplace_back("depth", std::to_string(d));
        e.fields.emplace_back("classes_on_W", std::to_string(last_count));
        res.evidence.push_back(std::move(e));
        res.note = "orbit partition is symmetric and projection-stable over the depth window";
        return res;
    }

    // Prefix exchange: hunt for an asymmetric closure pair inside W; the
    // natural limit partners are the fixed-point candidates.
    std::vector<Point> z_candidates = limit_candidates(W);
    for (const Point& y : standard_sample()) {
        if (!W.contains(y)) continue;
        for (const Point& z : z_candidates) {
            if (z == y) continue;
            bool exact_in = false;
            std::vector<std::pair<std::vector<int>, int>> chain;
            if (!closure_member(y, z, exact_in, &chain)) continue;
            bool back_exact = false;
            bool back = closure_member(z, y, back_exact, nullptr);
            if (back || !back_exact) continue;  // need an exact non-membership
            Evidence e{"asymmetric-pair", exact_in, {}};
            e.fields.emplace_back("x", y.text());
            e.fields.emplace_back("y", z.text());
            std::string approach;
            for (const auto& [word, depth_now] : chain) {
                if (!approach.empty()) approach += ';';
                approach += join_indices(word) + "|" + std::to_string(depth_now);
            }
            e.fields.emplace_back("approach", approach);
            FiniteOrbitResult fz = finite_orbit(z);
            if (fz.finite) {
                std::string pts;
                for (std::size_t i = 0; i < fz.points.size(); ++i) {
                    if (i) pts += ';';
                    pts += fz.points[i].text();
                }
                e.fields.emplace_back("closure_y", pts);
            }
            e.fields.emplace_back("w", W.text());
            res.verdict = Verdict::Fails;
            res.evidence.push_back(std::move(e));
            res.note = "limit pair in R with non-returning partner";
            return res;
        }
    }
    res.verdict = Verdict::Unknown;
    res.note = "no asymmetric pair found and no closedness certificate for prefix exchanges";
    return res;
}

QuotientY Analyzer::quotient(const ClopenSet& U, int depth) {
    UStarResult us = u_star(U);
    if (!us.exact)
        throw BudgetError("U* did not stabilize at the tower budget; quotient undefined",
                          budgets_.max_n);
    QuotientY out;
    out.exact = S_.is_synchronous() || S_.size() == 1;
    if (us.set.is_empty()) {
        out.depth = depth;
        out.depth_consistent = true;
        out.exact = true;  // the empty quotient is exact in any class
        return out;
    }
    int d = std::max(effective_depth(depth), static_cast<int>(us.set.max_prefix_length()));
    out.depth = d;
    const LevelPartition& part = level_partition(d);
    std::map<int, std::vector<Word>> by_class;
    for (const Word& w : us.set.depth_slice(d))
        by_class[part.class_of[word_rank(w, S_.alphabet().size())]].push_back(w);
    for (auto& [cls, words] : by_class) {
        std::sort(words.begin(), words.end());
        for (const Word& w : words) out.class_of[w] = static_cast<int>(out.classes.size());
        out.classes.push_back(std::move(words));
    }
    // Fibre consistency across depth: each depth-d class must be the union
    // of whole depth-(d+1) classes.
    out.depth_consistent = true;
    const LevelPartition& finer = level_partition(d + 1);
    for (const auto& cls : finer.classes) {
        std::set<int> up;
        for (const Word& w : cls) {
            auto it = out.class_of.find(w.substr(0, d));
            if (it != out.class_of.end()) up.insert(it->second);
        }
        if (up.size() > 1) out.depth_consistent = false;
    }
    return out;
}

const std::vector<Point>& Analyzer::standard_sample() {
    if (!sample_) {
        std::set<Point> pts;
        for (const Point& p : enumerate_points(S_.alphabet(), budgets_.point_bound))
            pts.insert(p);
        for (const Point& p : fixed_point_sample()) pts.insert(p);
        sample_.emplace(pts.begin(), pts.end());
    }
    return *sample_;
}

const std::vector<Point>& Analyzer::fixed_point_sample() {
    if (!fixed_sample_) {
        std::set<Point> pts;
        try {
            const BallTable& b = ball(3);
            for (const BallEntry& e : b.entries())
                if (e.length <= 3)
                    for (const Point& p : fixed_points(e.element, 8)) pts.insert(p);
        } catch (const BudgetError&) {
            // Fall back to the plain ultimately periodic family.
        }
        fixed_sample_.emplace(pts.begin(), pts.end());
    }
    return *fixed_sample_;
}

std::vector<Point> Analyzer::limit_candidates(const ClopenSet& region) {
    std::set<Point> out;
    for (const Point& p : fixed_point_sample())
        if (region.contains(p)) out.insert(p);
    std::vector<Point> in_region;
    for (const Point& p : standard_sample())
        if (region.contains(p)) in_region.push_back(p);
    for (const Point& p : spread_cap(in_region, budgets_.sample_cap)) out.insert(p);
    return {out.begin(), out.end()};
}

namespace {

Evidence tower_witness_evidence(const GeneratingSet& S, const VInfinityVerdict& vv) {
    Evidence e{"tower-witness", true, {}};
    e.fields.emplace_back("base", vv.tower.base.text());
    e.fields.emplace_back("point", vv.witness->point.text());
    std::string entries;
    for (const ShellWalkStep& step : vv.witness->entries) {
        if (!entries.empty()) entries += ';';
        entries += std::to_string(step.level) + "|" + join_indices(step.word) + "|" +
                   step.image.text() + "|" + vv.tower.levels[step.level].v.text();
    }
    e.fields.emplace_back("entries", entries);
    return e;
}

void aggregate(ConditionResult& target, Verdict v) {
    if (v == Verdict::Fails)
        target.verdict = Verdict::Fails;
    else if (v == Verdict::Unknown && target.verdict == Verdict::Holds)
        target.verdict = Verdict::Unknown;
}

}  // namespace

ConditionReport Analyzer::theorem_consistency(const ClopenSet& U) {
    ConditionReport rep{U, {ClopenSet::empty_set(S_.alphabet()), false, std::nullopt}, {}, false,
                        ""};

    // Shared openness analysis of U* = the tower residue for V = U.
    VInfinityVerdict vu = v_infinity_verdict(S_, U, budgets_);
    rep.u_star = vu.tower.stabilized()
                     ? UStarResult{*vu.tower.v_infinity, true, vu.tower.stabilized_at}
                     : UStarResult{vu.tower.levels.back().v, false, std::nullopt};
    Verdict openness = Verdict::Unknown;
    if (vu.verdict == VInfinityVerdict::Openness::Open) openness = Verdict::Holds;
    if (vu.verdict == VInfinityVerdict::Openness::NotOpen) openness = Verdict::Fails;

    // Point sample inside U* (its approximation when unstabilized). The
    // linear-cost conditions scan all of it; pair conditions get a spread.
    std::vector<Point> u_star_points;
    for (const Point& p : standard_sample())
        if (rep.u_star.set.contains(p)) u_star_points.push_back(p);

    // (i) U* open and consists of S-recurrent points.
    {
        ConditionResult& c = rep.conditions[0];
        if (openness == Verdict::Fails) {
            c.verdict = Verdict::Fails;
            c.evidence.push_back(tower_witness_evidence(S_, vu));
            c.note = "U* is not open: witness orbit accumulates in every computed level";
        } else if (openness == Verdict::Unknown) {
            c.verdict = Verdict::Unknown;
            c.note = "tower unstabilized and no witness found: openness undecided";
        } else {
            c.verdict = Verdict::Holds;
            c.note = "recurrence surrogate: depth-1 cylinder neighbourhoods, layers " +
                     std::to_string(budgets_.recur_min_layer) + ".." +
                     std::to_string(budgets_.radius);
            if (u_star_points.empty()) c.note += "; vacuous (no sampled points in U*)";
            for (const Point& x : u_star_points) {
                try {
                    SRecurrenceResult r = s_recurrent(x, ClopenSet::cylinder(S_.alphabet(),
                                                                             x.prefix(1)),
                                                      budgets_.radius, budgets_.recur_cone_cap);
                    aggregate(c, r.verdict);
                    if (r.verdict == Verdict::Fails)
                        for (Evidence& e : r.evidence) c.evidence.push_back(std::move(e));
                } catch (const BudgetError&) {
                    aggregate(c, Verdict::Unknown);
                }
            }
        }
    }

    // (ii) U* open and consists of almost periodic points.
    {
        ConditionResult& c = rep.conditions[1];
        if (openness == Verdict::Fails) {
            c.verdict = Verdict::Fails;
            c.evidence.push_back(tower_witness_evidence(S_, vu));
            c.note = "U* is not open";
        } else if (openness == Verdict::Unknown) {
            c.verdict = Verdict::Unknown;
            c.note = "openness undecided";
        } else {
            c.verdict = Verdict::Holds;
            c.note = "almost periodicity via the minimal-closure equivalence";
            if (u_star_points.empty()) c.note += "; vacuous (no sampled points in U*)";
            for (const Point& x : u_star_points) {
                ConditionResult ap = almost_periodic(x);
                aggregate(c, ap.verdict);
                if (ap.verdict != Verdict::Holds)
                    for (Evidence& e : ap.evidence) c.evidence.push_back(std::move(e));
            }
        }
    }

    // (iii) towers stabilize (residues open) for clopen V inside U.
    {
        ConditionResult& c = rep.conditions[2];
        c.verdict = Verdict::Holds;
        std::vector<ClopenSet> family{U};
        for (int len = 1; len <= 2; ++len)
            for (const Word& w : S_.alphabet().words_of_length(len)) {
                ClopenSet v = set_intersect(U, ClopenSet::cylinder(S_.alphabet(), w));
                if (!v.is_empty() && v != U) family.push_back(v);
            }
        int stabilized_count = 0;
        for (const ClopenSet& V : family) {
            VInfinityVerdict vv = (V == U) ? vu : v_infinity_verdict(S_, V, budgets_);
            if (vv.verdict == VInfinityVerdict::Openness::Open) {
                ++stabilized_count;
            } else if (vv.verdict == VInfinityVerdict::Openness::NotOpen) {
                c.verdict = Verdict::Fails;
                c.evidence.push_back(tower_witness_evidence(S_, vv));
            } else {
                aggregate(c, Verdict::Unknown);
            }
        }
        c.note = std::to_string(stabilized_count) + "/" + std::to_string(family.size()) +
                 " towers stabilized";
    }

    // (iv) y in closure(x) with y in U* forces x in closure(y).
    {
        ConditionResult& c = rep.conditions[3];
        c.verdict = Verdict::Holds;
        int informative = 0;
        std::vector<Point> u_points;
        for (const Point& p : standard_sample())
            if (U.contains(p)) u_points.push_back(p);
        std::vector<Point> y_candidates = limit_candidates(rep.u_star.set);
        for (const Point& x : u_points) {
            for (const Point& y : y_candidates) {
                bool exact_in = false;
                std::vector<std::pair<std::vector<int>, int>> chain;
                try {
                    if (!closure_member(x, y, exact_in, &chain)) continue;
                    if (!certified_in_invariant_subset(y, U) && !rep.u_star.exact) continue;
                } catch (const BudgetError&) {
                    aggregate(c, Verdict::Unknown);
                    continue;
                }
                ++informative;
                bool back_exact = false;
                bool back = closure_member(y, x, back_exact, nullptr);
                if (back) continue;
                if (!back_exact) {
                    aggregate(c, Verdict::Unknown);
                    continue;
                }
                c.verdict = Verdict::Fails;
                Evidence e{"asymmetric-pair", exact_in, {}};
                e.fields.emplace_back("x", x.text());
                e.fields.emplace_back("y", y.text());
                std::string approach;
                for (const auto& [word, depth_now] : chain) {
                    if (!approach.empty()) approach += ';';
                    approach += join_indices(word) + "|" + std::to_string(depth_now);
                }
                e.fields.emplace_back("approach", approach);
                FiniteOrbitResult fy = finite_orbit(y);
                if (fy.finite) {
                    std::string pts;
                    for (std::size_t i = 0; i < fy.points.size(); ++i) {
                        if (i) pts += ';';
                        pts += fy.points[i].text();
                    }
                    e.fields.emplace_back("closure_y", pts);
                }
                c.evidence.push_back(std::move(e));
            }
        }
        if (c.verdict == Verdict::Holds && informative == 0 && !rep.u_star.set.is_empty())
            c.note = "no informative sampled pairs";
        else
            c.note = std::to_string(informative) + " sampled pairs checked";
        if (rep.u_star.set.is_empty()) c.note = "vacuous: U* is empty";
    }

    // (v) the orbit closure relation is closed on a neighbourhood of U*.
    {
        ConditionResult& c = rep.conditions[4];
        std::vector<ClopenSet> ws;
        if (rep.u_star.exact) ws.push_back(rep.u_star.set);
        if (ws.empty() || ws[0] != U) ws.push_back(U);
        c.verdict = Verdict::Unknown;
        for (const ClopenSet& W : ws) {
            ConditionResult r = relation_closed(W, budgets_.depth);
            if (r.verdict == Verdict::Holds) {
                c = std::move(r);
                break;
            }
            if (r.verdict == Verdict::Fails) {
                // A failing pair whose non-returning partner is certified
                // inside U* defeats every admissible W.
                bool certified = false;
                for (const Evidence& e : r.evidence)
                    if (const std::string* y = e.field("y"))
                        if (certified_in_invariant_subset(Point::parse(S_.alphabet(), *y), U))
                            certified = true;
                if (certified) {
                    c = std::move(r);
                    c.note += "; failing partner certified inside U*";
                    break;
                }
                aggregate(c, Verdict::Unknown);
            }
        }
        if (c.verdict == Verdict::Unknown && c.note.empty())
            c.note = "no certificate or certified failure for the tested W family";
    }

    // (vi) quotient with trivial action on the base and minimal fibres.
    {
        ConditionResult& c = rep.conditions[5];
        if (openness == Verdict::Fails) {
            c.verdict = Verdict::Fails;
            c.evidence.push_back(tower_witness_evidence(S_, vu));
            c.note = "U* is not open, so no such quotient exists";
        } else if (!rep.u_star.exact) {
            c.verdict = Verdict::Unknown;
            c.note = "U* not clopen at budget";
        } else {
            try {
                QuotientY q = quotient(U, budgets_.depth);
                if (!q.exact) {
                    c.verdict = Verdict::Unknown;
                    c.note = "quotient classes from over-approximate reachability; not certified";
                } else if (q.depth_consistent) {
                    c.verdict = Verdict::Holds;
                    Evidence e{"quotient", true, {}};
                    e.fields.emplace_back("depth", std::to_string(q.depth));
                    e.fields.emplace_back("classes", std::to_string(q.classes.size()));
                    c.evidence.push_back(std::move(e));
                    c.note = "fibres are depth-consistent orbit classes";
                } else {
                    c.verdict = Verdict::Fails;
                    c.note = "quotient classes are not unions of finer classes";
                }
            } catch (const BudgetError& be) {
                c.verdict = Verdict::Unknown;
                c.note = be.what();
            }
        }
    }

    bool any_holds = false, any_fails = false;
    for (const ConditionResult& c : rep.conditions) {
        any_holds |= c.verdict == Verdict::Holds;
        any_fails |= c.verdict == Verdict::Fails;
    }
    rep.consistent = !(any_holds && any_fails);
    return rep;
}

bool replay_evidence(const GeneratingSet& S, const Budgets& budgets, const Evidence& e) {
    const Alphabet& A = S.alphabet();
    auto element_of = [&](const std::string& word_text) {
        Homeomorphism acc = S.identity();
        for (int i : parse_indices(word_text)) acc = compose(acc, S.element(i), budgets);
        return acc;
    };
    auto split = [](const std::string& text, char sep) {
        std::vector<std::string> out;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, sep)) out.push_back(tok);
        return out;
    };

    try {
        if (e.kind == "recurrence-counterexample") {
            Point x = Point::parse(A, *e.field("point"));
            ClopenSet U = ClopenSet::parse(A, *e.field("set"));
            const std::string* cone = e.field("cone");
            if (!cone) return false;
            for (const std::string& item : split(*cone, ';')) {
                if (item.empty()) continue;
                auto parts = split(item, '|');
                if (parts.size() != 2) return false;
                Point img = element_of(parts[0]).apply(x);
                if (img.text() != parts[1]) return false;
                if (U.contains(img)) return false;  // a qualifying witness would exist
            }
            return true;
        }
        if (e.kind == "tower-witness") {
            Point x = Point::parse(A, *e.field("point"));
            for (const std::string& item : split(*e.field("entries"), ';')) {
                if (item.empty()) continue;
                auto parts = split(item, '|');
                if (parts.size() != 4) return false;
                Point img = element_of(parts[1]).apply(x);
                if (img.text() != parts[2]) return false;
                if (!ClopenSet::parse(A, parts[3]).contains(img)) return false;
            }
            return true;
        }
        if (e.kind == "asymmetric-pair") {
            Point x = Point::parse(A, *e.field("x"));
            Point y = Point::parse(A, *e.field("y"));
            if (const std::string* approach = e.field("approach")) {
                int last = -1;
                for (const std::string& item : split(*approach, ';')) {
                    if (item.empty()) continue;
                    auto parts = split(item, '|');
                    if (parts.size() != 2) return false;
                    int depth_now = agreement_depth(element_of(parts[0]).apply(x), y);
                    if (depth_now != std::stoi(parts[1])) return false;
                    if (depth_now <= last) return false;  // must grow strictly
                    last = depth_now;
                }
            }
            if (const std::string* closure = e.field("closure_y")) {
                std::set<Point> pts;
                for (const std::string& t : split(*closure, ';'))
                    if (!t.empty()) pts.insert(Point::parse(A, t));
                if (!pts.count(y)) return false;
                if (pts.count(x)) return false;
                for (const Point& p : pts)
                    for (std::size_t i = 1; i < S.size(); ++i)
                        if (!pts.count(S.element(i).apply(p))) return false;  // not invariant
            }
            return true;
        }
        if (e.kind == "syndetic-cover") {
            Point x = Point::parse(A, *e.field("point"));
            if (const std::string* cover = e.field("cover")) {
                ClopenSet base = ClopenSet::cylinder(A, *e.field("neighbourhood"));
                ClopenSet covered = ClopenSet::empty_set(A);
                for (const std::string& item : split(*cover, ';')) {
                    if (item.empty()) continue;
                    auto parts = split(item, '|');
                    if (parts.size() != 2) return false;
                    covered = set_union(covered, element_of(parts[1]).image(base));
                }
                // Translates must reach every listed class representative.
                for (const std::string& item : split(*cover, ';')) {
                    auto parts = split(item, '|');
                    if (!covered.is_empty() &&
                        !ClopenSet::cylinder(A, parts[0]).is_subset_of(covered))
                        return false;
                }
                return true;
            }
            if (const std::string* orbit = e.field("orbit_cover")) {
                std::set<Point> pts;
                for (const std::string& t : split(*orbit, ';'))
                    if (!t.empty()) pts.insert(Point::parse(A, t));
                if (!pts.count(x)) return false;
                for (const Point& p : pts)
                    for (std::size_t i = 1; i < S.size(); ++i)
                        if (!pts.count(S.element(i).apply(p))) return false;
                return true;
            }
            return false;
        }
        if (e.kind == "finite-orbit") {
            Point x = Point::parse(A, *e.field("point"));
            std::set<Point> pts;
            for (const std::string& t : split(*e.field("orbit"), ';'))
                if (!t.empty()) pts.insert(Point::parse(A, t));
            if (!pts.count(x)) return false;
            for (const Point& p : pts)
                for (std::size_t i = 1; i < S.size(); ++i)
                    if (!pts.count(S.element(i).apply(p))) return false;
            return true;
        }
    } catch (const Error&) {
        return false;
    }
    return false;  // unrecognized kinds never replay successfully
}

EquicontinuityReport Analyzer::equicontinuity_report(int max_layer) {
    EquicontinuityReport rep;
    rep.synchronous = S_.is_synchronous();
    rep.depth = budgets_.depth;
    const BallTable& b = ball(max_layer);
    for (int k = 0; k <= std::min(max_layer, b.radius_reached()); ++k) {
        ModulusRow row{k, 0, 0};
        for (std::size_t i : b.layer(k)) {
            row.elements += 1;
            row.max_modulus = std::max(row.max_modulus, b.entries()[i].element.modulus(rep.depth));
        }
        if (row.elements) rep.rows.push_back(row);
    }
    if (rep.synchronous) {
        rep.trend = "isometric";
    } else {
        bool growing = false;
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            if (rep.rows[i].max_modulus > rep.rows[i - 1].max_modulus) growing = true;
        rep.trend = growing ? "growing" : "bounded";
    }
    return rep;
}

}  // namespace cantor
