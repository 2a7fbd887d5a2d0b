#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cantor/budgets.hpp"
#include "cantor/genset.hpp"
#include "cantor/point.hpp"
#include "cantor/tower.hpp"

namespace cantor {

// Three-valued verdicts: the dynamical conditions quantify over infinite
// data, so budget exhaustion is reported as Unknown, never coerced to a
// boolean. A report is consistent iff no two verdicts contradict.
enum class Verdict { Holds, Fails, Unknown };
std::string to_string(Verdict v);

// Machine-checkable finding. `fields` carry canonical textual forms
// (points "u(v)", sets "p1,p2", generator words "1.3.2" as element
// indices); replay_evidence re-executes them through apply/contains.
// `exact` records whether every membership fact used is exact.
struct Evidence {
    std::string kind;
    bool exact = true;
    std::vector<std::pair<std::string, std::string>> fields;

    const std::string* field(const std::string& key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return &v;
        return nullptr;
    }
};

struct ConditionResult {
    Verdict verdict = Verdict::Unknown;
    std::vector<Evidence> evidence;
    std::string note;
};

// Depth-d cylinder footprint of an orbit closure. For the synchronous
// class reachability on depth-d words is exact; for prefix exchanges the
// footprint is a sound over-approximation unless the whole orbit was
// enumerated (finite).
struct OrbitClosureApprox {
    Point x;
    int depth;
    std::vector<Word> reached;  // sorted
    bool exact;
};

struct FiniteOrbitResult {
    bool finite = false;
    std::vector<Point> points;  // the whole orbit when finite; partial otherwise
};

struct SRecurrenceResult {
    Verdict verdict = Verdict::Unknown;
    int bound = 0;        // least n making every tested cone succeed (Holds)
    bool vacuous = false; // no elements in the tested layers
    std::vector<Evidence> evidence;
    std::string note;
};

struct ProximalResult {
    bool witness_found = false;
    // (generator word, agreement depth) along a growing subsequence.
    std::vector<std::pair<std::vector<int>, int>> chain;
    std::string note;
};

struct DistalPairFinding {
    Point x;
    Point y;
    bool proximal_witness;
    std::vector<std::pair<std::vector<int>, int>> chain;
};

struct DistalReport {
    bool structurally_distal = false;  // synchronous: exact isometry argument
    std::vector<DistalPairFinding> pairs;
    std::vector<std::string> lemma_violations;  // always empty unless a bug
};

struct QuotientY {
    int depth = 0;
    bool exact = false;
    bool depth_consistent = false;  // each class is a union of depth+1 classes
    std::vector<std::vector<Word>> classes;          // sorted classes of sorted words
    std::map<Word, int> class_of;                    // word -> class index
};

struct UStarResult {
    ClopenSet set;                   // U* when exact, upper approximation otherwise
    bool exact = false;              // tower stabilized: U* is clopen
    std::optional<int> stabilized_at;
};

struct ModulusRow {
    int layer = 0;
    int elements = 0;
    int max_modulus = 0;  // uniform modulus bound at the working depth
};

struct EquicontinuityReport {
    bool synchronous = false;
    int depth = 0;
    std::vector<ModulusRow> rows;
    std::string trend;  // "isometric", "bounded", or "growing"
};

struct ConditionReport {
    ClopenSet U;
    UStarResult u_star;
    std::array<ConditionResult, 6> conditions;  // the six equivalence conditions (i)..(vi)
    bool consistent = false;
    std::string notes;
};

// Session object: one generating set, one budget profile, shared caches
// (balls, orbit reachability, cone membership). All published values are
// immutable snapshots.
class Analyzer {
  public:
    Analyzer(GeneratingSet S, Budgets budgets);

    const GeneratingSet& generators() const { return S_; }
    const Budgets& budgets() const { return budgets_; }

    // Cached ball of at least this radius (rounded up to the largest built).
    const BallTable& ball(int radius);

    // U* = the union of all compact G-invariant subsets of U. For clopen U
    // in compact X this is exactly /\_{g in G} gU, i.e. the tower residue.
    UStarResult u_star(const ClopenSet& U);

    OrbitClosureApprox orbit_closure(const Point& x, int depth);
    FiniteOrbitResult finite_orbit(const Point& x);

    ConditionResult minimal_on_closure(const Point& x);
    // Verdict via the almost-periodicity lemma; on Holds carries a
    // syndetic certificate F covering the closure by translates of the
    // depth-1 cylinder neighbourhood.
    ConditionResult almost_periodic(const Point& x);

    SRecurrenceResult s_recurrent(const Point& x, const ClopenSet& U, int radius, int cone_cap);

    ProximalResult proximal(const Point& x, const Point& y);
    DistalReport distal_report(const std::vector<std::pair<Point, Point>>& sample);

    ConditionResult relation_closed(const ClopenSet& W, int depth);
    QuotientY quotient(const ClopenSet& U, int depth);

    ConditionReport theorem_consistency(const ClopenSet& U);
    EquicontinuityReport equicontinuity_report(int max_layer);

    // Ultimately periodic sample: |u|+|v| <= budget bound, plus fixed
    // points of the elements of ball(3).
    const std::vector<Point>& standard_sample();
    // Fixed points of ball(3) elements: the natural orbit-limit candidates.
    const std::vector<Point>& fixed_point_sample();

    // Depth-d word partition under the generator action (synchronous
    // class: exact orbit classes; prefix exchange: over-approximate).
    struct LevelPartition {
        int depth;
        bool exact;
        std::vector<int> class_of;           // indexed by word rank
        std::vector<std::vector<Word>> classes;
    };
    const LevelPartition& level_partition(int depth);

  private:
    GeneratingSet S_;
    Budgets budgets_;

    std::optional<BallTable> ball_;
    std::map<int, LevelPartition> partitions_;
    std::map<std::string, int> cone_length_;  // key(c)|key(g) -> |c g^-1| or -1
    std::map<std::string, FiniteOrbitResult> orbit_cache_;
    // Images of a point under every ball entry, aligned with entries().
    std::map<std::string, std::shared_ptr<const std::vector<Point>>> ball_image_cache_;
    std::optional<std::vector<Point>> sample_;
    std::optional<std::vector<Point>> fixed_sample_;

    const std::vector<Point>& ball_images(const Point& x);
    // Fixed-point limits plus a deterministic spread, restricted to region.
    std::vector<Point> limit_candidates(const ClopenSet& region);

    int effective_depth(int wanted) const;
    bool in_cone(const BallTable& ball, const Homeomorphism& c, const Homeomorphism& g_inv,
                 const std::string& g_key, int g_len);
    std::vector<Word> reach_words(const Word& seed, int depth);
    // y in closure(x)? Returns {certified, exact} and fills agreement chain.
    bool closure_member(const Point& x, const Point& y, bool& exact,
                        std::vector<std::pair<std::vector<int>, int>>* chain);
    bool certified_in_invariant_subset(const Point& y, const ClopenSet& U);
};

// Re-executes an Evidence payload through apply/contains/agreement.
bool replay_evidence(const GeneratingSet& S, const Budgets& budgets, const Evidence& e);

}  // namespace cantor
