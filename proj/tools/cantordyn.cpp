#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cantor/analyzer.hpp"
#include "cantor/errors.hpp"
#include "cantor/oracle.hpp"
#include "cantor/report.hpp"
#include "cantor/system.hpp"

namespace {

using namespace cantor;

// Exit codes: 0 consistent, 1 inconsistency (would falsify the equivalence:
// treated as an implementation bug), 2 input error, 3 budget exhaustion
// with unknowns under --strict.
constexpr int kExitOk = 0;
constexpr int kExitInconsistent = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct CommonOpts {
    std::string system_path;
    std::string catalog_name;
    std::string set_text = "ε";
    std::vector<std::string> points;
    int depth = 10;
    int radius = 6;
    int max_n = 12;
    std::size_t budget = 20000;
    std::string format = "text";
    std::string dot_file;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_set = true) {
    cmd->add_option("--system", o.system_path, "path to a JSON system description");
    cmd->add_option("--catalog", o.catalog_name, "built-in system name");
    if (with_set) cmd->add_option("--set", o.set_text, "clopen set (prefixes, or ε / ⊥)");
    cmd->add_option("--depth", o.depth, "working depth");
    cmd->add_option("--radius", o.radius, "ball radius");
    cmd->add_option("--max-n", o.max_n, "tower depth budget");
    cmd->add_option("--budget", o.budget, "ball element budget");
    cmd->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--report", o.format, "alias of --format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--dot", o.dot_file, "write the reachability graph as DOT");
    cmd->add_flag("--strict", o.strict, "exit 3 when unknowns remain");
}

SystemDescription resolve_system(const CommonOpts& o) {
    if (!o.system_path.empty()) return load_system(o.system_path);
    if (!o.catalog_name.empty()) return catalog_entry(o.catalog_name);
    throw ParseError("give --system PATH or --catalog NAME");
}

Budgets make_budgets(const CommonOpts& o) {
    Budgets b;
    b.depth = o.depth;
    b.radius = o.radius;
    b.max_n = o.max_n;
    b.ball_elements = o.budget;
    if (const char* env = std::getenv("CANTORDYN_BUDGET")) b.ball_elements = std::stoull(env);
    return b;
}

void write_dot(const std::string& path, const std::string& dot) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write DOT file " + path);
    out << dot;
}

int cmd_analyze(const CommonOpts& o) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Budgets budgets = make_budgets(o);
    Analyzer analyzer(S, budgets);
    ClopenSet U = ClopenSet::parse(S.alphabet(), o.set_text);
    ConditionReport rep = analyzer.theorem_consistency(U);
    EquicontinuityReport eq = analyzer.equicontinuity_report(std::min(o.radius, 4));
    if (o.format == "json")
        std::cout << analyze_report_json(sys.name, rep, eq, budgets).dump(2) << "\n";
    else
        std::cout << analyze_report_text(sys.name, rep, eq);
    if (!o.dot_file.empty())
        write_dot(o.dot_file, dot_reachability(analyzer, std::min(o.depth, 6), std::nullopt));
    if (!rep.consistent) return kExitInconsistent;
    bool unknowns = false;
    for (const ConditionResult& c : rep.conditions) unknowns |= c.verdict == Verdict::Unknown;
    return (unknowns && o.strict) ? kExitBudget : kExitOk;
}

int cmd_tower(const CommonOpts& o) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Budgets budgets = make_budgets(o);
    ClopenSet V = ClopenSet::parse(S.alphabet(), o.set_text);
    VInfinityVerdict vv = v_infinity_verdict(S, V, budgets);
    if (o.format == "json")
        std::cout << tower_report_json(S, vv).dump(2) << "\n";
    else
        std::cout << tower_report_text(S, vv);
    if (o.strict && vv.verdict == VInfinityVerdict::Openness::Unknown) return kExitBudget;
    return kExitOk;
}

int cmd_ball(const CommonOpts& o) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Budgets budgets = make_budgets(o);
    BallTable table(S, o.radius, budgets);
    for (const BallEntry& e : table.entries()) {
        std::size_t h = std::hash<std::string>{}(e.element.key());
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016zx", h);
        std::cout << buf << "\t" << e.length << "\t" << S.word_text(e.witness) << "\n";
    }
    if (!table.complete()) {
        std::cerr << "ball truncated at radius " << table.radius_reached() << " of "
                  << table.radius_requested() << "\n";
        return o.strict ? kExitBudget : kExitOk;
    }
    return kExitOk;
}

int cmd_orbit(const CommonOpts& o) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Analyzer analyzer(S, make_budgets(o));
    if (o.points.empty()) throw ParseError("orbit needs --point u(v)");
    Point x = Point::parse(S.alphabet(), o.points[0]);
    OrbitClosureApprox oc = analyzer.orbit_closure(x, o.depth);
    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["command"] = "orbit";
        j["point"] = x.text();
        j["depth"] = oc.depth;
        j["exact"] = oc.exact;
        j["reached"] = oc.reached;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "closure footprint of " << x.text() << " at depth " << oc.depth
                  << (oc.exact ? " (exact)" : " (over-approximation)") << ": " << oc.reached.size()
                  << " words\n";
        for (const Word& w : oc.reached) std::cout << "  " << w << "\n";
    }
    if (!o.dot_file.empty())
        write_dot(o.dot_file, dot_reachability(analyzer, std::min(o.depth, 6), std::nullopt));
    return kExitOk;
}

int cmd_recur(const CommonOpts& o, int cone_cap) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Budgets budgets = make_budgets(o);
    if (cone_cap > 0) budgets.recur_cone_cap = cone_cap;
    Analyzer analyzer(S, budgets);
    if (o.points.empty()) throw ParseError("recur needs --point u(v)");
    Point x = Point::parse(S.alphabet(), o.points[0]);
    ClopenSet U = ClopenSet::parse(S.alphabet(), o.set_text);
    SRecurrenceResult r = analyzer.s_recurrent(x, U, o.radius, budgets.recur_cone_cap);
    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["command"] = "recur";
        j["point"] = x.text();
        j["set"] = U.text();
        j["verdict"] = to_string(r.verdict);
        j["bound"] = r.bound;
        j["vacuous"] = r.vacuous;
        j["note"] = r.note;
        nlohmann::ordered_json ev = nlohmann::ordered_json::array();
        for (const Evidence& e : r.evidence) ev.push_back(evidence_json(e));
        j["evidence"] = std::move(ev);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(r.verdict) << (r.vacuous ? " (vacuous)" : "")
                  << (r.verdict == Verdict::Holds && !r.vacuous
                          ? " with bound n = " + std::to_string(r.bound)
                          : "")
                  << " — " << r.note << "\n";
    }
    if (o.strict && r.verdict == Verdict::Unknown) return kExitBudget;
    return kExitOk;
}

int cmd_proximal(const CommonOpts& o) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Analyzer analyzer(S, make_budgets(o));
    if (o.points.size() < 2) throw ParseError("proximal needs --point twice");
    Point x = Point::parse(S.alphabet(), o.points[0]);
    Point y = Point::parse(S.alphabet(), o.points[1]);
    ProximalResult r = analyzer.proximal(x, y);
    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["command"] = "proximal";
        j["x"] = x.text();
        j["y"] = y.text();
        j["witness_found"] = r.witness_found;
        j["note"] = r.note;
        nlohmann::ordered_json chain = nlohmann::ordered_json::array();
        for (const auto& [word, depth] : r.chain)
            chain.push_back(
                nlohmann::ordered_json{{"word", S.word_text(word)}, {"agreement", depth}});
        j["chain"] = std::move(chain);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (r.witness_found ? "proximal witness found" : "no witness up to budget")
                  << " — " << r.note << "\n";
    }
    return kExitOk;
}

int cmd_quotient(const CommonOpts& o) {
    SystemDescription sys = resolve_system(o);
    GeneratingSet S = sys.generating_set();
    Analyzer analyzer(S, make_budgets(o));
    ClopenSet U = ClopenSet::parse(S.alphabet(), o.set_text);
    QuotientY q = analyzer.quotient(U, o.depth);
    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["command"] = "quotient";
        j["u"] = U.text();
        j["depth"] = q.depth;
        j["exact"] = q.exact;
        j["depth_consistent"] = q.depth_consistent;
        nlohmann::ordered_json classes = nlohmann::ordered_json::array();
        for (const auto& cls : q.classes) classes.push_back(cls);
        j["classes"] = std::move(classes);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << q.classes.size() << " classes at depth " << q.depth
                  << (q.exact ? " (exact fibres)" : " (over-approximate)")
                  << (q.depth_consistent ? ", depth-consistent" : ", NOT depth-consistent")
                  << "\n";
        for (std::size_t c = 0; c < q.classes.size(); ++c) {
            std::cout << "  class " << c << ":";
            for (const Word& w : q.classes[c]) std::cout << " " << w;
            std::cout << "\n";
        }
    }
    if (!o.dot_file.empty()) write_dot(o.dot_file, dot_reachability(analyzer, q.depth, q));
    return kExitOk;
}

int cmd_selftest(const CommonOpts& o, int scripts) {
    std::vector<const SystemDescription*> systems;
    if (!o.catalog_name.empty() || !o.system_path.empty()) {
        static SystemDescription sys = resolve_system(o);
        systems.push_back(&sys);
    } else {
        for (const SystemDescription& sys : catalog()) systems.push_back(&sys);
    }
    bool all_pass = true;
    for (const SystemDescription* sys : systems) {
        GeneratingSet S = sys->generating_set();
        if (!S.is_synchronous()) {
            std::cout << sys->name << ": skipped (oracle models synchronous systems)\n";
            continue;
        }
        int depth = std::min(o.depth, 10);
        for (int script = 0; script < scripts; ++script) {
            OracleDiff diff = oracle_check(S, depth, 0x5eed0000 + script, 60);
            if (!diff.pass) {
                all_pass = false;
                std::cout << sys->name << ": script " << script << " FAIL: " << diff.detail
                          << "\n";
            }
        }
        std::cout << sys->name << ": " << scripts << " scripts at depth " << depth
                  << (all_pass ? " pass" : " FAIL") << "\n";
    }
    return all_pass ? kExitOk : kExitInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cantordyn — exact analyzer for group actions on the Cantor space A^w"};
    app.require_subcommand(1);

    CommonOpts o;
    int cone_cap = 0;
    int scripts = 5;

    CLI::App* analyze = app.add_subcommand("analyze", "full six-condition consistency report");
    add_common(analyze, o);
    CLI::App* tower = app.add_subcommand("tower", "shell tower and openness verdict");
    add_common(tower, o);
    CLI::App* ball = app.add_subcommand("ball", "emit the word-metric ball as TSV");
    add_common(ball, o, false);
    CLI::App* orbit = app.add_subcommand("orbit", "depth-d orbit closure footprint");
    add_common(orbit, o, false);
    orbit->add_option("--point", o.points, "point u(v)");
    CLI::App* recur = app.add_subcommand("recur", "S-recurrence surrogate for a point");
    add_common(recur, o);
    recur->add_option("--point", o.points, "point u(v)");
    recur->add_option("--cap", cone_cap, "cone length cap");
    CLI::App* proximal = app.add_subcommand("proximal", "proximality search for a pair");
    add_common(proximal, o, false);
    proximal->add_option("--point", o.points, "point u(v), give twice");
    CLI::App* quotient = app.add_subcommand("quotient", "quotient Y and the fibre classes");
    add_common(quotient, o);
    CLI::App* selftest = app.add_subcommand("selftest", "oracle equivalence scripts");
    add_common(selftest, o, false);
    selftest->add_option("--scripts", scripts, "number of random scripts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(o);
        if (tower->parsed()) return cmd_tower(o);
        if (ball->parsed()) return cmd_ball(o);
        if (orbit->parsed()) return cmd_orbit(o);
        if (recur->parsed()) return cmd_recur(o, cone_cap);
        if (proximal->parsed()) return cmd_proximal(o);
        if (quotient->parsed()) return cmd_quotient(o);
        if (selftest->parsed()) return cmd_selftest(o, scripts);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PreconditionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const Error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitInconsistent;
    }
    return kExitInput;
}
