#include "cantor/report.hpp"

#include <sstream>

namespace cantor {

using nlohmann::ordered_json;

namespace {

const char* condition_ids[6] = {"i", "ii", "iii", "iv", "v", "vi"};
const char* condition_names[6] = {
    "U* open, points S-recurrent",      "U* open, points almost periodic",
    "residues of clopen V in U open",   "closure membership symmetric into U*",
    "orbit closure relation closed on W", "quotient with minimal fibres",
};

}  // namespace

ordered_json evidence_json(const Evidence& e) {
    ordered_json j;
    j["kind"] = e.kind;
    j["exact"] = e.exact;
    ordered_json fields;
    for (const auto& [k, v] : e.fields) fields[k] = v;
    j["fields"] = std::move(fields);
    return j;
}

ordered_json condition_json(const ConditionResult& c) {
    ordered_json j;
    j["verdict"] = to_string(c.verdict);
    j["note"] = c.note;
    ordered_json ev = ordered_json::array();
    for (const Evidence& e : c.evidence) ev.push_back(evidence_json(e));
    j["evidence"] = std::move(ev);
    return j;
}

ordered_json analyze_report_json(const std::string& system_name, const ConditionReport& rep,
                                 const EquicontinuityReport& eq, const Budgets& budgets) {
    ordered_json j;
    j["schema"] = 1;
    j["tool"] = "cantordyn";
    j["command"] = "analyze";
    j["system"] = system_name;
    j["u"] = rep.U.text();
    ordered_json us;
    us["text"] = rep.u_star.set.text();
    us["exact"] = rep.u_star.exact;
    if (rep.u_star.stabilized_at)
        us["stabilized_at"] = *rep.u_star.stabilized_at;
    else
        us["stabilized_at"] = nullptr;
    j["u_star"] = std::move(us);
    ordered_json conds;
    for (int i = 0; i < 6; ++i) {
        ordered_json c = condition_json(rep.conditions[i]);
        c["name"] = condition_names[i];
        conds[condition_ids[i]] = std::move(c);
    }
    j["conditions"] = std::move(conds);
    j["consistent"] = rep.consistent;
    ordered_json e;
    e["synchronous"] = eq.synchronous;
    e["depth"] = eq.depth;
    e["trend"] = eq.trend;
    ordered_json rows = ordered_json::array();
    for (const ModulusRow& r : eq.rows)
        rows.push_back(ordered_json{{"layer", r.layer},
                                    {"elements", r.elements},
                                    {"max_modulus", r.max_modulus}});
    e["rows"] = std::move(rows);
    j["equicontinuity"] = std::move(e);
    ordered_json b;
    b["depth"] = budgets.depth;
    b["radius"] = budgets.radius;
    b["max_n"] = budgets.max_n;
    b["point_bound"] = budgets.point_bound;
    b["ball_elements"] = budgets.ball_elements;
    j["budgets"] = std::move(b);
    return j;
}

std::string analyze_report_text(const std::string& system_name, const ConditionReport& rep,
                                const EquicontinuityReport& eq) {
    std::ostringstream os;
    os << "system: " << system_name << "\n";
    os << "U = " << rep.U.text() << "\n";
    os << "U* = " << rep.u_star.set.text() << (rep.u_star.exact ? " (clopen" : " (approximation");
    if (rep.u_star.stabilized_at) os << ", stabilized at " << *rep.u_star.stabilized_at;
    os << ")\n";
    for (int i = 0; i < 6; ++i) {
        const ConditionResult& c = rep.conditions[i];
        os << "(" << condition_ids[i] << ") " << to_string(c.verdict) << " — "
           << condition_names[i];
        if (!c.note.empty()) os << " [" << c.note << "]";
        os << "\n";
        for (const Evidence& e : c.evidence) {
            os << "    evidence " << e.kind << (e.exact ? "" : " (approximate)");
            for (const auto& [k, v] : e.fields)
                if (v.size() <= 60) os << " " << k << "=" << v;
            os << "\n";
        }
    }
    os << "consistent: " << (rep.consistent ? "yes" : "NO — holds/fails contradiction") << "\n";
    os << "equicontinuity: trend " << eq.trend << " at depth " << eq.depth << "\n";
    return os.str();
}

ordered_json tower_report_json(const GeneratingSet& S, const VInfinityVerdict& vv) {
    ordered_json j;
    j["schema"] = 1;
    j["tool"] = "cantordyn";
    j["command"] = "tower";
    j["base"] = vv.tower.base.text();
    ordered_json levels = ordered_json::array();
    for (std::size_t n = 0; n < vv.tower.levels.size(); ++n) {
        const ShellLevel& l = vv.tower.levels[n];
        ordered_json lj;
        lj["n"] = n;
        lj["v"] = l.v.text();
        lj["w"] = l.w.text();
        if (l.p) lj["p"] = l.p->text();
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);
    if (vv.tower.stabilized_at)
        j["stabilized_at"] = *vv.tower.stabilized_at;
    else
        j["stabilized_at"] = nullptr;
    switch (vv.verdict) {
        case VInfinityVerdict::Openness::Open: j["verdict"] = "open"; break;
        case VInfinityVerdict::Openness::NotOpen: j["verdict"] = "not-open"; break;
        default: j["verdict"] = "unknown";
    }
    if (vv.v_infinity) j["v_infinity"] = vv.v_infinity->text();
    if (vv.witness) {
        ordered_json w;
        w["point"] = vv.witness->point.text();
        ordered_json entries = ordered_json::array();
        for (const ShellWalkStep& s : vv.witness->entries) {
            ordered_json sj;
            sj["level"] = s.level;
            sj["word"] = S.word_text(s.word);
            sj["image"] = s.image.text();
            entries.push_back(std::move(sj));
        }
        w["entries"] = std::move(entries);
        j["witness"] = std::move(w);
    }
    ordered_json counts = ordered_json::array();
    for (const auto& [mn, count] : vv.tower.translate_counts)
        counts.push_back(ordered_json{{"m", mn.first}, {"n", mn.second}, {"count", count}});
    j["translate_counts"] = std::move(counts);
    j["p_truncated"] = vv.tower.p_truncated;
    j["note"] = vv.note;
    return j;
}

std::string tower_report_text(const GeneratingSet& S, const VInfinityVerdict& vv) {
    std::ostringstream os;
    os << "V = " << vv.tower.base.text() << "\n";
    for (std::size_t n = 0; n < vv.tower.levels.size(); ++n) {
        const ShellLevel& l = vv.tower.levels[n];
        os << "V_" << n << " = " << l.v.text() << "   W_" << n << " = " << l.w.text();
        if (l.p) os << "   P_" << n << " = " << l.p->text();
        os << "\n";
    }
    if (vv.tower.stabilized_at)
        os << "stabilized at n = " << *vv.tower.stabilized_at
           << ", V_inf = " << vv.v_infinity->text() << "\n";
    else
        os << "not stabilized within budget (deepest V is an upper approximation)\n";
    os << "verdict: "
       << (vv.verdict == VInfinityVerdict::Openness::Open
               ? "open"
               : vv.verdict == VInfinityVerdict::Openness::NotOpen ? "not-open" : "unknown")
       << " — " << vv.note << "\n";
    if (vv.witness) {
        os << "witness " << vv.witness->point.text() << ":\n";
        for (const ShellWalkStep& s : vv.witness->entries)
            os << "  level " << s.level << ": " << S.word_text(s.word) << " -> "
               << s.image.text() << "\n";
    }
    return os.str();
}

std::string dot_reachability(Analyzer& analyzer, int depth,
                             const std::optional<QuotientY>& quotient) {
    static const char* palette[] = {"black",  "red",    "blue",   "forestgreen",
                                    "orange", "purple", "brown",  "cadetblue",
                                    "crimson", "gray40"};
    const GeneratingSet& S = analyzer.generators();
    std::ostringstream os;
    os << "digraph reach {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
    std::vector<Word> words = ClopenSet::full_space(S.alphabet()).depth_slice(depth);
    if (quotient) {
        for (std::size_t c = 0; c < quotient->classes.size(); ++c) {
            os << "  subgraph cluster_" << c << " {\n    label=\"class " << c << "\";\n";
            for (const Word& w : quotient->classes[c]) os << "    \"" << w << "\";\n";
            os << "  }\n";
        }
    }
    const bool sync = S.is_synchronous();
    for (const Word& w : words) {
        for (std::size_t i = 1; i < S.size(); ++i) {
            const char* color = palette[i % 10];
            if (sync) {
                os << "  \"" << w << "\" -> \"" << S.element(i).apply_prefix(w) << "\" [color="
                   << color << ", label=\"" << S.name(i) << "\"];\n";
            } else {
                ClopenSet img = S.element(i).image(ClopenSet::cylinder(S.alphabet(), w));
                for (const Word& q : img.prefixes()) {
                    Word target = static_cast<int>(q.size()) >= depth
                                      ? q.substr(0, depth)
                                      : q;  // shallow images keep their own label
                    os << "  \"" << w << "\" -> \"" << target << "\" [color=" << color
                       << ", label=\"" << S.name(i) << "\"];\n";
                }
            }
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace cantor
