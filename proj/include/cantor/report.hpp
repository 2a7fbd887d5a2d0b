#pragma once

#include <optional>
#include <string>

#include "cantor/analyzer.hpp"
#include "cantor/system.hpp"
#include "cantor/tower.hpp"

#include "json.hpp"

namespace cantor {

nlohmann::ordered_json evidence_json(const Evidence& e);
nlohmann::ordered_json condition_json(const ConditionResult& c);

nlohmann::ordered_json analyze_report_json(const std::string& system_name,
                                           const ConditionReport& rep,
                                           const EquicontinuityReport& eq,
                                           const Budgets& budgets);
std::string analyze_report_text(const std::string& system_name, const ConditionReport& rep,
                                const EquicontinuityReport& eq);

nlohmann::ordered_json tower_report_json(const GeneratingSet& S, const VInfinityVerdict& vv);
std::string tower_report_text(const GeneratingSet& S, const VInfinityVerdict& vv);

// Depth-d reachability graph in DOT: one node per word, one colored edge
// set per generator; quotient classes become clusters when given.
std::string dot_reachability(Analyzer& analyzer, int depth,
                             const std::optional<QuotientY>& quotient);

}  // namespace cantor
