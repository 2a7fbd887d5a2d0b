#include "cantor/system.hpp"

#include <fstream>

#include "cantor/errors.hpp"

namespace cantor {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json machine_to_json(const Homeomorphism& h, const std::string& name) {
    ordered_json j;
    if (!name.empty()) j["name"] = name;
    if (h.cls() == MachineClass::Mealy) {
        const MealyMachine& m = h.mealy();
        j["type"] = "mealy";
        j["states"] = m.states;
        j["initial"] = m.initial;
        j["delta"] = m.delta;
        j["lambda"] = m.lambda;
    } else {
        j["type"] = "prefix_exchange";
        ordered_json pairs = ordered_json::array();
        for (const auto& [p, q] : h.prefix_exchange().pairs)
            pairs.push_back(ordered_json::array({p, q}));
        j["pairs"] = std::move(pairs);
    }
    return j;
}

Homeomorphism machine_from_json(const Alphabet& alphabet, const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ParseError("machine description must be an object with a \"type\"");
    std::string type = j.at("type").get<std::string>();
    if (type == "mealy") {
        MealyMachine m;
        m.states = j.at("states").get<int>();
        m.initial = j.value("initial", 0);
        m.delta = j.at("delta").get<std::vector<std::vector<int>>>();
        m.lambda = j.at("lambda").get<std::vector<std::vector<int>>>();
        return Homeomorphism::from_mealy(alphabet, std::move(m));
    }
    if (type == "prefix_exchange") {
        PrefixExchangeMap m;
        for (const auto& pair : j.at("pairs")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("prefix_exchange pairs must be [domain, range] word pairs");
            m.pairs.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
        }
        return Homeomorphism::from_prefix_exchange(alphabet, std::move(m));
    }
    throw ParseError("unknown machine type '" + type + "'");
}

ordered_json system_to_json(const SystemDescription& sys) {
    ordered_json j;
    j["name"] = sys.name;
    j["alphabet"] = sys.alphabet_size;
    ordered_json gens = ordered_json::array();
    for (std::size_t i = 0; i < sys.generators.size(); ++i)
        gens.push_back(machine_to_json(sys.generators[i], i < sys.generator_names.size()
                                                              ? sys.generator_names[i]
                                                              : ""));
    j["generators"] = std::move(gens);
    if (!sys.notes.empty()) j["notes"] = sys.notes;
    return j;
}

SystemDescription system_from_json(const json& j) {
    SystemDescription sys;
    sys.name = j.value("name", "unnamed");
    sys.alphabet_size = j.value("alphabet", 2);
    Alphabet alphabet(sys.alphabet_size);
    if (!j.contains("generators") || !j.at("generators").is_array() ||
        j.at("generators").empty())
        throw ParseError("system needs a nonempty \"generators\" array");
    for (std::size_t i = 0; i < j.at("generators").size(); ++i) {
        const auto& gj = j.at("generators")[i];
        Homeomorphism h = machine_from_json(alphabet, gj);
        if (i == 0)
            sys.cls = h.cls();
        else if (h.cls() != sys.cls)
            throw ParseError("generators mix machine classes; a generating set is homogeneous");
        sys.generators.push_back(std::move(h));
        sys.generator_names.push_back(gj.value("name", "g" + std::to_string(i)));
    }
    sys.notes = j.value("notes", "");
    return sys;
}

SystemDescription load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& pe) {
        throw ParseError(path + ": " + pe.what());
    }
    try {
        return system_from_json(j);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

Homeomorphism make_mealy(const Alphabet& a, int states, int initial,
                         std::vector<std::vector<int>> delta, std::vector<std::vector<int>> lambda) {
    MealyMachine m;
    m.states = states;
    m.initial = initial;
    m.delta = std::move(delta);
    m.lambda = std::move(lambda);
    return Homeomorphism::from_mealy(a, std::move(m));
}

std::vector<SystemDescription> build_catalog() {
    std::vector<SystemDescription> out;
    Alphabet a2(2);

    {
        SystemDescription sys;
        sys.name = "identity";
        sys.generators = {Homeomorphism::identity(a2, MachineClass::Mealy)};
        sys.generator_names = {"e"};
        sys.notes = "trivial action; every clopen set is invariant";
        out.push_back(std::move(sys));
    }
    {
        // Adding machine: a(1^k 0 w) = 0^k 1 w; carry state 0, sink state 1.
        SystemDescription sys;
        sys.name = "odometer";
        sys.generators = {make_mealy(a2, 2, 0, {{1, 0}, {1, 1}}, {{1, 0}, {0, 1}})};
        sys.generator_names = {"a"};
        sys.notes = "binary adding machine: minimal, equicontinuous";
        out.push_back(std::move(sys));
    }
    {
        // Flip the first letter, then copy.
        SystemDescription sys;
        sys.name = "bitflip";
        sys.generators = {make_mealy(a2, 2, 0, {{1, 1}, {1, 1}}, {{1, 0}, {0, 1}})};
        sys.generator_names = {"s"};
        sys.notes = "first-letter involution: all orbits finite";
        out.push_back(std::move(sys));
    }
    {
        // States 0:a 1:b 2:c 3:d 4:e in the standard five-state automaton
        // (a swaps and stops; b=(a,c), c=(a,d), d=(e,b)).
        std::vector<std::vector<int>> delta = {{4, 4}, {0, 2}, {0, 3}, {4, 1}, {4, 4}};
        std::vector<std::vector<int>> lambda = {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}};
        SystemDescription sys;
        sys.name = "grigorchuk";
        sys.generators = {make_mealy(a2, 5, 0, delta, lambda),
                          make_mealy(a2, 5, 1, delta, lambda),
                          make_mealy(a2, 5, 2, delta, lambda),
                          make_mealy(a2, 5, 3, delta, lambda)};
        sys.generator_names = {"a", "b", "c", "d"};
        sys.notes = "Grigorchuk generators; level-transitive, all generators involutions";
        out.push_back(std::move(sys));
    }
    {
        // Both states step to 0 on input 0 and to 1 on input 1; state 0
        // flips its output, state 1 copies.
        std::vector<std::vector<int>> delta = {{0, 1}, {0, 1}};
        std::vector<std::vector<int>> lambda = {{1, 0}, {0, 1}};
        SystemDescription sys;
        sys.name = "lamplighter";
        sys.generators = {make_mealy(a2, 2, 0, delta, lambda),
                          make_mealy(a2, 2, 1, delta, lambda)};
        sys.generator_names = {"a", "b"};
        sys.notes = "lamplighter automaton (Grigorchuk-Zuk presentation)";
        out.push_back(std::move(sys));
    }
    {
        // Odometer on the [0] subtree, identity on [1]: states 0:t 1:carry 2:e.
        SystemDescription sys;
        sys.name = "half-odometer";
        sys.generators = {
            make_mealy(a2, 3, 0, {{1, 2}, {2, 1}, {2, 2}}, {{0, 1}, {1, 0}, {0, 1}})};
        sys.generator_names = {"t"};
        sys.notes = "reducible: fixes the cylinders [0] and [1] setwise";
        out.push_back(std::move(sys));
    }
    {
        PrefixExchangeMap pe;
        pe.pairs = {{"0", "00"}, {"10", "01"}, {"11", "1"}};
        SystemDescription sys;
        sys.name = "contract-h";
        sys.cls = MachineClass::PrefixExchange;
        sys.generators = {Homeomorphism::from_prefix_exchange(a2, pe)};
        sys.generator_names = {"h"};
        sys.notes = "contracting prefix exchange: non-distal, conditions fail";
        out.push_back(std::move(sys));
    }
    return out;
}

}  // namespace

const std::vector<SystemDescription>& catalog() {
    static const std::vector<SystemDescription> systems = build_catalog();
    return systems;
}

const SystemDescription& catalog_entry(const std::string& name) {
    for (const SystemDescription& sys : catalog())
        if (sys.name == name) return sys;
    throw ParseError("no catalog system named '" + name + "'");
}

}  // namespace cantor
