#pragma once

#include <string>
#include <vector>

#include "cantor/genset.hpp"

#include "json.hpp"

namespace cantor {

// A named dynamical system: one alphabet, one machine class, and the
// generators as given (symmetrization happens in generating_set()).
struct SystemDescription {
    std::string name;
    int alphabet_size = 2;
    MachineClass cls = MachineClass::Mealy;
    std::vector<Homeomorphism> generators;
    std::vector<std::string> generator_names;
    std::string notes;

    Alphabet alphabet() const { return Alphabet(alphabet_size); }
    GeneratingSet generating_set() const {
        return GeneratingSet(alphabet(), cls, generators, generator_names);
    }
};

nlohmann::ordered_json machine_to_json(const Homeomorphism& h, const std::string& name);
Homeomorphism machine_from_json(const Alphabet& alphabet, const nlohmann::json& j);

nlohmann::ordered_json system_to_json(const SystemDescription& sys);
SystemDescription system_from_json(const nlohmann::json& j);

// Reads and validates a JSON system file; parse errors carry the path.
SystemDescription load_system(const std::string& path);

// Built-in example systems spanning the dynamical dichotomies: equicontinuous
// minimal (odometer), finite orbits (bitflip), level-transitive automaton
// groups (grigorchuk, lamplighter), a reducible transducer with invariant
// cylinders (half-odometer), a contracting prefix exchange where the
// conditions fail (contract-h), and the identity action.
const std::vector<SystemDescription>& catalog();
const SystemDescription& catalog_entry(const std::string& name);

}  // namespace cantor
