#pragma once

#include <string>

#include "stoqtherm/boltzmann.hpp"
#include "stoqtherm/hamiltonian.hpp"
#include "stoqtherm/hbm.hpp"
#include "stoqtherm/pseq.hpp"

// json.hpp lives in vendor/ without the nlohmann/ prefix.
#include "json.hpp"

namespace stoqtherm {

using json = nlohmann::json;

// File schemas. All writers produce deterministic bytes for identical
// inputs (sorted keys, fixed float formatting from the JSON library).
//
//   hamiltonian.json {"n", "kind": "quantum"|"classical", "terms": [...]}
//   psequence.json   {"n", "alpha", "meta", "factors": [...]}
//   hbm.json         {"n", "m", "hyperedges": [...], "node_roles": [...]}
//   dbm.json         {"a", "b", "c", "W", "U"}
//   ising.json       {"fields", "edges": [[u,v,w]], "hidden_spins"}
//   bm.json          {"n", "m", "biases", "edges": [[u,v,w]]}

json to_json(const LocalHamiltonian& h);
json to_json(const ClassicalHamiltonian& hc);
json to_json(const PSequence& p);
json to_json(const HyperBoltzmannMachine& hbm);  // canonicalizes node ids
json to_json(const DeepBoltzmannMachine& dbm);
json to_json(const IsingModel& ising);
json to_json(const BoltzmannMachine& bm);

std::string hamiltonian_kind(const json& j);  // "quantum" or "classical"
LocalHamiltonian quantum_from_json(const json& j);
ClassicalHamiltonian classical_from_json(const json& j);
PSequence psequence_from_json(const json& j);
HyperBoltzmannMachine hbm_from_json(const json& j);
DeepBoltzmannMachine dbm_from_json(const json& j);
IsingModel ising_from_json(const json& j);
BoltzmannMachine bm_from_json(const json& j);

json load_json(const std::string& path);                  // SchemaError on failure
void save_json(const std::string& path, const json& j);   // deterministic dump

}  // namespace stoqtherm
