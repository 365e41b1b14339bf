#pragma once

#include <string>

#include "lso/graph.hpp"

namespace lso {

// Brute-force ground truth for the graph properties the artifact reasons
// about. Names: allselected, notallselected, eulerian, noneulerian,
// hamiltonian, nonhamiltonian, colorable(k), noncolorable(k), satgraph,
// square, prime.
bool check_property(const std::string& name, const LabeledGraph& g);

bool oracle_allselected(const LabeledGraph& g);
bool oracle_eulerian(const LabeledGraph& g);          // even-degree criterion
bool oracle_eulerian_by_walk(const LabeledGraph& g);  // independent cross-check
bool oracle_hamiltonian(const LabeledGraph& g);
bool oracle_colorable(const LabeledGraph& g, int k);
bool oracle_satgraph(const LabeledGraph& g); // labels are Boolean formulas

} // namespace lso
