#pragma once

#include <functional>

#include "lso/formula.hpp"
#include "lso/graph.hpp"
#include "lso/runtime.hpp"

namespace lso {

// Output graph plus the map sending each output node to the input node whose
// cluster it belongs to. Valid iff every output edge stays within a cluster
// or joins clusters of adjacent input nodes.
struct ClusterGraph {
    LabeledGraph output;
    std::map<Node, Node> cluster_map;
};

bool validate_cluster_map(const ClusterGraph& cg, const LabeledGraph& input);

// Two copies per node, four cross edges per input edge, plus the intra-pair
// edge exactly when the label differs from "1" (which makes degrees odd).
ClusterGraph reduce_allselected_to_eulerian(const LabeledGraph& g, const IdentifierAssignment& ids);

// Euler-tour gadget: one cycle of length max{3, 2 deg} per node with to/from
// ports per neighbor, plus a degree-1 pendant when the label differs from "1".
ClusterGraph reduce_allselected_to_hamiltonian(const LabeledGraph& g,
                                               const IdentifierAssignment& ids);

// Doubled Euler-tour gadget: top and bottom cycles of length 2 deg + 3; the
// two layers are bridged twice at a node iff its label differs from "1".
ClusterGraph reduce_notallselected_to_hamiltonian(const LabeledGraph& g,
                                                  const IdentifierAssignment& ids);

// Per-node Tseytin transformation; auxiliary variables are prefixed with the
// node's identifier so only original variables are shared across nodes.
LabeledGraph reduce_satgraph_to_3satgraph(const LabeledGraph& bg, const IdentifierAssignment& ids);

// Classical formula gadget per node; connector gadgets force equal colors on
// false/ground and on positive literals of shared variables across edges.
ClusterGraph reduce_3satgraph_to_3colorable(const LabeledGraph& bg,
                                            const IdentifierAssignment& ids);

// Generalized Cook-Levin: a Sigma(1) sentence becomes a Boolean graph whose
// node formulas assert the first-order body at the node's own elements, with
// structure atoms constant-folded and set atoms named by identifiers.
LabeledGraph cook_levin_translate(const FormulaPtr& f, const LabeledGraph& g,
                                  const IdentifierAssignment& ids);

using Reduction = std::function<ClusterGraph(const LabeledGraph&, const IdentifierAssignment&)>;

// Runs the target decider on the reduction's output; each input node accepts
// iff all nodes of its cluster accept.
bool simulate_through_reduction(const NodeProgram& decider, const Reduction& reduction,
                                const LabeledGraph& g, const IdentifierAssignment& ids,
                                const Limits& limits = {});

} // namespace lso
