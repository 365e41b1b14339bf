#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lso/error.hpp"

namespace lso {

using Node = std::string;
using Edge = std::pair<Node, Node>; // stored with first < second

// Finite, simple, connected graph with a bit-string label per node.
struct LabeledGraph {
    std::vector<Node> nodes; // insertion order; duplicates rejected at build time
    std::set<Edge> edges;
    std::map<Node, std::string> labels; // missing entry = empty label

    bool has_node(const Node& v) const;
    bool has_edge(const Node& a, const Node& b) const;
    std::string label(const Node& v) const;
    std::size_t degree(const Node& v) const;
    std::vector<Node> neighbors(const Node& v) const; // sorted by name

    void add_node(const Node& v, const std::string& label = "");
    void add_edge(const Node& a, const Node& b);
};

Edge make_edge(const Node& a, const Node& b);

// Throws Error with code Empty/SelfLoop/DuplicateEdge/Disconnected/UnknownNode.
void validate_graph(const LabeledGraph& g);

// Hop distances from v (unreachable nodes absent).
std::map<Node, int> distances_from(const LabeledGraph& g, const Node& v);

// Induced subgraph on all nodes at distance <= r from v.
LabeledGraph neighborhood(const LabeledGraph& g, const Node& v, int r);

// Identifier order: proper prefixes come first, otherwise the first
// differing position decides (0 < 1).
int id_compare(const std::string& a, const std::string& b);

struct IdLess {
    bool operator()(const std::string& a, const std::string& b) const {
        return id_compare(a, b) < 0;
    }
};

using IdentifierAssignment = std::map<Node, std::string>;
using CertificateAssignment = std::map<Node, std::string>;

bool check_locally_unique(const LabeledGraph& g, const IdentifierAssignment& ids, int rho);

// Seeded greedy assignment that is rho-locally-unique and small(rho):
// |id(v)| <= ceil(log2 |N^{2 rho}(v)|).
IdentifierAssignment generate_small_ids(const LabeledGraph& g, int rho, std::uint64_t seed);

// Nonnegative-integer coefficient list, p[i] is the coefficient of x^i.
using Polynomial = std::vector<std::uint64_t>;

std::uint64_t eval_polynomial(const Polynomial& p, std::uint64_t x);

// p evaluated at sum over u in N^r(v) of 1 + |label(u)| + |id(u)|.
std::uint64_t certificate_bound(const LabeledGraph& g, const IdentifierAssignment& ids,
                                const Node& v, int r, const Polynomial& p);

// Per-node concatenation c1 # c2 # ... # cl of one certificate per level.
std::string join_certificates(const std::vector<std::string>& per_level);

// Canonical form under node renaming: lexicographically minimal
// (adjacency bits, label vector) over all node permutations.
// Usable for graphs up to ~8 nodes.
std::string canonical_form(const LabeledGraph& g);

// Isomorphism up to node renaming (edge- and label-preserving).
bool isomorphic(const LabeledGraph& a, const LabeledGraph& b);

// All connected labeled graphs with <= max_nodes nodes and labels drawn from
// the alphabet, each exactly once up to renaming, in a deterministic order.
// Nodes are named n0, n1, ...
std::vector<LabeledGraph> enumerate_graphs(int max_nodes,
                                           const std::vector<std::string>& label_alphabet);

// .lg parser / printer. Returns the graph plus any ids given in the file.
struct ParsedGraph {
    LabeledGraph graph;
    IdentifierAssignment ids; // only nodes that carried id=...
};

ParsedGraph parse_lg(const std::string& text);
ParsedGraph load_lg(const std::string& path);
std::string format_lg(const LabeledGraph& g, const IdentifierAssignment* ids = nullptr);

} // namespace lso
