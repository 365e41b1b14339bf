#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lso/graph.hpp"

namespace lso {

// Element of a relational structure. For graph structures, bit == 0 names the
// node element itself and bit >= 1 names the node's bit element <v, bit>.
// Picture structures reuse the type with name "i,j".
struct Elem {
    std::string name;
    int bit = 0;

    auto operator<=>(const Elem&) const = default;
    std::string str() const;
};

// Finite structure with signature (m, n): m unary "bit" sets, n binary
// link relations.
struct RelationalStructure {
    std::vector<Elem> domain;
    std::vector<std::set<Elem>> bit_sets;
    std::vector<std::set<std::pair<Elem, Elem>>> link_rels;

    std::size_t cardinality() const { return domain.size(); }
    bool has_element(const Elem& e) const;
    bool in_bit_set(int i, const Elem& e) const;     // i is 1-based
    bool linked(int i, const Elem& a, const Elem& b) const; // i is 1-based

    // Elements adjacent to e: either direction, any link relation.
    std::vector<Elem> adjacent(const Elem& e) const;

    void freeze(); // precompute the adjacency index; call after construction
private:
    std::map<Elem, std::vector<Elem>> adj_;
    bool frozen_ = false;
};

// S(G): one element per node and per labeling bit; link 1 = edges (symmetric)
// plus bit-successor pairs; link 2 = node-to-bit ownership; bit set 1 = bits
// of value 1.
RelationalStructure structural_representation(const LabeledGraph& g);

// S(N^r(v)).
RelationalStructure structural_neighborhood(const LabeledGraph& g, const Node& v, int r);

} // namespace lso
