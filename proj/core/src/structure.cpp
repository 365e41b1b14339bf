#include "lso/structure.hpp"

#include <algorithm>

namespace lso {

std::string Elem::str() const {
    if (bit == 0) return name;
    return "<" + name + "," + std::to_string(bit) + ">";
}

bool RelationalStructure::has_element(const Elem& e) const {
    return std::binary_search(domain.begin(), domain.end(), e);
}

bool RelationalStructure::in_bit_set(int i, const Elem& e) const {
    if (i < 1 || static_cast<std::size_t>(i) > bit_sets.size()) return false;
    return bit_sets[i - 1].count(e) > 0;
}

bool RelationalStructure::linked(int i, const Elem& a, const Elem& b) const {
    if (i < 1 || static_cast<std::size_t>(i) > link_rels.size()) return false;
    return link_rels[i - 1].count({a, b}) > 0;
}

std::vector<Elem> RelationalStructure::adjacent(const Elem& e) const {
    if (frozen_) {
        auto it = adj_.find(e);
        return it == adj_.end() ? std::vector<Elem>{} : it->second;
    }
    std::set<Elem> out;
    for (const auto& rel : link_rels)
        for (const auto& [a, b] : rel) {
            if (a == e) out.insert(b);
            if (b == e) out.insert(a);
        }
    return {out.begin(), out.end()};
}

void RelationalStructure::freeze() {
    std::sort(domain.begin(), domain.end());
    std::map<Elem, std::set<Elem>> adj;
    for (const auto& rel : link_rels)
        for (const auto& [a, b] : rel) {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    adj_.clear();
    for (auto& [e, s] : adj) adj_[e] = {s.begin(), s.end()};
    frozen_ = true;
}

RelationalStructure structural_representation(const LabeledGraph& g) {
    RelationalStructure s;
    s.bit_sets.resize(1);
    s.link_rels.resize(2);
    for (const auto& v : g.nodes) {
        s.domain.push_back({v, 0});
        const std::string& lab = g.label(v);
        for (std::size_t i = 1; i <= lab.size(); ++i) {
            Elem bit{v, static_cast<int>(i)};
            s.domain.push_back(bit);
            s.link_rels[1].insert({Elem{v, 0}, bit}); // ownership
            if (i > 1) s.link_rels[0].insert({Elem{v, static_cast<int>(i) - 1}, bit});
            if (lab[i - 1] == '1') s.bit_sets[0].insert(bit);
        }
    }
    for (const auto& e : g.edges) {
        s.link_rels[0].insert({Elem{e.first, 0}, Elem{e.second, 0}});
        s.link_rels[0].insert({Elem{e.second, 0}, Elem{e.first, 0}});
    }
    s.freeze();
    return s;
}

RelationalStructure structural_neighborhood(const LabeledGraph& g, const Node& v, int r) {
    return structural_representation(neighborhood(g, v, r));
}

} // namespace lso
