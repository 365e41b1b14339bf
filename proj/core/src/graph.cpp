#include "lso/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace lso {

bool LabeledGraph::has_node(const Node& v) const {
    return labels.count(v) > 0;
}

bool LabeledGraph::has_edge(const Node& a, const Node& b) const {
    return edges.count(make_edge(a, b)) > 0;
}

std::string LabeledGraph::label(const Node& v) const {
    auto it = labels.find(v);
    if (it == labels.end()) throw Error("UnknownNode", "no node named '" + v + "'");
    return it->second;
}

std::size_t LabeledGraph::degree(const Node& v) const {
    std::size_t d = 0;
    for (const auto& e : edges)
        if (e.first == v || e.second == v) ++d;
    return d;
}

std::vector<Node> LabeledGraph::neighbors(const Node& v) const {
    std::vector<Node> out;
    for (const auto& e : edges) {
        if (e.first == v) out.push_back(e.second);
        else if (e.second == v) out.push_back(e.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void LabeledGraph::add_node(const Node& v, const std::string& label) {
    if (has_node(v)) throw Error("DuplicateNode", "node '" + v + "' declared twice");
    nodes.push_back(v);
    labels[v] = label;
}

void LabeledGraph::add_edge(const Node& a, const Node& b) {
    if (a == b) throw Error("SelfLoop", "self-loop at '" + a + "'");
    if (!has_node(a)) throw Error("UnknownNode", "edge endpoint '" + a + "' undeclared");
    if (!has_node(b)) throw Error("UnknownNode", "edge endpoint '" + b + "' undeclared");
    Edge e = make_edge(a, b);
    if (edges.count(e)) throw Error("DuplicateEdge", "edge {" + a + "," + b + "} declared twice");
    edges.insert(e);
}

Edge make_edge(const Node& a, const Node& b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

void validate_graph(const LabeledGraph& g) {
    if (g.nodes.empty()) throw Error("Empty", "graph has no nodes");
    for (const auto& e : g.edges) {
        if (e.first == e.second) throw Error("SelfLoop", "self-loop at '" + e.first + "'");
        if (!g.has_node(e.first) || !g.has_node(e.second))
            throw Error("UnknownNode", "edge endpoint undeclared");
    }
    auto dist = distances_from(g, g.nodes.front());
    for (const auto& v : g.nodes)
        if (!dist.count(v))
            throw Error("Disconnected", "node '" + v + "' unreachable from '" + g.nodes.front() + "'");
}

std::map<Node, int> distances_from(const LabeledGraph& g, const Node& v) {
    if (!g.has_node(v)) throw Error("UnknownNode", "no node named '" + v + "'");
    std::map<Node, int> dist{{v, 0}};
    std::deque<Node> queue{v};
    while (!queue.empty()) {
        Node u = queue.front();
        queue.pop_front();
        for (const auto& w : g.neighbors(u))
            if (!dist.count(w)) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

LabeledGraph neighborhood(const LabeledGraph& g, const Node& v, int r) {
    auto dist = distances_from(g, v);
    LabeledGraph out;
    for (const auto& u : g.nodes) {
        auto it = dist.find(u);
        if (it != dist.end() && it->second <= r) out.add_node(u, g.label(u));
    }
    for (const auto& e : g.edges)
        if (out.has_node(e.first) && out.has_node(e.second)) out.edges.insert(e);
    return out;
}

int id_compare(const std::string& a, const std::string& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1; // proper prefix first
}

bool check_locally_unique(const LabeledGraph& g, const IdentifierAssignment& ids, int rho) {
    for (const auto& v : g.nodes)
        if (!ids.count(v)) throw Error("MissingId", "no identifier for node '" + v + "'");
    for (const auto& v : g.nodes) {
        auto dist = distances_from(g, v);
        for (const auto& [u, d] : dist)
            if (u != v && d <= 2 * rho && ids.at(u) == ids.at(v)) return false;
    }
    return true;
}

static int small_id_bound(const LabeledGraph& g, const Node& v, int rho) {
    auto dist = distances_from(g, v);
    std::size_t count = 0;
    for (const auto& [u, d] : dist)
        if (d <= 2 * rho) ++count;
    int bound = 0;
    while ((std::size_t{1} << bound) < count) ++bound; // ceil(log2 count)
    return bound;
}

static std::vector<std::string> bit_strings_up_to(int max_len) {
    std::vector<std::string> out{""};
    std::vector<std::string> layer{""};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer) {
            next.push_back(s + "0");
            next.push_back(s + "1");
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

IdentifierAssignment generate_small_ids(const LabeledGraph& g, int rho, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Node> order = g.nodes;
    std::shuffle(order.begin(), order.end(), rng);

    IdentifierAssignment ids;
    for (const auto& v : order) {
        int bound = small_id_bound(g, v, rho);
        auto candidates = bit_strings_up_to(bound);
        std::shuffle(candidates.begin(), candidates.end(), rng);
        auto dist = distances_from(g, v);
        std::set<std::string> taken;
        for (const auto& [u, d] : dist)
            if (u != v && d <= 2 * rho && ids.count(u)) taken.insert(ids.at(u));
        bool placed = false;
        for (const auto& c : candidates)
            if (!taken.count(c)) {
                ids[v] = c;
                placed = true;
                break;
            }
        if (!placed) throw Error("Internal", "greedy id generation ran out of candidates");
    }
    return ids;
}

std::uint64_t eval_polynomial(const Polynomial& p, std::uint64_t x) {
    std::uint64_t acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::uint64_t certificate_bound(const LabeledGraph& g, const IdentifierAssignment& ids,
                                const Node& v, int r, const Polynomial& p) {
    auto nbh = neighborhood(g, v, r);
    std::uint64_t total = 0;
    for (const auto& u : nbh.nodes) {
        std::uint64_t id_len = ids.count(u) ? ids.at(u).size() : 0;
        total += 1 + g.label(u).size() + id_len;
    }
    return eval_polynomial(p, total);
}

std::string join_certificates(const std::vector<std::string>& per_level) {
    std::string out;
    for (std::size_t i = 0; i < per_level.size(); ++i) {
        if (i) out += '#';
        out += per_level[i];
    }
    return out;
}

// Encode (adjacency upper triangle, labels) under a fixed node order.
static std::string encode_under_order(const LabeledGraph& g, const std::vector<Node>& order) {
    std::string s;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            s += g.has_edge(order[i], order[j]) ? '1' : '0';
    for (const auto& v : order) {
        s += '|';
        s += g.label(v);
    }
    return s;
}

std::string canonical_form(const LabeledGraph& g) {
    std::vector<Node> order = g.nodes;
    std::sort(order.begin(), order.end());
    std::string best;
    bool first = true;
    do {
        std::string s = encode_under_order(g, order);
        if (first || s < best) {
            best = s;
            first = false;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

bool isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    return canonical_form(a) == canonical_form(b);
}

std::vector<LabeledGraph> enumerate_graphs(int max_nodes,
                                           const std::vector<std::string>& label_alphabet) {
    if (max_nodes < 1) throw Error("BadArgument", "max_nodes must be >= 1");
    if (label_alphabet.empty()) throw Error("BadArgument", "label alphabet must be nonempty");
    std::vector<LabeledGraph> out;
    std::set<std::string> seen;
    for (int n = 1; n <= max_nodes; ++n) {
        std::vector<Node> names;
        for (int i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
        int num_slots = n * (n - 1) / 2;
        std::uint64_t num_labelings = 1;
        for (int i = 0; i < n; ++i) num_labelings *= label_alphabet.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << num_slots); ++mask) {
            LabeledGraph base;
            for (const auto& v : names) base.add_node(v);
            int slot = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++slot)
                    if (mask >> slot & 1) base.edges.insert(make_edge(names[i], names[j]));
            if (distances_from(base, names[0]).size() != static_cast<std::size_t>(n)) continue;
            for (std::uint64_t lab = 0; lab < num_labelings; ++lab) {
                LabeledGraph g = base;
                std::uint64_t rest = lab;
                for (int i = 0; i < n; ++i) {
                    g.labels[names[i]] = label_alphabet[rest % label_alphabet.size()];
                    rest /= label_alphabet.size();
                }
                std::string canon = canonical_form(g);
                if (seen.insert(std::to_string(n) + ":" + canon).second) out.push_back(g);
            }
        }
    }
    return out;
}

static bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

static bool valid_bits(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

ParsedGraph parse_lg(const std::string& text) {
    ParsedGraph out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> Error {
        return Error("ParseError", "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "node") {
            std::string name;
            if (!(ls >> name) || !valid_name(name)) throw fail("expected node name");
            std::string label, id;
            bool has_id = false;
            std::string attr;
            while (ls >> attr) {
                if (attr.rfind("label=", 0) == 0) label = attr.substr(6);
                else if (attr.rfind("id=", 0) == 0) {
                    id = attr.substr(3);
                    has_id = true;
                } else throw fail("unknown attribute '" + attr + "'");
            }
            // Labels are bit strings for plain graphs but may be Boolean
            // formulas for Boolean graphs, so only ids are checked here.
            if (!valid_bits(id)) throw fail("ids must be over {0,1}");
            try {
                out.graph.add_node(name, label);
            } catch (const Error& e) {
                throw fail(e.what());
            }
            if (has_id) out.ids[name] = id;
        } else if (word == "edge") {
            std::string a, b;
            if (!(ls >> a >> b)) throw fail("expected two endpoints");
            std::string extra;
            if (ls >> extra) throw fail("trailing tokens after edge");
            try {
                out.graph.add_edge(a, b);
            } catch (const Error& e) {
                throw fail(e.what());
            }
        } else {
            throw fail("unknown directive '" + word + "'");
        }
    }
    return out;
}

ParsedGraph load_lg(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_lg(buf.str());
}

std::string format_lg(const LabeledGraph& g, const IdentifierAssignment* ids) {
    std::ostringstream out;
    for (const auto& v : g.nodes) {
        out << "node " << v;
        if (!g.label(v).empty()) out << " label=" << g.label(v);
        if (ids && ids->count(v) && !ids->at(v).empty()) out << " id=" << ids->at(v);
        out << "\n";
    }
    for (const auto& e : g.edges) out << "edge " << e.first << " " << e.second << "\n";
    return out.str();
}

} // namespace lso
