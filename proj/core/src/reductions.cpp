#include "lso/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

#include "lso/boolexpr.hpp"
#include "lso/eval.hpp"
#include "lso/structure.hpp"

namespace lso {

namespace {

void require_local_ids(const LabeledGraph& g, const IdentifierAssignment& ids, int rho) {
    for (const auto& v : g.nodes)
        if (!ids.count(v)) throw Error("MissingId", "node '" + v + "' has no identifier");
    if (!check_locally_unique(g, ids, rho))
        throw Error("NotLocallyUnique",
                    "identifier assignment is not " + std::to_string(rho) + "-locally-unique");
}

std::vector<Node> neighbors_by_id(const LabeledGraph& g, const IdentifierAssignment& ids,
                                  const Node& v) {
    auto nb = g.neighbors(v);
    std::sort(nb.begin(), nb.end(),
              [&](const Node& a, const Node& b) { return id_compare(ids.at(a), ids.at(b)) < 0; });
    return nb;
}

void add_cycle(LabeledGraph& g, const std::vector<Node>& cycle) {
    for (std::size_t i = 0; i < cycle.size(); ++i)
        g.add_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
}

} // namespace

bool validate_cluster_map(const ClusterGraph& cg, const LabeledGraph& input) {
    for (const auto& w : cg.output.nodes) {
        auto it = cg.cluster_map.find(w);
        if (it == cg.cluster_map.end())
            throw Error("UnknownNode", "output node '" + w + "' has no cluster");
        if (!input.has_node(it->second))
            throw Error("UnknownNode", "cluster '" + it->second + "' is not an input node");
    }
    for (const auto& [a, b] : cg.output.edges) {
        const Node& cu = cg.cluster_map.at(a);
        const Node& cv = cg.cluster_map.at(b);
        if (cu != cv && !input.has_edge(cu, cv)) return false;
    }
    return true;
}

ClusterGraph reduce_allselected_to_eulerian(const LabeledGraph& g,
                                            const IdentifierAssignment& ids) {
    (void)ids; // the construction is identifier-independent
    ClusterGraph cg;
    if (g.nodes.size() == 1) {
        // Special case: a lone copy is trivially Eulerian, a lone edge is not.
        const Node& u = g.nodes[0];
        cg.output.add_node(u + "_c0");
        cg.cluster_map[u + "_c0"] = u;
        if (g.label(u) != "1") {
            cg.output.add_node(u + "_c1");
            cg.cluster_map[u + "_c1"] = u;
            cg.output.add_edge(u + "_c0", u + "_c1");
        }
        return cg;
    }
    for (const auto& u : g.nodes) {
        cg.output.add_node(u + "_c0");
        cg.output.add_node(u + "_c1");
        cg.cluster_map[u + "_c0"] = u;
        cg.cluster_map[u + "_c1"] = u;
        if (g.label(u) != "1") cg.output.add_edge(u + "_c0", u + "_c1");
    }
    for (const auto& [u, v] : g.edges)
        for (const char* a : {"_c0", "_c1"})
            for (const char* b : {"_c0", "_c1"}) cg.output.add_edge(u + a, v + b);
    return cg;
}

ClusterGraph reduce_allselected_to_hamiltonian(const LabeledGraph& g,
                                               const IdentifierAssignment& ids) {
    require_local_ids(g, ids, 1);
    ClusterGraph cg;
    for (const auto& u : g.nodes) {
        auto nb = neighbors_by_id(g, ids, u);
        std::vector<Node> cycle;
        for (const auto& w : nb) {
            cycle.push_back(u + "_to_" + w);
            cycle.push_back(u + "_from_" + w);
        }
        // pad a too-short Euler tour up to a cycle of length 3
        for (int i = 1; cycle.size() < 3; ++i) cycle.push_back(u + "_d" + std::to_string(i));
        for (const auto& w : cycle) {
            cg.output.add_node(w);
            cg.cluster_map[w] = u;
        }
        add_cycle(cg.output, cycle);
        if (g.label(u) != "1") {
            cg.output.add_node(u + "_bad");
            cg.cluster_map[u + "_bad"] = u;
            cg.output.add_edge(u + "_bad", cycle[0]);
        }
    }
    for (const auto& [u, v] : g.edges) {
        cg.output.add_edge(u + "_to_" + v, v + "_from_" + u);
        cg.output.add_edge(u + "_from_" + v, v + "_to_" + u);
    }
    return cg;
}

ClusterGraph reduce_notallselected_to_hamiltonian(const LabeledGraph& g,
                                                  const IdentifierAssignment& ids) {
    require_local_ids(g, ids, 1);
    ClusterGraph cg;
    for (const auto& u : g.nodes) {
        auto nb = neighbors_by_id(g, ids, u);
        std::vector<Node> top, bot;
        for (const auto& w : nb) {
            top.push_back(u + "_top_to_" + w);
            top.push_back(u + "_top_from_" + w);
            bot.push_back(u + "_bot_to_" + w);
            bot.push_back(u + "_bot_from_" + w);
        }
        for (int i = 1; i <= 3; ++i) {
            top.push_back(u + "_top_d" + std::to_string(i));
            bot.push_back(u + "_bot_u" + std::to_string(i));
        }
        for (const auto& layer : {top, bot}) {
            for (const auto& w : layer) {
                cg.output.add_node(w);
                cg.cluster_map[w] = u;
            }
            add_cycle(cg.output, layer);
        }
        cg.output.add_edge(u + "_top_d2", u + "_bot_u2");
        if (g.label(u) != "1") cg.output.add_edge(u + "_top_d1", u + "_bot_u1");
    }
    for (const auto& [u, v] : g.edges)
        for (const char* layer : {"_top_", "_bot_"}) {
            cg.output.add_edge(u + layer + ("to_" + v), v + layer + ("from_" + u));
            cg.output.add_edge(u + layer + ("from_" + v), v + layer + ("to_" + u));
        }
    return cg;
}

namespace {

// Clause splitting for formulas that are already conjunctions of literal
// disjunctions; long clauses are chained with fresh auxiliaries. Returns
// false when the input is not in clausal shape.
bool try_clausal_3cnf(const BoolExprPtr& e, const std::string& prefix, Cnf& out) {
    Cnf raw;
    try {
        raw = parse_3cnf(format_boolexpr(e));
    } catch (const Error& err) {
        if (err.code != "Not3CNF") throw;
        // retry without the three-literal bound by collecting clauses manually
        std::function<bool(const BoolExprPtr&, Clause&)> lits = [&](const BoolExprPtr& d,
                                                                    Clause& c) {
            if (d->kind == BoolExpr::Or) return lits(d->lhs, c) && lits(d->rhs, c);
            if (d->kind == BoolExpr::Var) {
                c.push_back({d->var, true});
                return true;
            }
            if (d->kind == BoolExpr::Not && d->lhs->kind == BoolExpr::Var) {
                c.push_back({d->lhs->var, false});
                return true;
            }
            return false;
        };
        std::function<bool(const BoolExprPtr&)> conj = [&](const BoolExprPtr& x) {
            if (x->kind == BoolExpr::And) return conj(x->lhs) && conj(x->rhs);
            Clause c;
            if (!lits(x, c)) return false;
            raw.push_back(c);
            return true;
        };
        raw.clear();
        if (!conj(e)) return false;
    }
    int counter = 0;
    for (auto clause : raw) {
        while (clause.size() > 3) {
            Literal aux{prefix + "s" + std::to_string(counter++), true};
            out.push_back({clause[0], clause[1], aux});
            Clause rest{{aux.var, false}};
            rest.insert(rest.end(), clause.begin() + 2, clause.end());
            clause = rest;
        }
        out.push_back(clause);
    }
    return true;
}

} // namespace

LabeledGraph reduce_satgraph_to_3satgraph(const LabeledGraph& bg, const IdentifierAssignment& ids) {
    require_local_ids(bg, ids, 1);
    LabeledGraph out;
    out.edges = bg.edges;
    for (const auto& u : bg.nodes) {
        auto expr = parse_boolexpr(bg.label(u));
        std::string prefix = "aux" + ids.at(u) + "_";
        Cnf cnf;
        if (!try_clausal_3cnf(expr, prefix, cnf)) cnf = tseytin(expr, prefix);
        out.add_node(u, format_cnf(cnf));
    }
    out.nodes = bg.nodes;
    return out;
}

ClusterGraph reduce_3satgraph_to_3colorable(const LabeledGraph& bg,
                                            const IdentifierAssignment& ids) {
    require_local_ids(bg, ids, 1);
    ClusterGraph cg;
    auto add = [&](const Node& w, const Node& cluster) {
        if (!cg.output.has_node(w)) {
            cg.output.add_node(w);
            cg.cluster_map[w] = cluster;
        }
    };
    std::map<Node, std::set<std::string>> vars_of;
    for (const auto& u : bg.nodes) {
        Cnf cnf = parse_3cnf(bg.label(u));
        add(u + "_false", u);
        add(u + "_ground", u);
        cg.output.add_edge(u + "_false", u + "_ground");
        auto lit_node = [&](const Literal& l) {
            return u + (l.positive ? "_lit_" : "_nlit_") + l.var;
        };
        for (const auto& clause : cnf)
            for (const auto& l : clause)
                if (vars_of[u].insert(l.var).second) {
                    add(u + "_lit_" + l.var, u);
                    add(u + "_nlit_" + l.var, u);
                    cg.output.add_edge(u + "_ground", u + "_lit_" + l.var);
                    cg.output.add_edge(u + "_ground", u + "_nlit_" + l.var);
                    cg.output.add_edge(u + "_lit_" + l.var, u + "_nlit_" + l.var);
                }
        for (std::size_t k = 0; k < cnf.size(); ++k) {
            Clause clause = cnf[k];
            while (clause.size() < 3) clause.push_back(clause.back()); // pad to 3 literals
            std::vector<Node> c;
            for (int j = 1; j <= 6; ++j) {
                c.push_back(u + "_cl" + std::to_string(k + 1) + "_c" + std::to_string(j));
                add(c.back(), u);
            }
            cg.output.add_edge(c[0], c[1]);
            cg.output.add_edge(c[0], c[2]);
            cg.output.add_edge(c[1], c[2]);
            cg.output.add_edge(c[2], c[3]);
            cg.output.add_edge(c[3], c[4]);
            cg.output.add_edge(c[3], c[5]);
            cg.output.add_edge(c[4], c[5]);
            cg.output.add_edge(lit_node(clause[0]), c[0]);
            cg.output.add_edge(lit_node(clause[1]), c[1]);
            cg.output.add_edge(lit_node(clause[2]), c[4]);
            cg.output.add_edge(c[5], u + "_false");
            cg.output.add_edge(c[5], u + "_ground");
        }
    }
    // connector gadget: two fresh middle nodes, one per cluster, forming a
    // K4-minus-edge with the tied endpoints
    auto connect = [&](const Node& a, const Node& cu, const Node& b, const Node& cv,
                       const std::string& tag) {
        Node m1 = cu + "_cn_" + cv + "_" + tag + "_1";
        Node m2 = cu + "_cn_" + cv + "_" + tag + "_2";
        add(m1, cu);
        add(m2, cv);
        cg.output.add_edge(a, m1);
        cg.output.add_edge(a, m2);
        cg.output.add_edge(b, m1);
        cg.output.add_edge(b, m2);
        cg.output.add_edge(m1, m2);
    };
    for (const auto& [u, v] : bg.edges) {
        connect(u + "_false", u, v + "_false", v, "false");
        connect(u + "_ground", u, v + "_ground", v, "ground");
        for (const auto& x : vars_of[u])
            if (vars_of[v].count(x)) connect(u + "_lit_" + x, u, v + "_lit_" + x, v, "v_" + x);
    }
    return cg;
}

namespace {

// Boolean-expression folding so constant atoms disappear from the output.
BoolExprPtr b_not(const BoolExprPtr& a) {
    if (a->kind == BoolExpr::Const) return BoolExpr::mk_const(!a->value);
    return BoolExpr::mk_not(a);
}
BoolExprPtr b_and(const BoolExprPtr& a, const BoolExprPtr& b) {
    if (a->kind == BoolExpr::Const) return a->value ? b : a;
    if (b->kind == BoolExpr::Const) return b->value ? a : b;
    return BoolExpr::mk_and(a, b);
}
BoolExprPtr b_or(const BoolExprPtr& a, const BoolExprPtr& b) {
    if (a->kind == BoolExpr::Const) return a->value ? a : b;
    if (b->kind == BoolExpr::Const) return b->value ? b : a;
    return BoolExpr::mk_or(a, b);
}

// Mirrors the evaluator's quantifier ranges but produces a Boolean formula
// with set atoms as variables named after identifiers.
struct ClTranslator {
    const RelationalStructure& s;
    const IdentifierAssignment& ids;
    std::vector<Elem> domain;
    std::map<Elem, int> index;
    std::vector<std::vector<int>> adj;
    std::vector<char> is_node_elem;

    ClTranslator(const RelationalStructure& st, const IdentifierAssignment& id_map)
        : s(st), ids(id_map) {
        domain = s.domain;
        std::sort(domain.begin(), domain.end());
        for (std::size_t i = 0; i < domain.size(); ++i) index[domain[i]] = static_cast<int>(i);
        adj.resize(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i)
            for (const Elem& e : s.adjacent(domain[i])) adj[i].push_back(index.at(e));
        is_node_elem.resize(domain.size(), 1);
        for (std::size_t i = 0; i < domain.size(); ++i)
            for (int j : adj[i])
                if (j != static_cast<int>(i) && s.linked(2, domain[j], domain[i]))
                    is_node_elem[i] = 0;
    }

    std::vector<int> within(int x, int r) const {
        std::vector<int> dist(domain.size(), -1), queue{x}, out{x};
        dist[x] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int cur = queue[qi];
            if (dist[cur] == r) continue;
            for (int nb : adj[cur])
                if (dist[nb] < 0) {
                    dist[nb] = dist[cur] + 1;
                    out.push_back(nb);
                    queue.push_back(nb);
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string elem_ref(const Elem& e) const {
        return "i" + ids.at(e.name) + "b" + std::to_string(e.bit);
    }

    std::string atom_var(const Formula* f, const std::map<std::string, int>& env) const {
        std::string name;
        for (char c : f->sovar) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        for (const auto& arg : f->args) name += "_" + elem_ref(domain[env.at(arg)]);
        return name;
    }

    BoolExprPtr translate(const Formula* f, std::map<std::string, int>& env) {
        switch (f->kind) {
        case Formula::True: return BoolExpr::mk_const(true);
        case Formula::False: return BoolExpr::mk_const(false);
        case Formula::Bit: return BoolExpr::mk_const(s.in_bit_set(f->index, domain[env.at(f->var)]));
        case Formula::Link:
            return BoolExpr::mk_const(
                s.linked(f->index, domain[env.at(f->var)], domain[env.at(f->var2)]));
        case Formula::Eq: return BoolExpr::mk_const(env.at(f->var) == env.at(f->var2));
        case Formula::SOAtom: return BoolExpr::mk_var(atom_var(f, env));
        case Formula::Not: return b_not(translate(f->lhs.get(), env));
        case Formula::Or:
            return b_or(translate(f->lhs.get(), env), translate(f->rhs.get(), env));
        case Formula::And:
            return b_and(translate(f->lhs.get(), env), translate(f->rhs.get(), env));
        case Formula::Implies:
            return b_or(b_not(translate(f->lhs.get(), env)), translate(f->rhs.get(), env));
        case Formula::Iff: {
            auto a = translate(f->lhs.get(), env), b = translate(f->rhs.get(), env);
            return b_or(b_and(a, b), b_and(b_not(a), b_not(b)));
        }
        case Formula::FOQuant: {
            std::vector<int> range;
            if (f->var2.empty()) {
                for (std::size_t i = 0; i < domain.size(); ++i) range.push_back(static_cast<int>(i));
            } else {
                int x = env.at(f->var2);
                if (f->radius >= 0) {
                    range = within(x, f->radius);
                } else {
                    for (int nb : adj[x])
                        if (nb != x) range.push_back(nb);
                }
            }
            auto saved = env.find(f->var) != env.end() ? std::optional<int>(env[f->var])
                                                       : std::nullopt;
            BoolExprPtr acc = BoolExpr::mk_const(f->universal);
            for (int cand : range) {
                if (f->node_restricted && !is_node_elem[cand]) continue;
                env[f->var] = cand;
                auto t = translate(f->lhs.get(), env);
                acc = f->universal ? b_and(acc, t) : b_or(acc, t);
            }
            if (saved)
                env[f->var] = *saved;
            else
                env.erase(f->var);
            return acc;
        }
        case Formula::SOQuant: break;
        }
        throw Error("NotSigma1", "second-order quantifier inside the first-order body");
    }
};

} // namespace

LabeledGraph cook_levin_translate(const FormulaPtr& f, const LabeledGraph& g,
                                  const IdentifierAssignment& ids) {
    FragmentTag tag = classify(f);
    if (tag.kind != FragmentTag::Sigma || tag.level != 1)
        throw Error("NotSigma1", "expected a Sigma(1) sentence, got " + tag.str());

    // peel the existential second-order prefix and the leading universal
    const Formula* rest = f.get();
    while (rest->kind == Formula::SOQuant && !rest->universal) rest = rest->lhs.get();
    if (rest->kind != Formula::FOQuant || !rest->universal || !rest->var2.empty())
        throw Error("NotSigma1", "expected an unbounded universal after the prefix");
    FormulaPtr body(f, rest->lhs.get()); // aliasing keeps the sentence alive
    if (rest->node_restricted) body = Formula::mk_implies(is_node(rest->var), body);
    const std::string& x = rest->var;

    int r = nesting_radius(body);
    require_local_ids(g, ids, r + 1);

    LabeledGraph out;
    out.edges = g.edges;
    if (g.nodes.size() == 1) {
        // Special case: no variables are shared, so the verdict is hard-coded.
        bool v = evaluate(structural_representation(g), f);
        for (const auto& u : g.nodes) out.add_node(u, v ? "1" : "0");
        return out;
    }

    RelationalStructure s = structural_representation(g);
    ClTranslator tr(s, ids);
    for (const auto& u : g.nodes) {
        BoolExprPtr conj = BoolExpr::mk_const(true);
        std::vector<Elem> owned{{u, 0}};
        for (std::size_t i = 1; i <= g.label(u).size(); ++i)
            owned.push_back({u, static_cast<int>(i)});
        for (const Elem& e : owned) {
            std::map<std::string, int> env{{x, tr.index.at(e)}};
            conj = b_and(conj, tr.translate(body.get(), env));
        }
        out.add_node(u, format_boolexpr(conj));
    }
    out.nodes = g.nodes;
    return out;
}

bool simulate_through_reduction(const NodeProgram& decider, const Reduction& reduction,
                                const LabeledGraph& g, const IdentifierAssignment& ids,
                                const Limits& limits) {
    ClusterGraph cg = reduction(g, ids);
    validate_graph(cg.output);
    if (!validate_cluster_map(cg, g))
        throw Error("InvalidClusterMap", "reduction output violates the cluster-map condition");
    IdentifierAssignment out_ids = generate_small_ids(cg.output, 1, 0);
    ExecutionResult res = execute(decider, cg.output, out_ids, {}, limits);
    std::map<Node, bool> cluster_ok;
    for (const auto& u : g.nodes) cluster_ok[u] = true; // empty cluster accepts
    for (const auto& [w, verdict] : res.verdicts) {
        const Node& u = cg.cluster_map.at(w);
        cluster_ok[u] = cluster_ok[u] && verdict;
    }
    return std::all_of(cluster_ok.begin(), cluster_ok.end(),
                       [](const auto& kv) { return kv.second; });
}

} // namespace lso
