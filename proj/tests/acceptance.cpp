// Acceptance gate: one check per shipped guarantee, one pass/fail line each.
// Run with no arguments for the full gate, or pass criterion numbers to run a
// subset. Exit code 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lso/eval.hpp"
#include "lso/games.hpp"
#include "lso/graph.hpp"
#include "lso/library_formulas.hpp"
#include "lso/machine.hpp"
#include "lso/oracles.hpp"
#include "lso/picture.hpp"
#include "lso/reductions.hpp"
#include "lso/runtime.hpp"
#include "lso/structure.hpp"

using namespace lso;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

LabeledGraph path3_110() {
    LabeledGraph g;
    g.add_node("u", "1");
    g.add_node("v", "1");
    g.add_node("w", "0");
    g.add_edge("u", "v");
    g.add_edge("v", "w");
    return g;
}

LabeledGraph overview_1011() {
    LabeledGraph g;
    g.add_node("u1", "1");
    g.add_node("u2", "0");
    g.add_node("u3", "1");
    g.add_node("u4", "1");
    g.add_edge("u1", "u2");
    g.add_edge("u1", "u3");
    g.add_edge("u1", "u4");
    g.add_edge("u2", "u4");
    g.add_edge("u3", "u4");
    return g;
}

LabeledGraph clause_pair() {
    LabeledGraph g;
    g.add_node("u", "(x1|!x2|!x3)");
    g.add_node("v", "(x3|x4|!x5)");
    g.add_edge("u", "v");
    return g;
}

LabeledGraph all_ones(LabeledGraph g) {
    for (auto& [v, l] : g.labels) l = "1";
    return g;
}

LabeledGraph cycle(int n) {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        g.add_edge("n" + std::to_string(i), "n" + std::to_string((i + 1) % n));
    return g;
}

LabeledGraph path_graph(int n) {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge("n" + std::to_string(i), "n" + std::to_string(i + 1));
    return g;
}

Picture blank(int h, int w) {
    Picture p;
    p.bits = 0;
    p.height = h;
    p.width = w;
    p.cells.assign(h, std::vector<std::string>(w, ""));
    return p;
}

const char* kEvenWidthTs = R"(
state odd
state even
tile B B B ./odd
tile B B ./odd ./even
tile B B ./even ./odd
tile B B ./even B
tile B ./odd B ./odd
tile ./odd ./even ./odd ./even
tile ./even ./odd ./even ./odd
tile ./even B ./even B
tile B ./odd B B
tile ./odd ./even B B
tile ./even ./odd B B
tile ./even B B B
)";

// --- criterion bodies ---------------------------------------------------

void c1_reduction_sweeps(Check& c) {
    for (const auto& g : enumerate_graphs(4, {"0", "1"})) {
        auto ids = generate_small_ids(g, 1, 0);
        bool as = oracle_allselected(g);
        c.require(oracle_hamiltonian(reduce_allselected_to_hamiltonian(g, ids).output) == as,
                  "as2ham verdict mismatch on " + canonical_form(g));
        c.require(oracle_eulerian(reduce_allselected_to_eulerian(g, ids).output) == as,
                  "as2eul verdict mismatch on " + canonical_form(g));
        c.require(oracle_hamiltonian(reduce_notallselected_to_hamiltonian(g, ids).output) ==
                      !as,
                  "nas2ham verdict mismatch on " + canonical_form(g));
        if (!c.ok) return;
    }
}

void c2_figure_replays(Check& c) {
    auto ids = [](const LabeledGraph& g) { return generate_small_ids(g, 1, 0); };
    auto g6 = path3_110();
    c.require(!oracle_eulerian(reduce_allselected_to_eulerian(g6, ids(g6)).output),
              "eulerian replay: bad instance accepted");
    auto g6a = all_ones(g6);
    c.require(oracle_eulerian(reduce_allselected_to_eulerian(g6a, ids(g6a)).output),
              "eulerian replay: all-1 instance rejected");
    auto g7 = overview_1011();
    c.require(!oracle_hamiltonian(reduce_allselected_to_hamiltonian(g7, ids(g7)).output),
              "hamiltonian replay: bad instance accepted");
    auto g7a = all_ones(g7);
    c.require(oracle_hamiltonian(reduce_allselected_to_hamiltonian(g7a, ids(g7a)).output),
              "hamiltonian replay: all-1 instance rejected");
    auto g8 = path3_110();
    c.require(oracle_hamiltonian(reduce_notallselected_to_hamiltonian(g8, ids(g8)).output),
              "notallselected replay: instance rejected");
    auto g8a = all_ones(g8);
    c.require(!oracle_hamiltonian(reduce_notallselected_to_hamiltonian(g8a, ids(g8a)).output),
              "notallselected replay: all-1 instance accepted");
    auto g9 = clause_pair();
    c.require(oracle_colorable(reduce_3satgraph_to_3colorable(g9, ids(g9)).output, 3),
              "coloring replay: satisfiable instance not 3-colorable");
}

void c3_formula_oracle_agreement(Check& c) {
    auto allsel = library_formula("allselected");
    for (const auto& g : enumerate_graphs(5, {"0", "1"})) {
        if (evaluate(structural_representation(g), allsel) != oracle_allselected(g)) {
            c.require(false, "allselected sentence disagrees on " + canonical_form(g));
            return;
        }
    }
    auto col3 = library_formula("colorable3");
    for (const auto& g : enumerate_graphs(5, {""})) {
        if (evaluate(structural_representation(g), col3) != oracle_colorable(g, 3)) {
            c.require(false, "colorable3 sentence disagrees on " + canonical_form(g));
            return;
        }
    }
    auto nas = library_formula("notallselected");
    for (const auto& g : enumerate_graphs(2, {"0", "1"})) {
        if (evaluate(structural_representation(g), nas) != !oracle_allselected(g)) {
            c.require(false, "notallselected sentence disagrees on " + canonical_form(g));
            return;
        }
    }
}

void c4_sigma5_stress(Check& c) {
    auto ham = library_formula("hamiltonian");
    auto nham = library_formula("nonhamiltonian");
    auto c3 = structural_representation(cycle(3));
    auto p3 = structural_representation(path_graph(3));
    c.require(evaluate(c3, ham), "hamiltonian sentence false on the 3-cycle");
    c.require(!evaluate(p3, ham), "hamiltonian sentence true on the 3-path");
    c.require(!evaluate(c3, nham), "nonhamiltonian sentence true on the 3-cycle");
    c.require(evaluate(p3, nham), "nonhamiltonian sentence false on the 3-path");
}

// at least three distinct small locally-unique id assignments per graph
std::vector<IdentifierAssignment> id_variants(const LabeledGraph& g, int rho) {
    std::vector<IdentifierAssignment> out;
    for (std::uint64_t seed = 0; seed < 64 && out.size() < 3; ++seed) {
        auto ids = generate_small_ids(g, rho, seed);
        if (std::find(out.begin(), out.end(), ids) == out.end()) out.push_back(ids);
    }
    return out;
}

void c5_compiled_arbiter(Check& c) {
    for (const char* name : {"allselected", "colorable3"}) {
        auto f = library_formula(name);
        auto arb = compile_formula_to_arbiter(f);
        for (const auto& g : enumerate_graphs(4, {""})) {
            bool direct = evaluate(structural_representation(g), f);
            auto variants = id_variants(g, arb.radius + 1);
            if (g.nodes.size() > 1 && variants.size() < 3) {
                c.require(false, "fewer than 3 id assignments for " + canonical_form(g));
                return;
            }
            for (const auto& ids : variants) {
                if (arbitrate(arb, g, ids) != direct) {
                    c.require(false, std::string(name) + " arbiter disagrees on " +
                                         canonical_form(g));
                    return;
                }
            }
        }
    }
}

void c6_cook_levin(Check& c) {
    auto f = library_formula("colorable3");
    for (const auto& g : enumerate_graphs(4, {""})) {
        auto ids = generate_small_ids(g, 2, 0);
        bool want = oracle_colorable(g, 3);
        auto bg = cook_levin_translate(f, g, ids);
        if (oracle_satgraph(bg) != want) {
            c.require(false, "cook-levin verdict mismatch on " + canonical_form(g));
            return;
        }
        auto bg3 = reduce_satgraph_to_3satgraph(bg, generate_small_ids(bg, 1, 0));
        auto cg = reduce_3satgraph_to_3colorable(bg3, generate_small_ids(bg3, 1, 0));
        if (!validate_cluster_map(cg, bg3) || oracle_colorable(cg.output, 3) != want) {
            c.require(false, "chained reduction flipped the verdict on " + canonical_form(g));
            return;
        }
    }
}

Relation restrict_relation(const Relation& r, const RelationalStructure& full,
                           const RelationalStructure& sub) {
    std::vector<Elem> fd = full.domain, sd = sub.domain;
    std::sort(fd.begin(), fd.end());
    std::sort(sd.begin(), sd.end());
    std::vector<std::size_t> pos(sd.size());
    for (std::size_t i = 0; i < sd.size(); ++i)
        pos[i] = std::lower_bound(fd.begin(), fd.end(), sd[i]) - fd.begin();
    Relation out{r.arity, 0};
    std::size_t count = 1;
    for (int a = 0; a < r.arity; ++a) count *= sd.size();
    for (std::size_t t = 0; t < count; ++t) {
        std::size_t rest = t, fbit = 0, mul = 1;
        for (int a = 0; a < r.arity; ++a) {
            fbit += pos[rest % sd.size()] * mul;
            rest /= sd.size();
            mul *= fd.size();
        }
        if (r.mask >> fbit & 1) out.mask |= 1ull << t;
    }
    return out;
}

void c7_bfl_locality(Check& c) {
    std::mt19937_64 rng(7);
    auto graphs = enumerate_graphs(5, {""});
    for (const auto& g : enumerate_graphs(3, {"0", "1"})) graphs.push_back(g);
    for (const auto& body : library_bfl_bodies()) {
        int r = nesting_radius(body.formula);
        int max_arity = 0;
        for (const auto& [name, k] : body.so_vars) max_arity = std::max(max_arity, k);
        for (const auto& g : graphs) {
            auto full = structural_representation(g);
            std::size_t n = full.cardinality();
            if (max_arity >= 2 && n * n > 63) continue;
            std::size_t bits = 1;
            for (int a = 0; a < max_arity; ++a) bits *= n;
            for (const auto& v : g.nodes) {
                auto sub = structural_neighborhood(g, v, r);
                for (int trial = 0; trial < 8; ++trial) {
                    VariableAssignment av, as;
                    av.fo[body.var] = Elem{v, 0};
                    as.fo[body.var] = Elem{v, 0};
                    for (const auto& [name, k] : body.so_vars) {
                        std::size_t kb = 1;
                        for (int a = 0; a < k; ++a) kb *= n;
                        Relation rel{k, rng() & (kb >= 64 ? ~0ull : (1ull << kb) - 1)};
                        av.so[name] = rel;
                        as.so[name] = restrict_relation(rel, full, sub);
                    }
                    EvalOptions opts;
                    opts.max_domain_arity1 = 16;
                    opts.max_domain_arity2 = 7;
                    if (evaluate(full, body.formula, av, opts) !=
                        evaluate(sub, body.formula, as, opts)) {
                        c.require(false, body.name + " is non-local at " + v + " on " +
                                             canonical_form(g));
                        return;
                    }
                }
            }
        }
    }
}

void c8_runtime_semantics(Check& c) {
    c.require(sort_incoming({{"10", "a"}, {"0", "b"}, {"01", "c"}}) == "b#c#a#",
              "sort_incoming order");
    c.require(sort_incoming({{"00", "x"}, {"0", "y"}, {"", "z"}, {"1", "w"}}) == "z#y#x#w#",
              "sort_incoming proper-prefix order");

    auto machine = parse_dtm("state qw\nstate qc\n"
                             "trans qstart > > > -> qw > > S R S\n"
                             "trans qw > # > -> qc 1 > S R S\n"
                             "trans qw > 0 > -> qc 0 > S R S\n"
                             "trans qw > 1 > -> qc 1 > S R S\n"
                             "trans qw > _ > -> qstop 1 > S S S\n"
                             "trans qc > # > -> qc _ > S R S\n"
                             "trans qc > 0 > -> qc _ > S R S\n"
                             "trans qc > 1 > -> qc _ > S R S\n"
                             "trans qc > _ > -> qstop _ > S S S\n");
    for (const auto& g : enumerate_graphs(4, {"0", "1"})) {
        auto ids = generate_small_ids(g, 1, 1);
        auto asc = execute(machine, g, ids, {}, {}, Scheduler::Ascending);
        auto desc = execute(machine, g, ids, {}, {}, Scheduler::Descending);
        for (const auto& v : g.nodes)
            c.require(asc.receiving_trace[v].at(0) == std::string(g.degree(v), '#'),
                      "round-1 receiving tape is not #^deg");
        c.require(asc.result.labels == desc.result.labels &&
                      asc.verdicts == desc.verdicts && asc.rounds == desc.rounds &&
                      asc.steps == desc.steps &&
                      asc.receiving_trace == desc.receiving_trace &&
                      asc.space == desc.space,
                  "scheduler order changed the execution on " + canonical_form(g));
        if (!c.ok) return;
    }
}

void c9_pictures(Check& c) {
    auto even = parse_ts(kEvenWidthTs);
    for (int h = 1; h <= 3; ++h)
        for (int w = 1; w <= 4; ++w)
            c.require(ts_accepts(even, blank(h, w)) == (w % 2 == 0),
                      "tiling parity mismatch at " + std::to_string(h) + "x" +
                          std::to_string(w));
    if (!c.ok) return;

    auto f = ts_to_formula(even);
    EvalOptions opts;
    opts.max_domain_arity1 = 12;
    for (int h = 1; h <= 3; ++h)
        for (int w = 1; w <= 4; ++w)
            c.require(evaluate(picture_structure(blank(h, w)), f, {}, opts) == (w % 2 == 0),
                      "tiling sentence mismatch at " + std::to_string(h) + "x" +
                          std::to_string(w));
    if (!c.ok) return;

    for (int h = 1; h <= 3; ++h)
        for (int w = 1; w <= 3; ++w) {
            auto g = encode_picture_as_graph(blank(h, w));
            c.require(g.nodes.size() == 5u * h * w, "encoding node count");
            c.require(g.edges.size() == 4u * h * w + h * (w - 1) + w * (h - 1),
                      "encoding edge count");
            try {
                validate_graph(g);
            } catch (const Error&) {
                c.require(false, "encoding not connected");
            }
            auto s = structural_representation(g);
            for (const auto& e : s.domain)
                c.require(s.adjacent(e).size() <= 4, "structural degree above 4");
        }
    if (!c.ok) return;

    auto vertical = parse_lso("A x . (E y ~ x . (link1(x,y) | link1(y,x)))");
    auto tv = translate_picture_formula(vertical);
    for (int h = 1; h <= 3; ++h)
        for (int w = 1; w <= 3; ++w) {
            auto p = blank(h, w);
            bool direct = evaluate(picture_structure(p), vertical);
            bool enc = evaluate(structural_representation(encode_picture_as_graph(p)), tv);
            c.require(direct == (h >= 2) && enc == direct,
                      "translated sentence mismatch at " + std::to_string(h) + "x" +
                          std::to_string(w));
        }
}

void c10_oracle_coherence(Check& c) {
    for (const auto& g : enumerate_graphs(4, {"0", "1"})) {
        c.require(check_property("notallselected", g) == !check_property("allselected", g),
                  "allselected complement");
        c.require(check_property("noneulerian", g) == !check_property("eulerian", g),
                  "eulerian complement");
        c.require(check_property("nonhamiltonian", g) == !check_property("hamiltonian", g),
                  "hamiltonian complement");
        c.require(check_property("noncolorable(3)", g) == !check_property("colorable(3)", g),
                  "colorable complement");
        if (!c.ok) return;
    }
    for (const auto& g : enumerate_graphs(5, {""}))
        for (int k = 0; k < 5; ++k)
            c.require(!check_property("colorable(" + std::to_string(k) + ")", g) ||
                          check_property("colorable(" + std::to_string(k + 1) + ")", g),
                      "colorable not monotone in k");
    for (int n = 1; n <= 12; ++n) {
        auto g = n == 1 ? [] {
            LabeledGraph s;
            s.add_node("n0");
            return s;
        }()
                        : path_graph(n);
        bool sq = n == 1 || n == 4 || n == 9;
        bool pr = n == 2 || n == 3 || n == 5 || n == 7 || n == 11;
        c.require(check_property("square", g) == sq,
                  "square verdict wrong at n=" + std::to_string(n));
        c.require(check_property("prime", g) == pr,
                  "prime verdict wrong at n=" + std::to_string(n));
    }
}

struct Criterion {
    int number;
    const char* title;
    std::function<void(Check&)> body;
};

const Criterion kCriteria[] = {
    {1, "reduction soundness sweeps (4-node exhaustive, three reductions)", c1_reduction_sweeps},
    {2, "figure replays with captioned verdicts", c2_figure_replays},
    {3, "formula-oracle agreement for the three library sentences", c3_formula_oracle_agreement},
    {4, "five-level sentence stress check on the 3-cycle and 3-path", c4_sigma5_stress},
    {5, "compiled arbiter equals direct evaluation under varied ids", c5_compiled_arbiter},
    {6, "cook-levin translation and chained reductions preserve verdicts", c6_cook_levin},
    {7, "neighborhood-bounded bodies are local", c7_bfl_locality},
    {8, "runtime semantics: message order, round one, scheduler independence",
     c8_runtime_semantics},
    {9, "pictures: tiling, sentence emitter, graph encoding, translation", c9_pictures},
    {10, "oracle coherence: complements, monotonicity, counting", c10_oracle_coherence},
};

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& crit : kCriteria) {
        if (!selected.empty() && !selected.count(crit.number)) continue;
        Check c;
        auto start = std::chrono::steady_clock::now();
        try {
            crit.body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
            c.ok = false;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        std::printf("criterion %2d: %s - %s (%.1fs)%s%s\n", crit.number,
                    c.ok ? "PASS" : "FAIL", crit.title, secs, c.ok ? "" : " | ",
                    c.ok ? "" : c.detail.c_str());
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
