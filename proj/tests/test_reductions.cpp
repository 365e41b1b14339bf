#include <doctest.h>

#include "lso/boolexpr.hpp"
#include "lso/library_formulas.hpp"
#include "lso/oracles.hpp"
#include "lso/reductions.hpp"

using namespace lso;

namespace {

// Worked instances: a 3-path labeled 1,1,0 and the 4-node overview graph
// labeled 1,0,1,1.
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

LabeledGraph all_ones(LabeledGraph g) {
    for (auto& [v, l] : g.labels) l = "1";
    return g;
}

IdentifierAssignment ids_for(const LabeledGraph& g, int rho = 1) {
    return generate_small_ids(g, rho, 0);
}

NodeProgram even_degree_decider() {
    return [](int, const std::string&, const std::string&, const std::string&,
              const std::vector<std::string>& incoming, const std::string&) {
        ProgramResult r;
        r.outgoing.assign(incoming.size(), "");
        r.final_value = incoming.size() % 2 == 0 ? "1" : "0";
        return r;
    };
}

} // namespace

TEST_CASE("allselected to eulerian: figure replay and structure") {
    auto g = path3_110();
    auto cg = reduce_allselected_to_eulerian(g, ids_for(g));
    CHECK(validate_cluster_map(cg, g));
    CHECK(cg.output.nodes.size() == 2 * g.nodes.size());
    // 4 cross edges per input edge, one intra edge per non-1 node
    CHECK(cg.output.edges.size() == 4 * g.edges.size() + 1);
    CHECK_FALSE(oracle_eulerian(cg.output));

    auto good = all_ones(g);
    auto cg1 = reduce_allselected_to_eulerian(good, ids_for(good));
    CHECK(cg1.output.edges.size() == 4 * good.edges.size());
    CHECK(oracle_eulerian(cg1.output));
}

TEST_CASE("allselected to hamiltonian: figure replay") {
    auto g = overview_1011();
    auto cg = reduce_allselected_to_hamiltonian(g, ids_for(g));
    CHECK(validate_cluster_map(cg, g));
    CHECK_FALSE(oracle_hamiltonian(cg.output));

    auto good = all_ones(g);
    auto cg1 = reduce_allselected_to_hamiltonian(good, ids_for(good));
    // cycle of length max(3, 2 deg) per node, no pendants
    CHECK(cg1.output.nodes.size() == 6 + 4 + 4 + 6);
    CHECK(oracle_hamiltonian(cg1.output));
    // the bad instance adds exactly one pendant node
    CHECK(cg.output.nodes.size() == cg1.output.nodes.size() + 1);
}

TEST_CASE("notallselected to hamiltonian: figure replay") {
    auto g = path3_110();
    auto cg = reduce_notallselected_to_hamiltonian(g, ids_for(g));
    CHECK(validate_cluster_map(cg, g));
    // two cycles of length 2 deg + 3 per node
    CHECK(cg.output.nodes.size() == 2 * (5 + 7 + 5));
    CHECK(oracle_hamiltonian(cg.output)); // some label differs from 1

    auto good = all_ones(g);
    auto cg1 = reduce_notallselected_to_hamiltonian(good, ids_for(good));
    CHECK_FALSE(oracle_hamiltonian(cg1.output));
}

TEST_CASE("cluster reductions on a single node") {
    for (const std::string& label : {"1", "0", ""}) {
        LabeledGraph g;
        g.add_node("a", label);
        auto ids = ids_for(g);
        bool sel = label == "1";
        CHECK(oracle_eulerian(reduce_allselected_to_eulerian(g, ids).output) == sel);
        CHECK(oracle_hamiltonian(reduce_allselected_to_hamiltonian(g, ids).output) == sel);
        CHECK(oracle_hamiltonian(reduce_notallselected_to_hamiltonian(g, ids).output) == !sel);
    }
}

TEST_CASE("reductions demand locally unique identifiers") {
    auto g = path3_110();
    IdentifierAssignment clash{{"u", "0"}, {"v", "0"}, {"w", "1"}};
    CHECK_THROWS_WITH_AS(reduce_allselected_to_hamiltonian(g, clash),
                         doctest::Contains("NotLocallyUnique"), Error);
    IdentifierAssignment missing{{"u", "0"}, {"v", "1"}};
    CHECK_THROWS_WITH_AS(reduce_allselected_to_hamiltonian(g, missing),
                         doctest::Contains("MissingId"), Error);
}

TEST_CASE("cluster map validation") {
    auto g = path3_110();
    auto cg = reduce_allselected_to_eulerian(g, ids_for(g));
    SUBCASE("unknown cluster target") {
        cg.cluster_map.begin()->second = "nope";
        CHECK_THROWS_WITH_AS(validate_cluster_map(cg, g), doctest::Contains("UnknownNode"),
                             Error);
    }
    SUBCASE("unmapped output node") {
        cg.output.add_node("extra");
        cg.output.add_edge("extra", cg.output.nodes.front());
        CHECK_THROWS_AS(validate_cluster_map(cg, g), Error);
    }
    SUBCASE("cross edge between non-adjacent clusters fails") {
        // u and w are not adjacent in the 3-path
        Node cu, cw;
        for (const auto& [out, in] : cg.cluster_map) {
            if (in == "u") cu = out;
            if (in == "w") cw = out;
        }
        cg.output.add_edge(cu, cw);
        CHECK_FALSE(validate_cluster_map(cg, g));
    }
}

TEST_CASE("simulating a decider through a reduction") {
    // each copy in the eulerian output has even degree iff its source node is
    // labeled 1, so an even-degree decider pulled back through the reduction
    // decides selectedness per node
    for (const auto& g : enumerate_graphs(4, {"0", "1"})) {
        bool ok = simulate_through_reduction(even_degree_decider(),
                                             reduce_allselected_to_eulerian, g, ids_for(g));
        CHECK(ok == check_property("allselected", g));
    }
}

TEST_CASE("satgraph to 3satgraph is label-wise equisatisfiable") {
    LabeledGraph g;
    g.add_node("a", "(x1|!x2|!x3)");
    g.add_node("b", "(x3|x4|!x5)");
    g.add_edge("a", "b");
    auto out = reduce_satgraph_to_3satgraph(g, ids_for(g));
    CHECK(out.nodes == g.nodes);
    CHECK(out.edges == g.edges);
    for (const auto& v : out.nodes) CHECK_NOTHROW(parse_3cnf(out.label(v)));
    CHECK(oracle_satgraph(out) == oracle_satgraph(g));

    // wide clauses get split, arbitrary formulas go through gates
    LabeledGraph wide;
    wide.add_node("a", "(p|q|r|s|t)");
    wide.add_node("b", "!(p&q) | (r&!s)");
    wide.add_edge("a", "b");
    auto wout = reduce_satgraph_to_3satgraph(wide, ids_for(wide));
    for (const auto& v : wout.nodes) {
        auto cnf = parse_3cnf(wout.label(v));
        for (const auto& cl : cnf) CHECK(cl.size() <= 3);
    }
    CHECK(oracle_satgraph(wout));

    LabeledGraph contra;
    contra.add_node("a", "x & !x");
    CHECK_FALSE(oracle_satgraph(reduce_satgraph_to_3satgraph(contra, ids_for(contra))));
}

TEST_CASE("3satgraph to 3colorable: figure replay") {
    LabeledGraph g;
    g.add_node("u", "(x1|!x2|!x3)");
    g.add_node("v", "(x3|x4|!x5)");
    g.add_edge("u", "v");
    auto cg = reduce_3satgraph_to_3colorable(g, ids_for(g));
    CHECK(validate_cluster_map(cg, g));
    CHECK(oracle_colorable(cg.output, 3));
}

TEST_CASE("3satgraph to 3colorable matches satisfiability") {
    const std::pair<const char*, const char*> cases[] = {
        {"(x|y)", "(!x)"},
        {"(x)", "(!x)"},
        {"(x|!y|z)", "(y)"},
        {"(a)&(!a|b)", "(!b)"},
    };
    for (const auto& [la, lb] : cases) {
        CAPTURE(la);
        CAPTURE(lb);
        LabeledGraph g;
        g.add_node("a", la);
        g.add_node("b", lb);
        g.add_edge("a", "b");
        auto cg = reduce_3satgraph_to_3colorable(g, ids_for(g));
        CHECK(validate_cluster_map(cg, g));
        CHECK(oracle_colorable(cg.output, 3) == oracle_satgraph(g));
    }
}

TEST_CASE("cook-levin translation matches the coloring oracle") {
    auto f = library_formula("colorable3");
    for (const auto& g : enumerate_graphs(3, {""})) {
        auto bg = cook_levin_translate(f, g, ids_for(g, 2));
        CHECK(bg.nodes == g.nodes);
        CHECK(bg.edges == g.edges);
        CHECK(oracle_satgraph(bg) == oracle_colorable(g, 3));
    }
}

TEST_CASE("cook-levin refuses sentences outside Sigma(1)") {
    LabeledGraph g;
    g.add_node("a", "1");
    g.add_node("b", "1");
    g.add_edge("a", "b");
    CHECK_THROWS_AS(cook_levin_translate(library_formula("notallselected"), g, ids_for(g, 2)),
                    Error);
}
