#include <doctest.h>

#include "lso/eval.hpp"
#include "lso/games.hpp"
#include "lso/library_formulas.hpp"
#include "lso/oracles.hpp"
#include "lso/structure.hpp"

using namespace lso;

namespace {

LabeledGraph cycle(int n, const std::string& label = "") {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i), label);
    for (int i = 0; i < n; ++i)
        g.add_edge("n" + std::to_string(i), "n" + std::to_string((i + 1) % n));
    return g;
}

LabeledGraph complete(int n, const std::string& label = "") {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i), label);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge("n" + std::to_string(i), "n" + std::to_string(j));
    return g;
}

// Decider for ALLSELECTED: accept iff own label is 1 and all received
// label reports are 1 (two rounds).
NodeProgram allselected_decider() {
    return [](int round, const std::string& label, const std::string&, const std::string&,
              const std::vector<std::string>& incoming, const std::string&) {
        ProgramResult r;
        if (round == 1) {
            r.state = label;
            r.outgoing.assign(incoming.size(), label == "1" ? "1" : "0");
            return r;
        }
        bool ok = label == "1";
        for (const auto& m : incoming) ok = ok && m == "1";
        r.final_value = ok ? "1" : "0";
        return r;
    };
}

// Accept iff the node's own certificate list is all-empty.
NodeProgram empty_cert_decider() {
    return [](int, const std::string&, const std::string&, const std::string& certs,
              const std::vector<std::string>& incoming, const std::string&) {
        ProgramResult r;
        r.outgoing.assign(incoming.size(), "");
        bool empty = true;
        for (char c : certs)
            if (c != '#') empty = false;
        r.final_value = empty ? "1" : "0";
        return r;
    };
}

} // namespace

TEST_CASE("level-0 games are plain executions") {
    GameSpec spec;
    spec.level = 0;
    for (const auto& g : enumerate_graphs(4, {"0", "1"})) {
        auto ids = generate_small_ids(g, 1, 0);
        CHECK(arbitrate(allselected_decider(), g, ids, spec) ==
              check_property("allselected", g));
    }
}

TEST_CASE("level-1 game with an indifferent decider") {
    GameSpec spec;
    spec.level = 1;
    spec.first_player = Player::Eve;
    spec.cert_radius = 0;
    spec.cert_poly = {1};
    spec.cert_cap = 1;
    spec.restrictors.resize(1);
    auto g = cycle(3, "1");
    auto ids = generate_small_ids(g, 1, 0);
    // Eve picks the all-empty assignment
    CHECK(arbitrate(empty_cert_decider(), g, ids, spec));
    // Adam can pick a non-empty certificate somewhere
    spec.first_player = Player::Adam;
    CHECK_FALSE(arbitrate(empty_cert_decider(), g, ids, spec));
}

TEST_CASE("raw game budget refusal") {
    GameSpec spec;
    spec.level = 1;
    spec.cert_radius = 1;
    spec.cert_poly = {64};
    ArbitrateLimits lim;
    lim.max_assignments_per_level = 1000;
    auto g = cycle(4);
    CHECK_THROWS_WITH_AS(arbitrate(empty_cert_decider(), g, generate_small_ids(g, 1, 0), spec,
                                   lim),
                         doctest::Contains("BudgetExceeded"), Error);
}

TEST_CASE("compiled arbiter: level 0 sentence") {
    auto arb = compile_formula_to_arbiter(library_formula("allselected"));
    CHECK(arb.spec.level == 0);
    for (const auto& g : enumerate_graphs(3, {"0", "1"})) {
        auto ids = generate_small_ids(g, arb.radius + 1, 3);
        CHECK(arbitrate(arb, g, ids) ==
              evaluate(structural_representation(g), library_formula("allselected")));
    }
}

TEST_CASE("compiled arbiter: colorable3 against the oracle") {
    auto arb = compile_formula_to_arbiter(library_formula("colorable3"));
    CHECK(arb.spec.level == 1);
    CHECK(arb.scheme.size() == 1);
    CHECK_FALSE(arb.scheme[0].universal);
    auto ids5 = [&](const LabeledGraph& g, std::uint64_t seed) {
        return generate_small_ids(g, arb.radius + 1, seed);
    };
    CHECK(arbitrate(arb, cycle(5), ids5(cycle(5), 0)));
    CHECK_FALSE(arbitrate(arb, complete(4), ids5(complete(4), 0)));
    CHECK(arbitrate(arb, complete(3), ids5(complete(3), 1)));
}

TEST_CASE("compiled arbiter rejects unclassifiable input") {
    // free variable => not a sentence
    CHECK_THROWS_AS(compile_formula_to_arbiter(parse_lso("bit1(x)")), Error);
}

TEST_CASE("local repairability") {
    GameSpec spec;
    spec.level = 1;
    spec.cert_radius = 0;
    spec.cert_poly = {1};
    spec.cert_cap = 1;
    spec.restrictors.resize(1);
    LabeledGraph g;
    g.add_node("a", "0");
    g.add_node("b", "1");
    g.add_edge("a", "b");
    auto ids = generate_small_ids(g, 1, 0);

    // always-accepting restrictor is trivially repairable
    NodeProgram accept_all = [](int, const std::string&, const std::string&,
                                const std::string&, const std::vector<std::string>& in,
                                const std::string&) {
        ProgramResult r;
        r.outgoing.assign(in.size(), "");
        r.final_value = "1";
        return r;
    };
    CHECK(check_local_repairability(accept_all, g, ids, spec));

    // "certificate equals own label" can be fixed one node at a time
    NodeProgram own_label = [](int, const std::string& label, const std::string&,
                               const std::string& certs, const std::vector<std::string>& in,
                               const std::string&) {
        ProgramResult r;
        r.outgoing.assign(in.size(), "");
        std::string c = certs;
        if (!c.empty() && c.back() == '#') c.pop_back();
        r.final_value = c == label ? "1" : "0";
        return r;
    };
    CHECK(check_local_repairability(own_label, g, ids, spec));

    // "all certificates identical" needs the neighbor's view too
    NodeProgram all_same = [](int round, const std::string&, const std::string&,
                              const std::string& certs, const std::vector<std::string>& in,
                              const std::string&) {
        ProgramResult r;
        std::string c = certs;
        if (!c.empty() && c.back() == '#') c.pop_back();
        if (round == 1) {
            r.state = c;
            r.outgoing.assign(in.size(), c);
            return r;
        }
        bool same = true;
        for (const auto& m : in) same = same && m == c;
        r.final_value = same ? "1" : "0";
        return r;
    };
    CHECK_FALSE(check_local_repairability(all_same, g, ids, spec));
}

TEST_CASE("decide_via_formula agrees with direct evaluation") {
    CHECK(decide_via_formula(cycle(3, "1"), library_formula("allselected"),
                             generate_small_ids(cycle(3, "1"), 2, 0)));
    CHECK_FALSE(decide_via_formula(complete(4), library_formula("colorable3"),
                                   generate_small_ids(complete(4), 2, 0)));
    CHECK(decide_via_formula(cycle(5), library_formula("colorable3"),
                             generate_small_ids(cycle(5), 2, 0)));
}
