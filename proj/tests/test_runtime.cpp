#include <doctest.h>

#include "lso/machine.hpp"
#include "lso/runtime.hpp"

using namespace lso;

namespace {

// Writes verdict 1 regardless of input, then stops after one round.
const char* kAcceptAll = R"(
state qw
state qc
trans qstart > > > -> qw > > S R S
trans qw > # > -> qc 1 > S R S
trans qw > 0 > -> qc 1 > S R S
trans qw > 1 > -> qc 1 > S R S
trans qw > _ > -> qstop 1 > S S S
trans qc > # > -> qc _ > S R S
trans qc > 0 > -> qc _ > S R S
trans qc > 1 > -> qc _ > S R S
trans qc > _ > -> qstop _ > S S S
)";

// Verdict = own 1-bit label.
const char* kSelected = R"(
state qw
state qc
trans qstart > > > -> qw > > S R S
trans qw > 0 > -> qc 0 > S R S
trans qw > 1 > -> qc 1 > S R S
trans qc > # > -> qc _ > S R S
trans qc > 0 > -> qc _ > S R S
trans qc > 1 > -> qc _ > S R S
trans qc > _ > -> qstop _ > S S S
)";

LabeledGraph triangle(const std::string& l) {
    LabeledGraph g;
    g.add_node("a", l);
    g.add_node("b", l);
    g.add_node("c", l);
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    g.add_edge("a", "c");
    return g;
}

// Figure-2-style instance: u1-u2, u1-u3, u1-u4, u2-u4, u3-u4, labels 1,0,1,1.
LabeledGraph overview_graph() {
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

// Two-round protocol: broadcast own label, then accept iff own label and all
// received labels are "1".
NodeProgram neighborhood_selected() {
    return [](int round, const std::string& label, const std::string&, const std::string&,
              const std::vector<std::string>& incoming, const std::string&) {
        ProgramResult r;
        if (round == 1) {
            r.state = label;
            r.outgoing.assign(incoming.size(), label);
            return r;
        }
        bool ok = label == "1";
        for (const auto& m : incoming) ok = ok && m == "1";
        r.final_value = ok ? "1" : "0";
        return r;
    };
}

} // namespace

TEST_CASE("sort_incoming uses prefix-first identifier order") {
    CHECK(sort_incoming({{"10", "a1"}, {"0", "b0"}, {"01", "c1"}}) == "b0#c1#a1#");
    CHECK(sort_incoming({}) == "");
    // proper prefixes come before their extensions
    CHECK(sort_incoming({{"00", "x"}, {"0", "y"}, {"", "z"}}) == "z#y#x#");
    CHECK_THROWS_WITH_AS(sort_incoming({{"1", "a"}, {"1", "b"}}),
                         doctest::Contains("DuplicateSenderId"), Error);
}

TEST_CASE("step_local applies one transition") {
    auto m = parse_dtm("trans qstart > > > -> qpause 1 > S S S\n");
    // writing over the start marker is rejected; write at cell >= 1 instead
    TapeConfig cfg;
    CHECK_THROWS_WITH_AS(step_local(m, cfg), doctest::Contains("StartMarkerViolation"), Error);

    auto m2 = parse_dtm("state qa\n"
                        "trans qstart > > > -> qa > > S R S\n"
                        "trans qa > _ > -> qpause 1 > S S S\n");
    TapeConfig c2;
    step_local(m2, c2);
    step_local(m2, c2);
    CHECK(c2.state == "qpause");
    CHECK(c2.internal_tape == ">1");
    CHECK_THROWS_AS(step_local(m2, c2), Error); // paused; caller must not step

    TapeConfig c3;
    auto m3 = parse_dtm("trans qstart > 1 > -> qpause > > S S S\n");
    CHECK_THROWS_WITH_AS(step_local(m3, c3), doctest::Contains("UndefinedTransition"), Error);
}

TEST_CASE("dtm parser rejects malformed input") {
    CHECK_THROWS_AS(parse_dtm("trans qstart > > -> qa > > S S S\n"), Error);
    CHECK_THROWS_AS(parse_dtm("trans qstop > > > -> qstop > > S S S\n"), Error);
    CHECK_THROWS_AS(parse_dtm("trans qstart > > > -> qmissing > > S S S\n"), Error);
    CHECK_THROWS_AS(parse_dtm("trans qstart x > > -> qpause > > S S S\n"), Error);
    auto m = parse_dtm("# comment\nstate qa\n");
    CHECK(m.states.count("qstart"));
    CHECK(m.states.count("qa"));
}

TEST_CASE("execute: one-round machines") {
    auto g = triangle("0");
    IdentifierAssignment ids{{"a", "0"}, {"b", "10"}, {"c", "11"}};
    auto res = execute(parse_dtm(kAcceptAll), g, ids, {});
    CHECK(res.rounds == 1);
    CHECK(accepts(res));
    for (const auto& v : g.nodes) {
        CHECK(res.result.label(v) == "1");
        CHECK(res.receiving_trace[v] == std::vector<std::string>{"##"});
    }

    auto sel = execute(parse_dtm(kSelected), overview_graph(),
                       IdentifierAssignment{{"u1", "00"}, {"u2", "01"}, {"u3", "10"},
                                            {"u4", "11"}},
                       {});
    CHECK_FALSE(accepts(sel));
    CHECK(sel.verdicts["u1"]);
    CHECK_FALSE(sel.verdicts["u2"]);
}

TEST_CASE("execute: two-round neighborhood program") {
    IdentifierAssignment ids{{"u1", "00"}, {"u2", "01"}, {"u3", "10"}, {"u4", "11"}};
    auto res = execute(neighborhood_selected(), overview_graph(), ids, {});
    CHECK(res.rounds == 2);
    CHECK_FALSE(accepts(res));
    // u2 and all its neighbors reject; u3 accepts
    CHECK_FALSE(res.verdicts["u1"]);
    CHECK_FALSE(res.verdicts["u2"]);
    CHECK_FALSE(res.verdicts["u4"]);
    CHECK(res.verdicts["u3"]);

    auto all1 = overview_graph();
    for (auto& [v, l] : all1.labels) l = "1";
    CHECK(accepts(execute(neighborhood_selected(), all1, ids, {})));
}

TEST_CASE("scheduler order never changes results") {
    IdentifierAssignment ids{{"u1", "00"}, {"u2", "01"}, {"u3", "10"}, {"u4", "11"}};
    for (const auto* text : {kAcceptAll, kSelected}) {
        auto m = parse_dtm(text);
        auto asc = execute(m, overview_graph(), ids, {}, {}, Scheduler::Ascending);
        auto desc = execute(m, overview_graph(), ids, {}, {}, Scheduler::Descending);
        CHECK(asc.result.labels == desc.result.labels);
        CHECK(asc.verdicts == desc.verdicts);
        CHECK(asc.rounds == desc.rounds);
        CHECK(asc.steps == desc.steps);
        CHECK(asc.receiving_trace == desc.receiving_trace);
    }
    auto a2 = execute(neighborhood_selected(), overview_graph(), ids, {}, {},
                      Scheduler::Ascending);
    auto d2 = execute(neighborhood_selected(), overview_graph(), ids, {}, {},
                      Scheduler::Descending);
    CHECK(a2.result.labels == d2.result.labels);
    CHECK(a2.receiving_trace == d2.receiving_trace);
}

TEST_CASE("machine_as_program matches the tape runtime") {
    IdentifierAssignment ids{{"u1", "00"}, {"u2", "01"}, {"u3", "10"}, {"u4", "11"}};
    for (const auto* text : {kAcceptAll, kSelected}) {
        auto m = parse_dtm(text);
        auto direct = execute(m, overview_graph(), ids, {});
        auto wrapped = execute(machine_as_program(m), overview_graph(), ids, {});
        CHECK(direct.result.labels == wrapped.result.labels);
        CHECK(direct.verdicts == wrapped.verdicts);
        CHECK(direct.rounds == wrapped.rounds);
    }
}

TEST_CASE("execution guards") {
    auto g = triangle("0");
    IdentifierAssignment ids{{"a", "0"}, {"b", "10"}, {"c", "11"}};
    IdentifierAssignment clash{{"a", "0"}, {"b", "0"}, {"c", "1"}};
    CHECK_THROWS_WITH_AS(execute(parse_dtm(kAcceptAll), g, clash, {}),
                         doctest::Contains("NotLocallyUnique"), Error);
    IdentifierAssignment missing{{"a", "0"}, {"b", "10"}};
    CHECK_THROWS_WITH_AS(execute(parse_dtm(kAcceptAll), g, missing, {}),
                         doctest::Contains("MissingId"), Error);

    // a machine that never leaves qstart exhausts the step limit
    auto loop = parse_dtm("trans qstart > > > -> qstart > > S S S\n");
    Limits tight;
    tight.max_steps = 10;
    CHECK_THROWS_WITH_AS(execute(loop, g, ids, {}, tight),
                         doctest::Contains("StepLimitExceeded"), Error);

    // a program that never halts exhausts the round limit
    NodeProgram never = [](int, const std::string&, const std::string&, const std::string&,
                           const std::vector<std::string>& in, const std::string&) {
        ProgramResult r;
        r.outgoing.assign(in.size(), "");
        return r;
    };
    Limits rounds;
    rounds.max_rounds = 5;
    CHECK_THROWS_WITH_AS(execute(never, g, ids, {}, rounds),
                         doctest::Contains("RoundLimitExceeded"), Error);

    CHECK_THROWS_WITH_AS(execute(parse_dtm(kAcceptAll), g, ids, {}, Limits{0, 1}),
                         doctest::Contains("BadLimits"), Error);
}

TEST_CASE("verdict requires the bit content to be exactly 1") {
    // halting immediately leaves label#id# on the internal tape
    auto m = parse_dtm("trans qstart > > > -> qstop > > S S S\n");
    LabeledGraph g;
    g.add_node("a", "11");
    auto res = execute(m, g, IdentifierAssignment{{"a", ""}}, {});
    CHECK(res.result.label("a") == "11");
    CHECK_FALSE(accepts(res)); // "11" is not exactly "1"

    LabeledGraph h;
    h.add_node("a", "1");
    CHECK(accepts(execute(m, h, IdentifierAssignment{{"a", ""}}, {})));
}
