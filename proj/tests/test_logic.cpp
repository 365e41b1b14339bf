#include <doctest.h>

#include "lso/eval.hpp"
#include "lso/formula.hpp"
#include "lso/graph.hpp"
#include "lso/library_formulas.hpp"
#include "lso/structure.hpp"

using namespace lso;

namespace {

RelationalStructure rep(const LabeledGraph& g) { return structural_representation(g); }

LabeledGraph cycle(int n, const std::string& label = "") {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i), label);
    for (int i = 0; i < n; ++i)
        g.add_edge("n" + std::to_string(i), "n" + std::to_string((i + 1) % n));
    return g;
}

LabeledGraph path(int n, const std::string& label = "") {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i), label);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge("n" + std::to_string(i), "n" + std::to_string(i + 1));
    return g;
}

} // namespace

TEST_CASE("lso parser round trip") {
    const char* texts[] = {
        "true",
        "E x . bit1(x)",
        "A x . (x=x & !false)",
        "E2 P:2 . (A x . (E y ~ x . P(x,y)))",
        "EN x . (A <2> y ~ x . link1(x,y))",
        "(E x . bit2(x)) -> (A y . link2(y,y))",
        "(true <-> false) | X(z)",
    };
    for (const char* t : texts) {
        CAPTURE(t);
        auto f = parse_lso(t);
        auto rt = parse_lso(format_lso(f));
        CHECK(format_lso(f) == format_lso(rt));
    }
    CHECK_THROWS_AS(parse_lso("E x ."), Error);
    CHECK_THROWS_AS(parse_lso("bit1(x) extra"), Error);
    CHECK_THROWS_AS(parse_lso("E <2> x . true"), Error); // radius needs a bound
}

TEST_CASE("free variables and substitution") {
    auto f = parse_lso("E y ~ x . (P(y) & bit1(z))");
    auto fv = free_vars(f);
    CHECK(fv.fo == std::set<std::string>{"x", "z"});
    CHECK(fv.so == std::map<std::string, int>{{"P", 1}});

    auto g = substitute_fo(f, "x", "w");
    CHECK(free_vars(g).fo == std::set<std::string>{"w", "z"});
    // substituting into a capture position renames the bound variable
    auto h = substitute_fo(parse_lso("E y ~ x . link1(x,y)"), "x", "y");
    CHECK(free_vars(h).fo == std::set<std::string>{"y"});
    RelationalStructure s = rep(cycle(3));
    VariableAssignment a;
    a.fo["y"] = Elem{"n0", 0};
    CHECK(evaluate(s, h, a)); // n0 has a neighbor distinct from itself
}

TEST_CASE("evaluator basics") {
    LabeledGraph g;
    g.add_node("a", "1");
    g.add_node("b", "0");
    g.add_edge("a", "b");
    auto s = rep(g);

    CHECK(evaluate(s, parse_lso("E x . bit1(x)")));
    CHECK_FALSE(evaluate(s, parse_lso("A x . bit1(x)")));
    CHECK(evaluate(s, parse_lso("E x . (E y . (link1(x,y) & link1(y,x)))")));
    CHECK(evaluate(s, parse_lso("E x . (E y ~ x . link2(x,y))")));
    CHECK_FALSE(evaluate(s, parse_lso("E x . link2(x,x)")));
    CHECK_THROWS_WITH_AS(evaluate(s, parse_lso("bit1(x)")),
                         doctest::Contains("UnboundVariable"), Error);
}

TEST_CASE("bounded quantifiers follow the adjacency and radius semantics") {
    auto s = rep(path(3)); // n0 - n1 - n2, no labels
    VariableAssignment a;
    a.fo["x"] = Elem{"n0", 0};
    // plain bound: adjacent elements only, anchor excluded
    CHECK(evaluate(s, parse_lso("E y ~ x . y=y"), a));
    CHECK_FALSE(evaluate(s, parse_lso("E y ~ x . y=x"), a));
    // radius r includes the anchor and everything within distance r
    CHECK(evaluate(s, parse_lso("E <0> y ~ x . y=x"), a));
    CHECK_FALSE(evaluate(s, parse_lso("E <1> y ~ x . (!y=x & !link1(x,y))"), a));
    CHECK(evaluate(s, parse_lso("E <2> y ~ x . (!y=x & !link1(x,y))"), a));
    // universal dual
    CHECK(evaluate(s, parse_lso("A <1> y ~ x . (y=x | link1(x,y))"), a));
}

TEST_CASE("node restriction ignores bit elements") {
    LabeledGraph g;
    g.add_node("a", "01");
    g.add_node("b", "1");
    g.add_edge("a", "b");
    auto s = rep(g);
    // 2 of the 5 elements are nodes
    CHECK(evaluate(s, parse_lso("AN x . (E y ~ x . link1(x,y))")));
    CHECK_FALSE(evaluate(s, parse_lso("A x . (E y ~ x . (link1(x,y) | link1(y,x)))")));
    CHECK(evaluate(s, parse_lso("EN x . (E y ~ x . (link2(x,y) & bit1(y)))")));
}

TEST_CASE("sugar expansion preserves meaning") {
    const char* texts[] = {
        "A x . (bit1(x) -> (E y ~ x . bit1(y)))",
        "EN x . (A <1> y ~ x . (y=x | link1(x,y) | link2(x,y)))",
        "A2 P:1 . ((E x . P(x)) | (A x . !P(x)))",
        "(E x . bit1(x)) <-> !(A x . !bit1(x))",
        "AN x . (EN y ~ x . link1(x,y))",
    };
    LabeledGraph graphs[] = {path(2, "1"), cycle(3, "0"), cycle(4, "1"), path(3, "10")};
    EvalOptions opts;
    opts.max_domain_arity1 = 9; // path(3, "10") has nine elements
    for (const char* t : texts) {
        auto f = parse_lso(t);
        auto core = expand_sugar(f);
        for (const auto& g : graphs) {
            CAPTURE(t);
            CAPTURE(g.nodes.size());
            auto s = rep(g);
            CHECK(evaluate(s, f, {}, opts) == evaluate(s, core, {}, opts));
        }
    }
}

TEST_CASE("second-order enumeration caps are honest refusals") {
    auto big = rep(cycle(9)); // 9 elements > arity-1 cap of 8
    CHECK_THROWS_WITH_AS(evaluate(big, parse_lso("E2 P:1 . (E x . P(x))")),
                         doctest::Contains("SearchSpaceTooLarge"), Error);
    EvalOptions loose;
    loose.max_domain_arity1 = 9;
    CHECK(evaluate(big, parse_lso("E2 P:1 . (E x . P(x))"), {}, loose));

    auto six = rep(cycle(6)); // 6 elements > arity-2 cap of 5
    CHECK_THROWS_AS(evaluate(six, parse_lso("E2 P:2 . (E x . P(x,x))")), Error);
    CHECK_THROWS_AS(evaluate(rep(cycle(3)), parse_lso("E2 P:3 . (E x . P(x,x,x))")), Error);
    EvalOptions higher;
    higher.allow_higher_arity = true;
    CHECK(evaluate(rep(cycle(3)), parse_lso("E2 P:3 . (E x . P(x,x,x))"), {}, higher));
}

TEST_CASE("classification of the library sentences") {
    CHECK(classify(library_formula("allselected")).str() == "LFO");
    auto c3 = classify(library_formula("colorable3"));
    CHECK(c3.kind == FragmentTag::Sigma);
    CHECK(c3.level == 1);
    CHECK(c3.monadic);
    auto nas = classify(library_formula("notallselected"));
    CHECK(nas.kind == FragmentTag::Sigma);
    CHECK(nas.level == 3);
    auto ham = classify(library_formula("hamiltonian"));
    CHECK(ham.kind == FragmentTag::Sigma);
    CHECK(ham.level == 5);
    auto nham = classify(library_formula("nonhamiltonian"));
    CHECK(nham.kind == FragmentTag::Pi);
    CHECK(nham.level == 4);

    CHECK(classify(parse_lso("E y ~ x . bit1(y)")).kind == FragmentTag::BFL);
    CHECK(classify(parse_lso("E x . bit1(x)")).kind == FragmentTag::FO);
    CHECK_THROWS_AS(library_formula("nope"), Error);
}

TEST_CASE("nesting radius counts bounded depth after expansion") {
    CHECK(nesting_radius(parse_lso("bit1(x)")) == 0);
    CHECK(nesting_radius(parse_lso("E y ~ x . (E z ~ y . link1(y,z))")) == 2);
    // radius sugar unfolds into that many nested bounded quantifiers
    CHECK(nesting_radius(parse_lso("E <3> y ~ x . bit1(y)")) == 3);
    CHECK(nesting_radius(library_formula("allselected")) >= 1);
}

TEST_CASE("library membership and bodies") {
    auto names = library_formula_names();
    CHECK(std::set<std::string>(names.begin(), names.end()) ==
          std::set<std::string>{"allselected", "colorable3", "notallselected", "hamiltonian",
                                "nonhamiltonian"});
    for (const auto& body : library_bfl_bodies()) {
        CAPTURE(body.name);
        auto f = body.formula;
        CHECK(classify(f).kind == FragmentTag::BFL);
        auto fv = free_vars(f);
        CHECK(fv.fo == std::set<std::string>{body.var});
        CHECK(fv.so == body.so_vars);
    }
}

TEST_CASE("memoization does not change verdicts") {
    auto c3 = library_formula("colorable3");
    auto nested = parse_lso("E2 P:1 . (A x . (E y . (P(x) -> (P(y) | link1(x,y)))))");
    for (const auto& g : {path(2, "1"), path(3, "0"), cycle(3), cycle(4)}) {
        auto s = rep(g);
        EvalOptions memo, plain;
        plain.memoize = false;
        CHECK(evaluate(s, c3, {}, memo) == evaluate(s, c3, {}, plain));
        CHECK(evaluate(s, nested, {}, memo) == evaluate(s, nested, {}, plain));
    }
}
