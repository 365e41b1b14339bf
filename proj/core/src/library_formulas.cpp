#include "lso/library_formulas.hpp"

namespace lso {

namespace {

using F = Formula;

FormulaPtr set1(const std::string& X, const std::string& a) { return F::mk_soatom(X, {a}); }
FormulaPtr rel2(const std::string& X, const std::string& a, const std::string& b) {
    return F::mk_soatom(X, {a, b});
}

} // namespace

FormulaPtr lib_is_selected(const std::string& x) {
    // E y ~ x . (bit1(y) & !E z ~ y . (link1(z,y) | link1(y,z)))
    auto isolated_bit = F::mk_not(F::mk_exists_bounded(
        "z", "y", F::mk_or(F::mk_link(1, "z", "y"), F::mk_link(1, "y", "z"))));
    return F::mk_exists_bounded("y", x, F::mk_and(F::mk_bit(1, "y"), isolated_bit));
}

FormulaPtr lib_allselected() {
    return F::mk_exists("x", lib_is_selected("x"), /*universal=*/true, /*node_restricted=*/true);
}

FormulaPtr lib_well_colored(const std::string& x) {
    const std::string colors[3] = {"C0", "C1", "C2"};
    auto some = F::mk_or(F::mk_or(set1(colors[0], x), set1(colors[1], x)), set1(colors[2], x));
    FormulaPtr at_most_one;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            auto clash = F::mk_not(F::mk_and(set1(colors[i], x), set1(colors[j], x)));
            at_most_one = at_most_one ? F::mk_and(at_most_one, clash) : clash;
        }
    FormulaPtr differs;
    for (int i = 0; i < 3; ++i) {
        auto clash = F::mk_not(F::mk_and(set1(colors[i], x), set1(colors[i], "y")));
        differs = differs ? F::mk_and(differs, clash) : clash;
    }
    auto proper = F::mk_exists_bounded("y", x, differs, /*universal=*/true, /*node_restricted=*/true);
    return F::mk_and(F::mk_and(some, at_most_one), proper);
}

FormulaPtr lib_colorable3() {
    auto body = F::mk_exists("x", lib_well_colored("x"), true, true);
    for (const std::string& c : {"C2", "C1", "C0"})
        body = F::mk_exists_so(c, 1, body);
    return body;
}

FormulaPtr lib_points_to(const std::string& x,
                         const std::function<FormulaPtr(const std::string&)>& psi) {
    // unique parent within distance 1 (possibly x itself)
    auto only_y = F::mk_exists_bounded(
        "z", x, F::mk_implies(rel2("P", x, "z"), F::mk_eq("z", "y")),
        /*universal=*/true, /*node_restricted=*/true, /*radius=*/1);
    auto unique_parent = F::mk_exists_bounded(
        "y", x, F::mk_and(rel2("P", x, "y"), only_y),
        /*universal=*/false, /*node_restricted=*/true, /*radius=*/1);
    // roots are self-parented, satisfy psi, and carry the base parity
    auto root_case =
        F::mk_implies(rel2("P", x, x), F::mk_and(psi(x), set1("Y", x)));
    // non-roots pass the X/Y parity toward their parent
    auto parity = F::mk_iff(set1("Y", x),
                            F::mk_not(F::mk_iff(set1("Y", "y"), set1("X", x))));
    auto child_case = F::mk_implies(
        F::mk_not(rel2("P", x, x)),
        F::mk_exists_bounded("y", x, F::mk_and(rel2("P", x, "y"), parity),
                             /*universal=*/false, /*node_restricted=*/true));
    return F::mk_and(F::mk_and(unique_parent, root_case), child_case);
}

FormulaPtr lib_notallselected() {
    auto body = lib_points_to("x", [](const std::string& v) {
        return F::mk_not(lib_is_selected(v));
    });
    auto fo = F::mk_exists("x", body, true, true);
    auto y = F::mk_exists_so("Y", 1, fo);
    auto xq = F::mk_exists_so("X", 1, y, /*universal=*/true);
    return F::mk_exists_so("P", 2, xq);
}

FormulaPtr lib_degree_two(const std::string& x) {
    auto h_both = [&](const std::string& y) {
        return F::mk_and(rel2("H", x, y), rel2("H", y, x));
    };
    auto closed = F::mk_exists_bounded(
        "z", x,
        F::mk_implies(F::mk_or(rel2("H", x, "z"), rel2("H", "z", x)),
                      F::mk_or(F::mk_eq("z", "y1"), F::mk_eq("z", "y2"))),
        /*universal=*/true, /*node_restricted=*/true);
    auto body = F::mk_and(
        F::mk_and(F::mk_not(F::mk_eq("y1", "y2")), F::mk_and(h_both("y1"), h_both("y2"))),
        closed);
    return F::mk_exists_bounded(
        "y1", x, F::mk_exists_bounded("y2", x, body, false, true), false, true);
}

FormulaPtr lib_in_agreement_on(const std::string& set_var, const std::string& x) {
    return F::mk_exists_bounded("w", x, F::mk_iff(set1(set_var, x), set1(set_var, "w")),
                                /*universal=*/true, /*node_restricted=*/true);
}

FormulaPtr lib_discontinuity_at(const std::string& x) {
    auto flip = F::mk_iff(set1("S", x), F::mk_not(set1("S", "y")));
    return F::mk_exists_bounded("y", x, F::mk_and(rel2("H", x, "y"), flip),
                                /*universal=*/false, /*node_restricted=*/true);
}

FormulaPtr lib_hamiltonian() {
    // connectivity test: the C-marked side of any candidate cut must see an
    // H-edge crossing every S-labeling discontinuity
    auto trivial_case =
        F::mk_implies(F::mk_not(set1("C", "x")), lib_in_agreement_on("S", "x"));
    auto partitioned_case = F::mk_implies(
        set1("C", "x"), lib_points_to("x", [](const std::string& v) {
            return lib_discontinuity_at(v);
        }));
    auto connectivity =
        F::mk_and(F::mk_and(lib_in_agreement_on("C", "x"), trivial_case), partitioned_case);
    auto body = F::mk_and(lib_degree_two("x"), connectivity);
    auto fo = F::mk_exists("x", body, true, true);
    auto yq = F::mk_exists_so("Y", 1, fo);
    auto xq = F::mk_exists_so("X", 1, yq, true);
    auto pq = F::mk_exists_so("P", 2, xq);
    auto cq = F::mk_exists_so("C", 1, pq);
    auto sq = F::mk_exists_so("S", 1, cq, true);
    return F::mk_exists_so("H", 2, sq);
}

FormulaPtr lib_nonhamiltonian() {
    auto invalid_case = F::mk_implies(
        F::mk_not(set1("C", "x")), lib_points_to("x", [](const std::string& v) {
            return F::mk_not(lib_degree_two(v));
        }));
    auto disjoint_case = F::mk_implies(
        set1("C", "x"),
        F::mk_and(F::mk_not(lib_discontinuity_at("x")),
                  lib_points_to("x", [](const std::string& v) {
                      return F::mk_not(lib_in_agreement_on("S", v));
                  })));
    auto body =
        F::mk_and(F::mk_and(lib_in_agreement_on("C", "x"), invalid_case), disjoint_case);
    auto fo = F::mk_exists("x", body, true, true);
    auto yq = F::mk_exists_so("Y", 1, fo);
    auto xq = F::mk_exists_so("X", 1, yq, true);
    auto pq = F::mk_exists_so("P", 2, xq);
    auto sq = F::mk_exists_so("S", 1, pq);
    auto cq = F::mk_exists_so("C", 1, sq);
    return F::mk_exists_so("H", 2, cq, /*universal=*/true);
}

FormulaPtr library_formula(const std::string& name) {
    if (name == "allselected") return lib_allselected();
    if (name == "colorable3") return lib_colorable3();
    if (name == "notallselected") return lib_notallselected();
    if (name == "hamiltonian") return lib_hamiltonian();
    if (name == "nonhamiltonian") return lib_nonhamiltonian();
    throw Error("Unsupported", "unknown library formula '" + name + "'");
}

std::vector<std::string> library_formula_names() {
    return {"allselected", "colorable3", "notallselected", "hamiltonian", "nonhamiltonian"};
}

std::vector<LibraryBody> library_bfl_bodies() {
    std::vector<LibraryBody> out;
    out.push_back({"is_selected", "x", {}, lib_is_selected("x")});
    out.push_back({"is_node", "x", {}, is_node("x")});
    out.push_back({"well_colored", "x",
                   {{"C0", 1}, {"C1", 1}, {"C2", 1}},
                   lib_well_colored("x")});
    out.push_back({"degree_two", "x", {{"H", 2}}, lib_degree_two("x")});
    out.push_back({"in_agreement_on_c", "x", {{"C", 1}}, lib_in_agreement_on("C", "x")});
    out.push_back({"discontinuity_at", "x", {{"H", 2}, {"S", 1}}, lib_discontinuity_at("x")});
    out.push_back({"points_to_unselected", "x",
                   {{"P", 2}, {"X", 1}, {"Y", 1}},
                   lib_points_to("x", [](const std::string& v) {
                       return Formula::mk_not(lib_is_selected(v));
                   })});
    return out;
}

} // namespace lso
