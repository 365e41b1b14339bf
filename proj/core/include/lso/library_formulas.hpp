#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lso/formula.hpp"

namespace lso {

// The worked sentences of the logic, shipped as constructors so tests and the
// CLI can reference them by name. All bodies take the name of their free
// first-order variable; internal bound variables are chosen to avoid capture
// for the usual choice "x".

FormulaPtr lib_is_selected(const std::string& x);         // label is exactly "1"
FormulaPtr lib_allselected();                              // LFO sentence
FormulaPtr lib_well_colored(const std::string& x);         // free C0,C1,C2
FormulaPtr lib_colorable3();                               // Sigma(1), monadic
// Spanning-forest pointer argument: every node points into a tree whose root
// satisfies psi; the X/Y parity exchange forces the forest to be grounded.
// Free set variables P (arity 2), X, Y (arity 1).
FormulaPtr lib_points_to(const std::string& x,
                         const std::function<FormulaPtr(const std::string&)>& psi);
FormulaPtr lib_notallselected();                           // Sigma(3)
FormulaPtr lib_degree_two(const std::string& x);           // free H (arity 2)
FormulaPtr lib_in_agreement_on(const std::string& set_var, const std::string& x);
FormulaPtr lib_discontinuity_at(const std::string& x);     // free H, S
FormulaPtr lib_hamiltonian();                              // Sigma(5)
FormulaPtr lib_nonhamiltonian();                           // Pi(4)

// Lookup by name: allselected, colorable3, notallselected, hamiltonian,
// nonhamiltonian. Throws Error("Unsupported") otherwise.
FormulaPtr library_formula(const std::string& name);
std::vector<std::string> library_formula_names();

// The library's BFL bodies with their free variables, for locality checks.
struct LibraryBody {
    std::string name;
    std::string var;                    // free first-order variable
    std::map<std::string, int> so_vars; // free set variables with arities
    FormulaPtr formula;
};
std::vector<LibraryBody> library_bfl_bodies();

} // namespace lso
