#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lso/error.hpp"

namespace lso {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// AST of the local second-order logic. Core constructors: True/False, Bit,
// Link, Eq, SOAtom, Not, Or, unbounded/bounded first-order Exists, and
// second-order Exists. Everything else (And/Implies/Iff, radius-bounded and
// node-restricted quantifiers, universal duals) is sugar that expand_sugar
// rewrites away.
struct Formula {
    enum Kind {
        True, False,
        Bit,      // bit index (var)
        Link,     // link index (var, var2)
        Eq,       // var = var2
        SOAtom,   // sovar(args...)
        Not, Or, And, Implies, Iff,
        FOQuant,  // var bound; var2 = anchor ("" if unbounded); radius >= 0 for <=r sugar
        SOQuant,  // sovar : arity
    } kind;

    int index = 1;              // Bit/Link relation index, 1-based
    std::string var, var2;
    std::string sovar;
    std::vector<std::string> args;
    int arity = 0;
    bool universal = false;       // quantifier polarity
    bool node_restricted = false; // EN/AN sugar
    int radius = -1;              // -1 = plain; >= 0 = "within distance radius"
    FormulaPtr lhs, rhs;

    static FormulaPtr mk_true();
    static FormulaPtr mk_false();
    static FormulaPtr mk_bit(int i, std::string x);
    static FormulaPtr mk_link(int i, std::string x, std::string y);
    static FormulaPtr mk_eq(std::string x, std::string y);
    static FormulaPtr mk_soatom(std::string X, std::vector<std::string> args);
    static FormulaPtr mk_not(FormulaPtr f);
    static FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
    static FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
    static FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
    static FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b);
    static FormulaPtr mk_exists(std::string x, FormulaPtr f, bool universal = false,
                                bool node_restricted = false);
    static FormulaPtr mk_exists_bounded(std::string y, std::string anchor, FormulaPtr f,
                                        bool universal = false, bool node_restricted = false,
                                        int radius = -1);
    static FormulaPtr mk_exists_so(std::string X, int arity, FormulaPtr f,
                                   bool universal = false);
};

FormulaPtr parse_lso(const std::string& text);
std::string format_lso(const FormulaPtr& f);

// Free first-order / second-order variables (second-order with arities).
struct FreeVars {
    std::set<std::string> fo;
    std::map<std::string, int> so;
};
FreeVars free_vars(const FormulaPtr& f);

// Capture-avoiding substitution of first-order variable `from` by `to`.
FormulaPtr substitute_fo(const FormulaPtr& f, const std::string& from, const std::string& to);

// Rewrites all sugar into the core constructors. Radius-bounded quantifiers
// unfold per the inductive definition; node restriction goes through IsNode;
// universals become negated existentials.
FormulaPtr expand_sugar(const FormulaPtr& f);

// IsNode(x) = no element points to x via link 2.
FormulaPtr is_node(const std::string& x);

struct FragmentTag {
    enum Kind { FO, BFL, LFO, Sigma, Pi } kind;
    int level = 0; // meaningful for Sigma/Pi; Sigma(0) = Pi(0) = LFO
    bool monadic = true;

    std::string str() const;
};

// Smallest fragment containing f. Throws Error("NotClassifiable") when f fits
// none of FO / BFL / LFO / Sigma(l) / Pi(l).
FragmentTag classify(const FormulaPtr& f);

// Maximum nesting depth of bounded first-order quantifiers after expansion.
int nesting_radius(const FormulaPtr& f);

} // namespace lso
