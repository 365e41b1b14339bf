#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lso/error.hpp"

namespace lso {

// Boolean formulas used as node labels of Boolean graphs.
// Concrete syntax: variables [a-z][a-z0-9_]*, operators ! & | with the usual
// precedence (! > & > |), parentheses, constants "0" and "1".
struct BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
    enum Kind { Var, Not, And, Or, Const } kind;
    std::string var;       // Var
    bool value = false;    // Const
    BoolExprPtr lhs, rhs;  // Not uses lhs only

    static BoolExprPtr mk_var(std::string v);
    static BoolExprPtr mk_const(bool b);
    static BoolExprPtr mk_not(BoolExprPtr e);
    static BoolExprPtr mk_and(BoolExprPtr a, BoolExprPtr b);
    static BoolExprPtr mk_or(BoolExprPtr a, BoolExprPtr b);
};

BoolExprPtr parse_boolexpr(const std::string& text);
std::string format_boolexpr(const BoolExprPtr& e);

std::set<std::string> boolexpr_vars(const BoolExprPtr& e);
bool eval_boolexpr(const BoolExprPtr& e, const std::map<std::string, bool>& valuation);

// A literal is a variable with a sign; a 3-CNF is a list of <=3-literal clauses.
struct Literal {
    std::string var;
    bool positive = true;
    auto operator<=>(const Literal&) const = default;
};
using Clause = std::vector<Literal>;
using Cnf = std::vector<Clause>;

// Parses a label of the shape (l|l|l)&(l|l)&... produced by format_cnf.
// Throws Error("Not3CNF") if any clause has more than three literals.
Cnf parse_3cnf(const std::string& text);
std::string format_cnf(const Cnf& cnf);
BoolExprPtr cnf_to_expr(const Cnf& cnf);

// Tseytin transformation: equisatisfiable 3-CNF with auxiliary variables
// named <prefix>t0, <prefix>t1, ...
Cnf tseytin(const BoolExprPtr& e, const std::string& prefix);

} // namespace lso
