#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lso/formula.hpp"
#include "lso/structure.hpp"

namespace lso {

// Interpretation of a second-order variable: set of arity-tuples over the
// structure's domain, stored as a bitmask. Tuple (e_0, ..., e_{k-1}) maps to
// bit sum_i idx(e_i) * n^i where idx is the position in the sorted domain and
// n the cardinality. Enumeration therefore requires n^arity <= 64.
struct Relation {
    int arity = 1;
    std::uint64_t mask = 0;
};

struct VariableAssignment {
    std::map<std::string, Elem> fo;
    std::map<std::string, Relation> so;
};

struct EvalOptions {
    // Guards against the doubly exponential blowup of second-order
    // enumeration: refused (SearchSpaceTooLarge) rather than answered wrong.
    int max_domain_arity1 = 8;
    int max_domain_arity2 = 5;
    bool allow_higher_arity = false; // arity >= 3 still needs n^arity <= 63
    bool memoize = true;
};

// Model checking over a finite structure. Sugar (universals, node
// restriction, radius bounds, And/Implies/Iff) is interpreted directly with
// the same semantics as its expansion. Throws Error codes UnboundVariable,
// ArityMismatch, SearchSpaceTooLarge.
bool evaluate(const RelationalStructure& s, const FormulaPtr& f,
              const VariableAssignment& assignment = {}, const EvalOptions& opts = {});

// Convenience: evaluate a sentence with one free variable bound to e.
bool evaluate_at(const RelationalStructure& s, const FormulaPtr& f, const std::string& var,
                 const Elem& e, const EvalOptions& opts = {});

} // namespace lso
