#include "lso/boolexpr.hpp"

#include <cctype>
#include <functional>

namespace lso {

BoolExprPtr BoolExpr::mk_var(std::string v) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Var;
    e->var = std::move(v);
    return e;
}
BoolExprPtr BoolExpr::mk_const(bool b) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Const;
    e->value = b;
    return e;
}
BoolExprPtr BoolExpr::mk_not(BoolExprPtr x) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Not;
    e->lhs = std::move(x);
    return e;
}
BoolExprPtr BoolExpr::mk_and(BoolExprPtr a, BoolExprPtr b) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = And;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
BoolExprPtr BoolExpr::mk_or(BoolExprPtr a, BoolExprPtr b) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Or;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

namespace {

struct BoolParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit BoolParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw Error("ParseError", "boolean formula, position " + std::to_string(pos) + ": " + msg);
    }

    BoolExprPtr parse() {
        auto e = parse_or();
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        return e;
    }
    BoolExprPtr parse_or() {
        auto e = parse_and();
        while (eat('|')) e = BoolExpr::mk_or(e, parse_and());
        return e;
    }
    BoolExprPtr parse_and() {
        auto e = parse_unary();
        while (eat('&')) e = BoolExpr::mk_and(e, parse_unary());
        return e;
    }
    BoolExprPtr parse_unary() {
        if (eat('!')) return BoolExpr::mk_not(parse_unary());
        if (eat('(')) {
            auto e = parse_or();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        skip_ws();
        if (pos < text.size() && (text[pos] == '0' || text[pos] == '1')) {
            bool v = text[pos] == '1';
            ++pos;
            return BoolExpr::mk_const(v);
        }
        if (pos >= text.size() || !std::islower(static_cast<unsigned char>(text[pos])))
            fail("expected variable");
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::islower(static_cast<unsigned char>(text[pos])) ||
                std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return BoolExpr::mk_var(text.substr(start, pos - start));
    }
};

} // namespace

BoolExprPtr parse_boolexpr(const std::string& text) {
    return BoolParser(text).parse();
}

std::string format_boolexpr(const BoolExprPtr& e) {
    switch (e->kind) {
    case BoolExpr::Var: return e->var;
    case BoolExpr::Const: return e->value ? "1" : "0";
    case BoolExpr::Not: return "!" + format_boolexpr(e->lhs);
    case BoolExpr::And: return "(" + format_boolexpr(e->lhs) + "&" + format_boolexpr(e->rhs) + ")";
    case BoolExpr::Or: return "(" + format_boolexpr(e->lhs) + "|" + format_boolexpr(e->rhs) + ")";
    }
    throw Error("Internal", "bad BoolExpr kind");
}

std::set<std::string> boolexpr_vars(const BoolExprPtr& e) {
    std::set<std::string> out;
    std::function<void(const BoolExprPtr&)> walk = [&](const BoolExprPtr& x) {
        if (!x) return;
        if (x->kind == BoolExpr::Var) out.insert(x->var);
        walk(x->lhs);
        walk(x->rhs);
    };
    walk(e);
    return out;
}

bool eval_boolexpr(const BoolExprPtr& e, const std::map<std::string, bool>& valuation) {
    switch (e->kind) {
    case BoolExpr::Var: {
        auto it = valuation.find(e->var);
        if (it == valuation.end()) throw Error("UnboundVariable", "no value for '" + e->var + "'");
        return it->second;
    }
    case BoolExpr::Const: return e->value;
    case BoolExpr::Not: return !eval_boolexpr(e->lhs, valuation);
    case BoolExpr::And: return eval_boolexpr(e->lhs, valuation) && eval_boolexpr(e->rhs, valuation);
    case BoolExpr::Or: return eval_boolexpr(e->lhs, valuation) || eval_boolexpr(e->rhs, valuation);
    }
    throw Error("Internal", "bad BoolExpr kind");
}

Cnf parse_3cnf(const std::string& text) {
    auto expr = parse_boolexpr(text);
    Cnf cnf;
    std::function<void(const BoolExprPtr&)> split_and = [&](const BoolExprPtr& e) {
        if (e->kind == BoolExpr::And) {
            split_and(e->lhs);
            split_and(e->rhs);
            return;
        }
        Clause clause;
        std::function<void(const BoolExprPtr&)> split_or = [&](const BoolExprPtr& d) {
            if (d->kind == BoolExpr::Or) {
                split_or(d->lhs);
                split_or(d->rhs);
            } else if (d->kind == BoolExpr::Var) {
                clause.push_back({d->var, true});
            } else if (d->kind == BoolExpr::Not && d->lhs->kind == BoolExpr::Var) {
                clause.push_back({d->lhs->var, false});
            } else {
                throw Error("Not3CNF", "clause contains a non-literal");
            }
        };
        split_or(e);
        if (clause.size() > 3) throw Error("Not3CNF", "clause with more than three literals");
        cnf.push_back(clause);
    };
    split_and(expr);
    return cnf;
}

std::string format_cnf(const Cnf& cnf) {
    std::string out;
    for (std::size_t i = 0; i < cnf.size(); ++i) {
        if (i) out += "&";
        out += "(";
        for (std::size_t j = 0; j < cnf[i].size(); ++j) {
            if (j) out += "|";
            if (!cnf[i][j].positive) out += "!";
            out += cnf[i][j].var;
        }
        out += ")";
    }
    return out;
}

BoolExprPtr cnf_to_expr(const Cnf& cnf) {
    BoolExprPtr conj;
    for (const auto& clause : cnf) {
        BoolExprPtr disj;
        for (const auto& lit : clause) {
            BoolExprPtr l = BoolExpr::mk_var(lit.var);
            if (!lit.positive) l = BoolExpr::mk_not(l);
            disj = disj ? BoolExpr::mk_or(disj, l) : l;
        }
        if (!disj) disj = BoolExpr::mk_const(false); // empty clause
        conj = conj ? BoolExpr::mk_and(conj, disj) : disj;
    }
    return conj ? conj : BoolExpr::mk_const(true);
}

namespace {

// Constant folding so Tseytin never sees constants.
BoolExprPtr simplify(const BoolExprPtr& e) {
    switch (e->kind) {
    case BoolExpr::Var:
    case BoolExpr::Const: return e;
    case BoolExpr::Not: {
        auto a = simplify(e->lhs);
        if (a->kind == BoolExpr::Const) return BoolExpr::mk_const(!a->value);
        return BoolExpr::mk_not(a);
    }
    case BoolExpr::And: {
        auto a = simplify(e->lhs), b = simplify(e->rhs);
        if (a->kind == BoolExpr::Const) return a->value ? b : a;
        if (b->kind == BoolExpr::Const) return b->value ? a : b;
        return BoolExpr::mk_and(a, b);
    }
    case BoolExpr::Or: {
        auto a = simplify(e->lhs), b = simplify(e->rhs);
        if (a->kind == BoolExpr::Const) return a->value ? a : b;
        if (b->kind == BoolExpr::Const) return b->value ? b : a;
        return BoolExpr::mk_or(a, b);
    }
    }
    throw Error("Internal", "bad BoolExpr kind");
}

// Direct CNF extraction when the formula is already a conjunction of
// <=3-literal clauses; avoids needless auxiliaries.
bool try_direct_cnf(const BoolExprPtr& e, Cnf& out) {
    try {
        out = parse_3cnf(format_boolexpr(e));
        return true;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

Cnf tseytin(const BoolExprPtr& input, const std::string& prefix) {
    auto e = simplify(input);
    if (e->kind == BoolExpr::Const) {
        std::string v = prefix + "t0";
        if (e->value) return {{{v, true}, {v, false}}}; // tautology
        return {{{v, true}, {v, true}, {v, true}}, {{v, false}, {v, false}, {v, false}}};
    }
    Cnf direct;
    if (try_direct_cnf(e, direct)) return direct;

    Cnf cnf;
    int counter = 0;
    // Returns the literal equivalent to the subformula, adding gate clauses.
    std::function<Literal(const BoolExprPtr&)> gate = [&](const BoolExprPtr& x) -> Literal {
        switch (x->kind) {
        case BoolExpr::Var: return {x->var, true};
        case BoolExpr::Not: {
            Literal a = gate(x->lhs);
            return {a.var, !a.positive};
        }
        case BoolExpr::And: {
            Literal a = gate(x->lhs), b = gate(x->rhs);
            Literal v{prefix + "t" + std::to_string(counter++), true};
            cnf.push_back({{v.var, false}, a});
            cnf.push_back({{v.var, false}, b});
            cnf.push_back({v, {a.var, !a.positive}, {b.var, !b.positive}});
            return v;
        }
        case BoolExpr::Or: {
            Literal a = gate(x->lhs), b = gate(x->rhs);
            Literal v{prefix + "t" + std::to_string(counter++), true};
            cnf.push_back({v, {a.var, !a.positive}});
            cnf.push_back({v, {b.var, !b.positive}});
            cnf.push_back({{v.var, false}, a, b});
            return v;
        }
        case BoolExpr::Const: break;
        }
        throw Error("Internal", "constant reached Tseytin gate");
    };
    Literal root = gate(e);
    cnf.push_back({root});
    return cnf;
}

} // namespace lso
