#include "lso/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace lso {

namespace {

std::shared_ptr<Formula> node(Formula::Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

} // namespace

FormulaPtr Formula::mk_true() { return node(True); }
FormulaPtr Formula::mk_false() { return node(False); }

FormulaPtr Formula::mk_bit(int i, std::string x) {
    auto f = node(Bit);
    f->index = i;
    f->var = std::move(x);
    return f;
}
FormulaPtr Formula::mk_link(int i, std::string x, std::string y) {
    auto f = node(Link);
    f->index = i;
    f->var = std::move(x);
    f->var2 = std::move(y);
    return f;
}
FormulaPtr Formula::mk_eq(std::string x, std::string y) {
    auto f = node(Eq);
    f->var = std::move(x);
    f->var2 = std::move(y);
    return f;
}
FormulaPtr Formula::mk_soatom(std::string X, std::vector<std::string> args) {
    auto f = node(SOAtom);
    f->sovar = std::move(X);
    f->args = std::move(args);
    f->arity = static_cast<int>(f->args.size());
    return f;
}
FormulaPtr Formula::mk_not(FormulaPtr x) {
    auto f = node(Not);
    f->lhs = std::move(x);
    return f;
}
FormulaPtr Formula::mk_or(FormulaPtr a, FormulaPtr b) {
    auto f = node(Or);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}
FormulaPtr Formula::mk_and(FormulaPtr a, FormulaPtr b) {
    auto f = node(And);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}
FormulaPtr Formula::mk_implies(FormulaPtr a, FormulaPtr b) {
    auto f = node(Implies);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}
FormulaPtr Formula::mk_iff(FormulaPtr a, FormulaPtr b) {
    auto f = node(Iff);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}
FormulaPtr Formula::mk_exists(std::string x, FormulaPtr body, bool universal, bool node_restricted) {
    auto f = node(FOQuant);
    f->var = std::move(x);
    f->lhs = std::move(body);
    f->universal = universal;
    f->node_restricted = node_restricted;
    return f;
}
FormulaPtr Formula::mk_exists_bounded(std::string y, std::string anchor, FormulaPtr body,
                                      bool universal, bool node_restricted, int radius) {
    if (y == anchor)
        throw Error("SyntaxError", "bounded quantifier binds '" + y + "' with itself as anchor");
    auto f = node(FOQuant);
    f->var = std::move(y);
    f->var2 = std::move(anchor);
    f->lhs = std::move(body);
    f->universal = universal;
    f->node_restricted = node_restricted;
    f->radius = radius;
    return f;
}
FormulaPtr Formula::mk_exists_so(std::string X, int arity, FormulaPtr body, bool universal) {
    auto f = node(SOQuant);
    f->sovar = std::move(X);
    f->arity = arity;
    f->lhs = std::move(body);
    f->universal = universal;
    return f;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
    enum Type { Ident, SVar, Int, Sym, End } type;
    std::string text;
    int value = 0;
    std::size_t pos = 0;
};

struct Lexer {
    std::string text;
    std::size_t pos = 0;

    Token next() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) return {Token::End, "", 0, pos};
        std::size_t start = pos;
        char c = text[pos];
        if (text.compare(pos, 3, "<->") == 0) {
            pos += 3;
            return {Token::Sym, "<->", 0, start};
        }
        if (text.compare(pos, 2, "->") == 0) {
            pos += 2;
            return {Token::Sym, "->", 0, start};
        }
        if (std::string("().,~:=!&|<>").find(c) != std::string::npos) {
            ++pos;
            return {Token::Sym, std::string(1, c), 0, start};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            Token t{Token::Int, text.substr(pos, end - pos), std::stoi(text.substr(pos, end - pos)), start};
            pos = end;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
                ++end;
            std::string word = text.substr(pos, end - pos);
            pos = end;
            Token::Type type = std::isupper(static_cast<unsigned char>(c)) ? Token::SVar : Token::Ident;
            // E2/A2 and quantifier keywords are uppercase but not SVars.
            if (word == "E" || word == "A" || word == "EN" || word == "AN" || word == "E2" ||
                word == "A2")
                type = Token::Ident;
            return {type, word, 0, start};
        }
        throw Error("SyntaxError", "position " + std::to_string(pos) + ": unexpected character '" +
                                       std::string(1, c) + "'");
    }
};

struct Parser {
    Lexer lex;
    Token tok;

    explicit Parser(const std::string& text) : lex{text} { tok = lex.next(); }

    [[noreturn]] void fail(const std::string& msg) {
        throw Error("SyntaxError",
                    "position " + std::to_string(tok.pos) + ": " + msg + " (got '" + tok.text + "')");
    }
    void advance() { tok = lex.next(); }
    bool at_sym(const std::string& s) const { return tok.type == Token::Sym && tok.text == s; }
    void expect_sym(const std::string& s) {
        if (!at_sym(s)) fail("expected '" + s + "'");
        advance();
    }
    std::string expect_var() {
        if (tok.type != Token::Ident || tok.text == "true" || tok.text == "false")
            fail("expected first-order variable");
        std::string v = tok.text;
        advance();
        return v;
    }

    FormulaPtr parse() {
        auto f = parse_iff();
        if (tok.type != Token::End) fail("trailing input");
        return f;
    }

    bool at_quantifier() const {
        return tok.type == Token::Ident &&
               (tok.text == "E" || tok.text == "A" || tok.text == "EN" || tok.text == "AN" ||
                tok.text == "E2" || tok.text == "A2");
    }

    FormulaPtr parse_iff() {
        auto f = parse_implies();
        while (at_sym("<->")) {
            advance();
            f = Formula::mk_iff(f, parse_implies());
        }
        return f;
    }
    FormulaPtr parse_implies() {
        auto f = parse_or();
        if (at_sym("->")) {
            advance();
            return Formula::mk_implies(f, parse_implies());
        }
        return f;
    }
    FormulaPtr parse_or() {
        auto f = parse_and();
        while (at_sym("|")) {
            advance();
            f = Formula::mk_or(f, parse_and());
        }
        return f;
    }
    FormulaPtr parse_and() {
        auto f = parse_unary();
        while (at_sym("&")) {
            advance();
            f = Formula::mk_and(f, parse_unary());
        }
        return f;
    }
    FormulaPtr parse_unary() {
        if (at_sym("!")) {
            advance();
            return Formula::mk_not(parse_unary());
        }
        if (at_quantifier()) return parse_quantifier();
        return parse_atom();
    }

    FormulaPtr parse_quantifier() {
        std::string q = tok.text;
        advance();
        if (q == "E2" || q == "A2") {
            if (tok.type != Token::SVar) fail("expected second-order variable");
            std::string X = tok.text;
            advance();
            expect_sym(":");
            if (tok.type != Token::Int) fail("expected arity");
            int k = tok.value;
            if (k < 1) fail("arity must be positive");
            advance();
            expect_sym(".");
            return Formula::mk_exists_so(X, k, parse_iff(), q == "A2");
        }
        bool universal = q[0] == 'A';
        bool restricted = q.size() > 1; // EN / AN
        int radius = -1;
        if (at_sym("<")) {
            advance();
            if (tok.type != Token::Int) fail("expected radius");
            radius = tok.value;
            advance();
            expect_sym(">");
        }
        std::string v = expect_var();
        if (at_sym("~")) {
            advance();
            std::string anchor = expect_var();
            expect_sym(".");
            return Formula::mk_exists_bounded(v, anchor, parse_iff(), universal, restricted, radius);
        }
        if (radius >= 0) fail("radius requires a bounded quantifier");
        expect_sym(".");
        return Formula::mk_exists(v, parse_iff(), universal, restricted);
    }

    FormulaPtr parse_atom() {
        if (tok.type == Token::Ident && tok.text == "true") {
            advance();
            return Formula::mk_true();
        }
        if (tok.type == Token::Ident && tok.text == "false") {
            advance();
            return Formula::mk_false();
        }
        // compact spellings bit1 / link2 lex as single identifiers
        if (tok.type == Token::Ident && tok.text.size() > 3 && tok.text.rfind("bit", 0) == 0 &&
            std::all_of(tok.text.begin() + 3, tok.text.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int i = std::stoi(tok.text.substr(3));
            advance();
            expect_sym("(");
            std::string x = expect_var();
            expect_sym(")");
            return Formula::mk_bit(i, x);
        }
        if (tok.type == Token::Ident && tok.text.size() > 4 && tok.text.rfind("link", 0) == 0 &&
            std::all_of(tok.text.begin() + 4, tok.text.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int i = std::stoi(tok.text.substr(4));
            advance();
            expect_sym("(");
            std::string x = expect_var();
            expect_sym(",");
            std::string y = expect_var();
            expect_sym(")");
            return Formula::mk_link(i, x, y);
        }
        if (tok.type == Token::Ident && tok.text == "bit") {
            advance();
            if (tok.type != Token::Int) fail("expected bit index");
            int i = tok.value;
            advance();
            expect_sym("(");
            std::string x = expect_var();
            expect_sym(")");
            return Formula::mk_bit(i, x);
        }
        if (tok.type == Token::Ident && tok.text == "link") {
            advance();
            if (tok.type != Token::Int) fail("expected link index");
            int i = tok.value;
            advance();
            expect_sym("(");
            std::string x = expect_var();
            expect_sym(",");
            std::string y = expect_var();
            expect_sym(")");
            return Formula::mk_link(i, x, y);
        }
        if (tok.type == Token::SVar) {
            std::string X = tok.text;
            advance();
            expect_sym("(");
            std::vector<std::string> args{expect_var()};
            while (at_sym(",")) {
                advance();
                args.push_back(expect_var());
            }
            expect_sym(")");
            return Formula::mk_soatom(X, std::move(args));
        }
        if (at_sym("(")) {
            advance();
            auto f = parse_iff();
            expect_sym(")");
            return f;
        }
        if (tok.type == Token::Ident) {
            std::string x = expect_var();
            expect_sym("=");
            std::string y = expect_var();
            return Formula::mk_eq(x, y);
        }
        fail("expected formula");
    }
};

} // namespace

FormulaPtr parse_lso(const std::string& text) {
    return Parser(text).parse();
}

std::string format_lso(const FormulaPtr& f) {
    switch (f->kind) {
    case Formula::True: return "true";
    case Formula::False: return "false";
    case Formula::Bit: return "bit" + std::to_string(f->index) + "(" + f->var + ")";
    case Formula::Link:
        return "link" + std::to_string(f->index) + "(" + f->var + "," + f->var2 + ")";
    case Formula::Eq: return f->var + "=" + f->var2;
    case Formula::SOAtom: {
        std::string s = f->sovar + "(";
        for (std::size_t i = 0; i < f->args.size(); ++i) {
            if (i) s += ",";
            s += f->args[i];
        }
        return s + ")";
    }
    case Formula::Not: return "!" + format_lso(f->lhs);
    case Formula::Or: return "(" + format_lso(f->lhs) + " | " + format_lso(f->rhs) + ")";
    case Formula::And: return "(" + format_lso(f->lhs) + " & " + format_lso(f->rhs) + ")";
    case Formula::Implies: return "(" + format_lso(f->lhs) + " -> " + format_lso(f->rhs) + ")";
    case Formula::Iff: return "(" + format_lso(f->lhs) + " <-> " + format_lso(f->rhs) + ")";
    case Formula::FOQuant: {
        std::string q = f->universal ? "A" : "E";
        if (f->node_restricted) q += "N";
        std::string s = q + " ";
        if (f->radius >= 0) s += "<" + std::to_string(f->radius) + "> ";
        s += f->var;
        if (!f->var2.empty()) s += " ~ " + f->var2;
        return "(" + s + " . " + format_lso(f->lhs) + ")";
    }
    case Formula::SOQuant:
        return "(" + std::string(f->universal ? "A2 " : "E2 ") + f->sovar + ":" +
               std::to_string(f->arity) + " . " + format_lso(f->lhs) + ")";
    }
    throw Error("Internal", "bad Formula kind");
}

namespace {

// "bit1(x)" / "link2(x,y)" round-trip: the lexer splits bit1 into an
// identifier, so accept both spellings by normalizing on parse.
// (The printer uses the compact form; the grammar's "bit INT" also works.)

void collect_free(const FormulaPtr& f, std::set<std::string> bound_fo,
                  std::set<std::string> bound_so, FreeVars& out) {
    switch (f->kind) {
    case Formula::True:
    case Formula::False: return;
    case Formula::Bit:
        if (!bound_fo.count(f->var)) out.fo.insert(f->var);
        return;
    case Formula::Link:
    case Formula::Eq:
        if (!bound_fo.count(f->var)) out.fo.insert(f->var);
        if (!bound_fo.count(f->var2)) out.fo.insert(f->var2);
        return;
    case Formula::SOAtom:
        if (!bound_so.count(f->sovar)) out.so[f->sovar] = f->arity;
        for (const auto& a : f->args)
            if (!bound_fo.count(a)) out.fo.insert(a);
        return;
    case Formula::Not: collect_free(f->lhs, bound_fo, bound_so, out); return;
    case Formula::Or:
    case Formula::And:
    case Formula::Implies:
    case Formula::Iff:
        collect_free(f->lhs, bound_fo, bound_so, out);
        collect_free(f->rhs, bound_fo, bound_so, out);
        return;
    case Formula::FOQuant:
        if (!f->var2.empty() && !bound_fo.count(f->var2)) out.fo.insert(f->var2);
        bound_fo.insert(f->var);
        collect_free(f->lhs, std::move(bound_fo), std::move(bound_so), out);
        return;
    case Formula::SOQuant:
        bound_so.insert(f->sovar);
        collect_free(f->lhs, std::move(bound_fo), std::move(bound_so), out);
        return;
    }
}

void collect_all_names(const FormulaPtr& f, std::set<std::string>& out) {
    if (!f) return;
    out.insert(f->var);
    out.insert(f->var2);
    for (const auto& a : f->args) out.insert(a);
    collect_all_names(f->lhs, out);
    collect_all_names(f->rhs, out);
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    for (int i = 0;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (used.insert(cand).second) return cand;
    }
}

FormulaPtr subst(const FormulaPtr& f, const std::string& from, const std::string& to,
                 std::set<std::string>& used) {
    auto ren = [&](const std::string& v) { return v == from ? to : v; };
    switch (f->kind) {
    case Formula::True:
    case Formula::False: return f;
    case Formula::Bit: return Formula::mk_bit(f->index, ren(f->var));
    case Formula::Link: return Formula::mk_link(f->index, ren(f->var), ren(f->var2));
    case Formula::Eq: return Formula::mk_eq(ren(f->var), ren(f->var2));
    case Formula::SOAtom: {
        std::vector<std::string> args;
        for (const auto& a : f->args) args.push_back(ren(a));
        return Formula::mk_soatom(f->sovar, std::move(args));
    }
    case Formula::Not: return Formula::mk_not(subst(f->lhs, from, to, used));
    case Formula::Or: return Formula::mk_or(subst(f->lhs, from, to, used), subst(f->rhs, from, to, used));
    case Formula::And:
        return Formula::mk_and(subst(f->lhs, from, to, used), subst(f->rhs, from, to, used));
    case Formula::Implies:
        return Formula::mk_implies(subst(f->lhs, from, to, used), subst(f->rhs, from, to, used));
    case Formula::Iff:
        return Formula::mk_iff(subst(f->lhs, from, to, used), subst(f->rhs, from, to, used));
    case Formula::FOQuant: {
        std::string anchor = f->var2.empty() ? "" : ren(f->var2);
        if (f->var == from) {
            // binder shadows; only the anchor may change
            auto g = node(Formula::FOQuant);
            *g = *f;
            g->var2 = anchor;
            return g;
        }
        std::string bound = f->var;
        FormulaPtr body = f->lhs;
        if (bound == to) { // capture: rename the binder first
            std::string nb = fresh_name(bound, used);
            body = subst(body, bound, nb, used);
            bound = nb;
        }
        auto g = node(Formula::FOQuant);
        *g = *f;
        g->var = bound;
        g->var2 = anchor;
        g->lhs = subst(body, from, to, used);
        return g;
    }
    case Formula::SOQuant: {
        auto g = node(Formula::SOQuant);
        *g = *f;
        g->lhs = subst(f->lhs, from, to, used);
        return g;
    }
    }
    throw Error("Internal", "bad Formula kind");
}

} // namespace

FreeVars free_vars(const FormulaPtr& f) {
    FreeVars out;
    collect_free(f, {}, {}, out);
    return out;
}

FormulaPtr substitute_fo(const FormulaPtr& f, const std::string& from, const std::string& to) {
    std::set<std::string> used;
    collect_all_names(f, used);
    used.insert(from);
    used.insert(to);
    return subst(f, from, to, used);
}

FormulaPtr is_node(const std::string& x) {
    // IsNode(x) = ! E y ~ x . link2(y, x)
    std::string y = x == "isn" ? "isn2" : "isn";
    return Formula::mk_not(
        Formula::mk_exists_bounded(y, x, Formula::mk_link(2, y, x)));
}

namespace {

struct Expander {
    std::set<std::string> used;

    FormulaPtr expand(const FormulaPtr& f) {
        switch (f->kind) {
        case Formula::True:
        case Formula::False:
        case Formula::Bit:
        case Formula::Link:
        case Formula::Eq:
        case Formula::SOAtom: return f;
        case Formula::Not: return Formula::mk_not(expand(f->lhs));
        case Formula::Or: return Formula::mk_or(expand(f->lhs), expand(f->rhs));
        case Formula::And: // a & b == !(!a | !b)
            return Formula::mk_not(Formula::mk_or(Formula::mk_not(expand(f->lhs)),
                                                  Formula::mk_not(expand(f->rhs))));
        case Formula::Implies: return Formula::mk_or(Formula::mk_not(expand(f->lhs)), expand(f->rhs));
        case Formula::Iff: {
            auto a = expand(f->lhs), b = expand(f->rhs);
            // (a -> b) & (b -> a)
            auto imp1 = Formula::mk_or(Formula::mk_not(a), b);
            auto imp2 = Formula::mk_or(Formula::mk_not(b), a);
            return Formula::mk_not(
                Formula::mk_or(Formula::mk_not(imp1), Formula::mk_not(imp2)));
        }
        case Formula::FOQuant: return expand_fo(f);
        case Formula::SOQuant: {
            auto body = expand(f->lhs);
            if (f->universal)
                return Formula::mk_not(
                    Formula::mk_exists_so(f->sovar, f->arity, Formula::mk_not(body)));
            return Formula::mk_exists_so(f->sovar, f->arity, body);
        }
        }
        throw Error("Internal", "bad Formula kind");
    }

    FormulaPtr expand_fo(const FormulaPtr& f) {
        if (f->node_restricted) {
            auto inode = is_node(f->var);
            auto g = node(Formula::FOQuant);
            *g = *f;
            g->node_restricted = false;
            if (f->universal)
                g->lhs = Formula::mk_implies(inode, f->lhs);
            else
                g->lhs = Formula::mk_and(inode, f->lhs);
            return expand(g);
        }
        if (f->universal) {
            auto g = node(Formula::FOQuant);
            *g = *f;
            g->universal = false;
            g->lhs = Formula::mk_not(f->lhs);
            return Formula::mk_not(expand(g));
        }
        if (f->radius >= 0) {
            if (f->radius == 0)
                return expand(substitute_fo(f->lhs, f->var, f->var2));
            // E<r+1> y ~ x . phi  ==  E<r> y ~ x . (phi | E y' ~ y . phi[y/y'])
            std::string yp = fresh_name(f->var, used);
            auto inner = Formula::mk_exists_bounded(yp, f->var,
                                                    substitute_fo(f->lhs, f->var, yp));
            auto g = Formula::mk_exists_bounded(f->var, f->var2,
                                                Formula::mk_or(f->lhs, inner), false, false,
                                                f->radius - 1);
            return expand(g);
        }
        if (f->var2.empty())
            return Formula::mk_exists(f->var, expand(f->lhs));
        return Formula::mk_exists_bounded(f->var, f->var2, expand(f->lhs));
    }
};

} // namespace

FormulaPtr expand_sugar(const FormulaPtr& f) {
    Expander ex;
    collect_all_names(f, ex.used);
    return ex.expand(f);
}

std::string FragmentTag::str() const {
    std::string base;
    switch (kind) {
    case FO: base = "FO"; break;
    case BFL: base = "BFL"; break;
    case LFO: base = "LFO"; break;
    case Sigma: base = "Sigma(" + std::to_string(level) + ")"; break;
    case Pi: base = "Pi(" + std::to_string(level) + ")"; break;
    }
    if ((kind == Sigma || kind == Pi) && monadic) base = "monadic " + base;
    return base;
}

namespace {

bool contains_so_quant(const FormulaPtr& f) {
    if (!f) return false;
    if (f->kind == Formula::SOQuant) return true;
    return contains_so_quant(f->lhs) || contains_so_quant(f->rhs);
}

bool contains_so_atom(const FormulaPtr& f) {
    if (!f) return false;
    if (f->kind == Formula::SOAtom) return true;
    return contains_so_atom(f->lhs) || contains_so_atom(f->rhs);
}

bool is_bfl(const FormulaPtr& f) {
    if (!f) return true;
    if (f->kind == Formula::SOQuant) return false;
    if (f->kind == Formula::FOQuant && f->var2.empty()) return false;
    return is_bfl(f->lhs) && is_bfl(f->rhs);
}

bool all_so_monadic(const FormulaPtr& f) {
    if (!f) return true;
    if ((f->kind == Formula::SOQuant || f->kind == Formula::SOAtom) && f->arity != 1) return false;
    return all_so_monadic(f->lhs) && all_so_monadic(f->rhs);
}

} // namespace

FragmentTag classify(const FormulaPtr& f) {
    FragmentTag tag;
    tag.monadic = all_so_monadic(f);

    // Peel the leading second-order quantifier blocks.
    FormulaPtr cur = f;
    std::vector<bool> blocks; // polarity of each alternation block
    while (cur->kind == Formula::SOQuant) {
        if (blocks.empty() || blocks.back() != cur->universal) blocks.push_back(cur->universal);
        cur = cur->lhs;
    }
    int level = static_cast<int>(blocks.size());

    bool rest_lfo = cur->kind == Formula::FOQuant && cur->universal && cur->var2.empty() &&
                    cur->radius < 0 && is_bfl(cur->lhs);

    if (level == 0) {
        if (is_bfl(f)) {
            tag.kind = FragmentTag::BFL;
            return tag;
        }
        if (rest_lfo) {
            tag.kind = FragmentTag::LFO;
            return tag;
        }
        if (!contains_so_quant(f) && !contains_so_atom(f)) {
            tag.kind = FragmentTag::FO;
            return tag;
        }
        throw Error("NotClassifiable", "not in FO, BFL, or LFO: " + format_lso(f));
    }
    if (!rest_lfo)
        throw Error("NotClassifiable",
                    "second-order prefix is not followed by an LFO formula: " + format_lso(f));
    tag.kind = blocks.front() ? FragmentTag::Pi : FragmentTag::Sigma;
    tag.level = level;
    return tag;
}

namespace {

int bounded_depth(const FormulaPtr& f) {
    if (!f) return 0;
    int d = std::max(bounded_depth(f->lhs), bounded_depth(f->rhs));
    if (f->kind == Formula::FOQuant && !f->var2.empty()) return d + 1;
    return d;
}

} // namespace

int nesting_radius(const FormulaPtr& f) {
    return bounded_depth(expand_sugar(f));
}

} // namespace lso
