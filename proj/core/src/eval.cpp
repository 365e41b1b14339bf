#include "lso/eval.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace lso {

namespace {

struct InternalAssignment {
    std::map<std::string, int> fo;       // variable -> domain index
    std::map<std::string, Relation> so;
};

struct Evaluator {
    const RelationalStructure& s;
    const EvalOptions& opts;
    std::vector<Elem> domain; // sorted; indices are positions here
    std::map<Elem, int> index;
    std::vector<std::vector<int>> adj;
    std::vector<char> is_node_elem;
    std::map<const Formula*, FreeVars> fv_cache;
    std::map<const Formula*, std::map<std::string, char>> memo;

    Evaluator(const RelationalStructure& st, const EvalOptions& o) : s(st), opts(o) {
        domain = s.domain;
        std::sort(domain.begin(), domain.end());
        for (std::size_t i = 0; i < domain.size(); ++i) index[domain[i]] = static_cast<int>(i);
        adj.resize(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i)
            for (const Elem& e : s.adjacent(domain[i])) adj[i].push_back(index.at(e));
        is_node_elem.resize(domain.size(), 1);
        for (std::size_t i = 0; i < domain.size(); ++i)
            for (int j : adj[i])
                if (j != static_cast<int>(i) && s.linked(2, domain[j], domain[i])) {
                    is_node_elem[i] = 0;
                    break;
                }
    }

    int lookup(const std::map<std::string, int>& fo, const std::string& v) const {
        auto it = fo.find(v);
        if (it == fo.end()) throw Error("UnboundVariable", "no value for variable '" + v + "'");
        return it->second;
    }

    const FreeVars& fv(const Formula* f) {
        auto it = fv_cache.find(f);
        if (it != fv_cache.end()) return it->second;
        // shared_ptr aliasing keeps f alive for the evaluator's lifetime
        FormulaPtr alias(std::shared_ptr<const Formula>{}, f);
        return fv_cache.emplace(f, free_vars(alias)).first->second;
    }

    std::string memo_key(const Formula* f, const InternalAssignment& a) {
        const FreeVars& vars = fv(f);
        std::string key;
        for (const auto& v : vars.fo) {
            auto it = a.fo.find(v);
            key += v + "=" + (it == a.fo.end() ? "?" : std::to_string(it->second)) + ";";
        }
        for (const auto& [X, k] : vars.so) {
            auto it = a.so.find(X);
            key += X + "=" + (it == a.so.end() ? "?" : std::to_string(it->second.mask)) + ";";
        }
        return key;
    }

    std::vector<int> within(int x, int r) const {
        std::vector<int> dist(domain.size(), -1);
        std::deque<int> queue{x};
        dist[x] = 0;
        std::vector<int> out{x};
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            if (dist[cur] == r) continue;
            for (int nb : adj[cur])
                if (dist[nb] < 0) {
                    dist[nb] = dist[cur] + 1;
                    out.push_back(nb);
                    queue.push_back(nb);
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::uint64_t tuple_bit(const Formula* f, const InternalAssignment& a) const {
        std::uint64_t n = domain.size(), bit = 0, stride = 1;
        for (const auto& arg : f->args) {
            bit += static_cast<std::uint64_t>(lookup(a.fo, arg)) * stride;
            stride *= n;
        }
        return bit;
    }

    bool eval(const Formula* f, InternalAssignment& a) {
        switch (f->kind) {
        case Formula::True: return true;
        case Formula::False: return false;
        case Formula::Bit: {
            int i = lookup(a.fo, f->var);
            return s.in_bit_set(f->index, domain[i]);
        }
        case Formula::Link: {
            int i = lookup(a.fo, f->var), j = lookup(a.fo, f->var2);
            return s.linked(f->index, domain[i], domain[j]);
        }
        case Formula::Eq: return lookup(a.fo, f->var) == lookup(a.fo, f->var2);
        case Formula::SOAtom: {
            auto it = a.so.find(f->sovar);
            if (it == a.so.end())
                throw Error("UnboundVariable", "no value for set variable '" + f->sovar + "'");
            if (it->second.arity != static_cast<int>(f->args.size()))
                throw Error("ArityMismatch", "'" + f->sovar + "' used with arity " +
                                                 std::to_string(f->args.size()) + ", bound at " +
                                                 std::to_string(it->second.arity));
            return (it->second.mask >> tuple_bit(f, a)) & 1;
        }
        case Formula::Not: return !eval(f->lhs.get(), a);
        case Formula::Or: return eval(f->lhs.get(), a) || eval(f->rhs.get(), a);
        case Formula::And: return eval(f->lhs.get(), a) && eval(f->rhs.get(), a);
        case Formula::Implies: return !eval(f->lhs.get(), a) || eval(f->rhs.get(), a);
        case Formula::Iff: return eval(f->lhs.get(), a) == eval(f->rhs.get(), a);
        case Formula::FOQuant: return eval_memoized(f, a);
        case Formula::SOQuant: return eval_memoized(f, a);
        }
        throw Error("Internal", "bad Formula kind");
    }

    bool eval_memoized(const Formula* f, InternalAssignment& a) {
        if (!opts.memoize) return eval_quant(f, a);
        std::string key = memo_key(f, a);
        auto& slot = memo[f];
        auto it = slot.find(key);
        if (it != slot.end()) return it->second != 0;
        bool result = eval_quant(f, a);
        slot[key] = result ? 1 : 0;
        return result;
    }

    bool eval_quant(const Formula* f, InternalAssignment& a) {
        if (f->kind == Formula::SOQuant) return eval_so(f, a);

        // candidate range for the bound variable
        std::vector<int> range;
        if (f->var2.empty()) {
            range.resize(domain.size());
            for (std::size_t i = 0; i < domain.size(); ++i) range[i] = static_cast<int>(i);
        } else {
            int x = lookup(a.fo, f->var2);
            if (f->radius >= 0) {
                range = within(x, f->radius);
            } else {
                for (int nb : adj[x])
                    if (nb != x) range.push_back(nb);
            }
        }

        auto saved = a.fo.find(f->var) != a.fo.end()
                         ? std::optional<int>(a.fo[f->var])
                         : std::nullopt;
        bool found_counterexample = false, found_witness = false;
        for (int cand : range) {
            if (f->node_restricted && !is_node_elem[cand]) continue;
            a.fo[f->var] = cand;
            bool v = eval(f->lhs.get(), a);
            if (f->universal && !v) {
                found_counterexample = true;
                break;
            }
            if (!f->universal && v) {
                found_witness = true;
                break;
            }
        }
        if (saved)
            a.fo[f->var] = *saved;
        else
            a.fo.erase(f->var);
        return f->universal ? !found_counterexample : found_witness;
    }

    bool eval_so(const Formula* f, InternalAssignment& a) {
        std::uint64_t n = domain.size();
        auto refuse = [&](const std::string& why) {
            throw Error("SearchSpaceTooLarge", "set variable '" + f->sovar + "': " + why);
        };
        if (f->arity == 1 && n > static_cast<std::uint64_t>(opts.max_domain_arity1))
            refuse("domain of " + std::to_string(n) + " exceeds the arity-1 cap of " +
                   std::to_string(opts.max_domain_arity1));
        if (f->arity == 2 && n > static_cast<std::uint64_t>(opts.max_domain_arity2))
            refuse("domain of " + std::to_string(n) + " exceeds the arity-2 cap of " +
                   std::to_string(opts.max_domain_arity2));
        if (f->arity >= 3 && !opts.allow_higher_arity)
            refuse("arity " + std::to_string(f->arity) + " enumeration is disabled by default");
        std::uint64_t tuples = 1;
        for (int i = 0; i < f->arity; ++i) {
            tuples *= n;
            if (tuples > 63)
                refuse(std::to_string(n) + "^" + std::to_string(f->arity) +
                       " tuples exceeds the 63-bit limit");
        }

        auto saved = a.so.find(f->sovar) != a.so.end()
                         ? std::optional<Relation>(a.so[f->sovar])
                         : std::nullopt;
        bool decided = false; // witness for E2, counterexample for A2
        // increasing cardinality, then lexicographic within one cardinality
        for (std::uint64_t pc = 0; pc <= tuples && !decided; ++pc) {
            std::uint64_t mask = pc == 0 ? 0 : (std::uint64_t{1} << pc) - 1;
            while (true) {
                a.so[f->sovar] = Relation{f->arity, mask};
                bool v = eval(f->lhs.get(), a);
                if (v != f->universal) { // E2 wants true, A2 hunts false
                    decided = true;
                    break;
                }
                if (pc == 0) break;
                // Gosper's hack: next mask with the same popcount
                std::uint64_t c = mask & -mask, r = mask + c;
                mask = (((r ^ mask) >> 2) / c) | r;
                if (mask >= (std::uint64_t{1} << tuples)) break;
            }
        }
        if (saved)
            a.so[f->sovar] = *saved;
        else
            a.so.erase(f->sovar);
        return f->universal ? !decided : decided;
    }
};

} // namespace

bool evaluate(const RelationalStructure& s, const FormulaPtr& f,
              const VariableAssignment& assignment, const EvalOptions& opts) {
    Evaluator ev(s, opts);
    InternalAssignment a;
    for (const auto& [v, e] : assignment.fo) {
        auto it = ev.index.find(e);
        if (it == ev.index.end())
            throw Error("UnknownElement", "assignment binds '" + v + "' to an element outside the domain");
        a.fo[v] = it->second;
    }
    a.so = assignment.so;
    return ev.eval(f.get(), a);
}

bool evaluate_at(const RelationalStructure& s, const FormulaPtr& f, const std::string& var,
                 const Elem& e, const EvalOptions& opts) {
    VariableAssignment a;
    a.fo[var] = e;
    return evaluate(s, f, a, opts);
}

} // namespace lso
