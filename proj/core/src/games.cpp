#include "lso/games.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "lso/structure.hpp"

namespace lso {

namespace {

// ---------------------------------------------------------------- raw regime

std::vector<std::string> bit_strings_up_to(std::uint64_t max_len) {
    std::vector<std::string> out{""};
    std::vector<std::string> layer{""};
    for (std::uint64_t l = 1; l <= max_len; ++l) {
        std::vector<std::string> next;
        for (const auto& s : layer)
            for (char c : {'0', '1'}) next.push_back(s + c);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

std::uint64_t per_node_bound(const LabeledGraph& g, const IdentifierAssignment& ids,
                             const Node& v, const GameSpec& spec) {
    std::uint64_t b = certificate_bound(g, ids, v, spec.cert_radius, spec.cert_poly);
    if (spec.cert_cap) b = std::min(b, *spec.cert_cap);
    return b;
}

// Visits every certificate assignment of one level; visitor returns true to
// stop the enumeration early.
bool enumerate_assignments(const LabeledGraph& g,
                           const std::vector<std::vector<std::string>>& candidates,
                           CertificateAssignment& current,
                           const std::function<bool()>& visitor, std::size_t idx = 0) {
    if (idx == g.nodes.size()) return visitor();
    for (const auto& cand : candidates[idx]) {
        current[g.nodes[idx]] = cand;
        if (enumerate_assignments(g, candidates, current, visitor, idx + 1)) return true;
    }
    return false;
}

bool is_existential(const GameSpec& spec, int level) {
    bool first = level % 2 == 1;
    return first == (spec.first_player == Player::Eve);
}

std::string joined_certs(const std::vector<CertificateAssignment>& levels, const Node& v) {
    std::vector<std::string> per_level;
    for (const auto& lv : levels) per_level.push_back(lv.count(v) ? lv.at(v) : "");
    return join_certificates(per_level);
}

CertificateAssignment join_all(const LabeledGraph& g,
                               const std::vector<CertificateAssignment>& levels) {
    CertificateAssignment out;
    for (const auto& v : g.nodes) out[v] = joined_certs(levels, v);
    return out;
}

// ------------------------------------------------------- message serialization

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';
constexpr char kListSep = '\x1d';

std::string bits_from_text(const std::string& text) {
    std::string bits;
    bits.reserve(text.size() * 8);
    for (unsigned char c : text)
        for (int b = 7; b >= 0; --b) bits += ((c >> b) & 1) ? '1' : '0';
    return bits;
}

std::string text_from_bits(const std::string& bits) {
    std::string text;
    for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
        unsigned char c = 0;
        for (int b = 0; b < 8; ++b) c = static_cast<unsigned char>((c << 1) | (bits[i + b] == '1'));
        text += static_cast<char>(c);
    }
    return text;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Knowledge record flooded through the network. hops = distance the record
// has traveled; on identifier collision (only possible beyond the locally
// unique horizon) the smaller hop count wins.
struct KnownRecord {
    std::string id, label, certlist;
    bool nb_known = false;
    std::vector<std::string> nb_ids;
    int hops = 0;
};

std::string serialize_records(const std::map<std::string, KnownRecord>& records) {
    std::string out;
    bool first_rec = true;
    for (const auto& [id, rec] : records) {
        if (!first_rec) out += kRecordSep;
        first_rec = false;
        std::string nb;
        for (std::size_t i = 0; i < rec.nb_ids.size(); ++i) {
            if (i) nb += kListSep;
            nb += rec.nb_ids[i];
        }
        out += rec.id;
        out += kFieldSep;
        out += rec.label;
        out += kFieldSep;
        out += rec.certlist;
        out += kFieldSep;
        out += rec.nb_known ? "1" : "0";
        out += kFieldSep;
        out += nb;
        out += kFieldSep;
        out += std::to_string(rec.hops);
    }
    return out;
}

void merge_record(std::map<std::string, KnownRecord>& records, KnownRecord rec) {
    auto it = records.find(rec.id);
    if (it == records.end()) {
        records[rec.id] = std::move(rec);
        return;
    }
    KnownRecord& have = it->second;
    if (rec.hops < have.hops || (rec.hops == have.hops && rec.nb_known && !have.nb_known))
        have = std::move(rec);
}

void parse_records(const std::string& text, std::map<std::string, KnownRecord>& records,
                   int extra_hops) {
    if (text.empty()) return;
    for (const auto& part : split_on(text, kRecordSep)) {
        auto fields = split_on(part, kFieldSep);
        if (fields.size() != 6) continue;
        KnownRecord rec;
        rec.id = fields[0];
        rec.label = fields[1];
        rec.certlist = fields[2];
        rec.nb_known = fields[3] == "1";
        if (!fields[4].empty()) rec.nb_ids = split_on(fields[4], kListSep);
        rec.hops = std::stoi(fields[5]) + extra_hops;
        merge_record(records, std::move(rec));
    }
}

// ----------------------------------------------- relation-fragment certificates

// Certificates render relation fragments over a 6-symbol alphabet, 3 bits per
// symbol: refs "id:1^bit" joined by ',', tuples by ';', variables by '/'.
const std::string kCertAlphabet = "01,;/:";

std::string cert_encode(const std::string& sym) {
    std::string bits;
    for (char c : sym) {
        auto pos = kCertAlphabet.find(c);
        for (int b = 2; b >= 0; --b) bits += ((pos >> b) & 1) ? '1' : '0';
    }
    return bits;
}

std::string cert_decode(const std::string& bits) {
    std::string sym;
    for (std::size_t i = 0; i + 3 <= bits.size(); i += 3) {
        std::size_t pos = 0;
        for (int b = 0; b < 3; ++b) pos = (pos << 1) | (bits[i + b] == '1');
        if (pos >= kCertAlphabet.size()) break; // undecodable suffix ignored
        sym += kCertAlphabet[pos];
    }
    return sym;
}

struct ElemRef {
    std::string owner_id;
    int bit = 0;
};

std::string render_ref(const ElemRef& r) {
    return r.owner_id + ":" + std::string(static_cast<std::size_t>(r.bit), '1');
}

// One level's certificate for one node: fragments of each block variable.
std::string render_level_cert(const std::vector<std::vector<std::vector<ElemRef>>>& per_var) {
    std::string sym;
    for (std::size_t vi = 0; vi < per_var.size(); ++vi) {
        if (vi) sym += "/";
        for (std::size_t ti = 0; ti < per_var[vi].size(); ++ti) {
            if (ti) sym += ";";
            for (std::size_t ri = 0; ri < per_var[vi][ti].size(); ++ri) {
                if (ri) sym += ",";
                sym += render_ref(per_var[vi][ti][ri]);
            }
        }
    }
    return cert_encode(sym);
}

std::vector<std::vector<std::vector<ElemRef>>> parse_level_cert(const std::string& bits) {
    std::vector<std::vector<std::vector<ElemRef>>> out;
    for (const auto& var_part : split_on(cert_decode(bits), '/')) {
        std::vector<std::vector<ElemRef>> tuples;
        if (!var_part.empty()) {
            for (const auto& tup_part : split_on(var_part, ';')) {
                std::vector<ElemRef> refs;
                for (const auto& ref_part : split_on(tup_part, ',')) {
                    auto colon = ref_part.rfind(':');
                    if (colon == std::string::npos) continue;
                    ElemRef r;
                    r.owner_id = ref_part.substr(0, colon);
                    r.bit = static_cast<int>(ref_part.size() - colon - 1);
                    refs.push_back(std::move(r));
                }
                tuples.push_back(std::move(refs));
            }
        }
        out.push_back(std::move(tuples));
    }
    return out;
}

// ------------------------------------------------------------ compiled program

struct CompiledParts {
    FormulaPtr body;              // first-order part, one free variable
    std::string body_var;
    std::vector<CertBlock> blocks;
    int radius = 0;
};

Elem decode_tuple_elem(const ElemRef& r) { return Elem{r.owner_id, r.bit}; }

NodeProgram make_compiled_program(const CompiledParts& parts) {
    int decide_round = parts.radius == 0 ? 1 : parts.radius + 3;
    return [parts, decide_round](int round, const std::string& label, const std::string& id,
                                 const std::string& certlist,
                                 const std::vector<std::string>& incoming,
                                 const std::string& state) -> ProgramResult {
        std::map<std::string, KnownRecord> records;
        parse_records(state, records, 0);
        if (round == 1) {
            KnownRecord own;
            own.id = id;
            own.label = label;
            own.certlist = certlist;
            own.nb_known = incoming.empty(); // degree 0: nothing to wait for
            records[id] = own;
        }
        for (const auto& payload : incoming) parse_records(text_from_bits(payload), records, 1);
        if (round == 2) {
            // round-2 payloads are exactly the neighbors' own records
            KnownRecord& own = records[id];
            own.nb_ids.clear();
            for (const auto& payload : incoming) {
                auto fields = split_on(text_from_bits(payload), kFieldSep);
                if (!fields.empty()) own.nb_ids.push_back(fields[0]);
            }
            own.nb_known = true;
            own.hops = 0;
        }

        if (round < decide_round) {
            std::string msg = bits_from_text(serialize_records(records));
            ProgramResult out;
            out.state = serialize_records(records);
            out.outgoing.assign(incoming.size(), msg);
            return out;
        }

        // Reconstruct the radius-r neighborhood from completed records.
        LabeledGraph known;
        for (const auto& [rid, rec] : records)
            if (rec.nb_known) known.add_node(rid, rec.label);
        for (const auto& [rid, rec] : records) {
            if (!rec.nb_known) continue;
            for (const auto& nb : rec.nb_ids)
                if (known.has_node(nb) && nb != rid && !known.has_edge(rid, nb))
                    known.add_edge(rid, nb);
        }
        LabeledGraph h = neighborhood(known, id, parts.radius);
        RelationalStructure s = structural_representation(h);
        s.freeze();

        // Decode certificates of all nodes in view into relation masks.
        std::vector<Elem> domain = s.domain;
        std::sort(domain.begin(), domain.end());
        std::map<Elem, int> index;
        for (std::size_t i = 0; i < domain.size(); ++i) index[domain[i]] = static_cast<int>(i);
        VariableAssignment assignment;
        for (const auto& blk : parts.blocks)
            for (const auto& [name, arity] : blk.vars)
                assignment.so[name] = Relation{arity, 0};
        for (const auto& hn : h.nodes) {
            auto certs = split_on(records.at(hn).certlist, '#');
            for (std::size_t li = 0; li < parts.blocks.size(); ++li) {
                if (li >= certs.size()) break;
                auto fragments = parse_level_cert(certs[li]);
                const auto& vars = parts.blocks[li].vars;
                for (std::size_t vi = 0; vi < vars.size() && vi < fragments.size(); ++vi) {
                    Relation& rel = assignment.so[vars[vi].first];
                    for (const auto& tuple : fragments[vi]) {
                        if (static_cast<int>(tuple.size()) != rel.arity) continue;
                        std::uint64_t bit = 0, stride = 1;
                        bool ok = true;
                        for (const auto& ref : tuple) {
                            auto it = index.find(decode_tuple_elem(ref));
                            if (it == index.end()) {
                                ok = false;
                                break;
                            }
                            bit += static_cast<std::uint64_t>(it->second) * stride;
                            stride *= domain.size();
                        }
                        if (ok) rel.mask |= std::uint64_t{1} << bit;
                    }
                }
            }
        }

        // Evaluate the first-order part at the node's own elements.
        bool all_true = true;
        std::vector<Elem> owned{Elem{id, 0}};
        for (std::size_t i = 1; i <= label.size(); ++i)
            owned.push_back(Elem{id, static_cast<int>(i)});
        for (const Elem& e : owned) {
            VariableAssignment a = assignment;
            a.fo[parts.body_var] = e;
            if (!evaluate(s, parts.body, a)) {
                all_true = false;
                break;
            }
        }
        ProgramResult out;
        out.state = state;
        out.outgoing.assign(incoming.size(), "");
        out.final_value = all_true ? "1" : "0";
        return out;
    };
}

// Peel the second-order prefix of a classified Sigma/Pi/LFO sentence.
CompiledParts split_sentence(const FormulaPtr& f) {
    FragmentTag tag = classify(f); // throws NotClassifiable
    if (tag.kind == FragmentTag::FO || tag.kind == FragmentTag::BFL)
        throw Error("NotClassifiable", "expected an LFO / Sigma / Pi sentence");
    CompiledParts parts;
    FormulaPtr cur = f;
    while (cur->kind == Formula::SOQuant) {
        if (parts.blocks.empty() || parts.blocks.back().universal != cur->universal)
            parts.blocks.push_back(CertBlock{cur->universal, {}});
        parts.blocks.back().vars.emplace_back(cur->sovar, cur->arity);
        cur = cur->lhs;
    }
    // cur = universal unbounded first-order quantifier (classify guarantees it)
    parts.body_var = cur->var;
    parts.body = cur->node_restricted
                     ? Formula::mk_implies(is_node(cur->var), cur->lhs)
                     : cur->lhs;
    parts.radius = nesting_radius(cur);
    return parts;
}

} // namespace

// ------------------------------------------------------------------ raw regime

bool arbitrate(const NodeProgram& prog, const LabeledGraph& g, const IdentifierAssignment& ids,
               const GameSpec& spec, const ArbitrateLimits& limits) {
    if (static_cast<int>(spec.restrictors.size()) > spec.level)
        throw Error("BadGameSpec", "more restrictors than levels");
    if (spec.level == 0) {
        CertificateAssignment empty;
        return accepts(execute(prog, g, ids, empty, limits.exec));
    }
    // candidate strings per node (shared across levels; bound is level-free)
    std::vector<std::vector<std::string>> candidates;
    std::uint64_t count = 1;
    for (const auto& v : g.nodes) {
        std::uint64_t b = per_node_bound(g, ids, v, spec);
        if (b > 20) throw Error("BudgetExceeded", "certificate bound " + std::to_string(b) +
                                                      " at node '" + v + "' is too large");
        candidates.push_back(bit_strings_up_to(b));
        std::uint64_t n = candidates.back().size();
        if (count > limits.max_assignments_per_level / n + 1)
            throw Error("BudgetExceeded", "raw certificate search space exceeds the budget");
        count *= n;
    }
    if (count > limits.max_assignments_per_level)
        throw Error("BudgetExceeded", "raw certificate search space exceeds the budget");

    std::vector<CertificateAssignment> chosen(spec.level);
    std::function<bool(int)> game = [&](int level) -> bool {
        if (level > spec.level)
            return accepts(execute(prog, g, ids, join_all(g, chosen), limits.exec));
        bool existential = is_existential(spec, level);
        CertificateAssignment current;
        bool decided = false; // witness if existential, counterexample otherwise
        enumerate_assignments(g, candidates, current, [&]() {
            chosen[level - 1] = current;
            if (level <= static_cast<int>(spec.restrictors.size()) &&
                spec.restrictors[level - 1]) {
                // restrictor sees the assignment list up to this level
                std::vector<CertificateAssignment> prefix(chosen.begin(),
                                                          chosen.begin() + level);
                if (!accepts(execute(spec.restrictors[level - 1], g, ids,
                                     join_all(g, prefix), limits.exec)))
                    return false; // violation: skip per quantifier polarity
            }
            bool v = game(level + 1);
            if (v == existential) {
                decided = true;
                return true;
            }
            return false;
        });
        return existential ? decided : !decided;
    };
    return game(1);
}

// ------------------------------------------------------------------ compilation

CompiledArbiter compile_formula_to_arbiter(const FormulaPtr& f) {
    CompiledParts parts = split_sentence(f);
    CompiledArbiter arb;
    arb.program = make_compiled_program(parts);
    arb.radius = parts.radius;
    arb.scheme = parts.blocks;
    arb.spec.level = static_cast<int>(parts.blocks.size());
    arb.spec.first_player =
        parts.blocks.empty() || !parts.blocks.front().universal ? Player::Eve : Player::Adam;
    arb.spec.cert_radius = parts.radius;
    arb.spec.cert_poly = Polynomial{0, 1, 1}; // x + x^2, generous at desk scale
    return arb;
}

bool arbitrate(const CompiledArbiter& arb, const LabeledGraph& g,
               const IdentifierAssignment& ids, const ArbitrateLimits& limits,
               const EvalOptions& eval_opts) {
    if (!check_locally_unique(g, ids, std::max(1, arb.radius)))
        throw Error("NotLocallyUnique", "ids are not locally unique for the program's radius");
    RelationalStructure s = structural_representation(g);
    s.freeze();
    std::vector<Elem> domain = s.domain;
    std::sort(domain.begin(), domain.end());
    std::uint64_t n = domain.size();

    // per-node distance maps for the 2r encoding horizon
    std::map<Node, std::map<Node, int>> dists;
    for (const auto& v : g.nodes) dists[v] = distances_from(g, v);

    std::map<std::string, Relation> global;

    auto encode_all = [&]() {
        CertificateAssignment certs;
        for (const auto& v : g.nodes) {
            std::vector<std::string> per_level;
            for (const auto& blk : arb.scheme) {
                std::vector<std::vector<std::vector<ElemRef>>> per_var;
                for (const auto& [name, arity] : blk.vars) {
                    const Relation& rel = global.at(name);
                    std::vector<std::vector<ElemRef>> tuples;
                    std::uint64_t total = 1;
                    for (int i = 0; i < arity; ++i) total *= n;
                    for (std::uint64_t bit = 0; bit < total; ++bit) {
                        if (!((rel.mask >> bit) & 1)) continue;
                        std::uint64_t rest = bit;
                        std::vector<ElemRef> refs;
                        bool mine = true, near = true;
                        for (int i = 0; i < arity; ++i) {
                            const Elem& e = domain[rest % n];
                            rest /= n;
                            if (i == 0 && e.name != v) {
                                mine = false;
                                break;
                            }
                            auto it = dists[v].find(e.name);
                            if (it == dists[v].end() || it->second > 2 * arb.radius) {
                                near = false;
                                break;
                            }
                            refs.push_back(ElemRef{ids.at(e.name), e.bit});
                        }
                        if (mine && near) tuples.push_back(std::move(refs));
                    }
                    per_var.push_back(std::move(tuples));
                }
                per_level.push_back(render_level_cert(per_var));
            }
            certs[v] = join_certificates(per_level);
        }
        return certs;
    };

    std::function<bool(std::size_t)> go = [&](std::size_t blk_idx) -> bool {
        if (blk_idx == arb.scheme.size())
            return accepts(execute(arb.program, g, ids, encode_all(), limits.exec));
        const CertBlock& blk = arb.scheme[blk_idx];
        // enumerate all variables of the block jointly
        std::function<bool(std::size_t)> vars_loop = [&](std::size_t vi) -> bool {
            if (vi == blk.vars.size()) return go(blk_idx + 1) != blk.universal;
            const auto& [name, arity] = blk.vars[vi];
            if (arity == 1 && n > static_cast<std::uint64_t>(eval_opts.max_domain_arity1))
                throw Error("SearchSpaceTooLarge", "arity-1 cap exceeded for '" + name + "'");
            if (arity == 2 && n > static_cast<std::uint64_t>(eval_opts.max_domain_arity2))
                throw Error("SearchSpaceTooLarge", "arity-2 cap exceeded for '" + name + "'");
            if (arity >= 3 && !eval_opts.allow_higher_arity)
                throw Error("SearchSpaceTooLarge", "arity >= 3 refused for '" + name + "'");
            std::uint64_t tuples = 1;
            for (int i = 0; i < arity; ++i) {
                tuples *= n;
                if (tuples > 62)
                    throw Error("SearchSpaceTooLarge", "tuple space too large for '" + name + "'");
            }
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tuples); ++mask) {
                global[name] = Relation{arity, mask};
                if (vars_loop(vi + 1)) return true; // decided for this block
            }
            return false;
        };
        bool decided = vars_loop(0);
        return blk.universal ? !decided : decided;
    };
    return go(0);
}

bool check_local_repairability(const NodeProgram& restrictor, const LabeledGraph& g,
                               const IdentifierAssignment& ids, const GameSpec& spec,
                               const ArbitrateLimits& limits) {
    std::vector<std::vector<std::string>> candidates;
    std::uint64_t count = 1;
    for (const auto& v : g.nodes) {
        std::uint64_t b = per_node_bound(g, ids, v, spec);
        if (b > 20) throw Error("BudgetExceeded", "certificate bound too large at '" + v + "'");
        candidates.push_back(bit_strings_up_to(b));
        std::uint64_t m = candidates.back().size();
        if (count > limits.max_assignments_per_level / m + 1)
            throw Error("BudgetExceeded", "repairability search space exceeds the budget");
        count *= m;
    }
    if (count > limits.max_assignments_per_level)
        throw Error("BudgetExceeded", "repairability search space exceeds the budget");

    auto verdicts = [&](const CertificateAssignment& certs) {
        return execute(restrictor, g, ids, certs, limits.exec).verdicts;
    };

    CertificateAssignment current;
    bool repairable = true;
    enumerate_assignments(g, candidates, current, [&]() {
        auto base = verdicts(current);
        for (std::size_t vi = 0; vi < g.nodes.size(); ++vi) {
            const Node& v = g.nodes[vi];
            if (base.at(v)) continue;
            bool fixed = false;
            CertificateAssignment mod = current;
            for (const auto& cand : candidates[vi]) {
                mod[v] = cand;
                auto after = verdicts(mod);
                if (!after.at(v)) continue;
                bool others_same = true;
                for (const auto& u : g.nodes)
                    if (u != v && after.at(u) != base.at(u)) {
                        others_same = false;
                        break;
                    }
                if (others_same) {
                    fixed = true;
                    break;
                }
            }
            if (!fixed) {
                repairable = false;
                return true; // stop enumeration
            }
        }
        return false;
    });
    return repairable;
}

bool decide_via_formula(const LabeledGraph& g, const FormulaPtr& f,
                        const IdentifierAssignment& ids) {
    try {
        CompiledArbiter arb = compile_formula_to_arbiter(f);
        return arbitrate(arb, g, ids);
    } catch (const Error& e) {
        if (e.code != "SearchSpaceTooLarge" && e.code != "BudgetExceeded") throw;
        RelationalStructure s = structural_representation(g);
        s.freeze();
        return evaluate(s, f);
    }
}

} // namespace lso
