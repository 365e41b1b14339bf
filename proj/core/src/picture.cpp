#include "lso/picture.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lso {

namespace {

[[noreturn]] void parse_fail(const std::string& what, int line, const std::string& msg) {
    throw Error("ParseError", what + ", line " + std::to_string(line) + ": " + msg);
}

bool is_bits(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) {
        if (t[0] == '#') break; // comment
        toks.push_back(t);
    }
    return toks;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

void validate_picture(const Picture& p) {
    if (p.bits < 0 || p.height < 1 || p.width < 1)
        throw Error("InvalidPicture", "bits must be >= 0 and dimensions >= 1");
    if (static_cast<int>(p.cells.size()) != p.height)
        throw Error("InvalidPicture", "row count does not match height");
    for (const auto& row : p.cells) {
        if (static_cast<int>(row.size()) != p.width)
            throw Error("InvalidPicture", "column count does not match width");
        for (const auto& c : row)
            if (static_cast<int>(c.size()) != p.bits || !is_bits(c))
                throw Error("InvalidPicture", "cell '" + c + "' is not a " +
                                                  std::to_string(p.bits) + "-bit string");
    }
}

Picture parse_pic(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    Picture p;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!header_seen) {
            if (toks.size() != 3 || toks[0].rfind("bits=", 0) != 0 ||
                toks[1].rfind("rows=", 0) != 0 || toks[2].rfind("cols=", 0) != 0)
                parse_fail(".pic", lineno, "expected 'bits=<k> rows=<H> cols=<W>'");
            try {
                p.bits = std::stoi(toks[0].substr(5));
                p.height = std::stoi(toks[1].substr(5));
                p.width = std::stoi(toks[2].substr(5));
            } catch (const std::exception&) {
                parse_fail(".pic", lineno, "non-numeric header field");
            }
            header_seen = true;
            continue;
        }
        if (static_cast<int>(p.cells.size()) >= p.height)
            parse_fail(".pic", lineno, "more rows than declared");
        if (static_cast<int>(toks.size()) != p.width)
            parse_fail(".pic", lineno, "expected " + std::to_string(p.width) + " entries");
        std::vector<std::string> row;
        for (auto& t : toks) {
            if (t == ".")
                t = "";
            row.push_back(t);
        }
        p.cells.push_back(row);
    }
    if (!header_seen) throw Error("ParseError", ".pic: missing header line");
    validate_picture(p);
    return p;
}

Picture load_pic(const std::string& path) { return parse_pic(slurp(path)); }

std::string format_pic(const Picture& p) {
    std::string out = "bits=" + std::to_string(p.bits) + " rows=" + std::to_string(p.height) +
                      " cols=" + std::to_string(p.width) + "\n";
    for (const auto& row : p.cells) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += " ";
            out += row[j].empty() ? "." : row[j];
        }
        out += "\n";
    }
    return out;
}

namespace {

TileEntry parse_tile_entry(const std::string& tok, int lineno) {
    if (tok == "B") return {};
    auto slash = tok.find('/');
    if (slash == std::string::npos) parse_fail(".ts", lineno, "expected 'B' or '<bits>/<state>'");
    TileEntry e;
    e.boundary = false;
    e.bits = tok.substr(0, slash);
    e.state = tok.substr(slash + 1);
    if (e.bits == ".") e.bits = "";
    if (!is_bits(e.bits))
        parse_fail(".ts", lineno, "entry bits '" + tok.substr(0, slash) + "' are not a bit string");
    if (e.state.empty()) parse_fail(".ts", lineno, "empty state name");
    for (char c : e.state)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            parse_fail(".ts", lineno, "state name '" + e.state + "' has invalid characters");
    return e;
}

} // namespace

TilingSystem parse_ts(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    TilingSystem t;
    int bits = -1; // inferred from the first non-boundary entry
    std::vector<std::pair<Tile, int>> pending; // tiles + line, checked after states
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "state") {
            if (toks.size() != 2) parse_fail(".ts", lineno, "expected 'state <name>'");
            t.states.insert(toks[1]);
        } else if (toks[0] == "tile") {
            if (toks.size() != 5) parse_fail(".ts", lineno, "expected 'tile <TL> <TR> <BL> <BR>'");
            Tile tile;
            for (int i = 0; i < 4; ++i) {
                tile[i] = parse_tile_entry(toks[i + 1], lineno);
                if (tile[i].boundary) continue;
                if (bits < 0) bits = static_cast<int>(tile[i].bits.size());
                if (static_cast<int>(tile[i].bits.size()) != bits)
                    parse_fail(".ts", lineno, "inconsistent entry bit width");
            }
            pending.emplace_back(tile, lineno);
        } else {
            parse_fail(".ts", lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    t.bits = bits < 0 ? 0 : bits;
    for (const auto& [tile, ln] : pending) {
        for (const auto& e : tile)
            if (!e.boundary && !t.states.count(e.state))
                parse_fail(".ts", ln, "undeclared state '" + e.state + "'");
        t.tiles.push_back(tile);
    }
    return t;
}

TilingSystem load_ts(const std::string& path) { return parse_ts(slurp(path)); }

namespace {

std::string pixel_name(int i, int j) {
    return std::to_string(i + 1) + "," + std::to_string(j + 1);
}

} // namespace

RelationalStructure picture_structure(const Picture& p) {
    validate_picture(p);
    RelationalStructure s;
    s.bit_sets.resize(p.bits);
    s.link_rels.resize(2);
    for (int i = 0; i < p.height; ++i)
        for (int j = 0; j < p.width; ++j) {
            Elem e{pixel_name(i, j), 0};
            s.domain.push_back(e);
            for (int b = 0; b < p.bits; ++b)
                if (p.cell(i, j)[b] == '1') s.bit_sets[b].insert(e);
            if (i + 1 < p.height) s.link_rels[0].insert({e, {pixel_name(i + 1, j), 0}});
            if (j + 1 < p.width) s.link_rels[1].insert({e, {pixel_name(i, j + 1), 0}});
        }
    s.freeze();
    return s;
}

namespace {

std::string entry_key(const TileEntry& e) {
    return e.boundary ? "B" : e.bits + "/" + e.state;
}

struct TsSearch {
    const TilingSystem& t;
    const Picture& p;
    std::vector<std::string> states;
    std::set<std::array<std::string, 4>> tile_keys;
    std::vector<std::vector<int>> assign; // state index per pixel, -1 = unset

    TsSearch(const TilingSystem& ts, const Picture& pic) : t(ts), p(pic) {
        states.assign(t.states.begin(), t.states.end());
        for (const auto& tile : t.tiles)
            tile_keys.insert({entry_key(tile[0]), entry_key(tile[1]), entry_key(tile[2]),
                              entry_key(tile[3])});
        assign.assign(p.height, std::vector<int>(p.width, -1));
    }

    // framed coordinates: r in [0, H+2), c in [0, W+2)
    std::string framed(int r, int c) const {
        if (r < 1 || r > p.height || c < 1 || c > p.width) return "B";
        return p.cell(r - 1, c - 1) + "/" + states[assign[r - 1][c - 1]];
    }

    bool block_ok(int bi, int bj) const {
        return tile_keys.count(
                   {framed(bi, bj), framed(bi, bj + 1), framed(bi + 1, bj), framed(bi + 1, bj + 1)}) >
               0;
    }

    // blocks fully determined once pixel (i, j) is the last one filled in
    // row-major order
    bool new_blocks_ok(int i, int j) const {
        std::vector<int> bis{i}, bjs{j};
        if (i == p.height - 1) bis.push_back(p.height);
        if (j == p.width - 1) bjs.push_back(p.width);
        for (int bi : bis)
            for (int bj : bjs)
                if (!block_ok(bi, bj)) return false;
        return true;
    }

    bool search(int pos) {
        if (pos == p.height * p.width) return true;
        int i = pos / p.width, j = pos % p.width;
        for (std::size_t q = 0; q < states.size(); ++q) {
            assign[i][j] = static_cast<int>(q);
            if (new_blocks_ok(i, j) && search(pos + 1)) return true;
        }
        assign[i][j] = -1;
        return false;
    }
};

} // namespace

bool ts_accepts(const TilingSystem& t, const Picture& p) {
    validate_picture(p);
    if (t.bits != p.bits)
        throw Error("BitWidthMismatch", "tiling system has " + std::to_string(t.bits) +
                                            " bits, picture has " + std::to_string(p.bits));
    return TsSearch(t, p).search(0);
}

namespace {

using F = FormulaPtr;

F f_and(F a, F b) { return Formula::mk_and(std::move(a), std::move(b)); }
F f_or(F a, F b) { return Formula::mk_or(std::move(a), std::move(b)); }

F disj(const std::vector<F>& fs) {
    if (fs.empty()) return Formula::mk_false();
    F acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
    return acc;
}
F conj(const std::vector<F>& fs) {
    if (fs.empty()) return Formula::mk_true();
    F acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
    return acc;
}

std::string state_var(const std::string& q) { return "X" + q; }

// var carries the entry's bits and state
F cell_matches(const std::string& var, const TileEntry& e) {
    std::vector<F> parts;
    for (std::size_t b = 0; b < e.bits.size(); ++b) {
        F atom = Formula::mk_bit(static_cast<int>(b) + 1, var);
        parts.push_back(e.bits[b] == '1' ? atom : Formula::mk_not(atom));
    }
    parts.push_back(Formula::mk_soatom(state_var(e.state), {var}));
    return conj(parts);
}

} // namespace

FormulaPtr ts_to_formula(const TilingSystem& t) {
    const std::string x = "x";
    // exactly one state per pixel
    std::vector<F> one_cases;
    for (const auto& q : t.states) {
        std::vector<F> parts{Formula::mk_soatom(state_var(q), {x})};
        for (const auto& q2 : t.states)
            if (q2 != q) parts.push_back(Formula::mk_not(Formula::mk_soatom(state_var(q2), {x})));
        one_cases.push_back(conj(parts));
    }
    F one_state = disj(one_cases);

    enum Pos { TL, TR, BL, BR };
    // tiles whose boundary pattern matches; `want` maps positions to pixels
    auto tiles_with = [&](const std::vector<std::pair<Pos, std::string>>& want) {
        std::vector<F> out;
        for (const auto& tile : t.tiles) {
            bool shape_ok = true;
            std::vector<F> parts;
            for (int pos = 0; pos < 4; ++pos) {
                auto it = std::find_if(want.begin(), want.end(),
                                       [&](const auto& w) { return w.first == pos; });
                if (it == want.end()) {
                    if (!tile[pos].boundary) shape_ok = false;
                } else {
                    if (tile[pos].boundary) shape_ok = false;
                    else parts.push_back(cell_matches(it->second, tile[pos]));
                }
            }
            if (shape_ok) out.push_back(conj(parts));
        }
        return disj(out);
    };

    auto has_n = Formula::mk_exists_bounded("yn", x, Formula::mk_link(1, "yn", x));
    auto has_w = Formula::mk_exists_bounded("yw", x, Formula::mk_link(2, "yw", x));
    auto has_s = Formula::mk_exists_bounded("ys", x, Formula::mk_link(1, x, "ys"));
    auto has_e = Formula::mk_exists_bounded("ye", x, Formula::mk_link(2, x, "ye"));
    auto no_ = [](const F& f) { return Formula::mk_not(f); };

    // block with x bottom-right: neighbors north (yn), west (yw), and the
    // diagonal yd with yd ->2 yn
    F br_full = Formula::mk_exists_bounded(
        "yn", x,
        f_and(Formula::mk_link(1, "yn", x),
              Formula::mk_exists_bounded(
                  "yw", x,
                  f_and(Formula::mk_link(2, "yw", x),
                        Formula::mk_exists_bounded(
                            "yd", "yn",
                            f_and(Formula::mk_link(2, "yd", "yn"),
                                  tiles_with({{TL, "yd"}, {TR, "yn"}, {BL, "yw"}, {BR, x}})))))));
    F br_no_w = Formula::mk_exists_bounded(
        "yn", x, f_and(Formula::mk_link(1, "yn", x), tiles_with({{TR, "yn"}, {BR, x}})));
    F br_no_n = Formula::mk_exists_bounded(
        "yw", x, f_and(Formula::mk_link(2, "yw", x), tiles_with({{BL, "yw"}, {BR, x}})));
    F match_br = disj({br_full, f_and(no_(has_w), br_no_w), f_and(no_(has_n), br_no_n),
                       f_and(f_and(no_(has_n), no_(has_w)), tiles_with({{BR, x}}))});

    // block with x top-right, checked on the bottom row
    F tr_w = Formula::mk_exists_bounded(
        "yw", x, f_and(Formula::mk_link(2, "yw", x), tiles_with({{TL, "yw"}, {TR, x}})));
    F match_tr = disj({has_s, tr_w, f_and(no_(has_w), tiles_with({{TR, x}}))});

    // block with x bottom-left, checked on the rightmost column
    F bl_n = Formula::mk_exists_bounded(
        "yn", x, f_and(Formula::mk_link(1, "yn", x), tiles_with({{TL, "yn"}, {BL, x}})));
    F match_bl = disj({has_e, bl_n, f_and(no_(has_n), tiles_with({{BL, x}}))});

    // block with x top-left, checked at the bottom-right corner
    F match_tl = disj({has_s, has_e, tiles_with({{TL, x}})});

    F body = conj({one_state, match_br, match_tr, match_bl, match_tl});
    F sentence = Formula::mk_exists(x, body, /*universal=*/true);
    for (auto it = t.states.rbegin(); it != t.states.rend(); ++it)
        sentence = Formula::mk_exists_so(state_var(*it), 1, sentence);
    return sentence;
}

LabeledGraph encode_picture_as_graph(const Picture& p) {
    validate_picture(p);
    if (p.bits != 0)
        throw Error("NonZeroBits", "only 0-bit pictures have a graph encoding");
    LabeledGraph g;
    auto name = [](int i, int j, const char* tag) {
        return "p" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + tag;
    };
    for (int i = 0; i < p.height; ++i)
        for (int j = 0; j < p.width; ++j) {
            g.add_node(name(i, j, "pxl"), "");
            g.add_node(name(i, j, "in1"), "00");
            g.add_node(name(i, j, "in2"), "01");
            g.add_node(name(i, j, "out1"), "10");
            g.add_node(name(i, j, "out2"), "11");
            for (const char* port : {"in1", "in2", "out1", "out2"})
                g.add_edge(name(i, j, "pxl"), name(i, j, port));
        }
    for (int i = 0; i < p.height; ++i)
        for (int j = 0; j < p.width; ++j) {
            if (i + 1 < p.height) g.add_edge(name(i, j, "out1"), name(i + 1, j, "in1"));
            if (j + 1 < p.width) g.add_edge(name(i, j, "out2"), name(i, j + 1, "in2"));
        }
    return g;
}

namespace {

struct PicTranslator {
    int fresh = 0;

    std::string fresh_var(const std::string& base) {
        return base + std::to_string(fresh++);
    }

    // no incident ownership link: true exactly at pixel-center elements
    F is_pixel(const std::string& v) {
        std::string y = fresh_var("isp");
        return Formula::mk_not(Formula::mk_exists_bounded(
            y, v, f_or(Formula::mk_link(2, v, y), Formula::mk_link(2, y, v))));
    }

    // the element's two-bit label reads b1 b2
    F has_label(const std::string& v, char b1, char b2) {
        std::string c1 = fresh_var("pb"), c2 = fresh_var("pb");
        F first = Formula::mk_bit(1, c1);
        if (b1 == '0') first = Formula::mk_not(first);
        F second = Formula::mk_bit(1, c2);
        if (b2 == '0') second = Formula::mk_not(second);
        F inner = Formula::mk_exists_bounded(c2, c1, f_and(Formula::mk_link(1, c1, c2), second));
        return Formula::mk_exists_bounded(
            c1, v, conj({Formula::mk_link(2, v, c1), first, inner}));
    }

    // x ->i y over pictures: out_i port of x, its matching in_i port, then y
    F link_chain(int index, const std::string& a, const std::string& b) {
        char out1 = '1', out2 = index == 1 ? '0' : '1';
        char in1 = '0', in2 = index == 1 ? '0' : '1';
        std::string z1 = fresh_var("pz"), z2 = fresh_var("pz");
        F tail = Formula::mk_exists_bounded(
            z2, z1, conj({has_label(z2, in1, in2), Formula::mk_link(1, z2, b)}));
        return Formula::mk_exists_bounded(z1, a, conj({has_label(z1, out1, out2), tail}));
    }

    F translate(const FormulaPtr& f) {
        switch (f->kind) {
        case Formula::True:
        case Formula::False:
        case Formula::Eq: return f;
        case Formula::Bit:
            throw Error("UnsupportedSignature", "bit atoms: only 0-bit pictures translate");
        case Formula::Link:
            if (f->index != 1 && f->index != 2)
                throw Error("UnsupportedSignature",
                            "link index " + std::to_string(f->index) + " outside (0,2)");
            return link_chain(f->index, f->var, f->var2);
        case Formula::SOAtom: return f;
        case Formula::Not: return Formula::mk_not(translate(f->lhs));
        case Formula::Or: return f_or(translate(f->lhs), translate(f->rhs));
        case Formula::And: return f_and(translate(f->lhs), translate(f->rhs));
        case Formula::Implies: return Formula::mk_implies(translate(f->lhs), translate(f->rhs));
        case Formula::Iff: return Formula::mk_iff(translate(f->lhs), translate(f->rhs));
        case Formula::SOQuant:
            return Formula::mk_exists_so(f->sovar, f->arity, translate(f->lhs), f->universal);
        case Formula::FOQuant: {
            if (f->node_restricted)
                throw Error("UnsupportedSignature",
                            "node-restricted quantifiers have no picture reading");
            F inner = translate(f->lhs);
            if (f->var2.empty()) {
                F guard = is_pixel(f->var);
                F body = f->universal ? Formula::mk_implies(guard, inner) : f_and(guard, inner);
                return Formula::mk_exists(f->var, body, f->universal);
            }
            // adjacent centers sit at distance 3 in the encoding
            int radius = f->radius < 0 ? 3 : 3 * f->radius;
            F guard = is_pixel(f->var);
            if (f->radius < 0)
                guard = f_and(guard, Formula::mk_not(Formula::mk_eq(f->var, f->var2)));
            F body = f->universal ? Formula::mk_implies(guard, inner) : f_and(guard, inner);
            return Formula::mk_exists_bounded(f->var, f->var2, body, f->universal,
                                              /*node_restricted=*/false, radius);
        }
        }
        throw Error("Internal", "bad Formula kind");
    }
};

} // namespace

FormulaPtr translate_picture_formula(const FormulaPtr& f) {
    classify(f); // throws NotClassifiable
    PicTranslator tr;
    return tr.translate(f);
}

} // namespace lso
