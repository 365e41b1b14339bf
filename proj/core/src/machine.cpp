#include "lso/machine.hpp"

#include <fstream>
#include <sstream>

namespace lso {

bool is_tape_symbol(char c) {
    return c == '>' || c == '_' || c == '#' || c == '0' || c == '1';
}

namespace {

char tape_read(const std::string& tape, std::size_t pos) {
    return pos < tape.size() ? tape[pos] : '_';
}

void tape_write(std::string& tape, std::size_t pos, char c, const char* which) {
    if (pos == 0) {
        if (c != '>')
            throw Error("StartMarkerViolation",
                        std::string("attempt to overwrite '>' on the ") + which + " tape");
        return;
    }
    if (c == '>')
        throw Error("StartMarkerViolation",
                    std::string("attempt to write '>' mid-tape on the ") + which + " tape");
    if (pos >= tape.size()) tape.resize(pos + 1, '_');
    tape[pos] = c;
}

std::size_t moved(std::size_t pos, Move m, const char* which) {
    switch (m) {
    case Move::S: return pos;
    case Move::R: return pos + 1;
    case Move::L:
        if (pos == 0)
            throw Error("HeadUnderflow", std::string("head on the ") + which +
                                             " tape moved past the start marker");
        return pos - 1;
    }
    throw Error("Internal", "bad Move");
}

Move parse_move(const std::string& s, int line) {
    if (s == "L") return Move::L;
    if (s == "S") return Move::S;
    if (s == "R") return Move::R;
    throw Error("ParseError", "line " + std::to_string(line) + ": bad move '" + s + "'");
}

char parse_symbol(const std::string& s, int line) {
    if (s.size() != 1 || !is_tape_symbol(s[0]))
        throw Error("ParseError", "line " + std::to_string(line) + ": bad tape symbol '" + s + "'");
    return s[0];
}

} // namespace

void step_local(const DistributedMachine& m, TapeConfig& cfg) {
    if (cfg.state == "qpause" || cfg.state == "qstop")
        throw Error("Internal", "step_local called in state " + cfg.state);
    TransKey key{cfg.state, tape_read(cfg.receiving, cfg.hr), tape_read(cfg.internal_tape, cfg.hi),
                 tape_read(cfg.sending, cfg.hs)};
    auto it = m.transitions.find(key);
    if (it == m.transitions.end())
        throw Error("UndefinedTransition", "state " + key.state + ", symbols '" +
                                               std::string{key.r} + "','" + std::string{key.i} +
                                               "','" + std::string{key.s} + "'");
    const TransOut& out = it->second;
    tape_write(cfg.internal_tape, cfg.hi, out.i, "internal");
    tape_write(cfg.sending, cfg.hs, out.s, "sending");
    cfg.hr = moved(cfg.hr, out.mr, "receiving");
    cfg.hi = moved(cfg.hi, out.mi, "internal");
    cfg.hs = moved(cfg.hs, out.ms, "sending");
    cfg.state = out.state;
    cfg.cells_touched = std::max({cfg.cells_touched, cfg.hr + 1, cfg.hi + 1, cfg.hs + 1,
                                  cfg.internal_tape.size(), cfg.sending.size()});
}

DistributedMachine parse_dtm(const std::string& text) {
    DistributedMachine m;
    m.states = {"qstart", "qpause", "qstop"};
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw Error("ParseError", "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head == "state") {
            std::string name;
            if (!(ls >> name)) fail("state needs a name");
            m.states.insert(name);
            continue;
        }
        if (head != "trans") fail("expected 'state' or 'trans', got '" + head + "'");
        std::string q, r, i, s, arrow, q2, i2, s2, dr, di, ds;
        if (!(ls >> q >> r >> i >> s >> arrow >> q2 >> i2 >> s2 >> dr >> di >> ds) ||
            arrow != "->")
            fail("trans syntax: trans <q> <r> <i> <s> -> <q'> <i'> <s'> <Dr> <Di> <Ds>");
        std::string extra;
        if (ls >> extra) fail("trailing input '" + extra + "'");
        if (q == "qstop") fail("transitions from qstop are not allowed");
        TransKey key{q, parse_symbol(r, lineno), parse_symbol(i, lineno), parse_symbol(s, lineno)};
        TransOut out{q2, parse_symbol(i2, lineno), parse_symbol(s2, lineno),
                     parse_move(dr, lineno), parse_move(di, lineno), parse_move(ds, lineno)};
        if (m.transitions.count(key)) fail("duplicate transition for this state/symbol triple");
        m.transitions[key] = out;
    }
    for (const auto& [key, out] : m.transitions) {
        if (!m.states.count(key.state) || !m.states.count(out.state))
            throw Error("ParseError", "transition uses undeclared state '" +
                                          (m.states.count(key.state) ? out.state : key.state) + "'");
    }
    return m;
}

DistributedMachine load_dtm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dtm(buf.str());
}

} // namespace lso
