#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "lso/formula.hpp"
#include "lso/graph.hpp"
#include "lso/structure.hpp"

namespace lso {

// H x W matrix of fixed-length bit strings.
struct Picture {
    int bits = 0;
    int height = 0;
    int width = 0;
    std::vector<std::vector<std::string>> cells; // cells[i][j], row-major

    const std::string& cell(int i, int j) const { return cells[i][j]; }
};

void validate_picture(const Picture& p); // throws InvalidPicture

// One corner of a 2x2 tile: the boundary symbol, or a bit string + state.
struct TileEntry {
    bool boundary = true;
    std::string bits;
    std::string state;

    auto operator<=>(const TileEntry&) const = default;
};

using Tile = std::array<TileEntry, 4>; // TL, TR, BL, BR

struct TilingSystem {
    int bits = 0;
    std::set<std::string> states;
    std::vector<Tile> tiles;
};

Picture parse_pic(const std::string& text);
Picture load_pic(const std::string& path);
std::string format_pic(const Picture& p);

TilingSystem parse_ts(const std::string& text);
TilingSystem load_ts(const std::string& path);

// Signature (bits, 2): elements are pixels, link 1 = vertical successor,
// link 2 = horizontal successor, bit set j = pixels whose j-th bit is 1.
RelationalStructure picture_structure(const Picture& p);

// True iff some state assignment makes every 2x2 subblock of the
// boundary-framed picture match a tile. Exact backtracking search.
bool ts_accepts(const TilingSystem& t, const Picture& p);

// Sigma(1) monadic sentence E2 (X_q)_q A x (OneState(x) & LegalTiling(x))
// such that evaluate(picture_structure(p), result) == ts_accepts(t, p).
FormulaPtr ts_to_formula(const TilingSystem& t);

// Five nodes per pixel: an unlabeled center and four ports labeled
// in1=00, in2=01, out1=10, out2=11; star edges center-port, plus
// out1(i,j)-in1(i+1,j) and out2(i,j)-in2(i,j+1).
LabeledGraph encode_picture_as_graph(const Picture& p); // throws NonZeroBits

// Forward translation: a sentence over 0-bit picture structures becomes a
// sentence over graph structures agreeing on every encoding. Quantifiers are
// relativized to pixel centers; link atoms become port chains; bounded radii
// triple (adjacent centers are at distance 3). Alternation is preserved.
FormulaPtr translate_picture_formula(const FormulaPtr& f);

} // namespace lso
