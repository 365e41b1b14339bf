#pragma once

#include <map>
#include <set>
#include <string>

#include "lso/error.hpp"

namespace lso {

// Tape alphabet in file form: '>' start marker, '_' blank, '#' separator,
// '0', '1'.
inline constexpr char kTapeSymbols[] = ">_#01";
bool is_tape_symbol(char c);

enum class Move { L, S, R };

struct TransKey {
    std::string state;
    char r, i, s; // symbols read on receiving / internal / sending tape
    auto operator<=>(const TransKey&) const = default;
};

struct TransOut {
    std::string state;
    char i, s; // symbols written on internal / sending tape
    Move mr, mi, ms;
};

// Three one-way tapes per node: receiving (read-only), internal, sending.
// Reserved states qstart, qpause, qstop need not be declared.
struct DistributedMachine {
    std::set<std::string> states;
    std::map<TransKey, TransOut> transitions;
};

DistributedMachine parse_dtm(const std::string& text);
DistributedMachine load_dtm(const std::string& path);

// One node's phase-2 configuration. Tapes store cell contents including the
// leading '>'; cells past the end read as blanks.
struct TapeConfig {
    std::string state = "qstart";
    std::string receiving = ">";
    std::string internal_tape = ">";
    std::string sending = ">";
    std::size_t hr = 0, hi = 0, hs = 0;

    std::size_t cells_touched = 1;
};

// One transition application. Throws UndefinedTransition, HeadUnderflow,
// StartMarkerViolation; the caller guards against qpause/qstop states.
void step_local(const DistributedMachine& m, TapeConfig& cfg);

} // namespace lso
