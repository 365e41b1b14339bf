#pragma once

#include <optional>
#include <vector>

#include "lso/eval.hpp"
#include "lso/formula.hpp"
#include "lso/runtime.hpp"

namespace lso {

enum class Player { Eve, Adam };

// One alternation level of the certificate game: its quantifier polarity is
// determined by first_player and the level index (Eve = existential).
struct GameSpec {
    int level = 0;
    Player first_player = Player::Eve;
    int cert_radius = 0;
    Polynomial cert_poly;                    // bound p for (r, p)-boundedness
    std::optional<std::uint64_t> cert_cap;   // extra per-node length cap
    std::vector<NodeProgram> restrictors;    // size == level; empty entries = unrestricted
};

struct ArbitrateLimits {
    // Refuse (BudgetExceeded) when one level's raw search space exceeds this.
    std::uint64_t max_assignments_per_level = 1u << 20;
    Limits exec;
};

// Raw-bit-string regime: quantifiers range over all (r, p)-bounded
// certificate assignments, further capped by cert_cap, filtered per level by
// the restrictor (violations resolve by quantifier polarity). Game-tree
// search with short-circuiting.
bool arbitrate(const NodeProgram& prog, const LabeledGraph& g, const IdentifierAssignment& ids,
               const GameSpec& spec, const ArbitrateLimits& limits = {});

// One alternation block of second-order variables with a shared polarity.
struct CertBlock {
    bool universal = false;
    std::vector<std::pair<std::string, int>> vars; // (name, arity), declaration order
};

// Product of compiling a Sigma(l)/Pi(l)/LFO sentence: a node program that
// floods its radius-r neighborhood, decodes per-node certificates as relation
// fragments addressed by identifier, and evaluates the first-order part at
// its own elements.
struct CompiledArbiter {
    NodeProgram program;
    int radius = 0;
    std::vector<CertBlock> scheme; // one entry per game level
    GameSpec spec;
};

CompiledArbiter compile_formula_to_arbiter(const FormulaPtr& f);

// Relation-encoded regime: quantifiers range over relation assignments per
// block (within the evaluator's caps), encoded into certificates for the
// compiled program.
bool arbitrate(const CompiledArbiter& arb, const LabeledGraph& g, const IdentifierAssignment& ids,
               const ArbitrateLimits& limits = {}, const EvalOptions& eval_opts = {});

// Brute-force check of local repairability: whenever some node rejects under
// an in-bounds certificate assignment, a single-node change can flip that
// node to accept without disturbing any other verdict.
bool check_local_repairability(const NodeProgram& restrictor, const LabeledGraph& g,
                               const IdentifierAssignment& ids, const GameSpec& spec,
                               const ArbitrateLimits& limits = {});

// Compile + arbitrate, falling back to direct evaluation on S(G) when the
// game search is refused.
bool decide_via_formula(const LabeledGraph& g, const FormulaPtr& f,
                        const IdentifierAssignment& ids);

} // namespace lso
