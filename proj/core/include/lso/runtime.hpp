#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lso/graph.hpp"
#include "lso/machine.hpp"

namespace lso {

// Phase 1: payloads ordered ascending by sender identifier (prefix-first
// order), each followed by the separator: m1#m2#...#md#.
std::string sort_incoming(const std::vector<std::pair<std::string, std::string>>& messages);

// Host-language stand-in for a local machine, sharing the scheduler and
// acceptance discipline of the tape runtime.
struct ProgramResult {
    std::string state;                        // private state carried between rounds
    std::vector<std::string> outgoing;        // to neighbors in ascending id order
    std::optional<std::string> final_value;   // bit content; set => the node halts
};
using NodeProgram = std::function<ProgramResult(
    int round, const std::string& label, const std::string& id, const std::string& certlist,
    const std::vector<std::string>& incoming, const std::string& state)>;

struct Limits {
    int max_rounds = 64;
    std::uint64_t max_steps = 1u << 20; // per node per round (phase 2)
};

enum class Scheduler { Ascending, Descending }; // node iteration order per phase

struct ExecutionResult {
    LabeledGraph result; // same topology; labels = final internal bit content
    std::map<Node, bool> verdicts;
    int rounds = 0;
    std::map<Node, std::vector<std::uint64_t>> steps; // per round, phase-2 steps
    std::map<Node, std::size_t> space;                // max cells touched
    std::map<Node, std::vector<std::string>> receiving_trace; // per round, post-phase-1 tape
};

// Synchronized rounds over g. The certificate map holds each node's full
// certificate list (already #-joined). Internal tape starts round 1 as
// label#id#certlist.
ExecutionResult execute(const DistributedMachine& m, const LabeledGraph& g,
                        const IdentifierAssignment& ids, const CertificateAssignment& certs,
                        const Limits& limits = {}, Scheduler sched = Scheduler::Ascending);

ExecutionResult execute(const NodeProgram& prog, const LabeledGraph& g,
                        const IdentifierAssignment& ids, const CertificateAssignment& certs,
                        const Limits& limits = {}, Scheduler sched = Scheduler::Ascending);

// Unanimity: every node's final bit content is exactly "1".
bool accepts(const ExecutionResult& res);

// Wraps a tape machine as a NodeProgram with identical round semantics; the
// carried state is the internal tape.
NodeProgram machine_as_program(DistributedMachine m, std::uint64_t max_steps = 1u << 20);

} // namespace lso
