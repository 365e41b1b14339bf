#include "lso/runtime.hpp"

#include <algorithm>

namespace lso {

std::string sort_incoming(const std::vector<std::pair<std::string, std::string>>& messages) {
    auto sorted = messages;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return id_compare(a.first, b.first) < 0; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i - 1].first == sorted[i].first)
            throw Error("DuplicateSenderId", "two messages from id '" + sorted[i].first + "'");
    std::string tape;
    for (const auto& [id, payload] : sorted) tape += payload + "#";
    return tape;
}

namespace {

struct Schedule {
    std::vector<Node> order;                  // node iteration order per phase
    std::map<Node, std::vector<Node>> peers;  // neighbors ascending by id
};

Schedule make_schedule(const LabeledGraph& g, const IdentifierAssignment& ids, Scheduler sched) {
    for (const auto& v : g.nodes)
        if (!ids.count(v)) throw Error("MissingId", "node '" + v + "' has no identifier");
    if (!check_locally_unique(g, ids, 1))
        throw Error("NotLocallyUnique", "identifier assignment is not 1-locally-unique");
    Schedule s;
    s.order = g.nodes;
    std::sort(s.order.begin(), s.order.end());
    if (sched == Scheduler::Descending) std::reverse(s.order.begin(), s.order.end());
    for (const auto& v : g.nodes) {
        auto nb = g.neighbors(v);
        std::sort(nb.begin(), nb.end(), [&](const Node& a, const Node& b) {
            return id_compare(ids.at(a), ids.at(b)) < 0;
        });
        s.peers[v] = std::move(nb);
    }
    return s;
}

std::string bits_only(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c == '0' || c == '1') out += c;
    return out;
}

// Split the sending-tape content into the first deg #-separated strings;
// blank cells are ignored, missing fields default to the empty string.
std::vector<std::string> outgoing_fields(const std::string& content, std::size_t deg) {
    std::vector<std::string> fields(deg);
    std::size_t field = 0;
    for (char c : content) {
        if (field >= deg) break;
        if (c == '#') ++field;
        else if (c != '_') fields[field] += c;
    }
    return fields;
}

} // namespace

ExecutionResult execute(const DistributedMachine& m, const LabeledGraph& g,
                        const IdentifierAssignment& ids, const CertificateAssignment& certs,
                        const Limits& limits, Scheduler sched) {
    if (limits.max_rounds <= 0 || limits.max_steps == 0)
        throw Error("BadLimits", "limits must be positive");
    Schedule s = make_schedule(g, ids, sched);

    std::map<Node, TapeConfig> cfg;
    std::map<Node, bool> stopped;
    for (const auto& v : g.nodes) {
        TapeConfig c;
        std::string certlist = certs.count(v) ? certs.at(v) : "";
        c.internal_tape = ">" + g.label(v) + "#" + ids.at(v) + "#" + certlist;
        c.cells_touched = c.internal_tape.size();
        cfg[v] = c;
        stopped[v] = false;
    }

    ExecutionResult res;
    res.result.edges = g.edges;
    std::map<Node, std::vector<std::pair<std::string, std::string>>> mailbox;

    for (int round = 1;; ++round) {
        if (round > limits.max_rounds)
            throw Error("RoundLimitExceeded",
                        "no termination within " + std::to_string(limits.max_rounds) + " rounds");
        // phase 1: fill receiving tapes
        for (const auto& v : s.order) {
            std::string content = round == 1 ? std::string(g.degree(v), '#')
                                             : sort_incoming(mailbox[v]);
            cfg[v].receiving = ">" + content;
            res.receiving_trace[v].push_back(content);
            mailbox[v].clear();
        }
        // phase 2: local computation from qstart
        std::map<Node, bool> stopped_before = stopped;
        for (const auto& v : s.order) {
            auto& c = cfg[v];
            if (stopped[v]) {
                res.steps[v].push_back(0);
                continue;
            }
            c.state = "qstart";
            c.hr = c.hi = c.hs = 0;
            c.sending = ">";
            std::uint64_t count = 0;
            while (c.state != "qpause" && c.state != "qstop") {
                if (count >= limits.max_steps)
                    throw Error("StepLimitExceeded", "node '" + v + "' exceeded " +
                                                         std::to_string(limits.max_steps) +
                                                         " steps in round " + std::to_string(round));
                step_local(m, c);
                ++count;
            }
            res.steps[v].push_back(count);
            if (c.state == "qstop") stopped[v] = true;
        }
        // phase 3: deliver messages; nodes stopped in an earlier round send empties
        for (const auto& v : s.order) {
            std::vector<std::string> fields =
                stopped_before[v] ? std::vector<std::string>(g.degree(v))
                                  : outgoing_fields(cfg[v].sending.substr(1), g.degree(v));
            for (std::size_t i = 0; i < s.peers[v].size(); ++i)
                mailbox[s.peers[v][i]].emplace_back(ids.at(v), fields[i]);
        }
        if (std::all_of(s.order.begin(), s.order.end(),
                        [&](const Node& v) { return stopped[v]; })) {
            res.rounds = round;
            break;
        }
    }

    for (const auto& v : g.nodes) {
        std::string bits = bits_only(cfg[v].internal_tape);
        res.result.add_node(v, bits);
        res.verdicts[v] = bits == "1";
        res.space[v] = cfg[v].cells_touched;
    }
    // preserve input node order
    res.result.nodes = g.nodes;
    return res;
}

ExecutionResult execute(const NodeProgram& prog, const LabeledGraph& g,
                        const IdentifierAssignment& ids, const CertificateAssignment& certs,
                        const Limits& limits, Scheduler sched) {
    if (limits.max_rounds <= 0) throw Error("BadLimits", "limits must be positive");
    Schedule s = make_schedule(g, ids, sched);

    std::map<Node, std::string> state;
    std::map<Node, bool> stopped;
    std::map<Node, std::string> final_value;
    ExecutionResult res;
    res.result.edges = g.edges;
    std::map<Node, std::vector<std::pair<std::string, std::string>>> mailbox;
    std::map<Node, std::vector<std::string>> outbox;

    for (int round = 1;; ++round) {
        if (round > limits.max_rounds)
            throw Error("RoundLimitExceeded",
                        "no termination within " + std::to_string(limits.max_rounds) + " rounds");
        // phase 1: sorted incoming payloads
        std::map<Node, std::vector<std::string>> incoming;
        for (const auto& v : s.order) {
            std::vector<std::string> in;
            if (round == 1) {
                in.assign(g.degree(v), "");
            } else {
                auto msgs = mailbox[v];
                std::sort(msgs.begin(), msgs.end(), [](const auto& a, const auto& b) {
                    return id_compare(a.first, b.first) < 0;
                });
                for (const auto& [sender, payload] : msgs) in.push_back(payload);
            }
            std::string trace;
            for (const auto& p : in) trace += p + "#";
            res.receiving_trace[v].push_back(trace);
            incoming[v] = std::move(in);
            mailbox[v].clear();
        }
        // phase 2
        for (const auto& v : s.order) {
            if (stopped[v]) {
                res.steps[v].push_back(0);
                outbox[v].assign(g.degree(v), "");
                continue;
            }
            std::string certlist = certs.count(v) ? certs.at(v) : "";
            ProgramResult out =
                prog(round, g.label(v), ids.at(v), certlist, incoming[v], state[v]);
            state[v] = out.state;
            res.steps[v].push_back(1);
            res.space[v] = std::max(res.space[v], out.state.size());
            out.outgoing.resize(g.degree(v));
            outbox[v] = out.outgoing;
            if (out.final_value) {
                final_value[v] = *out.final_value;
                stopped[v] = true;
            }
        }
        // phase 3
        for (const auto& v : s.order)
            for (std::size_t i = 0; i < s.peers[v].size(); ++i)
                mailbox[s.peers[v][i]].emplace_back(ids.at(v), outbox[v][i]);
        if (std::all_of(s.order.begin(), s.order.end(),
                        [&](const Node& v) { return stopped[v]; })) {
            res.rounds = round;
            break;
        }
    }

    for (const auto& v : g.nodes) {
        std::string bits = bits_only(final_value[v]);
        res.result.add_node(v, bits);
        res.verdicts[v] = bits == "1";
    }
    res.result.nodes = g.nodes;
    return res;
}

bool accepts(const ExecutionResult& res) {
    return std::all_of(res.verdicts.begin(), res.verdicts.end(),
                       [](const auto& kv) { return kv.second; });
}

NodeProgram machine_as_program(DistributedMachine m, std::uint64_t max_steps) {
    return [m = std::move(m), max_steps](int round, const std::string& label,
                                         const std::string& id, const std::string& certlist,
                                         const std::vector<std::string>& incoming,
                                         const std::string& state) {
        TapeConfig c;
        c.internal_tape = round == 1 ? ">" + label + "#" + id + "#" + certlist : state;
        c.receiving = ">";
        for (const auto& p : incoming) c.receiving += p + "#";
        c.sending = ">";
        c.state = "qstart";
        std::uint64_t count = 0;
        while (c.state != "qpause" && c.state != "qstop") {
            if (count >= max_steps)
                throw Error("StepLimitExceeded",
                            "machine exceeded " + std::to_string(max_steps) + " steps");
            step_local(m, c);
            ++count;
        }
        ProgramResult r;
        r.state = c.internal_tape;
        r.outgoing = outgoing_fields(c.sending.substr(1), incoming.size());
        if (c.state == "qstop") r.final_value = c.internal_tape;
        return r;
    };
}

} // namespace lso
