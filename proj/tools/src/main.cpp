#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lso/eval.hpp"
#include "lso/games.hpp"
#include "lso/graph.hpp"
#include "lso/library_formulas.hpp"
#include "lso/oracles.hpp"
#include "lso/picture.hpp"
#include "lso/reductions.hpp"
#include "lso/runtime.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lso::Error("IoError", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Common {
    bool json_out = false;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct GraphInput {
    std::string path;
    int rho = 1;

    // file ids win when present on every node; otherwise generated
    std::pair<lso::LabeledGraph, lso::IdentifierAssignment> load(std::uint64_t seed) const {
        lso::ParsedGraph pg = lso::load_lg(path);
        lso::validate_graph(pg.graph);
        bool complete = !pg.graph.nodes.empty();
        for (const auto& v : pg.graph.nodes)
            if (!pg.ids.count(v)) complete = false;
        auto ids = complete ? pg.ids : lso::generate_small_ids(pg.graph, rho, seed);
        return {pg.graph, ids};
    }
};

lso::FormulaPtr load_formula(const std::string& formula_path, const std::string& library_name) {
    if (!library_name.empty()) return lso::library_formula(library_name);
    if (formula_path.empty())
        throw lso::Error("Usage", "need --formula or --library");
    return lso::parse_lso(read_file(formula_path));
}

int verdict_exit(bool v, const Common& c, json extra = json::object()) {
    if (c.json_out) {
        extra["verdict"] = v;
        std::cout << extra.dump() << "\n";
    } else {
        std::cout << (v ? "true" : "false") << "\n";
    }
    return v ? 0 : 1;
}

lso::CertificateAssignment parse_certs(const std::vector<std::string>& kvs) {
    lso::CertificateAssignment certs;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw lso::Error("Usage", "--cert expects node=value, got '" + kv + "'");
        certs[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return certs;
}

lso::Polynomial parse_poly(const std::string& csv) {
    lso::Polynomial p;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) p.push_back(std::stoull(tok));
    if (p.empty()) throw lso::Error("Usage", "--poly needs at least one coefficient");
    return p;
}

using NamedReduction =
    std::function<lso::ClusterGraph(const lso::LabeledGraph&, const lso::IdentifierAssignment&)>;

NamedReduction cluster_reduction(const std::string& name) {
    if (name == "as2eul") return lso::reduce_allselected_to_eulerian;
    if (name == "as2ham") return lso::reduce_allselected_to_hamiltonian;
    if (name == "nas2ham") return lso::reduce_notallselected_to_hamiltonian;
    throw lso::Error("Unsupported", "unknown reduction '" + name + "'");
}

// which input property a sweepable reduction preserves, and the target oracle
struct SweepSpec {
    std::string input_prop;
    std::string output_prop;
};

SweepSpec sweep_spec(const std::string& name) {
    if (name == "as2eul") return {"allselected", "eulerian"};
    if (name == "as2ham") return {"allselected", "hamiltonian"};
    if (name == "nas2ham") return {"notallselected", "hamiltonian"};
    throw lso::Error("Unsupported", "cannot sweep reduction '" + name + "'");
}

int cmd_verify_reduction(const Common& c, const std::string& name, int max_nodes) {
    NamedReduction red = cluster_reduction(name);
    SweepSpec spec = sweep_spec(name);
    auto graphs = lso::enumerate_graphs(max_nodes, {"0", "1"});
    struct Row {
        std::size_t index;
        bool input_verdict, output_verdict, cluster_ok;
    };
    std::vector<Row> rows(graphs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < graphs.size(); i = next.fetch_add(1)) {
            const auto& g = graphs[i];
            auto ids = lso::generate_small_ids(g, 1, c.seed);
            lso::ClusterGraph cg = red(g, ids);
            lso::validate_graph(cg.output);
            rows[i] = {i, lso::check_property(spec.input_prop, g),
                       lso::check_property(spec.output_prop, cg.output),
                       lso::validate_cluster_map(cg, g)};
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < c.jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool all_ok = true;
    json out = json::array();
    for (const auto& r : rows) {
        bool ok = r.input_verdict == r.output_verdict && r.cluster_ok;
        all_ok = all_ok && ok;
        if (c.json_out) {
            out.push_back({{"graph", r.index},
                           {"input", r.input_verdict},
                           {"output", r.output_verdict},
                           {"cluster_map", r.cluster_ok},
                           {"ok", ok}});
        } else {
            std::cout << "graph " << r.index << ": " << spec.input_prop << "="
                      << (r.input_verdict ? "true" : "false") << " " << spec.output_prop << "="
                      << (r.output_verdict ? "true" : "false")
                      << (r.cluster_ok ? "" : " cluster-map-violation")
                      << (ok ? " ok" : " MISMATCH") << "\n";
        }
    }
    if (c.json_out)
        std::cout << json{{"name", name}, {"instances", graphs.size()}, {"ok", all_ok},
                          {"rows", out}}
                         .dump()
                  << "\n";
    else
        std::cout << (all_ok ? "true" : "false") << "\n";
    return all_ok ? 0 : 1;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"local second-order logic and local-polynomial games workbench"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    Common c;
    app.add_flag("--json", c.json_out, "machine-readable output");
    app.add_option("--seed", c.seed, "seed for identifier generation");
    app.add_option("--jobs", c.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a formula on a graph or picture");
    GraphInput eval_g;
    std::string eval_pic, eval_formula, eval_lib;
    lso::EvalOptions eval_opts;
    eval->add_option("--graph", eval_g.path, "input .lg graph");
    eval->add_option("--picture", eval_pic, "input .pic picture");
    eval->add_option("--formula", eval_formula, "input .lso formula");
    eval->add_option("--library", eval_lib, "library formula name");
    eval->add_option("--arity1-cap", eval_opts.max_domain_arity1, "domain cap for set variables");
    eval->add_option("--arity2-cap", eval_opts.max_domain_arity2,
                     "domain cap for binary relation variables");

    // classify
    auto* classify = app.add_subcommand("classify", "name the smallest fragment of a formula");
    std::string cls_formula, cls_lib;
    classify->add_option("--formula", cls_formula, "input .lso formula");
    classify->add_option("--library", cls_lib, "library formula name");

    // run
    auto* run = app.add_subcommand("run", "execute a distributed machine on a graph");
    GraphInput run_g;
    std::string run_machine, run_sched = "asc";
    std::vector<std::string> run_certs;
    bool run_trace = false;
    int run_rounds = 64;
    run->add_option("--machine", run_machine, "input .dtm machine")->required();
    run->add_option("--graph", run_g.path, "input .lg graph")->required();
    run->add_option("--rho", run_g.rho, "local uniqueness radius for generated ids");
    run->add_option("--cert", run_certs, "certificate list per node, node=value");
    run->add_option("--scheduler", run_sched, "asc or desc node iteration order");
    run->add_option("--max-rounds", run_rounds, "round limit");
    run->add_flag("--trace", run_trace, "print per-round receiving tapes");

    // arbitrate
    auto* arb = app.add_subcommand("arbitrate", "decide a certificate game");
    GraphInput arb_g;
    std::string arb_machine, arb_formula, arb_lib, arb_player = "eve", arb_poly = "0,1";
    int arb_level = 1, arb_radius = 0;
    std::uint64_t arb_cap = 0;
    bool arb_cap_set = false;
    arb->add_option("--graph", arb_g.path, "input .lg graph")->required();
    arb->add_option("--machine", arb_machine, "arbiter machine (.dtm, raw-certificate game)");
    arb->add_option("--formula", arb_formula, "sentence to compile (.lso)");
    arb->add_option("--library", arb_lib, "library formula name");
    arb->add_option("--level", arb_level, "alternation levels");
    arb->add_option("--player", arb_player, "first player, eve or adam");
    arb->add_option("--radius", arb_radius, "certificate radius r");
    arb->add_option("--poly", arb_poly, "certificate length polynomial, c0,c1,...");
    arb->add_option("--cap", arb_cap, "per-node certificate length cap")
        ->each([&](const std::string&) { arb_cap_set = true; });

    // reduce
    auto* reduce = app.add_subcommand("reduce", "apply a named reduction");
    GraphInput red_g;
    std::string red_name, red_formula, red_lib;
    reduce->add_option("--name", red_name,
                       "as2eul | as2ham | nas2ham | sat2-3sat | 3sat2-3col | cooklevin")
        ->required();
    reduce->add_option("--graph", red_g.path, "input .lg graph")->required();
    reduce->add_option("--rho", red_g.rho, "local uniqueness radius for generated ids");
    reduce->add_option("--formula", red_formula, "Sigma(1) sentence for cooklevin");
    reduce->add_option("--library", red_lib, "library formula name for cooklevin");

    // verify-reduction
    auto* verify = app.add_subcommand("verify-reduction", "oracle sweep over all small inputs");
    std::string ver_name;
    int ver_max_nodes = 4;
    verify->add_option("--name", ver_name, "as2eul | as2ham | nas2ham")->required();
    verify->add_option("--max-nodes", ver_max_nodes, "input size bound");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "brute-force property check");
    GraphInput orc_g;
    std::string orc_name;
    oracle->add_option("--name", orc_name, "property name")->required();
    oracle->add_option("--graph", orc_g.path, "input .lg graph")->required();

    // tiling
    auto* tiling = app.add_subcommand("tiling", "tiling-system acceptance");
    std::string til_ts, til_pic;
    tiling->add_option("--ts", til_ts, "input .ts tiling system")->required();
    tiling->add_option("--picture", til_pic, "input .pic picture")->required();

    // ts2formula
    auto* ts2f = app.add_subcommand("ts2formula", "emit the Sigma(1) sentence of a tiling system");
    std::string t2f_ts;
    ts2f->add_option("--ts", t2f_ts, "input .ts tiling system")->required();

    // encode-picture
    auto* encp = app.add_subcommand("encode-picture", "emit the graph encoding of a picture");
    std::string enc_pic;
    encp->add_option("--picture", enc_pic, "input .pic picture")->required();

    // translate-formula
    auto* trf = app.add_subcommand("translate-formula",
                                   "translate a picture sentence to the graph encoding");
    std::string trf_formula;
    trf->add_option("--formula", trf_formula, "input .lso formula")->required();

    // gen-ids
    auto* gen = app.add_subcommand("gen-ids", "emit the graph with generated identifiers");
    GraphInput gen_g;
    gen->add_option("--graph", gen_g.path, "input .lg graph")->required();
    gen->add_option("--rho", gen_g.rho, "local uniqueness radius");

    // enumerate
    auto* enu = app.add_subcommand("enumerate", "list all connected labeled graphs");
    int enu_max_nodes = 3;
    std::string enu_labels;
    enu->add_option("--max-nodes", enu_max_nodes, "node count bound");
    enu->add_option("--labels", enu_labels, "label alphabet, comma separated (default: empty label)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (eval->parsed()) {
        auto f = load_formula(eval_formula, eval_lib);
        if (!eval_pic.empty()) {
            auto s = lso::picture_structure(lso::load_pic(eval_pic));
            return verdict_exit(lso::evaluate(s, f, {}, eval_opts), c);
        }
        if (eval_g.path.empty()) throw lso::Error("Usage", "need --graph or --picture");
        auto [g, ids] = eval_g.load(c.seed);
        return verdict_exit(lso::evaluate(lso::structural_representation(g), f, {}, eval_opts), c);
    }
    if (classify->parsed()) {
        auto tag = lso::classify(load_formula(cls_formula, cls_lib));
        if (c.json_out)
            std::cout << json{{"fragment", tag.str()}, {"monadic", tag.monadic}}.dump() << "\n";
        else
            std::cout << tag.str() << "\n";
        return 0;
    }
    if (run->parsed()) {
        auto m = lso::load_dtm(run_machine);
        auto [g, ids] = run_g.load(c.seed);
        lso::Limits lim;
        lim.max_rounds = run_rounds;
        auto sched = run_sched == "desc" ? lso::Scheduler::Descending : lso::Scheduler::Ascending;
        auto res = lso::execute(m, g, ids, parse_certs(run_certs), lim, sched);
        if (c.json_out) {
            json nodes = json::object();
            for (const auto& v : g.nodes)
                nodes[v] = {{"verdict", res.verdicts.at(v)},
                            {"value", res.result.label(v)},
                            {"receiving", res.receiving_trace.at(v)}};
            std::cout << json{{"rounds", res.rounds}, {"nodes", nodes},
                              {"verdict", lso::accepts(res)}}
                             .dump()
                      << "\n";
            return lso::accepts(res) ? 0 : 1;
        }
        std::cout << "rounds " << res.rounds << "\n";
        for (const auto& v : g.nodes) {
            std::cout << "node " << v << " verdict=" << (res.verdicts.at(v) ? "1" : "0")
                      << " value=" << res.result.label(v) << "\n";
            if (run_trace) {
                const auto& trace = res.receiving_trace.at(v);
                for (std::size_t i = 0; i < trace.size(); ++i)
                    std::cout << "  round " << i + 1 << " receiving " << trace[i] << "\n";
            }
        }
        return verdict_exit(lso::accepts(res), c);
    }
    if (arb->parsed()) {
        auto [g, ids] = arb_g.load(c.seed);
        if (!arb_formula.empty() || !arb_lib.empty()) {
            auto f = load_formula(arb_formula, arb_lib);
            auto compiled = lso::compile_formula_to_arbiter(f);
            return verdict_exit(lso::arbitrate(compiled, g, ids), c);
        }
        if (arb_machine.empty())
            throw lso::Error("Usage", "need --machine or --formula/--library");
        lso::GameSpec spec;
        spec.level = arb_level;
        spec.first_player = arb_player == "adam" ? lso::Player::Adam : lso::Player::Eve;
        spec.cert_radius = arb_radius;
        spec.cert_poly = parse_poly(arb_poly);
        if (arb_cap_set) spec.cert_cap = arb_cap;
        auto prog = lso::machine_as_program(lso::load_dtm(arb_machine));
        return verdict_exit(lso::arbitrate(prog, g, ids, spec), c);
    }
    if (reduce->parsed()) {
        auto [g, ids] = red_g.load(c.seed);
        if (red_name == "sat2-3sat") {
            std::cout << lso::format_lg(lso::reduce_satgraph_to_3satgraph(g, ids));
            return 0;
        }
        if (red_name == "3sat2-3col") {
            auto cg = lso::reduce_3satgraph_to_3colorable(g, ids);
            std::cout << lso::format_lg(cg.output);
            for (const auto& [w, u] : cg.cluster_map) std::cout << "# cluster " << w << " " << u << "\n";
            return 0;
        }
        if (red_name == "cooklevin") {
            auto f = load_formula(red_formula, red_lib);
            std::cout << lso::format_lg(lso::cook_levin_translate(f, g, ids));
            return 0;
        }
        auto cg = cluster_reduction(red_name)(g, ids);
        std::cout << lso::format_lg(cg.output);
        for (const auto& [w, u] : cg.cluster_map) std::cout << "# cluster " << w << " " << u << "\n";
        return 0;
    }
    if (verify->parsed()) return cmd_verify_reduction(c, ver_name, ver_max_nodes);
    if (oracle->parsed()) {
        auto pg = lso::load_lg(orc_g.path);
        lso::validate_graph(pg.graph);
        return verdict_exit(lso::check_property(orc_name, pg.graph), c);
    }
    if (tiling->parsed())
        return verdict_exit(lso::ts_accepts(lso::load_ts(til_ts), lso::load_pic(til_pic)), c);
    if (ts2f->parsed()) {
        std::cout << lso::format_lso(lso::ts_to_formula(lso::load_ts(t2f_ts))) << "\n";
        return 0;
    }
    if (encp->parsed()) {
        std::cout << lso::format_lg(lso::encode_picture_as_graph(lso::load_pic(enc_pic)));
        return 0;
    }
    if (trf->parsed()) {
        auto f = lso::parse_lso(read_file(trf_formula));
        std::cout << lso::format_lso(lso::translate_picture_formula(f)) << "\n";
        return 0;
    }
    if (gen->parsed()) {
        auto pg = lso::load_lg(gen_g.path);
        lso::validate_graph(pg.graph);
        auto ids = lso::generate_small_ids(pg.graph, gen_g.rho, c.seed);
        if (c.json_out) {
            json out = json::object();
            for (const auto& [v, id] : ids) out[v] = id;
            std::cout << out.dump() << "\n";
        } else {
            std::cout << lso::format_lg(pg.graph, &ids);
        }
        return 0;
    }
    if (enu->parsed()) {
        std::vector<std::string> alphabet;
        if (enu_labels.empty()) {
            alphabet = {""};
        } else {
            std::istringstream in(enu_labels);
            std::string tok;
            while (std::getline(in, tok, ',')) alphabet.push_back(tok);
        }
        auto graphs = lso::enumerate_graphs(enu_max_nodes, alphabet);
        if (c.json_out) {
            json out = json::array();
            for (const auto& g : graphs) out.push_back(lso::format_lg(g));
            std::cout << json{{"count", graphs.size()}, {"graphs", out}}.dump() << "\n";
        } else {
            for (std::size_t i = 0; i < graphs.size(); ++i) {
                std::cout << "# graph " << i << "\n" << lso::format_lg(graphs[i]);
                if (i + 1 < graphs.size()) std::cout << "\n";
            }
        }
        return 0;
    }
    throw lso::Error("Usage", "no subcommand");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const lso::Error& e) {
        std::cerr << "error (" << e.code << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
