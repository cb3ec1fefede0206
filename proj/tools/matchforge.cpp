#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/charging.hpp"
#include "matchforge/decomposition.hpp"
#include "matchforge/error.hpp"
#include "matchforge/game.hpp"
#include "matchforge/generators.hpp"
#include "matchforge/hard_instance.hpp"
#include "matchforge/io.hpp"
#include "matchforge/matchers.hpp"
#include "matchforge/optimum.hpp"
#include "matchforge/policy.hpp"
#include "matchforge/rational.hpp"
#include "matchforge/rng.hpp"
#include "matchforge/sweep.hpp"
#include "matchforge/trace.hpp"
#include "matchforge/worst_case.hpp"

namespace mf = matchforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct Globals {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::size_t budget = mf::kDefaultSearchBudget;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") std::cout << text;
    else mf::detail::write_file(path, text);
}

std::string ratio_line(std::size_t m, std::size_t opt) {
    mf::Rational r = mf::matching_ratio(m, opt);
    return r.frac() + " (" + mf::ratio_decimal(r) + ")";
}

std::vector<mf::NodeId> shuffle_perm(const mf::Graph& g, std::uint64_t seed) {
    auto perm = mf::identity_permutation(g.n());
    mf::Rng rng(mf::derive_seed(seed, 1));
    rng.shuffle(perm);
    return perm;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    std::string kind = "random";
    mf::NodeId n = 10;
    int delta = 3;
    double p = 0.5;
    std::string out;
};

int cmd_gen(const GenArgs& a, const Globals& g) {
    mf::Graph graph;
    if (a.kind == "random") graph = mf::gen_random_bounded(a.n, a.delta, a.p, g.seed);
    else if (a.kind == "regular") graph = mf::gen_regular(a.n, a.delta, g.seed);
    else if (a.kind == "path") graph = mf::make_path(a.n);
    else if (a.kind == "cycle") graph = mf::make_cycle(a.n);
    else if (a.kind == "complete") graph = mf::make_complete(a.n);
    else if (a.kind == "star") graph = mf::make_star(a.n);
    else if (a.kind == "petersen") graph = mf::make_petersen();
    else throw mf::InputError("unknown graph kind '" + a.kind + "'");
    emit(mf::format_graph(graph), a.out);
    return kExitOk;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string algo = "mingreedy";
    std::string policy = "first";
    std::string in;
    std::string trace;
    std::string matching;
};

int cmd_run(const RunArgs& a, const Globals& gl) {
    mf::Graph g = mf::load_graph(a.in);
    mf::Algo algo = mf::parse_algo(a.algo);
    mf::Policy pol = mf::Policy::parse(a.policy);
    if (pol.kind == mf::Policy::Kind::exhaustive)
        throw mf::InputError("the exhaustive policy is served by the worstcase command");
    std::vector<mf::NodeId> perm;
    if (algo == mf::Algo::shuffle) perm = shuffle_perm(g, gl.seed);
    mf::RunTrace t = mf::run_algorithm(g, algo, pol, algo == mf::Algo::shuffle ? &perm : nullptr);
    if (!a.trace.empty()) mf::save_trace(t, a.trace);
    if (!a.matching.empty()) mf::save_matching(t.result, a.matching);
    std::cout << "algo " << mf::algo_name(algo) << "\nsize " << t.result.size() << "\nsteps " << t.steps.size()
              << '\n';
    return kExitOk;
}

// ---- opt -------------------------------------------------------------------

struct OptArgs {
    std::string in;
    std::string out;
    bool brute = false;
};

int cmd_opt(const OptArgs& a, const Globals&) {
    mf::Graph g = mf::load_graph(a.in);
    mf::Matching m = mf::maximum_matching(g);
    if (!a.out.empty()) mf::save_matching(m, a.out);
    std::cout << "size " << m.size() << '\n';
    if (a.brute) {
        std::size_t b = mf::max_matching_bruteforce(g);
        std::cout << "bruteforce " << b << '\n';
        if (b != m.size()) return kExitFail;
    }
    return kExitOk;
}

// ---- decompose -------------------------------------------------------------

struct DecomposeArgs {
    std::string in;
    std::string matching;
    std::string trace;
    std::string opt;
    std::string out;
};

int cmd_decompose(const DecomposeArgs& a, const Globals&) {
    mf::Graph g = mf::load_graph(a.in);
    mf::Matching m;
    if (!a.trace.empty() == !a.matching.empty()) throw mf::InputError("give exactly one of --matching or --trace");
    if (!a.trace.empty()) {
        mf::RunTrace t = mf::load_trace(a.trace);
        mf::replay_trace(g, t);
        m = t.result;
    } else {
        m = mf::load_matching(a.matching, &g);
    }
    mf::Decomposition d = a.opt.empty() ? mf::decompose_run(g, m) : mf::decompose(g, m, mf::load_matching(a.opt, &g));
    emit(mf::format_decomposition(d), a.out);
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string in;
    std::string trace;
    int delta = 0;
    bool csv = false;
    bool ledger = false;
};

int cmd_verify(const VerifyArgs& a, const Globals&) {
    mf::Graph g = mf::load_graph(a.in);
    mf::RunTrace t = mf::load_trace(a.trace);
    mf::replay_trace(g, t);
    const int delta = a.delta > 0 ? a.delta : std::max(3, g.delta());
    if (g.delta() > delta) throw mf::InputError("graph degree exceeds --delta");
    mf::Verification v = mf::verify_run(g, t, delta);
    if (a.ledger) std::cout << mf::format_ledger(v.ledger);
    std::cout << (a.csv ? mf::format_report_csv(v.report) : mf::format_report(v.report));
    return v.report.all_pass() ? kExitOk : kExitFail;
}

// ---- worstcase -------------------------------------------------------------

struct WorstArgs {
    std::string in;
    std::string algo = "1-2-mingreedy";
    std::string trace;
};

int cmd_worstcase(const WorstArgs& a, const Globals& gl) {
    mf::Graph g = mf::load_graph(a.in);
    mf::Algo algo = mf::parse_algo(a.algo);
    std::vector<mf::NodeId> perm;
    if (algo == mf::Algo::shuffle) perm = shuffle_perm(g, gl.seed);
    mf::WorstCaseResult r = mf::worst_case_size(g, algo, gl.budget, algo == mf::Algo::shuffle ? &perm : nullptr);
    if (!a.trace.empty()) mf::save_trace(r.witness, a.trace);
    std::size_t opt = mf::maximum_matching(g).size();
    std::cout << "algo " << mf::algo_name(algo) << '\n';
    std::cout << "states " << r.states << '\n';
    std::cout << "policy " << r.witness_policy.str() << '\n';
    if (!r.complete) {
        std::cout << "bound <= " << r.size << "\n";
        std::cerr << "error: state budget of " << gl.budget << " exhausted; best run found has size " << r.size
                  << '\n';
        return kExitBudget;
    }
    std::cout << "worst " << r.size << "\nopt " << opt << "\nratio " << ratio_line(r.size, opt) << '\n';
    return kExitOk;
}

// ---- game ------------------------------------------------------------------

struct GameArgs {
    std::string algo = "mingreedy";
    std::string adversary = "B";
    int delta = 3;
    int t = 20;
    std::string emit;
    bool transcript = false;
};

int cmd_game(const GameArgs& a, const Globals& gl) {
    if (a.delta < 3) throw mf::InputError("--delta must be at least 3");
    std::vector<mf::NodeId> perm;
    mf::NodeId n_hint = 0;
    if (a.algo == "shuffle" || a.algo == "vertex_iterative") {
        if (a.adversary == "Bprime") {
            n_hint = static_cast<mf::NodeId>(a.t * a.delta);
            perm = mf::identity_permutation(n_hint);
            mf::Rng rng(mf::derive_seed(gl.seed, 1));
            rng.shuffle(perm);
        } else {
            n_hint = 8 * a.delta;
        }
    }
    auto enc = mf::encode_priority(a.algo, a.delta, perm, n_hint);
    mf::HardInstanceAdversary server = [&] {
        if (a.adversary == "B") return mf::HardInstanceAdversary::single_center(a.delta);
        if (a.adversary == "Bprime") return mf::HardInstanceAdversary::multi_center(a.delta, a.t);
        throw mf::InputError("unknown adversary '" + a.adversary + "' (B|Bprime)");
    }();
    mf::GameResult r = mf::play_game(*enc, server, a.delta);
    std::size_t opt = mf::maximum_matching(r.graph).size();
    if (a.transcript) std::cout << r.transcript;
    std::cout << "nodes " << r.graph.n() << "\nedges " << r.graph.m() << "\nalgo_size " << r.matching.size()
              << "\nopt " << opt << "\nratio " << ratio_line(r.matching.size(), opt) << "\ntarget "
              << mf::target_ratio(a.delta).frac() << '\n';
    if (!a.emit.empty()) {
        auto e = mf::emit_game(r, a.emit);
        for (const auto& f : e.files) std::cout << "wrote " << f << '\n';
    }
    return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string delta = "3";
    std::string source = "random";
    std::size_t count = 10;
    std::string algos = "mingreedy";
    std::string policy = "first";
    mf::NodeId n = 10;
    double p = 0.5;
    int t = 20;
    std::string out;
};

std::pair<int, int> parse_delta_range(const std::string& s) {
    try {
        auto dots = s.find("..");
        if (dots == std::string::npos) {
            int d = std::stoi(s);
            return {d, d};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw mf::InputError("bad delta range '" + s + "' (use D or LO..HI)");
    }
}

int cmd_sweep(const SweepArgs& a, const Globals& gl) {
    mf::SweepSpec s;
    std::tie(s.delta_lo, s.delta_hi) = parse_delta_range(a.delta);
    s.source = mf::parse_source(a.source);
    s.count = a.count;
    s.seed = gl.seed;
    s.algos.clear();
    std::stringstream ss(a.algos);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) s.algos.push_back(item);
    s.policy = mf::parse_sweep_policy(a.policy);
    s.n = a.n;
    s.p = a.p;
    s.t = a.t;
    s.budget = gl.budget;
    s.jobs = gl.jobs;
    emit(mf::format_sweep_csv(mf::run_sweep(s)), a.out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matchforge: greedy matching heuristics, exact optima, charging verification and hard instances"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals gl;
    app.add_option("--seed", gl.seed, "base seed for every random choice");
    app.add_option("--jobs", gl.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--budget", gl.budget, "state budget for worst-case searches")->check(CLI::PositiveNumber);

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a graph");
    gen->add_option("--kind", ga.kind, "random|regular|path|cycle|complete|star|petersen");
    gen->add_option("--n", ga.n, "node count (leaf count for star)");
    gen->add_option("--delta", ga.delta, "degree bound / regular degree");
    gen->add_option("--p", ga.p, "edge retention probability for random graphs");
    gen->add_option("--out", ga.out, "output file (stdout if omitted)");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "run one heuristic and record its trace");
    run->add_option("--algo", ra.algo, "mingreedy|1-2-mingreedy|karpsipser|greedy|mrg|shuffle");
    run->add_option("--policy", ra.policy, "first|random:<seed>|script:<step>:<idx>,...");
    run->add_option("--in", ra.in, "graph file")->required();
    run->add_option("--trace", ra.trace, "trace output file");
    run->add_option("--matching", ra.matching, "matching output file");

    OptArgs oa;
    auto* opt = app.add_subcommand("opt", "maximum matching");
    opt->add_option("--in", oa.in, "graph file")->required();
    opt->add_option("--out", oa.out, "matching output file");
    opt->add_flag("--brute", oa.brute, "cross-check with the brute-force oracle (m <= 24)");

    DecomposeArgs da;
    auto* dec = app.add_subcommand("decompose", "components of M and a canonical maximum matching");
    dec->add_option("--in", da.in, "graph file")->required();
    dec->add_option("--matching", da.matching, "matching file");
    dec->add_option("--trace", da.trace, "trace file (its matching is used)");
    dec->add_option("--opt", da.opt, "maximum matching to canonicalize (computed if omitted)");
    dec->add_option("--out", da.out, "output file (stdout if omitted)");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "charging-scheme check of a traced run");
    ver->add_option("--in", va.in, "graph file")->required();
    ver->add_option("--trace", va.trace, "trace file")->required();
    ver->add_option("--delta", va.delta, "degree bound (default: max(3, graph degree))");
    ver->add_flag("--csv", va.csv, "CSV report");
    ver->add_flag("--ledger", va.ledger, "print the coin ledger first");

    WorstArgs wa;
    auto* wc = app.add_subcommand("worstcase", "smallest matching over all nondeterministic choices");
    wc->add_option("--in", wa.in, "graph file")->required();
    wc->add_option("--algo", wa.algo, "heuristic");
    wc->add_option("--trace", wa.trace, "witness trace output file");

    GameArgs gm;
    auto* game = app.add_subcommand("game", "play a priority encoding against an adversary");
    game->add_option("--algo", gm.algo, "mingreedy|karpsipser|greedy|mrg|shuffle|vertex_iterative");
    game->add_option("--adversary", gm.adversary, "B|Bprime");
    game->add_option("--delta", gm.delta, "degree bound");
    game->add_option("--t", gm.t, "Bprime node budget factor (t * delta nodes)");
    game->add_option("--emit", gm.emit, "file prefix for graph, script, transcript and trace");
    game->add_flag("--transcript", gm.transcript, "print the transcript");

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "ratio sweep with CSV output");
    sw->add_option("--delta", sa.delta, "degree or range LO..HI");
    sw->add_option("--source", sa.source, "random|regular|hard|bprime");
    sw->add_option("--count", sa.count, "instances per degree");
    sw->add_option("--algos", sa.algos, "comma-separated algorithm list");
    sw->add_option("--policy", sa.policy, "first|random|worst");
    sw->add_option("--n", sa.n, "instance size for random/regular");
    sw->add_option("--p", sa.p, "edge retention probability for random");
    sw->add_option("--t", sa.t, "bprime node budget factor");
    sw->add_option("--out", sa.out, "CSV file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*gen) return cmd_gen(ga, gl);
        if (*run) return cmd_run(ra, gl);
        if (*opt) return cmd_opt(oa, gl);
        if (*dec) return cmd_decompose(da, gl);
        if (*ver) return cmd_verify(va, gl);
        if (*wc) return cmd_worstcase(wa, gl);
        if (*game) return cmd_game(gm, gl);
        if (*sw) return cmd_sweep(sa, gl);
    } catch (const mf::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const mf::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInput;
}
