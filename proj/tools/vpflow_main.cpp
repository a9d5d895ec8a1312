#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "vpflow/decode.hpp"
#include "vpflow/errors.hpp"
#include "vpflow/harness.hpp"

namespace {

using namespace vpflow;

struct CommonProblemFlags {
    bool bpp = false, csp = false, vbp = false, color = false, timetable = false;
    std::string mode = "degree";
    std::int64_t card = 0;
    bool binary = false;
    std::string conflicts;
    std::string name;

    void attach(CLI::App* cmd) {
        cmd->add_flag("--bpp", bpp, "bin packing input (m / W / w b lines)");
        cmd->add_flag("--csp", csp, "cutting stock input (same format as --bpp)");
        cmd->add_flag("--vbp", vbp, "vector packing input (p / W... / m / w... b lines)");
        cmd->add_flag("--color", color, "graph coloring input (DIMACS .col)");
        cmd->add_flag("--timetable", timetable, "timetabling input (t c v / class teacher venue demand)");
        cmd->add_option("--mode", mode, "coloring reduction: adjacency|degree|clique")
            ->check(CLI::IsMember({"adjacency", "degree", "clique"}));
        cmd->add_option("--card", card, "cardinality limit per bin");
        cmd->add_flag("--binary", binary, "binary patterns (items at most once per bin)");
        cmd->add_option("--conflicts", conflicts, "conflict graph over the items (DIMACS .col)");
        cmd->add_option("--name", name, "instance name used in reports");
    }

    ProblemSpec to_spec(const std::string& path) const {
        ProblemSpec spec;
        spec.name = name;
        spec.path = path;
        const int kinds = bpp + csp + vbp + color + timetable;
        if (kinds > 1) throw Error("choose exactly one of --bpp/--csp/--vbp/--color/--timetable");
        if (csp) spec.kind = ProblemSpec::Kind::csp;
        else if (vbp) spec.kind = ProblemSpec::Kind::vbp;
        else if (color) spec.kind = ProblemSpec::Kind::coloring;
        else if (timetable) spec.kind = ProblemSpec::Kind::timetable;
        else spec.kind = ProblemSpec::Kind::bpp;
        if (mode == "adjacency") spec.mode = ColoringMode::adjacency;
        else if (mode == "clique") spec.mode = ColoringMode::clique;
        else spec.mode = ColoringMode::degree;
        if (card > 0) spec.cardinality = card;
        spec.binary = binary;
        if (!conflicts.empty()) spec.conflicts = conflicts;
        return spec;
    }
};

struct SolverFlags {
    std::string solver_cmd;
    double time_limit = 3600.0;
    int threads = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--solver-cmd", solver_cmd,
                        "solver command template with {model} and {solution} placeholders");
        cmd->add_option("--time-limit", time_limit, "solver time limit in seconds");
        cmd->add_option("--threads", threads, "solver thread count");
    }

    SolverConfig to_config() const {
        SolverConfig cfg = SolverConfig::defaults();
        if (!solver_cmd.empty()) cfg.command = solver_cmd;
        cfg.time_limit_sec = time_limit;
        cfg.threads = threads;
        return cfg;
    }
};

int cmd_solve(const std::string& path, const CommonProblemFlags& prob, const SolverFlags& solver,
              const std::string& format, bool oracle, bool reference, bool accept_feasible,
              const std::string& out_dir, const std::string& csv_path) {
    PipelineOptions opts;
    opts.solver = solver.to_config();
    opts.format = format == "mps" ? ModelFormat::mps : ModelFormat::lp;
    opts.run_oracle = oracle;
    opts.reference_pipeline = reference;
    opts.accept_feasible = accept_feasible;
    if (!out_dir.empty()) opts.out_dir = out_dir;

    const PipelineResult res = run_pipeline(prob.to_spec(path), opts);
    const BenchRecord& r = res.record;
    std::cout << "instance   " << r.instance << "\n"
              << "graph      " << r.v << " nodes, " << r.a << " arcs\n";
    if (r.z_lp) std::cout << "z_lp       " << *r.z_lp << "\n";
    if (r.z_ip)
        std::cout << "z_ip       " << *r.z_ip << (r.gap_class.empty() ? "" : " (" + r.gap_class + ")")
                  << "\n";
    std::cout << "status     " << r.status << "\n"
              << "validated  " << (res.validated ? "yes" : "no") << "\n"
              << "model      " << res.model_path.string() << "\n";
    if (!res.solution_text_path.empty())
        std::cout << "solution   " << res.solution_text_path.string() << "\n";
    for (const auto& v : res.violations) std::cerr << "violation: " << v << "\n";
    if (!csv_path.empty()) {
        const bool fresh = !std::filesystem::exists(csv_path);
        std::ofstream csv(csv_path, std::ios::app);
        if (fresh) csv << bench_csv_header() << "\n";
        csv << bench_csv_row(r) << "\n";
    }
    return res.exit_code;
}

int cmd_graph_stats(const std::string& path, const CommonProblemFlags& prob, bool reference,
                    const std::string& dump_path) {
    auto [raw_inst, map] = load_problem(prob.to_spec(path));
    const CanonicalOrder order = canonical_order(raw_inst);
    const VbpInstance inst = apply_order(raw_inst, order);

    const ArcFlowGraph direct = build_step3(inst);
    const ArcFlowGraph final_graph = compress_final(direct);
    std::cout << "items " << inst.item_count() << "  dims " << inst.dim_count << "  demand "
              << inst.total_demand() << "\n";
    std::cout << "direct     " << direct.node_count() << " nodes, " << direct.arc_count()
              << " arcs\n";
    std::cout << "final      " << final_graph.node_count() << " nodes, " << final_graph.arc_count()
              << " arcs\n";
    if (reference) {
        const ReferencePipeline pipe = build_reference_pipeline(inst);
        const auto stats = pipe.stats();
        const char* names[4] = {"step1", "step2", "step3", "step4"};
        for (int s = 0; s < 4; ++s)
            std::cout << names[s] << "      " << stats[s].nodes << " nodes, " << stats[s].arcs
                      << " arcs\n";
        std::cout << "removed    "
                  << 100.0 * (1.0 - double(stats[3].nodes) / double(stats[0].nodes)) << "% nodes, "
                  << 100.0 * (1.0 - double(stats[3].arcs) / double(stats[0].arcs)) << "% arcs\n";
    }
    if (!dump_path.empty()) {
        std::ofstream out(dump_path);
        write_graph(final_graph, out);
        std::cout << "dump       " << dump_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arc-flow toolkit for vector packing and cutting stock problems"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve one instance end to end");
    std::string solve_path, solve_format = "lp", solve_out, solve_csv;
    bool solve_oracle = false, solve_reference = false, solve_accept_feasible = false;
    CommonProblemFlags solve_prob;
    SolverFlags solve_solver;
    solve->add_option("instance", solve_path, "instance file")->required();
    solve_prob.attach(solve);
    solve_solver.attach(solve);
    solve->add_option("--format", solve_format, "model export format: lp|mps")
        ->check(CLI::IsMember({"lp", "mps"}));
    solve->add_flag("--oracle", solve_oracle, "cross-check the optimum with the exact oracle");
    solve->add_flag("--reference-pipeline", solve_reference,
                    "also build the four-stage pipeline and report compression ratios");
    solve->add_flag("--accept-feasible", solve_accept_feasible,
                    "exit 0 for feasible-but-unproven answers under a time limit");
    solve->add_option("--out", solve_out, "directory for model/solution artifacts");
    solve->add_option("--csv", solve_csv, "append the benchmark row to this CSV file");

    // graph-stats
    auto* stats = app.add_subcommand("graph-stats", "build graphs and print size statistics");
    std::string stats_path, stats_dump;
    bool stats_reference = false;
    CommonProblemFlags stats_prob;
    stats->add_option("instance", stats_path, "instance file")->required();
    stats_prob.attach(stats);
    stats->add_flag("--reference-pipeline", stats_reference, "include per-stage pipeline counts");
    stats->add_option("--dump", stats_dump, "write the final graph dump to this file");

    // bench
    auto* bench = app.add_subcommand("bench", "run a manifest of instances and emit CSV");
    std::string bench_manifest, bench_csv;
    int bench_jobs = 1;
    SolverFlags bench_solver;
    bench->add_option("manifest", bench_manifest, "manifest file")->required();
    bench_solver.attach(bench);
    bench->add_option("--jobs", bench_jobs, "parallel instance workers");
    bench->add_option("--csv", bench_csv, "CSV output path (default stdout)");

    // generators
    auto* gdiv = app.add_subcommand("gen-divisible", "generate a divisible-case instance");
    std::uint64_t gdiv_seed = 1;
    int gdiv_items = 5;
    std::int64_t gdiv_cap = 12, gdiv_maxd = 10;
    std::string gdiv_out;
    gdiv->add_option("--seed", gdiv_seed, "random seed");
    gdiv->add_option("--items", gdiv_items, "item type count");
    gdiv->add_option("--capacity", gdiv_cap, "bin capacity");
    gdiv->add_option("--max-demand", gdiv_maxd, "demand upper bound");
    gdiv->add_option("--out", gdiv_out, "output file (default stdout)");

    auto* gq = app.add_subcommand("gen-queen", "generate a queens graph in DIMACS format");
    int gq_q = 5;
    std::string gq_out;
    gq->add_option("--q", gq_q, "board size");
    gq->add_option("--out", gq_out, "output file (default stdout)");

    auto* gt = app.add_subcommand("gen-timetable", "generate a hard timetabling instance");
    int gt_size = 4, gt_periods = 30;
    std::uint64_t gt_seed = 1;
    std::string gt_out;
    gt->add_option("--size", gt_size, "entity count (classes = teachers = venues)");
    gt->add_option("--periods", gt_periods, "periods in the generating timetable");
    gt->add_option("--seed", gt_seed, "random seed");
    gt->add_option("--out", gt_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve)
            return cmd_solve(solve_path, solve_prob, solve_solver, solve_format, solve_oracle,
                             solve_reference, solve_accept_feasible, solve_out, solve_csv);
        if (*stats) return cmd_graph_stats(stats_path, stats_prob, stats_reference, stats_dump);
        if (*bench) {
            PipelineOptions opts;
            opts.solver = bench_solver.to_config();
            const auto specs = vpflow::parse_manifest(bench_manifest);
            if (bench_csv.empty()) {
                vpflow::run_bench(specs, opts, bench_jobs, std::cout, std::cerr);
            } else {
                std::ofstream csv(bench_csv);
                vpflow::run_bench(specs, opts, bench_jobs, csv, std::cerr);
            }
            return 0;
        }
        auto with_output = [&](const std::string& out_path, auto fn) {
            if (out_path.empty()) {
                fn(std::cout);
            } else {
                std::ofstream out(out_path);
                if (!out) throw vpflow::Error("cannot open output file " + out_path);
                fn(out);
            }
            return 0;
        };
        if (*gdiv)
            return with_output(gdiv_out, [&](std::ostream& out) {
                vpflow::write_instance(vpflow::gen_divisible(gdiv_seed, gdiv_items, gdiv_cap, gdiv_maxd),
                                       out, vpflow::InstanceFormat::bpp);
            });
        if (*gq)
            return with_output(gq_out, [&](std::ostream& out) { vpflow::gen_queen(gq_q, out); });
        if (*gt)
            return with_output(gt_out, [&](std::ostream& out) {
                vpflow::gen_timetable_hard(gt_size, gt_periods, gt_seed, out);
            });
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
