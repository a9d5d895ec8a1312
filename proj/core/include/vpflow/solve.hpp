#ifndef VPFLOW_SOLVE_HPP
#define VPFLOW_SOLVE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpflow/flowgraph.hpp"
#include "vpflow/instance.hpp"
#include "vpflow/model.hpp"

namespace vpflow {

// External solver invocation: a command template with {model}, {solution},
// {time_limit}, {threads}, {gap_abs} and {gap_rel} placeholders. The
// adapter appends "--relax" for linear relaxations. Batch runs substitute
// {model} with "@<listfile>" and {solution} with a directory receiving one
// <model-stem>.sol per model.
struct SolverConfig {
    std::string command;
    double time_limit_sec = 3600.0;
    double mip_gap_abs = 1.0 - 1e-5;
    double mip_gap_rel = 0.0;
    int threads = 1;
    std::filesystem::path work_dir;  // empty: a fresh directory under the system temp

    // Resolves the bundled driver next to the executable, or via the
    // VPFLOW_DRIVER / VPFLOW_SOLVER_CMD environment variables.
    static SolverConfig defaults();
};

enum class SolveStatus { optimal, feasible, infeasible, timeout, error };
const char* status_name(SolveStatus s);

// Parsed solver output before any model-specific interpretation.
struct RawSolution {
    SolveStatus status = SolveStatus::error;
    double objective = 0.0;
    double best_bound = 0.0;
    bool has_values = false;
    std::map<std::string, double> values;
    std::map<std::string, double> duals;
    std::optional<std::int64_t> bb_nodes;
    double solve_seconds = 0.0;
};

RawSolution run_solver(const std::filesystem::path& model, const SolverConfig& cfg,
                       bool relax = false);
// One subprocess for the whole batch; results in input order.
std::vector<RawSolution> run_solver_batch(const std::vector<std::filesystem::path>& models,
                                          const SolverConfig& cfg, bool relax = false);

// Integral arc flows, re-verified exactly against conservation, demand
// rows and arc bounds after rounding.
struct FlowSolution {
    SolveStatus status = SolveStatus::error;
    std::int64_t objective = 0;
    std::vector<std::int64_t> arc_flow;  // indexed like g.arcs
    double best_bound = 0.0;
    std::optional<std::int64_t> bb_nodes;
    double solve_seconds = 0.0;
};

FlowSolution extract_flow(const RawSolution& raw, const MilpModel& model, const ArcFlowGraph& g,
                          const VbpInstance& inst);

// Fractional arc flows plus demand-row duals of the relaxation.
struct LpRelaxation {
    SolveStatus status = SolveStatus::error;
    double objective = 0.0;
    std::vector<double> arc_flow;
    std::vector<double> demand_duals;  // by item rank
    double solve_seconds = 0.0;
};

LpRelaxation extract_lp(const RawSolution& raw, const MilpModel& model, const ArcFlowGraph& g,
                        const VbpInstance& inst);

// Writes the model under work_dir/<stem>.lp and runs the solver on it.
FlowSolution solve_arcflow(const MilpModel& model, const ArcFlowGraph& g, const VbpInstance& inst,
                           const SolverConfig& cfg, const std::string& stem = "model");
LpRelaxation solve_arcflow_lp(const MilpModel& model, const ArcFlowGraph& g,
                              const VbpInstance& inst, const SolverConfig& cfg,
                              const std::string& stem = "model");

// Column generation for the pattern master over the arc-flow graph:
// restricted master seeded with singleton patterns, priced by the
// longest-path sweep, stopping when no column prices below -1e-9.
struct ColgenResult {
    double objective = 0.0;
    int iterations = 0;
    std::vector<Pattern> columns;
};
ColgenResult column_generation_lp(const VbpInstance& inst, const ArcFlowGraph& g,
                                  int max_iterations = 100000);

struct OracleLimits {
    std::uint64_t max_patterns = 2'000'000;
    std::uint64_t max_states = 20'000'000;
};

struct OraclePacking {
    std::int64_t bins = 0;
    std::vector<std::pair<Pattern, std::int64_t>> packing;
};

// Exhaustive optimum by pattern enumeration and memoized depth-first
// cover with a lower-bound cut. Independent of the flow graph.
OraclePacking oracle_exact(const VbpInstance& inst, const OracleLimits& limits = {});

// Feasible packing from a fractional flow: path decomposition, floors
// first, then greedy round-up until demands are met, then removal of
// redundant bins. Count is at most ceil(z_lp) + m on sane inputs.
struct RoundedSolution {
    std::vector<std::pair<Pattern, std::int64_t>> patterns;
    std::int64_t bins = 0;
};
RoundedSolution round_lp_heuristic(const std::vector<double>& arc_flow, const ArcFlowGraph& g,
                                   const VbpInstance& inst);

// Creates (once) and returns a unique scratch directory for this process.
std::filesystem::path make_scratch_dir(const std::string& tag);

}  // namespace vpflow

#endif
