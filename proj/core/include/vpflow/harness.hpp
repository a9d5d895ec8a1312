#ifndef VPFLOW_HARNESS_HPP
#define VPFLOW_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vpflow/decode.hpp"
#include "vpflow/flowgraph.hpp"
#include "vpflow/instance.hpp"
#include "vpflow/model.hpp"
#include "vpflow/reduce.hpp"
#include "vpflow/solve.hpp"

namespace vpflow {

// One problem to solve: an input file, how to read it, and which extra
// reductions to stack on top.
struct ProblemSpec {
    enum class Kind { bpp, csp, vbp, coloring, timetable };
    std::string name;
    Kind kind = Kind::bpp;
    std::filesystem::path path;
    ColoringMode mode = ColoringMode::degree;
    std::optional<std::int64_t> cardinality;
    bool binary = false;
    std::optional<std::filesystem::path> conflicts;
};

struct PipelineOptions {
    SolverConfig solver;
    BuildLimits limits;
    ModelFormat format = ModelFormat::lp;
    bool run_oracle = false;
    bool reference_pipeline = false;  // compute stage stats and compression ratios
    bool accept_feasible = false;
    bool solve_ip = true;
    std::filesystem::path out_dir;  // model/solution artifacts; empty: scratch
};

// One CSV row of the benchmark table. Timing fields are wall-clock
// seconds; the remaining fields are reproducible run to run.
struct BenchRecord {
    std::string instance;
    std::string kind;
    int m = 0;
    std::int64_t n = 0;
    int p = 0;
    int v = 0;
    int a = 0;
    std::optional<double> pct_v, pct_a;  // removed by compression vs the uncompressed graph
    std::optional<double> z_lp;
    std::optional<std::int64_t> z_ip;
    std::string gap_class;
    double t_pp = 0, t_lp = 0, t_ip = 0, t_tot = 0;
    std::optional<std::int64_t> n_bb;
    std::string status = "error";
};

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& r);

struct PipelineResult {
    BenchRecord record;
    bool validated = false;
    std::vector<std::string> violations;
    PackingSolution solution;  // original item indices
    VbpInstance instance;      // reduced instance, original item order
    ReductionMap map;
    std::optional<std::array<StageStats, 4>> stage_stats;
    std::filesystem::path model_path, solution_path, annotation_path, solution_text_path;
    int exit_code = 1;
};

// parse -> reduce -> order -> build + compress -> model -> solve ->
// decode -> validate, writing the model, solver answer and solution text
// under out_dir.
PipelineResult run_pipeline(const ProblemSpec& spec, const PipelineOptions& opts);

// Loads the instance and reduction for a problem without solving.
std::pair<VbpInstance, ReductionMap> load_problem(const ProblemSpec& spec);

// Manifest line: <name> <kind> <path> [mode=...] [card=N] [binary]
// [conflicts=PATH]; kind in {bpp, csp, vbp, color, timetable}.
std::vector<ProblemSpec> parse_manifest(const std::filesystem::path& path);

// Runs every manifest entry (failures become status rows), sorts rows by
// instance name and writes the CSV. `jobs` bounds the worker count.
void run_bench(const std::vector<ProblemSpec>& specs, const PipelineOptions& opts, int jobs,
               std::ostream& csv, std::ostream& log);

// Deterministic generator for the divisible family: item sizes divide the
// capacity. Demands are uniform in 1..max_demand.
VbpInstance gen_divisible(std::uint64_t seed, int m, std::int64_t capacity,
                          std::int64_t max_demand = 10);

// Queens graph in DIMACS .col text: q*q vertices, edges between squares
// sharing a row, column or diagonal, each edge listed in both directions.
void gen_queen(int q, std::ostream& out);

// Hard timetable instance: `periods` random class-teacher-venue matchings
// over `size` entities, so every entity is booked in every period and the
// optimum is exactly `periods`.
void gen_timetable_hard(int size, int periods, std::uint64_t seed, std::ostream& out);

}  // namespace vpflow

#endif
