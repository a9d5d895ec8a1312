#include "vpflow/solve.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "vpflow/errors.hpp"
#include "vpflow/simplex.hpp"

namespace vpflow {

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::timeout: return "timeout";
        case SolveStatus::error: return "error";
    }
    return "?";
}

namespace {

std::string executable_dir() {
    char buf[4096];
    const ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n <= 0) return {};
    buf[n] = '\0';
    return std::filesystem::path(buf).parent_path().string();
}

std::string format_double(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

SolveStatus parse_status(const std::string& s) {
    if (s == "optimal") return SolveStatus::optimal;
    if (s == "feasible") return SolveStatus::feasible;
    if (s == "infeasible") return SolveStatus::infeasible;
    if (s == "timeout") return SolveStatus::timeout;
    return SolveStatus::error;
}

RawSolution parse_solution_file(const std::filesystem::path& path, const std::string& log) {
    std::ifstream in(path);
    if (!in)
        throw SolverError("solver produced no solution file at " + path.string() +
                          "\nsolver output:\n" + log);
    RawSolution raw;
    bool have_status = false;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;
        if (key == "status") {
            std::string s;
            ss >> s;
            raw.status = parse_status(s);
            have_status = true;
        } else if (key == "objective") {
            ss >> raw.objective;
        } else if (key == "bound") {
            ss >> raw.best_bound;
        } else if (key == "nodes") {
            std::int64_t n;
            if (ss >> n) raw.bb_nodes = n;
        } else if (key == "time") {
            ss >> raw.solve_seconds;
        } else if (key == "var") {
            std::string name;
            double value;
            if (ss >> name >> value) {
                raw.values[name] = value;
                raw.has_values = true;
            }
        } else if (key == "dual") {
            std::string name;
            double value;
            if (ss >> name >> value) raw.duals[name] = value;
        }
    }
    if (!have_status)
        throw SolverError("unparsable solver output in " + path.string() + "\nsolver output:\n" +
                          log);
    return raw;
}

std::string run_command(const std::string& cmd) {
    const std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw SolverError("failed to launch solver command: " + cmd);
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
    const int rc = pclose(pipe);
    if (rc != 0)
        throw SolverError("solver command failed (exit " + std::to_string(rc) + "): " + cmd +
                          "\nsolver output:\n" + output);
    return output;
}

std::string substituted_command(const SolverConfig& cfg, const std::string& model,
                                const std::string& solution, bool relax) {
    std::string cmd = cfg.command;
    replace_all(cmd, "{model}", model);
    replace_all(cmd, "{solution}", solution);
    replace_all(cmd, "{time_limit}", format_double(cfg.time_limit_sec));
    replace_all(cmd, "{threads}", std::to_string(cfg.threads));
    replace_all(cmd, "{gap_abs}", format_double(cfg.mip_gap_abs));
    replace_all(cmd, "{gap_rel}", format_double(cfg.mip_gap_rel));
    if (relax) cmd += " --relax";
    return cmd;
}

}  // namespace

std::filesystem::path make_scratch_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto base = std::filesystem::temp_directory_path() /
                      ("vpflow-" + std::to_string(::getpid()) + "-" + tag + "-" +
                       std::to_string(counter++));
    std::filesystem::create_directories(base);
    return base;
}

SolverConfig SolverConfig::defaults() {
    SolverConfig cfg;
    if (const char* env = std::getenv("VPFLOW_SOLVER_CMD"); env && *env) {
        cfg.command = env;
        return cfg;
    }
    std::string driver;
    if (const char* env = std::getenv("VPFLOW_DRIVER"); env && *env) driver = env;
    if (driver.empty()) {
        const std::string exe_dir = executable_dir();
        if (!exe_dir.empty() &&
            std::filesystem::exists(std::filesystem::path(exe_dir) / "milp_driver.py"))
            driver = (std::filesystem::path(exe_dir) / "milp_driver.py").string();
    }
#ifdef VPFLOW_DEFAULT_DRIVER
    if (driver.empty() && std::filesystem::exists(VPFLOW_DEFAULT_DRIVER))
        driver = VPFLOW_DEFAULT_DRIVER;
#endif
    if (driver.empty())
        throw SolverError(
            "no solver configured: set VPFLOW_SOLVER_CMD or VPFLOW_DRIVER, or keep "
            "milp_driver.py next to the executable");
    cfg.command = "python3 " + driver +
                  " --model {model} --solution {solution} --time-limit {time_limit}"
                  " --threads {threads} --gap-abs {gap_abs} --gap-rel {gap_rel}";
    return cfg;
}

RawSolution run_solver(const std::filesystem::path& model, const SolverConfig& cfg, bool relax) {
    const auto dir = cfg.work_dir.empty() ? make_scratch_dir("solve") : cfg.work_dir;
    std::filesystem::create_directories(dir);
    const auto sol = dir / (model.stem().string() + ".sol");
    std::error_code ec;
    std::filesystem::remove(sol, ec);
    const std::string log =
        run_command(substituted_command(cfg, model.string(), sol.string(), relax));
    return parse_solution_file(sol, log);
}

std::vector<RawSolution> run_solver_batch(const std::vector<std::filesystem::path>& models,
                                          const SolverConfig& cfg, bool relax) {
    if (models.empty()) return {};
    const auto dir = cfg.work_dir.empty() ? make_scratch_dir("batch") : cfg.work_dir;
    std::filesystem::create_directories(dir);
    const auto list = dir / "models.list";
    {
        std::ofstream out(list);
        for (const auto& m : models) out << m.string() << "\n";
    }
    const std::string log =
        run_command(substituted_command(cfg, "@" + list.string(), dir.string(), relax));
    std::vector<RawSolution> out;
    out.reserve(models.size());
    for (const auto& m : models)
        out.push_back(parse_solution_file(dir / (m.stem().string() + ".sol"), log));
    return out;
}

namespace {

// variable index per arc, from the model annotations
std::vector<int> arc_variables(const MilpModel& model, const ArcFlowGraph& g) {
    std::vector<int> var_of(g.arc_count(), -1);
    for (std::size_t j = 0; j < model.arc_refs.size(); ++j)
        if (model.arc_refs[j].arc >= 0) var_of[model.arc_refs[j].arc] = static_cast<int>(j);
    for (int a = 0; a < g.arc_count(); ++a)
        if (var_of[a] < 0) throw Error("model does not cover every arc of the graph");
    return var_of;
}

void verify_flow_exact(const std::vector<std::int64_t>& flow, std::int64_t z,
                       const ArcFlowGraph& g, const VbpInstance& inst) {
    if (z < 0) throw ConsistencyError("negative objective in solver answer");
    std::vector<std::int64_t> net(g.node_count(), 0);
    for (int a = 0; a < g.arc_count(); ++a) {
        if (flow[a] < 0) throw ConsistencyError("negative arc flow in solver answer");
        const auto& arc = g.arcs[a];
        if (arc.item != 0 && flow[a] > inst.items[arc.item - 1].demand)
            throw ConsistencyError("arc flow exceeds the demand bound");
        net[arc.head] += flow[a];
        net[arc.tail] -= flow[a];
    }
    for (int v = 0; v < g.node_count(); ++v) {
        const std::int64_t expect = v == g.source ? -z : v == g.target ? z : 0;
        if (net[v] != expect)
            throw ConsistencyError("flow conservation violated at node " + std::to_string(v));
    }
    std::vector<std::int64_t> covered(inst.item_count(), 0);
    for (int a = 0; a < g.arc_count(); ++a)
        if (g.arcs[a].item != 0) covered[g.arcs[a].item - 1] += flow[a];
    for (int i = 0; i < inst.item_count(); ++i) {
        if (inst.j_exact.count(i) ? covered[i] != inst.items[i].demand
                                  : covered[i] < inst.items[i].demand)
            throw ConsistencyError("demand row violated for item rank " + std::to_string(i + 1));
    }
}

}  // namespace

FlowSolution extract_flow(const RawSolution& raw, const MilpModel& model, const ArcFlowGraph& g,
                          const VbpInstance& inst) {
    FlowSolution sol;
    sol.status = raw.status;
    sol.best_bound = raw.best_bound;
    sol.bb_nodes = raw.bb_nodes;
    sol.solve_seconds = raw.solve_seconds;
    if (raw.status != SolveStatus::optimal && raw.status != SolveStatus::feasible) return sol;
    if (!raw.has_values) {
        if (raw.status == SolveStatus::timeout) return sol;
        throw SolverError("solver reported a solution but returned no variable values");
    }

    const auto var_of = arc_variables(model, g);
    auto value_of = [&](int var) {
        const auto it = raw.values.find(model.vars[var].name);
        return it == raw.values.end() ? 0.0 : it->second;
    };
    auto as_integer = [](double v) {
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-4)
            throw ConsistencyError("solver value " + std::to_string(v) + " is not integral");
        return static_cast<std::int64_t>(r);
    };
    sol.arc_flow.resize(g.arc_count());
    for (int a = 0; a < g.arc_count(); ++a) sol.arc_flow[a] = as_integer(value_of(var_of[a]));
    const auto zit = model.var_index.find("Z");
    if (zit == model.var_index.end()) throw Error("model has no objective variable Z");
    sol.objective = as_integer(value_of(zit->second));
    verify_flow_exact(sol.arc_flow, sol.objective, g, inst);
    return sol;
}

LpRelaxation extract_lp(const RawSolution& raw, const MilpModel& model, const ArcFlowGraph& g,
                        const VbpInstance& inst) {
    LpRelaxation lp;
    lp.status = raw.status;
    lp.solve_seconds = raw.solve_seconds;
    if (raw.status != SolveStatus::optimal) return lp;
    lp.objective = raw.objective;
    const auto var_of = arc_variables(model, g);
    lp.arc_flow.resize(g.arc_count(), 0.0);
    for (int a = 0; a < g.arc_count(); ++a) {
        const auto it = raw.values.find(model.vars[var_of[a]].name);
        lp.arc_flow[a] = it == raw.values.end() ? 0.0 : it->second;
    }
    lp.demand_duals.resize(inst.item_count(), 0.0);
    for (int i = 0; i < inst.item_count(); ++i) {
        const auto it = raw.duals.find("D_" + std::to_string(i + 1));
        if (it != raw.duals.end()) lp.demand_duals[i] = it->second;
    }
    return lp;
}

namespace {

std::filesystem::path write_model_file(const MilpModel& model, const SolverConfig& cfg,
                                       const std::string& stem) {
    const auto dir = cfg.work_dir.empty() ? make_scratch_dir("model") : cfg.work_dir;
    std::filesystem::create_directories(dir);
    const auto path = dir / (stem + ".lp");
    std::ofstream out(path);
    write_model(model, out, ModelFormat::lp);
    return path;
}

}  // namespace

FlowSolution solve_arcflow(const MilpModel& model, const ArcFlowGraph& g, const VbpInstance& inst,
                           const SolverConfig& cfg, const std::string& stem) {
    SolverConfig local = cfg;
    if (local.work_dir.empty()) local.work_dir = make_scratch_dir("run");
    const auto path = write_model_file(model, local, stem);
    return extract_flow(run_solver(path, local, false), model, g, inst);
}

LpRelaxation solve_arcflow_lp(const MilpModel& model, const ArcFlowGraph& g,
                              const VbpInstance& inst, const SolverConfig& cfg,
                              const std::string& stem) {
    SolverConfig local = cfg;
    if (local.work_dir.empty()) local.work_dir = make_scratch_dir("run");
    const auto path = write_model_file(model, local, stem + "_lp");
    return extract_lp(run_solver(path, local, true), model, g, inst);
}

ColgenResult column_generation_lp(const VbpInstance& inst, const ArcFlowGraph& g,
                                  int max_iterations) {
    const int m = inst.item_count();
    ColgenResult res;
    std::set<Pattern> seen;
    for (int i = 0; i < m; ++i) {
        Pattern p(m, 0);
        p[i] = 1;
        res.columns.push_back(p);
        seen.insert(p);
    }
    for (;;) {
        DenseLp master;
        master.objective.assign(res.columns.size(), 1.0);
        master.rows.resize(m);
        for (int i = 0; i < m; ++i) {
            master.rows[i].sense = '>';
            master.rows[i].rhs = static_cast<double>(inst.items[i].demand);
            for (int j = 0; j < static_cast<int>(res.columns.size()); ++j)
                if (res.columns[j][i] > 0)
                    master.rows[i].coeffs.emplace_back(j, static_cast<double>(res.columns[j][i]));
        }
        const LpResult lp = solve_dense_lp(master);
        if (lp.status != LpResult::Status::optimal)
            throw ConsistencyError("restricted master failed to solve");
        res.objective = lp.objective;
        if (++res.iterations > max_iterations)
            throw ResourceError("column generation exceeded the iteration cap");
        const PricedPattern priced = price_min_reduced_cost(g, lp.duals);
        if (priced.reduced_cost >= -1e-9) break;
        if (!seen.insert(priced.pattern).second)
            throw ConsistencyError("pricing returned an existing column with negative reduced cost");
        res.columns.push_back(priced.pattern);
    }
    return res;
}

namespace {

void enumerate_feasible_patterns(const VbpInstance& inst, std::vector<Pattern>& out,
                                 std::uint64_t cap) {
    const int m = inst.item_count();
    Pattern counts(m, 0);
    std::vector<std::int64_t> used(inst.dim_count, 0);
    // DFS over item ranks; each level chooses a count for that item
    std::function<void(int)> rec = [&](int i) {
        if (static_cast<std::uint64_t>(out.size()) > cap)
            throw ResourceError("pattern budget exceeded in the exact oracle");
        if (i == m) {
            out.push_back(counts);
            return;
        }
        rec(i + 1);  // zero copies
        std::int64_t k = 0;
        while (k < inst.items[i].demand) {
            bool ok = true;
            for (int d = 0; d < inst.dim_count; ++d)
                if (used[d] + inst.items[i].weights[d] > inst.capacities[d]) {
                    ok = false;
                    break;
                }
            if (!ok) break;
            for (int d = 0; d < inst.dim_count; ++d) used[d] += inst.items[i].weights[d];
            counts[i] = static_cast<int>(++k);
            rec(i + 1);
        }
        for (int d = 0; d < inst.dim_count; ++d) used[d] -= k * inst.items[i].weights[d];
        counts[i] = 0;
    };
    rec(0);
}

}  // namespace

OraclePacking oracle_exact(const VbpInstance& inst, const OracleLimits& limits) {
    inst.validate();
    const int m = inst.item_count();
    std::vector<Pattern> patterns;
    enumerate_feasible_patterns(inst, patterns, limits.max_patterns);
    // favour dense patterns so good covers are found early
    std::sort(patterns.begin(), patterns.end(), [&](const Pattern& a, const Pattern& b) {
        std::int64_t wa = 0, wb = 0;
        for (int i = 0; i < m; ++i)
            for (int d = 0; d < inst.dim_count; ++d) {
                wa += static_cast<std::int64_t>(a[i]) * inst.items[i].weights[d];
                wb += static_cast<std::int64_t>(b[i]) * inst.items[i].weights[d];
            }
        if (wa != wb) return wa > wb;
        return a > b;
    });

    std::vector<std::int64_t> demand(m);
    for (int i = 0; i < m; ++i) demand[i] = inst.items[i].demand;

    auto lower_bound = [&](const std::vector<std::int64_t>& residual) {
        std::int64_t lb = 0;
        for (int d = 0; d < inst.dim_count; ++d) {
            std::int64_t total = 0;
            for (int i = 0; i < m; ++i) total += residual[i] * inst.items[i].weights[d];
            const std::int64_t bins =
                (total + inst.capacities[d] - 1) / inst.capacities[d];
            lb = std::max(lb, bins);
        }
        return lb;
    };

    std::map<std::vector<std::int64_t>, std::int64_t> memo;  // residual -> exact bins
    std::map<std::vector<std::int64_t>, int> choice;         // residual -> pattern index
    std::uint64_t states = 0;
    std::int64_t best_known = first_fit_decreasing(inst) + 1;

    std::function<std::int64_t(const std::vector<std::int64_t>&, std::int64_t)> rec =
        [&](const std::vector<std::int64_t>& residual, std::int64_t budget) -> std::int64_t {
        bool done = true;
        for (std::int64_t r : residual)
            if (r > 0) done = false;
        if (done) return 0;
        if (budget <= 0) return best_known;  // cut: cannot improve along this branch
        if (auto it = memo.find(residual); it != memo.end()) return it->second;
        if (++states > limits.max_states)
            throw ResourceError("state budget exceeded in the exact oracle");
        const std::int64_t lb = lower_bound(residual);
        if (lb > budget) return budget + 1;
        int first = 0;
        while (residual[first] == 0) ++first;
        std::int64_t best = budget + 1;
        int best_pattern = -1;
        for (int pi = 0; pi < static_cast<int>(patterns.size()); ++pi) {
            const Pattern& pat = patterns[pi];
            if (pat[first] == 0) continue;  // cover the first open item; avoids permutations
            std::vector<std::int64_t> next(residual);
            for (int i = 0; i < m; ++i) next[i] = std::max<std::int64_t>(0, next[i] - pat[i]);
            const std::int64_t sub = rec(next, std::min(best, budget) - 1);
            if (1 + sub < best) {
                best = 1 + sub;
                best_pattern = pi;
                if (best == lb) break;
            }
        }
        if (best <= budget) {
            memo[residual] = best;
            choice[residual] = best_pattern;
        }
        return best;
    };

    const std::int64_t bins = rec(demand, best_known);
    OraclePacking out;
    out.bins = bins;
    std::map<Pattern, std::int64_t> mult;
    std::vector<std::int64_t> residual = demand;
    for (;;) {
        bool done = true;
        for (std::int64_t r : residual)
            if (r > 0) done = false;
        if (done) break;
        const auto it = choice.find(residual);
        if (it == choice.end()) throw Error("oracle reconstruction failed");
        const Pattern& pat = patterns[it->second];
        ++mult[pat];
        for (int i = 0; i < m; ++i) residual[i] = std::max<std::int64_t>(0, residual[i] - pat[i]);
    }
    for (const auto& [pat, k] : mult) out.packing.emplace_back(pat, k);
    return out;
}

RoundedSolution round_lp_heuristic(const std::vector<double>& arc_flow, const ArcFlowGraph& g,
                                   const VbpInstance& inst) {
    constexpr double kFlowEps = 1e-7;
    const int m = inst.item_count();
    const auto out_arcs = g.out_arcs();

    std::vector<double> residual = arc_flow;
    std::vector<std::pair<Pattern, double>> paths;
    for (;;) {
        // walk from the source along positive-residual arcs, preferring
        // the highest item rank
        std::vector<int> arc_path;
        int v = g.source;
        while (v != g.target) {
            int pick = -1;
            for (int a : out_arcs[v]) {
                if (residual[a] <= kFlowEps) continue;
                if (pick < 0 || g.arcs[a].item > g.arcs[pick].item) pick = a;
            }
            if (pick < 0) break;
            arc_path.push_back(pick);
            v = g.arcs[pick].head;
        }
        if (v != g.target || arc_path.empty()) break;
        double mult = std::numeric_limits<double>::infinity();
        for (int a : arc_path) mult = std::min(mult, residual[a]);
        Pattern pat(m, 0);
        for (int a : arc_path)
            if (g.arcs[a].item != 0) ++pat[g.arcs[a].item - 1];
        for (int a : arc_path) residual[a] -= mult;
        paths.emplace_back(std::move(pat), mult);
    }

    std::map<Pattern, std::int64_t> take;
    std::vector<std::int64_t> covered(m, 0);
    for (const auto& [pat, mult] : paths) {
        const auto k = static_cast<std::int64_t>(std::floor(mult + kFlowEps));
        if (k > 0) {
            take[pat] += k;
            for (int i = 0; i < m; ++i) covered[i] += static_cast<std::int64_t>(pat[i]) * k;
        }
    }
    auto unmet = [&]() {
        for (int i = 0; i < m; ++i)
            if (covered[i] < inst.items[i].demand) return i;
        return -1;
    };
    // round fractional paths up while something is missing
    for (int i; (i = unmet()) >= 0;) {
        int best = -1;
        std::int64_t best_gain = 0;
        for (int pj = 0; pj < static_cast<int>(paths.size()); ++pj) {
            const Pattern& pat = paths[pj].first;
            std::int64_t gain = 0;
            for (int j = 0; j < m; ++j)
                gain += std::min<std::int64_t>(pat[j],
                                               std::max<std::int64_t>(0, inst.items[j].demand -
                                                                             covered[j]));
            if (pat[i] > 0 && gain > best_gain) {
                best_gain = gain;
                best = pj;
            }
        }
        Pattern pat;
        if (best >= 0) {
            pat = paths[best].first;
        } else {
            pat.assign(m, 0);
            pat[i] = 1;  // item fits alone by instance validation
        }
        ++take[pat];
        for (int j = 0; j < m; ++j) covered[j] += pat[j];
    }
    // drop bins that became redundant
    for (auto& [pat, k] : take) {
        while (k > 0) {
            bool redundant = true;
            for (int i = 0; i < m; ++i)
                if (pat[i] > 0 && covered[i] - pat[i] < inst.items[i].demand) redundant = false;
            if (!redundant) break;
            --k;
            for (int i = 0; i < m; ++i) covered[i] -= pat[i];
        }
    }

    RoundedSolution out;
    for (const auto& [pat, k] : take)
        if (k > 0) {
            out.patterns.emplace_back(pat, k);
            out.bins += k;
        }
    return out;
}

}  // namespace vpflow
