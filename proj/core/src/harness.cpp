#include "vpflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "vpflow/errors.hpp"

namespace vpflow {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_num(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

}  // namespace

std::string bench_csv_header() {
    return "instance,kind,m,n,p,v,a,pct_v,pct_a,z_lp,z_ip,gap_class,t_pp,t_lp,t_ip,t_tot,n_bb,"
           "status";
}

std::string bench_csv_row(const BenchRecord& r) {
    std::ostringstream ss;
    ss << r.instance << "," << r.kind << "," << r.m << "," << r.n << "," << r.p << "," << r.v
       << "," << r.a << ",";
    if (r.pct_v) ss << csv_num(*r.pct_v);
    ss << ",";
    if (r.pct_a) ss << csv_num(*r.pct_a);
    ss << ",";
    if (r.z_lp) ss << csv_num(*r.z_lp);
    ss << ",";
    if (r.z_ip) ss << *r.z_ip;
    ss << "," << r.gap_class << "," << csv_num(r.t_pp) << "," << csv_num(r.t_lp) << ","
       << csv_num(r.t_ip) << "," << csv_num(r.t_tot) << ",";
    if (r.n_bb) ss << *r.n_bb;
    ss << "," << r.status;
    return ss.str();
}

std::pair<VbpInstance, ReductionMap> load_problem(const ProblemSpec& spec) {
    VbpInstance inst;
    ReductionMap map;
    switch (spec.kind) {
        case ProblemSpec::Kind::bpp:
            inst = parse_instance(spec.path, InstanceFormat::bpp);
            map = ReductionMap::plain_for(inst);
            break;
        case ProblemSpec::Kind::csp:
            inst = parse_instance(spec.path, InstanceFormat::csp);
            map = ReductionMap::plain_for(inst);
            break;
        case ProblemSpec::Kind::vbp:
            inst = parse_instance(spec.path, InstanceFormat::vbp);
            map = ReductionMap::plain_for(inst);
            break;
        case ProblemSpec::Kind::coloring: {
            auto [i, m] = coloring_to_vbp(parse_dimacs(spec.path), spec.mode);
            inst = std::move(i);
            map = std::move(m);
            break;
        }
        case ProblemSpec::Kind::timetable: {
            const auto [t, c, v, reqs] = parse_timetable(spec.path);
            auto [i, m] = timetable_to_vbp(t, c, v, reqs);
            inst = std::move(i);
            map = std::move(m);
            break;
        }
    }
    if (spec.conflicts) {
        auto [i, m] = add_conflicts(inst, parse_dimacs(*spec.conflicts), spec.binary);
        inst = std::move(i);
        map = std::move(m);
    } else if (spec.binary) {
        inst = add_binary_patterns(inst);
        note_binary_patterns(map, inst);
    }
    if (spec.cardinality) {
        inst = add_cardinality(inst, *spec.cardinality);
        note_cardinality(map, inst, *spec.cardinality);
    }
    return {std::move(inst), std::move(map)};
}

PipelineResult run_pipeline(const ProblemSpec& spec, const PipelineOptions& opts) {
    PipelineResult res;
    BenchRecord& rec = res.record;
    rec.instance = spec.name.empty() ? spec.path.stem().string() : spec.name;
    switch (spec.kind) {
        case ProblemSpec::Kind::bpp: rec.kind = "bpp"; break;
        case ProblemSpec::Kind::csp: rec.kind = "csp"; break;
        case ProblemSpec::Kind::vbp: rec.kind = "vbp"; break;
        case ProblemSpec::Kind::coloring: rec.kind = "color"; break;
        case ProblemSpec::Kind::timetable: rec.kind = "timetable"; break;
    }
    if (spec.binary) rec.kind += "+binary";
    if (spec.conflicts) rec.kind += "+conflicts";
    if (spec.cardinality) rec.kind += "+card" + std::to_string(*spec.cardinality);

    const auto t_start = std::chrono::steady_clock::now();
    auto [raw_inst, map] = load_problem(spec);
    res.map = map;
    res.instance = raw_inst;
    rec.m = raw_inst.item_count();
    rec.n = raw_inst.total_demand();
    rec.p = raw_inst.dim_count;

    const CanonicalOrder order = canonical_order(raw_inst);
    const VbpInstance inst = apply_order(raw_inst, order);

    const auto t_build = std::chrono::steady_clock::now();
    const ArcFlowGraph graph = compress_final(build_step3(inst, opts.limits));
    rec.t_pp = seconds_since(t_build);
    rec.v = graph.node_count();
    rec.a = graph.arc_count();

    if (opts.reference_pipeline) {
        try {
            const ReferencePipeline pipe = build_reference_pipeline(inst, opts.limits);
            res.stage_stats = pipe.stats();
            const auto& s = *res.stage_stats;
            rec.pct_v = 100.0 * (1.0 - double(s[3].nodes) / double(s[0].nodes));
            rec.pct_a = 100.0 * (1.0 - double(s[3].arcs) / double(s[0].arcs));
        } catch (const ResourceError&) {
            // uncompressed graph too large; ratios stay blank
        }
    }

    MilpModel model = build_arcflow_model(graph, inst);
    SolverConfig solver = opts.solver;
    if (solver.work_dir.empty())
        solver.work_dir = opts.out_dir.empty() ? make_scratch_dir(rec.instance) : opts.out_dir;
    std::filesystem::create_directories(solver.work_dir);

    const std::string ext = opts.format == ModelFormat::lp ? ".lp" : ".mps";
    res.model_path = solver.work_dir / (rec.instance + ext);
    {
        std::ofstream out(res.model_path);
        write_model(model, out, opts.format);
    }
    res.annotation_path = solver.work_dir / (rec.instance + ".ann");
    {
        std::ofstream out(res.annotation_path);
        write_annotations(model, out);
    }
    // the solver is always fed the LP rendering
    std::filesystem::path solve_path = res.model_path;
    if (opts.format != ModelFormat::lp) {
        solve_path = solver.work_dir / (rec.instance + ".lp");
        std::ofstream out(solve_path);
        write_model(model, out, ModelFormat::lp);
    }

    const auto t_lp = std::chrono::steady_clock::now();
    const LpRelaxation lp = extract_lp(run_solver(solve_path, solver, true), model, graph, inst);
    rec.t_lp = seconds_since(t_lp);
    if (lp.status == SolveStatus::optimal) rec.z_lp = lp.objective;

    if (!opts.solve_ip) {
        rec.t_tot = seconds_since(t_start);
        rec.status = status_name(lp.status);
        res.exit_code = lp.status == SolveStatus::optimal ? 0 : 1;
        return res;
    }

    const auto t_ip = std::chrono::steady_clock::now();
    const FlowSolution flow = extract_flow(run_solver(solve_path, solver, false), model, graph, inst);
    rec.t_ip = seconds_since(t_ip);
    rec.status = status_name(flow.status);
    rec.n_bb = flow.bb_nodes;

    if (flow.status == SolveStatus::optimal || flow.status == SolveStatus::feasible) {
        rec.z_ip = flow.objective;
        if (rec.z_lp) rec.gap_class = gap_class_name(lp_bound_report(*rec.z_lp, flow.objective).cls);
        const auto patterns = decompose_flow(graph, flow);
        const PackingSolution ranked = to_bins(patterns, inst);
        res.solution = relabel_items(ranked, order);
        const ValidationReport report = validate_solution(raw_inst, res.solution, map);
        res.validated = report.ok;
        res.violations = report.violations;
        res.solution_text_path = solver.work_dir / (rec.instance + ".solution");
        std::ofstream out(res.solution_text_path);
        write_solution(res.solution, raw_inst, map, out);
    }
    if (opts.run_oracle && (flow.status == SolveStatus::optimal)) {
        const OraclePacking oracle = oracle_exact(inst);
        if (oracle.bins != flow.objective)
            throw ConsistencyError("oracle optimum " + std::to_string(oracle.bins) +
                                   " disagrees with the solver optimum " +
                                   std::to_string(flow.objective));
    }
    rec.t_tot = seconds_since(t_start);
    const bool status_ok = flow.status == SolveStatus::optimal ||
                           (opts.accept_feasible && flow.status == SolveStatus::feasible);
    res.exit_code = (res.validated && status_ok) ? 0 : 1;
    return res;
}

std::vector<ProblemSpec> parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open manifest " + path.string());
    std::vector<ProblemSpec> specs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string name, kind, file;
        if (!(ss >> name)) continue;
        if (!(ss >> kind >> file))
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected '<name> <kind> <path> [options]'");
        ProblemSpec spec;
        spec.name = name;
        spec.path = path.parent_path() / file;
        if (kind == "bpp") spec.kind = ProblemSpec::Kind::bpp;
        else if (kind == "csp") spec.kind = ProblemSpec::Kind::csp;
        else if (kind == "vbp") spec.kind = ProblemSpec::Kind::vbp;
        else if (kind == "color") spec.kind = ProblemSpec::Kind::coloring;
        else if (kind == "timetable") spec.kind = ProblemSpec::Kind::timetable;
        else
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown kind " +
                             kind);
        std::string opt;
        while (ss >> opt) {
            if (opt == "binary") spec.binary = true;
            else if (opt.rfind("card=", 0) == 0) spec.cardinality = std::stoll(opt.substr(5));
            else if (opt.rfind("mode=", 0) == 0) {
                const std::string mode = opt.substr(5);
                if (mode == "adjacency") spec.mode = ColoringMode::adjacency;
                else if (mode == "degree") spec.mode = ColoringMode::degree;
                else if (mode == "clique") spec.mode = ColoringMode::clique;
                else
                    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                     ": unknown mode " + mode);
            } else if (opt.rfind("conflicts=", 0) == 0) {
                spec.conflicts = path.parent_path() / opt.substr(10);
            } else {
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": unknown option " + opt);
            }
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

void run_bench(const std::vector<ProblemSpec>& specs, const PipelineOptions& opts, int jobs,
               std::ostream& csv, std::ostream& log) {
    std::vector<BenchRecord> records(specs.size());
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    jobs = std::max(1, jobs);

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= specs.size()) return;
            PipelineOptions local = opts;
            local.out_dir = opts.out_dir.empty()
                                ? make_scratch_dir("bench-" + std::to_string(idx))
                                : opts.out_dir / specs[idx].name;
            try {
                records[idx] = run_pipeline(specs[idx], local).record;
            } catch (const std::exception& e) {
                records[idx].instance =
                    specs[idx].name.empty() ? specs[idx].path.stem().string() : specs[idx].name;
                records[idx].status = "error";
                std::lock_guard<std::mutex> lock(log_mutex);
                log << "warning: " << records[idx].instance << ": " << e.what() << "\n";
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(records.begin(), records.end(),
              [](const BenchRecord& a, const BenchRecord& b) { return a.instance < b.instance; });
    csv << bench_csv_header() << "\n";
    for (const auto& r : records) csv << bench_csv_row(r) << "\n";

    // per-kind mean rows, following the per-instance rows
    std::map<std::string, std::vector<const BenchRecord*>> by_kind;
    for (const auto& r : records)
        if (r.status != "error") by_kind[r.kind].push_back(&r);
    for (const auto& [kind, rows] : by_kind) {
        const double n = static_cast<double>(rows.size());
        BenchRecord mean;
        mean.instance = "mean:" + kind;
        mean.kind = kind;
        mean.status = "mean-of-" + std::to_string(rows.size());
        double v = 0, a = 0, pv = 0, pa = 0, nb = 0;
        int with_pct = 0, with_nb = 0;
        for (const auto* r : rows) {
            v += r->v;
            a += r->a;
            mean.t_pp += r->t_pp / n;
            mean.t_lp += r->t_lp / n;
            mean.t_ip += r->t_ip / n;
            mean.t_tot += r->t_tot / n;
            if (r->pct_v) {
                pv += *r->pct_v;
                pa += r->pct_a.value_or(0.0);
                ++with_pct;
            }
            if (r->n_bb) {
                nb += static_cast<double>(*r->n_bb);
                ++with_nb;
            }
        }
        mean.v = static_cast<int>(v / n + 0.5);
        mean.a = static_cast<int>(a / n + 0.5);
        if (with_pct) {
            mean.pct_v = pv / with_pct;
            mean.pct_a = pa / with_pct;
        }
        if (with_nb) mean.n_bb = static_cast<std::int64_t>(nb / with_nb + 0.5);
        csv << bench_csv_row(mean) << "\n";
    }
}

VbpInstance gen_divisible(std::uint64_t seed, int m, std::int64_t capacity,
                          std::int64_t max_demand) {
    if (capacity < 2) throw Error("divisible instances need capacity >= 2");
    if (m < 1) throw Error("divisible instances need at least one item");
    std::vector<std::int64_t> divisors;
    for (std::int64_t d = 1; d < capacity; ++d)
        if (capacity % d == 0) divisors.push_back(d);
    if (divisors.size() > 1) divisors.erase(divisors.begin());  // drop size 1 when possible

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, divisors.size() - 1);
    std::uniform_int_distribution<std::int64_t> demand(1, max_demand);
    std::set<std::int64_t> sizes;
    // prefer distinct sizes; fall back to repetition when m exceeds them
    if (static_cast<std::size_t>(m) <= divisors.size()) {
        while (static_cast<int>(sizes.size()) < m) sizes.insert(divisors[pick(rng)]);
    }
    std::vector<ItemType> items;
    if (!sizes.empty()) {
        for (auto it = sizes.rbegin(); it != sizes.rend(); ++it)
            items.push_back({{*it}, demand(rng), std::to_string(items.size() + 1)});
    } else {
        for (int i = 0; i < m; ++i)
            items.push_back({{divisors[pick(rng)]}, demand(rng), std::to_string(i + 1)});
    }
    return make_instance({capacity}, std::move(items));
}

void gen_queen(int q, std::ostream& out) {
    if (q < 1) throw Error("queen graphs need q >= 1");
    auto attacks = [&](int a, int b) {
        const int ra = a / q, ca = a % q, rb = b / q, cb = b % q;
        return ra == rb || ca == cb || (ra - rb) == (ca - cb) || (ra - rb) == (cb - ca);
    };
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < q * q; ++a)
        for (int b = 0; b < q * q; ++b)
            if (a != b && attacks(a, b)) edges.emplace_back(a + 1, b + 1);
    out << "c queens graph on a " << q << "x" << q << " board\n";
    out << "p edge " << q * q << " " << edges.size() << "\n";
    for (const auto& [a, b] : edges) out << "e " << a << " " << b << "\n";
}

void gen_timetable_hard(int size, int periods, std::uint64_t seed, std::ostream& out) {
    if (size < 1 || periods < 1) throw Error("timetable generator needs positive size and periods");
    std::mt19937_64 rng(seed);
    std::map<std::tuple<int, int, int>, std::int64_t> demand;
    std::vector<int> teacher(size), venue(size);
    for (int p = 0; p < periods; ++p) {
        for (int k = 0; k < size; ++k) teacher[k] = k;
        for (int k = 0; k < size; ++k) venue[k] = k;
        std::shuffle(teacher.begin(), teacher.end(), rng);
        std::shuffle(venue.begin(), venue.end(), rng);
        for (int cls = 0; cls < size; ++cls) ++demand[{cls, teacher[cls], venue[cls]}];
    }
    out << size << " " << size << " " << size << "\n";
    for (const auto& [key, d] : demand) {
        const auto [c, t, v] = key;
        out << c + 1 << " " << t + 1 << " " << v + 1 << " " << d << "\n";
    }
}

}  // namespace vpflow
