#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vpflow/harness.hpp"
#include "vpflow/solve.hpp"

using namespace vpflow;

namespace {

const std::string kCli = VPFLOW_CLI_PATH;
const std::string kData = VPFLOW_TEST_DATA_DIR;

struct RunResult {
    int code;
    std::string output;
};

RunResult run(const std::string& args) {
    const auto dir = make_scratch_dir("cli");
    const auto out_path = dir / "out.txt";
    const std::string cmd = kCli + " " + args + " > " + out_path.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("gen-queen emits the canonical doubled edge count") {
    const auto [code, output] = run("gen-queen --q 5");
    CHECK(code == 0);
    CHECK(output.find("p edge 25 320") != std::string::npos);
}

TEST_CASE("gen-divisible is deterministic and sizes divide the capacity") {
    const auto a = run("gen-divisible --seed 42 --items 5 --capacity 12");
    const auto b = run("gen-divisible --seed 42 --items 5 --capacity 12");
    CHECK(a.code == 0);
    CHECK(a.output == b.output);
    std::istringstream in(a.output);
    int m, W;
    REQUIRE((in >> m >> W));
    CHECK(W == 12);
    for (int i = 0; i < m; ++i) {
        long long w, d;
        REQUIRE((in >> w >> d));
        CHECK(W % w == 0);
        CHECK(w < W);
        CHECK(d >= 1);
    }
}

TEST_CASE("gen-timetable produces the declared header") {
    const auto a = run("gen-timetable --size 4 --periods 30 --seed 7");
    const auto b = run("gen-timetable --size 4 --periods 30 --seed 7");
    CHECK(a.code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.substr(0, 6) == "4 4 4\n");
    // total demand is size * periods
    std::istringstream in(a.output);
    int t, c, v;
    in >> t >> c >> v;
    long long total = 0, cls, tch, ven, d;
    while (in >> cls >> tch >> ven >> d) total += d;
    CHECK(total == 120);
}

TEST_CASE("solve runs the full pipeline on the packing example") {
    const auto dir = make_scratch_dir("cli-solve");
    const auto csv = dir / "row.csv";
    const auto [code, output] = run("solve " + kData + "/example1.bpp --bpp --oracle --out " +
                                    dir.string() + " --csv " + csv.string());
    CAPTURE(output);
    CHECK(code == 0);
    CHECK(output.find("z_ip       4") != std::string::npos);
    CHECK(output.find("validated  yes") != std::string::npos);
    const std::string row = slurp(csv);
    CHECK(row.find("example1,bpp,3,6,1,") != std::string::npos);
    CHECK(row.find(",4,IP,") != std::string::npos);  // z_ip and gap class columns
}

TEST_CASE("solve handles the timetable kind") {
    const auto [code, output] = run("solve " + kData + "/tiny.timetable --timetable");
    CAPTURE(output);
    CHECK(code == 0);
    CHECK(output.find("status     optimal") != std::string::npos);
}

TEST_CASE("graph-stats reports the documented stage counts") {
    const auto [code, output] =
        run("graph-stats " + kData + "/w9c3.vbp --vbp --reference-pipeline");
    CAPTURE(output);
    CHECK(code == 0);
    CHECK(output.find("step1      9 nodes, 18 arcs") != std::string::npos);
    CHECK(output.find("step3      8 nodes, 17 arcs") != std::string::npos);
    CHECK(output.find("step4      7 nodes, 15 arcs") != std::string::npos);
}

TEST_CASE("graph-stats dumps the final graph deterministically") {
    const auto dir = make_scratch_dir("cli-dump");
    const auto d1 = dir / "a.graph";
    const auto d2 = dir / "b.graph";
    CHECK(run("graph-stats " + kData + "/example1.bpp --bpp --dump " + d1.string()).code == 0);
    CHECK(run("graph-stats " + kData + "/example1.bpp --bpp --dump " + d2.string()).code == 0);
    const std::string a = slurp(d1);
    CHECK(a == slurp(d2));
    CHECK(a.substr(0, 4) == "5 8\n");
}

TEST_CASE("bench runs a manifest and keeps going past broken entries") {
    const auto dir = make_scratch_dir("cli-bench");
    const auto csv = dir / "bench.csv";
    const auto [code, output] =
        run("bench " + kData + "/bench.manifest --jobs 2 --csv " + csv.string());
    CHECK(code == 0);  // per-instance failures become rows, not exit codes
    const std::string table = slurp(csv);
    CHECK(table.find(bench_csv_header()) != std::string::npos);
    CHECK(table.find("broken") != std::string::npos);
    CHECK(table.find("error") != std::string::npos);
    CHECK(table.find("example1") != std::string::npos);
    CHECK(table.find("w9c3") != std::string::npos);
    // rows are sorted by instance name
    CHECK(table.find("broken") < table.find("example1"));
    CHECK(table.find("example1") < table.find("w9c3"));
}

TEST_CASE("empty manifest yields a header-only csv") {
    const auto dir = make_scratch_dir("cli-empty");
    const auto manifest = dir / "empty.manifest";
    std::ofstream(manifest) << "# nothing here\n";
    const auto csv = dir / "empty.csv";
    const auto [code, output] = run("bench " + manifest.string() + " --csv " + csv.string());
    CHECK(code == 0);
    CHECK(slurp(csv) == bench_csv_header() + "\n");
}

TEST_CASE("unknown instance path fails with a stage-tagged error") {
    const auto [code, output] = run("solve /nonexistent.bpp --bpp");
    CHECK(code != 0);
    CHECK(output.find("error") != std::string::npos);
}

TEST_CASE("non-timing csv fields are reproducible") {
    const auto dir = make_scratch_dir("cli-repro");
    const auto csv1 = dir / "a.csv";
    const auto csv2 = dir / "b.csv";
    run("solve " + kData + "/example1.bpp --bpp --csv " + csv1.string());
    run("solve " + kData + "/example1.bpp --bpp --csv " + csv2.string());
    auto strip_timing = [](const std::string& csv) {
        // columns t_pp, t_lp, t_ip, t_tot sit at indices 12..15
        std::istringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string field;
            int idx = 0;
            while (std::getline(ls, field, ',')) {
                if (idx < 12 || idx > 15) out += field + ",";
                ++idx;
            }
            out += "\n";
        }
        return out;
    };
    CHECK(strip_timing(slurp(csv1)) == strip_timing(slurp(csv2)));
}
