#ifndef VPFLOW_MODEL_HPP
#define VPFLOW_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpflow/flowgraph.hpp"
#include "vpflow/instance.hpp"

namespace vpflow {

constexpr double kInfinity = 1e30;

struct MilpVar {
    std::string name;
    double lower = 0.0;
    double upper = kInfinity;
    bool integral = false;
};

enum class RowSense : char { le = '<', ge = '>', eq = '=' };

struct MilpRow {
    std::string name;
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

// Solver-agnostic minimization model. Variable and row order is fixed at
// build time; writers emit them verbatim, so identical models serialize
// byte-identically.
struct MilpModel {
    std::vector<MilpVar> vars;
    std::vector<MilpRow> rows;
    std::vector<std::pair<int, double>> objective;
    std::map<std::string, int> var_index;
    std::vector<std::string> warnings;

    // arc annotation per variable: tail label, head label, item rank
    struct ArcRef {
        Label tail, head;
        int item = -1;  // -1 when the variable is not an arc flow
        int arc = -1;   // index into the generating graph's arc list
    };
    std::vector<ArcRef> arc_refs;

    int add_var(MilpVar v);
};

// General arc-flow model: minimize z subject to conservation at every
// node (including the target), demand rows (>= outside j_exact, = inside),
// arc flows bounded by the item demand, all flows integer.
// Flow variables are named F_<tail>_<head>_<item>, the objective variable Z.
MilpModel build_arcflow_model(const ArcFlowGraph& g, const VbpInstance& inst);

// Assignment comparison model with K bins: binary bin-use variables y_k,
// integer assignment counts x_ik, one knapsack row per bin and dimension.
// K = 0 selects the first-fit-decreasing bin count.
MilpModel build_assignment_model(const VbpInstance& inst, std::int64_t bin_bound = 0);

// First-fit decreasing over item copies in canonical order; the returned
// count is a valid upper bound on the optimum.
std::int64_t first_fit_decreasing(const VbpInstance& inst);

enum class ModelFormat { lp, mps };

// Deterministic CPLEX-LP or MPS text. Fixed-field MPS is used while every
// name fits the 8-character field; otherwise free MPS with a warning
// recorded on the model.
void write_model(const MilpModel& model, std::ostream& out, ModelFormat format);
void write_model(MilpModel& model, std::ostream& out, ModelFormat format);

// Sidecar annotation: one line per flow variable mapping it back to
// (tail label, head label, item rank).
void write_annotations(const MilpModel& model, std::ostream& out);

enum class GapClass { ip, irup, mirup, non_mirup };

struct GapReport {
    double gap = 0.0;  // z_ip - z_lp
    GapClass cls = GapClass::ip;
};

// Classifies the integrality gap: IP when z_ip = z_lp, IRUP when
// z_ip = ceil(z_lp), MIRUP when z_ip = ceil(z_lp) + 1. Throws
// ConsistencyError when z_ip < z_lp - tolerance.
GapReport lp_bound_report(double z_lp, std::int64_t z_ip, double tolerance = 1e-6);

const char* gap_class_name(GapClass cls);

// ceil with a tolerance guard against values sitting just above an integer
std::int64_t ceil_with_tolerance(double x, double tolerance = 1e-6);

}  // namespace vpflow

#endif
