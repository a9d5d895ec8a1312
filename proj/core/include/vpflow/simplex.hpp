#ifndef VPFLOW_SIMPLEX_HPP
#define VPFLOW_SIMPLEX_HPP

#include <vector>

namespace vpflow {

// Small dense LP in the form  min c^T x  s.t.  rows of A x {<=,>=,=} b,
// x >= 0. Meant for restricted masters and enumeration oracles with at
// most a few hundred rows; not a general-purpose solver.
struct DenseLp {
    std::vector<double> objective;
    struct Row {
        std::vector<std::pair<int, double>> coeffs;
        char sense = '>';  // '<', '>', '='
        double rhs = 0.0;
    };
    std::vector<Row> rows;
    int num_vars() const { return static_cast<int>(objective.size()); }
};

struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::optimal;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> duals;  // one per row
};

// Two-phase primal simplex with Bland's rule.
LpResult solve_dense_lp(const DenseLp& lp);

}  // namespace vpflow

#endif
