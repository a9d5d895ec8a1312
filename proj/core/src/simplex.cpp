#include "vpflow/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vpflow/errors.hpp"

namespace vpflow {

namespace {

constexpr double kEps = 1e-9;

// Dense tableau over the columns: structural vars, then one slack or
// surplus per inequality row, then one artificial per row that needs one.
struct Tableau {
    int rows, cols;
    std::vector<std::vector<double>> a;  // rows x cols
    std::vector<double> b;               // rhs, kept nonnegative
    std::vector<int> basis;              // basic column per row

    void pivot(int r, int c) {
        const double piv = a[r][c];
        for (int j = 0; j < cols; ++j) a[r][j] /= piv;
        b[r] /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double f = a[i][c];
            if (std::abs(f) < kEps) continue;
            for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        basis[r] = c;
    }
};

// Minimizes cost over the tableau with Bland's rule; returns false when
// unbounded. `allowed` masks columns that may enter.
bool run_simplex(Tableau& t, std::vector<double>& cost, double& value,
                 const std::vector<char>& allowed) {
    // reduced costs maintained directly in `cost`, value in `value`
    for (;;) {
        int enter = -1;
        for (int j = 0; j < t.cols; ++j) {
            if (!allowed[j]) continue;
            if (cost[j] < -kEps) {
                enter = j;
                break;  // Bland: smallest index
            }
        }
        if (enter < 0) return true;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.rows; ++i) {
            if (t.a[i][enter] > kEps) {
                const double ratio = t.b[i] / t.a[i][enter];
                if (ratio < best - kEps ||
                    (ratio < best + kEps && (leave < 0 || t.basis[i] < t.basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return false;
        t.pivot(leave, enter);
        const double f = cost[enter];
        for (int j = 0; j < t.cols; ++j) cost[j] -= f * t.a[leave][j];
        value -= f * t.b[leave];
    }
}

}  // namespace

LpResult solve_dense_lp(const DenseLp& lp) {
    const int n = lp.num_vars();
    const int m = static_cast<int>(lp.rows.size());

    // column layout: structural | slack/surplus | artificial
    int num_slack = 0;
    for (const auto& r : lp.rows)
        if (r.sense != '=') ++num_slack;

    Tableau t;
    t.rows = m;
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    int next = n;
    for (int i = 0; i < m; ++i)
        if (lp.rows[i].sense != '=') slack_col[i] = next++;
    const int art_base = next;

    // rows normalized to nonnegative rhs
    std::vector<double> sign(m, 1.0);
    for (int i = 0; i < m; ++i)
        if (lp.rows[i].rhs < 0) sign[i] = -1.0;

    // decide artificials: a slack with +1 coefficient can start basic
    int num_art = 0;
    for (int i = 0; i < m; ++i) {
        const char sense = lp.rows[i].sense;
        double slack_coef = 0.0;
        if (sense == '<') slack_coef = 1.0 * sign[i];
        if (sense == '>') slack_coef = -1.0 * sign[i];
        if (sense == '=' || slack_coef < 0) art_col[i] = art_base + num_art++;
    }
    t.cols = art_base + num_art;
    t.a.assign(m, std::vector<double>(t.cols, 0.0));
    t.b.assign(m, 0.0);
    t.basis.assign(m, -1);

    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        for (const auto& [j, c] : row.coeffs) t.a[i][j] += sign[i] * c;
        t.b[i] = sign[i] * row.rhs;
        if (slack_col[i] >= 0)
            t.a[i][slack_col[i]] = (row.sense == '<' ? 1.0 : -1.0) * sign[i];
        if (art_col[i] >= 0) {
            t.a[i][art_col[i]] = 1.0;
            t.basis[i] = art_col[i];
        } else {
            t.basis[i] = slack_col[i];
        }
    }

    LpResult res;

    std::vector<char> allowed(t.cols, 1);
    if (num_art > 0) {
        // the working value tracks the negated objective, as in the z-row
        // of a standard tableau
        std::vector<double> cost(t.cols, 0.0);
        double value = 0.0;
        for (int j = art_base; j < t.cols; ++j) cost[j] = 1.0;
        // price out the artificial basis
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] >= art_base) {
                for (int j = 0; j < t.cols; ++j) cost[j] -= t.a[i][j];
                value -= t.b[i];
            }
        }
        if (!run_simplex(t, cost, value, allowed))
            throw Error("phase one of the simplex reported unbounded");
        if (-value > 1e-7) {
            res.status = LpResult::Status::infeasible;
            return res;
        }
        // drive leftover artificials out of the basis where possible
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < art_base) continue;
            int enter = -1;
            for (int j = 0; j < art_base; ++j)
                if (std::abs(t.a[i][j]) > kEps) {
                    enter = j;
                    break;
                }
            if (enter >= 0) t.pivot(i, enter);
        }
        for (int j = art_base; j < t.cols; ++j) allowed[j] = 0;
    }

    std::vector<double> cost(t.cols, 0.0);
    double value = 0.0;
    for (int j = 0; j < n; ++j) cost[j] = lp.objective[j];
    for (int i = 0; i < m; ++i) {
        const int bj = t.basis[i];
        if (bj < n && std::abs(cost[bj]) > 0) {
            const double f = cost[bj];
            for (int j = 0; j < t.cols; ++j) cost[j] -= f * t.a[i][j];
            value -= f * t.b[i];
        }
    }
    if (!run_simplex(t, cost, value, allowed)) {
        res.status = LpResult::Status::unbounded;
        return res;
    }

    res.status = LpResult::Status::optimal;
    res.objective = -value;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = t.b[i];

    // duals from the reduced costs of the slack columns; equality rows use
    // the artificial column (cost 0 in phase two)
    res.duals.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        if (slack_col[i] >= 0) {
            const double rc = cost[slack_col[i]];
            // slack coefficient was +/-1 before row sign normalization
            const double coef = (lp.rows[i].sense == '<' ? 1.0 : -1.0) * sign[i];
            res.duals[i] = -rc / coef * sign[i];
        } else if (art_col[i] >= 0) {
            res.duals[i] = -cost[art_col[i]] * sign[i];
        }
    }
    return res;
}

}  // namespace vpflow
