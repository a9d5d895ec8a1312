#include "vpflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "vpflow/errors.hpp"

namespace vpflow {

int MilpModel::add_var(MilpVar v) {
    const int idx = static_cast<int>(vars.size());
    auto [it, inserted] = var_index.emplace(v.name, idx);
    if (!inserted) throw Error("duplicate variable name " + v.name);
    vars.push_back(std::move(v));
    arc_refs.push_back({});
    return idx;
}

namespace {

std::string label_tag(const Label& l) {
    std::string s;
    for (std::size_t d = 0; d < l.size(); ++d) {
        if (d) s += ".";
        s += std::to_string(l[d]);
    }
    return s;
}

}  // namespace

MilpModel build_arcflow_model(const ArcFlowGraph& g, const VbpInstance& inst) {
    if (g.item_count != inst.item_count())
        throw Error("graph and instance disagree on the item count");
    const int m = inst.item_count();
    MilpModel model;

    const std::int64_t total = inst.total_demand();
    const int z = model.add_var({"Z", 0.0, static_cast<double>(total), true});
    model.objective = {{z, 1.0}};

    std::vector<int> arc_var(g.arc_count());
    for (int a = 0; a < g.arc_count(); ++a) {
        const auto& arc = g.arcs[a];
        MilpVar v;
        v.name = "F_" + std::to_string(arc.tail) + "_" + std::to_string(arc.head) + "_" +
                 std::to_string(arc.item);
        v.lower = 0.0;
        v.upper = arc.item == 0 ? static_cast<double>(total)
                                : static_cast<double>(inst.items[arc.item - 1].demand);
        v.integral = true;
        const int idx = model.add_var(std::move(v));
        model.arc_refs[idx] = {g.labels[arc.tail], g.labels[arc.head], arc.item, a};
        arc_var[a] = idx;
    }

    // conservation at every node, the redundant target row included
    for (int node = 0; node < g.node_count(); ++node) {
        MilpRow row;
        row.name = "C_" + std::to_string(node);
        row.sense = RowSense::eq;
        row.rhs = 0.0;
        std::map<int, double> coef;
        for (int a = 0; a < g.arc_count(); ++a) {
            if (g.arcs[a].head == node) coef[arc_var[a]] += 1.0;
            if (g.arcs[a].tail == node) coef[arc_var[a]] -= 1.0;
        }
        if (node == g.source) coef[z] += 1.0;
        if (node == g.target) coef[z] -= 1.0;
        for (const auto& [idx, c] : coef)
            if (c != 0.0) row.coeffs.emplace_back(idx, c);
        model.rows.push_back(std::move(row));
    }

    for (int i = 0; i < m; ++i) {
        MilpRow row;
        row.name = "D_" + std::to_string(i + 1);
        row.sense = inst.j_exact.count(i) ? RowSense::eq : RowSense::ge;
        row.rhs = static_cast<double>(inst.items[i].demand);
        for (int a = 0; a < g.arc_count(); ++a)
            if (g.arcs[a].item == i + 1) row.coeffs.emplace_back(arc_var[a], 1.0);
        if (row.coeffs.empty())
            model.warnings.push_back("item " + inst.items[i].external_id +
                                     " has no arc in the graph; its demand row is unsatisfiable");
        model.rows.push_back(std::move(row));
    }
    return model;
}

std::int64_t first_fit_decreasing(const VbpInstance& inst) {
    const auto order = canonical_order(inst);
    std::vector<std::vector<std::int64_t>> bins;  // remaining capacity per bin
    std::int64_t count = 0;
    for (int r = 0; r < inst.item_count(); ++r) {
        const auto& it = inst.items[order.permutation[r]];
        for (std::int64_t k = 0; k < it.demand; ++k) {
            bool placed = false;
            for (auto& bin : bins) {
                bool fits = true;
                for (int d = 0; d < inst.dim_count; ++d)
                    if (bin[d] < it.weights[d]) {
                        fits = false;
                        break;
                    }
                if (fits) {
                    for (int d = 0; d < inst.dim_count; ++d) bin[d] -= it.weights[d];
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                bins.push_back(inst.capacities);
                auto& bin = bins.back();
                for (int d = 0; d < inst.dim_count; ++d) bin[d] -= it.weights[d];
                ++count;
            }
        }
    }
    return count;
}

MilpModel build_assignment_model(const VbpInstance& inst, std::int64_t bin_bound) {
    const std::int64_t K = bin_bound > 0 ? bin_bound : first_fit_decreasing(inst);
    if (K < 1) throw Error("assignment model needs at least one bin");
    const int m = inst.item_count();
    MilpModel model;
    std::vector<int> y(K);
    for (std::int64_t k = 0; k < K; ++k)
        y[k] = model.add_var({"Y_" + std::to_string(k + 1), 0.0, 1.0, true});
    std::vector<std::vector<int>> x(m, std::vector<int>(K));
    for (int i = 0; i < m; ++i)
        for (std::int64_t k = 0; k < K; ++k)
            x[i][k] = model.add_var({"X_" + std::to_string(i + 1) + "_" + std::to_string(k + 1),
                                     0.0, static_cast<double>(inst.items[i].demand), true});
    for (std::int64_t k = 0; k < K; ++k) model.objective.emplace_back(y[k], 1.0);

    for (int i = 0; i < m; ++i) {
        MilpRow row;
        row.name = "D_" + std::to_string(i + 1);
        row.sense = RowSense::ge;
        row.rhs = static_cast<double>(inst.items[i].demand);
        for (std::int64_t k = 0; k < K; ++k) row.coeffs.emplace_back(x[i][k], 1.0);
        model.rows.push_back(std::move(row));
    }
    for (std::int64_t k = 0; k < K; ++k) {
        for (int d = 0; d < inst.dim_count; ++d) {
            MilpRow row;
            row.name = "K_" + std::to_string(k + 1) + "_" + std::to_string(d + 1);
            row.sense = RowSense::le;
            row.rhs = 0.0;
            for (int i = 0; i < m; ++i)
                if (inst.items[i].weights[d] != 0)
                    row.coeffs.emplace_back(x[i][k], static_cast<double>(inst.items[i].weights[d]));
            row.coeffs.emplace_back(y[k], -static_cast<double>(inst.capacities[d]));
            model.rows.push_back(std::move(row));
        }
    }
    return model;
}

namespace {

std::string num(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

void write_lp(const MilpModel& model, std::ostream& out) {
    out << "Minimize\n obj:";
    for (const auto& [idx, c] : model.objective)
        out << (c >= 0 ? " + " : " - ") << num(std::abs(c)) << " " << model.vars[idx].name;
    out << "\nSubject To\n";
    for (const auto& row : model.rows) {
        out << " " << row.name << ":";
        for (const auto& [idx, c] : row.coeffs)
            out << (c >= 0 ? " + " : " - ") << num(std::abs(c)) << " " << model.vars[idx].name;
        switch (row.sense) {
            case RowSense::le: out << " <= "; break;
            case RowSense::ge: out << " >= "; break;
            case RowSense::eq: out << " = "; break;
        }
        out << num(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const auto& v : model.vars) {
        if (v.upper >= kInfinity) {
            if (v.lower != 0.0) out << " " << num(v.lower) << " <= " << v.name << "\n";
            else out << " 0 <= " << v.name << "\n";
        } else {
            out << " " << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << "\n";
        }
    }
    bool any_int = false;
    for (const auto& v : model.vars) any_int |= v.integral;
    if (any_int) {
        out << "Generals\n";
        for (const auto& v : model.vars)
            if (v.integral) out << " " << v.name << "\n";
    }
    out << "End\n";
}

void write_mps(const MilpModel& model, std::ostream& out, bool fixed) {
    auto pad = [&](const std::string& s, std::size_t width) {
        if (!fixed) return s;
        std::string t = s;
        if (t.size() < width) t.append(width - t.size(), ' ');
        return t;
    };
    const char* sep = fixed ? "" : " ";
    out << "NAME" << (fixed ? "          " : " ") << "VPFLOW\n";
    out << "ROWS\n";
    out << " N  COST\n";
    for (const auto& row : model.rows) {
        char s = row.sense == RowSense::le ? 'L' : row.sense == RowSense::ge ? 'G' : 'E';
        out << " " << s << "  " << row.name << "\n";
    }
    out << "COLUMNS\n";
    // gather coefficients per variable in row order
    std::vector<std::vector<std::pair<std::string, double>>> cols(model.vars.size());
    for (const auto& [idx, c] : model.objective) cols[idx].emplace_back("COST", c);
    for (const auto& row : model.rows)
        for (const auto& [idx, c] : row.coeffs) cols[idx].emplace_back(row.name, c);
    bool in_int = false;
    int marker = 0;
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        const auto& v = model.vars[j];
        if (v.integral != in_int) {
            out << "    MARKER" << std::string(fixed ? 17 : 1, ' ') << "'MARKER'"
                << std::string(fixed ? 17 : 1, ' ')
                << (v.integral ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = v.integral;
            ++marker;
        }
        for (const auto& [rname, c] : cols[j]) {
            out << "    " << pad(v.name, 10) << sep << pad(rname, 10) << sep << num(c) << "\n";
        }
    }
    if (in_int)
        out << "    MARKER" << std::string(fixed ? 17 : 1, ' ') << "'MARKER'"
            << std::string(fixed ? 17 : 1, ' ') << "'INTEND'\n";
    out << "RHS\n";
    for (const auto& row : model.rows)
        if (row.rhs != 0.0)
            out << "    " << pad("RHS", 10) << sep << pad(row.name, 10) << sep << num(row.rhs)
                << "\n";
    out << "BOUNDS\n";
    for (const auto& v : model.vars) {
        if (v.lower != 0.0)
            out << " LO " << pad("BND", 10) << sep << pad(v.name, 10) << sep << num(v.lower)
                << "\n";
        if (v.upper < kInfinity)
            out << " UP " << pad("BND", 10) << sep << pad(v.name, 10) << sep << num(v.upper)
                << "\n";
        else if (v.integral)
            out << " PL " << pad("BND", 10) << sep << pad(v.name, 10) << "\n";
    }
    out << "ENDATA\n";
}

}  // namespace

void write_model(const MilpModel& model, std::ostream& out, ModelFormat format) {
    if (format == ModelFormat::lp) {
        write_lp(model, out);
        return;
    }
    bool fits_fixed = true;
    for (const auto& v : model.vars) fits_fixed &= v.name.size() <= 8;
    for (const auto& r : model.rows) fits_fixed &= r.name.size() <= 8;
    write_mps(model, out, fits_fixed);
}

void write_model(MilpModel& model, std::ostream& out, ModelFormat format) {
    if (format == ModelFormat::mps) {
        bool fits_fixed = true;
        for (const auto& v : model.vars) fits_fixed &= v.name.size() <= 8;
        for (const auto& r : model.rows) fits_fixed &= r.name.size() <= 8;
        if (!fits_fixed)
            model.warnings.push_back("names exceed the fixed MPS field width; writing free MPS");
    }
    write_model(static_cast<const MilpModel&>(model), out, format);
}

void write_annotations(const MilpModel& model, std::ostream& out) {
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        const auto& ref = model.arc_refs[j];
        if (ref.item < 0) continue;
        out << model.vars[j].name << " " << label_tag(ref.tail) << " " << label_tag(ref.head)
            << " " << ref.item << "\n";
    }
}

std::int64_t ceil_with_tolerance(double x, double tolerance) {
    return static_cast<std::int64_t>(std::ceil(x - tolerance));
}

GapReport lp_bound_report(double z_lp, std::int64_t z_ip, double tolerance) {
    if (static_cast<double>(z_ip) < z_lp - tolerance)
        throw ConsistencyError("integer optimum " + std::to_string(z_ip) +
                               " lies below the linear bound " + std::to_string(z_lp));
    GapReport rep;
    rep.gap = static_cast<double>(z_ip) - z_lp;
    const std::int64_t rounded_up = ceil_with_tolerance(z_lp, tolerance);
    if (std::abs(static_cast<double>(z_ip) - z_lp) <= tolerance)
        rep.cls = GapClass::ip;
    else if (z_ip == rounded_up)
        rep.cls = GapClass::irup;
    else if (z_ip == rounded_up + 1)
        rep.cls = GapClass::mirup;
    else
        rep.cls = GapClass::non_mirup;
    return rep;
}

const char* gap_class_name(GapClass cls) {
    switch (cls) {
        case GapClass::ip: return "IP";
        case GapClass::irup: return "IRUP";
        case GapClass::mirup: return "MIRUP";
        case GapClass::non_mirup: return "NON-MIRUP";
    }
    return "?";
}

}  // namespace vpflow
