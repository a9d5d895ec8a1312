#!/usr/bin/env python3
"""File-based MILP/LP solve driver backed by scipy's HiGHS interface.

Reads a CPLEX-LP model file, solves it, and writes a text solution file:

    status optimal|feasible|infeasible|timeout|error
    objective <float>
    bound <float>
    nodes <int>            (integer solves, when reported)
    time <seconds>
    var <name> <value>     (zeros omitted)
    dual <row> <value>     (relaxations only; d objective / d rhs)

Batch mode: when --model starts with '@' the remainder names a file
listing one model path per line, and --solution names a directory that
receives one <model-stem>.sol per model.

--threads and --gap-abs are accepted for interface compatibility but not
forwarded; the backend exposes neither, and its default relative gap of
zero already solves to proven optimality.
"""

import argparse
import os
import re
import sys
import time

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

INF = float("inf")

TERM_RE = re.compile(r"([+-])\s*(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][A-Za-z0-9_.]*)")
REL_RE = re.compile(r"(<=|>=|=)\s*([+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\s*$")
NUM_RE = re.compile(r"^[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?$")


class Model:
    def __init__(self):
        self.var_names = []
        self.var_index = {}
        self.objective = {}
        self.rows = []  # (name, {var: coef}, sense, rhs)
        self.lower = {}
        self.upper = {}
        self.integer = set()

    def var(self, name):
        if name not in self.var_index:
            self.var_index[name] = len(self.var_names)
            self.var_names.append(name)
        return self.var_index[name]


def parse_terms(model, text):
    coeffs = {}
    text = text.strip()
    if text and text[0] not in "+-":
        text = "+ " + text
    for sign, coef, name in TERM_RE.findall(text):
        value = float(coef) if coef else 1.0
        if sign == "-":
            value = -value
        j = model.var(name)
        coeffs[j] = coeffs.get(j, 0.0) + value
    return coeffs


def parse_lp(path):
    model = Model()
    section = None
    pending = ""
    with open(path) as f:
        for raw in f:
            line = raw.split("\\")[0].strip()
            if not line:
                continue
            low = line.lower()
            if low in ("minimize", "minimise", "maximize", "maximise"):
                section = "obj"
                continue
            if low in ("subject to", "st", "s.t.", "such that"):
                section = "rows"
                continue
            if low == "bounds":
                section = "bounds"
                continue
            if low in ("generals", "general", "integers", "integer"):
                section = "generals"
                continue
            if low in ("binary", "binaries"):
                section = "binaries"
                continue
            if low == "end":
                break

            if section == "obj":
                text = line.split(":", 1)[1] if ":" in line else line
                for j, c in parse_terms(model, text).items():
                    model.objective[j] = model.objective.get(j, 0.0) + c
            elif section == "rows":
                pending += " " + line
                m = REL_RE.search(pending)
                if not m:
                    continue
                body = pending[: m.start()]
                pending = ""
                name = None
                if ":" in body:
                    name, body = body.split(":", 1)
                    name = name.strip()
                if name is None:
                    name = f"r{len(model.rows)}"
                model.rows.append((name, parse_terms(model, body), m.group(1), float(m.group(2))))
            elif section == "bounds":
                if low.endswith(" free"):
                    model.lower[model.var(line.rsplit(None, 1)[0])] = -INF
                    continue
                parts = [p.strip() for p in line.split("<=")]
                if len(parts) == 3:
                    j = model.var(parts[1])
                    model.lower[j] = float(parts[0])
                    model.upper[j] = float(parts[2])
                elif len(parts) == 2:
                    if NUM_RE.match(parts[0]):
                        model.lower[model.var(parts[1])] = float(parts[0])
                    else:
                        model.upper[model.var(parts[0])] = float(parts[1])
            elif section in ("generals", "binaries"):
                for name in line.split():
                    j = model.var(name)
                    model.integer.add(j)
                    if section == "binaries":
                        model.lower[j] = 0.0
                        model.upper[j] = 1.0
    return model


def build_matrix(model, rows):
    n = len(model.var_names)
    data, ri, ci = [], [], []
    for k, (_, coeffs, _, _) in enumerate(rows):
        for j, v in coeffs.items():
            ri.append(k)
            ci.append(j)
            data.append(v)
    return sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))


def solve_relaxation(model, lines):
    n = len(model.var_names)
    c = np.zeros(n)
    for j, v in model.objective.items():
        c[j] = v
    bounds = []
    for j in range(n):
        lo = model.lower.get(j, 0.0)
        hi = model.upper.get(j, INF)
        bounds.append((None if lo == -INF else lo, None if hi == INF else hi))

    eq_rows = [r for r in model.rows if r[2] == "="]
    ub_rows = [(name, coeffs, s, rhs) for (name, coeffs, s, rhs) in model.rows if s != "="]
    A_eq = build_matrix(model, eq_rows) if eq_rows else None
    b_eq = np.array([r[3] for r in eq_rows]) if eq_rows else None
    A_ub = None
    b_ub = None
    sign = []
    if ub_rows:
        A = build_matrix(model, ub_rows)
        sign = np.array([1.0 if s == "<=" else -1.0 for (_, _, s, _) in ub_rows])
        A_ub = sparse.diags(sign) @ A
        b_ub = sign * np.array([r[3] for r in ub_rows])

    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 0:
        lines.append("status optimal")
        lines.append(f"objective {float(res.fun):.12g}")
        lines.append(f"bound {float(res.fun):.12g}")
    elif res.status == 2:
        lines.append("status infeasible")
        return
    else:
        lines.append("status error")
        return
    for j, v in enumerate(res.x):
        if abs(v) > 1e-11:
            lines.append(f"var {model.var_names[j]} {v:.12g}")
    # duals as d objective / d rhs of the original rows
    if eq_rows and res.eqlin is not None:
        for (name, _, _, _), m in zip(eq_rows, res.eqlin.marginals):
            lines.append(f"dual {name} {float(m):.12g}")
    if ub_rows and res.ineqlin is not None:
        for (name, _, _, _), m, s in zip(ub_rows, res.ineqlin.marginals, sign):
            lines.append(f"dual {name} {float(m) * s:.12g}")


def solve_integer(model, args, lines):
    n = len(model.var_names)
    c = np.zeros(n)
    for j, v in model.objective.items():
        c[j] = v
    lb = np.zeros(n)
    ub = np.full(n, INF)
    for j, v in model.lower.items():
        lb[j] = v
    for j, v in model.upper.items():
        ub[j] = v
    lo, hi = [], []
    for _, _, sense, rhs in model.rows:
        lo.append(rhs if sense in (">=", "=") else -INF)
        hi.append(rhs if sense in ("<=", "=") else INF)
    A = build_matrix(model, model.rows)
    integrality = np.zeros(n)
    for j in model.integer:
        integrality[j] = 1

    res = milp(
        c,
        constraints=[LinearConstraint(A, np.array(lo), np.array(hi))],
        integrality=integrality,
        bounds=Bounds(lb, ub),
        options={"time_limit": args.time_limit, "mip_rel_gap": args.gap_rel},
    )
    has_x = res.x is not None
    if res.status == 0:
        lines.append("status optimal")
    elif res.status == 1:
        lines.append("status feasible" if has_x else "status timeout")
    elif res.status == 2:
        lines.append("status infeasible")
    else:
        lines.append("status error")
    if has_x:
        lines.append(f"objective {float(res.fun):.12g}")
    bound = getattr(res, "mip_dual_bound", None)
    if bound is not None:
        lines.append(f"bound {float(bound):.12g}")
    elif has_x:
        lines.append(f"bound {float(res.fun):.12g}")
    nodes = getattr(res, "mip_node_count", None)
    if nodes is not None:
        lines.append(f"nodes {int(nodes)}")
    if has_x:
        for j, v in enumerate(res.x):
            if abs(v) > 1e-11:
                lines.append(f"var {model.var_names[j]} {v:.12g}")


def solve_one(model_path, solution_path, args):
    start = time.time()
    lines = []
    code = 0
    try:
        model = parse_lp(model_path)
        if args.relax:
            solve_relaxation(model, lines)
        else:
            solve_integer(model, args, lines)
    except Exception as exc:  # noqa: BLE001
        lines = ["status error"]
        print(f"driver error on {model_path}: {exc}", file=sys.stderr)
        code = 0  # the status line carries the failure; exit 0 keeps batches going
    lines.append(f"time {time.time() - start:.6f}")
    with open(solution_path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return code


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", required=True, help="LP file, or @list for batch mode")
    ap.add_argument("--solution", required=True, help="solution file, or directory in batch mode")
    ap.add_argument("--time-limit", type=float, default=3600.0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--gap-abs", type=float, default=1.0 - 1e-5)
    ap.add_argument("--gap-rel", type=float, default=0.0)
    ap.add_argument("--relax", action="store_true", help="solve the linear relaxation")
    args = ap.parse_args()

    if args.model.startswith("@"):
        with open(args.model[1:]) as f:
            models = [line.strip() for line in f if line.strip()]
        os.makedirs(args.solution, exist_ok=True)
        rc = 0
        for m in models:
            stem = os.path.splitext(os.path.basename(m))[0]
            rc |= solve_one(m, os.path.join(args.solution, stem + ".sol"), args)
        return rc
    return solve_one(args.model, args.solution, args)


if __name__ == "__main__":
    sys.exit(main())
