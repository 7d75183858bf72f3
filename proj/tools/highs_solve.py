#!/usr/bin/env python3
"""Solve a free-format MPS file with HiGHS (through scipy) and write the
plain solution format read by flowgraph:

    status <optimal|infeasible|unbounded>
    obj <value>
    <column> <value>
    ...

usage: highs_solve.py INPUT.mps OUTPUT.sol [random_seed=N]
"""
import math
import sys
import warnings

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix, vstack


def read_mps(path):
    rows = {}  # name -> type
    row_order = []
    obj_name = None
    cols = {}
    col_order = []
    entries = []  # (row, col, value)
    cost = {}
    rhs = {}
    ranges = {}
    lower = {}
    upper = {}
    integer = set()
    in_int = False
    section = None
    with open(path) as f:
        for raw in f:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            tok = line.split()
            if section == "ROWS":
                kind, name = tok
                if kind == "N":
                    if obj_name is None:
                        obj_name = name
                    continue
                rows[name] = kind
                row_order.append(name)
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    in_int = tok[2] == "'INTORG'"
                    continue
                col = tok[0]
                if col not in cols:
                    cols[col] = len(col_order)
                    col_order.append(col)
                    if in_int:
                        integer.add(col)
                for k in range(1, len(tok) - 1, 2):
                    row, val = tok[k], float(tok[k + 1])
                    if row == obj_name:
                        cost[col] = cost.get(col, 0.0) + val
                    else:
                        entries.append((row, col, val))
            elif section == "RHS":
                for k in range(1, len(tok) - 1, 2):
                    rhs[tok[k]] = float(tok[k + 1])
            elif section == "RANGES":
                for k in range(1, len(tok) - 1, 2):
                    ranges[tok[k]] = float(tok[k + 1])
            elif section == "BOUNDS":
                kind, col = tok[0], tok[2]
                val = float(tok[3]) if len(tok) > 3 else None
                if kind == "UP":
                    upper[col] = val
                elif kind == "LO":
                    lower[col] = val
                elif kind == "FX":
                    lower[col] = upper[col] = val
                elif kind == "FR":
                    lower[col], upper[col] = -math.inf, math.inf
                elif kind == "MI":
                    lower[col] = -math.inf
                elif kind == "PL":
                    upper[col] = math.inf
                elif kind == "BV":
                    lower[col], upper[col] = 0.0, 1.0
    return dict(rows=rows, row_order=row_order, cols=cols, col_order=col_order, entries=entries,
                cost=cost, rhs=rhs, ranges=ranges, lower=lower, upper=upper)


def solve(mps, seed):
    row_index = {name: i for i, name in enumerate(mps["row_order"])}
    n = len(mps["col_order"])
    m = len(row_index)
    r = [row_index[e[0]] for e in mps["entries"]]
    c = [mps["cols"][e[1]] for e in mps["entries"]]
    v = [e[2] for e in mps["entries"]]
    A = csr_matrix((v, (r, c)), shape=(m, n))
    lo = np.full(m, -np.inf)
    hi = np.full(m, np.inf)
    for name, i in row_index.items():
        kind = mps["rows"][name]
        b = mps["rhs"].get(name, 0.0)
        rng = mps["ranges"].get(name)
        if kind == "E":
            lo[i] = hi[i] = b
            if rng is not None:
                if rng > 0:
                    hi[i] = b + rng
                else:
                    lo[i] = b + rng
        elif kind == "L":
            hi[i] = b
            if rng is not None:
                lo[i] = b - abs(rng)
        elif kind == "G":
            lo[i] = b
            if rng is not None:
                hi[i] = b + abs(rng)
    cost = np.array([mps["cost"].get(col, 0.0) for col in mps["col_order"]])
    bounds = [(mps["lower"].get(col, 0.0), mps["upper"].get(col, math.inf)) for col in mps["col_order"]]
    bounds = [(None if math.isinf(a) else a, None if math.isinf(b) else b) for a, b in bounds]

    # linprog wants A_ub x <= b_ub and A_eq x = b_eq.
    eq = np.where(lo == hi)[0]
    up = np.where((lo != hi) & np.isfinite(hi))[0]
    dn = np.where((lo != hi) & np.isfinite(lo))[0]
    A_ub = vstack([A[up], -A[dn]]) if len(up) + len(dn) else None
    b_ub = np.concatenate([hi[up], -lo[dn]]) if len(up) + len(dn) else None
    options = {"presolve": True}
    if seed is not None:
        options["random_seed"] = seed
    try:
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A[eq] if len(eq) else None,
                      b_eq=hi[eq] if len(eq) else None, bounds=bounds, method="highs", options=options)
    except TypeError:
        options.pop("random_seed", None)
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A[eq] if len(eq) else None,
                      b_eq=hi[eq] if len(eq) else None, bounds=bounds, method="highs", options=options)
    return res


def main(argv):
    warnings.simplefilter("ignore")
    if len(argv) < 3:
        sys.stderr.write(__doc__)
        return 2
    seed = None
    for arg in argv[3:]:
        if arg.startswith("random_seed="):
            seed = int(arg.split("=", 1)[1])
    mps = read_mps(argv[1])
    res = solve(mps, seed)
    with open(argv[2], "w") as out:
        if res.status == 0:
            out.write("status optimal\n")
            out.write("obj %r\n" % float(res.fun))
            for name, val in zip(mps["col_order"], res.x):
                out.write("%s %r\n" % (name, float(val)))
        elif res.status == 2:
            out.write("status infeasible\nobj 0\n")
        elif res.status == 3:
            out.write("status unbounded\nobj 0\n")
        else:
            sys.stderr.write("highs: %s\n" % res.message)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
