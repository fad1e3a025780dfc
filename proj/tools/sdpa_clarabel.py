#!/usr/bin/env python3
"""SDPA-compatible front end for the Clarabel interior-point solver.

Accepts the command line of the SDPA family (``-ds PROBLEM -o RESULT [-p PARAM]``),
reads a sparse SDPA problem

    minimize   c^T x
    subject to F(x) = sum_i F_i x_i - F_0  is PSD (blockwise)

and writes a result file carrying ``phase.value``, ``objValPrimal`` and
``objValDual`` in SDPA layout. The dual objective is F_0 . Y for the dual
matrix Y returned by the solver, i.e. the lower-bound side.
"""

import argparse
import math
import re
import sys
import time

import clarabel
import numpy as np
import scipy.sparse as sp


class SdpaProblem:
    def __init__(self, m, block_sizes, c, entries):
        self.m = m
        self.block_sizes = block_sizes
        self.c = c
        # entries[b] : list of (var, row, col, value), 0-based row <= col
        self.entries = entries


def read_sdpa_sparse(path):
    with open(path) as fh:
        lines = fh.readlines()
    body = []
    for line in lines:
        stripped = line.strip()
        if not body and (not stripped or stripped[0] in "\"*"):
            continue
        body.append(line)
    tokens = []
    for line in body:
        tokens.extend(t for t in re.split(r"[\s,{}()]+", line) if t)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("truncated SDPA file")
        pos += 1
        return tokens[pos - 1]

    m = int(take())
    nblock = int(take())
    block_sizes = [int(take()) for _ in range(nblock)]
    c = np.array([float(take()) for _ in range(m)])
    entries = [[] for _ in range(nblock)]
    while pos < len(tokens):
        var, blk, row, col = (int(take()) for _ in range(4))
        val = float(take())
        if not 0 <= var <= m or not 1 <= blk <= nblock:
            raise ValueError(f"entry index out of range: {var} {blk} {row} {col}")
        if row > col:
            row, col = col, row
        entries[blk - 1].append((var, row - 1, col - 1, val))
    return SdpaProblem(m, block_sizes, c, entries)


def read_params(path):
    params = {}
    if not path:
        return params
    with open(path) as fh:
        for line in fh:
            match = re.match(r"\s*([-+0-9.eE]+)\s+(?:unsigned int|double|int)?\s*([A-Za-z.]+)", line)
            if match:
                params[match.group(2)] = float(match.group(1))
                continue
            match = re.match(r"\s*([A-Za-z.]+)\s*=\s*([-+0-9.eE]+)", line)
            if match:
                params[match.group(1)] = float(match.group(2))
    return params


def svec_index(dim, row, col):
    # Clarabel stacks the upper triangle column by column.
    return col * (col + 1) // 2 + row


def build(problem):
    """Returns A, b and cones for  A x + s = b, s in K, with s = F(x).

    Each PSD block is rescaled as D F D with D = diag(d) and each diagonal
    row by a positive factor, which leaves the feasible set and the dual
    objective unchanged."""
    rows, cols, vals = [], [], []
    b_parts, cones = [], []
    offset = 0
    for blk, size in enumerate(problem.block_sizes):
        entries = problem.entries[blk]
        dim = abs(size)
        row_scale = np.zeros(dim)
        for var, r, col, val in entries:
            if var == 0:
                continue
            row_scale[r] = max(row_scale[r], abs(val))
            row_scale[col] = max(row_scale[col], abs(val))
        row_scale[row_scale == 0] = 1.0
        if size < 0:
            d = 1.0 / row_scale
            length = dim
            b = np.zeros(length)
            for var, r, col, val in entries:
                if r != col:
                    raise ValueError("off-diagonal entry in a diagonal block")
                if var == 0:
                    b[r] -= val * d[r]
                else:
                    rows.append(offset + r)
                    cols.append(var - 1)
                    vals.append(-val * d[r])
            cones.append(clarabel.NonnegativeConeT(length))
        else:
            d = 1.0 / np.sqrt(row_scale)
            length = dim * (dim + 1) // 2
            b = np.zeros(length)
            for var, r, col, val in entries:
                k = svec_index(dim, r, col)
                scaled = val * d[r] * d[col] * (math.sqrt(2.0) if r != col else 1.0)
                if var == 0:
                    b[k] -= scaled
                else:
                    rows.append(offset + k)
                    cols.append(var - 1)
                    vals.append(-scaled)
            cones.append(clarabel.PSDTriangleConeT(dim))
        b_parts.append(b)
        offset += length
    A = sp.csc_matrix((vals, (rows, cols)), shape=(offset, problem.m))
    b = np.concatenate(b_parts) if b_parts else np.zeros(0)
    return A, b, cones


def solve(problem, params):
    A, b, cones = build(problem)
    c = np.array(problem.c, dtype=float)
    cscale = float(np.max(np.abs(c))) if c.size and np.any(c) else 1.0
    P = sp.csc_matrix((problem.m, problem.m))
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.max_iter = int(params.get("maxIteration", 400))
    eps = params.get("epsilonStar", 1e-9)
    settings.tol_gap_abs = eps
    settings.tol_gap_rel = eps
    settings.tol_feas = eps
    settings.tol_ktratio = 1e-7
    settings.presolve_enable = False
    solver = clarabel.DefaultSolver(P, c / cscale, A, b, cones, settings)
    start = time.time()
    sol = solver.solve()
    elapsed = time.time() - start
    status = str(sol.status)
    primal = float(c @ np.array(sol.x)) if sol.x is not None else float("nan")
    # Dual objective of min q'x s.t. Ax + s = b, s in K is -b'z; scaled back.
    z = np.array(sol.z)
    dual = float(-(b @ z)) * cscale
    return status, primal, dual, sol.iterations, elapsed, np.array(sol.x)


PHASE = {
    "Solved": "pdOPT",
    "AlmostSolved": "pdFEAS",
    "PrimalInfeasible": "pINF_dFEAS",
    "AlmostPrimalInfeasible": "pINF_dFEAS",
    "DualInfeasible": "pFEAS_dINF",
    "AlmostDualInfeasible": "pFEAS_dINF",
}


def write_result(path, phase, primal, dual, iterations, elapsed, x):
    with open(path, "w") as fh:
        fh.write("SDPA-compatible result (Clarabel %s)\n" % clarabel.__version__)
        fh.write("phase.value  = %s\n" % phase)
        fh.write("   Iteration = %d\n" % iterations)
        fh.write("objValPrimal = %+.16e\n" % primal)
        fh.write("objValDual   = %+.16e\n" % dual)
        fh.write("total time   = %.3f\n" % elapsed)
        fh.write("xVec = \n{%s}\n" % ",".join("%+.16e" % v for v in x))


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-ds", "-dd", dest="problem", required=True)
    parser.add_argument("-o", dest="result", required=True)
    parser.add_argument("-p", dest="params", default=None)
    args = parser.parse_args(argv)

    problem = read_sdpa_sparse(args.problem)
    params = read_params(args.params)
    status, primal, dual, iterations, elapsed, x = solve(problem, params)
    phase = PHASE.get(status, "noINFO")
    write_result(args.result, phase, primal, dual, iterations, elapsed, x)
    print("phase.value  = %s" % phase)
    print("objValPrimal = %+.16e" % primal)
    print("objValDual   = %+.16e" % dual)
    print("status       = %s, iterations %d, %.3fs" % (status, iterations, elapsed))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
