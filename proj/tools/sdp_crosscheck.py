#!/usr/bin/env python3
"""Solve the vector relaxation of a MAX2CSP instance file as a full SDP.

Independent of the C++ solver: builds the Gram matrix of all (i, a)
vectors with cvxpy and prints the optimum. Usage:

    sdp_crosscheck.py INSTANCE [--scope atoms|edges|all]
"""
import argparse
import itertools
import sys

import cvxpy as cp
import numpy as np


def read_instance(path):
    lines = [ln.split("#", 1)[0].split() for ln in open(path)]
    lines = [ln for ln in lines if ln]
    if lines[0] != ["MAX2CSP", "1"]:
        sys.exit("not a MAX2CSP 1 file")
    _, n, _, R, _, m = lines[1]
    n, R = int(n), int(R)
    cons = []
    for tok in lines[2:]:
        i, j, w, k = int(tok[1]), int(tok[2]), float(tok[3]), int(tok[4])
        vals = list(map(int, tok[5:]))
        cons.append((i, j, w, list(zip(vals[0::2], vals[1::2]))))
    assert len(cons) == int(m)
    return n, R, cons


def solve(n, R, cons, scope):
    N = n * R
    W = np.zeros((N, N))
    for i, j, w, rel in cons:
        for a, b in rel:
            W[i * R + a, j * R + b] += w
    X = cp.Variable((N, N), PSD=True)
    mass = np.zeros((n, N))
    for i in range(n):
        mass[i, i * R:(i + 1) * R] = 1
    c = [mass @ cp.diag(X) == 1]
    ortho = [(i * R + a, i * R + b) for i in range(n) for a in range(R) for b in range(a + 1, R)]
    r, q = map(np.array, zip(*ortho))
    c.append(X[r, q] == 0)
    if scope == "atoms":
        pairs = {(i * R + a, j * R + b) for i, j, _, rel in cons for a, b in rel}
    else:
        vp = {(i, j) for i, j, _, _ in cons} if scope == "edges" else set(itertools.combinations(range(n), 2))
        pairs = {(i * R + a, j * R + b) for i, j in vp for a in range(R) for b in range(R)}
    if pairs:
        r, q = map(np.array, zip(*sorted(pairs)))
        c.append(X[r, q] >= 0)
    prob = cp.Problem(cp.Maximize(cp.sum(cp.multiply(W, X))), c)
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=500000)
    return prob.value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("instance")
    ap.add_argument("--scope", default="edges", choices=["atoms", "edges", "all"])
    args = ap.parse_args()
    n, R, cons = read_instance(args.instance)
    print(f"sdp {solve(n, R, cons, args.scope):.9f}")


if __name__ == "__main__":
    main()
