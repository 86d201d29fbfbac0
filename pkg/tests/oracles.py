"""Independent reference computations used only by the tests."""

from fractions import Fraction
from itertools import combinations

import numpy as np


def all_simple_paths(g, s, t):
    nbrs = g.neighbors()
    out, stack = [], [(s, [s])]
    while stack:
        u, p = stack.pop()
        if u == t:
            out.append(p)
            continue
        for v in nbrs[u]:
            if v not in p:
                stack.append((int(v), p + [int(v)]))
    return out


def path_length(g, p, metric):
    if metric == "hop":
        return len(p) - 1
    return sum(1.0 / g.weights[a, b] for a, b in zip(p, p[1:]))


def brute_betweenness_closeness(g, metric="hop"):
    """Enumerate every simple path, keep the shortest, count pass-throughs."""
    n = g.n
    betw = [Fraction(0)] * n if metric == "hop" else [0.0] * n
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0)
    for l, j in combinations(range(n), 2):
        paths = all_simple_paths(g, l, j)
        if not paths:
            continue
        lens = [path_length(g, p, metric) for p in paths]
        best = min(lens)
        shortest = [p for p, L in zip(paths, lens) if abs(L - best) <= 1e-12 * max(best, 1)]
        dist[l, j] = dist[j, l] = best
        for i in range(n):
            through = sum(1 for p in shortest if i in p[1:-1])
            if through:
                betw[i] += Fraction(through, len(shortest)) if metric == "hop" else through / len(shortest)
    tot = np.where(np.isfinite(dist), dist, 0).sum(axis=1)
    clos = np.array([1.0 / x if x > 0 else 0.0 for x in tot])
    return np.array([float(b) for b in betw]), clos, dist


def brute_path_counts(g, source, metric="hop"):
    counts = np.zeros(g.n)
    dist = np.full(g.n, np.inf)
    dist[source], counts[source] = 0, 1
    for t in range(g.n):
        if t == source:
            continue
        paths = all_simple_paths(g, source, t)
        if paths:
            lens = [path_length(g, p, metric) for p in paths]
            dist[t] = min(lens)
            counts[t] = sum(1 for L in lens if abs(L - dist[t]) <= 1e-12 * max(dist[t], 1))
    return dist, counts


def mve_sdp(points):
    """Solve max log det(Q) s.t. ||Q y_i - b|| <= 1 directly as a conic program."""
    import cvxpy as cp

    X = np.asarray(points, dtype=float)
    N, d = X.shape
    Q = cp.Variable((d, d), PSD=True)
    b = cp.Variable(d)
    cons = [cp.norm(Q @ X[i] - b, 2) <= 1 for i in range(N)]
    prob = cp.Problem(cp.Maximize(cp.log_det(Q)), cons)
    prob.solve(solver=cp.CLARABEL)
    Qv = 0.5 * (Q.value + Q.value.T)
    c = np.linalg.solve(Qv, b.value)
    return Qv @ Qv, c


def shrink_check(P, center, X, factor=1e-3):
    """True when tightening P along its stiffest axis pushes some point outside."""
    w, V = np.linalg.eigh(P)
    v = V[:, -1]
    P2 = P + factor * w[-1] * np.outer(v, v)
    d = X - center
    return bool(np.any(np.einsum("ij,jk,ik->i", d, P2, d) > 1.0))
