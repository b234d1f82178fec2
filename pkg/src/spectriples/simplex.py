"""Dense tableau simplex for the cut linear programs.

Solves  max c.y  subject to  G y <= h  with y free, by splitting
y = u - v (u, v >= 0).  All right-hand sides this package generates are
strictly positive (unit cut rows, positive box rows), so the slack basis
is feasible and no phase-one is needed.

Pivot rules: "bland" (smallest index, provably cycle-free), "dantzig"
(most negative reduced cost), and the default "hybrid" which runs Dantzig
until the objective stalls and then switches permanently to Bland --
keeping the anti-cycling guarantee without Bland's slow typical case.
Leaving-row ties always break toward the smallest basis index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IterationLimitError

PIVOT_TOL = 1e-9
STALL_LIMIT = 40


@dataclass
class LPResult:
    status: str          # "optimal" | "unbounded"
    y: np.ndarray | None
    value: float | None
    pivots: int


def solve_max(c, g, h, pivot_rule="hybrid", max_pivots=None, tol=PIVOT_TOL):
    c = np.asarray(c, dtype=np.float64).ravel()
    n = c.size
    g = np.asarray(g, dtype=np.float64).reshape(-1, n) if np.size(g) else np.zeros((0, n))
    m = g.shape[0]
    h = np.asarray(h, dtype=np.float64).ravel()
    if h.size != m:
        raise ValueError("rhs length mismatch")
    if m and h.min() <= 0:
        raise ValueError("rhs must be strictly positive (slack basis feasibility)")
    if m == 0:
        if np.max(np.abs(c), initial=0.0) <= tol:
            return LPResult("optimal", np.zeros(n), 0.0, 0)
        return LPResult("unbounded", None, None, 0)
    if max_pivots is None:
        max_pivots = 200 * (m + n) + 2000

    ncols = 2 * n + m
    tab = np.zeros((m + 1, ncols + 1))
    tab[:m, :n] = g
    tab[:m, n:2 * n] = -g
    tab[:m, 2 * n:ncols] = np.eye(m)
    tab[:m, -1] = h
    tab[m, :n] = -c
    tab[m, n:2 * n] = c

    basis = np.arange(2 * n, 2 * n + m)
    use_bland = pivot_rule == "bland"
    stall = 0
    last_obj = 0.0
    pivots = 0
    obj_row = tab[m]

    while True:
        if use_bland:
            enter = -1
            for j in range(ncols):
                if obj_row[j] < -tol:
                    enter = j
                    break
        else:
            enter = int(np.argmin(obj_row[:ncols]))
            if obj_row[enter] >= -tol:
                enter = -1
        if enter < 0:
            y = np.zeros(n)
            for i, b in enumerate(basis):
                if b < n:
                    y[b] += tab[i, -1]
                elif b < 2 * n:
                    y[b - n] -= tab[i, -1]
            return LPResult("optimal", y, float(c @ y), pivots)

        col = tab[:m, enter]
        pos = col > tol
        if not np.any(pos):
            return LPResult("unbounded", None, None, pivots)
        ratios = np.full(m, np.inf)
        ratios[pos] = tab[:m, -1][pos] / col[pos]
        best = ratios.min()
        # ties break toward the smallest basis index (Bland-compatible)
        cand = np.flatnonzero(ratios <= best + tol * (1.0 + abs(best)))
        leave = int(cand[np.argmin(basis[cand])])

        piv = tab[leave, enter]
        tab[leave] /= piv
        factor = tab[:, enter].copy()
        factor[leave] = 0.0
        tab -= np.outer(factor, tab[leave])
        basis[leave] = enter
        pivots += 1

        if pivot_rule == "hybrid" and not use_bland:
            obj = -tab[m, -1]
            if obj > last_obj + tol:
                stall = 0
                last_obj = obj
            else:
                stall += 1
                if stall >= STALL_LIMIT:
                    use_bland = True
        if pivots > max_pivots:
            raise IterationLimitError(
                f"simplex exceeded {max_pivots} pivots", iterations=pivots)
