"""Cyclic projection onto balls and half-spaces.

Internal helper for witness recovery and the numerical feasibility
oracle.  Two solvers: a flat one (one unknown vector, a list of sets)
and a sum-constrained block one (several unknown vectors whose sum must
land in a coupled set).

Status strings: "feasible" when the residual drops below tol,
"stagnated" when it plateaus well above tol (strong numerical evidence
of an empty intersection, but not a certificate), "cap" when the
iteration budget runs out undecided.
"""
from __future__ import annotations

import numpy as np

# residual is re-checked every window; a relative drop below STALL_FRACTION
# over one window counts as a plateau.  1/k-style tails near tangency keep
# shrinking faster than this until far beyond any sane cap, so genuinely
# feasible-but-degenerate systems end in "cap", not "stagnated".
_WINDOW = 50
_STALL_FRACTION = 1e-5
_STALL_RESIDUAL_FACTOR = 10.0


def _max_violation(sets, g) -> float:
    res = 0.0
    for s in sets:
        d = s.distance(g)
        if d > res:
            res = d
    return res


def cyclic_projection(sets, dim: int, tol: float, max_iter: int):
    """Project one vector cyclically onto every set.

    Returns (status, point, residual, iterations).
    """
    g = np.zeros(dim)
    if sets:
        g = sets[0].project(g)
    prev = np.inf
    res = _max_violation(sets, g)
    if res <= tol:
        return "feasible", g, res, 0
    for it in range(1, max_iter + 1):
        for s in sets:
            g = s.project(g)
        res = _max_violation(sets, g)
        if res <= tol:
            return "feasible", g, res, it
        if it % _WINDOW == 0:
            if (
                res > _STALL_RESIDUAL_FACTOR * tol
                and prev - res < _STALL_FRACTION * res
            ):
                return "stagnated", g, res, it
            prev = res
    return "cap", g, res, max_iter


def block_cyclic_projection(block_sets, coupled, dim: int, tol: float, max_iter: int):
    """Feasibility of z_1..z_k with z_i in every set of block_sets[i] and
    sum(z_i) in the coupled set.

    Returns (status, blocks, residual, iterations).  The sum constraint is
    handled as a projection in the product space: move the block sum to
    its projection onto the coupled set, spreading the correction evenly
    (the summation map has orthogonal rows, so this is the exact metric
    projection onto that constraint).
    """
    k = len(block_sets)
    z = []
    for sets_i in block_sets:
        zi = np.zeros(dim)
        if sets_i:
            zi = sets_i[0].project(zi)
        z.append(zi)

    def residual():
        r = coupled.distance(sum(z)) if k else 0.0
        for zi, sets_i in zip(z, block_sets):
            r = max(r, _max_violation(sets_i, zi))
        return r

    prev = np.inf
    res = residual()
    if res <= tol:
        return "feasible", z, res, 0
    for it in range(1, max_iter + 1):
        for i, sets_i in enumerate(block_sets):
            for s in sets_i:
                z[i] = s.project(z[i])
        total = sum(z)
        corr = (coupled.project(total) - total) / k
        for i in range(k):
            z[i] = z[i] + corr
        res = residual()
        if res <= tol:
            return "feasible", z, res, it
        if it % _WINDOW == 0:
            if (
                res > _STALL_RESIDUAL_FACTOR * tol
                and prev - res < _STALL_FRACTION * res
            ):
                return "stagnated", z, res, it
            prev = res
    return "cap", z, res, max_iter
