"""Membership tests for potential minimizers of a sum of convex functions.

Each summand f_i is known only through a minimizer location x_i* and
class parameters (mu_i, L_i); optionally some summands are fully known
(quadratics with an exact gradient oracle).  A point x* is a *potential
minimizer* when functions f_i consistent with the data exist whose sum
is minimized at x*.  Equivalently: each f_i must admit a subgradient
g_i at x* with sum zero, so membership reduces to intersecting the
per-summand gradient sets (balls for smooth classes, half-spaces for
merely strongly convex ones) after eliminating one gradient.

The predicates below are the closed forms of those intersection tests.
When two or more summands have L = inf the set is unbounded unless a
gradient-norm cap bound_B is supplied; that regime gets its own
three-clause test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _projection
from .geometry import (
    BOUNDARY,
    Ball,
    CoincidentPointsError,
    DimensionMismatchError,
    HalfSpace,
    INSIDE,
    OUTSIDE,
    Verdict,
    as_vec,
    check_same_dim,
    classify,
    eps_for,
    gram_det,
)
from .interpolation import ClassParams, geometric_ball

COND_BASE = 1
COND_FIRST = 2
COND_SECOND = 4
COND_DET = 8

TWO_SMOOTH = "two_smooth"
M_SMOOTH = "m_smooth"
ONE_NONSMOOTH = "one_nonsmooth"
TWO_NONSMOOTH_BOUNDED = "two_nonsmooth_bounded"
KNOWN_SMOOTH = "known_smooth"
KNOWN_ONE_NONSMOOTH = "known_one_nonsmooth"

PREDICATE_NAMES = (
    TWO_SMOOTH,
    M_SMOOTH,
    ONE_NONSMOOTH,
    TWO_NONSMOOTH_BOUNDED,
    KNOWN_SMOOTH,
    KNOWN_ONE_NONSMOOTH,
)


class UnsupportedPatternError(ValueError):
    """The scenario's smoothness pattern has no implemented predicate."""


class WitnessRecoveryError(RuntimeError):
    """The projection routine ran out of iterations before producing a
    witness; distinct from the point being outside the set."""


@dataclass(frozen=True, eq=False)
class KnownFunction:
    """A fully known summand: a convex quadratic 1/2 (x-c)^T A (x-c).

    Only the gradient is ever consulted, so other differentiable convex
    models can slot in later by matching the gradient() contract.
    """

    matrix: np.ndarray
    center: np.ndarray
    kind: str = "quadratic"

    def __post_init__(self):
        if self.kind != "quadratic":
            raise ValueError(f"unsupported known-function kind {self.kind!r}")
        a = np.asarray(self.matrix, dtype=float)
        c = as_vec(self.center)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if a.shape[0] != c.shape[0]:
            raise DimensionMismatchError("matrix and center dimensions differ")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        eps = eps_for(a)
        if float(np.abs(a - a.T).max()) > eps:
            raise ValueError("matrix must be symmetric")
        a = 0.5 * (a + a.T)
        if float(np.linalg.eigvalsh(a).min()) < -eps:
            raise ValueError("matrix must be positive semidefinite")
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "center", c)

    def gradient(self, x) -> np.ndarray:
        xv = as_vec(x)
        check_same_dim(xv, self.center)
        return self.matrix @ (xv - self.center)


@dataclass(frozen=True, eq=False)
class Summand:
    """One term of the sum: minimizer location, class parameters, and an
    optional exact model.  When known is present the params are
    informational; the gradient oracle is authoritative."""

    x_star: np.ndarray
    params: ClassParams
    known: KnownFunction | None = None

    def __post_init__(self):
        x = as_vec(self.x_star)
        if self.known is not None:
            check_same_dim(x, self.known.center)
        object.__setattr__(self, "x_star", x)

    @property
    def dim(self) -> int:
        return self.x_star.shape[0]


@dataclass(frozen=True, eq=False)
class Scenario:
    """A full problem instance: the summands plus, when two or more of
    them are nonsmooth, the gradient-norm cap bound_B that keeps the
    potential set bounded."""

    summands: tuple
    bound_B: float | None = None

    def __post_init__(self):
        ss = tuple(self.summands)
        if not ss:
            raise ValueError("scenario needs at least one summand")
        check_same_dim(*(s.x_star for s in ss))
        object.__setattr__(self, "summands", ss)
        n_nonsmooth = sum(
            1 for s in ss if s.known is None and not s.params.is_smooth
        )
        if self.bound_B is not None:
            b = float(self.bound_B)
            if not math.isfinite(b) or b < 0.0:
                raise ValueError(f"bound_B must be finite and nonnegative, got {b}")
            object.__setattr__(self, "bound_B", b)
            if n_nonsmooth < 2:
                raise UnsupportedPatternError(
                    "bound_B only applies when at least two summands are nonsmooth"
                )
        elif n_nonsmooth >= 2:
            raise UnsupportedPatternError(
                "with two nonsmooth summands every point far from the minimizers "
                "stays attainable unless gradients are capped; supply bound_B"
            )

    @property
    def dim(self) -> int:
        return self.summands[0].dim

    @property
    def known_summands(self) -> tuple:
        return tuple(s for s in self.summands if s.known is not None)

    @property
    def unknown_summands(self) -> tuple:
        return tuple(s for s in self.summands if s.known is None)


@dataclass(frozen=True, eq=False)
class RegionRaster:
    """Grid of verdicts over a 2-d bounding box, evaluated at cell
    centers, row-major from the (xmin, ymin) corner with x fastest."""

    bbox: tuple
    resolution: tuple
    predicate: str
    cells: tuple

    def centers(self):
        """Cell-center coordinates in storage order, shape (nx*ny, 2)."""
        xmin, xmax, ymin, ymax = self.bbox
        nx, ny = self.resolution
        dx = (xmax - xmin) / nx
        dy = (ymax - ymin) / ny
        xs = xmin + dx * (np.arange(nx) + 0.5)
        ys = ymin + dy * (np.arange(ny) + 0.5)
        out = np.empty((nx * ny, 2))
        for iy in range(ny):
            out[iy * nx : (iy + 1) * nx, 0] = xs
            out[iy * nx : (iy + 1) * nx, 1] = ys[iy]
        return out


# ---------------------------------------------------------------------------
# closed-form predicates


def _require(cond: bool, msg: str):
    if not cond:
        raise UnsupportedPatternError(msg)


def _fired(*clauses_eps):
    bits = 0
    for bit, value, eps in clauses_eps:
        if value >= -eps:
            bits |= bit
    return bits


def member_two_smooth(x_star, s1: Summand, s2: Summand) -> Verdict:
    """Two smooth summands: x* is a potential minimizer iff the two
    gradient balls, one negated, intersect.

    margin = (L1-mu1)|d1| + (L2-mu2)|d2| - |(L1+mu1) d1 + (L2+mu2) d2|
    with d_i = x* - x_i*.
    """
    _require(
        s1.params.is_smooth and s2.params.is_smooth,
        "two-smooth test needs finite L on both summands",
    )
    x = as_vec(x_star)
    check_same_dim(x, s1.x_star, s2.x_star)
    d1 = x - s1.x_star
    d2 = x - s2.x_star
    p1, p2 = s1.params, s2.params
    margin = (
        (p1.L - p1.mu) * float(np.linalg.norm(d1))
        + (p2.L - p2.mu) * float(np.linalg.norm(d2))
        - float(np.linalg.norm((p1.L + p1.mu) * d1 + (p2.L + p2.mu) * d2))
    )
    eps = eps_for(x, s1.x_star, s2.x_star, p1.mu, p1.L, p2.mu, p2.L)
    return Verdict(classify(margin, eps), margin)


def member_smooth_nonsmooth(x_star, smooth: Summand, nonsmooth: Summand) -> Verdict:
    """One smooth and one merely strongly convex summand: the smooth
    gradient ball must meet the negated strong-convexity half-space.

    margin = (L1-mu1)/2 |d1||d2| - mu2 |d2|^2 - (L1+mu1)/2 <d1, d2>.
    """
    _require(smooth.params.is_smooth, "first summand must have finite L")
    _require(not nonsmooth.params.is_smooth, "second summand must have L = inf")
    x = as_vec(x_star)
    check_same_dim(x, smooth.x_star, nonsmooth.x_star)
    d1 = x - smooth.x_star
    d2 = x - nonsmooth.x_star
    p1, p2 = smooth.params, nonsmooth.params
    r1 = float(np.linalg.norm(d1))
    r2 = float(np.linalg.norm(d2))
    margin = (
        0.5 * (p1.L - p1.mu) * r1 * r2
        - p2.mu * r2 * r2
        - 0.5 * (p1.L + p1.mu) * float(d1 @ d2)
    )
    eps = eps_for(x, smooth.x_star, nonsmooth.x_star, p1.mu, p1.L, p2.mu)
    return Verdict(classify(margin, eps), margin)


def min_bound_B(mu1: float, mu2: float, x1, x2) -> float:
    """Smallest gradient cap keeping the bounded two-nonsmooth set
    nonempty: mu1 mu2 / (mu1 + mu2) * |x1 - x2|."""
    if mu1 < 0.0 or mu2 < 0.0:
        raise ValueError("moduli must be nonnegative")
    if mu1 + mu2 <= 0.0:
        raise ValueError("at least one modulus must be positive")
    a1, a2 = as_vec(x1), as_vec(x2)
    check_same_dim(a1, a2)
    return mu1 * mu2 / (mu1 + mu2) * float(np.linalg.norm(a1 - a2))


def member_two_nonsmooth_bounded(
    x_star, s1: Summand, s2: Summand, bound_b: float
) -> Verdict:
    """Two nonsmooth summands under a gradient cap |g_i| <= B.

    x* belongs to the set iff both base norm caps mu_i |d_i| <= B hold
    and at least one of three clauses does: an alignment inequality in
    either direction, or nonnegativity of the 3x3 determinant that
    certifies a unit-vector completion of the constraint system.
    fired_conditions records every satisfied clause (bits 1/2/4/8).
    """
    _require(
        not s1.params.is_smooth and not s2.params.is_smooth,
        "bounded test needs L = inf on both summands",
    )
    mu1, mu2 = s1.params.mu, s2.params.mu
    if mu1 + mu2 <= 0.0:
        raise ValueError("at least one modulus must be positive")
    x = as_vec(x_star)
    check_same_dim(x, s1.x_star, s2.x_star)
    b = float(bound_b)
    if not math.isfinite(b) or b < 0.0:
        raise ValueError(f"bound must be finite and nonnegative, got {b}")
    eps = eps_for(x, s1.x_star, s2.x_star, mu1, mu2, b)
    sep = float(np.linalg.norm(s1.x_star - s2.x_star))
    if sep <= eps:
        raise CoincidentPointsError("summand minimizers coincide")

    bmin = min_bound_B(mu1, mu2, s1.x_star, s2.x_star)
    if b < bmin - eps:
        # the whole set is empty: no point qualifies
        return Verdict(OUTSIDE, b - bmin, 0)

    d1 = x - s1.x_star
    d2 = x - s2.x_star
    r1 = float(np.linalg.norm(d1))
    r2 = float(np.linalg.norm(d2))
    base = min(b - mu1 * r1, b - mu2 * r2)

    # coincidence with an anchor collapses the test to the other norm cap
    if r1 <= eps or r2 <= eps:
        fired = _fired((COND_BASE, base, eps))
        return Verdict(classify(base, eps), base, fired)

    c1 = -mu1 * float(d1 @ d2) - mu2 * r2 * r2
    c2 = -mu2 * float(d2 @ d1) - mu1 * r1 * r1
    c3 = gram_det(x, s1.x_star, s2.x_star, mu1, mu2, b * b)
    margin = min(base, max(c1, c2, c3))
    fired = _fired(
        (COND_BASE, base, eps),
        (COND_FIRST, c1, eps),
        (COND_SECOND, c2, eps),
        (COND_DET, c3, eps),
    )
    return Verdict(classify(margin, eps), margin, fired)


def member_m_smooth(x_star, summands) -> Verdict:
    """Any number of smooth summands.

    margin = sum (L_i-mu_i)|d_i| - |sum (L_i+mu_i) d_i|.
    """
    ss = list(summands)
    if not ss:
        raise ValueError("need at least one summand")
    _require(
        all(s.params.is_smooth for s in ss),
        "all summands must have finite L",
    )
    x = as_vec(x_star)
    check_same_dim(x, *(s.x_star for s in ss))
    total = np.zeros_like(x)
    slack = 0.0
    for s in ss:
        d = x - s.x_star
        total = total + (s.params.L + s.params.mu) * d
        slack += (s.params.L - s.params.mu) * float(np.linalg.norm(d))
    margin = slack - float(np.linalg.norm(total))
    eps = eps_for(x, *(s.x_star for s in ss), *[(s.params.mu, s.params.L) for s in ss])
    return Verdict(classify(margin, eps), margin)


def member_m_one_nonsmooth(x_star, summands) -> Verdict:
    """Smooth summands plus exactly one nonsmooth summand, listed last.

    margin = sum_i (L_i-mu_i)/2 |d_i||d_m|
             - mu_m |d_m|^2 - sum_i (L_i+mu_i)/2 <d_i, d_m>.
    """
    ss = list(summands)
    if len(ss) < 1:
        raise ValueError("need at least one summand")
    _require(not ss[-1].params.is_smooth, "last summand must have L = inf")
    _require(
        all(s.params.is_smooth for s in ss[:-1]),
        "all summands before the last must have finite L",
    )
    x = as_vec(x_star)
    check_same_dim(x, *(s.x_star for s in ss))
    dm = x - ss[-1].x_star
    rm = float(np.linalg.norm(dm))
    mum = ss[-1].params.mu
    margin = -mum * rm * rm
    for s in ss[:-1]:
        d = x - s.x_star
        margin += 0.5 * (s.params.L - s.params.mu) * float(np.linalg.norm(d)) * rm
        margin -= 0.5 * (s.params.L + s.params.mu) * float(d @ dm)
    eps = eps_for(
        x,
        *(s.x_star for s in ss),
        *[s.params.mu for s in ss],
        *[s.params.L for s in ss],
    )
    return Verdict(classify(margin, eps), margin)


def member_with_known(x_star, known_functions, unknown_summands) -> Verdict:
    """Smooth unknown summands alongside exactly known ones.

    The known gradients shift the ball chain:
    margin = sum (L_i-mu_i)|d_i| - |2 sum grad_k(x*) + sum (L_i+mu_i) d_i|.
    """
    kfs = list(known_functions)
    ss = list(unknown_summands)
    _require(
        all(s.params.is_smooth for s in ss),
        "all unknown summands must have finite L",
    )
    x = as_vec(x_star)
    if ss:
        check_same_dim(x, *(s.x_star for s in ss))
    total = np.zeros_like(x)
    for kf in kfs:
        total = total + 2.0 * kf.gradient(x)
    slack = 0.0
    for s in ss:
        d = x - s.x_star
        total = total + (s.params.L + s.params.mu) * d
        slack += (s.params.L - s.params.mu) * float(np.linalg.norm(d))
    margin = slack - float(np.linalg.norm(total))
    eps = eps_for(
        x,
        total,
        *(s.x_star for s in ss),
        *[(s.params.mu, s.params.L) for s in ss],
    )
    return Verdict(classify(margin, eps), margin)


def member_with_known_one_nonsmooth(
    x_star, known_functions, unknown_summands
) -> Verdict:
    """Known summands, smooth unknowns, and one nonsmooth unknown last.

    margin = sum_i (L_i-mu_i)/2 |d_i||d_m| - mu_m |d_m|^2
             - <sum grad_k(x*), d_m> - sum_i (L_i+mu_i)/2 <d_i, d_m>.
    """
    kfs = list(known_functions)
    ss = list(unknown_summands)
    if not ss:
        raise ValueError("need at least one unknown summand")
    _require(not ss[-1].params.is_smooth, "last unknown summand must have L = inf")
    _require(
        all(s.params.is_smooth for s in ss[:-1]),
        "unknown summands before the last must have finite L",
    )
    x = as_vec(x_star)
    check_same_dim(x, *(s.x_star for s in ss))
    dm = x - ss[-1].x_star
    rm = float(np.linalg.norm(dm))
    grad = np.zeros_like(x)
    for kf in kfs:
        grad = grad + kf.gradient(x)
    margin = -ss[-1].params.mu * rm * rm - float(grad @ dm)
    for s in ss[:-1]:
        d = x - s.x_star
        margin += 0.5 * (s.params.L - s.params.mu) * float(np.linalg.norm(d)) * rm
        margin -= 0.5 * (s.params.L + s.params.mu) * float(d @ dm)
    eps = eps_for(
        x,
        grad,
        *(s.x_star for s in ss),
        *[s.params.mu for s in ss],
        *[s.params.L for s in ss],
    )
    return Verdict(classify(margin, eps), margin)


# ---------------------------------------------------------------------------
# routing


def route(scenario: Scenario) -> str:
    """Pick the predicate matching the scenario's smoothness pattern."""
    known = scenario.known_summands
    unknown = scenario.unknown_summands
    nonsmooth = [s for s in unknown if not s.params.is_smooth]
    if known:
        if not nonsmooth:
            return KNOWN_SMOOTH
        if len(nonsmooth) == 1:
            return KNOWN_ONE_NONSMOOTH
        raise UnsupportedPatternError(
            "known summands combine with at most one nonsmooth unknown"
        )
    if not nonsmooth:
        return TWO_SMOOTH if len(unknown) == 2 else M_SMOOTH
    if len(nonsmooth) == 1:
        return ONE_NONSMOOTH
    if len(nonsmooth) == 2 and len(unknown) == 2:
        _require(
            scenario.bound_B is not None,
            "two nonsmooth summands need bound_B",
        )
        return TWO_NONSMOOTH_BOUNDED
    raise UnsupportedPatternError(
        "at most two nonsmooth summands are supported, and only on their own"
    )


def _nonsmooth_last(summands):
    smooth = [s for s in summands if s.params.is_smooth]
    rest = [s for s in summands if not s.params.is_smooth]
    return smooth + rest


def evaluate(scenario: Scenario, x_star, predicate: str | None = None) -> Verdict:
    """Membership verdict for x_star, routed by smoothness pattern.

    predicate forces a specific test (used to exercise mis-routing); the
    forced test still validates its own preconditions.
    """
    name = predicate if predicate is not None else route(scenario)
    known = [s.known for s in scenario.known_summands]
    unknown = scenario.unknown_summands
    if name == TWO_SMOOTH:
        _require(not known, "two-smooth test takes no known summands")
        _require(len(unknown) == 2, "two-smooth test needs exactly two summands")
        return member_two_smooth(x_star, unknown[0], unknown[1])
    if name == M_SMOOTH:
        _require(not known, "m-smooth test takes no known summands")
        return member_m_smooth(x_star, unknown)
    if name == ONE_NONSMOOTH:
        _require(not known, "one-nonsmooth test takes no known summands")
        return member_m_one_nonsmooth(x_star, _nonsmooth_last(unknown))
    if name == TWO_NONSMOOTH_BOUNDED:
        _require(not known, "bounded test takes no known summands")
        _require(len(unknown) == 2, "bounded test needs exactly two summands")
        _require(scenario.bound_B is not None, "bounded test needs bound_B")
        return member_two_nonsmooth_bounded(
            x_star, unknown[0], unknown[1], scenario.bound_B
        )
    if name == KNOWN_SMOOTH:
        return member_with_known(x_star, known, unknown)
    if name == KNOWN_ONE_NONSMOOTH:
        return member_with_known_one_nonsmooth(
            x_star, known, _nonsmooth_last(unknown)
        )
    raise ValueError(f"unknown predicate {name!r}")


# ---------------------------------------------------------------------------
# focal point and witnesses


def focal_point(summands) -> np.ndarray:
    """The distinguished interior point of the potential set.

    All summands smooth: the (L_i + mu_i)-weighted average of the x_i*.
    Exactly two nonsmooth summands: the mu-weighted average (the unique
    member when bound_B equals its minimum).
    """
    ss = list(summands)
    if not ss:
        raise ValueError("need at least one summand")
    if any(s.known is not None for s in ss):
        raise UnsupportedPatternError("focal point is defined for unknown summands")
    check_same_dim(*(s.x_star for s in ss))
    if all(s.params.is_smooth for s in ss):
        weights = [s.params.L + s.params.mu for s in ss]
    elif len(ss) == 2 and all(not s.params.is_smooth for s in ss):
        weights = [s.params.mu for s in ss]
        if sum(weights) <= 0.0:
            raise ValueError("at least one modulus must be positive")
    else:
        raise UnsupportedPatternError(
            "focal point needs all-smooth summands or exactly two nonsmooth ones"
        )
    total = sum(weights)
    out = np.zeros_like(ss[0].x_star)
    for w, s in zip(weights, ss):
        out = out + (w / total) * s.x_star
    return out


def _gradient_set(x, s: Summand):
    """Constraint set for s's subgradient at x, in gradient space."""
    if s.params.is_smooth:
        return geometric_ball(x, s.x_star, s.params)
    d = x - s.x_star
    # <g, d> >= mu |d|^2  rewritten as <-d, g> <= -mu |d|^2
    return HalfSpace(-d, -s.params.mu * float(d @ d))


def witness_gradients(scenario: Scenario, x_star, max_iter: int = 100_000):
    """Recover subgradients g_i certifying membership of x_star.

    Returns one gradient per summand (known summands contribute their
    exact gradient) with sum exactly zero, or None when x_star is
    outside the set.  Raises WitnessRecoveryError if the projection
    routine exhausts max_iter without converging.
    """
    x = as_vec(x_star)
    check_same_dim(x, scenario.summands[0].x_star)
    verdict = evaluate(scenario, x)
    if verdict.state == OUTSIDE:
        return None
    pattern = route(scenario)

    known_grads = {
        id(s): s.known.gradient(x) for s in scenario.summands if s.known is not None
    }
    offset = np.zeros_like(x)
    for g in known_grads.values():
        offset = offset + g

    unknown = list(scenario.unknown_summands)
    if pattern in (ONE_NONSMOOTH, KNOWN_ONE_NONSMOOTH):
        unknown = _nonsmooth_last(unknown)

    tol = eps_for(
        x,
        *(s.x_star for s in unknown),
        *[s.params.mu for s in unknown],
        *[s.params.L for s in unknown],
        offset,
        0.0 if scenario.bound_B is None else scenario.bound_B,
    )

    recovered: dict[int, np.ndarray] = {}
    if not unknown:
        # all summands known: the gradients either already cancel or the
        # verdict above was outside
        pass
    elif len(unknown) == 1:
        g = -offset
        if _gradient_set(x, unknown[0]).distance(g) > 1e3 * tol:
            raise WitnessRecoveryError(
                "forced gradient of the single unknown summand misses its set"
            )
        recovered[id(unknown[0])] = g
    elif pattern == TWO_NONSMOOTH_BOUNDED:
        b = scenario.bound_B
        block = [_gradient_set(x, unknown[0]), Ball(np.zeros_like(x), b)]
        coupled = _gradient_set(x, unknown[1]).negated()
        status, zs, res, _ = _projection.block_cyclic_projection(
            [block], coupled, x.shape[0], tol, max_iter
        )
        if status != "feasible":
            raise WitnessRecoveryError(
                f"projection {status} with residual {res:.3e}"
            )
        recovered[id(unknown[0])] = zs[0]
        recovered[id(unknown[1])] = -zs[0]
    else:
        sets = [_gradient_set(x, s) for s in unknown]
        coupled = sets[-1].negated().translated(-offset)
        status, zs, res, _ = _projection.block_cyclic_projection(
            [[s] for s in sets[:-1]], coupled, x.shape[0], tol, max_iter
        )
        if status != "feasible":
            raise WitnessRecoveryError(
                f"projection {status} with residual {res:.3e}"
            )
        for s, z in zip(unknown[:-1], zs):
            recovered[id(s)] = z
        recovered[id(unknown[-1])] = -offset - sum(zs)

    out = []
    for s in scenario.summands:
        if s.known is not None:
            out.append(known_grads[id(s)])
        else:
            out.append(recovered[id(s)])
    return out


# ---------------------------------------------------------------------------
# rasters


def rasterize_region(
    scenario: Scenario,
    bbox,
    resolution,
    workers: int = 1,
    predicate: str | None = None,
) -> RegionRaster:
    """Evaluate the membership verdict on a grid of cell centers.

    bbox = (xmin, xmax, ymin, ymax), resolution = (nx, ny).  Cells are
    stored row-major from the (xmin, ymin) corner, x fastest.  The cell
    evaluations are independent, so the result is bitwise identical for
    any workers count.
    """
    if scenario.dim != 2:
        raise DimensionMismatchError("rasters are 2-d only")
    xmin, xmax, ymin, ymax = (float(v) for v in bbox)
    nx, ny = (int(v) for v in resolution)
    if not (xmin < xmax and ymin < ymax):
        raise ValueError("bbox must satisfy xmin < xmax and ymin < ymax")
    if nx < 1 or ny < 1:
        raise ValueError("resolution must be at least 1x1")
    name = predicate if predicate is not None else route(scenario)
    dx = (xmax - xmin) / nx
    dy = (ymax - ymin) / ny
    xs = xmin + dx * (np.arange(nx) + 0.5)
    ys = ymin + dy * (np.arange(ny) + 0.5)

    def eval_row(iy: int):
        y = ys[iy]
        return [evaluate(scenario, np.array([x, y]), predicate=name) for x in xs]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(eval_row, range(ny)))
    else:
        rows = [eval_row(iy) for iy in range(ny)]
    cells = tuple(v for row in rows for v in row)
    return RegionRaster(
        bbox=(xmin, xmax, ymin, ymax),
        resolution=(nx, ny),
        predicate=name,
        cells=cells,
    )
