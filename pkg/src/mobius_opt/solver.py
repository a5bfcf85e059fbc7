"""Minimize the pointwise maximum of quasiconvex terms over the Klein ball.

Two backends:

* ``local``: compass/pattern search in Klein coordinates (step starts at
  0.25, halves on failure, stops below ``tol_x``), with seeded random rescue
  directions when the axis moves stall on a ridge of the max, followed by an
  SLSQP polish of the active terms.  Quasiconvexity of every term makes any
  local optimum of the max global, so the search certificate is global.
* ``glp``: Clarkson-style two-stage random sampling with reweighting;
  small subproblems are solved by the local backend.  Expected work is a
  linear number of term evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .errors import InfeasibleConstraint
from .geometry import KleinPoint

BARRIER = 1e18


@dataclass(frozen=True)
class ObjectiveTerm:
    """One quasiconvex term: ``evaluate`` maps Klein coordinates to an
    extended real whose sublevel sets are convex."""

    evaluate: Callable[[np.ndarray], float]
    kind: str = "generic"
    source: object = None


class TermBatch(Protocol):
    """Vectorized evaluator for a homogeneous group of terms."""

    indices: np.ndarray  # positions of the covered terms in Instance.terms

    def values(self, xs: np.ndarray) -> np.ndarray:
        """(m, dim) Klein points -> (m, k) term values."""
        ...

    def take(self, sel: np.ndarray, new_indices: np.ndarray) -> "TermBatch":
        """Restrict to the given local positions, re-labelled by new_indices."""
        ...


@dataclass(frozen=True)
class Instance:
    terms: tuple[ObjectiveTerm, ...]
    dimension: int
    domain_shrink: float = 1e-7
    batches: tuple[TermBatch, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("instance needs at least one term")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        covered = np.zeros(len(self.terms), dtype=bool)
        for b in self.batches:
            covered[b.indices] = True
        object.__setattr__(self, "_uncovered", tuple(np.nonzero(~covered)[0]))

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def subset(self, idx: np.ndarray) -> "Instance":
        """Instance over the selected term positions (order preserved)."""
        idx = np.asarray(idx, dtype=int)
        pos_of = {int(g): l for l, g in enumerate(idx)}
        new_batches = []
        for b in self.batches:
            keep = [k for k, g in enumerate(b.indices) if int(g) in pos_of]
            if keep:
                sel = np.asarray(keep, dtype=int)
                new_idx = np.asarray([pos_of[int(b.indices[k])] for k in keep], dtype=int)
                new_batches.append(b.take(sel, new_idx))
        return Instance(
            tuple(self.terms[i] for i in idx),
            self.dimension,
            self.domain_shrink,
            tuple(new_batches),
        )


@dataclass(frozen=True)
class SolverConfig:
    backend: str = "local"
    tol_x: float = 1e-10
    tol_f: float = 1e-9
    max_iters: int = 50_000
    rng_seed: int = 0
    base_case_size: int | None = None  # default 2*dimension + 3
    polish: bool = True

    def __post_init__(self):
        if self.tol_x <= 0 or self.tol_f <= 0:
            raise ValueError("tolerances must be positive")
        if self.backend not in ("local", "glp"):
            raise ValueError(f"unknown backend {self.backend!r}")


@dataclass(frozen=True)
class Solution:
    t_star: float
    x_star: KleinPoint
    iterations: int
    active: tuple[int, ...]
    converged: bool = True
    backend: str = "local"


def term_values(instance: Instance, x: np.ndarray) -> np.ndarray:
    """Values of every term at one Klein point."""
    x = np.asarray(x, float)
    out = np.empty(instance.n_terms)
    for b in instance.batches:
        out[b.indices] = b.values(x[None, :])[0]
    for i in instance._uncovered:
        out[i] = instance.terms[i].evaluate(x)
    return out


def term_values_many(instance: Instance, xs: np.ndarray) -> np.ndarray:
    """(m, dim) -> (m, n_terms)."""
    xs = np.asarray(xs, float)
    out = np.empty((xs.shape[0], instance.n_terms))
    for b in instance.batches:
        out[:, b.indices] = b.values(xs)
    for i in instance._uncovered:
        f = instance.terms[i].evaluate
        out[:, i] = [f(x) for x in xs]
    return out


def evaluate_max(instance: Instance, x) -> float:
    """Pointwise maximum of the term evaluations at a Klein point."""
    x = x.coords if isinstance(x, KleinPoint) else np.asarray(x, float)
    best = -math.inf
    for b in instance.batches:
        best = max(best, float(b.values(x[None, :])[0].max()))
    for i in instance._uncovered:
        best = max(best, float(instance.terms[i].evaluate(x)))
    return best


def evaluate_max_many(instance: Instance, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, float)
    out = np.full(xs.shape[0], -math.inf)
    for b in instance.batches:
        np.maximum(out, b.values(xs).max(axis=1), out=out)
    for i in instance._uncovered:
        f = instance.terms[i].evaluate
        np.maximum(out, [f(x) for x in xs], out=out)
    return out


def active_terms(instance: Instance, x, tol: float) -> list[int]:
    """Indices whose value is within ``tol`` of the maximum at ``x``."""
    x = x.coords if isinstance(x, KleinPoint) else np.asarray(x, float)
    vals = term_values(instance, x)
    return [int(i) for i in np.nonzero(vals >= vals.max() - tol)[0]]


def minimize_max(instance: Instance, config: SolverConfig = SolverConfig()) -> Solution:
    """Globally minimize max_i f_i over the (shrunken) Klein ball."""
    rng = np.random.default_rng(config.rng_seed)
    if config.backend == "glp":
        return _glp(instance, config, rng)
    x, g, iters, converged = _local(instance, config, rng)
    return _finish(instance, config, x, iters, converged, "local")


def _finish(instance, config, x, iters, converged, backend) -> Solution:
    g = evaluate_max(instance, x)
    if g >= BARRIER / 2:
        raise InfeasibleConstraint("all sampled viewpoints violate a barrier constraint")
    act = tuple(active_terms(instance, x, max(config.tol_f, 1e-12)))
    return Solution(g, KleinPoint(x), iters, act, converged, backend)


def _project(xs: np.ndarray, rmax: float) -> np.ndarray:
    nrm = np.linalg.norm(xs, axis=-1, keepdims=True)
    scale = np.where(nrm > rmax, rmax / np.maximum(nrm, 1e-300), 1.0)
    return xs * scale


def _feasible_start(instance, rng, rmax, n_probe=256):
    """Best of origin plus seeded ball samples; barriers may hide the origin."""
    dim = instance.dimension
    probes = rng.standard_normal((n_probe, dim))
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    radii = rng.uniform(0, 0.98, size=(n_probe, 1)) ** (1.0 / dim)
    xs = np.vstack([np.zeros((1, dim)), probes * radii * rmax])
    vals = evaluate_max_many(instance, xs)
    j = int(np.argmin(vals))
    if vals[j] >= BARRIER / 2:
        raise InfeasibleConstraint("all sampled viewpoints violate a barrier constraint")
    return xs[j], float(vals[j])


def _local(instance, config, rng, x0=None, h0=0.25):
    dim = instance.dimension
    rmax = 1.0 - instance.domain_shrink
    if x0 is None:
        x, g = _feasible_start(instance, rng, rmax)
    else:
        x = np.asarray(x0, float)
        g = evaluate_max(instance, x)
        if g >= BARRIER / 2:
            x, g = _feasible_start(instance, rng, rmax)
    eye = np.eye(dim)
    h = h0
    iters = 0
    while h >= config.tol_x and iters < config.max_iters:
        iters += 1
        cands = _project(np.vstack([x + h * eye, x - h * eye]), rmax)
        vals = evaluate_max_many(instance, cands)
        j = int(np.argmin(vals))
        if vals[j] < g:
            x, g = cands[j], float(vals[j])
            continue
        # Axis moves can stall on ridges of the max; try seeded directions
        # at the same scale before shrinking.
        k = max(4, 2 * dim)
        dirs = rng.standard_normal((k, dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        cands = _project(np.vstack([x + h * dirs, x - h * dirs]), rmax)
        vals = evaluate_max_many(instance, cands)
        j = int(np.argmin(vals))
        if vals[j] < g:
            x, g = cands[j], float(vals[j])
            continue
        h *= 0.5
    converged = h < config.tol_x
    if config.polish and g < BARRIER / 2:
        x, g = _polish(instance, config, x, g)
        # Re-run a short compass pass at fine scale: the polish step solves a
        # smooth model and can sit a hair off the true minimax point.
        h = 1e-7
        while h >= config.tol_x and iters < config.max_iters:
            iters += 1
            cands = _project(np.vstack([x + h * eye, x - h * eye]), rmax)
            vals = evaluate_max_many(instance, cands)
            j = int(np.argmin(vals))
            if vals[j] < g:
                x, g = cands[j], float(vals[j])
            else:
                h *= 0.5
    return x, g, iters, converged


def _polish(instance, config, x, g, rounds=8):
    """Epigraph SLSQP on a growing active set.

    Pattern search crawls along curved valleys where several terms tie; the
    smooth subproblem min t s.t. f_i(x) <= t snaps to the tie point.  When
    the candidate is beaten by a term outside the working set, that term is
    added and the subproblem re-solved; candidates are only accepted on
    full-objective improvement, so barriers and the domain stay respected.
    """
    from scipy.optimize import minimize

    dim = instance.dimension
    rmax = 1.0 - instance.domain_shrink
    fd = 1e-6

    def smooth_top(vals, level):
        return set(
            int(i)
            for i in np.nonzero((vals >= level - 1e-5) & (np.abs(vals) < BARRIER / 4))[0]
        )

    act = smooth_top(term_values(instance, x), g)
    for _ in range(rounds):
        if not act or len(act) > 48:
            return x, g
        funcs = [instance.terms[i].evaluate for i in sorted(act)]

        def _con_fun(zt, f=None):
            return zt[-1] - f(zt[:-1])

        def _con_jac(zt, f=None):
            z = zt[:-1]
            grad = np.empty(dim + 1)
            for j in range(dim):
                step = np.zeros(dim)
                step[j] = fd
                grad[j] = -(f(z + step) - f(z - step)) / (2 * fd)
            grad[-1] = 1.0
            return grad

        cons = [
            {"type": "ineq", "fun": _con_fun, "jac": _con_jac, "args": (f,)}
            for f in funcs
        ]
        cons.append(
            {
                "type": "ineq",
                "fun": lambda zt: rmax * rmax - zt[:-1] @ zt[:-1],
                "jac": lambda zt: np.append(-2 * zt[:-1], 0.0),
            }
        )
        z0 = np.append(x, g)
        res = minimize(
            lambda zt: zt[-1],
            z0,
            jac=lambda zt: np.append(np.zeros(dim), 1.0),
            constraints=cons,
            method="SLSQP",
            options={"maxiter": 150, "ftol": 1e-16},
        )
        xc = _project(res.x[:-1], rmax)
        vc = term_values(instance, xc)
        gc = float(vc.max())
        if gc < g:
            x, g = xc, gc
            new = smooth_top(vc, gc)
            if new <= act:
                return x, g
            act |= new
        else:
            # a term outside the working set dominates the candidate
            new = smooth_top(vc, gc)
            if new <= act:
                return x, g
            act |= new
    return x, g


# ---------------------------------------------------------------------------
# Clarkson-style GLP backend


def _glp(instance, config, rng) -> Solution:
    n = instance.n_terms
    dim = instance.dimension
    delta = config.base_case_size or (2 * dim + 3)
    r2 = 6 * delta * delta
    iters_box = [0]

    def solve_local(idx) -> tuple[np.ndarray, float]:
        sub = instance.subset(np.asarray(idx, dtype=int))
        x, g, it, _ = _local(sub, config, rng)
        iters_box[0] += it
        return x, g

    def scan(x, t) -> np.ndarray:
        vals = term_values(instance, x)
        return np.nonzero(vals > t + config.tol_f)[0]

    def cl2(idx) -> tuple[np.ndarray, float]:
        idx = np.asarray(idx, dtype=int)
        m = len(idx)
        if m <= r2:
            return solve_local(idx)
        sub = instance.subset(idx)
        w = np.ones(m)
        max_rounds = int(12 * delta * math.log(m + 2)) + 24
        for _ in range(max_rounds):
            p = w / w.sum()
            sample = rng.choice(m, size=r2, replace=False, p=p)
            x, _ = solve_local(idx[np.sort(sample)])
            vals = term_values(sub, x)
            t = float(vals[sample].max())
            viol = np.nonzero(vals > t + config.tol_f)[0]
            if len(viol) == 0:
                return x, t
            if w[viol].sum() <= w.sum() / (3 * delta):
                w[viol] *= 2.0
        return solve_local(idx)  # safety net: exact on the subset

    # Small problems go to the reweighting stage straight away; very small
    # ones to the numerical base case.
    if n <= max(delta, 2 * dim + 3):
        x, g = solve_local(np.arange(n))
        return _finish(instance, config, x, iters_box[0], True, "glp")

    if n <= 4 * r2:
        x, _ = cl2(np.arange(n))
        return _finish(instance, config, x, iters_box[0], True, "glp")

    # Stage 1: random subproblems of size ~ delta * sqrt(n) plus the set of
    # accumulated violators.
    forced: np.ndarray = np.empty(0, dtype=int)
    r1 = int(delta * math.sqrt(n)) + 1
    for _ in range(64):
        sample = rng.choice(n, size=min(r1, n), replace=False)
        idx = np.union1d(sample, forced)
        x, t = cl2(idx)
        viol = scan(x, t)
        if len(viol) == 0:
            return _finish(instance, config, x, iters_box[0], True, "glp")
        if len(viol) <= 2 * delta * math.sqrt(n):
            forced = np.union1d(forced, viol)
    x, _ = solve_local(np.arange(n))  # safety net
    return _finish(instance, config, x, iters_box[0], True, "glp")
