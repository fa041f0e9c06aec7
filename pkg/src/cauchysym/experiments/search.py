"""Extremal search over abscissa triples.

A stratified, jittered grid scan spends most of the budget; the remainder goes
to a compass search (poll +-step along each axis, move to the best improving
point, otherwise halve the step) restarted from the best few grid cells.
Every objective evaluation is counted, points closer than the separation
margin to a coincidence diagonal are rejected before evaluation.
"""
from __future__ import annotations

import numpy as np

from ..curve import CurveSpec, format_curve
from ..kernels import KernelHandle
from ..symmetry import symmetrize
from .reports import RatioSearchReport

OBJECTIVES = ("min-re-ratio", "max-im-ratio", "min-re")
GRID_SHARE = 0.8
_CHUNK = 200_000


def objective_values(spec: CurveSpec, objective: str, xs):
    """Objective in natural units (not sign-flipped) for abscissa triples ``xs``."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")
    r = symmetrize(KernelHandle.restricted(spec), np.asarray(xs, dtype=float))
    if objective == "min-re-ratio":
        return r.re_part / r.c_sq
    if objective == "max-im-ratio":
        return r.im_part / r.c_sq
    return r.re_part


def default_region(spec: CurveSpec, objective: str) -> list:
    """Search box per coordinate; the curve's interval when it is bounded, else (-10, 10)."""
    if spec.kind == "cubic" and objective == "min-re":
        # x1 = -a, x2 near 0, x3 = lam with lam / a > 10
        return [(-0.05, -0.005), (-0.002, 0.002), (0.6, 3.0)]
    if spec.kind == "parabola" and objective == "max-im-ratio":
        return [(-10.0, -1.0), (-0.01, 0.01), (1.0, 10.0)]
    lo = spec.lo if np.isfinite(spec.lo) else -10.0
    hi = spec.hi if np.isfinite(spec.hi) else 10.0
    return [(lo, hi)] * 3


class _Counter:
    def __init__(self, spec, objective, budget, separation):
        self.spec, self.objective, self.budget = spec, objective, budget
        self.sign = -1.0 if objective.startswith("max") else 1.0
        self.separation = separation
        self.used = 0

    def feasible(self, xs):
        d = np.abs(xs - np.roll(xs, 1, axis=-1))
        return np.min(d, axis=-1) >= self.separation

    def __call__(self, xs):
        """Sign-flipped values (lower is better); infeasible points and budget overrun give inf."""
        out = np.full(len(xs), np.inf)
        ok = np.nonzero(self.feasible(xs))[0][: max(0, self.budget - self.used)]
        for i in range(0, len(ok), _CHUNK):
            idx = ok[i:i + _CHUNK]
            out[idx] = self.sign * objective_values(self.spec, self.objective, xs[idx])
        self.used += len(ok)
        return out

    @property
    def left(self):
        return self.budget - self.used


def _grid(rng, lo, hi, n):
    """``m**3 <= n`` cells, one uniform point in each."""
    m = max(1, int(np.floor(n ** (1.0 / 3.0) + 1e-9)))
    axes = np.meshgrid(*(np.arange(m),) * 3, indexing="ij")
    idx = np.stack([a.ravel() for a in axes], axis=-1)
    width = (hi - lo) / m
    return lo + (idx + rng.uniform(0.0, 1.0, idx.shape)) * width, width


def _compass(f, x, fx, step, lo, hi, min_step, quota):
    start = f.used
    dirs = np.concatenate([np.eye(3), -np.eye(3)])
    while np.any(step > min_step) and f.used - start + 6 <= quota and f.left >= 6:
        cand = np.clip(x + dirs * step, lo, hi)
        vals = f(cand)
        i = int(np.argmin(vals))
        if vals[i] < fx:
            x, fx = cand[i], vals[i]
        else:
            step = step / 2.0
    return x, fx, step


def extremal_ratio(spec: CurveSpec, objective: str = "min-re-ratio", region=None,
                   budget: int = 100_000, seed: int = 0, n_restarts: int = 3,
                   top_k: int = None, separation: float = None) -> RatioSearchReport:
    """Search ``region`` (three ``(lo, hi)`` boxes, one per abscissa) for the extremum.

    ``separation`` defaults to 1e-3 of the widest box; ``top_k`` grid cells
    (default ``n_restarts``) seed the local refinement.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")
    budget = int(budget)
    if budget <= 0:
        raise ValueError("budget must be positive")
    region = default_region(spec, objective) if region is None else region
    region = np.asarray(region, dtype=float)
    if region.shape != (3, 2) or np.any(region[:, 0] >= region[:, 1]):
        raise ValueError(f"degenerate region {region.tolist()}")
    if np.any(region[:, 0] < spec.lo) or np.any(region[:, 1] > spec.hi):
        raise ValueError("region leaves the curve domain")
    lo, hi = region[:, 0], region[:, 1]
    if separation is None:
        separation = 1e-3 * float(np.max(hi - lo))
    top_k = n_restarts if top_k is None else top_k
    f = _Counter(spec, objective, budget, separation)
    rng = np.random.default_rng(seed)

    pts, width = _grid(rng, lo, hi, max(1, int(GRID_SHARE * budget)))
    vals = f(pts)
    if not np.any(np.isfinite(vals)):
        raise ValueError("no feasible grid point; region lies on a coincidence diagonal")
    order = np.argsort(vals, kind="stable")[:top_k]
    grid_best = float(f.sign * vals[order[0]])
    trace = [{"phase": "grid", "cells": int(len(pts)), "evaluations": f.used, "best": grid_best}]

    best_x, best_f = pts[order[0]], vals[order[0]]
    starts = [i for i in order if np.isfinite(vals[i])][:n_restarts]
    for r, i in enumerate(starts):
        quota = f.left // (len(starts) - r)
        x, fx, step = _compass(f, pts[i], vals[i], width.copy(), lo, hi, 1e-13 * (hi - lo), quota)
        trace.append({"phase": "refine", "restart": r, "start": pts[i].tolist(),
                      "best": float(f.sign * fx), "evaluations": f.used, "final_step": float(np.max(step))})
        if fx < best_f:
            best_x, best_f = x, fx

    best_value = float(objective_values(spec, objective, best_x[None, :])[0])
    return RatioSearchReport(objective, format_curve(spec), best_value, best_x.tolist(), grid_best,
                             f.used, budget, region.tolist(), trace, int(seed))
