"""Seeded triple generators.

A sampler is a frozen config; :meth:`TripleSampler.sample` draws from a fresh
``numpy.random.default_rng(seed)`` each call, so the same config always yields
the same stream.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..curve import CurveSpec, format_curve, point_at
from ..geometry import ILL_CONDITIONED, relative_area

MODES = ("uniform-box", "on-curve", "shrinking-window")


@dataclass(frozen=True)
class Sample:
    z: np.ndarray
    xs: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.z)


@dataclass(frozen=True)
class TripleSampler:
    mode: str = "uniform-box"
    seed: int = 0
    count: int = 1000
    spec: Optional[CurveSpec] = None
    interval: Optional[tuple] = None
    x0: float = 0.0
    delta: float = 0.1
    box: tuple = (0.0, 1.0)
    min_separation: Optional[float] = None
    conditioning_floor: Optional[float] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown sampler mode {self.mode!r}")
        if self.mode != "uniform-box" and self.spec is None:
            raise ValueError(f"{self.mode} sampling needs a curve")
        if self.mode == "on-curve" and self.interval is None:
            raise ValueError("on-curve sampling needs an interval")
        if self.count < 0:
            raise ValueError("count must be non-negative")

    def with_(self, **kw) -> "TripleSampler":
        return replace(self, **kw)

    @property
    def bounds(self) -> tuple:
        if self.mode == "uniform-box":
            return tuple(self.box)
        if self.mode == "on-curve":
            return tuple(self.interval)
        return (self.x0 - self.delta, self.x0 + self.delta)

    @property
    def separation(self) -> float:
        if self.min_separation is not None:
            return self.min_separation
        lo, hi = self.bounds
        frac = 1e-2 if self.mode == "shrinking-window" else 1e-6
        return frac * (hi - lo)

    @property
    def floor(self) -> float:
        if self.conditioning_floor is not None:
            return self.conditioning_floor
        return ILL_CONDITIONED if self.mode == "uniform-box" else 0.0

    def sample(self) -> Sample:
        rng = np.random.default_rng(self.seed)
        lo, hi = self.bounds
        if self.mode != "uniform-box" and (lo < self.spec.lo or hi > self.spec.hi):
            raise ValueError(f"sampling window ({lo}, {hi}) leaves the curve domain")
        kept_z, kept_x, n = [], [], 0
        chunk = max(64, int(self.count * 1.25))
        while n < self.count:
            if self.mode == "uniform-box":
                u = rng.uniform(lo, hi, (chunk, 3, 2))
                z = u[..., 0] + 1j * u[..., 1]
                xs = None
            else:
                xs = rng.uniform(lo, hi, (chunk, 3))
                # endpoints of an open domain can be hit after rounding
                xs = xs[np.all((xs > self.spec.lo) & (xs < self.spec.hi), axis=1)]
                z = point_at(self.spec, xs)
            diff = np.abs(z - np.roll(z, 1, axis=1)) if xs is None else np.abs(xs - np.roll(xs, 1, axis=1))
            ok = np.min(diff, axis=1) >= self.separation
            if self.floor > 0:
                ok &= relative_area(z) >= self.floor
            kept_z.append(z[ok])
            if xs is not None:
                kept_x.append(xs[ok])
            n += int(ok.sum())
        z = np.concatenate(kept_z)[: self.count]
        xs = np.concatenate(kept_x)[: self.count] if kept_x else None
        return Sample(z, xs)

    def describe(self) -> dict:
        out = {"mode": self.mode, "seed": self.seed, "count": self.count}
        if self.spec is not None:
            out["curve"] = format_curve(self.spec)
        if self.mode == "uniform-box":
            out["box"] = list(self.box)
        elif self.mode == "on-curve":
            out["interval"] = list(self.interval)
        else:
            out["x0"], out["delta"] = self.x0, self.delta
        out["min_separation"] = self.separation
        out["conditioning_floor"] = self.floor
        return out
