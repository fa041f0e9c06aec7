"""Triangles and Menger curvature of three-point configurations.

Functions accept a :class:`Triple` or an array of shape ``(..., 3)`` of complex
points; batch inputs give batch outputs.  Side ``l_j`` is always the side
opposite vertex ``z_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curve import CurveSpec, point_at

COLLINEAR_TOL = 1e-12
ILL_CONDITIONED = 1e-6

WELL, ILL, COLLINEAR = "well-conditioned", "ill-conditioned", "collinear"


class DegenerateTripleError(ValueError):
    """Coincident or collinear points where a proper triangle is required."""


@dataclass(frozen=True)
class Triple:
    z1: complex
    z2: complex
    z3: complex
    xs: Optional[tuple] = None
    floor: float = 0.0

    def __post_init__(self):
        pts = self.points
        d = np.abs(pts - np.roll(pts, 1))
        if not np.all(d > self.floor):
            raise DegenerateTripleError(f"points closer than {self.floor}: {tuple(pts)}")

    @property
    def points(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3], dtype=complex)

    @classmethod
    def on_curve(cls, spec: CurveSpec, xs, floor: float = 0.0) -> "Triple":
        xs = tuple(float(x) for x in xs)
        if len(set(xs)) != 3:
            raise DegenerateTripleError(f"coincident abscissas {xs}")
        z = point_at(spec, np.array(xs))
        return cls(complex(z[0]), complex(z[1]), complex(z[2]), xs, floor)

    @classmethod
    def from_row(cls, row) -> "Triple":
        r = [float(v) for v in row]
        return cls(complex(r[0], r[1]), complex(r[2], r[3]), complex(r[4], r[5]))

    def to_row(self) -> list:
        return [v for z in self.points for v in (z.real, z.imag)]

    def permuted(self, perm) -> "Triple":
        pts = self.points[list(perm)]
        xs = None if self.xs is None else tuple(self.xs[i] for i in perm)
        return Triple(complex(pts[0]), complex(pts[1]), complex(pts[2]), xs, self.floor)


@dataclass(frozen=True)
class TriangleStats:
    sides: np.ndarray
    angles: np.ndarray
    area: float
    orientation: int


def as_points(t) -> np.ndarray:
    if isinstance(t, Triple):
        return t.points
    z = np.asarray(t, dtype=complex)
    if z.shape[-1] != 3:
        raise ValueError(f"expected trailing dimension 3, got shape {z.shape}")
    return z


def side_lengths(t) -> np.ndarray:
    z = as_points(t)
    return np.abs(np.roll(z, -1, axis=-1) - np.roll(z, 1, axis=-1))


def cross2(t) -> np.ndarray:
    """Twice the signed area; positive for counterclockwise vertices."""
    z = as_points(t)
    u = z[..., 1] - z[..., 0]
    v = z[..., 2] - z[..., 0]
    return u.real * v.imag - u.imag * v.real


def relative_area(t) -> np.ndarray:
    """Scale-free flatness ``2*Area / max(l)**2``."""
    top = np.max(side_lengths(t), axis=-1) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        # three coincident points count as collinear
        return np.where(top > 0, np.abs(cross2(t)) / top, 0.0)


def condition(t, tol: float = COLLINEAR_TOL, ill: float = ILL_CONDITIONED):
    """Conditioning label(s): collinear, ill-conditioned or well-conditioned."""
    r = relative_area(t)
    out = np.where(r <= tol, COLLINEAR, np.where(r < ill, ILL, WELL))
    return str(out) if out.ndim == 0 else out


def is_collinear(t, tol: float = COLLINEAR_TOL):
    return relative_area(t) <= tol


def orientation(t, tol: float = COLLINEAR_TOL):
    s = np.sign(cross2(t)).astype(int)
    return np.where(is_collinear(t, tol), 0, s)


def angles(t) -> np.ndarray:
    """Interior angles by the law of cosines (cosines clamped to [-1, 1])."""
    ell = side_lengths(t)
    a, b, c = ell[..., 0], ell[..., 1], ell[..., 2]

    def at(opp, s1, s2):
        return np.arccos(np.clip((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0))

    return np.stack([at(a, b, c), at(b, a, c), at(c, a, b)], axis=-1)


def triangle_stats(t, tol: float = COLLINEAR_TOL) -> TriangleStats:
    z = as_points(t)
    if z.ndim != 1:
        raise ValueError("triangle_stats takes a single triple")
    o = int(orientation(z, tol))
    area = 0.0 if o == 0 else abs(float(cross2(z))) / 2
    return TriangleStats(side_lengths(z), angles(z), area, o)


def menger_curvature_sq(t, tol: float = COLLINEAR_TOL):
    """Squared Menger curvature ``(4*Area / (l1*l2*l3))**2``; exactly 0 if collinear."""
    z = as_points(t)
    ell = side_lengths(z)
    c = 2.0 * np.abs(cross2(z)) / np.prod(ell, axis=-1)
    out = np.where(is_collinear(z, tol), 0.0, c * c)
    return float(out) if out.ndim == 0 else out


def menger_graph_sq(spec: CurveSpec, xs):
    """Squared Menger curvature of three curve points from their abscissas."""
    xs = np.asarray(xs, dtype=float)
    u, x, v = xs[..., 0], xs[..., 1], xs[..., 2]
    if np.any((u == x) | (x == v) | (u == v)):
        raise DegenerateTripleError("coincident abscissas")
    Au, Ax, Av = spec.A(u), spec.A(x), spec.A(v)
    num = Au * (x - v) + Ax * (v - u) + Av * (u - x)
    lu = (v - x) ** 2 + (Av - Ax) ** 2
    lx = (u - v) ** 2 + (Au - Av) ** 2
    lv = (x - u) ** 2 + (Ax - Au) ** 2
    out = 4.0 * num * num / (lu * lx * lv)
    return float(out) if out.ndim == 0 else out


def admissible_points(z, tol: float = COLLINEAR_TOL) -> np.ndarray:
    """Batch form of :func:`admissible_order` on raw point arrays."""
    z = as_points(z)
    if np.any(is_collinear(z, tol)):
        raise DegenerateTripleError("admissible order needs non-collinear points")
    # the foot of the altitude onto the longest side is interior to it
    c_idx = np.argmax(side_lengths(z), axis=-1)
    a_idx, b_idx = (c_idx + 1) % 3, (c_idx + 2) % 3
    idx = np.stack([a_idx, b_idx, c_idx], axis=-1)
    out = np.take_along_axis(z, idx, axis=-1)
    flip = cross2(out) < 0
    out[..., [0, 1]] = np.where(flip[..., None], out[..., [1, 0]], out[..., [0, 1]])
    return out


def admissible_order(t: Triple, tol: float = COLLINEAR_TOL) -> Triple:
    """Reorder ``t`` as ``(a, b, c)``: ``c`` projects inside ``[a, b]`` and the turn is counterclockwise."""
    z = t.points
    out = admissible_points(z, tol)
    perm = [int(np.flatnonzero(z == w)[0]) for w in out]
    return t.permuted(perm)


def is_admissible(t, strict: bool = True) -> bool:
    """Check both admissibility conditions directly."""
    a, b, c = as_points(t)
    ab = b - a
    s = ((c - a) * np.conj(ab)).real / abs(ab) ** 2
    inside = 0 < s < 1 if strict else 0 <= s <= 1
    return bool(inside and cross2([a, b, c]) > 0)
