"""Point evaluation of the Cauchy-type kernels.

The ``1/(2 pi)`` normalization of the curve-restricted kernel is dropped
throughout, so that its symmetrized form equals the squared Menger curvature
with no constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curve import CurveSpec, phase_angle
from .geometry import DegenerateTripleError

VARIANTS = ("k0", "kgamma", "kh", "khstar", "ks")

# the six ordered pairs (i, j), i != j, and the position of (j, i) for each
_ROW = np.array([0, 0, 1, 1, 2, 2])
_COL = np.array([1, 2, 0, 2, 0, 1])
_SWAP = np.array([2, 4, 0, 5, 1, 3])


def _scatter(vals):
    out = np.zeros(vals.shape[:-1] + (3, 3))
    out[..., _ROW, _COL] = vals
    return out


@dataclass(frozen=True)
class PhaseFunction:
    """Real-valued phase ``h`` on the plane, vectorized over complex arrays."""

    func: Callable
    kind: str = "custom"  # constant | graph | custom
    spec: Optional[CurveSpec] = None
    label: str = ""

    def __call__(self, z):
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=float)


def constant_phase(value: float) -> PhaseFunction:
    value = float(value)
    return PhaseFunction(lambda z: np.full(np.shape(z), value), "constant", label=f"const:{value!r}")


def graph_phase(spec: CurveSpec) -> PhaseFunction:
    """Phase constant on vertical lines, equal to the tangent argument of ``spec``.

    The closed-form evaluators of ``spec`` are used off the declared domain as
    well, which is the required continuous extension for every built-in kind.
    """
    return PhaseFunction(lambda z: phase_angle(spec, np.real(z), check=False), "graph", spec,
                         label=f"graph:{spec.kind}")


def custom_phase(func: Callable, label: str = "custom") -> PhaseFunction:
    return PhaseFunction(func, "custom", label=label)


def _distinct(w, z):
    if np.any(np.asarray(w) == np.asarray(z)):
        raise DegenerateTripleError("kernel evaluated at coincident arguments")


def eval_k0(w, z):
    _distinct(w, z)
    return 1.0 / (np.asarray(w, dtype=complex) - z)


def eval_k_h(h: PhaseFunction, w, z):
    _distinct(w, z)
    w = np.asarray(w, dtype=complex)
    return np.exp(1j * h(w)) / (w - z)


def eval_k_h_star(h: PhaseFunction, w, z):
    _distinct(w, z)
    z = np.asarray(z, dtype=complex)
    return np.exp(-1j * h(z)) / (np.conj(z) - np.conj(w))


def k_gamma_parts(spec: CurveSpec, x, y):
    """Real and imaginary parts of the restricted kernel, from abscissas."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x == y):
        raise DegenerateTripleError("kernel evaluated at coincident abscissas")
    Ax, dAx = spec.derivatives(x, 1)
    Ay = spec.A(y)
    dx, dA = x - y, Ax - Ay
    den = np.sqrt(1.0 + dAx * dAx) * (dx * dx + dA * dA)
    return (dAx * dx - dA) / den, (-dx - dAx * dA) / den


def eval_k_gamma(spec: CurveSpec, x, y):
    re, im = k_gamma_parts(spec, x, y)
    return re + 1j * im


def eval_kerzman_stein(spec: CurveSpec, x, y):
    return eval_k_gamma(spec, x, y) - np.conj(eval_k_gamma(spec, y, x))


@dataclass(frozen=True)
class KernelHandle:
    """One of the five kernels; curve kernels are evaluated through abscissas."""

    variant: str
    spec: Optional[CurveSpec] = None
    phase: Optional[PhaseFunction] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown kernel {self.variant!r}; expected one of {VARIANTS}")
        if self.variant in ("kgamma", "ks") and self.spec is None:
            raise ValueError(f"{self.variant} needs a curve")
        if self.variant in ("kh", "khstar") and self.phase is None:
            raise ValueError(f"{self.variant} needs a phase function")

    @classmethod
    def universal(cls):
        return cls("k0")

    @classmethod
    def restricted(cls, spec: CurveSpec):
        return cls("kgamma", spec=spec)

    @classmethod
    def with_phase(cls, h: PhaseFunction):
        return cls("kh", phase=h)

    @classmethod
    def dual_phase(cls, h: PhaseFunction):
        return cls("khstar", phase=h)

    @classmethod
    def kerzman_stein(cls, spec: CurveSpec):
        return cls("ks", spec=spec)

    @property
    def on_curve(self) -> bool:
        return self.variant in ("kgamma", "ks")

    def pairs(self, z=None, xs=None):
        """Kernel values ``K[..., i, j] = K(z_i, z_j)`` for the six ordered pairs.

        Returns ``(re, im)`` arrays of shape ``(..., 3, 3)``; the diagonal is 0
        and never read.  Curve kernels take the abscissas ``xs``.
        """
        if self.on_curve:
            if xs is None:
                raise ValueError(f"{self.variant} needs abscissas")
            xs = np.asarray(xs, dtype=float)
            re, im = k_gamma_parts(self.spec, xs[..., _ROW], xs[..., _COL])
            if self.variant == "ks":
                re_t, im_t = re[..., _SWAP], im[..., _SWAP]
                re, im = re - re_t, im + im_t
        else:
            z = np.asarray(z, dtype=complex)
            w, v = z[..., _ROW], z[..., _COL]
            if np.any(w == v):
                raise DegenerateTripleError("coincident points")
            if self.variant == "k0":
                k = 1.0 / (w - v)
            elif self.variant == "kh":
                k = np.exp(1j * self.phase(w)) / (w - v)
            else:
                k = np.exp(-1j * self.phase(v)) / (np.conj(v) - np.conj(w))
            re, im = k.real, k.imag
        return _scatter(re), _scatter(im)

    def __call__(self, w, z):
        """Single evaluation; for curve kernels ``w`` and ``z`` are abscissas."""
        if self.variant == "k0":
            return eval_k0(w, z)
        if self.variant == "kh":
            return eval_k_h(self.phase, w, z)
        if self.variant == "khstar":
            return eval_k_h_star(self.phase, w, z)
        if self.variant == "kgamma":
            return eval_k_gamma(self.spec, w, z)
        return eval_kerzman_stein(self.spec, w, z)


def parse_kernel(name: str, spec: CurveSpec = None, phase: PhaseFunction = None) -> KernelHandle:
    name = name.strip().lower()
    if name in ("kh", "khstar") and phase is None and spec is not None:
        phase = graph_phase(spec)
    return KernelHandle(name, spec=spec if name in ("kgamma", "ks") else None,
                        phase=phase if name in ("kh", "khstar") else None)
