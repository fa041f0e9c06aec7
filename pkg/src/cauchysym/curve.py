"""Graph curves ``x + i A(x)`` with derivative access.

Every evaluator is vectorized over numpy arrays of abscissas.  Built-in kinds
carry closed-form derivatives; custom curves may supply only ``A`` and fall
back to fourth-order central differences for the rest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

KINDS = ("line", "parabola", "cubic", "bumpsine", "custom")

# plateau [0.3, 0.7], support (0.1, 0.9)
BUMP_DEFAULTS = (0.3, 0.7, 0.1, 0.9)


class DomainError(ValueError):
    """Abscissa outside the open domain of a curve."""


@dataclass(frozen=True)
class CurveSpec:
    """A graph curve ``{x + i A(x) : x in (lo, hi)}``.

    Use the classmethod constructors rather than building one by hand.
    ``params`` holds the numeric parameters of the kind (slope/intercept for a
    line, the coefficient ``a`` for ``A = a x**2``, the cutoff geometry for the
    bump-sine curve).
    """

    kind: str
    params: tuple = ()
    domain: tuple = (-math.inf, math.inf)
    name: Optional[str] = None
    funcs: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain {self.domain}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def line(cls, slope: float = 0.0, intercept: float = 0.0, domain=(-math.inf, math.inf)):
        return cls("line", (float(slope), float(intercept)), tuple(domain))

    @classmethod
    def parabola(cls, a: float, domain=(-math.inf, math.inf)):
        return cls("parabola", (float(a),), tuple(domain))

    @classmethod
    def cubic(cls, domain=(-math.inf, math.inf)):
        return cls("cubic", (), tuple(domain))

    @classmethod
    def bumpsine(cls, cutoff: Sequence[float] = BUMP_DEFAULTS, domain=(-1.0, 2.0)):
        p_lo, p_hi, s_lo, s_hi = (float(c) for c in cutoff)
        if not s_lo < p_lo < 0.5 < p_hi < s_hi:
            raise ValueError("bump cutoff must satisfy s_lo < p_lo < 1/2 < p_hi < s_hi")
        if s_lo <= 0.0 or s_hi >= 1.0:
            raise ValueError("bump support must lie inside (0, 1)")
        return cls("bumpsine", (p_lo, p_hi, s_lo, s_hi), tuple(domain))

    @classmethod
    def custom(cls, A: Callable, dA: Callable = None, d2A: Callable = None,
               d3A: Callable = None, domain=(-math.inf, math.inf), name: str = "custom"):
        return cls("custom", (), tuple(domain), name, (A, dA, d2A, d3A))

    # -- evaluation -------------------------------------------------------
    @property
    def lo(self) -> float:
        return self.domain[0]

    @property
    def hi(self) -> float:
        return self.domain[1]

    def check(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all((x > self.lo) & (x < self.hi)):
            raise DomainError(f"abscissa outside ({self.lo}, {self.hi})")
        return x

    def derivatives(self, x, order: int = 2, check: bool = True):
        """Return ``[A, A', ..., A^(order)]`` at ``x`` (``order`` <= 3)."""
        if not 0 <= order <= 3:
            raise ValueError("order must be in 0..3")
        x = self.check(x) if check else np.asarray(x, dtype=float)
        if self.kind == "line":
            m, b = self.params
            out = [m * x + b, np.full_like(x, m), np.zeros_like(x), np.zeros_like(x)]
        elif self.kind == "parabola":
            (a,) = self.params
            out = [a * x * x, 2 * a * x, np.full_like(x, 2 * a), np.zeros_like(x)]
        elif self.kind == "cubic":
            out = [x ** 3, 3 * x * x, 6 * x, np.full_like(x, 6.0)]
        elif self.kind == "bumpsine":
            out = list(_bumpsine_jet(x, self.params))
            if order == 3:
                d2 = lambda t: _bumpsine_jet(t, self.params)[2]
                out.append(_central_d1(d2, x))
        else:
            out = _custom_derivatives(self.funcs, x, order)
        return out[: order + 1]

    def A(self, x, check: bool = True):
        return self.derivatives(x, 0, check)[0]

    def to_record(self) -> dict:
        """Plain key/value record; custom curves only round-trip by registered name."""
        rec = {"kind": self.kind if self.kind != "custom" else self.name}
        names = {"line": ("slope", "intercept"), "parabola": ("a",),
                 "bumpsine": ("plateau_lo", "plateau_hi", "support_lo", "support_hi")}
        for key, val in zip(names.get(self.kind, ()), self.params):
            rec[key] = val
        rec["lo"], rec["hi"] = self.domain
        return rec


@dataclass(frozen=True)
class CurvePointData:
    x: np.ndarray
    height: np.ndarray
    slope: np.ndarray
    speed: np.ndarray
    curvature: np.ndarray
    phase: np.ndarray


def point_at(spec: CurveSpec, x):
    """Plane point ``x + i A(x)``."""
    x = spec.check(x)
    return x + 1j * spec.A(x, check=False)


def curve_data(spec: CurveSpec, x) -> CurvePointData:
    A, dA, d2A = spec.derivatives(x)
    x = np.asarray(x, dtype=float)
    speed = np.sqrt(1.0 + dA * dA)
    # Im(A' - i) = -1 < 0, so the principal argument stays in (-pi, 0) and never
    # meets the branch cut: it is already the continuous branch.
    phase = np.arctan2(-1.0, dA)
    return CurvePointData(x, A, dA, speed, d2A / speed ** 3, phase)


def phase_angle(spec: CurveSpec, x, check: bool = True):
    """Continuous argument of the unit tangent ``(A' - i)/s`` at ``x``."""
    dA = spec.derivatives(x, 1, check)[1]
    return np.arctan2(-1.0, dA)


def lipschitz_of_derivative(spec: CurveSpec, interval=None, n: int = 2001) -> float:
    """Supremum of ``|A''|`` over ``interval`` (defaults to the whole domain).

    Analytic for lines, parabolas and the cubic; otherwise the maximum over
    ``n`` uniformly spaced samples.
    """
    lo, hi = spec.domain if interval is None else interval
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if lo < spec.lo or hi > spec.hi:
        raise DomainError(f"interval ({lo}, {hi}) not inside the curve domain")
    if spec.kind == "line":
        return 0.0
    if spec.kind == "parabola":
        return 2.0 * abs(spec.params[0])
    if spec.kind == "cubic":
        return 6.0 * max(abs(lo), abs(hi))
    if n < 2:
        raise ValueError("need at least two samples")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("sampled Lipschitz estimate needs a bounded interval")
    # stay strictly inside the open domain
    xs = np.linspace(lo, hi, n)
    xs = xs[(xs > spec.lo) & (xs < spec.hi)]
    return float(np.max(np.abs(spec.derivatives(xs, 2)[2])))


# -- bump-sine --------------------------------------------------------------

def _flat_jet(t):
    """exp(-1/t) for t > 0, zero otherwise, with two derivatives."""
    pos = t > 0
    ts = np.where(pos, t, 1.0)
    f = np.where(pos, np.exp(-1.0 / ts), 0.0)
    f1 = f / ts ** 2
    f2 = f * (1.0 - 2.0 * ts) / ts ** 4
    return f, f1, f2


def _step_jet(t):
    """Smooth step: 0 for t <= 0, 1 for t >= 1, with two derivatives in t."""
    f, f1, f2 = _flat_jet(t)
    r, r1, r2 = _flat_jet(1.0 - t)
    D, D1, D2 = f + r, f1 - r1, f2 + r2
    g = f / D
    g1 = (f1 - g * D1) / D
    g2 = (f2 - 2.0 * g1 * D1 - g * D2) / D
    return g, g1, g2


def _mul(u, v):
    return (u[0] * v[0], u[1] * v[0] + u[0] * v[1], u[2] * v[0] + 2 * u[1] * v[1] + u[0] * v[2])


def _bumpsine_jet(x, params):
    p_lo, p_hi, s_lo, s_hi = params
    w_up, w_dn = p_lo - s_lo, s_hi - p_hi
    g, g1, g2 = _step_jet((x - s_lo) / w_up)
    rise = (g, g1 / w_up, g2 / w_up ** 2)
    g, g1, g2 = _step_jet((s_hi - x) / w_dn)
    fall = (g, -g1 / w_dn, g2 / w_dn ** 2)
    psi = _mul(rise, fall)
    lin = (1.0 / (2 * math.pi) + (x - 0.5), np.ones_like(x), np.zeros_like(x))
    chi = _mul(lin, psi)
    k = 2 * math.pi
    sine = (np.sin(k * x), k * np.cos(k * x), -k * k * np.sin(k * x))
    return _mul(chi, sine)


# -- finite-difference fallback ----------------------------------------------

def _step(x):
    return np.maximum(1e-5, 1e-5 * np.abs(x))


def _central_d1(f, x):
    h = _step(x)
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def _central_d2(f, x):
    h = _step(x)
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def _custom_derivatives(funcs, x, order):
    A, dA, d2A, d3A = (tuple(funcs) + (None,) * 4)[:4]
    if A is None:
        raise ValueError("custom curve needs at least A")
    out = [np.asarray(A(x), dtype=float)]
    if order >= 1:
        out.append(np.asarray(dA(x), dtype=float) if dA else _central_d1(A, x))
    if order >= 2:
        if d2A:
            out.append(np.asarray(d2A(x), dtype=float))
        elif dA:
            out.append(_central_d1(dA, x))
        else:
            out.append(_central_d2(A, x))
    if order >= 3:
        if d3A:
            out.append(np.asarray(d3A(x), dtype=float))
        elif d2A:
            out.append(_central_d1(d2A, x))
        else:
            second = lambda t: _custom_derivatives(funcs, t, 2)[2]
            out.append(_central_d1(second, x))
    return out


# -- shorthand ---------------------------------------------------------------

CUSTOM_CURVES = {
    "cosh": lambda domain: CurveSpec.custom(np.cosh, np.sinh, np.cosh, np.sinh,
                                            domain=domain, name="cosh"),
}


def parse_curve(text: str, domain=None) -> CurveSpec:
    """Parse ``line[:m[:b]]``, ``parabola:<a>``, ``cubic``, ``bumpsine`` or ``cosh``."""
    head, *args = text.strip().lower().split(":")
    try:
        vals = [float(a) for a in args]
    except ValueError:
        raise ValueError(f"bad curve parameters in {text!r}") from None
    kw = {} if domain is None else {"domain": tuple(domain)}
    if head == "line" and len(vals) <= 2:
        return CurveSpec.line(*vals, **kw)
    if head == "parabola" and len(vals) == 1:
        return CurveSpec.parabola(vals[0], **kw)
    if head == "cubic" and not vals:
        return CurveSpec.cubic(**kw)
    if head == "bumpsine" and len(vals) in (0, 4):
        return CurveSpec.bumpsine(*(vals and [vals]), **kw)
    if head in CUSTOM_CURVES and not vals:
        return CUSTOM_CURVES[head](kw.get("domain", (-math.inf, math.inf)))
    raise ValueError(f"unknown curve {text!r}")


def format_curve(spec: CurveSpec) -> str:
    if spec.kind == "line":
        return "line:%r:%r" % spec.params
    if spec.kind == "parabola":
        return "parabola:%r" % spec.params
    if spec.kind == "bumpsine":
        return "bumpsine" if spec.params == BUMP_DEFAULTS else "bumpsine:" + ":".join(map(repr, spec.params))
    if spec.kind == "cubic":
        return "cubic"
    return spec.name
