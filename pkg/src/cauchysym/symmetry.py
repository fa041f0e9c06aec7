"""Three-point symmetrized forms and the remainder functionals built on them.

``symmetrize`` is the literal six-term permutation sum and serves as the
reference for every closed form in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from .curve import CurveSpec, point_at
from .geometry import (COLLINEAR_TOL, DegenerateTripleError, Triple, admissible_points,
                       angles, as_points, condition, cross2, is_collinear,
                       menger_curvature_sq, relative_area, side_lengths)
from .kernels import KernelHandle, PhaseFunction

# (j, k, l) with k < l, the index pattern of the real-kernel reduction
_JKL = ((0, 1, 2), (1, 0, 2), (2, 0, 1))
TWO_PI = 2.0 * np.pi

# Below this relative area the double-precision six-term sum loses more than
# ~1e-14 relative accuracy (its conditioning is eps / relative_area**2), so
# point kernels are re-summed with 40 significant digits.
ESCALATE_BELOW = 0.1
_DIGITS = 40


@dataclass(frozen=True)
class SymmetrizationResult:
    full: complex
    re_part: float
    im_part: float
    c_sq: float
    condition: str


@dataclass(frozen=True)
class RemainderReport:
    via_formula: float
    via_identity: float
    alpha21: float
    condition: str
    r_h: Optional[float] = None
    h_val: Optional[float] = None


def _unpack(t, xs=None, spec: CurveSpec = None):
    """Resolve ``(points, abscissas)`` from a Triple or raw arrays."""
    if isinstance(t, Triple):
        z, xs = t.points, (xs if xs is not None else t.xs)
        xs = None if xs is None else np.asarray(xs, dtype=float)
        return z, xs
    if spec is not None and xs is None:
        xs = np.asarray(t, dtype=float)
        return point_at(spec, xs), xs
    return as_points(t), (None if xs is None else np.asarray(xs, dtype=float))


def _scalar(v):
    return v.item() if isinstance(v, np.ndarray) and v.ndim == 0 else v


def permutation_sum(re, im):
    """Six-term sum of ``K(a, b) * conj(K(a, c))`` over orderings ``(a, b, c)``."""
    k = re + 1j * im
    total = 0j
    for j, a, b in _JKL:
        total = total + k[..., j, a] * np.conj(k[..., j, b]) + k[..., j, b] * np.conj(k[..., j, a])
    return total


def real_sum(h):
    """Symmetrization of a real kernel: ``2 * sum_j H(z_j, z_k) H(z_j, z_l)``."""
    return 2.0 * sum(h[..., j, a] * h[..., j, b] for j, a, b in _JKL)


def _precise_sums(k: KernelHandle, z):
    """``(full, re_part, im_part)`` of one triple of a point kernel, in 40 digits."""
    with mpmath.workdps(_DIGITS):
        pts = [mpmath.mpc(complex(p).real, complex(p).imag) for p in z]
        if k.variant == "k0":
            ph = [mpmath.mpf(1)] * 3
        else:
            hv = k.phase(np.asarray(z))
            sign = 1 if k.variant == "kh" else -1
            ph = [mpmath.expj(sign * mpmath.mpf(float(v))) for v in hv]

        def kern(i, j):
            if k.variant == "khstar":
                return ph[j] / (mpmath.conj(pts[j]) - mpmath.conj(pts[i]))
            return ph[i] / (pts[i] - pts[j])

        full = re = im = mpmath.mpf(0)
        for j, a, b in _JKL:
            ka, kb = kern(j, a), kern(j, b)
            full += ka * mpmath.conj(kb) + kb * mpmath.conj(ka)
            re += 2 * ka.real * kb.real
            im += 2 * ka.imag * kb.imag
        return complex(full), float(re), float(im)


def symmetrize(k: KernelHandle, t, xs=None) -> SymmetrizationResult:
    """Symmetrized form of ``k`` together with its real/imaginary split.

    ``t`` is a :class:`Triple` or an array ``(..., 3)`` of points; curve
    kernels take abscissas, from ``t.xs``, from ``xs``, or ``t`` itself when it
    is a real array.  Thin triangles under a point kernel are re-summed in
    extended precision (see ``ESCALATE_BELOW``).
    """
    if k.on_curve:
        z, xs = _unpack(t, xs, k.spec)
        if xs is None:
            raise ValueError(f"{k.variant} needs abscissas")
        z = point_at(k.spec, xs)
    else:
        z, xs = _unpack(t, xs)
    re, im = k.pairs(z, xs)
    full = np.asarray(permutation_sum(re, im))
    re_part, im_part = np.asarray(real_sum(re)), np.asarray(real_sum(im))
    if not k.on_curve:
        thin = np.asarray(relative_area(z) < ESCALATE_BELOW)
        if thin.any():
            zz = np.broadcast_to(z, thin.shape + (3,))
            for idx in zip(*np.nonzero(thin)) if thin.ndim else [()]:
                full[idx], re_part[idx], im_part[idx] = _precise_sums(k, zz[idx])
    return SymmetrizationResult(_scalar(full), _scalar(re_part), _scalar(im_part),
                                menger_curvature_sq(z), condition(z))


def _graph_terms(spec: CurveSpec, xs, part: str):
    xs = np.asarray(xs, dtype=float)
    A, dA = spec.derivatives(xs, 1)
    x = [xs[..., i] for i in range(3)]
    a = [A[..., i] for i in range(3)]
    d = [dA[..., i] for i in range(3)]
    if np.any((x[0] == x[1]) | (x[1] == x[2]) | (x[0] == x[2])):
        raise DegenerateTripleError("coincident abscissas")

    def l2(i, j):
        return (x[i] - x[j]) ** 2 + (a[i] - a[j]) ** 2

    def bracket(j, k):
        if part == "re":
            return d[j] * (x[j] - x[k]) - (a[j] - a[k])
        return (x[k] - x[j]) + d[j] * (a[k] - a[j])

    def scale(j, k):
        if part == "re":
            return np.abs(d[j] * (x[j] - x[k])) + np.abs(a[j] - a[k])
        return np.abs(x[k] - x[j]) + np.abs(d[j] * (a[k] - a[j]))

    terms, scales = [], []
    for j, k, l in _JKL:
        den = (1.0 + d[j] ** 2) * l2(j, k) * l2(j, l)
        terms.append(2.0 * bracket(j, k) * bracket(j, l) / den)
        scales.append(2.0 * scale(j, k) * scale(j, l) / den)
    return np.stack(terms, axis=-1), np.stack(scales, axis=-1)


def s_re_graph_terms(spec: CurveSpec, xs, with_scale: bool = False):
    """The three ``j``-terms of the closed form for the real part (``j`` = vertex index).

    With ``with_scale`` also returns the magnitude each term is computed from,
    i.e. the floating-point scale against which a rounding-level negative
    value should be judged.
    """
    terms, scales = _graph_terms(spec, xs, "re")
    return (terms, scales) if with_scale else terms


def s_im_graph_terms(spec: CurveSpec, xs, with_scale: bool = False):
    """Imaginary-part counterpart of :func:`s_re_graph_terms`."""
    terms, scales = _graph_terms(spec, xs, "im")
    return (terms, scales) if with_scale else terms


def s_re_graph(spec: CurveSpec, xs):
    return _scalar(np.sum(_graph_terms(spec, xs, "re")[0], axis=-1))


def s_im_graph(spec: CurveSpec, xs):
    return _scalar(np.sum(_graph_terms(spec, xs, "im")[0], axis=-1))


def _c_sq_guarded(z, tol):
    if np.any(is_collinear(z, tol)):
        raise DegenerateTripleError("collinear triple")
    c2 = menger_curvature_sq(z, tol)
    scale = np.max(side_lengths(z), axis=-1)
    if np.any(c2 < 1e-14 / scale ** 2):
        raise DegenerateTripleError("Menger curvature too small to divide by")
    return c2


def _wrap(angle):
    return np.mod(angle, TWO_PI)


def _mp_triangle(z):
    """Sides, angles, area, pref and alpha21 of one ordered triple, in mpmath."""
    p = [mpmath.mpc(complex(v).real, complex(v).imag) for v in z]
    ell = [abs(p[1] - p[2]), abs(p[0] - p[2]), abs(p[0] - p[1])]
    u, v = p[1] - p[0], p[2] - p[0]
    area = abs(u.real * v.imag - u.imag * v.real) / 2

    def at(o, a, b):
        return mpmath.acos((a * a + b * b - o * o) / (2 * a * b))

    th = [at(ell[0], ell[1], ell[2]), at(ell[1], ell[0], ell[2]), at(ell[2], ell[0], ell[1])]
    pref = ell[0] * ell[1] * ell[2] / (4 * area) ** 2
    alpha = mpmath.atan2(u.imag, u.real)
    return ell, th, area, pref, alpha


def _mp_c_sq(z):
    with mpmath.workdps(_DIGITS):
        ell, _, area, _, _ = _mp_triangle(z)
        return float((4 * area / (ell[0] * ell[1] * ell[2])) ** 2)


def _thin_rows(z):
    thin = np.asarray(relative_area(z) < ESCALATE_BELOW)
    return list(zip(*np.nonzero(thin))) if thin.ndim else ([()] if thin else [])


def _triangle_parts(z):
    ell = side_lengths(z)
    th = angles(z)
    area = np.abs(cross2(z)) / 2
    pref = np.prod(ell, axis=-1) / (4.0 * area) ** 2
    return ell, th, pref


def _rh_bracket(ell, th, g, cos):
    t1, t2 = th[0], th[1]
    return ell[0] * cos(g[0] - t1) + ell[1] * cos(g[1] + t2) - ell[2] * cos(g[2] + t2 - t1)


def _h_bracket(ell, th, hv, cos):
    return (ell[0] * cos(hv[1] - hv[2] + th[0]) + ell[1] * cos(hv[0] - hv[2] - th[1])
            + ell[2] * cos(hv[0] - hv[1] + th[2]))


def _formula(kind: str, h: PhaseFunction, z, tol: float):
    z = admissible_points(z, tol)
    hv = h(z)
    ell, th, pref = _triangle_parts(z)
    alpha = np.asarray(np.angle(z[..., 1] - z[..., 0]))
    ell_, th_, hv_ = np.moveaxis(ell, -1, 0), np.moveaxis(th, -1, 0), np.moveaxis(hv, -1, 0)
    wrapped_cos = lambda a: np.cos(_wrap(a))
    if kind == "rh":
        value = pref * _rh_bracket(ell_, th_, _wrap(2.0 * hv_ - 2.0 * alpha), wrapped_cos)
    else:
        value = 2.0 * pref * _h_bracket(ell_, th_, hv_, wrapped_cos)
    value = np.asarray(value)
    for idx in _thin_rows(z):
        with mpmath.workdps(_DIGITS):
            ell_m, th_m, _, pref_m, alpha_m = _mp_triangle(z[idx])
            hm = [mpmath.mpf(float(v)) for v in hv[idx]]
            if kind == "rh":
                g = [2 * v - 2 * alpha_m for v in hm]
                value[idx] = float(pref_m * _rh_bracket(ell_m, th_m, g, mpmath.cos))
            else:
                value[idx] = float(2 * pref_m * _h_bracket(ell_m, th_m, hm, mpmath.cos))
    return _scalar(value), _scalar(alpha)


def rh_formula(h: PhaseFunction, z, tol: float = COLLINEAR_TOL):
    """Closed form of the remainder on the admissible ordering of ``z``.

    Returns ``(value, alpha21)``; ``alpha21`` is the principal argument of
    ``z2 - z1`` in that ordering.
    """
    return _formula("rh", h, z, tol)


def h_formula(h: PhaseFunction, z, tol: float = COLLINEAR_TOL):
    """Closed form of the dual functional on the admissible ordering of ``z``."""
    return _formula("h", h, z, tol)


def _c_sq_for_division(z, tol):
    c2 = np.array(_c_sq_guarded(z, tol), dtype=float)
    for idx in _thin_rows(z):
        c2[idx] = _mp_c_sq(z[idx])
    return c2


def remainder_rh(h: PhaseFunction, t, tol: float = COLLINEAR_TOL) -> RemainderReport:
    """Deviation of the real-part symmetrization from the balanced half split."""
    z = as_points(t)
    c2 = _c_sq_for_division(z, tol)
    formula, alpha = rh_formula(h, z, tol)
    res = symmetrize(KernelHandle.with_phase(h), z)
    identity = _scalar(res.re_part / c2 - 0.5)
    return RemainderReport(formula, identity, alpha, res.condition, r_h=formula)


def h_functional(h: PhaseFunction, t, tol: float = COLLINEAR_TOL) -> RemainderReport:
    """Ratio of the dual-kernel symmetrization to the squared Menger curvature."""
    z = as_points(t)
    c2 = _c_sq_for_division(z, tol)
    formula, alpha = h_formula(h, z, tol)
    res = symmetrize(KernelHandle.dual_phase(h), z)
    identity = _scalar(np.real(res.full) / c2)
    return RemainderReport(formula, identity, alpha, res.condition, h_val=formula)
