"""Closed forms and triple families for the worked examples.

The cubic decomposition below is the per-vertex split of the graph closed
form, simplified symbolically.  ``printed_cubic_terms`` is an older, incorrect
version of the same split; it does not agree with the direct sum and is kept
only for comparison.
"""
from __future__ import annotations

import numpy as np

from ..curve import CurveSpec

# lower-bound constant for the cubic family x -> (-eps*alpha, 0, eps*beta)
LEMMA16_C0 = 1.0 / (24 * 5 ** 2 * 41)


def parabola_im_triple(lam):
    """Abscissas ``(-lam, 0, lam)``."""
    lam = np.asarray(lam, dtype=float)
    return np.stack([-lam, np.zeros_like(lam), lam], axis=-1)


def parabola_im_closed_form(lam):
    """Imaginary-part symmetrization on ``A = x**2 / 2`` at ``(-lam, 0, lam)``."""
    lam = np.asarray(lam, dtype=float)
    l2 = lam * lam
    return 32.0 / (l2 * (4.0 + l2)) * ((2.0 + l2) / (8.0 * (1.0 + l2)) - 1.0 / (4.0 + l2))


def parabola_im_reduced(lam):
    """Same quantity in lowest terms: ``4 (lam^2 - 2) / ((lam^2 + 1)(lam^2 + 4)^2)``."""
    l2 = np.asarray(lam, dtype=float) ** 2
    return 4.0 * (l2 - 2.0) / ((l2 + 1.0) * (l2 + 4.0) ** 2)


def cubic_triple(a, lam):
    """Abscissas ``(-a, 0, lam)`` on ``A = x**3``."""
    a, lam = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(lam, dtype=float))
    return np.stack([-a, np.zeros_like(a), lam], axis=-1)


def cubic_terms(a, lam):
    """``(I, II, III)``: the vertex terms at ``-a``, ``0`` and ``lam``."""
    a = np.asarray(a, dtype=float)
    lam = np.asarray(lam, dtype=float)
    q = 1.0 + (a * a - a * lam + lam * lam) ** 2
    a4, l4 = a ** 4, lam ** 4
    first = 4.0 * a * (2.0 * a - lam) / ((1.0 + a4) * (1.0 + 9.0 * a4) * q)
    second = -2.0 * a * lam / ((1.0 + a4) * (1.0 + l4))
    third = 4.0 * lam * (2.0 * lam - a) / ((1.0 + l4) * (1.0 + 9.0 * l4) * q)
    return first, second, third


def printed_cubic_terms(a, lam):
    a = np.asarray(a, dtype=float)
    lam = np.asarray(lam, dtype=float)
    first = 2 * a * (2 * a ** 2 - lam ** 2) / (
        (lam + a) * (1 + a ** 2) * (1 + a ** 2 + lam * (lam - a)) * (1 + 9 * a ** 2))
    second = -a * lam / ((1 + a ** 2) * (1 + lam ** 2))
    third = 2 * lam * (2 * lam ** 2 - a ** 2 + a * lam) / (
        (lam + a) * (1 + lam ** 2) * (1 + lam ** 2 + a * (a - lam)) * (1 + 9 * lam ** 2))
    return first, second, third


def bump_triple(k):
    """Abscissas ``(0, 1/2 - 10**-k, 1)`` approaching the collinear limit."""
    return np.array([0.0, 0.5 - 10.0 ** (-k), 1.0])


def lemma16_triple(eps, alpha, beta):
    eps, alpha, beta = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (eps, alpha, beta)))
    return np.stack([-eps * alpha, np.zeros_like(eps), eps * beta], axis=-1)


def lemma16_leading(alpha, beta):
    """Leading coefficient of half the real-part symmetrization, in units of eps**2."""
    return 4.0 * (alpha - beta) ** 2 + 3.0 * alpha * beta


def lemma16_denominator(eps, alpha, beta):
    e2 = eps * eps
    return ((1 + 9 * e2 * alpha ** 2) * (1 + 9 * e2 * beta ** 2) * (1 + e2 * e2 * alpha ** 4)
            * (1 + e2 * e2 * beta ** 4) * (1 + e2 * e2 * (beta ** 2 - alpha * beta + alpha ** 2) ** 2))


PARABOLA_HALF = CurveSpec.parabola(0.5)
CUBIC = CurveSpec.cubic()
