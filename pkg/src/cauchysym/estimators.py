"""scikit-learn style wrappers.

``SymmetrizedForms`` maps rows of triples to their symmetrized forms, so it
can sit in a pipeline; ``ExtremalRatioSearch`` runs the extremal search in
``fit``.  Both are thin: all numerics live in the underlying modules.
"""
from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .curve import parse_curve
from .experiments.search import extremal_ratio
from .kernels import constant_phase, custom_phase, parse_kernel
from .symmetry import symmetrize

OUTPUT_COLUMNS = ("c_sq", "full_re", "full_im", "re_part", "im_part")


def _phase(phase):
    if phase is None or callable(getattr(phase, "func", None)):
        return phase
    if isinstance(phase, numbers.Real):
        return constant_phase(phase)
    if callable(phase):
        return custom_phase(phase)
    raise ValueError(f"phase must be a number or a callable, got {phase!r}")


class SymmetrizedForms(TransformerMixin, BaseEstimator):
    """Rows ``(x1, y1, x2, y2, x3, y3)`` or, for curve kernels, abscissas ``(x1, x2, x3)``.

    ``transform`` returns the columns of ``OUTPUT_COLUMNS``.
    """

    def __init__(self, kernel="k0", curve=None, phase=None):
        self.kernel = kernel
        self.curve = curve
        self.phase = phase

    def fit(self, X, y=None):
        spec = None if self.curve is None else parse_curve(self.curve)
        self.kernel_ = parse_kernel(self.kernel, spec, _phase(self.phase))
        width = 3 if self.kernel_.on_curve else 6
        X = check_array(X)
        if X.shape[1] != width:
            raise ValueError(f"{self.kernel} expects {width} columns, got {X.shape[1]}")
        self.n_features_in_ = width
        return self

    def transform(self, X):
        check_is_fitted(self, "kernel_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        if self.kernel_.on_curve:
            r = symmetrize(self.kernel_, X)
        else:
            r = symmetrize(self.kernel_, X[:, 0::2] + 1j * X[:, 1::2])
        full = np.asarray(r.full)
        return np.column_stack([r.c_sq, full.real, full.imag, r.re_part, r.im_part])

    def get_feature_names_out(self, input_features=None):
        return np.array(OUTPUT_COLUMNS, dtype=object)


class ExtremalRatioSearch(BaseEstimator):
    """Grid scan plus compass refinement; ``fit`` ignores ``X``."""

    def __init__(self, curve="parabola:0.5", objective="min-re-ratio", region=None,
                 budget=100_000, seed=0, n_restarts=3):
        self.curve = curve
        self.objective = objective
        self.region = region
        self.budget = budget
        self.seed = seed
        self.n_restarts = n_restarts

    def fit(self, X=None, y=None):
        self.report_ = extremal_ratio(parse_curve(self.curve), self.objective, self.region,
                                      self.budget, self.seed, self.n_restarts)
        self.best_value_ = self.report_.best_value
        self.best_triple_ = np.array(self.report_.arg_triple)
        return self
