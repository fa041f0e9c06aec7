"""Verification suites.

Each suite is a function ``suite_<id>(sampler, tol, default)`` returning the
number of evaluations, a list of :class:`Assertion` and extra config; it is
registered under ``<id>`` and listed in ``ALL_SUITES``.  ``run_suite`` fills in
the default sampler and tolerances, times the run and assembles the report.
The first assertion carrying a witness supplies the report's worst case.
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..curve import CurveSpec, curve_data, format_curve, lipschitz_of_derivative, parse_curve
from ..geometry import WELL, condition, menger_curvature_sq
from ..kernels import (KernelHandle, constant_phase, custom_phase, eval_k0, eval_kerzman_stein,
                       graph_phase)
from ..symmetry import (h_functional, remainder_rh, s_im_graph, s_re_graph_terms,
                        symmetrize)
from . import reproductions as rp
from .reports import Assertion, SuiteReport
from .sampling import TripleSampler

ALL_SUITES = ("melnikov", "phase_universality", "local_limit", "global_bounds", "positivity",
              "example_41", "example_42", "example_43", "lemma16", "trichotomy", "kerzman_stein")


def sinusoid_phase():
    """Smooth, non-constant phase used wherever an arbitrary ``h`` is needed."""
    return custom_phase(lambda z: np.sin(3.0 * z.real) + np.cos(2.0 * z.imag), "sinusoid")


# -- helpers ---------------------------------------------------------------

def wz(z):
    return {"z": [[float(p.real), float(p.imag)] for p in np.asarray(z).ravel()]}


def wx(xs):
    return {"xs": [float(v) for v in np.asarray(xs).ravel()]}


def check(id, value, bound, witness=None, detail="", upper=True, strict=False):
    """Assert ``value <= bound`` (or ``>=`` when ``upper`` is false)."""
    value, bound = float(value), float(bound)
    if upper:
        passed = value < bound if strict else value <= bound
        margin = bound - value
    else:
        passed = value > bound if strict else value >= bound
        margin = value - bound
    return Assertion(id, bool(passed and math.isfinite(value)), value, bound, margin, witness, detail)


def worst(values, points, kind="z", pick=np.argmax):
    values = np.asarray(values)
    i = int(pick(values))
    return float(values[i]), (wz(points[i]) if kind == "z" else wx(points[i]))


def _well(z):
    return np.asarray(condition(z)) == WELL


# -- suites ----------------------------------------------------------------

def suite_melnikov(sampler, tol, default):
    s = sampler.sample()
    keep = _well(s.z)
    z = s.z[keep]
    r = symmetrize(KernelHandle.universal(), z)
    c2 = r.c_sq
    note = f"{int((~keep).sum())} ill-conditioned triples excluded"
    out = []
    for key, val, ref in (("full", np.real(r.full), c2), ("re", r.re_part, c2 / 2),
                          ("im", r.im_part, c2 / 2)):
        v, w = worst(np.abs(val - ref) / c2, z)
        out.append(check(f"melnikov.{key}_rel", v, tol[key], w, note))
    v, w = worst(np.abs(np.imag(r.full)) / c2, z)
    out.append(check("melnikov.full_imag_rel", v, tol["full"], w))
    v, w = worst(np.abs(r.re_part + r.im_part - np.real(r.full)) / np.maximum(1.0, np.abs(r.full)), z)
    out.append(check("melnikov.split_rel", v, tol["split"], w))
    return len(z), out, {}


def suite_phase_universality(sampler, tol, default):
    s = sampler.sample()
    z = s.z[_well(s.z)]
    c2 = menger_curvature_sq(z)
    phases = [constant_phase(0.7), graph_phase(CurveSpec.parabola(1.0)), sinusoid_phase()]
    out = []
    for h in phases:
        full = symmetrize(KernelHandle.with_phase(h), z).full
        v, w = worst(np.abs(full - c2) / c2, z)
        out.append(check(f"phase_universality.{h.label}", v, tol["full"], w))
    return len(z) * len(phases), out, {"phases": [h.label for h in phases]}


def suite_local_limit(sampler, tol, default):
    if sampler.mode != "shrinking-window":
        raise ValueError("local_limit needs a shrinking-window sampler")
    spec, x0 = sampler.spec, sampler.x0
    if spec.derivatives(x0, 2)[2] == 0:
        raise ValueError(f"local_limit needs A''(x0) != 0; it vanishes at x0 = {x0}")
    k2 = float(curve_data(spec, x0).curvature) ** 2
    windows = [sampler.delta * 10.0 ** (-i) for i in range(3)]
    k = KernelHandle.restricted(spec)
    devs = {"c_sq": [], "re": [], "im": []}
    wit = {"c_sq": [], "re": [], "im": []}
    n = 0
    first = None
    for d in windows:
        s = sampler.with_(delta=d).sample()
        r = symmetrize(k, s.xs)
        n += len(s)
        for key, val in (("c_sq", np.abs(r.c_sq - k2)), ("re", np.abs(r.re_part - 1.5 * r.c_sq)),
                         ("im", np.abs(r.im_part + 0.5 * r.c_sq))):
            v, w = worst(val, s.xs, "x")
            devs[key].append(v)
            wit[key].append(w)
        if first is None:
            first = (s.xs, r)
    out = []
    for key in ("c_sq", "re", "im"):
        d = devs[key]
        ratio = max(d[i + 1] / d[i] for i in range(len(d) - 1))
        out.append(check(f"local_limit.{key}.final", d[-1], tol["final"], wit[key][-1],
                         f"window {windows[-1]:g}"))
        out.append(check(f"local_limit.{key}.decreasing", ratio, 1.0, None,
                         "largest successive ratio of window maxima: " +
                         ", ".join(f"{v:.3g}" for v in d), strict=True))
    # the ratio bounds apply once every deviation in the window is below eps~ = k0^2 / 2
    eps = k2 / 2
    bound = eps / (k2 - eps)
    xs, r = first
    v = max(devs[key][0] for key in devs)
    out.append(check("local_limit.window_ratio.applicable", v, eps, None,
                     f"largest deviation in window {windows[0]:g}", strict=True))
    v, w = worst(np.abs(r.re_part / r.c_sq - 1.5), xs, "x")
    out.append(check("local_limit.window_ratio.re_ratio", v, bound * tol["window_ratio"], w, strict=True))
    v, w = worst(np.abs(r.im_part / r.c_sq + 0.5), xs, "x")
    out.append(check("local_limit.window_ratio.im_ratio", v, bound * tol["window_ratio"], w, strict=True))
    return n, out, {"windows": windows, "kappa0_sq": k2}


def suite_global_bounds(sampler, tol, default):
    if sampler.mode != "on-curve":
        raise ValueError("global_bounds needs an on-curve sampler")
    spec = sampler.spec
    m = lipschitz_of_derivative(spec, sampler.interval)
    if not math.isfinite(m):
        raise ValueError("global_bounds needs a bounded second derivative")
    s = sampler.sample()
    r = symmetrize(KernelHandle.restricted(spec), s.xs)
    out = []
    for key, val, bound in (("re", np.abs(r.re_part), 1.5 * m * m), ("c_sq", r.c_sq, 8 * m * m),
                            ("im", np.abs(r.im_part), 9.5 * m * m)):
        v, w = worst(val, s.xs, "x")
        bound = bound * (1 + tol["slack"])
        out.append(check(f"global_bounds.{key}", v, bound, w,
                         f"{int((val > bound).sum())} violations"))
    return len(s), out, {"M": m}


POSITIVITY_CURVES = (("parabola:0.5", (-10.0, 10.0)), ("parabola:1", (-10.0, 10.0)),
                     ("cosh", (-3.0, 3.0)))


def _fixed_concavity(spec, interval):
    d2 = spec.derivatives(np.linspace(*interval, 2001)[1:-1], 2)[2]
    return bool(np.all(d2 > 0) or np.all(d2 < 0))


def suite_positivity(sampler, tol, default):
    if sampler.mode != "on-curve":
        raise ValueError("positivity needs an on-curve sampler")
    runs = [sampler]
    if default:
        for i, (text, iv) in enumerate(POSITIVITY_CURVES[1:], start=1):
            runs.append(sampler.with_(spec=parse_curve(text), interval=iv, seed=sampler.seed + i))
    out, n = [], 0
    for smp in runs:
        spec, name = smp.spec, format_curve(smp.spec)
        if not _fixed_concavity(spec, smp.interval):
            raise ValueError(f"positivity needs fixed concavity; A'' changes sign on {name}")
        s = smp.sample()
        n += len(s)
        r = symmetrize(KernelHandle.restricted(spec), s.xs)
        terms, scales = s_re_graph_terms(spec, s.xs, with_scale=True)
        v, w = worst(r.re_part, s.xs, "x", np.argmin)
        out.append(check(f"positivity.{name}.min_re", v, -tol["abs"], w, upper=False))
        rel = np.min(terms / scales, axis=1)
        v, w = worst(rel, s.xs, "x", np.argmin)
        out.append(check(f"positivity.{name}.min_term", v, -tol["term_rel"], w,
                         "smallest term divided by its local scale", upper=False))
    # local superpositivity near a point of nonzero curvature of the first curve
    spec = sampler.spec
    x0 = float(np.clip(0.0, *sampler.interval))
    k2 = float(curve_data(spec, x0).curvature) ** 2
    s = TripleSampler("shrinking-window", sampler.seed, min(sampler.count, 10000), spec,
                      x0=x0, delta=tol["window"]).sample()
    n += len(s)
    terms = s_re_graph_terms(spec, s.xs)
    dev = np.max(np.abs(terms / (k2 / 2) - 1.0), axis=1)
    v, w = worst(dev, s.xs, "x")
    out.append(check("positivity.local_superpositivity", v, tol["superpositivity"], w,
                     f"max |term / (kappa0^2/2) - 1| on window {tol['window']:g} at x0 = {x0:g}"))
    v, w = worst(s_im_graph(spec, s.xs), s.xs, "x")
    out.append(check("positivity.local_im_negative", v, 0.0, w, strict=True))
    return n, out, {"curves": [format_curve(r.spec) for r in runs]}


def suite_example_41(sampler, tol, default):
    spec = CurveSpec.bumpsine()
    k = KernelHandle.restricted(spec)
    ks = [2, 3, 4, 5]
    ratios, out = [], []
    for kk in ks:
        r = symmetrize(k, rp.bump_triple(kk))
        ratios.append(abs(r.re_part) / r.c_sq)
    growth = [ratios[i + 1] / ratios[i] for i in range(len(ratios) - 1)]
    i = int(np.argmin(growth))
    out.append(check("example_41.ratio_growth", growth[i], tol["growth"], wx(rp.bump_triple(ks[i + 1])),
                     "smallest step factor; ratios " + ", ".join(f"{v:.4g}" for v in ratios),
                     upper=False))
    out.append(check("example_41.ratio_final", ratios[-1], tol["final"], wx(rp.bump_triple(ks[-1])),
                     upper=False, strict=True))
    h = graph_phase(spec)
    lams = [0.49, 0.499, 0.4999]
    rh = [abs(remainder_rh(h, np.array([0, lam + 1j * spec.A(lam), 1])).via_formula) for lam in lams]
    g = min(rh[i + 1] / rh[i] for i in range(len(rh) - 1))
    out.append(check("example_41.remainder_growth", g, tol["growth"], None,
                     "|R_h| " + ", ".join(f"{v:.4g}" for v in rh), upper=False))
    a, d1 = spec.derivatives(0.5, 1)
    out.append(check("example_41.tangent_at_half", abs(d1 + 1.0) + abs(a), 1e-15, wx([0.5])))
    return len(ks) + len(lams), out, {"k": ks, "lambda": lams}


def suite_example_42(sampler, tol, default):
    spec = rp.PARABOLA_HALF
    k = KernelHandle.restricted(spec)
    xs2, xs10 = rp.parabola_im_triple(2.0), rp.parabola_im_triple(10.0)
    direct = symmetrize(k, xs2).im_part
    closed = float(rp.parabola_im_closed_form(2.0))
    out = [check("example_42.direct_spot", abs(direct - 0.025), tol["spot"], wx(xs2)),
           check("example_42.closed_form_spot", abs(closed - 0.025), tol["spot"], wx(xs2)),
           check("example_42.graph_form_spot", abs(s_im_graph(spec, xs2) - 0.025), tol["spot"], wx(xs2))]
    v = symmetrize(k, xs10).im_part
    out.append(check("example_42.positive_large_lambda", v, 0.0, wx(xs10), upper=False, strict=True))
    c10 = float(rp.parabola_im_closed_form(10.0))
    out.append(check("example_42.closed_form_large_lambda", abs(c10 - v) / abs(v), tol["rel"], wx(xs10)))
    return 2, out, {"lambda": [2.0, 10.0]}


def _cubic_pairs(seed, n):
    rng = np.random.default_rng(seed)
    a = np.exp(rng.uniform(np.log(0.05), np.log(5.0), n))
    lam = np.exp(rng.uniform(np.log(0.05), np.log(500.0), n))
    return a, lam


def suite_example_43(sampler, tol, default):
    spec = rp.CUBIC
    k = KernelHandle.restricted(spec)
    xs = rp.cubic_triple(1.0, 100.0)
    direct = symmetrize(k, xs).re_part
    out = [check("example_43.negative", direct, 0.0, wx(xs), strict=True)]
    parts = rp.cubic_terms(1.0, 100.0)
    out.append(check("example_43.decomposition_spot", abs(sum(parts) - direct) / abs(direct),
                     tol["decomp"], wx(xs)))
    n = tol["pairs"]
    a, lam = _cubic_pairs(sampler.seed, int(n))
    trip = rp.cubic_triple(a, lam)
    first, second, third = rp.cubic_terms(a, lam)
    v, w = worst(second, trip, "x")
    out.append(check("example_43.second_negative", v, 0.0, w, strict=True))
    direct = symmetrize(k, trip).re_part
    scale = np.abs(first) + np.abs(second) + np.abs(third)
    v, w = worst(np.abs(first + second + third - direct) / scale, trip, "x")
    out.append(check("example_43.decomposition", v, tol["decomp"], w, "relative to |I|+|II|+|III|"))
    terms = s_re_graph_terms(spec, trip)
    mine = np.stack([first, second, third], axis=-1)
    v, w = worst(np.max(np.abs(terms - mine), axis=1) / scale, trip, "x")
    out.append(check("example_43.vertex_terms", v, tol["decomp"], w))
    far = lam >= 10 * a
    v, w = worst(first[far], trip[far], "x")
    out.append(check("example_43.first_negative_far", v, 0.0, w, f"{int(far.sum())} pairs with lambda >= 10a",
                     strict=True))
    return 1 + len(a), out, {"pairs": int(n)}


def suite_lemma16(sampler, tol, default):
    spec = rp.CUBIC
    k = KernelHandle.restricted(spec)
    rng = np.random.default_rng(sampler.seed)
    n = int(tol["pairs"])
    alpha, beta = rng.uniform(0.5, 1.0, n), rng.uniform(0.5, 1.0, n)
    out, total = [], 0
    for eps in (0.01, 0.05, 0.1):
        m = lipschitz_of_derivative(spec, (-eps, eps))
        out.append(check(f"lemma16.lipschitz.{eps:g}", abs(m - 6 * eps), 1e-15))
        xs = rp.lemma16_triple(eps, alpha, beta)
        s = symmetrize(k, xs).re_part
        bound = rp.LEMMA16_C0 * (6 * eps) ** 2
        v, w = worst(s - bound, xs, "x", np.argmin)
        out.append(check(f"lemma16.lower_bound.{eps:g}", v, 0.0, w,
                         f"min S[Re] - c0 M^2 with c0 M^2 = {bound:.6g}", upper=False))
        total += n
    return total, out, {"eps": [0.01, 0.05, 0.1], "pairs": n}


def suite_trichotomy(sampler, tol, default):
    s = sampler.sample()
    z = s.z
    well = _well(z)
    out = []
    h = constant_phase(1.234)
    r, hf = remainder_rh(h, z), h_functional(h, z)
    for key, vals in (("rh_formula", np.abs(r.via_formula)), ("rh_identity", np.abs(r.via_identity)),
                      ("h_formula", np.abs(hf.via_formula - 1)), ("h_identity", np.abs(hf.via_identity - 1))):
        v, w = worst(vals[well], z[well])
        out.append(check(f"trichotomy.constant.{key}", v, tol["const"], w))
    h = sinusoid_phase()
    r, hf = remainder_rh(h, z), h_functional(h, z)
    for key, rep in (("rh", r), ("h", hf)):
        f, i = np.asarray(rep.via_formula), np.asarray(rep.via_identity)
        v, w = worst((np.abs(f - i) / np.maximum(1.0, np.abs(f)))[well], z[well])
        out.append(check(f"trichotomy.cross_path.{key}", v, tol["cross"], w))
    h = graph_phase(CurveSpec.parabola(1.0))
    rh = np.asarray(remainder_rh(h, z).via_formula)
    for key, vals, pick, upper in (("half_plus_rh_negative", 0.5 + rh, np.argmin, True),
                                   ("half_plus_rh_positive", 0.5 + rh, np.argmax, False),
                                   ("half_minus_rh_negative", 0.5 - rh, np.argmin, True),
                                   ("half_minus_rh_positive", 0.5 - rh, np.argmax, False)):
        v, w = worst(vals, z, pick=pick)
        out.append(check(f"trichotomy.sign.{key}", v, 0.0, w, upper=upper, strict=True))
    v, w = worst(np.abs(rh), z)
    out.append(check("trichotomy.unbounded", v, tol["witness"], w, upper=False, strict=True))
    return len(z), out, {"designated_phase": h.label}


def suite_kerzman_stein(sampler, tol, default):
    spec = CurveSpec.parabola(1.0)
    x = 0.3
    hs = 10.0 ** -np.arange(1, 7)
    v = np.abs(eval_kerzman_stein(spec, x + hs, np.full_like(hs, x)))
    tail = v[-3:]
    # Both terms expand as -i/h + kappa/2 + O(h), so the diagonal value is 0 and
    # |A| falls linearly in h; a relative variation below 10% cannot occur.
    out = [check("kerzman_stein.variation", (tail.max() - tail.min()) / tail.max(), tol["variation"],
                 None, "values " + ", ".join(f"{a:.6g}" for a in v), strict=True),
           check("kerzman_stein.bounded", v.max() / v[0], 1.0, None,
                 "largest value relative to the value at the widest step")]
    slope = v[2:5] / hs[2:5]
    out.append(check("kerzman_stein.linear_vanishing", (slope.max() - slope.min()) / slope.max(),
                     tol["variation"], None,
                     "|A| / h at h = 1e-3..1e-5: " + ", ".join(f"{a:.6g}" for a in slope), strict=True))
    w, zz = x + hs + 1j * (x + hs) ** 2, x + 1j * x * x
    naive = np.abs(eval_k0(w, zz) - np.conj(eval_k0(zz, w)))
    out.append(check("kerzman_stein.cauchy_difference_grows", float(np.min(naive[1:] / naive[:-1])),
                     5.0, None, "the same difference for the plain Cauchy kernel", upper=False))
    rng = np.random.default_rng(sampler.seed)
    xs = rng.uniform(-10, 10, (sampler.count, 2))
    xs = xs[xs[:, 0] != xs[:, 1]]
    val = np.abs(eval_kerzman_stein(CurveSpec.line(), xs[:, 0], xs[:, 1]))
    v_, w_ = worst(val, xs, "x")
    out.append(check("kerzman_stein.line_vanishes", v_, tol["line"], w_))
    return len(hs) + len(xs), out, {"x": x, "steps": hs.tolist()}


# -- registry --------------------------------------------------------------

@dataclass(frozen=True)
class SuiteDef:
    id: str
    func: Callable
    sampler: Callable
    tolerances: dict


def _on_curve(text, interval, seed, count):
    return lambda: TripleSampler("on-curve", seed, count, parse_curve(text), interval)


SUITES = {
    "melnikov": SuiteDef("melnikov", suite_melnikov,
                         lambda: TripleSampler("uniform-box", 7, 100_000),
                         {"full": 1e-9, "re": 1e-9, "im": 1e-9, "split": 1e-10}),
    "phase_universality": SuiteDef("phase_universality", suite_phase_universality,
                                   lambda: TripleSampler("uniform-box", 11, 10_000), {"full": 1e-9}),
    "local_limit": SuiteDef("local_limit", suite_local_limit,
                            lambda: TripleSampler("shrinking-window", 3, 20_000, CurveSpec.parabola(0.5),
                                                  x0=0.0, delta=0.1),
                            {"final": 1e-2, "window_ratio": 1.0}),
    "global_bounds": SuiteDef("global_bounds", suite_global_bounds,
                              _on_curve("parabola:1", (-10.0, 10.0), 5, 100_000), {"slack": 0.0}),
    "positivity": SuiteDef("positivity", suite_positivity,
                           _on_curve("parabola:0.5", (-10.0, 10.0), 13, 100_000),
                           {"abs": 1e-12, "term_rel": 1e-12, "superpositivity": 0.05, "window": 1e-2}),
    "example_41": SuiteDef("example_41", suite_example_41,
                           lambda: TripleSampler("uniform-box", 0, 0), {"growth": 10.0, "final": 1e3}),
    "example_42": SuiteDef("example_42", suite_example_42,
                           lambda: TripleSampler("uniform-box", 0, 0), {"spot": 1e-10, "rel": 1e-10}),
    "example_43": SuiteDef("example_43", suite_example_43,
                           lambda: TripleSampler("uniform-box", 19, 0), {"decomp": 1e-10, "pairs": 100}),
    "lemma16": SuiteDef("lemma16", suite_lemma16,
                        lambda: TripleSampler("uniform-box", 23, 0), {"pairs": 100}),
    "trichotomy": SuiteDef("trichotomy", suite_trichotomy,
                           lambda: TripleSampler("uniform-box", 17, 1000),
                           {"const": 1e-12, "cross": 1e-8, "witness": 1e3}),
    "kerzman_stein": SuiteDef("kerzman_stein", suite_kerzman_stein,
                              lambda: TripleSampler("uniform-box", 29, 1000),
                              {"variation": 0.1, "line": 1e-13}),
}


def registry_self_test() -> list:
    """Problems with the registry; empty when every defined suite is registered under 'all'."""
    module = sys.modules[__name__]
    defined = {name[len("suite_"):] for name in dir(module)
               if name.startswith("suite_") and callable(getattr(module, name))}
    problems = []
    for sid in sorted(defined - set(ALL_SUITES)):
        problems.append(f"suite {sid!r} is defined but not listed in ALL_SUITES")
    for sid in sorted(set(ALL_SUITES) ^ set(SUITES)):
        problems.append(f"suite {sid!r} is not both listed and registered")
    for sid, d in SUITES.items():
        if d.func is not getattr(module, f"suite_{sid}", None):
            problems.append(f"suite {sid!r} is registered with the wrong function")
    return problems


def default_sampler(suite: str) -> TripleSampler:
    return _lookup(suite).sampler()


def _lookup(suite):
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(ALL_SUITES)} or 'all'")
    return SUITES[suite]


def run_suite(suite: str, sampler: TripleSampler = None, tolerances: dict = None) -> SuiteReport:
    """Run one registered suite; ``sampler`` and ``tolerances`` override its defaults."""
    d = _lookup(suite)
    tol = dict(d.tolerances)
    for key, val in (tolerances or {}).items():
        if key not in tol:
            raise ValueError(f"suite {suite!r} has no tolerance {key!r}; known: {sorted(tol)}")
        tol[key] = float(val)
    is_default = sampler is None
    sampler = d.sampler() if sampler is None else sampler
    t0 = time.perf_counter()
    n, assertions, extra = d.func(sampler, tol, is_default)
    runtime = time.perf_counter() - t0
    lead = next((a for a in assertions if a.witness is not None), None)
    config = {"sampler": sampler.describe(), "tolerances": tol, **extra}
    return SuiteReport(suite, all(a.passed for a in assertions), int(n),
                       None if lead is None else lead.value, None if lead is None else lead.witness,
                       assertions, runtime, config)


def run_all(tolerances: dict = None) -> list:
    return [run_suite(sid, tolerances=(tolerances or {}).get(sid)) for sid in ALL_SUITES]
