import itertools

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cauchysym.curve import CurveSpec, point_at
from cauchysym.geometry import DegenerateTripleError, Triple, menger_curvature_sq, relative_area
from cauchysym.kernels import KernelHandle, constant_phase, custom_phase, graph_phase
from cauchysym.symmetry import (h_formula, h_functional, permutation_sum, real_sum, remainder_rh, rh_formula,
                                s_im_graph, s_re_graph, s_re_graph_terms, symmetrize)
from oracles import kgamma_sym, menger_c_sq_k0, parabola_im_closed, parabola_re_ratio

coord = st.floats(-3, 3, allow_nan=False)
point = st.builds(complex, coord, coord)
abscissa = st.floats(-4, 4, allow_nan=False)

SINUSOID = custom_phase(lambda z: np.sin(3 * z.real) + np.cos(2 * z.imag), "sinusoid")
PHASES = [constant_phase(0.7), graph_phase(CurveSpec.parabola(1)), SINUSOID]


def _triangle(a, b, c, floor=1e-2):
    z = np.array([a, b, c])
    assume(np.min(np.abs(z - np.roll(z, 1))) > 1e-3)
    assume(relative_area(z) > floor)
    return z


def _spread(xs, sep=1e-2):
    xs = sorted(xs)
    assume(xs[1] - xs[0] > sep and xs[2] - xs[1] > sep)
    return np.array(xs)


@settings(max_examples=100, deadline=None)
@given(a=point, b=point, c=point)
def test_melnikov_split(a, b, c):
    z = _triangle(a, b, c, 1e-4)
    r = symmetrize(KernelHandle.universal(), z)
    assert r.full.real == pytest.approx(r.c_sq, rel=1e-10)
    assert abs(r.full.imag) <= 1e-10 * r.c_sq
    assert r.re_part == pytest.approx(r.c_sq / 2, rel=1e-10)
    assert r.im_part == pytest.approx(r.c_sq / 2, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(a=point, b=point, c=point, i=st.sampled_from(range(3)))
def test_phase_universality(a, b, c, i):
    z = _triangle(a, b, c)
    r = symmetrize(KernelHandle.with_phase(PHASES[i]), z)
    assert r.full.real == pytest.approx(r.c_sq, rel=1e-10)
    assert r.re_part + r.im_part == pytest.approx(r.c_sq, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(a=point, b=point, c=point, perm=st.permutations(range(3)))
def test_permutation_invariance(a, b, c, perm):
    z = _triangle(a, b, c)
    k = KernelHandle.with_phase(SINUSOID)
    r0, r1 = symmetrize(k, z), symmetrize(k, z[list(perm)])
    assert abs(r0.full - r1.full) <= 1e-12 * abs(r0.full)
    assert r0.re_part == pytest.approx(r1.re_part, rel=1e-12, abs=1e-12 * r0.c_sq)


def test_permutation_sum_matches_real_sum_for_real_kernels():
    rng = np.random.default_rng(1)
    h = rng.normal(size=(3, 3))
    assert permutation_sum(h, np.zeros((3, 3))).real == pytest.approx(real_sum(h))


def test_literal_six_term_definition():
    z = np.array([0.2 + 0.1j, -1 + 0.7j, 0.4 - 0.9j])
    tot = 0j
    for a, b, c in itertools.permutations(range(3)):
        tot += 1 / (z[a] - z[b]) * np.conj(1 / (z[a] - z[c]))
    assert symmetrize(KernelHandle.universal(), z).full == pytest.approx(tot, rel=1e-13)


def test_thin_triangle_escalation():
    z = np.array([0, 1, 0.5 + 1e-5j])
    r = symmetrize(KernelHandle.universal(), z)
    assert r.full.real == pytest.approx(menger_c_sq_k0(z), rel=1e-12)
    assert r.re_part == pytest.approx(r.c_sq / 2, rel=1e-9)


def test_batch_matches_scalar():
    rng = np.random.default_rng(4)
    z = rng.uniform(-1, 1, (20, 3)) + 1j * rng.uniform(-1, 1, (20, 3))
    k = KernelHandle.with_phase(SINUSOID)
    batch = symmetrize(k, z)
    for i in (0, 7, 19):
        one = symmetrize(k, z[i])
        assert batch.full[i] == one.full and batch.re_part[i] == one.re_part


def test_collinear_symmetrizes_to_zero():
    r = symmetrize(KernelHandle.universal(), [0, 1, 2])
    assert abs(r.full) <= 1e-15 and r.c_sq == 0 and r.condition == "collinear"


@pytest.mark.parametrize("spec", [CurveSpec.parabola(1), CurveSpec.parabola(0.5), CurveSpec.cubic()])
@settings(max_examples=40, deadline=None)
@given(xs=st.lists(abscissa, min_size=3, max_size=3))
def test_graph_closed_forms_equal_direct_sums(spec, xs):
    xs = _spread(xs)
    r = symmetrize(KernelHandle.restricted(spec), xs)
    terms, scale = s_re_graph_terms(spec, xs, with_scale=True)
    assert abs(s_re_graph(spec, xs) - r.re_part) <= 1e-10 * scale.sum()
    assert terms.sum() == pytest.approx(s_re_graph(spec, xs))
    im_scale = max(abs(r.im_part), scale.sum())
    assert abs(s_im_graph(spec, xs) - r.im_part) <= 1e-10 * im_scale


@settings(max_examples=30, deadline=None)
@given(xs=st.lists(abscissa, min_size=3, max_size=3), a=st.floats(0.2, 2))
def test_restricted_kernel_against_mpmath(xs, a):
    xs = _spread(xs, 5e-2)
    spec = CurveSpec.parabola(a)
    full, re, im, c2 = kgamma_sym(lambda x: a * x * x, lambda x: 2 * a * x, xs)
    r = symmetrize(KernelHandle.restricted(spec), xs)
    assert r.full == pytest.approx(full, rel=1e-9, abs=1e-12 * c2)
    assert r.re_part == pytest.approx(re, rel=1e-9, abs=1e-12)
    assert r.c_sq == pytest.approx(c2, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(xs=st.lists(st.floats(-10, 10), min_size=3, max_size=3), a=st.floats(0.2, 2))
def test_parabola_ratio_identity(xs, a):
    xs = _spread(xs, 5e-2)
    spec = CurveSpec.parabola(a)
    ratio = s_re_graph(spec, xs) / menger_curvature_sq(point_at(spec, xs))
    assert ratio == pytest.approx(parabola_re_ratio(a, xs), rel=1e-8)


def test_parabola_spot_values():
    assert s_im_graph(CurveSpec.parabola(0.5), [-2, 0, 2]) == pytest.approx(0.025, abs=1e-12)
    assert s_im_graph(CurveSpec.parabola(1), [-2, 0, 2]) == pytest.approx(parabola_im_closed(1, 2), rel=1e-12)
    assert parabola_im_closed(1, 2) == pytest.approx(0.0329411764705882, rel=1e-12)


def test_line_has_no_real_symmetrization():
    spec = CurveSpec.line(0.5, 1.0)
    assert s_re_graph(spec, [-1, 0.3, 2]) == pytest.approx(0, abs=1e-14)
    assert symmetrize(KernelHandle.restricted(spec), [-1, 0.3, 2]).c_sq == 0


def test_graph_forms_reject_coincident():
    with pytest.raises(DegenerateTripleError):
        s_re_graph(CurveSpec.cubic(), [0, 0, 1])


def test_curve_kernel_needs_abscissas():
    with pytest.raises(ValueError):
        symmetrize(KernelHandle.restricted(CurveSpec.cubic()), Triple(0, 1, 1j))
    t = Triple.on_curve(CurveSpec.cubic(), [-1, 0, 1.5])
    assert symmetrize(KernelHandle.restricted(CurveSpec.cubic()), t).c_sq > 0


# -- remainder functionals -------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(a=point, b=point, c=point, v=st.floats(-10, 10))
def test_constant_phase_functionals(a, b, c, v):
    z = _triangle(a, b, c, 1e-4)
    h = constant_phase(v)
    assert abs(rh_formula(h, z)[0]) <= 1e-10
    assert h_formula(h, z)[0] == pytest.approx(1, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(a=point, b=point, c=point, i=st.sampled_from([1, 2]))
def test_formula_matches_identity(a, b, c, i):
    z = _triangle(a, b, c, 1e-3)
    rep = remainder_rh(PHASES[i], z)
    assert rep.via_formula == pytest.approx(rep.via_identity, rel=1e-8, abs=1e-8)
    rep = h_functional(PHASES[i], z)
    assert rep.via_formula == pytest.approx(rep.via_identity, rel=1e-8, abs=1e-8)


def test_formula_is_order_independent():
    z = np.array([0.3 + 0.2j, -0.8 + 0.5j, 0.1 - 0.7j])
    vals = [rh_formula(SINUSOID, z[list(p)])[0] for p in itertools.permutations(range(3))]
    assert max(vals) - min(vals) <= 1e-12 * max(map(abs, vals))


def test_dual_identity_h_zero():
    # h = 0 makes the dual kernel 1/conj(z - w); the symmetrization is c^2 again
    r = symmetrize(KernelHandle.dual_phase(constant_phase(0)), [0, 1, 1j])
    assert r.full.real == pytest.approx(2.0, abs=1e-12)


def test_rh_definition_in_mpmath():
    z = [0.1 + 0.2j, 0.9 - 0.4j, -0.5 + 0.6j]
    h = SINUSOID
    hv = h(np.array(z))
    with mpmath.workdps(40):
        p = [mpmath.mpc(v.real, v.imag) for v in z]
        k = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                if i != j:
                    k[i][j] = mpmath.expj(mpmath.mpf(float(hv[i]))) / (p[i] - p[j])
        re = sum(2 * k[j][a].real * k[j][b].real for j, a, b in ((0, 1, 2), (1, 0, 2), (2, 0, 1)))
    c2 = menger_c_sq_k0(z)
    assert remainder_rh(h, z).r_h == pytest.approx(float(re) / c2 - 0.5, rel=1e-10)


def test_functionals_reject_collinear():
    with pytest.raises(DegenerateTripleError):
        remainder_rh(SINUSOID, [0, 1, 2])
    with pytest.raises(DegenerateTripleError):
        h_functional(SINUSOID, [0, 1, 2])
