import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cauchysym.curve import (CurveSpec, DomainError, curve_data, format_curve, lipschitz_of_derivative,
                             parse_curve, phase_angle, point_at)

finite = st.floats(-5, 5, allow_nan=False)


@pytest.mark.parametrize("text,kind", [("line", "line"), ("parabola:0.5", "parabola"), ("cubic", "cubic"),
                                       ("bumpsine", "bumpsine"), ("cosh", "custom"), ("line:2:1", "line")])
def test_parse_shorthand(text, kind):
    spec = parse_curve(text)
    assert spec.kind == kind
    assert parse_curve(format_curve(spec)) == spec or kind == "custom"


@pytest.mark.parametrize("text", ["parabola", "cubic:3", "circle", "parabola:x", "bumpsine:1:2"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_curve(text)


def test_domain_checks():
    spec = CurveSpec.bumpsine()
    with pytest.raises(DomainError):
        spec.A(2.0)
    with pytest.raises(DomainError):
        point_at(spec, [0.0, 3.0])
    with pytest.raises(ValueError):
        CurveSpec.parabola(1.0, domain=(1, 1))
    with pytest.raises(ValueError):
        CurveSpec.bumpsine(cutoff=(0.6, 0.7, 0.1, 0.9))


def _fd(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-0.9, 1.9))
def test_bumpsine_derivatives_match_differences(x):
    spec = CurveSpec.bumpsine()
    A, d1, d2 = spec.derivatives(x)
    assert abs(_fd(spec.A, x) - d1) < 1e-6 * (1 + abs(d1))
    assert abs(_fd(lambda t: spec.derivatives(t, 1)[1], x) - d2) < 1e-5 * (1 + abs(d2))


def test_bumpsine_constraints():
    spec = CurveSpec.bumpsine()
    A, d1, d2 = spec.derivatives(0.5)
    assert abs(A) < 1e-15 and abs(d1 + 1) < 1e-15
    assert d2 == pytest.approx(-4 * math.pi, rel=1e-12)
    assert np.all(spec.A(np.array([-0.5, 0.05, 0.95, 1.5])) == 0)


def test_bumpsine_on_plateau():
    spec = CurveSpec.bumpsine()
    x = np.linspace(0.3, 0.7, 9)
    expected = (1 / (2 * np.pi) + x - 0.5) * np.sin(2 * np.pi * x)
    assert np.allclose(spec.A(x), expected, atol=1e-15)
    d1 = np.sin(2 * np.pi * x) + (1 + 2 * np.pi * (x - 0.5)) * np.cos(2 * np.pi * x)
    assert np.allclose(spec.derivatives(x, 1)[1], d1, atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0.1, 3), x=finite)
def test_parabola_curvature_and_phase(a, x):
    spec = CurveSpec.parabola(a)
    d = curve_data(spec, x)
    assert d.curvature == pytest.approx(2 * a / (1 + 4 * a * a * x * x) ** 1.5, rel=1e-12)
    assert -math.pi < d.phase < 0
    assert np.cos(d.phase) == pytest.approx(d.slope / d.speed, abs=1e-14)
    assert np.sin(d.phase) == pytest.approx(-1 / d.speed, abs=1e-14)


def test_phase_is_continuous_on_fine_grid():
    for spec in (CurveSpec.bumpsine(), CurveSpec.cubic(domain=(-3, 3)), CurveSpec.parabola(4)):
        lo, hi = max(spec.lo, -3), min(spec.hi, 3)
        x = np.linspace(lo, hi, 20001)[1:-1]
        jumps = np.abs(np.diff(phase_angle(spec, x)))
        assert jumps.max() < 0.05


def test_phase_values():
    assert phase_angle(CurveSpec.line(), 0.3) == pytest.approx(-math.pi / 2)
    assert phase_angle(CurveSpec.bumpsine(), 0.5) == pytest.approx(-3 * math.pi / 4)


def test_lipschitz_constants():
    assert lipschitz_of_derivative(CurveSpec.line()) == 0
    assert lipschitz_of_derivative(CurveSpec.parabola(-1.5)) == 3
    assert lipschitz_of_derivative(CurveSpec.cubic(), (-0.1, 0.05)) == pytest.approx(0.6)
    cosh = parse_curve("cosh")
    assert lipschitz_of_derivative(cosh, (-3, 3)) == pytest.approx(math.cosh(3), rel=1e-12)
    with pytest.raises(ValueError):
        lipschitz_of_derivative(cosh)
    with pytest.raises(ValueError):
        lipschitz_of_derivative(CurveSpec.bumpsine(), (1, 0))
    with pytest.raises(DomainError):
        lipschitz_of_derivative(CurveSpec.bumpsine(), (-5, 0))


def test_custom_curve_without_derivatives_uses_differences():
    spec = CurveSpec.custom(np.exp, name="exp")
    A, d1, d2 = spec.derivatives(np.array([0.0, 1.0]))
    assert np.allclose(d1, np.exp([0.0, 1.0]), rtol=1e-8)
    assert np.allclose(d2, np.exp([0.0, 1.0]), rtol=1e-4)


def test_record():
    rec = CurveSpec.parabola(0.5).to_record()
    assert rec == {"kind": "parabola", "a": 0.5, "lo": -math.inf, "hi": math.inf}
