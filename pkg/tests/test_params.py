import pytest
from hypothesis import given, strategies as st

from divlab.params import ParamPoint


def test_chart_conversion_values():
    pt = ParamPoint.from_alpha_z(2.0, 1.0)
    assert (pt.p, pt.q, pt.s) == (2.0, -1.0, 1.0)
    pt = ParamPoint.from_alpha_z(0.5, 1.0)
    assert (pt.p, pt.q, pt.s) == (0.5, 0.5, 1.0)


def test_alpha_z_roundtrip_exact():
    pt = ParamPoint.from_alpha_z(1.7, 0.85)
    assert pt.to_alpha_z() == (1.7, 0.85)


def test_pqs_roundtrip_on_slice():
    pt = ParamPoint.from_pqs(1.5, -0.5, 1.0)
    alpha, z = pt.to_alpha_z()
    back = ParamPoint.from_alpha_z(alpha, z)
    assert abs(back.p - pt.p) <= 1e-15 * abs(pt.p)
    assert abs(back.q - pt.q) <= 1e-15 * abs(pt.q)
    assert abs(back.s - pt.s) <= 1e-15 * abs(pt.s)


def test_off_slice_rejected():
    with pytest.raises(ValueError, match="slice"):
        ParamPoint.from_pqs(1.0, 1.0, 3.0).to_alpha_z()


def test_sum_zero_rejected():
    with pytest.raises(ValueError, match="p \\+ q = 0"):
        ParamPoint.from_pqs(1.0, -1.0, 1.0).to_alpha_z()


def test_invalid_parameters():
    with pytest.raises(ValueError):
        ParamPoint.from_alpha_z(1.0, 1.0)
    with pytest.raises(ValueError):
        ParamPoint.from_alpha_z(2.0, 0.0)
    with pytest.raises(ValueError):
        ParamPoint.from_alpha_z(-0.3, 1.0)
    with pytest.raises(ValueError):
        ParamPoint.from_pqs(1.0, 1.0, 0.0)


@given(
    alpha=st.floats(0.01, 10.0).filter(lambda a: abs(a - 1.0) > 1e-6),
    z=st.floats(0.01, 10.0),
)
def test_chart_roundtrip_property(alpha, z):
    pt = ParamPoint.from_alpha_z(alpha, z)
    assert pt.on_alpha_z_slice
    assert pt.to_alpha_z() == (alpha, z)
    # the slice relation s = 1/(p+q) holds to rounding
    assert abs(pt.s * (pt.p + pt.q) - 1.0) <= 1e-12
