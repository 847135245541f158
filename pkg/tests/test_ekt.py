import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from screwcmc.ekt import (
    DomainError,
    ScrewMotion,
    SpaceParams,
    arc_cs,
    arc_cs_gap,
    arc_ct,
    axis_swap,
    cs,
    ct,
    fiber_norm,
    gen_trig,
    model_metric_block,
    partner_energy,
    quotient_metric_coeff,
    sn,
    tn,
)

kappas = st.floats(-3.0, 3.0)


@pytest.mark.parametrize(
    "kappa,tau,label",
    [
        (-1, 0, "H2xR"),
        (0, 0, "R3"),
        (1, 0, "S2xR"),
        (-1, 0.5, "PSL2R"),
        (0, 0.5, "Nil3"),
        (1, 0.2, "BergerSphere"),
        (1, 0.5, "S3"),
    ],
)
def test_geometry_labels(kappa, tau, label):
    assert SpaceParams(kappa, tau).geometry_label == label


def test_epsilon_and_domain():
    assert SpaceParams(1, 0.5).epsilon == 0
    assert SpaceParams(0, 0).epsilon == 0
    assert SpaceParams(1, 0.2).epsilon == 1
    assert SpaceParams(0, 0.5).epsilon == -1
    assert SpaceParams(4, 0).r_domain == (0.0, math.pi / 2)
    assert SpaceParams(-1, 0).r_domain == (0.0, math.inf)
    assert not SpaceParams(1, 0).in_domain(math.pi)


def test_horizontal_pitch():
    assert ScrewMotion.horizontal(SpaceParams(1, 0.4)).pitch == pytest.approx(0.8)
    assert ScrewMotion().is_rotational
    with pytest.raises(DomainError):
        ScrewMotion.horizontal(SpaceParams(0, 0.5))


def test_trig_examples():
    s, c, _, q = gen_trig(0, 2.0)
    assert (s, c, q) == (2.0, 1.0, 0.5)
    s, c, _, q = gen_trig(1, math.pi / 2)
    assert s == pytest.approx(1.0) and c == pytest.approx(0.0, abs=1e-16)
    assert q == pytest.approx(0.0, abs=1e-16)
    assert abs(sn(1e-8, 2.0) - sn(0, 2.0)) < 1e-7


def test_trig_domain_errors():
    with pytest.raises(DomainError):
        ct(1, 0.0)
    assert tn(1, math.pi / 4) == pytest.approx(1.0)
    assert math.isnan(gen_trig(1, 0.0)[3])
    with pytest.raises(DomainError):
        ct(-1, 0.0)


@given(kappas, st.floats(0.01, 3.0))
def test_pythagoras(kappa, r):
    if kappa > 0 and r >= math.pi / math.sqrt(kappa):
        return
    s, c = sn(kappa, r), cs(kappa, r)
    k = kappa if abs(kappa) >= 1e-12 else 0.0
    assert k * s * s + c * c == pytest.approx(1.0, abs=1e-9 * max(1.0, c * c))


@given(kappas, st.floats(0.01, 3.0))
def test_half_angle(kappa, r):
    half = sn(kappa, r / 2) ** 2
    k = kappa if abs(kappa) >= 1e-12 else 0.0
    assert cs(kappa, r) == pytest.approx(1 - 2 * k * half, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_kappa_continuity(sign):
    r = np.linspace(0.1, 5.0, 50)
    k = sign * 1e-8
    space0, space1 = SpaceParams(0.0, 0.3), SpaceParams(k, 0.3)
    screw = ScrewMotion(0.7)
    assert np.max(np.abs(sn(k, r) - sn(0, r))) < 1e-6
    assert np.max(np.abs(cs(k, r) - cs(0, r))) < 1e-6
    assert np.max(np.abs(ct(k, r) - ct(0, r))) < 1e-6
    c0 = quotient_metric_coeff(space0, screw, r)
    c1 = quotient_metric_coeff(space1, screw, r)
    assert np.max(np.abs(c0 - c1)) < 1e-6


def test_arc_cs_examples():
    assert arc_cs(1, 0) == pytest.approx(math.pi / 2)
    assert arc_cs(1, 1) == 0.0
    assert arc_cs(-1, math.cosh(1.3)) == pytest.approx(1.3, rel=1e-12)
    with pytest.raises(DomainError):
        arc_cs(0, 1.0)
    with pytest.raises(DomainError):
        arc_cs(1, 1.5)
    with pytest.raises(DomainError):
        arc_cs(-1, 0.5)


def test_arc_ct_examples():
    assert arc_ct(1, 1) == pytest.approx(math.pi / 4)
    assert arc_ct(1, -1) == pytest.approx(-math.pi / 4)
    assert arc_ct(0, 1) == 1.0
    H = 0.8
    assert arc_ct(0, 2 * H) == pytest.approx(1 / (2 * H))
    with pytest.raises(DomainError):
        arc_ct(-1, 0.5)
    with pytest.raises(DomainError):
        arc_ct(1, 0.0)


@given(kappas, st.floats(-10.0, 10.0))
def test_arc_ct_round_trip(kappa, x):
    if abs(x) < 1e-3 or (kappa < -1e-12 and abs(x) <= math.sqrt(-kappa) * 1.01):
        return
    r = arc_ct(kappa, x)
    assert r * x > 0
    assert float(ct(kappa, r)) == pytest.approx(x, rel=1e-12, abs=1e-12)


@given(st.floats(0.1, 3.0), st.floats(-1.0, 1.0))
def test_arc_cs_round_trip_positive(kappa, y):
    assert float(cs(kappa, arc_cs(kappa, y))) == pytest.approx(y, abs=1e-12)


@given(st.floats(-3.0, -0.1), st.floats(1.0, 50.0))
def test_arc_cs_round_trip_negative(kappa, y):
    assert float(cs(kappa, arc_cs(kappa, y))) == pytest.approx(y, rel=1e-12)


@given(kappas, st.floats(0.0, 0.5))
def test_arc_cs_gap_inverts(kappa, gap):
    if kappa > 0 and gap * kappa > 2:
        return
    r = arc_cs_gap(kappa, gap)
    k = kappa if abs(kappa) >= 1e-12 else 0.0
    # 1 - cs(r) = 2 k sn(r/2)^2 = k * gap, checked without cancellation
    assert 2 * sn(kappa, r / 2) ** 2 == pytest.approx(gap, rel=1e-10, abs=1e-15)
    if k != 0.0:
        assert float(cs(kappa, r)) == pytest.approx(1 - k * gap, abs=1e-12)


def test_fiber_norm_examples():
    assert fiber_norm(SpaceParams(0, 0), ScrewMotion(0), 2.0) == pytest.approx(2.0)
    assert fiber_norm(SpaceParams(1, 0.3), ScrewMotion(-1.7), 0.0) == pytest.approx(1.7)
    assert fiber_norm(SpaceParams(1, 0.5), ScrewMotion(0), math.pi / 2) == pytest.approx(
        math.sqrt(2)
    )


def test_quotient_coeff_examples():
    r = np.linspace(0.1, 4, 7)
    assert np.allclose(quotient_metric_coeff(SpaceParams(0, 0), ScrewMotion(0), r), 1.0)
    # horizontal pitch in S^3 at r = pi/2: |xi|^2 = 1 + (2 * 1/2 - 1)^2 = 1
    c = quotient_metric_coeff(SpaceParams(1, 0.5), ScrewMotion(1.0), math.pi / 2)
    assert c == pytest.approx(1.0)
    with pytest.raises(DomainError):
        quotient_metric_coeff(SpaceParams(1, 0.5), ScrewMotion(0.0), 0.0)


@given(kappas, st.floats(-1.0, 1.0), st.floats(-3.0, 3.0), st.floats(0.05, 0.98))
def test_quotient_coeff_matches_block_inverse(kappa, tau, a, u):
    """Oracle: invert the (theta, z) block and evaluate 1/g(grad h, grad h)."""
    space, screw = SpaceParams(kappa, tau), ScrewMotion(a)
    r = u * space.r_max if kappa > 1e-12 else 3.0 * u
    G = model_metric_block(space, r)
    dh = np.array([-a, 1.0])  # h = z - a theta
    inverse = np.linalg.solve(G, dh) @ dh
    c = quotient_metric_coeff(space, screw, r)
    assert c == pytest.approx(1.0 / inverse, rel=1e-10)


@given(st.floats(0.1, 3.0), st.floats(-1.0, 1.0), st.floats(-3.0, 3.0), st.floats(0.02, 0.98))
def test_axis_swap_is_isometry_of_quotient(kappa, tau, a, u):
    space = SpaceParams(kappa, tau)
    _, swapped, psi = axis_swap(space, ScrewMotion(a))
    r = u * space.r_max
    r2, _ = psi(r, 0.0)
    assert fiber_norm(space, swapped, r2) == pytest.approx(
        fiber_norm(space, ScrewMotion(a), r), rel=1e-10, abs=1e-12
    )
    assert quotient_metric_coeff(space, swapped, r2) == pytest.approx(
        quotient_metric_coeff(space, ScrewMotion(a), r), rel=1e-9
    )


@given(st.floats(0.1, 3.0), st.floats(-1.0, 1.0), st.floats(-3.0, 3.0))
def test_axis_swap_involution(kappa, tau, a):
    space = SpaceParams(kappa, tau)
    _, once, psi = axis_swap(space, ScrewMotion(a))
    _, twice, _ = axis_swap(space, once)
    assert twice.pitch == pytest.approx(a, abs=1e-12)
    r, h = 0.3 * space.r_max, 1.25
    assert psi(*psi(r, h)) == pytest.approx((r, h), abs=1e-15)


def test_axis_swap_examples():
    assert axis_swap(SpaceParams(1, 0.5), ScrewMotion(1))[1].pitch == 1.0
    assert axis_swap(SpaceParams(1, 0), ScrewMotion(0))[1].pitch == 0.0
    assert axis_swap(SpaceParams(4, 1), ScrewMotion(3))[1].pitch == -2.0
    with pytest.raises(DomainError):
        axis_swap(SpaceParams(0, 0.5), ScrewMotion(1))
    assert partner_energy(SpaceParams(1, 0), 0.5, -1.0) == pytest.approx(-1.0)
