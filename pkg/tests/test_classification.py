import json
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import families, negative_energy
from screwcmc import classification as cl
from screwcmc.dynamics import EnergyOutOfRange, energy_bounds, negative_floor, vertical_period
from screwcmc.ekt import ScrewMotion, SpaceParams

K = cl.SurfaceKind
NIL = SpaceParams(0, 0.5)


def test_thresholds_examples():
    th = cl.height_thresholds(NIL, ScrewMotion(3), 0.5)
    assert (th.j1, th.j2, th.case, th.epsilon) == (-2.0, -1.0, "i", -1)
    assert th.c4 == pytest.approx(8 * 0.25)
    for H in (0.3, 1.7):
        th = cl.height_thresholds(SpaceParams(1, 0), ScrewMotion(0), H)
        assert th.j1 == th.j2 == pytest.approx(-2 * H)
        assert th.case == "iii"
    th = cl.height_thresholds(SpaceParams(-1, 1), ScrewMotion(1), 1.0)
    assert th.epsilon == -1
    assert th.j1 == pytest.approx(-0.4) and th.j2 == pytest.approx(0.2)
    with pytest.raises(cl.SpaceformCase):
        cl.height_thresholds(SpaceParams(1, 0.5), ScrewMotion(1), 0.5)


def test_c5_vanishes_at_j1():
    th = cl.height_thresholds(SpaceParams(1, 0.2), ScrewMotion(0.7), 0.9)
    assert th.c5(th.j1) == pytest.approx(0.0, abs=1e-12)


@given(families())
def test_threshold_ordering(fam):
    space, screw, H = fam
    assume(not space.is_spaceform)
    th = cl.height_thresholds(space, screw, H)
    e = th.epsilon
    if th.slope > 1e-12:
        assert e * th.j1 > e * th.j2
    elif th.slope < -1e-12:
        assert e * th.j1 < e * th.j2
    else:
        assert th.j1 == th.j2


@given(families(), st.floats(0.02, 0.98))
def test_threshold_soundness(fam, frac):
    """Wherever the thresholds force the sign of h2 - h0, the quadrature agrees."""
    space, screw, H = fam
    assume(not space.is_spaceform)
    th = cl.height_thresholds(space, screw, H)
    J = negative_energy(space, H, frac)
    forced = th.forced_sign(J)
    assume(forced != 0)
    # stay off the threshold itself, where the gap may vanish
    assume(min(abs(J - th.j1), abs(J - th.j2)) > 1e-6)
    assert np.sign(vertical_period(space, screw, H, J)) == forced


def test_tube_exists_examples():
    v = cl.tube_exists(NIL, ScrewMotion(3), 0.5)
    assert v.exists and v.case == "i" and v.bound == pytest.approx(0.125)
    for a in (-2.0, 0.0, 3.0):
        assert not cl.tube_exists(SpaceParams(0, 0), ScrewMotion(a), 1.0).exists
        assert cl.tube_exists(SpaceParams(1, 0), ScrewMotion(a), 0.4).exists
        assert cl.tube_exists(SpaceParams(-1, 0), ScrewMotion(a), 1.0).case == "no-interval"


def test_tube_exists_spaceform_trichotomy():
    s3 = SpaceParams(1, 0.5)
    assert cl.tube_exists(s3, ScrewMotion(0.8), 0.5).case == "spaceform-nodoid-I"
    v = cl.tube_exists(s3, ScrewMotion(1.0), 0.5)
    assert v.exists and v.all_tubes
    assert cl.tube_exists(s3, ScrewMotion(1.2), 0.5).case == "spaceform-nodoid-II"


def test_tube_exists_bound_is_strict():
    # Nil, a tau = 1.5: bound = 0.5 / 4 = 0.125
    v = cl.tube_exists(NIL, ScrewMotion(3), math.sqrt(0.125))
    assert not v.exists and v.on_boundary and v.case == "below-bound"
    v = cl.tube_exists(NIL, ScrewMotion(3), 0.3)
    assert not v.exists and not v.on_boundary


def test_tube_energy_examples():
    cert = cl.tube_energy(SpaceParams(1, 0), ScrewMotion(0), 0.7)
    assert cert.exact and cert.j_tube == -1.4 and cert.residual < 1e-8
    cert = cl.tube_energy(NIL, ScrewMotion(3), 0.5)
    assert -2 < cert.j_tube < -1 and cert.residual < 1e-9
    assert cert.j_a < cert.j_tube < cert.j_b
    assert cert.unique_in_scan
    cert = cl.tube_energy(SpaceParams(1, 0.4), ScrewMotion(0.8), 1.0)
    assert cert.exact and cert.j_tube == pytest.approx(-2.0, abs=1e-15)
    with pytest.raises(cl.NoTube):
        cl.tube_energy(SpaceParams(0, 0), ScrewMotion(1), 1.0)


@given(families())
def test_certificates_valid(fam):
    space, screw, H = fam
    v = cl.tube_exists(space, screw, H)
    assume(v.exists and not v.all_tubes)
    cert = cl.tube_energy(space, screw, H, verdict=v)
    assert cert.residual < 1e-9
    assert abs(vertical_period(space, screw, H, cert.j_tube)) < 1e-9
    if not cert.exact:
        assert cert.j_a < cert.j_tube < cert.j_b
        th = cl.height_thresholds(space, screw, H)
        assert min(th.j1, th.j2) < cert.j_tube < max(th.j1, th.j2)


@pytest.mark.parametrize("a_tau,sign", [(0.4, 1), (0.5, 0), (0.6, -1)])
def test_spaceform_signs(a_tau, sign):
    s3, H = SpaceParams(1, 0.5), 0.6
    screw = ScrewMotion(a_tau / 0.5)
    for J in np.linspace(-4 * H, 0, 9)[1:-1]:
        d = vertical_period(s3, screw, H, J)
        if sign == 0:
            assert abs(d) < 1e-6
        else:
            assert np.sign(d) == sign and abs(d) > 1e-6


def test_classify_examples():
    space, H = SpaceParams(1, 0.2), 0.5
    j_max, _ = energy_bounds(space, H)
    c = cl.classify_surface(space, ScrewMotion(0.3), H, j_max)
    assert c.kind is K.VERTICAL_CYLINDER and c.r_minus == c.r_plus
    assert c.r_plus == pytest.approx(math.atan(1 / (2 * H)))
    assert cl.classify_surface(space, ScrewMotion(0.3), H, 0.0).kind is K.SPHERE
    assert cl.classify_surface(space, ScrewMotion(0.3), H, 0.2).kind is K.UNDULOID
    assert cl.classify_surface(NIL, ScrewMotion(3), 0.5, -0.5).kind is K.NODOID_II
    assert cl.classify_surface(NIL, ScrewMotion(3), 0.5, -3.0).kind is K.NODOID_I
    assert cl.classify_surface(SpaceParams(1, 0.5), ScrewMotion(1), 0.5, -1.0).kind is K.TUBE


def test_classify_out_of_range():
    space = SpaceParams(1, 0.2)
    j_max, j_min = energy_bounds(space, 0.5)
    with pytest.raises(EnergyOutOfRange):
        cl.classify_surface(space, ScrewMotion(0), 0.5, j_max + 1e-6)
    with pytest.raises(EnergyOutOfRange):
        cl.classify_surface(space, ScrewMotion(0), 0.5, j_min - 1e-6)


def test_classify_below_floor_uses_partner():
    space, H = SpaceParams(1, 0.2), 0.5
    j_max, j_min = energy_bounds(space, H)
    c = cl.classify_surface(space, ScrewMotion(0.3), H, j_min)
    assert c.kind is K.VERTICAL_CYLINDER and c.axis_swapped
    c = cl.classify_surface(space, ScrewMotion(0.3), H, -4 * H / space.kappa)
    assert c.kind is K.SPHERE
    c = cl.classify_surface(space, ScrewMotion(0.3), H, -2.2)
    assert c.kind is K.UNDULOID and c.partner_J == pytest.approx(0.2)


@given(families(positive_kappa=True), st.floats(0.03, 0.97))
def test_axis_swap_consistency(fam, frac):
    """Both classification routes agree; the partner family sees Delta reversed."""
    space, screw, H = fam
    J = negative_floor(space, H) * frac
    direct = cl.classify_surface(space, screw, H, J, full_range=True)
    routed = cl.classify_surface(space, screw, H, J)
    assume(abs(direct.delta) > 1e-6)
    assert routed.kind is direct.kind
    assert routed.delta == pytest.approx(direct.delta, rel=1e-7, abs=1e-9)
    assert routed.r_minus == pytest.approx(direct.r_minus, abs=1e-10)
    swapped = ScrewMotion(4 * space.tau / space.kappa - screw.pitch)
    partner = cl.classify_surface(
        space, swapped, H, -J - 4 * H / space.kappa, full_range=True
    )
    assert partner.delta == pytest.approx(-direct.delta, rel=1e-7, abs=1e-9)
    swap = {K.NODOID_I: K.NODOID_II, K.NODOID_II: K.NODOID_I, K.TUBE: K.TUBE}
    assert partner.kind is swap[direct.kind]


def test_tube_preserved_under_swap():
    space, screw, H = SpaceParams(1, 0.2), ScrewMotion(0), 0.5
    cert = cl.tube_energy(space, screw, H)
    swapped = ScrewMotion(0.8)
    j_partner = -cert.j_tube - 4 * H
    assert cl.classify_surface(space, swapped, H, j_partner, full_range=True).kind is K.TUBE


def test_scan_berger_sequence():
    res = cl.moduli_scan(SpaceParams(1, 0.2), ScrewMotion(0), 0.5, cl.JGrid(n=30))
    assert res.kind_sequence() == [
        K.VERTICAL_CYLINDER, K.UNDULOID, K.SPHERE, K.NODOID_I, K.TUBE, K.NODOID_II,
    ]
    js = [row.J for row in res.rows]
    assert js == sorted(js, reverse=True)
    assert sum(row.tube_marker for row in res.rows) == 1


def test_scan_hyperbolic_product_has_no_tube():
    res = cl.moduli_scan(SpaceParams(-1, 0), ScrewMotion(0), 1.0, cl.JGrid(n=40))
    assert K.TUBE not in res.kinds()
    assert res.tube is None


def test_scan_single_point():
    space, H = SpaceParams(1, 0.2), 0.5
    j_max, _ = energy_bounds(space, H)
    res = cl.moduli_scan(space, ScrewMotion(0.8), H, cl.JGrid(n=1, lo=j_max, hi=j_max))
    assert [row.kind for row in res.rows] == [K.VERTICAL_CYLINDER]


def test_scan_row_errors_do_not_abort():
    space, H = SpaceParams(1, 0.2), 0.5
    j_max, _ = energy_bounds(space, H)
    res = cl.moduli_scan(space, ScrewMotion(0), H, cl.JGrid(n=3, lo=0.1, hi=j_max + 1.0))
    # 1.41 and 0.76 exceed J_max; J_max itself is added as a special row
    status = [(row.kind, row.status.split(":")[0]) for row in res.rows]
    assert status == [(None, "error"), (None, "error"), (K.VERTICAL_CYLINDER, "ok"),
                      (K.UNDULOID, "ok")]


def test_report_schema():
    rep = cl.classification_report(SpaceParams(1, 0), ScrewMotion(0), 0.7, -1.4)
    json.dumps(rep)
    for key in ("kappa", "tau", "pitch", "H", "J", "class", "delta", "r_minus", "r_plus",
                "j_max", "j_min", "tube"):
        assert key in rep
    assert rep["class"] == "Tube"
    assert set(rep["tube"]) == {"exists", "case", "j1", "j2", "j_tube", "residual"}
    rep = cl.classification_report(NIL, ScrewMotion(3), 0.5, 0.1)
    assert rep["j_min"] is None and rep["class"] == "UnduloidType"
