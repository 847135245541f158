"""Classification of screw-motion CMC surfaces and the search for tubes.

For fixed ``(kappa, tau, a, H)`` the surfaces form a family parameterized by
the energy ``J``. Positive, zero and maximal energy give unduloid type, sphere
type and vertical cylinder; negative energy gives nodoid type I, tube or
nodoid type II according to the sign of the vertical period ``Delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .dynamics import (
    EnergyOutOfRange,
    check_supercritical,
    cylinder_radius,
    energy_bounds,
    negative_floor,
    r_extrema,
    vertical_period,
)
from .ekt import KAPPA_ZERO, ScrewMotion, SpaceParams, _kind, axis_swap


class SurfaceKind(str, Enum):
    VERTICAL_CYLINDER = "VerticalCylinder"
    UNDULOID = "UnduloidType"
    SPHERE = "SphereType"
    NODOID_I = "NodoidTypeI"
    TUBE = "Tube"
    NODOID_II = "NodoidTypeII"


class SpaceformCase(ValueError):
    """Thresholds are undefined when kappa = 4 tau^2."""


class NoTube(LookupError):
    pass


class NoSignChange(RuntimeError):
    """Existence is asserted but Delta does not change sign on the bracket."""


@dataclass(frozen=True)
class ClassTolerances:
    tol_J: float = 1e-10
    tol_delta: float = 1e-8
    tube_residual: float = 1e-9


DEFAULT_CLASS_TOL = ClassTolerances()


# ---------------------------------------------------------------------------
# thresholds


@dataclass(frozen=True)
class HeightThresholds:
    """Energies forcing the sign of ``h2 - h0``.

    With ``eps = sgn(kappa - 4 tau^2)`` and ``slope = 2 tau^2 - a tau kappa``:
    ``slope > 0`` gives ``eps J1 > eps J2``, ``eps J >= eps J1`` forcing
    ``h2 > h0`` and ``eps J <= eps J2`` forcing ``h2 < h0``; ``slope < 0``
    swaps the roles of ``J1`` and ``J2``; ``slope = 0`` collapses them.
    """

    j1: float
    j2: float
    c4: float
    slope: float
    epsilon: int
    case: str
    H: float
    kappa: float
    tau: float
    pitch: float

    def c5(self, J: float) -> float:
        k, t, a, H = self.kappa, self.tau, self.pitch, self.H
        return -16 * t * t * H * J - 16 * a * t * H * H + 4 * k * H * J + 8 * H * H

    def forced_sign(self, J: float) -> int:
        """Sign of ``h2 - h0`` forced at ``J``, or 0 if undetermined."""
        e = self.epsilon
        if self.case == "i":
            pos, neg = e * J >= e * self.j1, e * J <= e * self.j2
        elif self.case == "ii":
            pos, neg = e * J >= e * self.j2, e * J <= e * self.j1
        else:
            pos, neg = e * J > e * self.j1, e * J < e * self.j1
        return 1 if pos else (-1 if neg else 0)


def _slope(space: SpaceParams, screw: ScrewMotion) -> float:
    return 2 * space.tau**2 - screw.pitch * space.tau * space.kappa


def height_thresholds(
    space: SpaceParams, screw: ScrewMotion, H: float
) -> HeightThresholds:
    check_supercritical(space, H)
    if space.is_spaceform:
        raise SpaceformCase("kappa = 4 tau^2: use the space-form trichotomy")
    k, t, a = space.kappa, space.tau, screw.pitch
    d = space.bundle_defect
    slope = _slope(space, screw)
    j1 = 2 * H * (2 * a * t - 1) / d
    j2 = j1 - slope / (H * d)
    if abs(slope) <= KAPPA_ZERO:
        case, j2 = "iii", j1
    elif slope > 0:
        case = "i"
    else:
        case = "ii"
    return HeightThresholds(
        j1=j1,
        j2=j2,
        c4=8 * t * t - 4 * a * t * k,
        slope=slope,
        epsilon=space.epsilon,
        case=case,
        H=H,
        kappa=k,
        tau=t,
        pitch=a,
    )


# ---------------------------------------------------------------------------
# existence predicate


@dataclass(frozen=True)
class TubeVerdict:
    """Outcome of the sufficient tube-existence test for ``(kappa, tau, a, H)``.

    ``case`` is ``"i"``/``"ii"``/``"iii"`` when tubes are guaranteed,
    ``"no-interval"`` when the parameter interval excludes them for every ``H``,
    ``"below-bound"`` when ``a tau eps`` is admissible but ``H^2`` does not
    exceed the bound (no guarantee either way there), or one of
    ``"spaceform-nodoid-I"``, ``"spaceform-tubes"``, ``"spaceform-nodoid-II"``.
    """

    exists: bool
    case: str
    bound: float | None = None
    on_boundary: bool = False
    all_tubes: bool = False


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y))


def tube_exists(space: SpaceParams, screw: ScrewMotion, H: float) -> TubeVerdict:
    check_supercritical(space, H)
    k, t, a = space.kappa, space.tau, screw.pitch
    at = a * t
    if space.is_spaceform:
        if _close(at, 0.5):
            return TubeVerdict(True, "spaceform-tubes", all_tubes=True)
        if at < 0.5:
            return TubeVerdict(False, "spaceform-nodoid-I")
        return TubeVerdict(False, "spaceform-nodoid-II")

    e = space.epsilon
    x = at * e
    slope = _slope(space, screw)
    candidates = []
    if _kind(k) <= 0:
        if x < e / 2 and not _close(x, e / 2):
            candidates.append(("i", slope / (4 * at - 2)))
    else:
        mid = 2 * t * t * e / k
        if (x >= mid or _close(x, mid)) and x < e / 2 and not _close(x, e / 2):
            candidates.append(("ii", slope / (4 * at - 2)))
        low = 4 * t * t * e / k - e / 2
        if x > low and not _close(x, low) and (x <= mid or _close(x, mid)):
            candidates.append(("iii", slope / (4 * at + 2 - 16 * t * t / k)))
    if not candidates:
        return TubeVerdict(False, "no-interval")
    h2 = H * H
    boundary = None
    for case, bound in candidates:
        if _close(h2, bound):
            boundary = (case, bound)
        elif h2 > bound:
            return TubeVerdict(True, case, bound=bound)
    if boundary is not None:
        return TubeVerdict(False, "below-bound", bound=boundary[1], on_boundary=True)
    return TubeVerdict(False, "below-bound", bound=min(b for _, b in candidates))


# ---------------------------------------------------------------------------
# tube energy


@dataclass(frozen=True)
class TubeCertificate:
    """A located zero of ``J -> Delta(J)``."""

    j_a: float
    j_b: float
    j_tube: float
    residual: float
    iterations: int
    exact: bool
    extra_sign_changes: int = 0
    case: str = ""

    @property
    def unique_in_scan(self) -> bool:
        return self.extra_sign_changes == 0


def _delta(space, screw, H):
    return lambda J: vertical_period(space, screw, H, J)


def _inset(lo: float, hi: float, floor: float) -> tuple[float, float]:
    """Clip ``[lo, hi]`` to the open negative range ``(floor, 0)``."""
    width = max(hi - lo, 1e-6)
    if hi >= 0.0:
        hi = -min(1e-9, 1e-6 * width)
    if lo <= floor:
        lo = floor + min(1e-9, 1e-6 * width) * max(1.0, abs(floor))
    return lo, hi


def tube_energy(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    tol: ClassTolerances = DEFAULT_CLASS_TOL,
    n_scan: int = 64,
    verdict: TubeVerdict | None = None,
) -> TubeCertificate:
    """Locate the energy of a tube in the family for pitch ``a`` and ``H``."""
    verdict = verdict or tube_exists(space, screw, H)
    if not verdict.exists:
        raise NoTube(f"no tube guaranteed ({verdict.case})")
    delta = _delta(space, screw, H)
    floor = negative_floor(space, H)

    if verdict.all_tubes:
        # every negative energy is a tube; report the axis-symmetric one
        J = -2 * H / space.kappa
        res = abs(delta(J))
        return TubeCertificate(J, J, J, res, 0, True, 0, verdict.case)

    th = height_thresholds(space, screw, H)
    if th.case == "iii":
        J = th.j1
        if not floor < J < 0.0:
            raise NoTube(f"collapsed threshold J1={J} outside the negative range")
        res = abs(delta(J))
        if res >= tol.tube_residual:
            raise NoSignChange(f"|Delta(J1)| = {res:.3e} at the exact tube energy")
        return TubeCertificate(J, J, J, res, 0, True, 0, verdict.case)

    lo, hi = _inset(min(th.j1, th.j2), max(th.j1, th.j2), floor)
    if not lo < hi:
        raise NoSignChange(f"empty bracket after clipping: [{lo}, {hi}]")
    d_lo, d_hi = delta(lo), delta(hi)
    if not d_lo * d_hi < 0.0:
        raise NoSignChange(
            f"Delta({lo:.6g})={d_lo:.3e} and Delta({hi:.6g})={d_hi:.3e} share a sign"
        )
    j_tube, info = brentq(delta, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                          full_output=True)
    res = abs(delta(j_tube))
    if res >= tol.tube_residual:
        raise NoSignChange(f"root polish stalled: |Delta| = {res:.3e}")

    grid = np.linspace(lo, hi, n_scan + 1)
    vals = np.array([delta(J) for J in grid])
    changes = int(np.count_nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))
    return TubeCertificate(
        lo, hi, float(j_tube), res, info.iterations, False, max(changes - 1, 0), verdict.case
    )


# ---------------------------------------------------------------------------
# classification


_TOPOLOGY = {
    SurfaceKind.VERTICAL_CYLINDER: ("embedded vertical round cylinder",) * 2,
    SurfaceKind.UNDULOID: ("embedded cylinder", "immersed plane"),
    SurfaceKind.SPHERE: ("doubly punctured sphere", "immersed incomplete strip"),
    SurfaceKind.NODOID_I: ("immersed cylinder", "immersed plane"),
    SurfaceKind.NODOID_II: ("immersed cylinder", "immersed plane"),
    SurfaceKind.TUBE: (
        "torus (closed rotation orbits); embeddedness not determined",
        "torus or cylinder depending on orbit closure; not determined",
    ),
}


_SWAP_KIND = {
    SurfaceKind.NODOID_I: SurfaceKind.NODOID_II,
    SurfaceKind.NODOID_II: SurfaceKind.NODOID_I,
}


@dataclass(frozen=True)
class SurfaceClass:
    kind: SurfaceKind
    J: float
    delta: float | None
    r_minus: float
    r_plus: float
    topology: str
    axis_swapped: bool = False
    partner_pitch: float | None = None
    partner_J: float | None = None


def _topology(kind: SurfaceKind, pitch: float) -> str:
    return _TOPOLOGY[kind][0 if pitch == 0.0 else 1]


def classify_surface(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    J: float,
    tol: ClassTolerances = DEFAULT_CLASS_TOL,
    full_range: bool = False,
) -> SurfaceClass:
    """Classify the surface with energy ``J`` in the family for ``(a, H)``.

    For kappa > 0 and ``J < -2H/kappa`` the surface is classified through its
    axis-swapped partner (pitch ``4 tau/kappa - a``, energy ``-J - 4H/kappa``)
    unless ``full_range`` is set, in which case energies in ``(-4H/kappa, 0)``
    are classified directly. Energies at or below ``-4H/kappa`` always go
    through the partner.
    """
    j_max, j_min = energy_bounds(space, H)
    if J > j_max + tol.tol_J:
        raise EnergyOutOfRange(f"J={J} exceeds J_max={j_max}")
    if J < j_min - tol.tol_J:
        raise EnergyOutOfRange(f"J={J} below J_min={j_min}")

    if _kind(space.kappa) > 0:
        floor = negative_floor(space, H)
        if (not full_range and J < -2 * H / space.kappa) or J <= floor + tol.tol_J:
            _, swapped, _ = axis_swap(space, screw)
            j_partner = -J - 4 * H / space.kappa
            inner = classify_surface(space, swapped, H, j_partner, tol, full_range=False)
            # the swap reverses h, so Delta changes sign and I <-> II
            kind = _SWAP_KIND.get(inner.kind, inner.kind)
            r_top = space.r_max
            return replace(
                inner,
                kind=kind,
                delta=None if inner.delta is None else -inner.delta,
                r_minus=r_top - inner.r_plus,
                r_plus=r_top - inner.r_minus,
                topology=_topology(kind, screw.pitch),
                J=J,
                axis_swapped=True,
                partner_pitch=swapped.pitch,
                partner_J=j_partner,
            )

    a = screw.pitch
    if abs(J - j_max) <= tol.tol_J:
        r0 = cylinder_radius(space, H)
        kind = SurfaceKind.VERTICAL_CYLINDER
        return SurfaceClass(kind, J, None, r0, r0, _topology(kind, a))
    if abs(J) <= tol.tol_J:
        kind = SurfaceKind.SPHERE
        return SurfaceClass(kind, J, None, 0.0, 2 * cylinder_radius(space, H), _topology(kind, a))
    r_minus, r_plus = r_extrema(space, H, J)
    if J > 0.0:
        kind = SurfaceKind.UNDULOID
        return SurfaceClass(kind, J, None, r_minus, r_plus, _topology(kind, a))
    delta = vertical_period(space, screw, H, J)
    if delta > tol.tol_delta:
        kind = SurfaceKind.NODOID_I
    elif delta < -tol.tol_delta:
        kind = SurfaceKind.NODOID_II
    else:
        kind = SurfaceKind.TUBE
    return SurfaceClass(kind, J, delta, r_minus, r_plus, _topology(kind, a))


# ---------------------------------------------------------------------------
# moduli scan


@dataclass(frozen=True)
class JGrid:
    """``n`` energies spread over ``[lo, hi]``; ``None`` picks the family's range.

    ``include_special`` adds ``J = 0`` and ``J = J_max`` when they fall inside.
    """

    n: int = 41
    lo: float | None = None
    hi: float | None = None
    include_special: bool = True


@dataclass(frozen=True)
class ScanRow:
    J: float
    kind: SurfaceKind | None
    delta: float | None
    r_minus: float | None
    r_plus: float | None
    status: str = "ok"
    tube_marker: bool = False
    axis_swapped: bool = False


@dataclass(frozen=True)
class ScanResult:
    rows: list[ScanRow]
    j_max: float
    j_min: float
    tube: TubeCertificate | None = None
    verdict: TubeVerdict | None = None
    notes: list[str] = field(default_factory=list)

    def kinds(self) -> list[SurfaceKind]:
        return [row.kind for row in self.rows if row.kind is not None]

    def kind_sequence(self) -> list[SurfaceKind]:
        """Classes in order of decreasing J with repeats collapsed."""
        seq: list[SurfaceKind] = []
        for kind in self.kinds():
            if not seq or seq[-1] is not kind:
                seq.append(kind)
        return seq


def default_energy_window(
    space: SpaceParams, screw: ScrewMotion, H: float
) -> tuple[float, float, bool]:
    """``(lo, hi, lo_open)`` covering the family's energies.

    kappa > 0: ``(-4H/kappa, J_max]``. Otherwise the range is unbounded below;
    it is cut at ``-max(1/H, 2|J1|, 2|J2|)`` over the negative thresholds.
    """
    j_max, _ = energy_bounds(space, H)
    if _kind(space.kappa) > 0:
        return negative_floor(space, H), j_max, True
    spread = [1.0 / H]
    if not space.is_spaceform:
        th = height_thresholds(space, screw, H)
        spread += [2 * abs(j) for j in (th.j1, th.j2) if j < 0]
    return -max(spread), j_max, False


def scan_energies(space: SpaceParams, screw: ScrewMotion, H: float, grid: JGrid) -> list[float]:
    d_lo, d_hi, lo_open = default_energy_window(space, screw, H)
    lo = d_lo if grid.lo is None else grid.lo
    hi = d_hi if grid.hi is None else grid.hi
    if grid.lo is not None:
        lo_open = False
    if grid.n == 1:
        energies = [hi]
    elif lo_open:
        energies = list(np.linspace(hi, lo, grid.n + 1)[:-1])
    else:
        energies = list(np.linspace(hi, lo, grid.n))
    if grid.include_special:
        for special in (0.0, d_hi):
            if lo <= special <= hi and all(abs(special - e) > 1e-12 for e in energies):
                energies.append(special)
    return sorted((float(e) for e in energies), reverse=True)


def moduli_scan(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    grid: JGrid = JGrid(),
    tol: ClassTolerances = DEFAULT_CLASS_TOL,
    full_range: bool = True,
) -> ScanResult:
    """Classify each grid energy; rows are ordered by decreasing J.

    When the family contains a tube inside the scanned window, its located
    energy is inserted as a row with ``tube_marker`` set. Per-point failures
    become rows with an error ``status``.
    """
    j_max, j_min = energy_bounds(space, H)
    energies = scan_energies(space, screw, H, grid)
    rows = []
    for J in energies:
        try:
            c = classify_surface(space, screw, H, J, tol, full_range=full_range)
            rows.append(ScanRow(J, c.kind, c.delta, c.r_minus, c.r_plus,
                                axis_swapped=c.axis_swapped))
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            rows.append(ScanRow(J, None, None, None, None, status=f"error: {exc}"))

    verdict = tube_exists(space, screw, H)
    cert = None
    notes = []
    if verdict.exists:
        try:
            cert = tube_energy(space, screw, H, tol, verdict=verdict)
        except (NoTube, NoSignChange) as exc:
            notes.append(f"tube search failed: {exc}")
    lo, hi = min(energies), max(energies)
    if cert is not None and lo <= cert.j_tube <= hi and not verdict.all_tubes:
        r_minus, r_plus = r_extrema(space, H, cert.j_tube)
        marker = ScanRow(cert.j_tube, SurfaceKind.TUBE, cert.residual, r_minus, r_plus,
                         tube_marker=True)
        rows.append(marker)
        rows.sort(key=lambda row: row.J, reverse=True)
    return ScanResult(rows, j_max, j_min, cert, verdict, notes)


def classification_report(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    J: float,
    tol: ClassTolerances = DEFAULT_CLASS_TOL,
    full_range: bool = False,
) -> dict:
    """JSON-ready report for one surface plus the family's tube data."""
    c = classify_surface(space, screw, H, J, tol, full_range)
    j_max, j_min = energy_bounds(space, H)
    verdict = tube_exists(space, screw, H)
    j1 = j2 = None
    if not space.is_spaceform:
        th = height_thresholds(space, screw, H)
        j1, j2 = th.j1, th.j2
    j_tube = residual = None
    if verdict.exists:
        try:
            cert = tube_energy(space, screw, H, tol, verdict=verdict)
            j_tube, residual = cert.j_tube, cert.residual
        except (NoTube, NoSignChange):
            pass
    report = {
        "kappa": space.kappa,
        "tau": space.tau,
        "pitch": screw.pitch,
        "H": H,
        "J": J,
        "class": c.kind.value,
        "delta": c.delta,
        "r_minus": c.r_minus,
        "r_plus": c.r_plus,
        "j_max": j_max,
        "j_min": None if math.isinf(j_min) else j_min,
        "tube": {
            "exists": verdict.exists,
            "case": verdict.case,
            "j1": j1,
            "j2": j2,
            "j_tube": j_tube,
            "residual": residual,
        },
    }
    if c.axis_swapped:
        report["axis_swap"] = {"pitch": c.partner_pitch, "J": c.partner_J}
    report["topology"] = c.topology
    return report
