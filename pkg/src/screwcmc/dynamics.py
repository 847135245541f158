"""Profile curves of screw-motion CMC surfaces.

A unit-speed profile curve ``(r, h)`` in the quotient space, with ``sigma`` the
angle between ``d/dr`` and the tangent, generates a surface of constant mean
curvature ``H`` exactly when::

    r'     = cos(sigma)
    h'     = |xi_a|(r) / sn(r) * sin(sigma)
    sigma' = 2H - ct(r) sin(sigma)

The energy ``J = (2H/kappa)(cs(r) - 1) + sn(r) sin(sigma)`` is a first
integral. We evaluate it as ``-4H sn(r/2)^2 + sn(r) sin(sigma)``, which is the
same function written so that it is continuous through ``kappa = 0``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, TextIO

import numpy as np
from scipy.integrate import DOP853, OdeSolution
from scipy.optimize import brentq

from . import quadrature
from .ekt import (
    DomainError,
    ScrewMotion,
    SpaceParams,
    _kind,
    arc_cs_gap,
    arc_ct_recip,
    cs,
    fiber_norm,
    sn,
)

HALF_PI = 0.5 * math.pi


class SubcriticalError(ValueError):
    """Mean curvature is not supercritical (needs H > 0 and 4H^2 + kappa > 0)."""


class EnergyOutOfRange(ValueError):
    """The energy lies outside the range admitted by the requested operation."""


class IntegrationError(RuntimeError):
    pass


class MaxStepsExceeded(IntegrationError):
    pass


class EnergyDriftExceeded(IntegrationError):
    pass


class EventNotFound(IntegrationError):
    """A terminal event guaranteed by the theory was not observed."""


class Regime(str, Enum):
    CYLINDER = "Cylinder"
    POSITIVE = "Positive"
    ZERO = "Zero"
    NEGATIVE = "Negative"


@dataclass(frozen=True)
class ProfileState:
    t: float
    r: float
    h: float
    sigma: float


@dataclass(frozen=True)
class Tolerances:
    """Numerical settings shared by the integrator and the classifiers."""

    rtol: float = 1e-10
    atol: float = 1e-10
    drift: float = 1e-8
    max_steps: int = 1_000_000
    r_axis_eps: float = 1e-6
    tol_J: float = 1e-10
    event_xtol: float = 1e-14
    # cap on the turn of a circle of curvature 2H within one step
    max_step_angle: float = 0.25


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class EnergyLevel:
    H: float
    J: float
    j_max: float
    j_min: float
    regime: Regime


def check_supercritical(space: SpaceParams, H: float) -> None:
    if not H > 0.0:
        raise SubcriticalError(f"H must be positive (got {H})")
    if not 4.0 * H * H + space.kappa > 0.0:
        raise SubcriticalError(
            f"subcritical mean curvature: 4H^2 + kappa = {4 * H * H + space.kappa:g} <= 0"
        )


def energy_bounds(space: SpaceParams, H: float) -> tuple[float, float]:
    """Return ``(J_max, J_min)``; ``J_min`` is ``-inf`` unless kappa > 0.

    ``J_max = (sqrt(4H^2 + kappa) - 2H) / kappa`` is evaluated as
    ``1 / (sqrt(4H^2 + kappa) + 2H)``, which also covers kappa = 0.
    """
    check_supercritical(space, H)
    j_max = 1.0 / (math.sqrt(4.0 * H * H + space.kappa) + 2.0 * H)
    if _kind(space.kappa) > 0:
        return j_max, -j_max - 4.0 * H / space.kappa
    return j_max, -math.inf


def negative_floor(space: SpaceParams, H: float) -> float:
    """Lower end of the (open) negative-energy range: ``-4H/kappa`` or ``-inf``."""
    if _kind(space.kappa) > 0:
        return -4.0 * H / space.kappa
    return -math.inf


def energy_level(
    space: SpaceParams, H: float, J: float, tol_J: float = DEFAULT_TOL.tol_J
) -> EnergyLevel:
    j_max, j_min = energy_bounds(space, H)
    if abs(J - j_max) <= tol_J:
        regime = Regime.CYLINDER
    elif J > j_max:
        raise EnergyOutOfRange(f"J={J} exceeds J_max={j_max}")
    elif abs(J) <= tol_J:
        regime = Regime.ZERO
    elif J > 0.0:
        regime = Regime.POSITIVE
    elif J > negative_floor(space, H):
        regime = Regime.NEGATIVE
    else:
        raise EnergyOutOfRange(
            f"J={J} <= -4H/kappa: the curve winds around the opposite axis; "
            "use the axis-swapped pitch and energy -J - 4H/kappa"
        )
    return EnergyLevel(H=H, J=J, j_max=j_max, j_min=j_min, regime=regime)


def energy(space: SpaceParams, H: float, r, sigma):
    """First integral ``J(r, sigma)``."""
    s = sn(space.kappa, r)
    half = sn(space.kappa, np.asarray(r) / 2.0)
    return -4.0 * H * half * half + s * np.sin(sigma)


def cylinder_radius(space: SpaceParams, H: float) -> float:
    """Radius ``arct(2H)`` of the vertical CMC cylinder."""
    check_supercritical(space, H)
    return float(arc_ct_recip(space.kappa, 1.0 / (2.0 * H)))


def r_extrema(space: SpaceParams, H: float, J: float) -> tuple[float, float]:
    """Minimal and maximal radius ``(r_-, r_+)`` on the energy level ``J``.

    Positive energy: ``arct(2H) -/+ arcs(y)``; negative energy:
    ``-/+ arct(2H) + arcs(y)``, with ``y = (kappa J + 2H) / sqrt(4H^2 + kappa)``.
    ``arcs(y)`` is taken through ``1 - y = kappa (J_max - J) / sqrt(4H^2 + kappa)``.
    """
    j_max, _ = energy_bounds(space, H)
    if J > j_max + 1e-14:
        raise DomainError(f"J={J} above J_max={j_max}")
    if J <= negative_floor(space, H):
        raise DomainError(f"J={J} <= -4H/kappa leaves the domain of r")
    root = math.sqrt(4.0 * H * H + space.kappa)
    rho = arc_cs_gap(space.kappa, max(j_max - J, 0.0) / root)
    base = cylinder_radius(space, H)
    if J >= 0.0:
        return max(base - rho, 0.0), base + rho
    return rho - base, rho + base


def r_of_sigma(space: SpaceParams, H: float, J: float, sigma, branch: int = +1):
    """Radius on the energy level ``J`` at angle ``sigma``.

    Inverts the energy as ``r = arct(2H / sin sigma) +/- arcs(...)`` with the
    odd ``arct`` branch, so the negative-energy solution (``branch=+1``) is
    continuous across ``sigma = pi``. ``branch=-1`` selects the inner radius
    of a positive-energy curve.
    """
    s = np.sin(sigma)
    root = np.sqrt(4.0 * H * H + space.kappa * s * s)
    gap = (s * s / (root + 2.0 * H) - J) / root
    if np.any(gap < -1e-13):
        raise DomainError(f"no radius with J={J} at sigma={sigma}")
    base = arc_ct_recip(space.kappa, s / (2.0 * H))
    return base + branch * arc_cs_gap(space.kappa, np.maximum(gap, 0.0))


def ode_rhs(
    space: SpaceParams, screw: ScrewMotion, H: float, state: ProfileState
) -> tuple[float, float, float]:
    """``(r', h', sigma')`` at ``state``."""
    if not space.in_domain(state.r):
        raise DomainError(f"r={state.r} outside {space.r_domain}")
    return tuple(_make_rhs(space, screw, H)(state.t, (state.r, state.h, state.sigma)))


def _make_rhs(space: SpaceParams, screw: ScrewMotion, H: float):
    kappa, tau, a = space.kappa, space.tau, screw.pitch
    k = _kind(kappa)
    if k > 0:
        q = math.sqrt(kappa)
        sn_, cs_ = (lambda x: math.sin(q * x) / q), (lambda x: math.cos(q * x))
    elif k < 0:
        q = math.sqrt(-kappa)
        sn_, cs_ = (lambda x: math.sinh(q * x) / q), (lambda x: math.cosh(q * x))
    else:
        sn_, cs_ = (lambda x: x), (lambda x: 1.0)
    two_h = 2.0 * H

    def rhs(t, y):
        r, _, sig = y[0], y[1], y[2]
        s = sn_(r)
        half = sn_(0.5 * r)
        m = 4.0 * tau * half * half - a
        ss = math.sin(sig)
        return np.array(
            [
                math.cos(sig),
                math.sqrt(s * s + m * m) / s * ss,
                two_h - cs_(r) / s * ss,
            ]
        )

    return rhs


# ---------------------------------------------------------------------------
# event-driven integration


@dataclass
class _Event:
    name: str
    g: Callable[[float, np.ndarray], float]
    direction: int
    terminal: bool = False
    requires: str | None = None


@dataclass(frozen=True)
class Trajectory:
    """Accepted steps of one integration run plus its dense output."""

    t: np.ndarray
    r: np.ndarray
    h: np.ndarray
    sigma: np.ndarray
    j_drift: np.ndarray
    events: dict
    dense: OdeSolution
    n_steps: int

    @property
    def max_energy_drift(self) -> float:
        return float(np.max(np.abs(self.j_drift)))


def _crossed(g0: float, g1: float, direction: int) -> bool:
    if direction > 0:
        return g0 < 0.0 <= g1
    if direction < 0:
        return g0 > 0.0 >= g1
    return (g0 < 0.0 <= g1) or (g0 > 0.0 >= g1)


def _run(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    y0,
    *,
    t_end: float,
    events: list[_Event],
    tol: Tolerances,
    j_ref: float,
) -> Trajectory:
    rhs = _make_rhs(space, screw, H)
    max_step = tol.max_step_angle / (2.0 * abs(H)) if tol.max_step_angle else math.inf
    solver = DOP853(
        rhs,
        0.0,
        np.asarray(y0, dtype=float),
        t_end,
        rtol=tol.rtol,
        atol=tol.atol,
        max_step=max_step,
    )
    r_hi = space.r_max
    ts, ys, interps = [0.0], [solver.y.copy()], []
    max_drift = 0.0
    fired: dict[str, tuple[float, np.ndarray]] = {}
    steps = 0
    terminal_hit = None

    def drift_of(y):
        return float(energy(space, H, y[0], y[2])) - j_ref

    while solver.status == "running":
        if steps >= tol.max_steps:
            raise MaxStepsExceeded(f"no terminal event within {steps} steps")
        msg = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integrator failed: {msg}")
        steps += 1
        dense = solver.dense_output()
        t0, t1 = solver.t_old, solver.t
        y_old, y_new = ys[-1], solver.y.copy()

        # interior events, earliest first
        hits = []
        for ev in events:
            if ev.name in fired:
                continue
            lo = t0
            if ev.requires is not None:
                if ev.requires in fired:
                    lo = max(t0, fired[ev.requires][0])
                else:
                    pending = [h for h in hits if h[1].name == ev.requires]
                    if not pending:
                        continue
                    lo = pending[0][0]
            y_lo = y_old if lo == t0 else dense(lo)
            g0, g1 = ev.g(lo, y_lo), ev.g(t1, y_new)
            if not _crossed(g0, g1, ev.direction):
                continue
            if g1 == 0.0:
                te = t1
            else:
                te = brentq(lambda t: ev.g(t, dense(t)), lo, t1, xtol=tol.event_xtol)
            hits.append((te, ev))
        hits.sort(key=lambda item: item[0])
        for te, ev in hits:
            fired[ev.name] = (te, dense(te))
            if ev.terminal:
                terminal_hit = (te, ev)
                break
        if terminal_hit is not None:
            te = terminal_hit[0]
            y_new = dense(te)
            t1 = te
        drift = drift_of(y_new)
        max_drift = max(max_drift, abs(drift))
        ts.append(t1)
        ys.append(y_new)
        interps.append(dense)
        if max_drift > tol.drift:
            raise EnergyDriftExceeded(
                f"energy drift {max_drift:.3e} exceeds {tol.drift:.1e} at t={t1:.6g}"
            )
        if terminal_hit is not None:
            break
        r_now = y_new[0]
        if not (0.0 < r_now < r_hi):
            raise EventNotFound(f"trajectory left the domain at t={t1:.6g} (r={r_now})")

    y = np.array(ys)
    if interps:
        dense_all = OdeSolution(np.array(ts), interps)
    else:  # pragma: no cover - degenerate zero-length run
        dense_all = None
    drift_col = np.array([drift_of(row) for row in y])
    return Trajectory(
        t=np.array(ts),
        r=y[:, 0],
        h=y[:, 1],
        sigma=y[:, 2],
        j_drift=drift_col,
        events={k: v[0] for k, v in fired.items()},
        dense=dense_all,
        n_steps=steps,
    )


def integrate_curve(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    start: ProfileState,
    t_end: float,
    tol: Tolerances = DEFAULT_TOL,
) -> Trajectory:
    """Integrate from an arbitrary state over ``[0, t_end]`` without events.

    ``H`` may be negative here (reflected curves solve the system for ``-H``).
    """
    j_ref = float(energy(space, H, start.r, start.sigma))
    traj = _run(
        space,
        screw,
        H,
        (start.r, start.h, start.sigma),
        t_end=t_end,
        events=[],
        tol=tol,
        j_ref=j_ref,
    )
    return traj


@dataclass(frozen=True)
class HalfArc:
    """One fundamental arc from ``sigma = pi/2`` at ``r_+`` to the terminal event.

    For positive and negative energy ``t1`` is the interior event (maximum
    of sigma resp. ``sigma = pi``) and ``t2`` the terminal one. For zero
    energy both are the time at which ``r`` reaches the axis cutoff.
    """

    space: SpaceParams
    screw: ScrewMotion
    H: float
    J: float
    regime: Regime
    traj: Trajectory
    t1: float
    t2: float
    h0: float
    h2: float
    h_prime_terminal: float | None = None
    h_prime_limit: float | None = None
    h_prime_integrated: float | None = None

    @property
    def max_energy_drift(self) -> float:
        return self.traj.max_energy_drift

    @property
    def samples(self) -> list[ProfileState]:
        tr = self.traj
        return [
            ProfileState(float(t), float(r), float(h), float(s))
            for t, r, h, s in zip(tr.t, tr.r, tr.h, tr.sigma)
        ]

    @property
    def terminal(self) -> ProfileState:
        tr = self.traj
        return ProfileState(
            float(tr.t[-1]), float(tr.r[-1]), float(tr.h[-1]), float(tr.sigma[-1])
        )

    @property
    def gap(self) -> float:
        """``h2 - h0``."""
        return self.h2 - self.h0


# The zero-energy arc is integrated as an ODE down to AXIS_SWITCH * r_+ and
# finished on the exact level J = 0 with r as parameter: near the axis an
# energy error e moves sigma by ~e/r and h' by ~|a| e / r^2.
AXIS_SWITCH = 1e-2
AXIS_SAMPLES = 32


def _approach_axis(
    space: SpaceParams, screw: ScrewMotion, H: float, traj: Trajectory, r_eps: float
) -> Trajectory:
    k = space.kappa
    r0, t0, h0, s0 = traj.r[-1], traj.t[-1], traj.h[-1], traj.sigma[-1]
    if r0 <= r_eps:
        return traj
    # sigma in (pi/2, pi) modulo 2pi while heading for the axis
    turns = math.floor((s0 - HALF_PI) / (2 * math.pi))

    def sin_sigma(r):
        half = sn(k, r / 2.0)
        return 4.0 * H * half * half / sn(k, r)

    def dt_dr(r):
        x = sin_sigma(r)
        return 1.0 / np.sqrt(1.0 - x * x)

    def dh_dr(r):
        x = sin_sigma(r)
        return fiber_norm(space, screw, r) / sn(k, r) * x / np.sqrt(1.0 - x * x)

    radii = np.geomspace(r0, r_eps, AXIS_SAMPLES + 1)
    t_new, h_new = [t0], [h0]
    for hi, lo in zip(radii[:-1], radii[1:]):
        dt, _ = quadrature.integrate(dt_dr, lo, hi, epsabs=1e-15, epsrel=1e-13)
        dh, _ = quadrature.integrate(dh_dr, lo, hi, epsabs=1e-15, epsrel=1e-13)
        t_new.append(t_new[-1] + dt)
        h_new.append(h_new[-1] + dh)
    r_new = radii[1:]
    sig_new = math.pi - np.arcsin(sin_sigma(r_new)) + 2 * math.pi * turns
    j_ref = float(energy(space, H, traj.r[0], traj.sigma[0]))
    drift_new = energy(space, H, r_new, sig_new) - j_ref
    return Trajectory(
        t=np.concatenate([traj.t, t_new[1:]]),
        r=np.concatenate([traj.r, r_new]),
        h=np.concatenate([traj.h, h_new[1:]]),
        sigma=np.concatenate([traj.sigma, sig_new]),
        j_drift=np.concatenate([traj.j_drift, drift_new]),
        events=dict(traj.events, axis=t_new[-1]),
        dense=traj.dense,
        n_steps=traj.n_steps,
    )


def canonical_start(space: SpaceParams, H: float, J: float) -> ProfileState:
    _, r_plus = r_extrema(space, H, J)
    return ProfileState(0.0, r_plus, 0.0, HALF_PI)


def integrate_half_arc(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    J: float,
    tol: Tolerances = DEFAULT_TOL,
) -> HalfArc:
    """Integrate one fundamental arc from ``r(0)=r_+, h(0)=0, sigma(0)=pi/2``."""
    level = energy_level(space, H, J, tol.tol_J)
    if level.regime is Regime.CYLINDER:
        raise EnergyOutOfRange("J = J_max is the vertical cylinder; nothing to integrate")
    if level.regime is Regime.ZERO:
        J = 0.0
    start = canonical_start(space, H, J)
    rhs = _make_rhs(space, screw, H)

    if level.regime is Regime.POSITIVE:
        events = [
            _Event("sigma_max", lambda t, y: rhs(t, y)[2], -1),
            _Event("return", lambda t, y: y[2] - HALF_PI, -1, True, "sigma_max"),
        ]
        first, last = "sigma_max", "return"
    elif level.regime is Regime.NEGATIVE:
        events = [
            _Event("sigma_pi", lambda t, y: y[2] - math.pi, +1),
            _Event("sigma_3pi2", lambda t, y: y[2] - 3 * HALF_PI, +1, True, "sigma_pi"),
        ]
        first, last = "sigma_pi", "sigma_3pi2"
    else:
        r_switch = max(AXIS_SWITCH * start.r, tol.r_axis_eps)
        events = [_Event("axis", lambda t, y: y[0] - r_switch, -1, True)]
        first = last = "axis"

    traj = _run(
        space,
        screw,
        H,
        (start.r, start.h, start.sigma),
        t_end=math.inf,
        events=events,
        tol=tol,
        j_ref=float(energy(space, H, start.r, start.sigma)),
    )
    if last not in traj.events or first not in traj.events:
        raise EventNotFound(f"{last} event missing for J={J}")
    t1, t2 = traj.events[first], traj.events[last]
    if not t1 <= t2:
        raise EventNotFound(f"events out of order: t1={t1}, t2={t2}")

    hp_term = hp_lim = hp_raw = None
    if level.regime is Regime.ZERO:
        hp_raw = float(rhs(t2, (traj.r[-1], traj.h[-1], traj.sigma[-1]))[1])
        traj = _approach_axis(space, screw, H, traj, tol.r_axis_eps)
        t1 = t2 = float(traj.t[-1])
        hp_term = float(rhs(t2, (traj.r[-1], traj.h[-1], traj.sigma[-1]))[1])
        hp_lim = abs(screw.pitch) * H
    return HalfArc(
        space=space,
        screw=screw,
        H=H,
        J=J,
        regime=level.regime,
        traj=traj,
        t1=t1,
        t2=t2,
        h0=float(traj.h[0]),
        h2=float(traj.h[-1]),
        h_prime_terminal=hp_term,
        h_prime_limit=hp_lim,
        h_prime_integrated=hp_raw,
    )


def integrate_periods(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    J: float,
    periods: float,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[Trajectory, float]:
    """Integrate the canonical curve directly (no reflections) over ``periods``.

    Returns the trajectory and the half period ``t2`` used to size the span.
    """
    arc = integrate_half_arc(space, screw, H, J, tol)
    if arc.regime is Regime.ZERO:
        raise EnergyOutOfRange("zero-energy curves reach the axis; extend by reflection")
    start = ProfileState(0.0, arc.traj.r[0], 0.0, HALF_PI)
    return integrate_curve(space, screw, H, start, 2.0 * periods * arc.t2, tol), arc.t2


# ---------------------------------------------------------------------------
# vertical period by quadrature in sigma


def dh_dsigma(space: SpaceParams, screw: ScrewMotion, H: float, J: float, sigma):
    """Height gained per unit angle on a negative-energy curve."""
    r = r_of_sigma(space, H, J, sigma, +1)
    s = np.sin(sigma)
    den = 2.0 * H * sn(space.kappa, r) - cs(space.kappa, r) * s
    return fiber_norm(space, screw, r) * s / den


def vertical_gap(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    J: float,
    *,
    epsabs: float = 1e-13,
    epsrel: float = 1e-11,
) -> float:
    """``h2 - h0`` of the negative-energy arc, by quadrature over ``[pi/2, 3pi/2]``."""
    level = energy_level(space, H, J, 0.0)
    if level.regime is not Regime.NEGATIVE:
        raise EnergyOutOfRange(f"vertical gap needs negative energy, got J={J}")
    value, _ = quadrature.integrate(
        lambda x: dh_dsigma(space, screw, H, J, x),
        HALF_PI,
        3 * HALF_PI,
        epsabs=epsabs,
        epsrel=epsrel,
    )
    return value


def vertical_period(space: SpaceParams, screw: ScrewMotion, H: float, J: float, **kw) -> float:
    """Vertical period ``Delta = 2 (h2 - h0)`` of a negative-energy curve."""
    return 2.0 * vertical_gap(space, screw, H, J, **kw)


# ---------------------------------------------------------------------------
# reflection extension


@dataclass(frozen=True)
class ProfileCurve:
    """A profile curve over whole periods built from one half arc."""

    t: np.ndarray
    r: np.ndarray
    h: np.ndarray
    sigma: np.ndarray
    j_drift: np.ndarray
    half_period: float
    delta: float
    periods: int
    regime: Regime
    arc: HalfArc | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.t)


def _reflect(t, h, s, d):
    """Mirror a ``[0, T]`` run about its end point: reversed time, reflected h, sigma."""
    T = t[-1]
    return (
        2.0 * T - t[-2::-1],
        2.0 * h[-1] - h[-2::-1],
        2.0 * s[-1] - s[-2::-1],
        d[-2::-1],
    )


def extend_curve(arc: HalfArc, periods: int = 1) -> ProfileCurve:
    """Continue a half arc to ``periods`` full periods by successive reflections.

    Reflection across ``h = h(t2)`` with time reversal gives
    ``h(t2 + s) = 2 h(t2) - h(t2 - s)``, ``r(t2 + s) = r(t2 - s)`` and
    ``sigma(t2 + s) = 2 sigma(t2) - sigma(t2 - s)``; later periods are vertical
    translates by ``Delta``.
    """
    if periods < 1:
        raise ValueError("periods must be >= 1")
    tr = arc.traj
    t_back, h_back, s_back, d_back = _reflect(tr.t, tr.h, tr.sigma, tr.j_drift)
    t_p = np.concatenate([tr.t, t_back])
    r_p = np.concatenate([tr.r, tr.r[-2::-1]])
    h_p = np.concatenate([tr.h, h_back])
    s_p = np.concatenate([tr.sigma, s_back])
    d_p = np.concatenate([tr.j_drift, d_back])
    period_t = t_p[-1] - t_p[0]
    delta = h_p[-1] - h_p[0]
    turn = s_p[-1] - s_p[0]
    parts_t, parts_r, parts_h, parts_s, parts_d = [t_p], [r_p], [h_p], [s_p], [d_p]
    for k in range(1, periods):
        parts_t.append(t_p[1:] + k * period_t)
        parts_r.append(r_p[1:])
        parts_h.append(h_p[1:] + k * delta)
        parts_s.append(s_p[1:] + k * turn)
        parts_d.append(d_p[1:])
    return ProfileCurve(
        t=np.concatenate(parts_t),
        r=np.concatenate(parts_r),
        h=np.concatenate(parts_h),
        sigma=np.concatenate(parts_s),
        j_drift=np.concatenate(parts_d),
        half_period=arc.t2,
        delta=float(delta),
        periods=periods,
        regime=arc.regime,
        arc=arc,
    )


# ---------------------------------------------------------------------------
# axis-swap symmetry on states


def symmetry_partner(
    space: SpaceParams, H: float, state: ProfileState
) -> tuple[ProfileState, float, float]:
    """Map a state to the axis-swapped partner curve.

    Returns ``(partner_state, J, J_partner)`` with ``r -> pi/sqrt(kappa) - r``,
    ``sigma -> sigma + pi`` and ``J_partner = -J - 4H/kappa``. The partner's
    height is reflected, ``h -> -h``; it is a solution for the swapped pitch
    ``4 tau / kappa - a`` (and for the original pitch when ``tau = 0``).
    """
    if _kind(space.kappa) <= 0:
        raise DomainError("the axis swap exists only for kappa > 0")
    J = float(energy(space, H, state.r, state.sigma))
    partner = ProfileState(
        state.t, math.pi / math.sqrt(space.kappa) - state.r, -state.h, state.sigma + math.pi
    )
    return partner, J, -J - 4.0 * H / space.kappa


# ---------------------------------------------------------------------------
# CSV dump

PROFILE_CSV_HEADER = ("t", "r", "h", "sigma", "J_drift")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_profile_csv(curve: ProfileCurve | Trajectory, out: TextIO | str) -> None:
    """Write ``t,r,h,sigma,J_drift`` rows with 17 significant digits."""
    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            write_profile_csv(curve, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PROFILE_CSV_HEADER)
    for row in zip(curve.t, curve.r, curve.h, curve.sigma, curve.j_drift):
        writer.writerow([_fmt(x) for x in row])


def read_profile_csv(src: TextIO | str) -> dict[str, np.ndarray]:
    text = open(src).read() if isinstance(src, str) else src.read()
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    cols = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: cols[:, i] for i, name in enumerate(header)}


def iter_states(curve: ProfileCurve | Trajectory) -> Iterable[ProfileState]:
    for t, r, h, s in zip(curve.t, curve.r, curve.h, curve.sigma):
        yield ProfileState(float(t), float(r), float(h), float(s))
