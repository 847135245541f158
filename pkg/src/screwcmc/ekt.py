"""Curvature-parameterized trigonometry and the geometry of E(kappa, tau).

The model space is ``I_kappa x [0, 2pi] x R`` with coordinates ``(r, theta, z)``
and metric::

    g = dr^2 + sn(r)^2 dtheta^2 + (4 tau sn(r/2)^2 dtheta - dz)^2

Screw motions of pitch ``a`` act by ``(r, theta, z) -> (r, theta + phi, z + a phi)``
and the quotient by that group is parameterized by ``(r, h)`` with
``h = z - a theta``.

All functions here are pure. A base curvature with ``|kappa| < KAPPA_ZERO`` is
treated as exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

KAPPA_ZERO = 1e-12


class DomainError(ValueError):
    """A function was evaluated outside the set where it is defined."""


def _kind(kappa: float) -> int:
    if abs(kappa) < KAPPA_ZERO:
        return 0
    return 1 if kappa > 0 else -1


@dataclass(frozen=True)
class SpaceParams:
    """Ambient space E(kappa, tau)."""

    kappa: float
    tau: float

    @property
    def bundle_defect(self) -> float:
        """``kappa - 4 tau^2``; zero for the space forms R^3 and S^3."""
        return self.kappa - 4.0 * self.tau**2

    @property
    def epsilon(self) -> int:
        d = self.bundle_defect
        if abs(d) < KAPPA_ZERO:
            return 0
        return 1 if d > 0 else -1

    @property
    def is_spaceform(self) -> bool:
        return self.epsilon == 0

    @property
    def geometry_label(self) -> str:
        k = _kind(self.kappa)
        if self.tau == 0.0 or abs(self.tau) < KAPPA_ZERO:
            return {-1: "H2xR", 0: "R3", 1: "S2xR"}[k]
        if k < 0:
            return "PSL2R"
        if k == 0:
            return "Nil3"
        return "S3" if self.is_spaceform else "BergerSphere"

    @property
    def r_domain(self) -> tuple[float, float]:
        """Open interval of admissible radii."""
        if _kind(self.kappa) > 0:
            return (0.0, math.pi / math.sqrt(self.kappa))
        return (0.0, math.inf)

    @property
    def r_max(self) -> float:
        return self.r_domain[1]

    def in_domain(self, r: float) -> bool:
        lo, hi = self.r_domain
        return lo < r < hi


@dataclass(frozen=True)
class ScrewMotion:
    """One-parameter group of screw motions with the given pitch."""

    pitch: float = 0.0

    @property
    def is_rotational(self) -> bool:
        return self.pitch == 0.0

    @staticmethod
    def horizontal(space: SpaceParams) -> "ScrewMotion":
        """Pitch ``2 tau / kappa`` whose orbits are horizontal (kappa != 0)."""
        if _kind(space.kappa) == 0:
            raise DomainError("horizontal pitch needs kappa != 0")
        return ScrewMotion(2.0 * space.tau / space.kappa)


# ---------------------------------------------------------------------------
# generalized trigonometric functions


def sn(kappa: float, r):
    k = _kind(kappa)
    if k > 0:
        s = math.sqrt(kappa)
        return np.sin(s * r) / s
    if k < 0:
        s = math.sqrt(-kappa)
        return np.sinh(s * r) / s
    return r * 1.0


def cs(kappa: float, r):
    k = _kind(kappa)
    if k > 0:
        return np.cos(math.sqrt(kappa) * r)
    if k < 0:
        return np.cosh(math.sqrt(-kappa) * r)
    return np.ones_like(r * 1.0) if isinstance(r, np.ndarray) else 1.0


def gen_trig(kappa: float, r: float) -> tuple[float, float, float, float]:
    """Return ``(sn, cs, tn, ct)`` at ``r``.

    ``tn`` (resp. ``ct``) is ``nan`` where ``cs`` (resp. ``sn``) vanishes;
    use :func:`tn` and :func:`ct` to get a :class:`DomainError` instead.
    """
    s = float(sn(kappa, r))
    c = float(cs(kappa, r))
    t = s / c if c != 0.0 else math.nan
    q = c / s if s != 0.0 else math.nan
    return s, c, t, q


def tn(kappa: float, r: float) -> float:
    c = float(cs(kappa, r))
    if c == 0.0:
        raise DomainError(f"tn undefined at r={r}: cs(r)=0")
    return float(sn(kappa, r)) / c


def ct(kappa: float, r):
    s = sn(kappa, r)
    if np.any(s == 0.0):
        raise DomainError(f"ct undefined at r={r}: sn(r)=0")
    return cs(kappa, r) / s


def _asn(kappa: float, q):
    """Inverse of ``sn`` on its increasing branch starting at 0."""
    k = _kind(kappa)
    if k > 0:
        s = math.sqrt(kappa)
        return np.arcsin(np.clip(s * q, -1.0, 1.0)) / s
    if k < 0:
        s = math.sqrt(-kappa)
        return np.arcsinh(s * q) / s
    return q * 1.0


def arc_cs_gap(kappa: float, gap):
    """Solve ``cs(r) = 1 - kappa * gap`` for ``r >= 0``, continuously in kappa.

    Uses ``cs(r) = 1 - 2 kappa sn(r/2)^2``, so the root is
    ``2 asn(sqrt(gap / 2))``. This is the cancellation-free route used by the
    radius formulas; ``gap`` must be non-negative.
    """
    gap = np.asarray(gap, dtype=float)
    if np.any(gap < -1e-15):
        raise DomainError(f"arc_cs_gap needs gap >= 0, got {gap}")
    q = np.sqrt(np.maximum(gap, 0.0) / 2.0)
    if _kind(kappa) > 0 and np.any(math.sqrt(kappa) * q > 1.0 + 1e-15):
        raise DomainError("arc_cs_gap: cs argument below -1")
    out = 2.0 * _asn(kappa, q)
    return float(out) if out.ndim == 0 else out


def arc_cs(kappa: float, y: float) -> float:
    """Principal inverse of ``cs``: the ``r >= 0`` with ``cs(r) = y``."""
    k = _kind(kappa)
    if k == 0:
        raise DomainError("arc_cs is not invertible at kappa=0")
    if k > 0:
        if not -1.0 <= y <= 1.0:
            raise DomainError(f"arc_cs: y={y} outside [-1, 1]")
        return math.acos(y) / math.sqrt(kappa)
    if y < 1.0:
        raise DomainError(f"arc_cs: y={y} < 1 for kappa<0")
    return math.acosh(y) / math.sqrt(-kappa)


def arc_ct_recip(kappa: float, u):
    """Odd-branch inverse of ``ct`` taking ``u = 1/x``; ``u = 0`` maps to 0.

    This form stays finite where ``x`` diverges, e.g. ``2H / sin(sigma)`` at
    ``sigma = pi``.
    """
    k = _kind(kappa)
    if k > 0:
        s = math.sqrt(kappa)
        return np.arctan(s * u) / s
    if k < 0:
        s = math.sqrt(-kappa)
        if np.any(np.abs(s * u) >= 1.0):
            raise DomainError(f"arc_ct: |x| <= sqrt(-kappa) for u={u}")
        return np.arctanh(s * u) / s
    return u * 1.0


def arc_ct(kappa: float, x: float) -> float:
    """Odd-branch inverse of ``ct``.

    ``kappa > 0``: range ``(-pi/(2 sqrt k), pi/(2 sqrt k)) \\ {0}``;
    ``kappa = 0``: ``1/x``; ``kappa < 0``: needs ``|x| > sqrt(-kappa)``.
    """
    if x == 0.0:
        raise DomainError("arc_ct: x = 0")
    return float(arc_ct_recip(kappa, 1.0 / x))


# ---------------------------------------------------------------------------
# metric quantities


def fiber_norm(space: SpaceParams, screw: ScrewMotion, r):
    """Norm of the Killing field ``d/dtheta + a d/dz`` at radius ``r``."""
    s = sn(space.kappa, r)
    m = 4.0 * space.tau * sn(space.kappa, r / 2.0) ** 2 - screw.pitch
    return np.sqrt(s * s + m * m)


def quotient_metric_coeff(space: SpaceParams, screw: ScrewMotion, r):
    """Coefficient ``c(r)`` in the quotient metric ``dr^2 + c(r) dh^2``."""
    n = fiber_norm(space, screw, r)
    if np.any(n == 0.0):
        raise DomainError(f"Killing field vanishes at r={r}")
    return sn(space.kappa, r) ** 2 / n**2


def model_metric_block(space: SpaceParams, r: float) -> np.ndarray:
    """The ``(theta, z)`` block of the model metric at radius ``r``."""
    s = float(sn(space.kappa, r))
    m = 4.0 * space.tau * float(sn(space.kappa, r / 2.0)) ** 2
    return np.array([[s * s + m * m, -m], [-m, 1.0]])


# ---------------------------------------------------------------------------
# discrete symmetries


def axis_swap(
    space: SpaceParams, screw: ScrewMotion
) -> tuple[SpaceParams, ScrewMotion, Callable[[float, float], tuple[float, float]]]:
    """Isometry exchanging the two screw axes of a kappa > 0 space.

    Returns the space, the swapped pitch ``4 tau / kappa - a`` and the map
    ``(r, h) -> (pi / sqrt(kappa) - r, -h)``, which carries profile curves
    with mean curvature ``H`` and energy ``J`` to curves with the same ``H``
    and energy ``-J - 4H/kappa`` when their angle is shifted by ``pi``.
    """
    if _kind(space.kappa) <= 0:
        raise DomainError("axis swap needs kappa > 0")
    r_top = math.pi / math.sqrt(space.kappa)
    swapped = ScrewMotion(4.0 * space.tau / space.kappa - screw.pitch)

    def psi(r: float, h: float) -> tuple[float, float]:
        return r_top - r, -h

    return space, swapped, psi


def partner_energy(space: SpaceParams, H: float, J: float) -> float:
    """Energy of the axis-swapped partner curve, ``-J - 4H/kappa``."""
    if _kind(space.kappa) <= 0:
        raise DomainError("axis swap needs kappa > 0")
    return -J - 4.0 * H / space.kappa
