"""Profile polylines, swept surface meshes and their file formats.

Meshes live in chart coordinates: the model point ``(r, theta, z)`` is drawn
at ``(r cos theta, r sin theta, z)`` (``"cylindrical"``) or, for kappa > 0, at
``(sn(r) cos theta, sn(r) sin theta, cs(r)/sqrt(kappa) + z)`` (``"spherical"``).
Neither chart is an isometric embedding; the chart name is written into the
output metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .dynamics import (
    HalfArc,
    Regime,
    check_supercritical,
    cylinder_radius,
    energy_bounds,
    extend_curve,
    integrate_half_arc,
    r_extrema,
    DEFAULT_TOL,
    Tolerances,
)
from .ekt import ScrewMotion, SpaceParams, _kind, cs, fiber_norm, sn

PROFILE_SAMPLES = 256
THETA_SAMPLES = 128
CHARTS = ("cylindrical", "spherical")


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class ProfilePolyline:
    """Ordered ``(r, h)`` samples of a profile curve, uniform in arclength ``t``."""

    t: np.ndarray
    r: np.ndarray
    h: np.ndarray
    half_period: float
    delta: float
    regime: Regime
    r_minus: float
    r_plus: float
    periods: int = 1

    def __len__(self) -> int:
        return len(self.t)


def _resample(arc: HalfArc, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``n + 1`` arclength-uniform samples of one half arc."""
    tr = arc.traj
    t = np.linspace(tr.t[0], tr.t[-1], n + 1)
    t_dense = tr.dense.t_max
    inside = t <= t_dense
    r = np.empty_like(t)
    h = np.empty_like(t)
    y = tr.dense(t[inside])
    r[inside], h[inside] = y[0], y[1]
    # the zero-energy tail past the ODE switch is tabulated, not dense
    r[~inside] = np.interp(t[~inside], tr.t, tr.r)
    h[~inside] = np.interp(t[~inside], tr.t, tr.h)
    r[-1], h[-1] = tr.r[-1], tr.h[-1]
    return t, r, h


def polyline_from_arc(
    arc: HalfArc, periods: int = 1, samples_per_half: int = PROFILE_SAMPLES
) -> ProfilePolyline:
    """Resample a half arc and extend it by reflection over ``periods`` periods."""
    if periods < 1:
        raise ValueError("periods must be >= 1")
    t, r, h = _resample(arc, samples_per_half)
    T = t[-1]
    t_p = np.concatenate([t, 2 * T - t[-2::-1]])
    r_p = np.concatenate([r, r[-2::-1]])
    h_p = np.concatenate([h, 2 * h[-1] - h[-2::-1]])
    delta = h_p[-1] - h_p[0]
    ts, rs, hs = [t_p], [r_p], [h_p]
    for k in range(1, periods):
        ts.append(t_p[1:] + 2 * k * T)
        rs.append(r_p[1:])
        hs.append(h_p[1:] + k * delta)
    r_minus, r_plus = r_extrema(arc.space, arc.H, arc.J)
    return ProfilePolyline(
        np.concatenate(ts),
        np.concatenate(rs),
        np.concatenate(hs),
        arc.t2,
        float(delta),
        arc.regime,
        r_minus,
        r_plus,
        periods,
    )


def cylinder_polyline(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    length: float = 1.0,
    samples: int = PROFILE_SAMPLES,
) -> ProfilePolyline:
    """The vertical segment ``r = arct(2H)`` of arclength ``length``."""
    r0 = cylinder_radius(space, H)
    speed = float(fiber_norm(space, screw, r0) / sn(space.kappa, r0))
    t = np.linspace(0.0, length, samples + 1)
    return ProfilePolyline(
        t, np.full_like(t, r0), speed * t, length, 0.0, Regime.CYLINDER, r0, r0
    )


def profile_polyline(
    space: SpaceParams,
    screw: ScrewMotion,
    H: float,
    J: float,
    periods: int = 1,
    samples_per_half: int = PROFILE_SAMPLES,
    tol: Tolerances = DEFAULT_TOL,
) -> ProfilePolyline:
    check_supercritical(space, H)
    j_max, _ = energy_bounds(space, H)
    if abs(J - j_max) <= tol.tol_J:
        return cylinder_polyline(space, screw, H, float(periods), samples_per_half)
    arc = integrate_half_arc(space, screw, H, J, tol)
    return polyline_from_arc(arc, periods, samples_per_half)


# ---------------------------------------------------------------------------
# meshes


@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray  # (n_profile * n_theta, 3)
    faces: np.ndarray  # (n_faces, 4), 0-based
    profile_samples: int
    theta_samples: int
    theta_range: tuple[float, float]
    pitch: float
    chart: str
    meta: dict = field(default_factory=dict)

    def ring(self, i: int) -> np.ndarray:
        """Vertices swept from profile sample ``i``."""
        m = self.theta_samples
        return self.vertices[i * m : (i + 1) * m]


def chart_points(space: SpaceParams, r, theta, z, chart: str = "cylindrical") -> np.ndarray:
    r, theta, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r, theta, z)))
    if chart == "cylindrical":
        return np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=-1)
    if chart == "spherical":
        if _kind(space.kappa) <= 0:
            raise MeshError("the spherical chart needs kappa > 0")
        s = sn(space.kappa, r)
        top = cs(space.kappa, r) / math.sqrt(space.kappa)
        return np.stack([s * np.cos(theta), s * np.sin(theta), top + z], axis=-1)
    raise MeshError(f"unknown chart {chart!r}; expected one of {CHARTS}")


def build_surface_points(
    space: SpaceParams,
    screw: ScrewMotion,
    polyline: ProfilePolyline,
    theta_range: tuple[float, float] = (0.0, 2 * math.pi),
    theta_samples: int = THETA_SAMPLES,
    chart: str = "cylindrical",
) -> SurfaceMesh:
    """Sweep the profile by the screw motion: ``(r, h) -> (r, theta, h + a theta)``.

    Vertex ``i * theta_samples + j`` is profile sample ``i`` at the ``j``-th
    angle; both ends of ``theta_range`` are included.
    """
    n = len(polyline)
    if n == 0:
        raise MeshError("empty profile")
    if theta_samples < 3:
        raise MeshError("theta_samples must be >= 3")
    theta = np.linspace(theta_range[0], theta_range[1], theta_samples)
    R = polyline.r[:, None]
    Z = polyline.h[:, None] + screw.pitch * theta[None, :]
    verts = chart_points(space, R, theta[None, :], Z, chart).reshape(-1, 3)
    if not np.all(np.isfinite(verts)):
        raise MeshError("non-finite vertex")
    i, j = np.meshgrid(np.arange(n - 1), np.arange(theta_samples - 1), indexing="ij")
    base = (i * theta_samples + j).ravel()
    faces = np.stack(
        [base, base + theta_samples, base + theta_samples + 1, base + 1], axis=1
    )
    meta = {
        "chart": chart,
        "isometric": False,
        "regime": polyline.regime.value,
        "delta": polyline.delta,
        "periods": polyline.periods,
    }
    return SurfaceMesh(
        verts, faces, n, theta_samples, (float(theta[0]), float(theta[-1])),
        screw.pitch, chart, meta,
    )


def face_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Area of each quad as the sum of its two triangles."""
    p = vertices[faces]
    a = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    b = np.cross(p[:, 2] - p[:, 0], p[:, 3] - p[:, 0])
    return 0.5 * (np.linalg.norm(a, axis=1) + np.linalg.norm(b, axis=1))


# ---------------------------------------------------------------------------
# OBJ


def _g9(x: float) -> str:
    s = format(float(x), ".9g")
    return "0" if s == "-0" else s


def write_obj(mesh: SurfaceMesh, out: TextIO | str) -> None:
    """Wavefront OBJ with ``v`` records to 9 significant digits and 1-based quads."""
    if len(mesh.vertices) == 0 or len(mesh.faces) == 0:
        raise MeshError("refusing to write an empty mesh")
    if isinstance(out, str):
        with open(out, "w") as fh:
            write_obj(mesh, fh)
        return
    out.write(f"# chart {mesh.chart} (visualization chart, not isometric)\n")
    out.write(f"# pitch {_g9(mesh.pitch)}\n")
    out.write(f"# theta {_g9(mesh.theta_range[0])} {_g9(mesh.theta_range[1])}\n")
    out.write(f"# grid {mesh.profile_samples} x {mesh.theta_samples}\n")
    out.write("".join(f"v {_g9(x)} {_g9(y)} {_g9(z)}\n" for x, y, z in mesh.vertices))
    out.write("".join("f " + " ".join(str(k + 1) for k in f) + "\n" for f in mesh.faces))


def read_obj(src: TextIO | str) -> tuple[np.ndarray, list[list[int]]]:
    """Minimal OBJ reader: returns vertices and 0-based face index lists."""
    text = open(src).read() if isinstance(src, str) else src.read()
    verts, faces = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) for p in parts[1:]]
            faces.append([k - 1 if k > 0 else len(verts) + k for k in idx])
    return np.array(verts, dtype=float).reshape(-1, 3), faces


# ---------------------------------------------------------------------------
# SVG


@dataclass(frozen=True)
class SvgStyle:
    """``orientation="rh"`` puts r on the x-axis and h upward; ``"hr"`` swaps them."""

    width: int = 640
    height: int = 480
    margin: int = 32
    orientation: str = "rh"
    stroke: str = "#1f4e9c"
    guide: str = "#999999"


def _s(x: float) -> str:
    return format(float(x), ".6g")


def write_profile_svg(
    polyline: ProfilePolyline,
    out: TextIO | str,
    style: SvgStyle = SvgStyle(),
    space: SpaceParams | None = None,
) -> None:
    """SVG polyline with guide lines at ``r_-``, ``r_+``, the axis and ``pi/sqrt(kappa)``."""
    if isinstance(out, str):
        with open(out, "w") as fh:
            write_profile_svg(polyline, fh, style, space)
        return
    guides = {"r_minus": polyline.r_minus, "r_plus": polyline.r_plus, "axis": 0.0}
    if space is not None and _kind(space.kappa) > 0:
        guides["r_max"] = space.r_max
    r, h = polyline.r, polyline.h
    r_lo, r_hi = min(0.0, r.min()), max(max(guides.values()), r.max())
    h_lo, h_hi = float(h.min()), float(h.max())
    if h_hi - h_lo < 1e-12:
        h_lo, h_hi = h_lo - 0.5, h_hi + 0.5
    if r_hi - r_lo < 1e-12:
        r_hi = r_lo + 1.0
    w, ht, m = style.width, style.height, style.margin
    sr = (w - 2 * m) / (r_hi - r_lo) if style.orientation == "rh" else (ht - 2 * m) / (r_hi - r_lo)
    sh = (ht - 2 * m) / (h_hi - h_lo) if style.orientation == "rh" else (w - 2 * m) / (h_hi - h_lo)

    def xy(rv, hv):
        if style.orientation == "rh":
            return m + (rv - r_lo) * sr, ht - m - (hv - h_lo) * sh
        return m + (hv - h_lo) * sh, ht - m - (rv - r_lo) * sr

    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{ht}" viewBox="0 0 {w} {ht}">\n'
    )
    for name, rv in guides.items():
        x1, y1 = xy(rv, h_lo)
        x2, y2 = xy(rv, h_hi)
        out.write(
            f'<line class="guide" data-name="{name}" data-r="{_s(rv)}" '
            f'x1="{_s(x1)}" y1="{_s(y1)}" x2="{_s(x2)}" y2="{_s(y2)}" '
            f'stroke="{style.guide}" stroke-dasharray="4 3"/>\n'
        )
    pts = " ".join(f"{_s(x)},{_s(y)}" for x, y in zip(*xy(r, h)))
    out.write(
        f'<polyline class="profile" data-regime="{polyline.regime.value}" fill="none" '
        f'stroke="{style.stroke}" points="{pts}"/>\n'
    )
    out.write("</svg>\n")
