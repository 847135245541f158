import math

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from screwcmc.dynamics import energy_bounds, negative_floor
from screwcmc.ekt import ScrewMotion, SpaceParams

settings.register_profile(
    "numeric",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("numeric")


@st.composite
def families(draw, kappa=(-2.0, 2.0), positive_kappa=False):
    """Random admissible ``(space, screw, H)`` with ``4H^2 + kappa > 0``."""
    lo, hi = (0.2, kappa[1]) if positive_kappa else kappa
    k = draw(st.floats(lo, hi))
    t = draw(st.floats(-1.0, 1.0))
    a = draw(st.floats(-3.0, 3.0))
    H = math.sqrt(max(-k, 0.0) / 4.0) + draw(st.floats(0.1, 1.5))
    return SpaceParams(k, t), ScrewMotion(a), H


def negative_energy(space, H, frac):
    """Energy at fraction ``frac`` in (0, 1) of the direct negative range.

    The range is cut at ``-3/H`` so tiny positive kappa does not produce
    energies of size ``4H/kappa``.
    """
    scale = 3.0 / H
    if space.kappa > 1e-12:
        scale = min(scale, -negative_floor(space, H))
    return -frac * scale


def positive_energy(space, H, frac):
    return energy_bounds(space, H)[0] * frac


def random_cases(n, seed, regime="negative", positive_kappa=False):
    """Deterministic parameter draws for the sampled acceptance checks."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        k = rng.uniform(0.2 if positive_kappa else -2.0, 2.0)
        t = rng.uniform(-1.0, 1.0)
        a = rng.uniform(-3.0, 3.0)
        H = math.sqrt(max(-k, 0.0) / 4.0) + rng.uniform(0.1, 1.5)
        space = SpaceParams(k, t)
        which = regime if regime != "mixed" else ("positive", "negative")[len(out) % 2]
        frac = rng.uniform(0.05, 0.95)
        if which == "positive":
            J = positive_energy(space, H, frac)
        else:
            J = negative_energy(space, H, frac)
        out.append((space, ScrewMotion(a), H, J))
    return out


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
