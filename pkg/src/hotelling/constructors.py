"""Constructive approximate equilibria, built from Eval/Cut queries."""

from __future__ import annotations

from dataclasses import dataclass, field

from hotelling.density import LogTailDensity, log_tail_density
from hotelling.game import Mode, Profile
from hotelling.pieces import Objective, first_reaching, last_reaching, maximize, maximize_min

LEVEL_TOL = 1e-12
MARGIN_MASS = 1e-9


def median_pair(dist, delta: float = 0.0) -> Profile:
    mu = dist.cut(0.0, 0.5)
    return Profile((mu - delta / 2, mu + delta / 2), delta, Mode.DISTINCT)


def equipartition(dist, m: int) -> Profile:
    """Positions at the k/(m+1) quantiles, built by successive cuts."""
    if m < 1:
        raise ValueError("need at least one candidate")
    share = 1.0 / (m + 1)
    xs = [dist.cut(0.0, share)]
    for _ in range(m - 1):
        xs.append(dist.cut(xs[-1], share))
    return Profile(tuple(xs), 0.0, Mode.DISTINCT)


def three_candidate_sixth(dist, delta: float = 0.0) -> Profile:
    """Three candidates with epsilon at most 1/6 + M * delta.

    Candidates 1 and 3 sit at the 1/3 and 2/3 quantiles.  Candidate 2 goes to
    the point of ``(x1, x3)`` where its votes on the heavier side equal 1/6.
    """
    if dist.bound_M * delta >= 1e-3:
        raise ValueError(f"need M * delta < 1e-3, got {dist.bound_M * delta!r}")
    x1 = dist.cut(0.0, 1 / 3)
    x3 = dist.cut(0.0, 2 / 3)
    mid = 0.5 * (x1 + x3)
    if dist.cdf(mid) - dist.cdf(x1) >= 1 / 6 - LEVEL_TOL:
        # F((x + x3)/2) - F(x) falls from >= 1/6 at x1 to -1/6 at x3
        right_votes = Objective.of((1, 0.5, 0.5 * x3), (-1, 1, 0))
        x2 = first_reaching(dist, right_votes, x1, x3, 1 / 6, above=False)
    else:
        left_votes = Objective.of((1, 1, 0), (-1, 0.5, 0.5 * x1))
        x2 = last_reaching(dist, left_votes, x1, x3, 1 / 6, above=False)
    assert x2 is not None, f"no root for the 1/6 split on [{x1}, {x3}]"
    if x2 - x1 < delta:
        x2 = x1 + delta
    elif x3 - x2 < delta:
        x2 = x3 - delta
    return Profile((x1, x2, x3), delta, Mode.DISTINCT)


def log_tail_full(gamma: float) -> LogTailDensity:
    if not 0 < gamma < 1:
        raise ValueError(f"need 0 < gamma < 1, got {gamma!r}")
    return log_tail_density(1.0, gamma, 1.0)


@dataclass
class VariantTrace:
    """How :func:`variant_seventh` reached its profile."""

    case: str
    z27: float
    z57: float
    z37: float
    z47: float
    z2max: float
    u2: float
    u2_left: float
    u2_right: float
    profile: Profile | None = None
    checks: dict[str, bool] = field(default_factory=dict)


def variant_seventh(dist) -> Profile:
    """Three-candidate 1/7-equilibrium when candidates may share a location."""
    return variant_seventh_trace(dist).profile


def variant_seventh_trace(dist) -> VariantTrace:
    F = dist.cdf
    z27, z57 = dist.cut(0.0, 2 / 7), dist.cut(0.0, 5 / 7)
    z37, z47 = dist.cut(0.0, 3 / 7), dist.cut(0.0, 4 / 7)
    # keep candidate 2 strictly inside (z27, z57); the margin is measured in
    # voter mass so it stays negligible at any density scale
    lo = dist.cut(z27, MARGIN_MASS)
    hi = max(dist.cut(0.0, 5 / 7 - MARGIN_MASS), lo)

    total = Objective.of((1, 0.5, 0.5 * z57), (-1, 0.5, 0.5 * z27))
    left = Objective.of((1, 1, 0), (-1, 0.5, 0.5 * z27))
    right = Objective.of((1, 0.5, 0.5 * z57), (-1, 1, 0))

    z2max, u2 = maximize(dist, total, lo, hi)
    uL, uR = left(dist, z2max), right(dist, z2max)
    tr = VariantTrace("", z27, z57, z37, z47, z2max, u2, uL, uR)
    tr.checks["u2_at_least_1/7"] = u2 >= 1 / 7 - LEVEL_TOL
    seventh = 1 / 7

    def shared(*xs):
        return Profile(tuple(xs), 0.0, Mode.SHARED)

    if u2 <= 2 / 7:
        if uL <= seventh and uR <= seventh:
            tr.case = "I.both-small"
            tr.profile = shared(z27, z2max, z57)
        elif uR > seventh:
            x = first_reaching(dist, right, z2max, z57, seventh, above=False)
            tr.case = "I.shift-right"
            tr.profile = shared(z27, x, z57)
        else:
            x = last_reaching(dist, left, z27, z2max, seventh, above=False)
            tr.case = "I.shift-left"
            tr.profile = shared(z27, x, z57)
        return tr

    if min(uL, uR) >= seventh:
        xp = z2max
    else:
        xs, best = maximize_min(dist, left, right, lo, hi)
        xp = xs if best >= seventh else None
    if xp is not None:
        # pull the outer candidates in until candidate 2 has exactly 1/7 per side
        l0 = 0.5 * (z27 + xp)
        ell = dist.cut(l0, max(F(xp) - seventh - F(l0), 0.0))
        rho = dist.cut(xp, seventh)
        tr.case = "II.balanced"
        tr.profile = shared(2 * ell - xp, xp, 2 * rho - xp)
        return tr

    if uR >= seventh:
        # candidate 2 is heavy on the right
        if right(dist, z37) >= seventh:
            rho = dist.cut(z37, seventh)
            tr.case = "II.colocate-left"
            tr.profile = shared(z37, z37, 2 * rho - z37)
            return tr
        if z37 <= z2max:
            x = first_reaching(dist, right, z37, z2max, seventh)
            tr.case = "II.right-before-max"
        else:
            x = last_reaching(dist, right, z2max, z37, seventh)
            tr.case = "II.right-after-max"
    else:
        if left(dist, z47) >= seventh:
            l0 = 0.5 * (z27 + z47)
            ell = dist.cut(l0, max(F(z47) - seventh - F(l0), 0.0))
            tr.case = "II.colocate-right"
            tr.profile = shared(2 * ell - z47, z47, z47)
            return tr
        if z47 >= z2max:
            x = last_reaching(dist, left, z2max, z47, seventh)
            tr.case = "II.left-after-max"
        else:
            x = first_reaching(dist, left, z47, z2max, seventh)
            tr.case = "II.left-before-max"
    assert x is not None, f"variant construction found no split point: {tr}"
    tr.profile = shared(z27, x, z57)
    tr.checks["u2_loss_at_most_1/7"] = u2 - total(dist, x) <= seventh + LEVEL_TOL
    return tr
