"""Best responses and the epsilon of a profile.

A unilateral deviation by candidate ``i`` to ``x'`` earns the mass between
the midpoints to the nearest opponents on each side.  Sliding ``x'`` inside
one gap ``(a, b)`` of the opponents sweeps a window of fixed length
``(b - a) / 2``, so the supremum over the gap is found exactly by
:func:`hotelling.pieces.maximize`.  At a gap end the payoff is the one-sided
limit (``Side.LEFT`` of ``b`` or ``Side.RIGHT`` of ``a``): in the limit the
deviator's boundary toward that opponent is the opponent's own position.

The grid method is an independent check: it evaluates
:func:`deviation_payoff`-style formulas on a dense point set instead of the
critical-point enumeration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from hotelling.game import Mode, Profile, ProfileError, utilities
from hotelling.pieces import TIE_TOL, Objective, maximize

SEP_ATOL = 1e-15


class Side(str, enum.Enum):
    LEFT = "left"    # limit from the left of ``location``
    AT = "at"        # exactly at ``location``
    RIGHT = "right"  # limit from the right of ``location``


_SIDE_RANK = {Side.LEFT: 0, Side.AT: 1, Side.RIGHT: 2}


class DeltaMode(str, enum.Enum):
    LIMIT = "limit"
    FINITE = "finite"


@dataclass(frozen=True)
class Grid:
    n: int


ANALYTIC = "analytic"
Method = Union[str, Grid]


@dataclass(frozen=True)
class DeviationOutcome:
    candidate: int
    location: float
    side: Side
    payoff: float
    gain: float

    def to_dict(self) -> dict:
        return {"candidate": self.candidate, "location": self.location,
                "side": self.side.value, "payoff": self.payoff, "gain": self.gain}


@dataclass(frozen=True)
class EpsilonReport:
    outcomes: tuple[DeviationOutcome, ...]
    epsilon: float
    delta_mode: DeltaMode

    @property
    def argmax_candidate(self) -> int:
        return max(range(len(self.outcomes)), key=lambda k: (self.outcomes[k].gain, -k))

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "delta_mode": self.delta_mode.value,
                "argmax_candidate": self.argmax_candidate,
                "outcomes": [o.to_dict() for o in self.outcomes]}


def _opponents(profile: Profile, i: int) -> list[float]:
    if not 0 <= i < profile.m:
        raise ProfileError(f"candidate index {i} out of range for m={profile.m}")
    return [p for k, p in enumerate(profile.positions) if k != i]


def _finite(profile: Profile, delta_mode: DeltaMode) -> bool:
    return (profile.mode is Mode.DISTINCT and DeltaMode(delta_mode) is DeltaMode.FINITE
            and profile.delta > 0)


def deviation_payoff(dist, profile: Profile, i: int, x_prime: float,
                     side: Side = Side.AT, delta_mode: DeltaMode = DeltaMode.LIMIT) -> float:
    """Votes of candidate ``i`` after moving alone to ``x_prime``.

    ``side`` selects a one-sided limit when ``x_prime`` coincides with an
    opponent; ``Side.AT`` on an opponent means co-location and is only
    meaningful in shared mode.
    """
    side = Side(side)
    opp = _opponents(profile, i)
    if not 0.0 <= x_prime <= 1.0:
        raise ProfileError(f"deviation {x_prime!r} outside [0, 1]")
    coincide = sum(1 for p in opp if p == x_prime)
    if _finite(profile, delta_mode):
        d = profile.delta
        if any(abs(x_prime - p) < d * (1 - 1e-9) - SEP_ATOL for p in opp):
            raise ProfileError(f"deviation to {x_prime!r} violates delta={d!r} separation")
        if side is not Side.AT:
            raise ProfileError("one-sided deviations need limit-delta mode")
    elif coincide and side is Side.AT and profile.mode is Mode.DISTINCT:
        raise ProfileError("distinct mode: use Side.LEFT/RIGHT to approach an opponent")

    below = [p for p in opp if p < x_prime]
    above = [p for p in opp if p > x_prime]
    a = max(below) if below else None
    b = min(above) if above else None
    r = 1
    if coincide:
        if side is Side.LEFT:
            b = x_prime
        elif side is Side.RIGHT:
            a = x_prime
        else:
            r = coincide + 1
    lo = 0.0 if a is None else dist.cdf(0.5 * (a + x_prime))
    hi = 1.0 if b is None else dist.cdf(0.5 * (x_prime + b))
    return (hi - lo) / r


def _better(cand, best) -> bool:
    # cand/best: (payoff, location, side)
    if best is None or cand[0] > best[0] + TIE_TOL:
        return True
    if cand[0] < best[0] - TIE_TOL:
        return False
    return (cand[1], _SIDE_RANK[cand[2]]) < (best[1], _SIDE_RANK[best[2]])


def _gaps(opp_sorted):
    vals = sorted(set(opp_sorted))
    bounds = [None] + vals + [None]
    return list(zip(bounds[:-1], bounds[1:]))


def _analytic_candidates(dist, profile: Profile, i: int, delta_mode: DeltaMode):
    opp = _opponents(profile, i)
    finite = _finite(profile, delta_mode)
    d = profile.delta if finite else 0.0
    out = []
    for a, b in _gaps(opp):
        lo = 0.0 if a is None else a + d
        hi = 1.0 if b is None else b - d
        if lo > hi or (a is not None and b is not None and a == b):
            continue
        terms = []
        const = 0.0
        if b is None:
            const += 1.0
        else:
            terms.append((1.0, 0.5, 0.5 * b))
        if a is not None:
            terms.append((-1.0, 0.5, 0.5 * a))
        x, val = maximize(dist, Objective.of(*terms, const=const), lo, hi)
        side = Side.AT
        if not finite:
            if a is not None and x == a:
                side = Side.RIGHT
            elif b is not None and x == b:
                side = Side.LEFT
        out.append((val, x, side))
    if profile.mode is Mode.SHARED:
        for u in sorted(set(opp)):
            out.append((deviation_payoff(dist, profile, i, u, Side.AT), u, Side.AT))
    return out


def _grid_candidates(dist, profile: Profile, i: int, n: int, delta_mode: DeltaMode):
    opp = np.array(sorted(_opponents(profile, i)))
    finite = _finite(profile, delta_mode)
    d = profile.delta
    xs = np.arange(n) / (n - 1) if n > 1 else np.array([0.0])
    cutoff = getattr(dist, "cutoff", None)
    if cutoff is not None:
        xs = np.union1d(xs, np.geomspace(cutoff, dist.l, n))
    if len(opp):
        dist_to = np.min(np.abs(xs[:, None] - opp[None, :]), axis=1)
        keep = dist_to >= (d * (1 - 1e-9) if finite else 0.0)
        keep &= dist_to > 0
        xs = xs[keep]
        ia = np.searchsorted(opp, xs, side="left") - 1
        ib = np.searchsorted(opp, xs, side="right")
        a = opp[np.clip(ia, 0, len(opp) - 1)]
        b = opp[np.clip(ib, 0, len(opp) - 1)]
        lo = np.where(ia >= 0, dist.cdf(0.5 * (a + xs)), 0.0)
        hi = np.where(ib < len(opp), dist.cdf(0.5 * (xs + b)), 1.0)
        pay = hi - lo
    else:
        pay = np.ones_like(xs)
    out = [(float(p), float(x), Side.AT) for p, x in zip(pay, xs)]
    for u in sorted(set(opp.tolist())):
        if finite:
            for x in (u - d, u + d):
                if 0.0 <= x <= 1.0 and np.all(np.abs(x - opp) >= d * (1 - 1e-9) - SEP_ATOL):
                    out.append((deviation_payoff(dist, profile, i, x, Side.AT, delta_mode), x, Side.AT))
        else:
            for s in (Side.LEFT, Side.RIGHT):
                out.append((deviation_payoff(dist, profile, i, u, s), u, s))
            if profile.mode is Mode.SHARED:
                out.append((deviation_payoff(dist, profile, i, u, Side.AT), u, Side.AT))
    return out


def best_response(dist, profile: Profile, i: int, method: Method = ANALYTIC,
                  delta_mode: DeltaMode = DeltaMode.LIMIT,
                  current: float | None = None) -> DeviationOutcome:
    """Candidate ``i``'s best unilateral deviation (supremum, with its location).

    Ties go to the leftmost location, then to the left-hand limit.
    """
    delta_mode = DeltaMode(delta_mode)
    if method == ANALYTIC:
        cands = _analytic_candidates(dist, profile, i, delta_mode)
    elif isinstance(method, Grid):
        cands = _grid_candidates(dist, profile, i, method.n, delta_mode)
    else:
        raise ValueError(f"unknown method {method!r}")
    best = None
    for c in cands:
        if _better(c, best):
            best = c
    if current is None:
        current = float(utilities(dist, profile).totals[i])
    payoff, loc, side = best
    return DeviationOutcome(i, loc, side, payoff, payoff - current)


def epsilon_of(dist, profile: Profile, method: Method = ANALYTIC,
               delta_mode: DeltaMode = DeltaMode.LIMIT) -> EpsilonReport:
    delta_mode = DeltaMode(delta_mode)
    totals = utilities(dist, profile).totals
    outcomes = tuple(best_response(dist, profile, i, method, delta_mode, current=float(totals[i]))
                     for i in range(profile.m))
    return EpsilonReport(outcomes, max(o.gain for o in outcomes), delta_mode)
