"""Strategy profiles and candidate vote shares.

Two position models:

``Mode.DISTINCT``
    candidates sit at distinct points at least ``delta`` apart; each voter
    votes for the nearest candidate, so candidate ``i`` wins the mass between
    the midpoints to its neighbours.  With ``delta == 0`` equal positions are
    read as a limit pair ``x-, x+`` whose shared boundary is ``x`` itself.
``Mode.SHARED``
    candidates may coincide; a group of ``r`` co-located candidates splits
    the mass between its outer midpoints equally.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

SEP_RTOL = 1e-9


class ProfileError(ValueError):
    pass


class Mode(str, enum.Enum):
    DISTINCT = "distinct"
    SHARED = "shared"


@dataclass(frozen=True)
class Profile:
    """Candidate positions, stored sorted; ``order[k]`` is the input index of
    the ``k``-th sorted candidate."""

    positions: tuple[float, ...]
    delta: float = 0.0
    mode: Mode = Mode.DISTINCT
    order: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        pos = [float(p) for p in self.positions]
        if not pos:
            raise ProfileError("a profile needs at least one candidate")
        if any(not (0.0 <= p <= 1.0) for p in pos):
            raise ProfileError(f"positions must lie in [0, 1]: {pos}")
        if self.delta < 0:
            raise ProfileError("delta must be nonnegative")
        order = tuple(sorted(range(len(pos)), key=lambda k: pos[k]))
        pos = tuple(pos[k] for k in order)
        mode = Mode(self.mode)
        if mode is Mode.DISTINCT:
            for a, b in zip(pos, pos[1:]):
                if self.delta > 0 and b - a < self.delta * (1 - SEP_RTOL):
                    raise ProfileError(
                        f"positions {a!r} and {b!r} closer than delta={self.delta!r}")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "order", order)

    @property
    def m(self) -> int:
        return len(self.positions)

    def to_dict(self) -> dict:
        return {"positions": list(self.positions), "delta": self.delta, "mode": self.mode.value}

    @classmethod
    def from_dict(cls, data: dict) -> "Profile":
        return cls(tuple(data["positions"]), float(data.get("delta", 0.0)),
                   Mode(data.get("mode", "distinct")))


@dataclass
class VoteBreakdown:
    left: np.ndarray
    right: np.ndarray

    @property
    def totals(self) -> np.ndarray:
        return self.left + self.right

    def __len__(self):
        return len(self.left)


def utilities_distinct(dist, profile: Profile) -> VoteBreakdown:
    if profile.mode is not Mode.DISTINCT:
        raise ProfileError("utilities_distinct needs a distinct-mode profile")
    x = np.asarray(profile.positions)
    if profile.delta > 0 and np.any(np.diff(x) <= 0):
        raise ProfileError("positions must be strictly increasing when delta > 0")
    fx = np.atleast_1d(dist.cdf(x))
    fmid = np.atleast_1d(dist.cdf(0.5 * (x[:-1] + x[1:])))
    lo = np.concatenate([[0.0], fmid])
    hi = np.concatenate([fmid, [1.0]])
    return VoteBreakdown(left=fx - lo, right=hi - fx)


def utilities_shared(dist, profile: Profile) -> VoteBreakdown:
    x = profile.positions
    m = len(x)
    groups = []  # (value, start, stop)
    start = 0
    for k in range(1, m + 1):
        if k == m or x[k] != x[start]:
            groups.append((x[start], start, k))
            start = k
    left = np.zeros(m)
    right = np.zeros(m)
    for g, (v, a, b) in enumerate(groups):
        lo = 0.0 if g == 0 else dist.cdf(0.5 * (groups[g - 1][0] + v))
        hi = 1.0 if g == len(groups) - 1 else dist.cdf(0.5 * (v + groups[g + 1][0]))
        fv = dist.cdf(v)
        r = b - a
        left[a:b] = (fv - lo) / r
        right[a:b] = (hi - fv) / r
    return VoteBreakdown(left=left, right=right)


def utilities(dist, profile: Profile) -> VoteBreakdown:
    if profile.mode is Mode.SHARED:
        return utilities_shared(dist, profile)
    return utilities_distinct(dist, profile)
