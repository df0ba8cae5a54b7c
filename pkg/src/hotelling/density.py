"""Voter densities on [0, 1] with closed-form CDFs and an Eval/Cut oracle.

Two families are supported:

* :class:`PiecewisePolyDensity` -- piecewise-linear density on a partition of
  [0, 1]; the CDF is piecewise quadratic and inverted segment by segment.
* :class:`LogTailDensity` -- ``gamma / z`` on ``[l * exp(-A / gamma), l]`` and
  zero elsewhere; every half-interval ``[y/2, y]`` carries mass at most
  ``gamma * ln 2``.

Both expose the same small surface (``cdf``, ``pdf``, ``cut``,
``breakpoints``, ``linear_coeffs``) which the objective machinery in
:mod:`hotelling.pieces` relies on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

MASS_TOL = 1e-12


class DensityError(ValueError):
    """Invalid density parameters or out-of-domain oracle query."""


def _check_position(z: float) -> None:
    if not (0.0 <= z <= 1.0):
        raise DensityError(f"position {z!r} outside [0, 1]")


@dataclass(frozen=True)
class PiecewisePolyDensity:
    """Piecewise-linear density given as ``(z_lo, z_hi, f_lo, f_hi)`` segments.

    Segments must tile [0, 1] and carry total mass 1.  Jumps between
    segments are allowed (``f_hi`` of one segment need not equal ``f_lo`` of
    the next).
    """

    segments: tuple[tuple[float, float, float, float], ...]
    name: str = "piecewise"
    _knots: np.ndarray = field(init=False, repr=False, compare=False)
    _f_lo: np.ndarray = field(init=False, repr=False, compare=False)
    _slope: np.ndarray = field(init=False, repr=False, compare=False)
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        segs = tuple(tuple(float(v) for v in s) for s in self.segments)
        if not segs:
            raise DensityError("at least one segment is required")
        if any(len(s) != 4 for s in segs):
            raise DensityError("segments are (z_lo, z_hi, f_lo, f_hi) tuples")
        if segs[0][0] != 0.0 or segs[-1][1] != 1.0:
            raise DensityError("segments must start at 0 and end at 1")
        for prev, nxt in zip(segs, segs[1:]):
            if prev[1] != nxt[0]:
                raise DensityError(f"segments do not abut at {prev[1]!r} / {nxt[0]!r}")
        for z_lo, z_hi, f_lo, f_hi in segs:
            if not z_hi > z_lo:
                raise DensityError(f"empty segment [{z_lo}, {z_hi}]")
            if f_lo < 0 or f_hi < 0 or not (math.isfinite(f_lo) and math.isfinite(f_hi)):
                raise DensityError("density values must be finite and nonnegative")

        arr = np.array(segs, dtype=float)
        knots = np.concatenate([arr[:, 0], [1.0]])
        width = arr[:, 1] - arr[:, 0]
        mass = 0.5 * (arr[:, 2] + arr[:, 3]) * width
        cum = np.concatenate([[0.0], np.cumsum(mass)])
        if abs(cum[-1] - 1.0) > MASS_TOL:
            raise DensityError(f"total mass {cum[-1]!r} differs from 1")

        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "_knots", knots)
        object.__setattr__(self, "_f_lo", arr[:, 2].copy())
        object.__setattr__(self, "_slope", (arr[:, 3] - arr[:, 2]) / width)
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def from_nodes(cls, knots, values, name: str = "piecewise", normalize: bool = True):
        """Continuous piecewise-linear density through ``(knots[k], values[k])``."""
        knots = [float(k) for k in knots]
        values = np.asarray(values, dtype=float)
        if len(knots) != len(values) or len(knots) < 2:
            raise DensityError("need matching knots/values with at least two nodes")
        if normalize:
            mass = float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(knots)))
            if not mass > 0:
                raise DensityError("cannot normalize a zero density")
            values = values / mass
        segs = tuple(
            (knots[k], knots[k + 1], float(values[k]), float(values[k + 1]))
            for k in range(len(knots) - 1)
        )
        return cls(segs, name=name)

    @property
    def bound_M(self) -> float:
        return float(max(max(s[2], s[3]) for s in self.segments))

    @property
    def total_mass(self) -> float:
        return float(self._cum[-1])

    @property
    def breakpoints(self) -> np.ndarray:
        return self._knots

    is_piecewise_linear = True

    def _segment(self, z):
        k = np.searchsorted(self._knots, z, side="right") - 1
        return np.clip(k, 0, len(self.segments) - 1)

    def cdf(self, z):
        """F(z) for scalar or array ``z``; arguments are clipped to [0, 1]."""
        z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
        k = self._segment(z)
        t = z - self._knots[k]
        out = self._cum[k] + self._f_lo[k] * t + 0.5 * self._slope[k] * t * t
        out = np.minimum(out, self._cum[k + 1])
        return float(out) if out.ndim == 0 else out

    def pdf(self, z):
        z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
        k = self._segment(z)
        out = self._f_lo[k] + self._slope[k] * (z - self._knots[k])
        return float(out) if out.ndim == 0 else out

    def linear_coeffs(self, z):
        """``(c0, c1)`` with ``f = c0 + c1 * z`` on the segment containing ``z``."""
        k = self._segment(np.clip(np.asarray(z, dtype=float), 0.0, 1.0))
        c1 = self._slope[k]
        return self._f_lo[k] - c1 * self._knots[k], c1

    def cut(self, z: float, v: float) -> float:
        f0 = self.cdf(z)
        target = f0 + v
        if target > self._cum[-1] + MASS_TOL:
            return 1.0
        target = min(target, float(self._cum[-1]))
        if target <= f0:
            return float(z)
        j = int(np.searchsorted(self._cum, target, side="left"))
        k = min(max(j - 1, 0), len(self.segments) - 1)
        r = target - self._cum[k]
        f_lo, slope = self._f_lo[k], self._slope[k]
        disc = max(f_lo * f_lo + 2.0 * slope * r, 0.0)
        denom = f_lo + math.sqrt(disc)
        t = 2.0 * r / denom if denom > 0 else 0.0
        y = min(max(self._knots[k] + t, self._knots[k]), self._knots[k + 1])
        return float(max(y, z))

    def reflect(self) -> "PiecewisePolyDensity":
        """The mirror image ``z -> 1 - z``."""
        segs = tuple((1.0 - b, 1.0 - a, fb, fa) for a, b, fa, fb in reversed(self.segments))
        return PiecewisePolyDensity(segs, name=f"{self.name}-reflected")


@dataclass(frozen=True)
class LogTailDensity:
    """``gamma / z`` on ``[cutoff, l]`` with ``cutoff = l * exp(-A / gamma)``."""

    A: float
    gamma: float
    l: float = 1.0
    name: str = "logtail"

    def __post_init__(self):
        if not (self.A > self.gamma > 0):
            raise DensityError(f"need A > gamma > 0, got A={self.A!r}, gamma={self.gamma!r}")
        if not (0 < self.l <= 1):
            raise DensityError(f"need 0 < l <= 1, got {self.l!r}")
        if self.cutoff < 1e-300:
            raise DensityError(f"cutoff l * exp(-A / gamma) underflows for A / gamma = {self.A / self.gamma!r}")

    @property
    def cutoff(self) -> float:
        return self.l * math.exp(-self.A / self.gamma)

    @property
    def bound_M(self) -> float:
        return self.gamma / self.cutoff

    @property
    def total_mass(self) -> float:
        return float(self.A)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.unique(np.array([0.0, self.cutoff, self.l, 1.0]))

    is_piecewise_linear = False

    def linear_coeffs(self, z):
        raise TypeError("log-tail density is not piecewise linear")

    def cdf(self, z):
        z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            inner = self.A + self.gamma * np.log(z / self.l)
        out = np.where(z < self.cutoff, 0.0, np.where(z > self.l, self.A, inner))
        out = np.clip(out, 0.0, self.A)
        return float(out) if out.ndim == 0 else out

    def pdf(self, z):
        z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
        inside = (z >= self.cutoff) & (z <= self.l)
        out = np.where(inside, self.gamma / np.where(inside, z, 1.0), 0.0)
        return float(out) if out.ndim == 0 else out

    def cut(self, z: float, v: float) -> float:
        g0 = self.cdf(z)
        target = g0 + v
        if target > self.A + MASS_TOL:
            return 1.0
        target = min(target, self.A)
        if target <= g0:
            return float(z)
        y = self.l * math.exp((target - self.A) / self.gamma)
        return float(max(min(y, self.l), self.cutoff, z))


DensityModel = Union[PiecewisePolyDensity, LogTailDensity]


# -- oracle ---------------------------------------------------------------

def eval_cdf(dist: DensityModel, z: float) -> float:
    """Eval query: the voter mass in ``[0, z]``."""
    _check_position(z)
    return dist.cdf(z)


def cut(dist: DensityModel, z: float, v: float) -> float:
    """Cut query: the leftmost ``y >= z`` with ``F(y) - F(z) = v``, or 1 if none exists."""
    _check_position(z)
    if not (0.0 <= v <= 1.0):
        raise DensityError(f"mass {v!r} outside [0, 1]")
    return dist.cut(z, v)


def max_mass_window(dist: DensityModel, w: float, lo: float = 0.0, hi: float = 1.0):
    """Centre and mass of the heaviest window of length ``w`` inside ``[lo, hi]``.

    Exact: the mass ``F(c + w/2) - F(c - w/2)`` is piecewise quadratic in the
    centre ``c`` (monotone per piece for the log-tail family), so the maximum
    sits on an enumerated critical point.  Ties go to the leftmost centre.
    """
    from hotelling.pieces import Objective, maximize

    _check_position(lo)
    _check_position(hi)
    if not (0 < w <= hi - lo + 1e-15) or lo > hi:
        raise DensityError(f"window length {w!r} does not fit in [{lo}, {hi}]")
    h = 0.5 * w
    obj = Objective.of((1.0, 1.0, h), (-1.0, 1.0, -h))
    c_lo = lo + h
    c_hi = max(hi - h, c_lo)
    return maximize(dist, obj, c_lo, c_hi)


# -- constructors ---------------------------------------------------------

def uniform() -> PiecewisePolyDensity:
    return PiecewisePolyDensity(((0.0, 1.0, 1.0, 1.0),), name="uniform")


def sawtooth_witness() -> PiecewisePolyDensity:
    """Symmetric six-piece density admitting an exact 1/12-equilibrium.

    Flat at 22/12 on the outer blocks, ramps down to 0 at 7/22 and 15/22 and
    up to 11/12 at the centre.
    """
    eps = 1.0 / 12.0
    top, mid = 22 * eps, 11 * eps
    k = [0.0, 3 / 22, 7 / 22, 11 / 22, 15 / 22, 19 / 22, 1.0]
    vals = [(top, top), (top, 0.0), (0.0, mid), (mid, 0.0), (0.0, top), (top, top)]
    segs = tuple((k[i], k[i + 1], a, b) for i, (a, b) in enumerate(vals))
    return PiecewisePolyDensity(segs, name="sawtooth")


def log_tail_density(A: float, gamma: float, l: float = 1.0) -> LogTailDensity:
    return LogTailDensity(A, gamma, l)


def random_density(seed: int, k: int) -> PiecewisePolyDensity:
    """Seeded continuous piecewise-linear density on ``k`` equal-width segments.

    Node values are drawn uniformly from [0, 1) and the result is normalised
    to unit mass; an all-zero draw is redrawn.
    """
    if k < 1:
        raise DensityError("need at least one segment")
    rng = np.random.default_rng(seed)
    while True:
        values = rng.random(k + 1)
        if values.max() > 0:
            break
    knots = [i / k for i in range(k + 1)]
    return PiecewisePolyDensity.from_nodes(knots, values, name=f"random-{seed}-{k}")


NAMED = {"uniform": uniform, "sawtooth": sawtooth_witness}


# -- serialisation --------------------------------------------------------

def density_to_dict(dist: DensityModel) -> dict:
    if isinstance(dist, LogTailDensity):
        return {"kind": "logtail", "A": dist.A, "gamma": dist.gamma, "l": dist.l}
    return {"kind": "piecewise", "segments": [list(s) for s in dist.segments]}


def density_from_dict(data: dict) -> DensityModel:
    kind = data.get("kind")
    if kind == "piecewise":
        return PiecewisePolyDensity(tuple(tuple(s) for s in data["segments"]))
    if kind == "logtail":
        return LogTailDensity(float(data["A"]), float(data["gamma"]), float(data.get("l", 1.0)))
    if kind == "named":
        try:
            return NAMED[data["name"]]()
        except KeyError:
            raise DensityError(f"unknown named density {data.get('name')!r}") from None
    raise DensityError(f"unknown density kind {kind!r}")


def dumps(dist: DensityModel) -> str:
    return json.dumps(density_to_dict(dist))


def loads(text: str) -> DensityModel:
    return density_from_dict(json.loads(text))
