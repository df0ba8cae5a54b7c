"""Lower-bound certificates by exhaustive profile scans, and claim checks.

A scan enumerates every profile whose positions are drawn from a finite grid
and records the smallest epsilon (limit-delta semantics).  Per-profile
epsilons are computed in batch from three grid tables:

``Fg[a]``        F at grid point ``a``
``Fmid[a, b]``   F at the midpoint of grid points ``a`` and ``b``
``W[a, b]``      best deviation payoff strictly inside the gap ``(a, b)``,
                 one-sided ends included (the analytic gap maximiser)

so each profile costs a handful of table lookups.  The batch path agrees with
:func:`hotelling.solver.epsilon_of` profile by profile (see the tests).
"""

from __future__ import annotations

import csv
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from hotelling.constructors import (equipartition, log_tail_full, three_candidate_sixth,
                                    variant_seventh)
from hotelling.density import LogTailDensity, random_density
from hotelling.game import Mode, Profile, utilities
from hotelling.pieces import Objective, maximize
from hotelling.solver import epsilon_of

DEFAULT_CAP = 10**7
CHUNK = 1 << 17


class ScanCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    n: int
    spacing: str = "uniform"  # "uniform" | "log"
    extra: tuple[float, ...] = ()

    def points(self, dist) -> np.ndarray:
        if self.spacing == "uniform":
            pts = np.arange(self.n) / (self.n - 1)
        elif self.spacing == "log":
            if not isinstance(dist, LogTailDensity):
                raise ValueError("log-augmented grids need a log-tail density")
            half = self.n // 2
            geo = np.geomspace(dist.cutoff, dist.l, half)
            pts = np.concatenate([geo, np.arange(self.n - half) / (self.n - half - 1)])
        else:
            raise ValueError(f"unknown grid spacing {self.spacing!r}")
        return np.unique(np.concatenate([pts, np.asarray(self.extra, dtype=float)]))


@dataclass
class ScanResult:
    grid: GridSpec
    mode: Mode
    m: int
    min_epsilon: float
    argmin_profile: Profile
    profiles_evaluated: int
    shape_counts: dict[str, int] = field(default_factory=dict)
    table: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None  # positions, eps, argmax

    def to_dict(self) -> dict:
        return {"grid": {"n": self.grid.n, "spacing": self.grid.spacing,
                         "extra": list(self.grid.extra)},
                "mode": self.mode.value, "m": self.m, "min_epsilon": self.min_epsilon,
                "argmin_profile": self.argmin_profile.to_dict(),
                "profiles_evaluated": self.profiles_evaluated,
                "shape_counts": self.shape_counts}


class GridTables:
    def __init__(self, dist, pts: np.ndarray):
        self.pts = pts
        n = len(pts)
        self.Fg = np.asarray(dist.cdf(pts))
        self.Fmid = np.asarray(dist.cdf(0.5 * (pts[:, None] + pts[None, :])))
        W = np.zeros((n, n))
        for a in range(n):
            for b in range(a + 1, n):
                obj = Objective.of((1, 0.5, 0.5 * pts[b]), (-1, 0.5, 0.5 * pts[a]))
                W[a, b] = maximize(dist, obj, pts[a], pts[b])[1]
        self.W = W


def _neighbors(C: np.ndarray, col: np.ndarray, n: int):
    """Largest entry < col and smallest > col per row (-1 / n when absent), and tie count."""
    below = np.where(C < col[:, None], C, -1).max(axis=1)
    above = np.where(C > col[:, None], C, n).min(axis=1)
    ties = (C == col[:, None]).sum(axis=1)
    return below, above, ties


def _pooled(T: GridTables, below, at, above, r):
    n = len(T.pts)
    lo = np.where(below >= 0, T.Fmid[np.maximum(below, 0), at], 0.0)
    hi = np.where(above < n, T.Fmid[at, np.minimum(above, n - 1)], 1.0)
    return (hi - lo) / r


def batch_epsilon(T: GridTables, C: np.ndarray, shared: bool):
    """Epsilon and the argmax candidate for each sorted index row of ``C``."""
    N, m = C.shape
    n = len(T.pts)
    gains = np.empty((N, m))
    for k in range(m):
        below, above, ties = _neighbors(C, C[:, k], n)
        if shared:
            current = _pooled(T, below, C[:, k], above, ties)
        else:
            # distinct rows are strictly increasing
            lo = T.Fmid[C[:, k - 1], C[:, k]] if k > 0 else np.zeros(N)
            hi = T.Fmid[C[:, k], C[:, k + 1]] if k < m - 1 else np.ones(N)
            current = hi - lo
        O = np.delete(C, k, axis=1)
        best = np.maximum(T.Fg[O[:, 0]], 1.0 - T.Fg[O[:, -1]])
        for j in range(m - 2):
            best = np.maximum(best, T.W[O[:, j], O[:, j + 1]])
        if shared:
            for j in range(m - 1):
                b2, a2, r2 = _neighbors(O, O[:, j], n)
                best = np.maximum(best, _pooled(T, b2, O[:, j], a2, r2 + 1))
        gains[:, k] = best - current
    return gains.max(axis=1), gains.argmax(axis=1)


def _count(n: int, m: int, shared: bool) -> int:
    return math.comb(n + m - 1, m) if shared else math.comb(n, m)


def _chunks(n: int, m: int, shared: bool):
    gen = (itertools.combinations_with_replacement if shared else itertools.combinations)(range(n), m)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(gen, CHUNK)),
                            dtype=np.int64)
        if not len(block):
            return
        yield block.reshape(-1, m)


def _shape(C: np.ndarray) -> np.ndarray:
    # 3-candidate shapes: 0 distinct, 1 pair-left, 2 pair-right, 3 all together
    eq01 = C[:, 0] == C[:, 1]
    eq12 = C[:, 1] == C[:, 2]
    return np.where(eq01 & eq12, 3, np.where(eq01, 1, np.where(eq12, 2, 0)))


def scan_min_epsilon(dist, m: int, grid: GridSpec, mode: Mode = Mode.DISTINCT,
                     cap: int = DEFAULT_CAP, workers: int | None = None,
                     keep_table: bool = False) -> ScanResult:
    """Minimum limit-delta epsilon over all ``m``-profiles on the grid.

    Distinct mode enumerates ``m``-subsets of the grid; shared mode every
    nondecreasing ``m``-tuple, so all co-location shapes are covered.
    """
    mode = Mode(mode)
    shared = mode is Mode.SHARED
    pts = grid.points(dist)
    n = len(pts)
    if n < m or m < 2:
        raise ValueError(f"need 2 <= m <= grid size, got m={m}, n={n}")
    total = _count(n, m, shared)
    if total > cap:
        raise ScanCapExceeded(
            f"{total} profiles exceed the cap of {cap}; use a coarser grid or raise the cap")
    T = GridTables(dist, pts)
    if workers is None:
        workers = int(os.environ.get("HOTELLING_WORKERS", "1"))

    def run(C):
        eps, arg = batch_epsilon(T, C, shared)
        k = int(np.argmin(eps))
        shapes = np.bincount(_shape(C), minlength=4) if (shared and m == 3) else None
        return eps[k], C[k], shapes, (C, eps, arg) if keep_table else None

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, _chunks(n, m, shared)))
    else:
        results = [run(C) for C in _chunks(n, m, shared)]

    best_eps, best_row = math.inf, None
    for eps, row, _, _ in results:  # chunk order is enumeration order
        if eps < best_eps:
            best_eps, best_row = float(eps), row
    counts = {}
    if shared and m == 3:
        tot = sum(r[2] for r in results)
        counts = dict(zip(("distinct", "pair-left", "pair-right", "all-together"),
                          (int(c) for c in tot)))
    table = None
    if keep_table:
        C = np.concatenate([r[3][0] for r in results])
        table = (pts[C], np.concatenate([r[3][1] for r in results]),
                 np.concatenate([r[3][2] for r in results]))
    prof = Profile(tuple(pts[best_row]), 0.0, mode)
    return ScanResult(grid, mode, m, best_eps, prof, total, counts, table)


def write_scan_csv(result: ScanResult, path) -> None:
    if result.table is None:
        raise ValueError("scan was run without keep_table=True")
    positions, eps, arg = result.table
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"x_{k + 1}" for k in range(result.m)] + ["epsilon", "argmax_candidate"])
        for row, e, a in zip(positions, eps, arg):
            w.writerow([repr(float(v)) for v in row] + [repr(float(e)), int(a) + 1])


# -- claim diagnostics ------------------------------------------------------

@dataclass(frozen=True)
class ClaimCheck:
    name: str
    value: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.value

    @property
    def passed(self) -> bool:
        return self.value <= self.bound + 1e-12


def claim_diagnostics_three(dist, profile: Profile, epsilon: float) -> list[ClaimCheck]:
    """The six vote bounds every 3-candidate epsilon-equilibrium satisfies."""
    if profile.m != 3:
        raise ValueError(f"need exactly three candidates, got {profile.m}")
    x1, x2, x3 = profile.positions
    md = dist.bound_M * profile.delta if profile.delta > 0 else 0.0
    votes = utilities(dist, profile)
    F = dist.cdf
    mid13 = F(0.5 * (x1 + x3))
    e1 = epsilon + md
    return [
        ClaimCheck("U2_left", float(votes.left[1]), e1),
        ClaimCheck("U2_right", float(votes.right[1]), e1),
        ClaimCheck("U1_left", float(votes.left[0]), 3 * e1),
        ClaimCheck("U3_right", float(votes.right[2]), 3 * e1),
        ClaimCheck("x1_to_mid13", mid13 - F(x1), 3 * e1),
        ClaimCheck("mid13_to_x3", F(x3) - mid13, 3 * e1),
    ]


# -- certificates -----------------------------------------------------------

@dataclass
class Certificate:
    kind: str
    passed: bool
    margin: float
    observed: float
    threshold: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "passed": self.passed, "margin": self.margin,
                "observed": self.observed, "threshold": self.threshold, "details": self.details}


KINDS = ("universal-1/12", "worst-3-1/6", "equipartition-1/(m+1)", "general-lb-1/(m+3)",
         "variant-ub-1/7", "variant-lb-1/7")


def _random_profile(rng, m: int) -> Profile:
    while True:
        xs = np.sort(rng.random(m))
        if np.all(np.diff(xs) > 0):
            return Profile(tuple(xs), 0.0, Mode.DISTINCT)


def _densities(trials: int, seed: int, k: int):
    return [random_density(seed * 1_000_003 + t, k) for t in range(trials)]


def bound_certificate(kind: str, trials: int = 100, seed: int = 0, k: int = 6, m: int = 3,
                      gamma: float = 0.01, grid: int | None = None, tol: float = 1e-9,
                      workers: int | None = None) -> Certificate:
    """Run one of the bound checks and report its margin (positive = slack)."""
    if kind == "universal-1/12":
        rng = np.random.default_rng(seed)
        worst, failed = math.inf, 0
        for d in _densities(trials, seed, k):
            p = _random_profile(rng, 3)
            eps = epsilon_of(d, p).epsilon
            worst = min(worst, eps)
            failed += not all(c.passed for c in claim_diagnostics_three(d, p, eps))
        thr = 1 / 12
        margin = worst - thr
        return Certificate(kind, margin >= -tol and failed == 0, margin, worst, thr,
                           {"trials": trials, "claim_failures": failed})
    if kind == "equipartition-1/(m+1)":
        worst = max(epsilon_of(d, equipartition(d, m)).epsilon for d in _densities(trials, seed, k))
        thr = 1 / (m + 1)
        return Certificate(kind, worst <= thr + tol, thr - worst, worst, thr,
                           {"trials": trials, "m": m})
    if kind == "variant-ub-1/7":
        worst = max(epsilon_of(d, variant_seventh(d)).epsilon for d in _densities(trials, seed, k))
        thr = 1 / 7
        return Certificate(kind, worst <= thr + 1e-6, thr - worst, worst, thr, {"trials": trials})
    if kind == "worst-3-1/6":
        # the 1/6 construction never does worse than 1/6 + M delta ...
        delta = 1e-6
        upper = max(epsilon_of(d, three_candidate_sixth(d, delta)).epsilon - d.bound_M * delta
                    for d in _densities(trials, seed, k))
        # ... and the log-tail density forces (1 - 8 gamma)/6 at every grid profile
        res = scan_min_epsilon(log_tail_full(gamma), 3, GridSpec(grid or 200, "log"),
                               workers=workers)
        lower_thr = (1 - 8 * gamma) / 6
        margin = min(1 / 6 - upper, res.min_epsilon - lower_thr)
        return Certificate(kind, margin >= -tol, margin, res.min_epsilon, lower_thr,
                           {"upper_observed": upper, "upper_threshold": 1 / 6,
                            "profiles": res.profiles_evaluated})
    if kind == "general-lb-1/(m+3)":
        res = scan_min_epsilon(log_tail_full(gamma), m, GridSpec(grid or 40, "log"),
                               workers=workers)
        thr = (1 - 2 * (m + 1) * gamma) / (m + 3)
        margin = res.min_epsilon - thr
        return Certificate(kind, margin >= -tol, margin, res.min_epsilon, thr,
                           {"m": m, "gamma": gamma, "profiles": res.profiles_evaluated})
    if kind == "variant-lb-1/7":
        res = scan_min_epsilon(log_tail_full(gamma), 3, GridSpec(grid or 150, "log"),
                               Mode.SHARED, workers=workers)
        thr = (1 - gamma) / 7
        margin = res.min_epsilon - thr
        return Certificate(kind, margin >= -tol, margin, res.min_epsilon, thr,
                           {"gamma": gamma, "profiles": res.profiles_evaluated,
                            "shapes": res.shape_counts})
    raise ValueError(f"unknown certificate kind {kind!r}; choose from {', '.join(KINDS)}")
