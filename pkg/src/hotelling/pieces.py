"""Exact optimisation and root finding for sums of CDFs at affine arguments.

Every quantity the game needs as a function of one free position ``x`` has
the form ``phi(x) = const + sum_k sign_k * F(alpha_k * x + offset_k)``: window
masses, a deviator's vote share inside a gap, one side of a candidate's
votes.  Between consecutive *critical points* -- interval ends, density
breakpoints pulled back through each affine map, and (for piecewise-linear
densities) the stationary point of each quadratic piece -- ``phi`` is
monotone.  The log-tail family has no interior stationary points because
every term combination used here has a sign-definite derivative on each
piece.

Maximisation therefore reduces to evaluating ``phi`` on the critical set, and
level crossings to bisection inside a single monotone piece.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TIE_TOL = 1e-12


@dataclass(frozen=True)
class Objective:
    terms: tuple[tuple[float, float, float], ...]
    const: float = 0.0

    @classmethod
    def of(cls, *terms, const: float = 0.0) -> "Objective":
        return cls(tuple((float(s), float(a), float(o)) for s, a, o in terms), float(const))

    def __call__(self, dist, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.const)
        for s, a, o in self.terms:
            out = out + s * dist.cdf(a * x + o)
        return float(out) if out.ndim == 0 else out


def critical_points(dist, obj: Objective, lo: float, hi: float) -> np.ndarray:
    """Sorted points of ``[lo, hi]`` between which ``obj`` is monotone."""
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    pts = [np.array([lo, hi])]
    bp = dist.breakpoints
    for _, a, o in obj.terms:
        if a != 0:
            pts.append((bp - o) / a)
    pts = np.concatenate(pts)
    pts = np.unique(pts[(pts >= lo) & (pts <= hi)])
    if dist.is_piecewise_linear and len(pts) > 1:
        mids = 0.5 * (pts[:-1] + pts[1:])
        lin = np.zeros_like(mids)
        quad = np.zeros_like(mids)
        for s, a, o in obj.terms:
            c0, c1 = dist.linear_coeffs(a * mids + o)
            lin += s * a * (c0 + c1 * o)
            quad += s * a * a * c1
        ok = quad != 0
        roots = -lin[ok] / quad[ok]
        inside = (roots > pts[:-1][ok]) & (roots < pts[1:][ok])
        if inside.any():
            pts = np.unique(np.concatenate([pts, roots[inside]]))
    return pts


def maximize(dist, obj: Objective, lo: float, hi: float) -> tuple[float, float]:
    """``(x, obj(x))`` at the leftmost maximiser over ``[lo, hi]``."""
    pts = critical_points(dist, obj, lo, hi)
    vals = np.atleast_1d(obj(dist, pts))
    best = vals.max()
    k = int(np.argmax(vals >= best - TIE_TOL))
    return float(pts[k]), float(vals[k])


def _bisect(f, a: float, b: float, a_side: bool, keep_right: bool) -> float:
    # f(a) has truth value a_side, f(b) the opposite; monotone in between.
    for _ in range(200):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if f(m) == a_side:
            a = m
        else:
            b = m
    return b if keep_right else a


def first_reaching(dist, obj: Objective, lo: float, hi: float, level: float, above: bool = True):
    """Smallest ``x`` in ``[lo, hi]`` with ``obj(x) >= level`` (``<=`` if not ``above``).

    Returns ``None`` when no point of the interval qualifies.
    """
    pts = critical_points(dist, obj, lo, hi)
    vals = np.atleast_1d(obj(dist, pts))
    hit = vals >= level if above else vals <= level
    if not hit.any():
        return None
    k = int(np.argmax(hit))
    if k == 0:
        return float(pts[0])
    test = (lambda x: obj(dist, x) >= level) if above else (lambda x: obj(dist, x) <= level)
    return _bisect(test, float(pts[k - 1]), float(pts[k]), False, keep_right=True)


def last_reaching(dist, obj: Objective, lo: float, hi: float, level: float, above: bool = True):
    """Largest ``x`` in ``[lo, hi]`` with ``obj(x) >= level`` (``<=`` if not ``above``)."""
    pts = critical_points(dist, obj, lo, hi)
    vals = np.atleast_1d(obj(dist, pts))
    hit = vals >= level if above else vals <= level
    if not hit.any():
        return None
    k = len(pts) - 1 - int(np.argmax(hit[::-1]))
    if k == len(pts) - 1:
        return float(pts[-1])
    test = (lambda x: obj(dist, x) >= level) if above else (lambda x: obj(dist, x) <= level)
    return _bisect(test, float(pts[k]), float(pts[k + 1]), True, keep_right=False)


def maximize_min(dist, f: Objective, g: Objective, lo: float, hi: float) -> tuple[float, float]:
    """Leftmost maximiser of ``min(f, g)`` over ``[lo, hi]``.

    On each piece where both are monotone, ``min(f, g)`` peaks at an end or
    where ``f - g`` changes sign.
    """
    pts = np.unique(np.concatenate([critical_points(dist, f, lo, hi),
                                    critical_points(dist, g, lo, hi)]))
    fv = np.atleast_1d(f(dist, pts))
    gv = np.atleast_1d(g(dist, pts))
    diff = fv - gv
    cands = [pts]
    for k in np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]:
        left_pos = diff[k] > 0
        x = _bisect(lambda t: f(dist, t) - g(dist, t) > 0, float(pts[k]), float(pts[k + 1]),
                    bool(left_pos), keep_right=False)
        cands.append(np.array([x]))
    xs = np.unique(np.concatenate(cands))
    vals = np.minimum(np.atleast_1d(f(dist, xs)), np.atleast_1d(g(dist, xs)))
    best = vals.max()
    k = int(np.argmax(vals >= best - TIE_TOL))
    return float(xs[k]), float(vals[k])
