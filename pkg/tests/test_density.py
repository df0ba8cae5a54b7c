import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import random_pool, with_gap
from hotelling.density import (DensityError, LogTailDensity, PiecewisePolyDensity, cut, dumps,
                               eval_cdf, loads, log_tail_density, max_mass_window, random_density,
                               sawtooth_witness, uniform, density_from_dict)


def quad_cdf(dist, z):
    pts = [p for p in dist.breakpoints if 0 < p < z]
    return quad(dist.pdf, 0.0, z, points=pts or None, limit=200, epsabs=1e-13)[0]


class TestEvalCdf:
    def test_uniform(self):
        assert eval_cdf(uniform(), 0.25) == 0.25

    def test_sawtooth_quarter_points(self, saw):
        eps = 1 / 12
        assert eval_cdf(saw, 3 / 22) == pytest.approx(3 * eps, abs=1e-12)
        assert eval_cdf(saw, 7 / 22) == pytest.approx(5 * eps, abs=1e-12)
        assert eval_cdf(saw, 11 / 22) == pytest.approx(0.5, abs=1e-12)
        assert eval_cdf(saw, 15 / 22) == pytest.approx(7 / 12, abs=1e-12)

    def test_log_tail_at_cutoff(self):
        lt = log_tail_density(1.0, 0.1, 1.0)
        assert eval_cdf(lt, math.exp(-10)) == pytest.approx(0.0, abs=1e-12)

    def test_endpoints(self, saw):
        assert eval_cdf(saw, 0.0) == 0.0
        assert eval_cdf(saw, 1.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("z", [-0.1, 1.5, float("nan")])
    def test_domain(self, z):
        with pytest.raises(DensityError):
            eval_cdf(uniform(), z)

    @pytest.mark.parametrize("dist", random_pool(5) + [sawtooth_witness(), with_gap()],
                             ids=lambda d: d.name)
    def test_matches_quadrature(self, dist):
        for z in np.linspace(0, 1, 23):
            assert dist.cdf(z) == pytest.approx(quad_cdf(dist, z), abs=1e-11)

    def test_log_tail_matches_quadrature(self):
        lt = log_tail_density(1.0, 0.1, 1.0)
        for z in (0.001, 0.01, 0.3, 0.5, 1.0):
            oracle = quad(lt.pdf, lt.cutoff, z, limit=200)[0]
            assert lt.cdf(z) == pytest.approx(oracle, abs=1e-10)

    def test_monotone_on_fine_grid(self):
        z = np.linspace(0, 1, 10_001)
        for dist in random_pool(10) + [sawtooth_witness(), with_gap(), log_tail_density(1, 0.05)]:
            assert np.all(np.diff(dist.cdf(z)) >= 0)


class TestCut:
    def test_uniform(self):
        assert cut(uniform(), 0.0, 1 / 3) == pytest.approx(1 / 3, abs=1e-12)

    def test_sawtooth_flat_block(self, saw):
        assert cut(saw, 0.0, 0.25) == pytest.approx(3 / 22, abs=1e-12)

    def test_unreachable_returns_one(self):
        assert cut(uniform(), 0.9, 0.5) == 1.0

    def test_leftmost_on_zero_density(self):
        d = with_gap()
        # F(0.3) = 0.375 and F stays flat on [0.3, 0.6]
        assert cut(d, 0.0, 0.375) == pytest.approx(0.3, abs=1e-12)
        assert cut(d, 0.4, 0.0) == 0.4
        assert cut(d, 0.4, 0.1) > 0.6

    def test_zero_mass_is_identity(self, saw):
        assert cut(saw, 0.37, 0.0) == 0.37

    def test_log_tail(self):
        lt = log_tail_density(1.0, 0.1, 1.0)
        assert cut(lt, 0.0, 1.0) == pytest.approx(1.0)
        assert lt.cdf(cut(lt, 0.0, 0.5)) == pytest.approx(0.5, abs=1e-12)
        assert cut(lt, 0.0, 0.0) == 0.0

    @settings(max_examples=300, deadline=None)
    @given(seed=st.integers(0, 10_000), k=st.integers(1, 9), z=st.floats(0, 1), frac=st.floats(0, 1))
    def test_inverse(self, seed, k, z, frac):
        d = random_density(seed, k)
        v = frac * max(0.0, 1 - d.cdf(z))
        y = cut(d, z, v)
        assert y >= z
        assert d.cdf(y) - d.cdf(z) == pytest.approx(v, abs=1e-10)

    def test_inverse_log_tail(self):
        lt = log_tail_density(1.0, 0.01)
        rng = np.random.default_rng(3)
        for _ in range(1000):
            z = float(np.exp(rng.uniform(-100, 0)))
            v = rng.random() * (1 - lt.cdf(z))
            assert lt.cdf(cut(lt, z, v)) - lt.cdf(z) == pytest.approx(v, abs=1e-10)


class TestMaxMassWindow:
    def test_sawtooth_between_outer_candidates(self, saw):
        c, mass = max_mass_window(saw, 8 / 22, 3 / 22, 19 / 22)
        assert c == pytest.approx(7 / 22, abs=1e-12)
        assert mass == pytest.approx(0.25, abs=1e-12)

    def test_sawtooth_whole_interval_prefers_flat_block(self, saw):
        # over all of [0, 1] the flat block of height 22/12 beats the 7/22 window
        c, mass = max_mass_window(saw, 8 / 22)
        assert mass > 0.25
        assert c == pytest.approx(4 / 22, abs=1e-12)

    def test_uniform_leftmost_tie(self):
        c, mass = max_mass_window(uniform(), 0.2)
        assert c == pytest.approx(0.1, abs=1e-12)
        assert mass == pytest.approx(0.2, abs=1e-12)

    def test_log_tail_against_grid(self):
        lt = log_tail_density(1.0, 0.1, 1.0)
        c, mass = max_mass_window(lt, 0.1)
        # no mass below the cutoff, so the best window starts there
        assert c == pytest.approx(0.05 + lt.cutoff, abs=1e-12)
        centres = np.random.default_rng(0).uniform(0.05, 0.95, 1000)
        assert mass >= np.max(lt.cdf(centres + 0.05) - lt.cdf(centres - 0.05))

    def test_too_wide(self):
        with pytest.raises(DensityError):
            max_mass_window(uniform(), 0.5, 0.2, 0.6)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10_000), k=st.integers(1, 9), w=st.floats(0.01, 0.9))
    def test_dominates_random_windows(self, seed, k, w):
        d = random_density(seed, k)
        c, mass = max_mass_window(d, w)
        assert mass == pytest.approx(d.cdf(c + w / 2) - d.cdf(c - w / 2), abs=1e-12)
        centres = np.random.default_rng(seed).uniform(w / 2, 1 - w / 2, 1000)
        assert mass >= np.max(d.cdf(centres + w / 2) - d.cdf(centres - w / 2)) - 1e-12


class TestLogTail:
    def test_total_and_halving(self):
        lt = log_tail_density(1.0, 0.1, 1.0)
        assert lt.cdf(1.0) == pytest.approx(1.0)
        assert lt.cdf(0.5) == pytest.approx(1 + 0.1 * math.log(0.5), abs=1e-12)
        assert lt.cdf(0.5) - lt.cdf(0.25) == pytest.approx(0.1 * math.log(2), abs=1e-12)

    def test_partial_support(self):
        g = LogTailDensity(0.4, 0.1, 0.5)
        assert g.cdf(0.5) == pytest.approx(0.4)
        assert g.cdf(0.9) == pytest.approx(0.4)
        assert g.cdf(g.cutoff) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("gamma", [0.3, 0.1, 0.05, 0.01])
    def test_halving_bound(self, gamma):
        lt = log_tail_density(1.0, gamma)
        y = np.random.default_rng(1).random(1000)
        y = np.concatenate([y, np.exp(-np.random.default_rng(2).uniform(0, 1 / gamma + 1, 1000))])
        assert np.all(lt.cdf(y) - lt.cdf(y / 2) <= gamma)

    @pytest.mark.parametrize("A, gamma", [(0.1, 0.1), (0.1, 0.2), (1.0, 0.0), (1.0, 0.001)])
    def test_rejects_bad_parameters(self, A, gamma):
        with pytest.raises(DensityError):
            log_tail_density(A, gamma)


class TestConstruction:
    def test_sawtooth_shape(self, saw):
        assert saw.bound_M == pytest.approx(11 / 6)
        assert saw.total_mass == pytest.approx(1.0, abs=1e-12)
        assert saw.pdf(0.5) == pytest.approx(11 / 12)
        assert saw.pdf(7 / 22) == pytest.approx(0.0, abs=1e-12)

    def test_random_density_deterministic(self):
        a, b = random_density(1, 4), random_density(1, 4)
        assert a.segments == b.segments
        assert a.total_mass == pytest.approx(1.0, abs=1e-12)
        assert a.segments != random_density(2, 4).segments

    def test_random_density_single_segment(self):
        d = random_density(2, 1)
        assert len(d.segments) == 1
        assert d.total_mass == pytest.approx(1.0, abs=1e-12)

    def test_constant_segment_normalises_to_uniform(self):
        d = PiecewisePolyDensity.from_nodes([0, 1], [0.37, 0.37])
        assert d.segments == ((0.0, 1.0, 1.0, 1.0),)

    @pytest.mark.parametrize("segs", [
        ((0.0, 0.5, 1, 1),),
        ((0.0, 0.5, 1, 1), (0.6, 1.0, 1, 1)),
        ((0.0, 1.0, -1, 3),),
        ((0.0, 1.0, 2, 2),),
    ])
    def test_rejects_invalid(self, segs):
        with pytest.raises(DensityError):
            PiecewisePolyDensity(segs)

    def test_reflect(self):
        d = random_density(5, 4)
        r = d.reflect()
        z = np.linspace(0, 1, 101)
        np.testing.assert_allclose(r.cdf(z), 1 - d.cdf(1 - z), atol=1e-12)

    def test_bounded_window_mass(self):
        rng = np.random.default_rng(4)
        for d in random_pool(20) + [sawtooth_witness()]:
            a = rng.random(200)
            w = rng.random(200) * (1 - a)
            assert np.all(d.cdf(a + w) - d.cdf(a) <= d.bound_M * w + 1e-12)


class TestJson:
    @pytest.mark.parametrize("dist", [sawtooth_witness(), random_density(9, 5),
                                      log_tail_density(1.0, 0.01)], ids=lambda d: d.name)
    def test_round_trip(self, dist):
        back = loads(dumps(dist))
        assert type(back) is type(dist)
        z = np.linspace(0, 1, 17)
        assert np.array_equal(back.cdf(z), dist.cdf(z))

    def test_named(self):
        assert density_from_dict({"kind": "named", "name": "sawtooth"}).segments == sawtooth_witness().segments
        with pytest.raises(DensityError):
            density_from_dict({"kind": "named", "name": "gaussian"})
