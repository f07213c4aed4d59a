from fractions import Fraction

import numpy as np
import pytest

from noisefield import (
    BorelSet,
    IFSInvariantMeasure,
    binary_system,
    cantor_system,
    chaos_game_sample,
    closedness_residual,
    cuntz_adjoint_apply,
    cuntz_apply,
    cuntz_relation_residual,
    invariant_integrate,
    invariant_moments,
    make_ifs,
    pushforward_system,
)
from noisefield.noise import GaussianNoiseField


def broken_pair():
    return make_ifs([(1 / 3, 0.0), (1 / 3, 2 / 3)], [0.4, 0.4])


# -- construction ------------------------------------------------------------------


def test_cantor_system_geometry():
    ifs = cantor_system()
    assert ifs.hull == (0.0, 1.0)
    assert ifs.image(0) == pytest.approx((0.0, 1 / 3))
    assert ifs.image(1) == pytest.approx((2 / 3, 1.0))
    assert not ifs.covers()


def test_binary_system_covers():
    ifs = binary_system()
    assert ifs.covers()
    nu = IFSInvariantMeasure(ifs)
    assert nu.measure_of(BorelSet.interval(0.2, 0.7)) == pytest.approx(0.5)


def test_overlapping_branches_rejected():
    with pytest.raises(ValueError, match="overlap"):
        make_ifs([(0.8, 0.0), (0.8, 0.2)], [0.5, 0.5])


def test_expanding_branch_rejected():
    with pytest.raises(ValueError, match="expansion"):
        make_ifs([(1.2, 0.0), (0.3, 0.7)], [0.5, 0.5])


def test_inverse_is_left_inverse_of_branches():
    ifs = cantor_system()
    for i in (0, 1):
        for x in np.linspace(0.05, 0.95, 7):
            assert ifs.inverse(ifs.apply(i, x)) == pytest.approx(x, abs=1e-12)
    with pytest.raises(ValueError, match="gap"):
        ifs.inverse(0.5)


def test_scaling_dimension():
    assert cantor_system().scaling_dimension() == pytest.approx(np.log(2) / np.log(3), abs=1e-10)
    assert binary_system().scaling_dimension() == pytest.approx(1.0, abs=1e-12)


# -- sampling ------------------------------------------------------------------------


def test_chaos_game_cylinder_frequencies():
    ifs = cantor_system()
    pts = chaos_game_sample(ifs, 40_000, 5)
    se = np.sqrt(0.25 / len(pts))
    assert abs(np.mean(pts <= 1 / 3) - 0.5) < 4 * se
    # depth-two cylinder (0, 0)
    assert abs(np.mean(pts <= 1 / 9) - 0.25) < 4 * np.sqrt(0.25 * 0.75 / len(pts))


def test_chaos_game_binary_mean():
    pts = chaos_game_sample(binary_system(), 40_000, 6)
    se = np.sqrt(1 / 12 / len(pts))
    assert abs(pts.mean() - 0.5) < 4 * se


def test_chaos_game_replay():
    ifs = cantor_system()
    assert np.array_equal(chaos_game_sample(ifs, 100, 3), chaos_game_sample(ifs, 100, 3))


def test_chaos_game_requires_unit_weights():
    with pytest.raises(ValueError, match="summing to 1"):
        chaos_game_sample(broken_pair(), 10, 0)


# -- moments ---------------------------------------------------------------------------


def test_cantor_moments_exact_rationals():
    m = invariant_moments(cantor_system(), 2)
    assert m[1] == Fraction(1, 2) and isinstance(m[1], Fraction)
    assert m[2] == Fraction(3, 8) and isinstance(m[2], Fraction)


def test_probability_normalization():
    for ifs in (cantor_system(), binary_system()):
        assert invariant_integrate(ifs, [1]) == 1


def test_binary_moments_match_uniform():
    m = invariant_moments(binary_system(), 4)
    # uniform on [0,1]: m_k = 1/(k+1)
    assert m[:5] == [Fraction(1, k + 1) for k in range(5)]


def test_moment_degree_cap():
    with pytest.raises(ValueError, match="degree"):
        invariant_integrate(cantor_system(), [0] * 34)


# -- closedness --------------------------------------------------------------------------


def test_closedness_zero_for_unit_weights():
    assert closedness_residual(cantor_system()) == 0.0
    assert closedness_residual(binary_system()) == 0.0


def test_closedness_detects_broken_weights():
    assert closedness_residual(broken_pair()) == pytest.approx(0.2, abs=1e-12)


def test_pushforward_two_routes_agree():
    # mass of a set under the push-forward: cylinder-shift route (the
    # conjugated system) versus preimage route on the original measure
    mu = IFSInvariantMeasure(cantor_system())
    for i in (0, 1):
        push = IFSInvariantMeasure(pushforward_system(cantor_system(), i))
        for word in [(0,), (1,), (0, 1)]:
            target = push.ifs.cylinder_set(word)
            shifted = mu.measure_of(mu.ifs.cylinder_set(word))
            lo, hi = target.intervals[0]
            r, s = 1 / 3, (0.0 if i == 0 else 2 / 3)
            pre = BorelSet.interval((lo - s) / r, (hi - s) / r)
            assert push.measure_of(target) == pytest.approx(shifted)
            assert mu.measure_of(pre) == pytest.approx(shifted, abs=1e-9)


# -- Cuntz operators -----------------------------------------------------------------------


def test_isometry_and_annihilation_on_walsh_coefficients():
    ifs = cantor_system()
    rng = np.random.default_rng(1)
    f = rng.normal(size=2**5)
    lifted = cuntz_apply(ifs, 0, f, 6)
    assert np.allclose(cuntz_adjoint_apply(ifs, 0, lifted, 6), f, atol=1e-14)
    assert np.abs(cuntz_adjoint_apply(ifs, 1, lifted, 6)).max() < 1e-14
    # isometry: norms agree
    assert np.linalg.norm(lifted) == pytest.approx(np.linalg.norm(f))


def test_completeness_on_depth_six_coefficients():
    ifs = cantor_system()
    rng = np.random.default_rng(2)
    g = rng.normal(size=2**6)
    total = np.zeros_like(g)
    for i in (0, 1):
        down = cuntz_adjoint_apply(ifs, i, g, 6)
        total += cuntz_apply(ifs, i, down, 6)
    assert np.allclose(total, g, atol=1e-13)


@pytest.mark.parametrize("system", [cantor_system(), binary_system()])
def test_relation_residuals_exact_systems(system):
    r1, r2 = cuntz_relation_residual(system, depth=8)
    assert r1 < 1e-10 and r2 < 1e-10


def test_relation_residual_detects_non_closed():
    r1, r2 = cuntz_relation_residual(broken_pair(), depth=6)
    assert r2 >= abs(1 - 0.8) - 1e-12


def test_depth_overflow_rejected():
    with pytest.raises(ValueError, match="depth overflow"):
        cuntz_apply(cantor_system(), 0, np.zeros(2**24), 25)


def test_pushforward_integration_isometry():
    # variance of the stochastic integral is preserved by (f, mu) ->
    # (f o R, push-forward by tau_i), with R the original inverse map
    orig = cantor_system()
    mu = IFSInvariantMeasure(orig)
    field = GaussianNoiseField(mu, J=256)
    f = lambda x: np.cos(2.0 * x)
    target = mu.integrate(lambda x: np.cos(2.0 * x) ** 2)[0]
    n = 30_000
    vals = field.ito_samples(f, n, 31)
    se = target * np.sqrt(2.0 / n)
    assert abs(vals.var() - target) < 4 * se
    for i in (0, 1):
        push = IFSInvariantMeasure(pushforward_system(orig, i))
        push_field = GaussianNoiseField(push, J=256)
        fR = lambda x: np.cos(2.0 * np.asarray([orig.inverse(v) for v in np.atleast_1d(x)]))
        vals_i = push_field.ito_samples(fR, n, 33 + i)
        assert abs(vals_i.var() - target) < 4 * se
