"""Tilted family, window boundary types, clamped optimiser regimes."""

import math

import pytest

from guesswork import (
    DistributionError,
    EpsilonInadmissibleError,
    Regime,
    admissible_epsilon_interval,
    boundary_types,
    clamped_optimum,
    regime_breakpoints,
    require_admissible_epsilon,
    shannon_entropy,
    solve_cross_entropy,
    tilted_cross_entropy,
    tilted_type,
    uniform_on_argmax,
    uniform_on_support,
)
from guesswork.tilting import cross_entropy_range, tilted_type_beta

P = (0.8, 0.2)
EPS = 0.1
H = 0.5004024235381879

# frozen solutions of the window boundary problem at p=(0.8,0.2), eps=0.1
LM0 = 0.7278652479555518
LP0 = 0.8721347520444482
H_MINUS = 0.5853705712676309
H_PLUS = 0.3823083894659230
ETA1 = 0.6852416716875065


def test_tilted_type_endpoints():
    assert tilted_type_beta(P, 1.0).freqs == pytest.approx(P, abs=1e-15)
    assert tilted_type_beta(P, 0.0).freqs == pytest.approx((0.5, 0.5), abs=1e-15)
    # beta = 1/2 on (0.8, 0.2): ratio sqrt(4) = 2
    assert tilted_type(P, 1.0).freqs == pytest.approx((2 / 3, 1 / 3), abs=1e-14)
    assert tilted_type(P, 0.0).freqs == pytest.approx(P, abs=1e-15)


def test_tilted_type_zero_mass_letters_stay_zero():
    t = tilted_type_beta((0.5, 0.0, 0.5), 0.3)
    assert t.freqs[1] == 0.0
    assert t.freqs[0] == pytest.approx(0.5, abs=1e-15)


def test_tilted_cross_entropy_monotone():
    assert tilted_cross_entropy(P, 0.0) == pytest.approx(H, abs=1e-14)
    assert tilted_cross_entropy(P, 1.0) == pytest.approx(ETA1, abs=1e-12)
    values = [tilted_cross_entropy(P, a) for a in (-0.9, -0.5, 0.0, 0.5, 1.0, 3.0, 10.0)]
    assert values == sorted(values)


def test_cross_entropy_range():
    c_min, c_max = cross_entropy_range(P)
    assert c_min == pytest.approx(-math.log(0.8), abs=1e-15)
    assert c_max == pytest.approx(0.9162907318741551, abs=1e-12)
    # c_max is the cost of the uniform type on the support
    assert c_max == pytest.approx(-0.5 * (math.log(0.8) + math.log(0.2)), abs=1e-14)


def test_solve_cross_entropy_residual():
    for target in (0.3, 0.45, H, 0.6, 0.85):
        beta = solve_cross_entropy(P, target)
        got = tilted_cross_entropy(P, 1.0 / beta - 1.0)
        assert got == pytest.approx(target, abs=1e-10)


def test_boundary_types_frozen():
    bnd = boundary_types(P, EPS)
    assert bnd.exists_minus and bnd.exists_plus
    assert not bnd.clamped_to_log_m
    assert bnd.l_minus.freqs[0] == pytest.approx(LM0, abs=1e-9)
    assert bnd.l_plus.freqs[0] == pytest.approx(LP0, abs=1e-9)
    assert bnd.entropy_minus == pytest.approx(H_MINUS, abs=1e-12)
    assert bnd.entropy_plus == pytest.approx(H_PLUS, abs=1e-12)
    # the boundary types sit exactly on the window edges
    from guesswork import cross_entropy

    assert cross_entropy(bnd.l_minus, P) == pytest.approx(H + EPS, abs=1e-10)
    assert cross_entropy(bnd.l_plus, P) == pytest.approx(H - EPS, abs=1e-10)


def test_boundary_types_uniform_p_degenerate():
    bnd = boundary_types((0.5, 0.5), 0.1)
    assert bnd.clamped_to_log_m
    assert not bnd.exists_minus
    assert not bnd.exists_plus
    assert bnd.l_minus.freqs == pytest.approx((0.5, 0.5), abs=1e-15)
    assert bnd.l_plus.freqs == pytest.approx((0.5, 0.5), abs=1e-15)


def test_boundary_types_large_epsilon_clamps():
    # eps beyond the admissible interval: the h+eps edge is unreachable,
    # l_minus becomes the uniform type on the support
    bnd = boundary_types(P, 0.5)
    assert not bnd.exists_minus
    assert bnd.clamped_to_log_m
    assert bnd.l_minus.freqs == pytest.approx((0.5, 0.5), abs=1e-15)
    # and h-eps < -log max p means l_plus degenerates onto the argmax set
    assert not bnd.exists_plus
    assert bnd.l_plus.freqs == pytest.approx((1.0, 0.0), abs=1e-15)


def test_admissible_epsilon_interval():
    lo, hi = admissible_epsilon_interval(P)
    assert lo == 0.0
    assert hi == pytest.approx(0.2772588722239781, abs=1e-12)
    require_admissible_epsilon(P, 0.1)
    with pytest.raises(EpsilonInadmissibleError) as exc:
        require_admissible_epsilon(P, 0.5)
    assert exc.value.interval[1] == pytest.approx(hi, abs=1e-12)


def test_require_admissible_uniform_p_exempt():
    # degenerate uniform source: interval is empty but everything is typical
    require_admissible_epsilon((0.5, 0.5), 0.1)


def test_clamped_optimum_regimes():
    opt = clamped_optimum(P, EPS, 0.0)
    assert opt.regime is Regime.INTERIOR
    assert opt.type_vector.freqs == pytest.approx(P, abs=1e-14)
    # eta(1) > h + eps: the high-entropy edge binds
    opt = clamped_optimum(P, EPS, 1.0)
    assert opt.regime is Regime.UPPER_CLAMP
    assert opt.type_vector.freqs[0] == pytest.approx(LM0, abs=1e-9)
    # alpha near -1 drives the tilt toward the argmax letter, low edge binds
    opt = clamped_optimum(P, EPS, -0.9)
    assert opt.regime is Regime.LOWER_CLAMP
    assert opt.type_vector.freqs[0] == pytest.approx(LP0, abs=1e-9)


def test_regime_breakpoints():
    alpha_low, alpha_high = regime_breakpoints(P, EPS)
    assert alpha_low is not None and alpha_high is not None
    assert -1.0 < alpha_low < 0.0 < alpha_high
    assert tilted_cross_entropy(P, alpha_low) == pytest.approx(H - EPS, abs=1e-9)
    assert tilted_cross_entropy(P, alpha_high) == pytest.approx(H + EPS, abs=1e-9)
    # optimiser switches branch exactly there
    assert clamped_optimum(P, EPS, alpha_high + 1e-6).regime is Regime.UPPER_CLAMP
    assert clamped_optimum(P, EPS, alpha_high - 1e-6).regime is Regime.INTERIOR


def test_uniform_helpers():
    assert uniform_on_support((0.5, 0.0, 0.5)).freqs == (0.5, 0.0, 0.5)
    assert uniform_on_argmax((0.4, 0.4, 0.2)).freqs == (0.5, 0.5, 0.0)


def test_entropy_of_boundary_types_brackets_h():
    # h(l-) > h(p) > h(l+) whenever both edges genuinely bind
    bnd = boundary_types(P, EPS)
    assert shannon_entropy(bnd.l_minus) > H > shannon_entropy(bnd.l_plus)
