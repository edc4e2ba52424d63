"""Randomized invariants: simplex closure, monotonicity, duality, exactness."""

import math

from hypothesis import given, settings, strategies as st

import guesswork as gw
from guesswork.tilting import tilted_type_beta


def simplexes(m_min=2, m_max=4):
    return (
        st.integers(m_min, m_max)
        .flatmap(lambda m: st.lists(st.floats(0.05, 1.0), min_size=m, max_size=m))
        .map(lambda raw: tuple(v / math.fsum(raw) for v in raw))
    )


@settings(max_examples=60, deadline=None)
@given(simplexes(), st.floats(0.01, 20.0))
def test_tilted_type_stays_on_simplex(p, beta):
    t = tilted_type_beta(p, beta)
    assert abs(math.fsum(t.freqs) - 1.0) < 1e-9
    assert all(f >= 0.0 for f in t.freqs)
    assert 0.0 <= gw.shannon_entropy(t) <= math.log(len(p)) + 1e-12


@settings(max_examples=60, deadline=None)
@given(simplexes(), st.floats(-0.9, 8.0), st.floats(0.01, 2.0))
def test_tilted_cross_entropy_monotone(p, alpha, step):
    assert gw.tilted_cross_entropy(p, alpha) <= gw.tilted_cross_entropy(p, alpha + step) + 1e-10


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 4).flatmap(
        lambda m: st.tuples(
            st.lists(st.floats(0.05, 1.0), min_size=m, max_size=m),
            st.lists(st.floats(0.05, 1.0), min_size=m, max_size=m),
        )
    )
)
def test_kl_nonnegative_and_decomposition(pair):
    raw_l, raw_p = pair
    l = tuple(v / math.fsum(raw_l) for v in raw_l)
    p = tuple(v / math.fsum(raw_p) for v in raw_p)
    d = gw.kl_divergence(l, p)
    assert d >= 0.0
    assert abs(gw.cross_entropy(l, p) - gw.shannon_entropy(l) - d) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.floats(0.55, 0.95), st.floats(0.1, 0.9), st.floats(-0.9, 4.0), st.floats(0.0, 0.69))
def test_weak_duality(p0, frac, alpha, x):
    # Lambda*(x) >= x alpha - Lambda(alpha) for every pair in range
    eps = frac * gw.admissible_epsilon_binary(p0)[1]
    source = gw.conditioned(gw.LetterDistribution((p0, 1.0 - p0)), eps)
    model = gw.scgf_model(source)
    rate = gw.legendre_transform(model, x)
    if math.isinf(rate):
        return
    assert rate >= x * alpha - model(alpha) - 1e-9


@settings(max_examples=40, deadline=None)
@given(st.floats(0.55, 0.95), st.floats(0.1, 0.9), st.floats(-0.9, 3.0), st.floats(0.05, 1.5))
def test_scgf_midpoint_convex(p0, frac, a, width):
    eps = frac * gw.admissible_epsilon_binary(p0)[1]
    model = gw.scgf_model(gw.conditioned(gw.LetterDistribution((p0, 1.0 - p0)), eps))
    b = a + width
    assert model(0.5 * (a + b)) <= 0.5 * (model(a) + model(b)) + 1e-10


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=2, max_size=4).filter(lambda c: sum(c) >= 1))
def test_type_count_log_consistency(counts):
    t = gw.TypeVector.from_counts(counts)
    n = gw.type_count(t)
    assert n >= 1
    assert abs(gw.log_type_count(t) - math.log(n)) < 1e-8


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 2000),
    st.integers(0, 3000),
    st.floats(-2.5, 2.5),
)
def test_log_rank_power_sum_matches_direct(a, span, alpha):
    b = a + span
    direct = math.log(math.fsum(float(i) ** alpha for i in range(a, b + 1)))
    assert abs(gw.log_rank_power_sum(a, b, alpha) - direct) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.floats(0.55, 0.9), st.integers(4, 9), st.floats(0.3, 0.9))
def test_guess_table_normalized(p0, k, frac):
    p = gw.LetterDistribution((p0, 1.0 - p0))
    eps = frac * gw.admissible_epsilon_binary(p0)[1]
    if gw.typical_set_census(p, eps, k).is_empty:
        return
    for source in (gw.conditioned(p, eps), gw.uniform_typical(p, eps)):
        table = gw.build_guess_table(source, k)
        mass = math.fsum(
            blk.count * math.exp(blk.log_word_prob) for blk in table.blocks
        )
        assert abs(mass - 1.0) < 1e-9
        # ranks tile 1..total with no gaps
        assert table.blocks[0].start == 1
        assert table.blocks[-1].end == table.total_words
