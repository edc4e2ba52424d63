"""Exponentially tilted letter distributions and window-boundary solvers.

The family l_a(beta) proportional to p_a^beta (beta = 1/(1+alpha)) sweeps
from the uniform distribution on the support (beta -> 0) through p itself
(beta = 1) to the uniform distribution on the most likely letters
(beta -> inf). Its cross entropy against p is strictly decreasing in beta,
so the two boundary types of a typicality window can be found by monotone
bisection, and the constrained maximiser behind the conditioned source's
scaled cumulant generating function is the tilted type clamped to those
boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .entropy import (
    FreqsLike,
    LetterDistribution,
    TypeVector,
    as_freqs,
    cross_entropy,
    shannon_entropy,
    typical_window,
)
from .errors import AlphaDomainError, DistributionError, EpsilonInadmissibleError

BISECT_RESIDUAL_TOL = 1e-12
BISECT_WIDTH_TOL = 1e-15
BISECT_MAX_ITER = 200

# C-scale margin inside which a boundary target is treated as sitting on a
# limit of the tilted family rather than solvable at finite beta.
_EDGE_TOL = 1e-12


def _support_items(p: FreqsLike) -> list[tuple[int, float]]:
    pf = as_freqs(p)
    items = [(a, q) for a, q in enumerate(pf) if q > 0.0]
    if not items:
        raise DistributionError("distribution has empty support")
    return items


def tilted_type_beta(p: FreqsLike, beta: float) -> TypeVector:
    """Tilted type with exponent beta: l_a = p_a^beta / sum_b p_b^beta.

    Computed in the log domain so arbitrarily large beta is safe; letters
    outside the support of p keep frequency 0 exactly.
    """
    if not (beta >= 0.0 and math.isfinite(beta)):
        raise DistributionError(f"tilt exponent must be finite and >= 0, got {beta}")
    pf = as_freqs(p)
    items = _support_items(pf)
    logw = {a: beta * math.log(q) for a, q in items}
    top = max(logw.values())
    weights = {a: math.exp(v - top) for a, v in logw.items()}
    total = math.fsum(weights.values())
    freqs = [0.0] * len(pf)
    for a, w in weights.items():
        freqs[a] = w / total
    return TypeVector(tuple(freqs))


def tilted_type(p: FreqsLike, alpha: float) -> TypeVector:
    """Tilted type at moment order alpha > -1 (beta = 1/(1+alpha))."""
    if not alpha > -1.0:
        raise AlphaDomainError(f"alpha out of domain: need alpha > -1, got {alpha}")
    return tilted_type_beta(p, 1.0 / (1.0 + alpha))


def tilted_cross_entropy(p: FreqsLike, alpha: float) -> float:
    """Cross entropy of the tilted type against p, increasing in alpha.

    Equals h(p) at alpha = 0; tends to -log max_a p_a as alpha -> -1 and to
    the uniform-on-support cross entropy as alpha -> inf.
    """
    return cross_entropy(tilted_type(p, alpha), p)


def cross_entropy_range(p: FreqsLike) -> tuple[float, float]:
    """Attainable cross-entropy limits of the tilted family, (c_min, c_max).

    c_min = -log max_a p_a (beta -> inf); c_max = -(1/m') sum log p_a over
    the support of size m' (beta -> 0). Equal iff p is uniform on its support.
    """
    items = _support_items(p)
    c_min = -math.log(max(q for _, q in items))
    c_max = -math.fsum(math.log(q) for _, q in items) / len(items)
    return c_min, c_max


def _uniform_on_support(p: FreqsLike) -> TypeVector:
    pf = as_freqs(p)
    items = _support_items(pf)
    freqs = [0.0] * len(pf)
    for a, _ in items:
        freqs[a] = 1.0 / len(items)
    return TypeVector(tuple(freqs))


def _uniform_on_argmax(p: FreqsLike) -> TypeVector:
    pf = as_freqs(p)
    top = max(pf)
    arg = [a for a, q in enumerate(pf) if q >= top - 1e-12]
    freqs = [0.0] * len(pf)
    for a in arg:
        freqs[a] = 1.0 / len(arg)
    return TypeVector(tuple(freqs))


def solve_cross_entropy(p: FreqsLike, target: float) -> float:
    """Find beta with cross_entropy(tilted_type_beta(p, beta), p) = target.

    Monotone bisection on beta; the cross entropy is strictly decreasing, so
    a bracket is grown by doubling or halving from beta = 1 and then halved.
    Convergence is declared on constraint residual below 1e-12 or bracket
    width below 1e-15, with an iteration cap of 200.

    Raises
    ------
    DistributionError
        If target lies outside the open attainable range of the family.
    """
    pf = as_freqs(p)
    c_min, c_max = cross_entropy_range(pf)
    if not (c_min + _EDGE_TOL < target < c_max - _EDGE_TOL):
        raise DistributionError(
            f"cross-entropy target {target!r} outside the attainable open range "
            f"({c_min!r}, {c_max!r})"
        )

    # hot path: evaluate the constraint on precomputed support log-probs,
    # skipping TypeVector construction inside the bisection loop
    logs = [math.log(q) for _, q in _support_items(pf)]
    top_log = max(logs)

    def value(beta: float) -> float:
        ws = [math.exp(beta * (lg - top_log)) for lg in logs]
        total = math.fsum(ws)
        return -math.fsum(w * lg for w, lg in zip(ws, logs)) / total

    lo = hi = 1.0
    v = value(1.0)
    if v > target:
        # need larger beta (cross entropy decreases in beta)
        while value(hi) > target:
            hi *= 2.0
            if hi > 1e12:
                break
    elif v < target:
        while value(lo) < target:
            lo *= 0.5
            if lo < 1e-12:
                break
    else:
        return 1.0

    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        v = value(mid)
        if abs(v - target) < BISECT_RESIDUAL_TOL or (hi - lo) < BISECT_WIDTH_TOL:
            return mid
        if v > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class BoundaryTypes:
    """The two tilted types pinned to the edges of a typicality window.

    l_minus sits on the h(p) + eps edge (flatter than p, higher entropy); it
    governs the growth rate of the typical set. l_plus sits on the
    h(p) - eps edge (sharper than p, lower entropy); it governs the most
    likely typical words. When an edge is unattainable the stored type is
    the corresponding limit of the family (uniform on the support for
    l_minus, uniform on the most likely letters for l_plus) and the
    matching existence flag is cleared.
    """

    l_minus: TypeVector
    l_plus: TypeVector
    exists_minus: bool
    exists_plus: bool
    clamped_to_log_m: bool  # set when l_minus was replaced by its limit
    beta_minus: float | None  # tilt exponents of bisected solutions
    beta_plus: float | None

    @property
    def entropy_minus(self) -> float:
        return shannon_entropy(self.l_minus)

    @property
    def entropy_plus(self) -> float:
        return shannon_entropy(self.l_plus)


def boundary_types(p: FreqsLike, epsilon: float) -> BoundaryTypes:
    """Solve for both window-boundary types of the (p, epsilon) typical set.

    Existence: the l_minus solution exists iff h(p) + eps stays below the
    family's beta -> 0 cross-entropy limit; otherwise the uniform law on
    the support is substituted and clamped_to_log_m is set (the typical set
    then grows at the full rate log m'). The l_plus solution exists iff
    h(p) - eps stays above -log max_a p_a ("epsilon too large for l_plus"
    otherwise); its substitute is the uniform law on the most likely
    letters, the correct degenerate plateau.
    """
    pf = as_freqs(p)
    lo, hi = typical_window(pf, epsilon)
    c_min, c_max = cross_entropy_range(pf)

    clamped = hi >= c_max - _EDGE_TOL
    exists_minus = hi <= c_max + _EDGE_TOL
    if clamped:
        l_minus, beta_minus = _uniform_on_support(pf), None
    else:
        beta_minus = solve_cross_entropy(pf, hi)
        l_minus = tilted_type_beta(pf, beta_minus)

    exists_plus = lo >= c_min - _EDGE_TOL
    if lo <= c_min + _EDGE_TOL:
        l_plus, beta_plus = _uniform_on_argmax(pf), None
    else:
        beta_plus = solve_cross_entropy(pf, lo)
        l_plus = tilted_type_beta(pf, beta_plus)

    return BoundaryTypes(
        l_minus=l_minus,
        l_plus=l_plus,
        exists_minus=exists_minus,
        exists_plus=exists_plus,
        clamped_to_log_m=clamped,
        beta_minus=beta_minus,
        beta_plus=beta_plus,
    )


def admissible_epsilon_interval(p: FreqsLike) -> tuple[float, float]:
    """Open interval of eps for which both boundary types exist at finite tilt.

    (0, min(c_max - h(p), h(p) + log max_a p_a)); empty when p is uniform on
    its support, where every word is typical for any eps and conditioning
    is vacuous.
    """
    pf = as_freqs(p)
    h = shannon_entropy(pf)
    c_min, c_max = cross_entropy_range(pf)
    return (0.0, min(c_max - h, h - c_min))


def require_admissible_epsilon(p: FreqsLike, epsilon: float) -> None:
    """Raise EpsilonInadmissibleError unless eps sits strictly inside the interval.

    Degenerate sources (p uniform on its support) are exempt: their interval
    is empty but conditioning changes nothing, so every eps is workable.
    """
    c_min, c_max = cross_entropy_range(p)
    if c_max - c_min <= _EDGE_TOL:
        return
    lo, hi = admissible_epsilon_interval(p)
    if not (lo < epsilon < hi):
        raise EpsilonInadmissibleError(
            f"epsilon inadmissible: {epsilon!r} outside the open interval "
            f"({lo!r}, {hi!r}) for this source (epsilon too large for l_plus "
            "or the typical set already grows at full rate)",
            (lo, hi),
        )


class Regime(Enum):
    """Which branch of the clamped optimiser is active at a given alpha."""

    LOWER_CLAMP = "lower_clamp"  # tilted type pinned to l_plus
    INTERIOR = "interior"  # unconstrained tilted type
    UPPER_CLAMP = "upper_clamp"  # tilted type pinned to l_minus


@dataclass(frozen=True)
class ClampedOptimum:
    """Optimising type for the conditioned source at moment order alpha."""

    type_vector: TypeVector
    regime: Regime


def clamped_optimum(
    p: FreqsLike,
    epsilon: float,
    alpha: float,
    boundaries: BoundaryTypes | None = None,
) -> ClampedOptimum:
    """Tilted type clamped into the typicality window, for alpha > -1.

    The unconstrained tilted type is kept while its cross entropy against p
    lies strictly inside (h(p) - eps, h(p) + eps); at or beyond an edge the
    matching boundary type takes over:

        cross entropy >= h(p) + eps  ->  l_minus (upper clamp),
        cross entropy <= h(p) - eps  ->  l_plus  (lower clamp).

    Both branches agree at a breakpoint, so the scaled CGF built from this
    optimiser is continuous (and C^1) in alpha.
    """
    pf = as_freqs(p)
    if boundaries is None:
        boundaries = boundary_types(pf, epsilon)
    lo, hi = typical_window(pf, epsilon)
    eta = tilted_cross_entropy(pf, alpha)
    if eta >= hi:
        return ClampedOptimum(boundaries.l_minus, Regime.UPPER_CLAMP)
    if eta <= lo:
        return ClampedOptimum(boundaries.l_plus, Regime.LOWER_CLAMP)
    return ClampedOptimum(tilted_type(pf, alpha), Regime.INTERIOR)


def regime_breakpoints(
    p: FreqsLike,
    epsilon: float,
    boundaries: BoundaryTypes | None = None,
) -> tuple[float | None, float | None]:
    """Moment orders where the clamped optimiser switches branch.

    Returns (alpha_low, alpha_high): the lower-clamp boundary alpha_low < 0
    (None when the l_plus edge never binds) and the upper-clamp boundary
    alpha_high > 0 (None when the l_minus edge never binds). Recovered from
    the bisected tilt exponents via alpha = 1/beta - 1.
    """
    if boundaries is None:
        boundaries = boundary_types(p, epsilon)
    alpha_low = None if boundaries.beta_plus is None else 1.0 / boundaries.beta_plus - 1.0
    alpha_high = (
        None if boundaries.beta_minus is None else 1.0 / boundaries.beta_minus - 1.0
    )
    return alpha_low, alpha_high


def uniform_on_support(p: FreqsLike) -> TypeVector:
    """Uniform type on the support of p (the beta -> 0 limit of the family)."""
    return _uniform_on_support(p)


def uniform_on_argmax(p: FreqsLike) -> TypeVector:
    """Uniform type on argmax p (the beta -> inf limit of the family)."""
    return _uniform_on_argmax(p)
