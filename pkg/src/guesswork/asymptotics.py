"""Scaled cumulant generating functions and rate functions of guesswork.

Three word sources share one asymptotic machinery: the plain i.i.d. source,
the same source conditioned on its typical set, and the uniform law on the
typical set. For each, the scaled CGF of log-guesswork

    Lambda(alpha) = lim (1/k) log E exp(alpha log G)

is piecewise explicit: constant at the modal decay rate for alpha <= -1 and,
for alpha > -1, equal to alpha h(l) - D(l || p) at the optimising type l,
which is the tilted type clamped into the typicality window (the window is
vacuous for the unconditioned source and everything collapses to the Renyi
form; for the uniform source the optimiser is pinned at the high-entropy
boundary). The Legendre-Fenchel transform Lambda* is computed by bisection
on the monotone slope, with a flat plateau of width `plateau_width` at the
left end of its domain and a finite endpoint value at the maximal slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .entropy import (
    FreqsLike,
    LetterDistribution,
    as_freqs,
    kl_divergence,
    shannon_entropy,
)
from .errors import DistributionError, EpsilonInadmissibleError
from .tilting import (
    BoundaryTypes,
    ClampedOptimum,
    Regime,
    boundary_types,
    clamped_optimum,
    cross_entropy_range,
    regime_breakpoints,
    tilted_cross_entropy,
    tilted_type,
)

#: step for the central-difference derivative at alpha = 0
DERIVATIVE_STEP = 1e-6

_SLOPE_EDGE_TOL = 1e-12


class SourceKind(Enum):
    """Which word source a computation refers to."""

    UNCONDITIONED = "unconditioned"
    CONDITIONED = "conditioned"
    UNIFORM_TYPICAL = "uniform"


@dataclass(frozen=True)
class Source:
    """A word source: letter law p plus, for the typical-set kinds, epsilon."""

    kind: SourceKind
    p: LetterDistribution
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.kind is SourceKind.UNCONDITIONED:
            if self.epsilon is not None:
                raise DistributionError("unconditioned sources take no epsilon")
        else:
            if self.epsilon is None or not (
                self.epsilon > 0.0 and math.isfinite(self.epsilon)
            ):
                raise DistributionError(
                    f"{self.kind.value} sources need a positive epsilon, "
                    f"got {self.epsilon}"
                )


def unconditioned(p: FreqsLike) -> Source:
    """The plain i.i.d. word source with letter law p."""
    return Source(SourceKind.UNCONDITIONED, _as_distribution(p))


def conditioned(p: FreqsLike, epsilon: float) -> Source:
    """The i.i.d. source conditioned on its (p, epsilon) typical set."""
    return Source(SourceKind.CONDITIONED, _as_distribution(p), float(epsilon))


def uniform_typical(p: FreqsLike, epsilon: float) -> Source:
    """The uniform law on the (p, epsilon) typical set."""
    return Source(SourceKind.UNIFORM_TYPICAL, _as_distribution(p), float(epsilon))


def _as_distribution(p: FreqsLike) -> LetterDistribution:
    if isinstance(p, LetterDistribution):
        return p
    return LetterDistribution(tuple(as_freqs(p)))


@dataclass(frozen=True)
class ScgfModel:
    """Evaluated structure of one source's scaled CGF.

    Attributes
    ----------
    source : Source
    entropy_p : float
        Shannon entropy h(p) of the letter law.
    boundary : BoundaryTypes or None
        Window boundary types; None for the unconditioned source.
    modal_decay : float
        Value of Lambda on alpha <= -1: the decay exponent of the most
        likely word's probability. Always <= 0.
    plateau_width : float
        Right derivative of Lambda at alpha = -1: the growth order of the
        set of near-maximum-probability words, and the width of the flat
        piece of the rate function. Always >= 0.
    max_slope : float
        Limiting slope of Lambda as alpha -> inf; the rate function is
        finite exactly on [0, max_slope].
    tail_intercept : float
        Intercept of the asymptote Lambda(alpha) ~ max_slope * alpha +
        tail_intercept; the rate function's value at max_slope is
        -tail_intercept.
    """

    source: Source
    entropy_p: float
    boundary: BoundaryTypes | None
    modal_decay: float
    plateau_width: float
    max_slope: float
    tail_intercept: float

    def __call__(self, alpha: float) -> float:
        """Lambda(alpha), defined for every real alpha."""
        alpha = float(alpha)
        if not math.isfinite(alpha):
            raise DistributionError(f"alpha must be finite, got {alpha}")
        if alpha <= -1.0:
            return self.modal_decay
        p = self.source.p
        kind = self.source.kind
        if kind is SourceKind.UNIFORM_TYPICAL:
            return alpha * shannon_entropy(self.boundary.l_minus)
        if kind is SourceKind.UNCONDITIONED:
            beta = 1.0 / (1.0 + alpha)
            return (1.0 + alpha) * _log_tilt_normaliser(p, beta)
        opt = clamped_optimum(p, self.source.epsilon, alpha, self.boundary)
        l = opt.type_vector
        return alpha * shannon_entropy(l) - kl_divergence(l, p)

    def slope(self, alpha: float) -> float:
        """dLambda/dalpha for alpha > -1: the entropy of the optimising type."""
        if not alpha > -1.0:
            raise DistributionError(f"slope needs alpha > -1, got {alpha}")
        kind = self.source.kind
        if kind is SourceKind.UNIFORM_TYPICAL:
            return shannon_entropy(self.boundary.l_minus)
        if kind is SourceKind.UNCONDITIONED:
            return shannon_entropy(tilted_type(self.source.p, alpha))
        opt = clamped_optimum(self.source.p, self.source.epsilon, alpha, self.boundary)
        return shannon_entropy(opt.type_vector)

    def optimum(self, alpha: float) -> ClampedOptimum:
        """The optimising type and active regime at alpha > -1."""
        kind = self.source.kind
        if kind is SourceKind.UNIFORM_TYPICAL:
            return ClampedOptimum(self.boundary.l_minus, Regime.UPPER_CLAMP)
        if kind is SourceKind.UNCONDITIONED:
            return ClampedOptimum(tilted_type(self.source.p, alpha), Regime.INTERIOR)
        return clamped_optimum(self.source.p, self.source.epsilon, alpha, self.boundary)


def _log_tilt_normaliser(p: FreqsLike, beta: float) -> float:
    """log sum_a p_a^beta over the support, evaluated stably for any beta >= 0."""
    logs = [beta * math.log(q) for q in as_freqs(p) if q > 0.0]
    top = max(logs)
    return top + math.log(math.fsum(math.exp(v - top) for v in logs))


def scgf_model(source: Source) -> ScgfModel:
    """Assemble the piecewise description of `source`'s scaled CGF."""
    p = source.p
    h = shannon_entropy(p)
    c_min, c_max = cross_entropy_range(p)
    support = p.support
    log_m_support = math.log(len(support))

    if source.kind is SourceKind.UNCONDITIONED:
        return ScgfModel(
            source=source,
            entropy_p=h,
            boundary=None,
            modal_decay=math.log(p.max_prob),
            plateau_width=math.log(len(p.argmax_set())),
            max_slope=log_m_support,
            tail_intercept=log_m_support - c_max,
        )

    bnd = boundary_types(p, source.epsilon)
    h_minus = shannon_entropy(bnd.l_minus)
    if source.kind is SourceKind.UNIFORM_TYPICAL:
        return ScgfModel(
            source=source,
            entropy_p=h,
            boundary=bnd,
            modal_decay=-h_minus,
            plateau_width=h_minus,
            max_slope=h_minus,
            tail_intercept=0.0,
        )

    return ScgfModel(
        source=source,
        entropy_p=h,
        boundary=bnd,
        modal_decay=min(-h + source.epsilon, math.log(p.max_prob)),
        plateau_width=shannon_entropy(bnd.l_plus),
        max_slope=h_minus,
        tail_intercept=-kl_divergence(bnd.l_minus, p),
    )


def scgf(source: Source, alpha: float) -> float:
    """Lambda(alpha) for `source`; see ScgfModel for the piecewise structure."""
    return scgf_model(source)(alpha)


@dataclass(frozen=True)
class GrowthExponents:
    """Headline growth exponents of one source's guesswork.

    mean_log_rate is the growth rate of E log G (the derivative of the
    scaled CGF at 0, computed by central difference); moment_rate is the
    growth rate of log E G (the scaled CGF at 1). Jensen forces
    moment_rate >= mean_log_rate. window_excess is the conditioned source's
    regime indicator at alpha = 1 (positive exactly when the first moment
    is governed by the high-entropy window edge); None for other kinds.
    """

    mean_log_rate: float
    moment_rate: float
    modal_decay: float
    plateau_width: float
    window_excess: float | None


def growth_exponents(source: Source) -> GrowthExponents:
    """Compute the exponent table of `source` from its scaled CGF."""
    model = scgf_model(source)
    step = DERIVATIVE_STEP
    mean_log = (model(step) - model(-step)) / (2.0 * step)
    excess = None
    if source.kind is SourceKind.CONDITIONED:
        excess = tilted_cross_entropy(source.p, 1.0) - (model.entropy_p + source.epsilon)
    return GrowthExponents(
        mean_log_rate=mean_log,
        moment_rate=model(1.0),
        modal_decay=model.modal_decay,
        plateau_width=model.plateau_width,
        window_excess=excess,
    )


def legendre_transform(model: ScgfModel, x: float) -> float:
    """Lambda*(x) = sup_alpha (x alpha - Lambda(alpha)) for one source.

    Piecewise evaluation: +inf outside [0, log m]; the exact plateau value
    -x - modal_decay on [0, plateau_width]; the endpoint value
    -tail_intercept at x = max_slope; +inf beyond max_slope; otherwise the
    supremum is located by bisection on the monotone slope and evaluated at
    the stationary point (second-order accurate in the bisection error).
    """
    log_m = math.log(model.source.p.m)
    if x < -_SLOPE_EDGE_TOL or x > log_m + _SLOPE_EDGE_TOL:
        return math.inf
    x = min(max(x, 0.0), log_m)
    if x <= model.plateau_width:
        return -x - model.modal_decay
    s = model.max_slope
    if x >= s - _SLOPE_EDGE_TOL:
        if x <= s + _SLOPE_EDGE_TOL:
            return -model.tail_intercept
        return math.inf

    lo = -1.0 + 1e-12
    hi = 1.0
    while model.slope(hi) < x:
        hi *= 2.0
        if hi > 1e9:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12 * max(1.0, abs(mid)):
            break
        if model.slope(mid) < x:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return x * mid - model(mid)


def rate_function(source: Source, x: float) -> float:
    """Large-deviation rate of (1/k) log G at x; +inf outside the domain."""
    return legendre_transform(scgf_model(source), x)


def guesswork_pmf_approx(source: Source, k: int, n: int) -> float:
    """Large-deviation approximation of P(G = n) for words of length k.

    (1/n) exp(-k Lambda*(log(n)/k)); on the plateau this collapses
    algebraically to exp(k * modal_decay), the modal word probability, and
    that collapsed form is returned exactly (so the uniform-on-typical-set
    approximation is constant across its plateau to full precision).
    """
    if k < 1 or n < 1:
        raise DistributionError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    model = scgf_model(source)
    x = math.log(n) / k
    if x <= model.plateau_width:
        return math.exp(k * model.modal_decay)
    rate = legendre_transform(model, x)
    if math.isinf(rate):
        return 0.0
    return math.exp(-(k * rate + math.log(n)))


@dataclass(frozen=True)
class BinaryReport:
    """Closed-form quantities for a binary source p = (p0, 1 - p0), p0 > 1/2.

    Mirrors the package's general machinery with no bisection anywhere, so
    the two routes can be cross-checked: boundary types are linear in
    epsilon, the first-moment rate of the unconditioned source is
    2 log(sqrt(p0) + sqrt(1 - p0)), and the conditioned first-moment rate
    switches between that value and the clamped form as window_excess
    changes sign. top/middle/bottom are the three guessing-difficulty gap
    curves (uniform vs conditioned-mean-log, uniform vs conditioned-moment,
    uniform vs unconditioned-moment).
    """

    p0: float
    epsilon: float
    l_minus_0: float
    l_plus_0: float
    entropy_p: float
    entropy_minus: float
    entropy_plus: float
    div_minus: float
    div_plus: float
    moment_rate_uncond: float
    window_excess: float
    moment_rate_cond: float
    top: float
    middle: float
    bottom: float


def admissible_epsilon_binary(p0: float) -> tuple[float, float]:
    """Open admissible epsilon interval for a binary source with p0 > 1/2."""
    spread = math.log(p0) - math.log1p(-p0)
    return (0.0, spread * min(p0 - 0.5, 1.0 - p0))


def binary_closed_forms(p0: float, epsilon: float) -> BinaryReport:
    """Closed-form report for a binary source; requires admissible epsilon.

    Raises
    ------
    DistributionError
        Unless 1/2 < p0 < 1.
    EpsilonInadmissibleError
        Unless epsilon lies strictly inside the admissible interval, which
        guarantees both window boundary types exist.
    """
    if not (0.5 < p0 < 1.0):
        raise DistributionError(f"binary closed forms need p0 in (1/2, 1), got {p0}")
    p1 = 1.0 - p0
    interval = admissible_epsilon_binary(p0)
    if not (interval[0] < epsilon < interval[1]):
        raise EpsilonInadmissibleError(
            f"epsilon inadmissible: {epsilon!r} outside the open interval "
            f"({interval[0]!r}, {interval[1]!r}) for p0={p0!r}",
            interval,
        )

    spread = math.log(p0) - math.log(p1)
    lm0 = p0 - epsilon / spread
    lp0 = p0 + epsilon / spread

    def h2(x: float) -> float:
        return -(x * math.log(x) + (1.0 - x) * math.log(1.0 - x))

    h = h2(p0)
    h_minus = h2(lm0)
    h_plus = h2(lp0)
    div_minus = (h + epsilon) - h_minus
    div_plus = (h - epsilon) - h_plus

    root_sum = math.sqrt(p0) + math.sqrt(p1)
    moment_uncond = 2.0 * math.log(root_sum)
    eta_1 = -(math.sqrt(p0) * math.log(p0) + math.sqrt(p1) * math.log(p1)) / root_sum
    excess = eta_1 - (h + epsilon)
    moment_cond = moment_uncond if excess <= 0.0 else h_minus - div_minus

    return BinaryReport(
        p0=p0,
        epsilon=epsilon,
        l_minus_0=lm0,
        l_plus_0=lp0,
        entropy_p=h,
        entropy_minus=h_minus,
        entropy_plus=h_plus,
        div_minus=div_minus,
        div_plus=div_plus,
        moment_rate_uncond=moment_uncond,
        window_excess=excess,
        moment_rate_cond=moment_cond,
        top=h_minus - h,
        middle=(h_minus - moment_uncond) if excess <= 0.0 else div_minus,
        bottom=h_minus - moment_uncond,
    )


def source_breakpoints(source: Source) -> tuple[float | None, float | None]:
    """Regime breakpoints (alpha_low, alpha_high) of the conditioned optimiser.

    (None, None) for kinds whose optimiser never switches branch.
    """
    if source.kind is not SourceKind.CONDITIONED:
        return (None, None)
    return regime_breakpoints(source.p, source.epsilon)


def alphas_or_default(alphas: Sequence[float] | None) -> tuple[float, ...]:
    """Shared default moment orders used by oracles and the CLI."""
    if alphas is None:
        return (-0.5, 0.5, 1.0, 2.0)
    return tuple(float(a) for a in alphas)
