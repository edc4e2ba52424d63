"""Distributions on finite alphabets, empirical types, and entropy functionals.

Shared vocabulary for the rest of the package: probability vectors on
{0, ..., m-1}, k-types (empirical letter frequencies), Shannon and Renyi
functionals, exact counting of type classes, and typical-set membership.
All logarithms are natural; every rate in the package is in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import (
    AbsoluteContinuityError,
    DistributionError,
    GrainError,
    TypeSpaceTooLargeError,
)

SIMPLEX_TOL = 1e-12
GRAIN_TOL = 1e-9
MAX_TYPES_DEFAULT = 10**7


def _validated_simplex(values: Sequence[float], what: str) -> tuple[float, ...]:
    probs = tuple(float(v) for v in values)
    if len(probs) < 1:
        raise DistributionError(f"{what} must have at least one entry")
    if any(v < 0.0 or math.isnan(v) for v in probs):
        raise DistributionError(f"{what} entries must be nonnegative, got {probs}")
    total = math.fsum(probs)
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise DistributionError(
            f"{what} entries must sum to 1 within {SIMPLEX_TOL}, got sum {total!r}"
        )
    return probs


@dataclass(frozen=True)
class LetterDistribution:
    """Probability mass function on the alphabet {0, ..., m-1}, m >= 2."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = _validated_simplex(self.probs, "letter distribution")
        if len(probs) < 2:
            raise DistributionError("alphabet needs at least two letters")
        object.__setattr__(self, "probs", probs)

    @property
    def m(self) -> int:
        return len(self.probs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(a for a, v in enumerate(self.probs) if v > 0.0)

    @property
    def max_prob(self) -> float:
        return max(self.probs)

    def argmax_set(self, tol: float = 1e-12) -> tuple[int, ...]:
        """Letters whose probability ties the maximum within tol."""
        top = self.max_prob
        return tuple(a for a, v in enumerate(self.probs) if v >= top - tol)


@dataclass(frozen=True)
class TypeVector:
    """A point of the simplex; with `grain` k set, an empirical k-type.

    Parameters
    ----------
    freqs : tuple of float
        Letter frequencies, nonnegative, summing to 1 within 1e-12.
    grain : int or None
        When set, every frequency must be an integer multiple of 1/grain
        (within 1e-9); `counts` then recovers the exact letter counts.
    """

    freqs: tuple[float, ...]
    grain: int | None = None

    def __post_init__(self) -> None:
        freqs = _validated_simplex(self.freqs, "type vector")
        object.__setattr__(self, "freqs", freqs)
        if self.grain is not None:
            k = int(self.grain)
            if k < 1:
                raise GrainError(f"grain must be a positive integer, got {self.grain}")
            object.__setattr__(self, "grain", k)
            for f in freqs:
                if abs(f * k - round(f * k)) > GRAIN_TOL:
                    raise GrainError(
                        f"frequency {f!r} is not a k-type entry for k={k}: "
                        "not an integer multiple of 1/k"
                    )

    @classmethod
    def from_counts(cls, counts: Sequence[int], k: int | None = None) -> "TypeVector":
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise GrainError(f"letter counts must be nonnegative, got {counts}")
        total = sum(counts)
        if k is None:
            k = total
        if total != k or k < 1:
            raise GrainError(f"counts {counts} do not sum to k={k}")
        return cls(tuple(c / k for c in counts), grain=k)

    @property
    def counts(self) -> tuple[int, ...]:
        if self.grain is None:
            raise GrainError("counts require a grained type vector")
        return tuple(round(f * self.grain) for f in self.freqs)


FreqsLike = Union[LetterDistribution, TypeVector, Sequence[float]]


def as_freqs(l: FreqsLike) -> tuple[float, ...]:
    """Coerce a distribution, type vector, or bare sequence to frequencies."""
    if isinstance(l, LetterDistribution):
        return l.probs
    if isinstance(l, TypeVector):
        return l.freqs
    return _validated_simplex(l, "frequency vector")


@dataclass(frozen=True)
class Word:
    """A word of length k >= 1 over {0, ..., m-1}, letters as integer indices."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        letters = tuple(int(a) for a in self.letters)
        if len(letters) < 1:
            raise DistributionError("a word needs at least one letter")
        if any(a < 0 for a in letters):
            raise DistributionError("letter indices must be nonnegative")
        object.__setattr__(self, "letters", letters)

    @property
    def k(self) -> int:
        return len(self.letters)


WordLike = Union[Word, Sequence[int]]


def _letters(word: WordLike) -> tuple[int, ...]:
    if isinstance(word, Word):
        return word.letters
    return Word(tuple(word)).letters


def shannon_entropy(l: FreqsLike) -> float:
    """Shannon entropy -sum_a l_a log l_a in nats, with 0 log 0 = 0.

    Always in [0, log m]; 0 exactly for a point mass.
    """
    return -math.fsum(f * math.log(f) for f in as_freqs(l) if f > 0.0)


def cross_entropy(l: FreqsLike, p: FreqsLike) -> float:
    """Cross entropy -sum_a l_a log p_a in nats; +inf if l escapes p's support.

    Satisfies the decomposition cross_entropy(l, p) =
    shannon_entropy(l) + kl_divergence(l, p), which the package leans on:
    a word of type l has per-letter log-probability -cross_entropy(l, p).
    """
    lf, pf = as_freqs(l), as_freqs(p)
    if len(lf) != len(pf):
        raise DistributionError(f"alphabet mismatch: {len(lf)} vs {len(pf)} letters")
    total = 0.0
    for f, q in zip(lf, pf):
        if f > 0.0:
            if q <= 0.0:
                return math.inf
            total += f * -math.log(q)
    return total


def kl_divergence(l: FreqsLike, p: FreqsLike) -> float:
    """Relative entropy D(l || p) = sum_a l_a log(l_a / p_a), in nats.

    Raises
    ------
    AbsoluteContinuityError
        If l puts mass on a letter outside the support of p.
    """
    lf, pf = as_freqs(l), as_freqs(p)
    if len(lf) != len(pf):
        raise DistributionError(f"alphabet mismatch: {len(lf)} vs {len(pf)} letters")
    terms = []
    for a, (f, q) in enumerate(zip(lf, pf)):
        if f > 0.0:
            if q <= 0.0:
                raise AbsoluteContinuityError(
                    f"absolute-continuity violation: mass {f!r} on letter {a} "
                    "outside the reference support"
                )
            terms.append(f * (math.log(f) - math.log(q)))
    return max(math.fsum(terms), 0.0)


def renyi_rate(p: FreqsLike, beta: float) -> float:
    """Specific Renyi entropy of order beta for an i.i.d. letter source.

    Parameters
    ----------
    p : distribution on the alphabet
    beta : float
        Order, beta > 0. The beta = 1 case is the Shannon limit and is
        returned as `shannon_entropy(p)` exactly.

    Returns
    -------
    float
        (1 / (1 - beta)) log sum_a p_a^beta, in nats. Nonincreasing in beta.
    """
    if not beta > 0.0:
        raise DistributionError(f"Renyi order must be positive, got {beta}")
    pf = as_freqs(p)
    if abs(beta - 1.0) < 1e-14:
        return shannon_entropy(pf)
    s = math.fsum(q**beta for q in pf if q > 0.0)
    return math.log(s) / (1.0 - beta)


def word_log_prob(p: FreqsLike, word: WordLike) -> float:
    """log P(word) under i.i.d. draws from p; -inf for an impossible word."""
    pf = as_freqs(p)
    total = 0.0
    for a in _letters(word):
        if a >= len(pf):
            raise DistributionError(f"letter index {a} outside alphabet of size {len(pf)}")
        q = pf[a]
        if q <= 0.0:
            return -math.inf
        total += math.log(q)
    return total


def word_type(word: WordLike, m: int) -> TypeVector:
    """Empirical type of a word over an alphabet of size m (a k-grained type)."""
    letters = _letters(word)
    if any(a >= m for a in letters):
        raise DistributionError(f"letter index outside alphabet of size {m}")
    counts = [0] * m
    for a in letters:
        counts[a] += 1
    return TypeVector.from_counts(counts)


def type_count(l: TypeVector) -> int:
    """Exact number of length-k words of type l: the multinomial k!/prod(k l_a)!."""
    counts = l.counts
    result = 1
    remaining = sum(counts)
    for c in counts:
        result *= math.comb(remaining, c)
        remaining -= c
    return result


def log_type_count(l: TypeVector) -> float:
    """log of the type-class size via log-gamma; approximate but size-unbounded."""
    counts = l.counts
    k = sum(counts)
    return math.lgamma(k + 1) - math.fsum(math.lgamma(c + 1) for c in counts)


def num_types(k: int, m: int) -> int:
    """Number of k-types on m letters, C(k + m - 1, m - 1)."""
    return math.comb(k + m - 1, m - 1)


def enumerate_types(
    k: int, m: int, max_types: int = MAX_TYPES_DEFAULT
) -> Iterator[TypeVector]:
    """Yield every k-type on m letters in lexicographic count order.

    Counts are generated with the first letter's count ascending, then
    recursively the rest, so for k=2, m=2 the order is (0,2), (1,1), (2,0).

    Raises
    ------
    TypeSpaceTooLargeError
        If C(k + m - 1, m - 1) exceeds max_types; nothing is yielded.
    """
    if k < 1 or m < 2:
        raise DistributionError(f"need k >= 1 and m >= 2, got k={k}, m={m}")
    total = num_types(k, m)
    if total > max_types:
        raise TypeSpaceTooLargeError(
            f"type-space too large: {total} k-types on m={m} letters at k={k} "
            f"exceeds the cap {max_types}"
        )
    return (TypeVector.from_counts(c) for c in _compositions(k, m))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class TypicalSetSpec:
    """Parameters of a typical set: source letter law p, half-width epsilon, length k.

    The window is recomputed from (p, epsilon) on demand, never stored.
    """

    p: LetterDistribution
    epsilon: float
    k: int

    def __post_init__(self) -> None:
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise DistributionError(f"epsilon must be positive, got {self.epsilon}")
        if self.k < 1:
            raise DistributionError(f"word length must be >= 1, got {self.k}")

    @property
    def window(self) -> tuple[float, float]:
        return typical_window(self.p, self.epsilon)

    def contains(self, l: FreqsLike) -> bool:
        return is_typical_type(self.p, self.epsilon, l)


def typical_window(p: FreqsLike, epsilon: float) -> tuple[float, float]:
    """Closed per-letter log-probability window [h(p) - eps, h(p) + eps]."""
    if not epsilon > 0.0:
        raise DistributionError(f"epsilon must be positive, got {epsilon}")
    h = shannon_entropy(p)
    return (h - epsilon, h + epsilon)


# Slack on the closed window so types sitting exactly on an edge in exact
# arithmetic are not lost to float dust. Shared by every membership test in
# the package so the naive and type-based oracles agree word for word.
WINDOW_SLACK = 1e-12


def is_typical_type(p: FreqsLike, epsilon: float, l: FreqsLike) -> bool:
    """Closed-window membership test, valid for grained and ungrained types.

    A type l is typical when -sum_a l_a log p_a lands in
    [h(p) - eps, h(p) + eps]; both endpoints count as inside. Types with
    mass outside the support of p have infinite cross entropy and are
    never typical.
    """
    lo, hi = typical_window(p, epsilon)
    c = cross_entropy(l, p)
    return lo - WINDOW_SLACK <= c <= hi + WINDOW_SLACK
