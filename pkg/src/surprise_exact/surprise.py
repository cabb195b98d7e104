"""Exact surprise: the hypergeometric upper tail of the intracluster edge count.

All probabilities are :class:`fractions.Fraction` over big integers; the
base-10 logarithm is derived from the exact value with :mod:`decimal` and is
for presentation only.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering

from .graph import Clustering, Graph

DEFAULT_DIGITS = 15


@lru_cache(maxsize=1 << 16)
def binomial(a: int, b: int) -> int:
    """Exact C(a, b) with C(a, b) = 0 for b > a."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return math.comb(a, b)


@dataclass(frozen=True)
class PairEdgeCounts:
    """The four counts that determine surprise."""

    p: int
    m: int
    i_p: int
    i_e: int

    def __post_init__(self):
        p, m, i_p, i_e = self.p, self.m, self.i_p, self.i_e
        if not (0 <= i_e <= i_p <= p and i_e <= m <= p and m - i_e <= p - i_p):
            raise ValueError(f"invalid counts p={p} m={m} i_p={i_p} i_e={i_e}")


@total_ordering
class SurpriseValue:
    """An exact surprise probability with its ``-log10`` for display.

    Values order and compare by probability, so a smaller value is a better
    clustering.  ``neg_log10`` carries at least ``digits`` correct
    significant digits.
    """

    def __init__(self, probability: Fraction, digits: int = DEFAULT_DIGITS):
        if not 0 < probability <= 1:
            raise ValueError(f"surprise must lie in (0, 1], got {probability}")
        self.probability = probability
        self.digits = digits

    @cached_property
    def neg_log10(self) -> decimal.Decimal:
        num, den = self.probability.numerator, self.probability.denominator
        if num == den:
            return decimal.Decimal(0)
        # for probabilities close to 1 the logarithm is tiny; widen the working
        # precision by the number of cancelled leading digits
        lost = max(0, len(str(den)) - len(str(den - num))) if 2 * num > den else 0
        with decimal.localcontext() as ctx:
            ctx.prec = self.digits + lost + 10
            x = (decimal.Decimal(den) / decimal.Decimal(num)).log10()
            ctx.prec = self.digits
            return +x

    def scientific(self, decimals: int = 4) -> str:
        """Probability as ``d.dddde-XXX``, correctly rounded from the exact value."""
        num, den = self.probability.numerator, self.probability.denominator
        exp = len(str(num)) - len(str(den))
        # normalise so that 1 <= num / (den * 10**exp) < 10
        if _scaled_cmp(num, den, exp) < 0:
            exp -= 1
        elif _scaled_cmp(num, den, exp + 1) >= 0:
            exp += 1
        shift = decimals - exp
        a, b = (num * 10**shift, den) if shift >= 0 else (num, den * 10 ** (-shift))
        q, r = divmod(a, b)
        if 2 * r >= b:
            q += 1
        if q >= 10 ** (decimals + 1):
            q //= 10
            exp += 1
        digits = str(q)
        mant = digits[0] + ("." + digits[1:] if decimals else "")
        sign = "-" if exp < 0 else "+"
        return f"{mant}e{sign}{abs(exp):02d}"

    def to_json(self, exact: bool = False) -> dict:
        d = {"neg_log10": str(self.neg_log10), "probability_sci": self.scientific()}
        if exact:
            d["probability"] = f"{self.probability.numerator}/{self.probability.denominator}"
        return d

    def __eq__(self, other):
        if not isinstance(other, SurpriseValue):
            return NotImplemented
        return self.probability == other.probability

    def __lt__(self, other):
        if not isinstance(other, SurpriseValue):
            return NotImplemented
        return self.probability < other.probability

    def __hash__(self):
        return hash(self.probability)

    def __repr__(self):
        return f"SurpriseValue({self.scientific()}, neg_log10={self.neg_log10:.6f})"


def _scaled_cmp(num: int, den: int, exp: int) -> int:
    """Sign of num/den - 10**exp."""
    lhs, rhs = (num, den * 10**exp) if exp >= 0 else (num * 10 ** (-exp), den)
    return (lhs > rhs) - (lhs < rhs)


@lru_cache(maxsize=1 << 18)
def _tail_numerator(p: int, m: int, i_p: int, i_e: int) -> int:
    lo = max(i_e, m - (p - i_p))
    hi = min(m, i_p)
    return sum(binomial(i_p, i) * binomial(p - i_p, m - i) for i in range(lo, hi + 1))


def surprise(c: PairEdgeCounts, digits: int = DEFAULT_DIGITS) -> SurpriseValue:
    """Probability that a uniform random graph with ``m`` of the ``p`` pairs has
    at least ``i_e`` edges among ``i_p`` designated pairs."""
    num = _tail_numerator(c.p, c.m, c.i_p, c.i_e)
    return SurpriseValue(Fraction(num, binomial(c.p, c.m)), digits)


def surprise_of(p: int, m: int, i_p: int, i_e: int, digits: int = DEFAULT_DIGITS) -> SurpriseValue:
    return surprise(PairEdgeCounts(p, m, i_p, i_e), digits)


def evaluate(g: Graph, z: Clustering, digits: int = DEFAULT_DIGITS) -> SurpriseValue:
    """Surprise of clustering ``z`` on ``g``; ``z`` must cover exactly g's vertices."""
    if len(z.assignment) != g.n:
        raise ValueError(f"clustering has {len(z.assignment)} vertices, graph has {g.n}")
    # recount rather than trust the stored counts: z may come from another graph
    z = Clustering.from_assignment(g, z.assignment)
    return surprise_of(g.p, g.m, z.i_p, z.i_e, digits)


def bound_relaxed(i_p_at_k: int, k_prime: int, p: int, m: int) -> SurpriseValue:
    """Best surprise any clustering with exactly ``k_prime`` intracluster edges can
    have, given that every clustering with at least ``k <= k_prime`` edges has
    at least ``i_p_at_k`` intracluster pairs.

    ``i_p`` is clamped into the range a clustering with ``k_prime`` edges can
    realise; above that range the bound is 1 (no such clustering exists).
    """
    if not 0 <= k_prime <= m:
        raise ValueError(f"k' = {k_prime} outside 0..{m}")
    i_p = min(max(i_p_at_k, k_prime), p - m + k_prime)
    return surprise_of(p, m, i_p, k_prime)


def bound_gap(gap: int, k_prime: int, p: int, m: int) -> SurpriseValue:
    """Lower bound S(k' + gap, k') for clusterings with ``k_prime`` edges and at
    least ``gap`` intracluster non-edges."""
    if gap < 0:
        raise ValueError("gap must be nonnegative")
    if not 0 <= k_prime <= m:
        raise ValueError(f"k' = {k_prime} outside 0..{m}")
    if k_prime + gap > p:
        raise ValueError(f"k' + gap = {k_prime + gap} exceeds p = {p}")
    return surprise_of(p, m, min(k_prime + gap, p - m + k_prime), k_prime)
