"""Counting trivial words for random walks on B_3 (gamma letters) and F_2.

Since both alphabets are closed under inversion, the number of trivial words
of length 2k is ``sum_g N_k(g)**2`` where ``N_k(g)`` counts words of length k
evaluating to g.  The walk therefore only needs to run to half length.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Hashable

from .braid_word import free_reduce, gamma, gamma_to_sigma, sigma
from .garside import is_trivial, normal_form

MAX_N = {"b3": 14, "f2": 20}
FRONTIER_CAP = 5_000_000


class WalkGroup(str, Enum):
    B3_GAMMA = "b3"
    F2 = "f2"


class BudgetExceeded(RuntimeError):
    pass


def _alphabet(generators: int, power: int) -> list[tuple[int, ...]]:
    return [(s * g,) * power for g in range(1, generators + 1) for s in (1, -1)]


class WalkCounter:
    """Distribution of endpoints of all words of a given length."""

    def __init__(self, group: WalkGroup | str, *, power: int = 1, generators: int = 2,
                 cap: int = FRONTIER_CAP) -> None:
        self.group = WalkGroup(group)
        self.letters = _alphabet(generators, power)
        self.cap = cap
        self.length = 0
        if self.group is WalkGroup.B3_GAMMA:
            steps = [normal_form(gamma_to_sigma(gamma(*a)), 3) for a in self.letters]
            self._steps: list = steps
            start: Hashable = normal_form(sigma(), 3)
        else:
            self._steps = self.letters
            start = ()
        self.frontier: Counter = Counter({start: 1})

    def _apply(self, state, step):
        if self.group is WalkGroup.B3_GAMMA:
            return state * step
        out = list(state)
        for x in step:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def step(self) -> None:
        nxt: Counter = Counter()
        for state, c in self.frontier.items():
            for s in self._steps:
                nxt[self._apply(state, s)] += c
        if len(nxt) > self.cap:
            raise BudgetExceeded(f"frontier of {len(nxt)} elements exceeds cap {self.cap}")
        self.frontier = nxt
        self.length += 1

    @property
    def total(self) -> int:
        return sum(self.frontier.values())


def count_trivial_words(group: WalkGroup | str, n: int, *, power: int = 1,
                        generators: int = 2, max_n: int | None = None) -> int:
    group = WalkGroup(group)
    limit = MAX_N[group.value] if max_n is None else max_n
    if n < 0 or n > limit:
        raise BudgetExceeded(f"n={n} outside 0..{limit}")
    return counts_up_to(group, n, power=power, generators=generators)[n]


def counts_up_to(group: WalkGroup | str, max_n: int, *, power: int = 1,
                 generators: int = 2) -> list[int]:
    """Trivial-word counts for every length 0..max_n."""
    walk = WalkCounter(group, power=power, generators=generators)
    out = [0] * (max_n + 1)
    for k in range(max_n // 2 + 1):
        # odd lengths: every letter moves the exponent sum by an odd multiple of power
        out[2 * k] = sum(c * c for c in walk.frontier.values())
        if 2 * k + 2 <= max_n:
            walk.step()
    return out


def raw_count(group: WalkGroup | str, n: int, *, power: int = 1, generators: int = 2) -> int:
    """Brute-force count over all words, the independent oracle."""
    group = WalkGroup(group)
    letters = _alphabet(generators, power)
    total = 0
    for word in itertools.product(letters, repeat=n):
        flat = tuple(x for step in word for x in step)
        if group is WalkGroup.F2:
            total += not free_reduce(sigma(*flat)).letters
        else:
            total += is_trivial(gamma(*flat))
    return total


@dataclass(frozen=True)
class PowerSeries:
    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]


def kesten_series(max_degree: int) -> PowerSeries:
    """Taylor coefficients of (2 sqrt(1 - 12 z^2) - 1) / (1 - 16 z^2)."""
    if not 0 <= max_degree <= 64:
        raise ValueError("max_degree must lie in 0..64")
    half = max_degree // 2
    binom = [Fraction(1)]
    for k in range(1, half + 1):
        binom.append(binom[-1] * (Fraction(1, 2) - (k - 1)) / k)
    num = [2 * b * (-12) ** k for k, b in enumerate(binom)]
    num[0] -= 1
    even = [sum(num[j] * 16 ** (k - j) for j in range(k + 1)) for k in range(half + 1)]
    coeffs = [Fraction(0)] * (max_degree + 1)
    for k, c in enumerate(even):
        coeffs[2 * k] = c
    return PowerSeries(tuple(coeffs))


def laplacian_moments(group: WalkGroup | str, max_n: int, normalization: str = "count",
                      **kw) -> list[Fraction]:
    counts = counts_up_to(group, max_n, **kw)
    if normalization == "count":
        return [Fraction(c) for c in counts]
    if normalization == "half":
        return [Fraction(c, 2 ** n) for n, c in enumerate(counts)]
    raise ValueError("normalization must be 'count' or 'half'")


def compare_with_kesten(max_n: int) -> dict:
    if max_n < 0 or max_n % 2 or max_n > 20:
        raise ValueError("max_n must be even and at most 20")
    series = kesten_series(max_n)
    counts = counts_up_to(WalkGroup.F2, max_n)
    mismatches = [n for n in range(max_n + 1) if series[n] != counts[n]]
    return {
        "match": not mismatches,
        "mismatches": mismatches,
        "series": [int(c) if c.denominator == 1 else str(c) for c in series.coefficients],
        "counts": counts,
        "half_normalized": [str(Fraction(c, 2 ** n)) for n, c in enumerate(counts)],
        "reference": "count",
    }


def arcsine_check(max_n: int) -> bool:
    """Single Haar unitary: trivial words in gamma_1^{+-1} are central binomials."""
    counts = counts_up_to(WalkGroup.B3_GAMMA, max_n, generators=1)
    return all(counts[n] == (comb(n, n // 2) if n % 2 == 0 else 0) for n in range(max_n + 1))
