"""Braid words in the Artin (sigma) and square-root-of-free (gamma) presentations.

A word is an immutable tuple of nonzero signed integers: ``+i`` stands for the
generator with index ``i`` and ``-i`` for its inverse.  The identity is the
empty word; there is no letter with index 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, NamedTuple


class Presentation(str, Enum):
    SIGMA = "sigma"
    GAMMA = "gamma"


class Letter(NamedTuple):
    presentation: Presentation
    index: int
    sign: int


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[int, ...] = ()
    presentation: Presentation = Presentation.SIGMA
    strands: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        object.__setattr__(self, "presentation", Presentation(self.presentation))
        if any(x == 0 for x in self.letters):
            raise WordError("letter index must be >= 1")
        if self.strands is not None:
            if self.strands < 1:
                raise WordError("strands must be positive")
            if self.max_index >= self.strands:
                raise WordError(
                    f"index {self.max_index} does not fit in {self.strands} strands"
                )

    @property
    def max_index(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    @property
    def min_strands(self) -> int:
        """Smallest n with every index <= n - 1 (ignores the strands hint)."""
        return self.max_index + 1

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        for x in self.letters:
            yield Letter(self.presentation, abs(x), 1 if x > 0 else -1)

    def __mul__(self, other: BraidWord) -> BraidWord:
        return concat(self, other)

    def __pow__(self, k: int) -> BraidWord:
        base = self if k >= 0 else invert(self)
        return BraidWord(base.letters * abs(k), self.presentation, self.strands)

    def __str__(self) -> str:
        return format_word(self)

    def with_letters(self, letters: Iterable[int]) -> BraidWord:
        return BraidWord(tuple(letters), self.presentation, self.strands)


def sigma(*letters: int) -> BraidWord:
    return BraidWord(letters, Presentation.SIGMA)


def gamma(*letters: int) -> BraidWord:
    return BraidWord(letters, Presentation.GAMMA)


def parse_word(text: str) -> BraidWord:
    """Parse ``"sigma: 1 2 -1"`` or ``"gamma: ..."``."""
    head, sep, body = text.strip().partition(":")
    if not sep:
        raise WordError(f"missing presentation prefix in {text!r}")
    try:
        pres = Presentation(head.strip().lower())
    except ValueError:
        raise WordError(f"unknown presentation {head.strip()!r}") from None
    try:
        letters = tuple(int(tok) for tok in body.split())
    except ValueError:
        raise WordError(f"non-integer letter in {text!r}") from None
    return BraidWord(letters, pres)


def format_word(w: BraidWord) -> str:
    body = " ".join(str(x) for x in w.letters)
    return f"{w.presentation.value}: {body}".rstrip()


def free_reduce(w: BraidWord) -> BraidWord:
    stack: list[int] = []
    for x in w.letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return w.with_letters(stack)


def invert(w: BraidWord) -> BraidWord:
    return w.with_letters(-x for x in reversed(w.letters))


def inv_map(w: BraidWord) -> BraidWord:
    """The automorphism flipping every generator to its inverse, in place."""
    return w.with_letters(-x for x in w.letters)


def concat(*words: BraidWord) -> BraidWord:
    if not words:
        return BraidWord()
    pres = words[0].presentation
    if any(w.presentation != pres for w in words):
        raise WordError("cannot concatenate words in different presentations")
    hints = [w.strands for w in words if w.strands is not None]
    strands = max(hints) if hints else None
    letters = tuple(itertools.chain.from_iterable(w.letters for w in words))
    return BraidWord(letters, pres, strands)


def exponent_sum(w: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in w.letters)


def underlying_permutation(w: BraidWord, n: int | None = None) -> tuple[int, ...]:
    """Image in S_n as a one-line tuple ``p`` with ``p[x]`` the image of ``x``.

    Composition follows words left to right as functions, so that
    ``perm(w1 * w2) == compose(perm(w1), perm(w2))``.
    """
    if w.presentation is Presentation.GAMMA:
        w = gamma_to_sigma(w)
    if n is None:
        n = w.min_strands
    if w.max_index >= n:
        raise WordError(f"index {w.max_index} does not fit in S_{n}")
    p = list(range(n))
    for x in w.letters:
        i = abs(x)
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def _require(w: BraidWord, pres: Presentation) -> None:
    if w.presentation is not pres:
        raise WordError(f"expected a {pres.value} word, got {w.presentation.value}")


def shift(w: BraidWord, k: int = 1) -> BraidWord:
    _require(w, Presentation.SIGMA)
    if k < 0:
        raise WordError("shift amount must be nonnegative")
    strands = None if w.strands is None else w.strands + k
    return BraidWord(tuple(x + k if x > 0 else x - k for x in w.letters), w.presentation, strands)


def m_shift(w: BraidWord, m: int) -> BraidWord:
    """sh_m(w) = (s_m ... s_1) sh(w) (s_1^-1 ... s_m^-1), free-reduced."""
    _require(w, Presentation.SIGMA)
    if m < 1:
        raise WordError("m must be positive")
    down = tuple(range(m, 0, -1))
    letters = down + shift(w, 1).letters + tuple(-i for i in reversed(down))
    return free_reduce(BraidWord(letters, Presentation.SIGMA))


def _gamma_letter_in_sigma(k: int, sign: int) -> list[int]:
    head = list(range(1, k))
    return head + [sign * k] + [-i for i in reversed(head)]


def _sigma_letter_in_gamma(k: int, sign: int) -> list[int]:
    head = list(range(1, k))
    return [-i for i in head] + [sign * k] + list(reversed(head))


def gamma_to_sigma(w: BraidWord) -> BraidWord:
    _require(w, Presentation.GAMMA)
    out: list[int] = []
    for x in w.letters:
        out.extend(_gamma_letter_in_sigma(abs(x), 1 if x > 0 else -1))
    return free_reduce(BraidWord(tuple(out), Presentation.SIGMA, w.strands))


def sigma_to_gamma(w: BraidWord) -> BraidWord:
    _require(w, Presentation.SIGMA)
    out: list[int] = []
    for x in w.letters:
        out.extend(_sigma_letter_in_gamma(abs(x), 1 if x > 0 else -1))
    return free_reduce(BraidWord(tuple(out), Presentation.GAMMA, w.strands))


def to_sigma(w: BraidWord) -> BraidWord:
    return gamma_to_sigma(w) if w.presentation is Presentation.GAMMA else w


def gamma_tilde_to_sigma(indices: Iterable[int]) -> BraidWord:
    """Sigma word of a product of the generators inv(gamma_i^-1).

    The map x -> inv(x^-1) reverses products, so each tilde letter is
    expanded separately: inv(gamma_k^-1) = s_1^-1..s_{k-1}^-1 s_k s_{k-1}..s_1.
    """
    out: list[int] = []
    for x in indices:
        k, sign = abs(x), (1 if x > 0 else -1)
        gi = BraidWord(tuple(_gamma_letter_in_sigma(k, -sign)), Presentation.SIGMA)
        out.extend(inv_map(gi).letters)
    return free_reduce(BraidWord(tuple(out), Presentation.SIGMA))


class FundamentalKind(str, Enum):
    DELTA_SMALL = "delta"
    DELTA = "Delta"
    DELTA_IN_GAMMA = "Delta_in_gamma"
    PYRAMID_UP = "pyramid_up"
    PYRAMID_DOWN = "pyramid_down"


def fundamental_braid(kind: FundamentalKind | str, n: int) -> BraidWord:
    kind = FundamentalKind(kind)
    if n < 2:
        raise WordError("n must be at least 2")
    if kind is FundamentalKind.DELTA_SMALL:
        return BraidWord(tuple(range(n - 1, 0, -1)))
    if kind is FundamentalKind.DELTA:
        letters = [i for top in range(n - 1, 0, -1) for i in range(1, top + 1)]
        return BraidWord(tuple(letters))
    if kind is FundamentalKind.DELTA_IN_GAMMA:
        letters = [i for top in range(n - 1, 0, -1) for i in range(top, 0, -1)]
        return BraidWord(tuple(letters), Presentation.GAMMA)
    up = list(range(1, n))
    if kind is FundamentalKind.PYRAMID_UP:
        return BraidWord(tuple(up + [n] + up[::-1]))
    down = list(range(n, 0, -1))
    return BraidWord(tuple(down + down[::-1][1:]))


class RelationKind(str, Enum):
    B1 = "B1"
    B2 = "B2"
    EB = "EB"
    EB_TILDE = "EBtilde"
    SERGIESCU_PAIR = "SergiescuPair"
    SERGIESCU_TRIPLE = "SergiescuTriple"


@dataclass(frozen=True)
class PresentationRelation:
    kind: RelationKind
    parameters: tuple[int, ...]
    lhs: BraidWord
    rhs: BraidWord


def relation_instances(kind: RelationKind | str, n: int) -> list[PresentationRelation]:
    """All instances of a defining or extra relation inside B_n."""
    kind = RelationKind(kind)
    gens = range(1, n)
    out: list[PresentationRelation] = []

    def rel(params, lhs, rhs):
        out.append(PresentationRelation(kind, tuple(params), lhs, rhs))

    if kind is RelationKind.B1:
        for i in range(1, n - 1):
            rel((i, i + 1), sigma(i, i + 1, i), sigma(i + 1, i, i + 1))
    elif kind is RelationKind.B2:
        for i, j in itertools.combinations(gens, 2):
            if j - i > 1:
                rel((i, j), sigma(i, j), sigma(j, i))
    elif kind is RelationKind.EB:
        for k, l in itertools.combinations(gens, 2):
            mid = list(range(l - 2, k - 1, -1))
            rel((k, l), gamma(l, l - 1, *mid, l), gamma(l - 1, *mid, l, l - 1))
    elif kind is RelationKind.EB_TILDE:
        for k, l in itertools.combinations(gens, 2):
            mid = list(range(k, l - 1))
            rel(
                (k, l),
                gamma_tilde_to_sigma([l, *mid, l - 1, l]),
                gamma_tilde_to_sigma([l - 1, l, *mid, l - 1]),
            )
    elif kind is RelationKind.SERGIESCU_PAIR:
        for j, k in itertools.combinations(gens, 2):
            rel((j, k), gamma(j, k, j), gamma(k, j, k))
    else:
        for j, k, l in itertools.combinations(gens, 3):
            a, b, c = gamma(l, k, j, l), gamma(k, j, l, k), gamma(j, l, k, j)
            rel((j, k, l), a, b)
            rel((j, k, l), b, c)
            rel((j, k, l), a, c)
    return out
