"""Finite linear combinations of braids, with the canonical trace.

Coefficients may be ``int``/``Fraction`` (exact real), sympy ``QQ_I``
Gaussian rationals (exact complex) or Python ``complex`` (floating).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .braid_word import BraidWord, concat, free_reduce, invert, parse_word, format_word, to_sigma
from .garside import IDENTITY_KEY, canonical_key

FLOAT_TOL = 1e-12


def _is_zero(c: Any) -> bool:
    if isinstance(c, (float, complex)):
        return abs(c) < FLOAT_TOL
    return c == 0


def conj(c: Any) -> Any:
    if hasattr(c, "conjugate"):
        return c.conjugate()
    # sympy GaussianRational has no conjugate(); rebuild from parts
    return type(c)(c.x, -c.y)


def _sigma(w: BraidWord) -> BraidWord:
    return free_reduce(to_sigma(w))


@dataclass(frozen=True)
class GroupAlgebraElement:
    terms: Mapping[bytes, tuple[Any, BraidWord]] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Any, BraidWord]]) -> GroupAlgebraElement:
        acc: dict[bytes, list] = {}
        for c, w in pairs:
            w = _sigma(w)
            k = canonical_key(w)
            if k in acc:
                acc[k][0] = acc[k][0] + c
            else:
                acc[k] = [c, w]
        return cls({k: (c, w) for k, (c, w) in acc.items() if not _is_zero(c)})

    def __add__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        return add(self, other)

    def __sub__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        return add(self, scalar_mul(-1, other))

    def __mul__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        return mul(self, other)

    def __rmul__(self, c: Any) -> GroupAlgebraElement:
        return scalar_mul(c, self)

    def __pow__(self, k: int) -> GroupAlgebraElement:
        if k < 0:
            raise ValueError("negative powers are only defined for basis elements; use star")
        out = identity()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        diff = add(self, scalar_mul(-1, other))
        return not diff.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def coefficient(self, w: BraidWord) -> Any:
        hit = self.terms.get(canonical_key(w))
        return 0 if hit is None else hit[0]

    def to_json(self) -> list[dict]:
        out = []
        for key in sorted(self.terms):
            c, w = self.terms[key]
            z = complex(c) if not hasattr(c, "x") else complex(float(c.x), float(c.y))
            out.append({"word": format_word(w), "re": z.real, "im": z.imag})
        return out

    @classmethod
    def from_json(cls, data: list[dict]) -> GroupAlgebraElement:
        return cls.from_terms(
            (complex(d.get("re", 0.0), d.get("im", 0.0)), parse_word(d["word"])) for d in data
        )


def L(w: BraidWord, coef: Any = 1) -> GroupAlgebraElement:
    return GroupAlgebraElement.from_terms([(coef, w)])


def identity() -> GroupAlgebraElement:
    return L(BraidWord())


def zero() -> GroupAlgebraElement:
    return GroupAlgebraElement()


def add(x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    terms = dict(x.terms)
    for k, (c, w) in y.terms.items():
        if k in terms:
            c0, w0 = terms[k]
            s = c0 + c
            if _is_zero(s):
                del terms[k]
            else:
                terms[k] = (s, w0)
        else:
            terms[k] = (c, w)
    return GroupAlgebraElement(terms)


def scalar_mul(c: Any, x: GroupAlgebraElement) -> GroupAlgebraElement:
    if _is_zero(c):
        return zero()
    terms = {}
    for k, (a, w) in x.terms.items():
        s = c * a
        if not _is_zero(s):
            terms[k] = (s, w)
    return GroupAlgebraElement(terms)


def mul(x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    return GroupAlgebraElement.from_terms(
        (a * b, free_reduce(concat(u, v)))
        for a, u in x.terms.values()
        for b, v in y.terms.values()
    )


def star(x: GroupAlgebraElement) -> GroupAlgebraElement:
    return GroupAlgebraElement.from_terms((conj(c), invert(w)) for c, w in x.terms.values())


def trace(x: GroupAlgebraElement) -> Any:
    hit = x.terms.get(IDENTITY_KEY)
    return 0 if hit is None else hit[0]


def ad(tau: BraidWord, x: GroupAlgebraElement) -> GroupAlgebraElement:
    t = _sigma(tau)
    ti = invert(t)
    return GroupAlgebraElement.from_terms(
        (c, free_reduce(concat(t, w, ti))) for c, w in x.terms.values()
    )

