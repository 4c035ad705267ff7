"""Braid-driven random sequences, their mixed moments and symmetry checks.

Index tuples are plain tuples of nonnegative integers ``i`` with entry
``i[k]`` selecting the map ``iota_{i[k]}``.  All sequences here start from
the algebra generated by the first generator ``g`` (sigma_1 = gamma_1), so a
moment on monomial arguments ``g^e`` is the trace of a single braid, i.e. 1
or 0.  The checker works on monomials and extends to a battery by
multilinearity.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Any, Iterable, Sequence

from .braid_word import (
    BraidWord,
    compose,
    exponent_sum,
    free_reduce,
    invert,
    m_shift,
    shift,
    sigma,
    underlying_permutation,
)
from .garside import LeftNormalForm, canonical_key, equal, normal_form
from .group_algebra import GroupAlgebraElement, L, add, identity, mul, trace

IndexTuple = tuple[int, ...]


class Relation(str, Enum):
    TRANSLATION = "translation"
    ORDER = "order"
    SYMMETRIC = "symmetric"


class SequenceKind(str, Enum):
    ARTIN_ALPHA = "artin-alpha"
    GAMMA_BETA = "gamma-beta"
    INVERSE_RHO = "inverse-rho"


class NotBraidableError(ValueError):
    pass


def _check_tuple(i: Sequence[int]) -> IndexTuple:
    i = tuple(int(x) for x in i)
    if not i:
        raise ValueError("index tuples must be nonempty")
    if min(i) < 0:
        raise ValueError("index tuple entries must be nonnegative")
    return i


def _monomial_exponent(w: BraidWord) -> int | None:
    """e if w equals g^e for the first generator g, else None."""
    e = exponent_sum(w)
    return e if canonical_key(w) == canonical_key(sigma(1) ** e) else None


def monomial_decomposition(x: GroupAlgebraElement) -> dict[int, Any]:
    out: dict[int, Any] = {}
    for c, w in x.terms.values():
        e = _monomial_exponent(w)
        if e is None:
            raise ValueError(f"{w} is not in the initial algebra generated by the first generator")
        out[e] = c
    return out


@dataclass(frozen=True)
class SequenceSpec:
    kind: SequenceKind
    seed_elements: tuple[GroupAlgebraElement, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SequenceKind(self.kind))
        object.__setattr__(self, "seed_elements", tuple(self.seed_elements))
        for x in self.seed_elements:
            monomial_decomposition(x)

    def iota_word(self, n: int, w: BraidWord) -> BraidWord:
        """Image of a single braid under iota_n."""
        if n < 0:
            raise ValueError("sequence index must be nonnegative")
        w = free_reduce(w)
        if self.kind is SequenceKind.ARTIN_ALPHA:
            return shift(w, n)
        if self.kind is SequenceKind.GAMMA_BETA:
            for _ in range(n):
                w = m_shift(w, 1)
            return w
        conj = sigma(*range(-n, 0))
        return free_reduce(conj * w * invert(conj))

    def iota(self, n: int, x: GroupAlgebraElement) -> GroupAlgebraElement:
        return GroupAlgebraElement.from_terms(
            (c, self.iota_word(n, w)) for c, w in x.terms.values()
        )

    def default_battery(self) -> list[GroupAlgebraElement]:
        g = sigma(1)
        return [L(g), L(g ** -1), L(g ** 2), add(L(g), L(g ** -1))]

    def move_conjugator(self, level: int, up: bool) -> BraidWord:
        """Braid implementing the move of a level set ``level -> level +- 1``."""
        if self.kind is not SequenceKind.GAMMA_BETA:
            raise NotBraidableError(
                f"{self.kind.value} is not braidable over its initial algebra"
            )
        low = level if up else level - 1
        return sigma(-(low + 2) if up else low + 2)


def equivalent(i: Sequence[int], j: Sequence[int], rel: Relation | str) -> bool:
    i, j = _check_tuple(i), _check_tuple(j)
    if len(i) != len(j):
        raise ValueError("index tuples of different lengths")
    rel = Relation(rel)
    if rel is Relation.TRANSLATION:
        d = {a - b for a, b in zip(i, j)}
        return len(d) == 1
    return class_key(i, rel) == class_key(j, rel)


def class_key(i: IndexTuple, rel: Relation) -> IndexTuple:
    """A canonical representative label of the equivalence class of ``i``."""
    if rel is Relation.TRANSLATION:
        m = min(i)
        return tuple(x - m for x in i)
    if rel is Relation.ORDER:
        rank = {v: r for r, v in enumerate(sorted(set(i)))}
        return tuple(rank[x] for x in i)
    first: dict[int, int] = {}
    for x in i:
        first.setdefault(x, len(first))
    return tuple(first[x] for x in i)


def _is_elementary_move(a: IndexTuple, b: IndexTuple) -> bool:
    diff = [k for k in range(len(a)) if a[k] != b[k]]
    if not diff:
        return False
    l, l2 = a[diff[0]], b[diff[0]]
    level = {k for k, x in enumerate(a) if x == l}
    return (
        set(diff) == level
        and all(b[k] == l2 for k in level)
        and abs(l - l2) == 1
        and l2 not in a
    )


def check_chain(chain: Sequence[IndexTuple]) -> bool:
    return all(_is_elementary_move(a, b) for a, b in zip(chain, chain[1:]))


def order_equiv_chain(i: Sequence[int], j: Sequence[int]) -> list[IndexTuple]:
    """Elementary moves (one level set shifted by one onto a free value) from i to j."""
    i, j = _check_tuple(i), _check_tuple(j)
    if len(i) != len(j) or not equivalent(i, j, Relation.ORDER):
        raise ValueError("tuples are not order equivalent")
    target = dict(zip(i, j))
    levels = sorted(set(i))
    goal = [target[v] for v in levels]
    cur = list(levels)
    chain = [i]

    def emit(k: int, new: int) -> None:
        old = cur[k]
        cur[k] = new
        prev = chain[-1]
        chain.append(tuple(new if x == old else x for x in prev))

    while cur != goal:
        for k in range(len(cur)):
            while cur[k] > goal[k] and cur[k] - 1 not in cur:
                emit(k, cur[k] - 1)
        for k in reversed(range(len(cur))):
            while cur[k] < goal[k] and cur[k] + 1 not in cur:
                emit(k, cur[k] + 1)
    return chain


def implementing_braid(i: Sequence[int], j: Sequence[int], spec: SequenceSpec) -> BraidWord:
    chain = order_equiv_chain(i, j)
    word = BraidWord()
    for a, b in zip(chain, chain[1:]):
        k = next(k for k in range(len(a)) if a[k] != b[k])
        step = spec.move_conjugator(a[k], b[k] > a[k])
        word = step * word
    return free_reduce(word)


def moment_word(spec: SequenceSpec, i: Sequence[int], words: Sequence[BraidWord]) -> BraidWord:
    i = _check_tuple(i)
    if len(i) != len(words):
        raise ValueError("tuple and argument lengths differ")
    return free_reduce(reduce(lambda u, v: u * v, (spec.iota_word(n, w) for n, w in zip(i, words))))


@dataclass(frozen=True)
class MomentQuery:
    tuple: IndexTuple
    arguments: tuple[GroupAlgebraElement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuple", _check_tuple(self.tuple))
        object.__setattr__(self, "arguments", tuple(self.arguments))
        if len(self.tuple) != len(self.arguments):
            raise ValueError("tuple and argument lengths differ")


def moment(spec: SequenceSpec, q: MomentQuery) -> Any:
    for a in q.arguments:
        monomial_decomposition(a)
    prod = identity()
    for n, a in zip(q.tuple, q.arguments):
        prod = mul(prod, spec.iota(n, a))
    return trace(prod)


def lemma_braid2_identity(n: int, m: int) -> bool:
    """Check s_n (s_m ... s_1) = (s_m ... s_1) s_{n'} with n' = n+1 (n < m) or n (n > m+1)."""
    if n < 0 or m < 0 or n in (m, m + 1):
        raise ValueError("need n, m >= 0 and n not in {m, m+1}")
    if n == 0:
        return True
    block = sigma(*range(m, 0, -1))
    right = n + 1 if n < m else n
    return equal(sigma(n) * block, block * sigma(right))


# ---------------------------------------------------------------------------
# exhaustive symmetry checking


@dataclass(frozen=True)
class Witness:
    left: IndexTuple
    right: IndexTuple
    arguments: tuple[str, ...]
    left_value: Any
    right_value: Any

    def as_json(self) -> dict:
        return {
            "left": list(self.left),
            "right": list(self.right),
            "arguments": list(self.arguments),
            "left_value": _jsonable(self.left_value),
            "right_value": _jsonable(self.right_value),
        }


def _jsonable(v: Any) -> Any:
    if isinstance(v, int):
        return v
    z = complex(v)
    return z.real if z.imag == 0 else [z.real, z.imag]


@dataclass
class SymmetryReport:
    spec: SequenceKind
    rel: Relation
    max_order: int
    index_bound: int
    passed: bool
    witnesses: list[Witness] = field(default_factory=list)
    pairs_checked: int = 0
    complete: bool = True

    def as_json(self) -> dict:
        return {
            "spec": self.spec.value,
            "rel": self.rel.value,
            "max_order": self.max_order,
            "index_bound": self.index_bound,
            "pass": self.passed,
            "witnesses": [w.as_json() for w in self.witnesses],
            "pairs_checked": self.pairs_checked,
            "complete": self.complete,
        }


class MomentTable:
    """Which monomial argument tuples give a trivial product, per index tuple."""

    def __init__(self, spec: SequenceSpec, exponents: Iterable[int], index_bound: int) -> None:
        self.spec = spec
        self.exponents = tuple(sorted(set(exponents)))
        self.index_bound = index_bound
        self.strands = index_bound + 2
        g = sigma(1)
        self._nf: dict[tuple[int, int], LeftNormalForm] = {}
        self._perm: dict[tuple[int, int], tuple[int, ...]] = {}
        for n in range(index_bound + 1):
            for e in self.exponents:
                w = spec.iota_word(n, g ** e)
                self._nf[n, e] = normal_form(w, self.strands)
                self._perm[n, e] = underlying_permutation(w, self.strands)
        self._exps: dict[int, list[tuple[int, ...]]] = {}
        self._rows: dict[IndexTuple, frozenset] = {}
        self._ident = tuple(range(self.strands))

    def balanced(self, order: int) -> list[tuple[int, ...]]:
        if order not in self._exps:
            self._exps[order] = [
                e for e in itertools.product(self.exponents, repeat=order) if sum(e) == 0
            ]
        return self._exps[order]

    def row(self, i: IndexTuple) -> frozenset:
        hit = self._rows.get(i)
        if hit is None:
            hit = self._rows[i] = self._compute(i)
        return hit

    def _compute(self, i: IndexTuple) -> frozenset:
        out = []
        for e in self.balanced(len(i)):
            p = self._ident
            for n, x in zip(i, e):
                p = compose(p, self._perm[n, x])
            if p != self._ident:
                continue
            nf = self._nf[i[0], e[0]]
            for n, x in zip(i[1:], e[1:]):
                nf = nf * self._nf[n, x]
            if nf.is_trivial:
                out.append(e)
        return frozenset(out)

    def fill(self, tuples: list[IndexTuple], jobs: int = 1) -> None:
        todo = [t for t in tuples if t not in self._rows]
        if jobs <= 1 or len(todo) < 64:
            for t in todo:
                self.row(t)
            return
        chunks = [todo[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = [(self.spec, self.exponents, self.index_bound, c) for c in chunks]
            for part in pool.map(_fill_chunk, args):
                self._rows.update(part)


def _fill_chunk(args) -> dict:
    spec, exps, bound, tuples = args
    table = MomentTable(spec, exps, bound)
    return {t: table.row(t) for t in tuples}


def _battery_value(row: frozenset, decomp: Sequence[dict[int, Any]]) -> Any:
    total: Any = 0
    for choice in itertools.product(*(d.items() for d in decomp)):
        e = tuple(x for x, _ in choice)
        if e in row:
            c: Any = 1
            for _, a in choice:
                c = c * a
            total = total + c
    return total


def check_symmetry(
    spec: SequenceSpec,
    rel: Relation | str,
    max_order: int,
    index_bound: int,
    battery: Sequence[GroupAlgebraElement] | None = None,
    *,
    stop_at_first: bool = True,
    jobs: int = 1,
    table: MomentTable | None = None,
) -> SymmetryReport:
    """Compare moments of all ``rel``-equivalent tuples with entries in 0..index_bound."""
    rel = Relation(rel)
    battery = list(battery) if battery is not None else spec.default_battery()
    if not battery:
        raise ValueError("battery must be nonempty")
    decomp = [monomial_decomposition(b) for b in battery]
    exps = sorted({e for d in decomp for e in d})
    singles = {next(iter(d)) for d in decomp if len(d) == 1}
    monomial_complete = set(exps) <= singles
    if table is None or set(exps) - set(table.exponents) or table.index_bound < index_bound:
        table = MomentTable(spec, exps, index_bound)
    report = SymmetryReport(spec.kind, rel, max_order, index_bound, True)
    for order in range(1, max_order + 1):
        tuples = list(itertools.product(range(index_bound + 1), repeat=order))
        if jobs > 1:
            table.fill(tuples, jobs)
        classes: dict[IndexTuple, list[IndexTuple]] = {}
        for t in tuples:
            classes.setdefault(class_key(t, rel), []).append(t)
        for key in sorted(classes):
            members = classes[key]
            rep = members[0]
            rep_row = table.row(rep)
            for other in members[1:]:
                report.pairs_checked += 1
                row = table.row(other)
                if row == rep_row:
                    continue
                w = _witness(rep, other, rep_row, row, battery, decomp, monomial_complete)
                if w is None:
                    continue
                report.passed = False
                report.witnesses.append(w)
                if stop_at_first:
                    report.complete = False
                    return report
    return report


def _witness(rep, other, rep_row, row, battery, decomp, monomial_complete) -> Witness | None:
    if monomial_complete:
        e = min(rep_row ^ row)
        args = tuple(str(sigma(1) ** x) for x in e)
        return Witness(rep, other, args, int(e in rep_row), int(e in row))
    for combo in itertools.product(range(len(battery)), repeat=len(rep)):
        parts = [decomp[k] for k in combo]
        a, b = _battery_value(rep_row, parts), _battery_value(row, parts)
        if a != b:
            args = tuple(f"battery[{k}]" for k in combo)
            return Witness(rep, other, args, a, b)
    return None
