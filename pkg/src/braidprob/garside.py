"""Word-problem oracles for braid groups.

Two independent deciders live here: the Garside left normal form
``Delta^p A_1 ... A_k`` (permutation-braid factors, left-weighted) and
Dehornoy's handle reduction.  Permutations are one-line tuples composed as
functions, matching :func:`braidprob.braid_word.underlying_permutation`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable

from .braid_word import (
    BraidWord,
    Presentation,
    WordError,
    free_reduce,
    fundamental_braid,
    invert,
    m_shift,
    to_sigma,
)

Perm = tuple[int, ...]


class HandleReductionError(RuntimeError):
    pass


class _Tables:
    """Per-n helpers with a memo for left-weighting pairs of simple factors."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.identity: Perm = tuple(range(n))
        self.delta: Perm = tuple(range(n - 1, -1, -1))
        self._pairs: dict[tuple[Perm, Perm], tuple[Perm, Perm]] = {}

    def transposition(self, i: int) -> Perm:
        p = list(range(self.n))
        p[i - 1], p[i] = i, i - 1
        return tuple(p)

    def tau(self, p: Perm) -> Perm:
        """Conjugation by Delta: s_i -> s_{n-i}."""
        m = self.n - 1
        return tuple(m - p[m - x] for x in range(self.n))

    def complement(self, p: Perm) -> Perm:
        """Right complement A^-1 Delta of a simple element A."""
        inv = inverse(p)
        return tuple(inv[x] for x in self.delta)

    def neg_letter(self, i: int) -> Perm:
        """Delta s_i^-1 as a simple element."""
        t = self.transposition(i)
        return tuple(self.delta[x] for x in t)

    def left_weight(self, a: Perm, b: Perm) -> tuple[Perm, Perm]:
        key = (a, b)
        hit = self._pairs.get(key)
        if hit is not None:
            return hit
        la, lb = list(a), list(b)
        pos = inverse(b)
        lpos = list(pos)
        n = self.n
        changed = True
        while changed:
            changed = False
            for i in range(1, n):
                # i in S(b) but not in F(a): move s_i from b to a
                if lpos[i - 1] > lpos[i] and la[i - 1] < la[i]:
                    la[i - 1], la[i] = la[i], la[i - 1]
                    # b <- s_i^-1 b swaps the values i-1, i of b
                    u, v = lpos[i - 1], lpos[i]
                    lb[u], lb[v] = i, i - 1
                    lpos[i - 1], lpos[i] = v, u
                    changed = True
        out = (tuple(la), tuple(lb))
        self._pairs[key] = out
        return out


@functools.lru_cache(maxsize=None)
def _tables(n: int) -> _Tables:
    return _Tables(n)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def _max_moved(p: Perm) -> int:
    for x in range(len(p) - 1, -1, -1):
        if p[x] != x:
            return x
    return 0


def simple_letters(p: Perm) -> list[int]:
    """A positive (reduced) sigma word for a permutation braid."""
    q = list(p)
    out: list[int] = []
    done = False
    while not done:
        done = True
        for i in range(len(q) - 1, 0, -1):
            if q[i - 1] > q[i]:
                q[i - 1], q[i] = q[i], q[i - 1]
                out.append(i)
                done = False
                break
    out.reverse()
    return out


@dataclass(frozen=True)
class LeftNormalForm:
    strands: int
    delta_power: int
    factors: tuple[Perm, ...]

    @property
    def is_trivial(self) -> bool:
        return self.delta_power == 0 and not self.factors

    def __mul__(self, other: LeftNormalForm) -> LeftNormalForm:
        if other.strands != self.strands:
            raise ValueError("normal forms live in different braid groups")
        t = _tables(self.strands)
        left = self.factors
        if other.delta_power % 2:
            left = tuple(t.tau(a) for a in left)
        factors = list(left)
        for b in other.factors:
            _insert(t, factors, b)
        return _finish(t, self.delta_power + other.delta_power, factors)

    def inverse(self) -> LeftNormalForm:
        return normal_form(invert(self.to_word()), self.strands)

    def to_word(self) -> BraidWord:
        letters: list[int] = []
        if self.delta_power and self.strands > 1:
            d = fundamental_braid("Delta", self.strands).letters
            if self.delta_power < 0:
                d = tuple(-x for x in reversed(d))
            letters.extend(d * abs(self.delta_power))
        for a in self.factors:
            letters.extend(simple_letters(a))
        return BraidWord(tuple(letters), Presentation.SIGMA)

    def fraction(self) -> tuple[list[Perm], list[Perm]]:
        """Left-coprime positive pair (a, b) with x = a^-1 b, as simple factors."""
        t = _tables(self.strands)
        p, facs = self.delta_power, self.factors
        if p >= 0:
            return [], [t.delta] * p + list(facs)
        r, s = -p, min(-p, len(facs))
        neg = []
        for j in range(s, 0, -1):
            c = t.complement(facs[j - 1])
            neg.append(t.tau(c) if (s - j) % 2 else c)
        neg.extend([t.delta] * (r - s))
        return neg, list(facs[s:])

    def total_width(self) -> int:
        a, b = self.fraction()
        return max((_max_moved(f) for f in a + b), default=0)

    def as_json(self) -> dict:
        return {
            "strands": self.strands,
            "delta_power": self.delta_power,
            "factors": [list(f) for f in self.factors],
        }


def _insert(t: _Tables, factors: list[Perm], s: Perm) -> None:
    if s == t.identity:
        return
    factors.append(s)
    j = len(factors) - 1
    while j > 0:
        a, b = factors[j - 1], factors[j]
        na, nb = t.left_weight(a, b)
        if na == a:
            break
        factors[j - 1], factors[j] = na, nb
        j -= 1
    while factors and factors[-1] == t.identity:
        factors.pop()


def _finish(t: _Tables, p: int, factors: list[Perm]) -> LeftNormalForm:
    lead = 0
    while lead < len(factors) and factors[lead] == t.delta:
        lead += 1
    rest = [f for f in factors[lead:] if f != t.identity]
    return LeftNormalForm(t.n, p + lead, tuple(rest))


def _strands_for(w: BraidWord, n: int | None) -> int:
    need = w.min_strands
    if n is None:
        return max(need, w.strands or 1)
    if need > n:
        raise WordError(f"index {w.max_index} does not fit in B_{n}")
    return n


def normal_form(w: BraidWord, n: int | None = None) -> LeftNormalForm:
    """Left normal form in B_n (default: the smallest B_n containing the letters)."""
    w = to_sigma(w)
    n = _strands_for(w, n)
    t = _tables(n)
    letters = free_reduce(w).letters
    # x = Delta^-r * prod tau^{c_j}(factor_j), c_j = negatives after position j
    after = 0
    simples: list[Perm] = []
    for x in reversed(letters):
        s = t.transposition(x) if x > 0 else t.neg_letter(-x)
        simples.append(t.tau(s) if after % 2 else s)
        if x < 0:
            after += 1
    simples.reverse()
    factors: list[Perm] = []
    for s in simples:
        _insert(t, factors, s)
    return _finish(t, -after, factors)


def nf_product(forms: Iterable[LeftNormalForm]) -> LeftNormalForm:
    forms = list(forms)
    out = forms[0]
    for f in forms[1:]:
        out = out * f
    return out


def is_trivial(w: BraidWord) -> bool:
    return normal_form(w).is_trivial


def equal(w1: BraidWord, w2: BraidWord) -> bool:
    return is_trivial(to_sigma(w1) * invert(to_sigma(w2)))


def total_width(w: BraidWord) -> int:
    return normal_form(w).total_width()


def minimal_normal_form(w: BraidWord) -> LeftNormalForm:
    """Normal form in B_{tw+1}, the smallest braid group containing the element."""
    nf = normal_form(w)
    width = nf.total_width()
    if width + 1 >= nf.strands:
        return nf
    a, b = nf.fraction()
    letters = [i for f in a for i in simple_letters(f)]
    word = invert(BraidWord(tuple(letters))) * BraidWord(
        tuple(i for f in b for i in simple_letters(f))
    )
    return normal_form(word, width + 1)


def canonical_key(w: BraidWord) -> bytes:
    return _key_of(free_reduce(to_sigma(w)).letters)


@functools.lru_cache(maxsize=1 << 16)
def _key_of(letters: tuple[int, ...]) -> bytes:
    nf = minimal_normal_form(BraidWord(letters))
    if nf.is_trivial:
        return b"1|0|"
    body = ";".join(",".join(map(str, f)) for f in nf.factors)
    return f"{nf.strands}|{nf.delta_power}|{body}".encode()


IDENTITY_KEY = b"1|0|"


def handle_reduce(w: BraidWord, max_steps: int = 10**6) -> BraidWord:
    """Reduce the leftmost (hence innermost) handle until none is left.

    A handle is ``s_i^e u s_i^-e`` where ``u`` only uses generators above ``i``.
    Reduction replaces it by ``u`` with every ``s_{i+1}^d`` rewritten as
    ``s_{i+1}^-e s_i^d s_{i+1}^e``.
    """
    if w.presentation is not Presentation.SIGMA:
        raise WordError("handle reduction expects a sigma word")
    word = list(free_reduce(w).letters)
    for _ in range(max_steps):
        found = _first_handle(word)
        if found is None:
            return BraidWord(tuple(word), Presentation.SIGMA)
        s, j = found
        e = 1 if word[s] > 0 else -1
        i = abs(word[s])
        middle: list[int] = []
        for x in word[s + 1 : j]:
            if abs(x) == i + 1:
                d = 1 if x > 0 else -1
                middle.extend((-e * (i + 1), d * i, e * (i + 1)))
            else:
                middle.append(x)
        word = list(free_reduce(BraidWord(tuple(word[:s] + middle + word[j + 1 :]))).letters)
    raise HandleReductionError(f"no handle-free word after {max_steps} reductions")


def _first_handle(word: list[int]) -> tuple[int, int] | None:
    stack: list[int] = []
    for j, x in enumerate(word):
        a = abs(x)
        while stack and abs(word[stack[-1]]) > a:
            stack.pop()
        if stack and word[stack[-1]] == -x:
            return stack[-1], j
        stack.append(j)
    return None


def shifted_orbit_distinct(tau: BraidWord, m: int, K: int) -> int:
    if K < 1:
        raise ValueError("K must be at least 1")
    w = to_sigma(tau)
    keys = {canonical_key(w)}
    for _ in range(K):
        w = m_shift(w, m)
        keys.add(canonical_key(w))
    return len(keys)
