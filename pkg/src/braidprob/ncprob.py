"""Finite-dimensional noncommutative probability on matrix algebras.

Everything is linear algebra in GNS coordinates: ``x -> vec(x rho^(1/2))``
turns the state inner product ``<x, y> = tr(rho x* y)`` into the Euclidean one.
Conditional expectations are orthogonal projections in these coordinates,
expressed relative to an orthonormal basis of the space's own algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .matrix_rep import alpha_power

PASS_TOL = 1e-8
FAIL_TOL = 1e-4
SPAN_TOL = 1e-8


def verdict(residual: float) -> str:
    if residual < PASS_TOL:
        return "pass"
    if residual > FAIL_TOL:
        return "fail"
    return "review"


def _vec(x: np.ndarray) -> np.ndarray:
    return x.reshape(-1)


def span_basis(mats: Sequence[np.ndarray], tol: float = SPAN_TOL) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the linear span of ``mats``."""
    if not mats:
        return []
    d = mats[0].shape[0]
    A = np.stack([_vec(m) for m in mats], axis=1)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    rank = int((s > tol * max(1.0, s[0])).sum()) if s.size else 0
    return [u[:, k].reshape(d, d) for k in range(rank)]


def generated_algebra(gens: Sequence[np.ndarray], dim: int, tol: float = SPAN_TOL) -> list[np.ndarray]:
    """Basis of the unital *-algebra generated by ``gens`` (span fixpoint)."""
    letters = [g for g in gens] + [g.conj().T for g in gens]
    Q = np.zeros((dim * dim, 0), dtype=complex)
    basis: list[np.ndarray] = []

    def absorb(m: np.ndarray) -> bool:
        nonlocal Q
        v = _vec(m).astype(complex)
        for _ in range(2):
            v = v - Q @ (Q.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv <= tol * max(1.0, np.linalg.norm(m)):
            return False
        v = v / nv
        Q = np.column_stack([Q, v])
        basis.append(v.reshape(dim, dim))
        return True

    frontier = [np.eye(dim, dtype=complex)]
    absorb(frontier[0])
    while frontier and len(basis) < dim * dim:
        nxt = []
        for f in frontier:
            for g in letters:
                m = g @ f
                if absorb(m):
                    nxt.append(m)
        frontier = nxt
    return basis


@dataclass(frozen=True)
class Subalgebra:
    basis: tuple[np.ndarray, ...]
    gns: np.ndarray = field(repr=False)  # orthonormal columns in GNS coordinates

    @property
    def dim(self) -> int:
        return len(self.basis)


class FiniteProbSpace:
    """A unital *-subalgebra of M_d with a faithful state tr(rho .)."""

    def __init__(self, dim: int, generators: Sequence[np.ndarray] | None = None,
                 density: np.ndarray | None = None) -> None:
        self.dim = dim
        rho = np.eye(dim) / dim if density is None else np.asarray(density, dtype=complex)
        w, v = np.linalg.eigh(rho)
        if w.min() <= 0:
            raise ValueError("density must be positive definite (faithful state)")
        if abs(w.sum() - 1) > 1e-9:
            raise ValueError("density must have trace one")
        self.rho = rho
        self._sqrt = (v * np.sqrt(w)) @ v.conj().T
        self._isqrt = (v / np.sqrt(w)) @ v.conj().T
        if generators is None:
            mats = [np.outer(np.eye(dim)[a], np.eye(dim)[b]).astype(complex)
                    for a in range(dim) for b in range(dim)]
            self.algebra = self._make(mats)
        else:
            self.algebra = self._make(generated_algebra(generators, dim))

    # coordinates
    def to_gns(self, x: np.ndarray) -> np.ndarray:
        return _vec(x @ self._sqrt)

    def from_gns(self, v: np.ndarray) -> np.ndarray:
        return v.reshape(self.dim, self.dim) @ self._isqrt

    def state(self, x: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ x))

    def _make(self, basis: Sequence[np.ndarray]) -> Subalgebra:
        if not basis:
            return Subalgebra((), np.zeros((self.dim ** 2, 0), dtype=complex))
        A = np.stack([self.to_gns(b) for b in basis], axis=1)
        q, _ = np.linalg.qr(A)
        return Subalgebra(tuple(basis), q)

    def coords(self, x: np.ndarray) -> np.ndarray:
        return self.algebra.gns.conj().T @ self.to_gns(x)

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        return self.from_gns(self.algebra.gns @ c)

    # subalgebras
    def subalgebra(self, generators: Sequence[np.ndarray]) -> Subalgebra:
        sub = self._make(generated_algebra(generators, self.dim))
        self.require_inside(sub)
        return sub

    def span(self, mats: Sequence[np.ndarray]) -> Subalgebra:
        sub = self._make(span_basis(mats))
        self.require_inside(sub)
        return sub

    def scalars(self) -> Subalgebra:
        return self._make([np.eye(self.dim, dtype=complex)])

    def join(self, *subs: Subalgebra) -> Subalgebra:
        return self.subalgebra([b for s in subs for b in s.basis])

    def containment_residual(self, small: Subalgebra, big: Subalgebra) -> float:
        if not small.dim:
            return 0.0
        Q = big.gns
        return float(np.abs(small.gns - Q @ (Q.conj().T @ small.gns)).max())

    def require_inside(self, sub: Subalgebra) -> None:
        r = self.containment_residual(sub, self.algebra)
        if r > FAIL_TOL:
            raise ValueError(f"subalgebra leaves the ambient algebra (residual {r:.2e})")

    def same_span(self, a: Subalgebra, b: Subalgebra) -> float:
        if a.dim != b.dim:
            return float("inf")
        return max(self.containment_residual(a, b), self.containment_residual(b, a))

    def star_closure_residual(self, sub: Subalgebra) -> float:
        star = self._make(span_basis([b.conj().T for b in sub.basis]))
        return self.containment_residual(star, sub)


@dataclass(frozen=True)
class CondExpectation:
    space: FiniteProbSpace
    target: Subalgebra
    matrix: np.ndarray  # projection in the space's algebra coordinates

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.space.from_coords(self.matrix @ self.space.coords(x))

    def residuals(self, samples: int = 6, seed: int = 0) -> dict[str, float]:
        sp, P = self.space, self.matrix
        one = np.eye(sp.dim)
        rng = np.random.default_rng(seed)
        alg = sp.algebra.basis
        pick = lambda seq, k: [seq[i] for i in rng.choice(len(seq), min(k, len(seq)), replace=False)]
        xs = pick(alg, samples)
        ts = pick(self.target.basis, 3)
        module = max((_res(self(a @ x @ b), a @ self(x) @ b) for a in ts for b in ts for x in xs),
                     default=0.0)
        positivity = 0.0
        for _ in range(samples):
            c = rng.normal(size=len(alg)) + 1j * rng.normal(size=len(alg))
            x = sum(ci * bi for ci, bi in zip(c, alg))
            y = self(x.conj().T @ x)
            y = (y + y.conj().T) / 2
            positivity = max(positivity, max(0.0, -float(np.linalg.eigvalsh(y).min())))
        return {
            "idempotent": _res(P @ P, P),
            "unit": _res(self(one), one),
            "state": max(abs(sp.state(self(x)) - sp.state(x)) for x in xs),
            "module": module,
            "positivity": positivity,
        }


def _res(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(a - b).max()) if a.size else 0.0


def conditional_expectation(space: FiniteProbSpace, sub: Subalgebra) -> CondExpectation:
    if space.star_closure_residual(sub) > FAIL_TOL:
        raise ValueError("target is not *-closed")
    if space.containment_residual(space.scalars(), sub) > FAIL_TOL:
        raise ValueError("target does not contain the unit")
    space.require_inside(sub)
    C = space.algebra.gns.conj().T @ sub.gns
    return CondExpectation(space, sub, C @ C.conj().T)


@dataclass(frozen=True)
class SquareReport:
    residual_iv: float
    residual_v: float
    passed: bool
    consistent: bool

    def as_json(self) -> dict:
        return {"residual_iv": self.residual_iv, "residual_v": self.residual_v,
                "verdict_iv": verdict(self.residual_iv), "verdict_v": verdict(self.residual_v),
                "pass": self.passed, "consistent": self.consistent}


def is_commuting_square(space: FiniteProbSpace, N: Subalgebra, N1: Subalgebra, N2: Subalgebra,
                        tol: float = PASS_TOL) -> SquareReport:
    for small, big in ((N, N1), (N, N2)):
        if space.containment_residual(small, big) > FAIL_TOL:
            raise ValueError("N must lie in both N1 and N2")
    E, E1, E2 = (conditional_expectation(space, s).matrix for s in (N, N1, N2))
    iv = float(np.linalg.norm(E1 @ E2 - E, 2))
    v = float(np.linalg.norm(E1 @ E2 - E2 @ E1, 2))
    return SquareReport(iv, v, iv < tol, (iv < tol) == (v < tol))


@dataclass(frozen=True)
class IndependenceReport:
    residual: float
    pairs: int
    witness: tuple[int, int] | None

    @property
    def passed(self) -> bool:
        return self.residual < PASS_TOL

    def as_json(self) -> dict:
        return {"residual": self.residual, "verdict": verdict(self.residual), "pairs": self.pairs,
                "witness": None if self.witness is None else list(self.witness)}


def check_independence(space: FiniteProbSpace, N: Subalgebra, N1: Subalgebra, N2: Subalgebra,
                       battery: tuple[Sequence[np.ndarray], Sequence[np.ndarray]] | None = None
                       ) -> IndependenceReport:
    """E_N(xy) = E_N(x) E_N(y) for x in N1 v N, y in N2 v N."""
    E = conditional_expectation(space, N)
    if battery is None:
        xs, ys = space.join(N1, N).basis, space.join(N2, N).basis
    else:
        xs, ys = battery
    # unit operator norm keeps residuals comparable across bases
    xs = [x / np.linalg.norm(x, 2) for x in xs]
    ys = [y / np.linalg.norm(y, 2) for y in ys]
    worst, witness = 0.0, None
    Ex = [E(x) for x in xs]
    Ey = [E(y) for y in ys]
    for (a, x), (b, y) in itertools.product(enumerate(xs), enumerate(ys)):
        r = _res(E(x @ y), Ex[a] @ Ey[b])
        if r > worst:
            worst = r
            if r >= PASS_TOL:
                witness = (a, b)
    return IndependenceReport(worst, len(xs) * len(ys), witness)


def relative_commutant(space: FiniteProbSpace, mats: Sequence[np.ndarray],
                       within: Subalgebra | None = None) -> Subalgebra:
    within = space.algebra if within is None else within
    if not mats:
        return within
    B = within.basis
    rows = np.concatenate(
        [np.stack([_vec(b @ s - s @ b) for b in B], axis=1) for s in mats], axis=0)
    _, sv, vh = np.linalg.svd(rows, full_matrices=rows.shape[0] < rows.shape[1])
    scale = max(1.0, sv[0] if sv.size else 1.0)
    rank = int((sv > SPAN_TOL * scale).sum())
    null = vh[rank:].conj().T
    out = [sum(c * b for c, b in zip(col, B)) for col in null.T]
    return space._make(span_basis(out))


@dataclass(frozen=True)
class BernoulliReport:
    residual: float
    checks: int
    over_dim: int
    mode: str
    witness: tuple | None

    @property
    def passed(self) -> bool:
        return self.residual < PASS_TOL

    def as_json(self) -> dict:
        return {"residual": self.residual, "verdict": verdict(self.residual), "checks": self.checks,
                "over_dim": self.over_dim, "mode": self.mode,
                "witness": None if self.witness is None else [list(s) for s in self.witness]}


def bernoulli_factorization_check(space: FiniteProbSpace, us: Sequence[np.ndarray],
                                  eps: Sequence[int], generator: Sequence[np.ndarray],
                                  max_shift: int, *, mode: str = "order",
                                  over: Subalgebra | None = None) -> BernoulliReport:
    """Independence of the blocks alg(alpha^k(B0)), k <= max_shift.

    ``order`` compares intervals I < J; ``full`` compares any disjoint index sets.
    Without ``over`` the conditioning algebra is the commutant of the unitaries
    inside the algebra generated by all blocks.  On short chains that commutant
    can be larger than the true fixed points (symmetric tensors commute with
    every flip), so pass ``over`` explicitly when the answer is known.
    """
    if mode not in ("order", "full"):
        raise ValueError("mode must be 'order' or 'full'")
    if not generator:
        return BernoulliReport(0.0, 0, 1, mode, None)
    blocks = [[alpha_power(us, eps, g, 0, k) for g in generator] for k in range(max_shift + 1)]
    if over is None:
        total = space.subalgebra([g for blk in blocks for g in blk])
        over = relative_commutant(space, us, total)
    idx = range(max_shift + 1)
    if mode == "order":
        pairs = [(tuple(range(a, b)), tuple(range(b, c)))
                 for a in idx for b in range(a + 1, max_shift + 1) for c in range(b + 1, max_shift + 2)]
    else:
        pairs = []
        for labels in itertools.product((0, 1, 2), repeat=max_shift + 1):
            I = tuple(k for k in idx if labels[k] == 1)
            J = tuple(k for k in idx if labels[k] == 2)
            if I and J and I[0] < J[0]:
                pairs.append((I, J))
    algs: dict[tuple, Subalgebra] = {}

    def alg(S):
        if S not in algs:
            algs[S] = space.subalgebra([g for k in S for g in blocks[k]])
        return algs[S]

    worst, witness = 0.0, None
    for I, J in pairs:
        rep = check_independence(space, over, alg(I), alg(J))
        if rep.residual > worst:
            worst = rep.residual
            if rep.residual >= PASS_TOL:
                witness = (I, J)
    return BernoulliReport(worst, len(pairs), over.dim, mode, witness)


# --- Gaussian tower helpers -------------------------------------------------


def interval_algebra(space: FiniteProbSpace, e: Sequence[np.ndarray], lo: int, hi: int) -> Subalgebra:
    """alg(e_lo, ..., e_hi); empty when hi < lo gives the scalars."""
    if hi < lo:
        return space.scalars()
    return space.subalgebra(list(e[lo:hi + 1]))


def commuting_square_grid(space: FiniteProbSpace, e: Sequence[np.ndarray], max_sum: int) -> dict:
    """Cells of the triangular tower alpha^j(M_i) = alg(e_j..e_{i+j}).

    Cell (i, j) has corners N = alpha^{j+1}(M_{i-1}), N1 = alpha^j(M_i),
    N2 = alpha^{j+1}(M_i), so it needs e up to index i + j + 1.
    """
    cells = {}
    for i in range(max_sum + 1):
        for j in range(max_sum + 1 - i):
            if i + j + 1 >= len(e):
                raise ValueError("not enough generators for the requested grid")
            N = interval_algebra(space, e, j + 1, i + j)
            N1 = interval_algebra(space, e, j, i + j)
            N2 = interval_algebra(space, e, j + 1, i + j + 1)
            cells[(i, j)] = is_commuting_square(space, N, N1, N2)
    return cells


def tower_commutant(space: FiniteProbSpace, e: Sequence[np.ndarray], u: Sequence[np.ndarray],
                    n: int, K: int) -> float:
    """Span distance between alg(e_0..e_n) and the commutant of {u_k : n+2 <= k <= K-2}
    inside alg(e_0..e_{K-3}).  ``u[k-1]`` is u_k."""
    if not 0 <= n <= K - 3:
        raise ValueError("need 0 <= n <= K-3")
    if K - 2 > len(u):
        raise ValueError("not enough unitaries for this truncation")
    ambient = interval_algebra(space, e, 0, K - 3)
    comm = relative_commutant(space, [u[k - 1] for k in range(n + 2, K - 1)], ambient)
    return space.same_span(comm, interval_algebra(space, e, 0, n))
