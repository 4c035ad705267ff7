"""Finite-dimensional braid group representations and Hecke algebra arithmetic."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
from sympy import QQ, ring

from .braid_word import compose
from .garside import simple_letters

TOL = 1e-9


class DimensionBudgetError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


def max_dim() -> int:
    return int(os.environ.get("BRAIDPROB_MAX_DIM", "4096"))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def residual(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(a - b).max()) if a.size else 0.0


def normalized_trace(x: np.ndarray) -> complex:
    return complex(np.trace(x)) / x.shape[0]


def unitarity_residual(u: np.ndarray) -> float:
    return residual(u @ u.conj().T, np.eye(u.shape[0]))


def braid_residuals(us: Sequence[np.ndarray]) -> dict[str, float]:
    """Largest violation of (B1) over adjacent pairs and of (B2) over distant pairs."""
    b1 = b2 = 0.0
    for a, b in itertools.combinations(range(len(us)), 2):
        x, y = us[a], us[b]
        if b - a == 1:
            b1 = max(b1, residual(x @ y @ x, y @ x @ y))
        else:
            b2 = max(b2, residual(x @ y, y @ x))
    return {"B1": b1, "B2": b2}


# --- Gaussian (generalized Clifford) representation -------------------------


def gaussian_omega(p: int) -> complex:
    return np.exp(2j * np.pi / p) if p % 2 else np.exp(1j * np.pi / p)


@dataclass(frozen=True)
class GaussianRep:
    p: int
    strands: int
    omega: complex
    e: tuple[np.ndarray, ...]
    u: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.p ** self.strands

    def residuals(self) -> dict[str, float]:
        ident = np.eye(self.dim)
        zeta = self.omega ** 2
        out = {
            "e_power": max(residual(np.linalg.matrix_power(x, self.p), ident) for x in self.e),
            "commutation": max(
                (residual(a @ b, zeta * b @ a) for a, b in itertools.combinations(self.e, 2)),
                default=0.0,
            ),
            "unitary": max((unitarity_residual(x) for x in self.u), default=0.0),
        }
        out.update(braid_residuals(self.u))
        return out

    def spectral_uniformity(self) -> float:
        """Largest |tr(e_i^k)| for 0 < k < p; zero iff every p-th root has equal multiplicity."""
        worst = 0.0
        for x in self.e:
            y = np.eye(self.dim, dtype=complex)
            for _ in range(1, self.p):
                y = y @ x
                worst = max(worst, abs(normalized_trace(y)))
        return worst


def build_gaussian(p: int, n: int, tol: float = TOL) -> GaussianRep:
    if p < 2 or n < 2:
        raise ValueError("need p >= 2 and n >= 2")
    if p ** n > max_dim():
        raise DimensionBudgetError(f"p^n = {p ** n} exceeds the budget {max_dim()}")
    omega = gaussian_omega(p)
    zeta = omega ** 2
    clock = np.diag([zeta ** k for k in range(p)])
    # shift |k> -> |k-1>, so that shift @ clock = zeta * clock @ shift
    shift = np.roll(np.eye(p, dtype=complex), -1, axis=0)
    one = np.eye(p, dtype=complex)
    e = tuple(kron_all([clock] * i + [shift] + [one] * (n - 1 - i)) for i in range(n))
    u = []
    for i in range(1, n):
        v = omega * e[i - 1].conj().T @ e[i]
        acc = np.zeros_like(v)
        vk = np.eye(v.shape[0], dtype=complex)
        for k in range(p):
            acc += omega ** (k * k) * vk
            vk = vk @ v
        u.append(acc / np.sqrt(p))
    rep = GaussianRep(p, n, omega, e, tuple(u))
    bad = {k: r for k, r in rep.residuals().items() if r > tol}
    if bad:
        raise InvariantViolation(f"Gaussian construction violates {bad}")
    return rep


def gaussian_nonexchangeability_trace(p: int, n: int = 3) -> tuple[complex, complex]:
    if n < 3:
        raise ValueError("need at least three strands")
    rep = build_gaussian(p, n)
    e1, e2 = rep.e[1], rep.e[2]
    a = normalized_trace(e1 @ e2 @ e1.conj().T @ e2.conj().T)
    b = normalized_trace(e2 @ e1 @ e2.conj().T @ e1.conj().T)
    return a, b


# --- R-matrices --------------------------------------------------------------


def flip(d: int) -> np.ndarray:
    P = np.zeros((d * d, d * d), dtype=complex)
    for a, b in itertools.product(range(d), repeat=2):
        P[b * d + a, a * d + b] = 1
    return P


def r_matrix(omega: complex) -> np.ndarray:
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0], R[1, 2], R[2, 1], R[3, 3] = 1, 1, 1, omega
    return R


def _local_dim(R: np.ndarray) -> int:
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError("R must be square")
    d = int(round(np.sqrt(R.shape[0])))
    if d * d != R.shape[0]:
        raise ValueError("R must act on a tensor square")
    return d


def ybe_residuals(R: np.ndarray) -> tuple[float, float]:
    """Residuals of the braid form and of the flipped form R = P Rbraid."""
    d = _local_dim(R)
    I = np.eye(d)
    a, b = np.kron(R, I), np.kron(I, R)
    braid_form = residual(a @ b @ a, b @ a @ b)
    Rf = flip(d) @ R
    P23 = np.kron(I, flip(d))
    r12, r23 = np.kron(Rf, I), np.kron(I, Rf)
    r13 = P23 @ r12 @ P23
    flipped = residual(r12 @ r13 @ r23, r23 @ r13 @ r12)
    return braid_form, flipped


def check_ybe(R: np.ndarray, tol: float = TOL) -> bool:
    return max(ybe_residuals(R)) < tol


def leg_unitaries(local: Sequence[np.ndarray], legs: int) -> list[np.ndarray]:
    """u_k acts by local[k-1] on legs (k-1, k), k = 1..len(local)."""
    if not local:
        return []
    d = _local_dim(local[0])
    if d ** legs > max_dim():
        raise DimensionBudgetError(f"{d}^{legs} exceeds the budget {max_dim()}")
    if len(local) > legs - 1:
        raise ValueError("more two-leg operators than leg pairs")
    return [
        kron_all([np.eye(d ** (k - 1)), R, np.eye(d ** (legs - k - 1))])
        for k, R in enumerate(local, start=1)
    ]


# --- epsilon-signed product endomorphisms ------------------------------------


def product_endomorphism(us: Sequence[np.ndarray], eps: Sequence[int], x: np.ndarray,
                         level: int, tol: float = TOL) -> np.ndarray:
    """Ad(u_1^e1 ... u_{level+1}^e_{level+1})(x) for x adapted to ``level``."""
    need = level + 1
    if len(us) < need or len(eps) < need:
        raise ValueError(f"need {need} unitaries and signs, got {len(us)} and {len(eps)}")
    for u in us[need:]:
        if residual(u @ x, x @ u) > tol:
            raise ValueError("x is not localized at the given level")
    U = np.eye(x.shape[0], dtype=complex)
    for u, s in zip(us[:need], eps[:need]):
        U = U @ (u if s > 0 else u.conj().T)
    return U @ x @ U.conj().T


def alpha_power(us, eps, x, level: int, k: int) -> np.ndarray:
    for j in range(k):
        x = product_endomorphism(us, eps, x, level + j)
    return x


# --- perturbed representations -----------------------------------------------


@dataclass(frozen=True)
class PerturbedRep:
    unitaries: tuple[np.ndarray, ...]
    period: int | None
    flag: bool
    ad_flag: bool
    braid_residual: float


def _is_scalar(m: np.ndarray, tol: float) -> bool:
    return residual(m, m[0, 0] * np.eye(m.shape[0])) < tol


def perturbed_rep(us: Sequence[np.ndarray], g: np.ndarray, tol: float = TOL,
                  max_period: int = 24) -> PerturbedRep:
    """Multiply each u_i by a commuting unitary g and diagnose periodicity.

    ``flag`` is raised when every Ad(u_i) has a common period N while g^N != 1;
    ``ad_flag`` asks the stronger question whether Ad(g)^N is nontrivial.
    """
    for i, u in enumerate(us, start=1):
        if residual(g @ u, u @ g) > tol:
            raise ValueError(f"g does not commute with u_{i}")
    new = tuple(g @ u for u in us)
    res = braid_residuals(new)
    period = None
    for N in range(1, max_period + 1):
        if all(_is_scalar(np.linalg.matrix_power(u, N), tol) for u in us):
            period = N
            break
    flag = ad_flag = False
    if period is not None:
        gN = np.linalg.matrix_power(g, period)
        flag = residual(gN, np.eye(g.shape[0])) > tol
        ad_flag = not _is_scalar(gN, tol)
    return PerturbedRep(new, period, flag, ad_flag, max(res.values(), default=0.0))


# --- Hecke algebra -----------------------------------------------------------

_RING, q = ring("q", QQ)


def _length(p: tuple[int, ...]) -> int:
    return sum(1 for a, b in itertools.combinations(p, 2) if a > b)


@dataclass(frozen=True)
class HeckeElement:
    n: int
    terms: tuple[tuple[tuple[int, ...], object], ...]

    @classmethod
    def from_dict(cls, n: int, d: dict) -> HeckeElement:
        return cls(n, tuple(sorted((w, c) for w, c in d.items() if c != 0)))

    @classmethod
    def basis(cls, w: Sequence[int]) -> HeckeElement:
        w = tuple(w)
        return cls(len(w), ((w, _RING(1)),))

    @classmethod
    def generator(cls, i: int, n: int) -> HeckeElement:
        t = list(range(n))
        t[i - 1], t[i] = i, i - 1
        return cls.basis(t)

    @classmethod
    def one(cls, n: int) -> HeckeElement:
        return cls.basis(range(n))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: HeckeElement) -> HeckeElement:
        d = self.as_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return HeckeElement.from_dict(self.n, d)

    def scale(self, c) -> HeckeElement:
        return HeckeElement.from_dict(self.n, {w: c * a for w, a in self.terms})

    def __mul__(self, other: HeckeElement) -> HeckeElement:
        return hecke_product(self, other, self.n)

    def at(self, value) -> dict:
        out = {}
        for w, c in self.terms:
            v = c(value)
            if v != 0:
                out[w] = v
        return out


def _left_generator(i: int, d: dict) -> dict:
    """T_{s_i} times the element with coefficient map d."""
    out: dict = {}
    for w, c in d.items():
        sw = list(w)
        a, b = sw.index(i - 1), sw.index(i)
        sw[a], sw[b] = i, i - 1
        sw = tuple(sw)
        if a < b:
            out[sw] = out.get(sw, 0) + c
        else:
            out[w] = out.get(w, 0) + (q - 1) * c
            out[sw] = out.get(sw, 0) + q * c
    return out


def hecke_product(h1: HeckeElement, h2: HeckeElement, n: int | None = None) -> HeckeElement:
    n = h1.n if n is None else n
    if n > 7:
        raise DimensionBudgetError("Hecke arithmetic is limited to n <= 7")
    if h1.n != n or h2.n != n:
        raise ValueError("Hecke elements of different rank")
    total: dict = {}
    right = h2.as_dict()
    for u, c in h1.terms:
        d = right
        for i in reversed(simple_letters(u)):
            d = _left_generator(i, d)
        for w, a in d.items():
            total[w] = total.get(w, 0) + c * a
    return HeckeElement.from_dict(n, total)


def hecke_check_relations(n: int) -> dict:
    if n < 2 or n > 7:
        raise DimensionBudgetError("need 2 <= n <= 7")
    g = {i: HeckeElement.generator(i, n) for i in range(1, n)}
    one = HeckeElement.one(n)
    quad = all(g[i] * g[i] == g[i].scale(q - 1) + one.scale(q) for i in g)
    comm = all(g[i] * g[j] == g[j] * g[i] for i in g for j in g if abs(i - j) >= 2)
    braid = all(g[i] * g[i + 1] * g[i] == g[i + 1] * g[i] * g[i + 1] for i in g if i + 1 in g)
    return {"n": n, "quadratic": quad, "commutation": comm, "braid": braid,
            "pass": quad and comm and braid}


def hecke_q1_check(n: int) -> bool:
    """At q = 1 the T-basis multiplies like the symmetric group."""
    perms = list(itertools.permutations(range(n)))
    for u in perms:
        for w in perms:
            prod = hecke_product(HeckeElement.basis(u), HeckeElement.basis(w), n).at(1)
            if prod != {compose(u, w): 1}:
                return False
    return True


__all__ = [
    "GaussianRep", "HeckeElement", "PerturbedRep", "alpha_power", "braid_residuals",
    "build_gaussian", "check_ybe", "flip", "gaussian_nonexchangeability_trace",
    "hecke_check_relations", "hecke_product", "hecke_q1_check", "kron_all", "leg_unitaries",
    "normalized_trace", "perturbed_rep", "product_endomorphism", "q", "r_matrix",
    "residual", "ybe_residuals",
]
