"""Executable acceptance suite: twelve numbered criteria, each a pure function.

Each ``criterion_N`` returns a detail dict with a ``pass`` key.
:func:`run_criterion` times one and wraps it in a :class:`CriterionResult`.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import laplacian as lap
from .braid_word import (
    BraidWord,
    RelationKind,
    fundamental_braid,
    gamma,
    gamma_to_sigma,
    invert,
    m_shift,
    relation_instances,
    sigma,
    sigma_to_gamma,
    to_sigma,
)
from .garside import equal, handle_reduce, is_trivial, normal_form, total_width
from .group_algebra import L, trace
from .matrix_rep import (
    alpha_power,
    braid_residuals,
    build_gaussian,
    gaussian_nonexchangeability_trace,
    gaussian_omega,
    hecke_check_relations,
    hecke_q1_check,
    kron_all,
    leg_unitaries,
    normalized_trace,
    r_matrix,
    residual,
    ybe_residuals,
)
from .ncprob import FiniteProbSpace, commuting_square_grid, tower_commutant
from .random_sequence import (
    MomentQuery,
    Relation,
    SequenceSpec,
    check_symmetry,
    equivalent,
    lemma_braid2_identity,
    moment,
)

W1 = sigma(1, 2, 1, -2, -1, -2)
W2 = sigma(1, 3, 1, -3, -1, -3)
GAMMA_W_TRIVIAL = gamma(3, 2, 1, 3, -2, -3, -1, -2)
GAMMA_W_NONTRIVIAL = gamma(3, 1, 2, 3, -1, -3, -2, -1)

# iota-index tuples realizing the two gamma words (gamma_k = iota_{k-1}(gamma_1))
GAMMA_PAIR = ((2, 1, 0, 2, 1, 2, 0, 1), (2, 0, 1, 2, 0, 2, 1, 0))
GAMMA_PAIR_EXPONENTS = (1, 1, 1, 1, -1, -1, -1, -1)
ARTIN_PAIR = ((1, 2, 1, 2, 1, 2), (1, 3, 1, 3, 1, 3))
ARTIN_PAIR_EXPONENTS = (1, 1, 1, -1, -1, -1)

GAUSSIAN_SIZES = {2: range(3, 9), 3: range(3, 6), 4: range(3, 5)}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    budget: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.title} ({self.seconds:.1f}s / {self.budget:.0f}s)"

    def as_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "pass": self.passed,
                "seconds": round(self.seconds, 3), "budget": self.budget, "detail": self.detail}


def random_word(rng: random.Random, max_len: int, max_index: int, gamma_letters: bool = False) -> BraidWord:
    n = rng.randint(0, max_len)
    letters = [rng.choice((1, -1)) * rng.randint(1, max_index) for _ in range(n)]
    return gamma(*letters) if gamma_letters else sigma(*letters)


def _relator(rng: random.Random, max_index: int) -> list[int]:
    i = rng.randint(1, max_index - 1)
    if rng.random() < 0.5:
        return [i, i + 1, i, -(i + 1), -i, -(i + 1)]
    j = rng.choice([k for k in range(1, max_index + 1) if abs(k - i) > 1] or [i])
    return [i, j, -i, -j] if abs(i - j) > 1 else [i, -i]


def trivial_word(rng: random.Random, max_len: int, max_index: int) -> BraidWord:
    """A word equal to the identity but not freely trivial in general: u r u^-1 v r' v^-1."""
    base = random_word(rng, (max_len - 6) // 2, max_index).letters
    cut = rng.randint(0, len(base))
    letters = list(base[:cut]) + _relator(rng, max_index) + list(base[cut:])
    letters += [-x for x in reversed(base)]
    return sigma(*letters[:max_len]) if len(letters) <= max_len else sigma(*_relator(rng, max_index))


# -- criteria -------------------------------------------------------------------


def criterion_1(seed: int = 0, samples: int = 10_000, **_) -> dict:
    bad = []
    count = 0
    for kind in RelationKind:
        for n in range(3, 9):
            for rel in relation_instances(kind, n):
                count += 1
                lhs, rhs = to_sigma(rel.lhs), to_sigma(rel.rhs)
                nf_ok = equal(lhs, rhs)
                hr_ok = not handle_reduce(lhs * invert(rhs)).letters
                if not (nf_ok and hr_ok):
                    bad.append([kind.value, n, list(rel.parameters)])
    rng = random.Random(seed)
    trips = 0
    for k in range(samples):
        if k % 2:
            w = random_word(rng, 20, 7)
            ok = equal(gamma_to_sigma(sigma_to_gamma(w)), w)
        else:
            w = random_word(rng, 20, 7, gamma_letters=True)
            ok = equal(gamma_to_sigma(sigma_to_gamma(gamma_to_sigma(w))), gamma_to_sigma(w))
        trips += not ok
    return {"pass": not bad and not trips, "relations": count, "relation_failures": bad,
            "roundtrip_failures": trips, "roundtrip_samples": samples}


def criterion_2(**_) -> dict:
    delta = all(
        normal_form(fundamental_braid("delta", n) ** n, n) == normal_form(fundamental_braid("Delta", n) ** 2, n)
        for n in range(2, 7)
    )
    pyramids = all(
        equal(fundamental_braid("pyramid_up", m), fundamental_braid("pyramid_down", m))
        for m in range(2, 9)
    )
    lemma = [(n, m) for m in range(0, 9) for n in range(0, 9)
             if n not in (m, m + 1) and not lemma_braid2_identity(n, m)]
    return {"pass": delta and pyramids and not lemma, "delta_power": delta,
            "pyramids": pyramids, "lemma_failures": lemma}


def criterion_3(seed: int = 0, samples: int = 10_000, **_) -> dict:
    rng = random.Random(seed)
    disagree, trivial = [], 0
    for k in range(samples):
        w = trivial_word(rng, 30, 6) if k % 2 else random_word(rng, 30, 6)
        a = is_trivial(w)
        b = not handle_reduce(w).letters
        trivial += a
        if a != b:
            disagree.append(list(w.letters))
    return {"pass": not disagree, "samples": samples, "trivial_samples": trivial,
            "disagreements": disagree[:5]}


def criterion_4(seed: int = 0, samples: int = 1000, **_) -> dict:
    example = total_width(sigma(6, -7, 9, 9))
    rng = random.Random(seed)
    bad, done = [], 0
    while done < samples:
        tau = random_word(rng, 12, 6)
        if is_trivial(tau):
            continue
        done += 1
        if total_width(m_shift(tau, 1)) != total_width(tau) + 1:
            bad.append(list(tau.letters))
    return {"pass": example == 9 and not bad, "example_tw": example, "samples": samples,
            "increment_failures": bad[:5]}


def criterion_5(**_) -> dict:
    values = {
        "w1": trace(L(W1)),
        "w2": trace(L(W2)),
        "gamma_trivial": trace(L(GAMMA_W_TRIVIAL)),
        "gamma_nontrivial": trace(L(GAMMA_W_NONTRIVIAL)),
    }
    powers = [trace(L(gamma(1)) ** k) for k in range(1, 7)]
    ok = (values == {"w1": 1, "w2": 0, "gamma_trivial": 1, "gamma_nontrivial": 0}
          and all(v == 0 for v in powers))
    return {"pass": ok, **values, "haar_traces": powers}


def _pair_moments(spec: SequenceSpec, pair, exps) -> tuple:
    args = tuple(L(sigma(1) ** e) for e in exps)
    return tuple(moment(spec, MomentQuery(t, args)) for t in pair)


def criterion_6(jobs: int = 1, **_) -> dict:
    beta, alpha = SequenceSpec("gamma-beta"), SequenceSpec("artin-alpha")
    spread = check_symmetry(beta, Relation.ORDER, 6, 4, jobs=jobs)
    alpha_order = check_symmetry(alpha, Relation.ORDER, 6, 3, jobs=jobs)
    artin_pair = _pair_moments(alpha, ARTIN_PAIR, ARTIN_PAIR_EXPONENTS)
    artin_ok = (not alpha_order.passed and equivalent(*ARTIN_PAIR, Relation.ORDER)
                and artin_pair == (1, 0))
    stationary = [check_symmetry(s, Relation.TRANSLATION, 5, 4, jobs=jobs) for s in (alpha, beta)]
    beta_sym = check_symmetry(beta, Relation.SYMMETRIC, 8, 3, jobs=jobs)
    gamma_pair = _pair_moments(beta, GAMMA_PAIR, GAMMA_PAIR_EXPONENTS)
    gamma_ok = (not beta_sym.passed and equivalent(*GAMMA_PAIR, Relation.SYMMETRIC)
                and not equivalent(*GAMMA_PAIR, Relation.ORDER) and gamma_pair == (1, 0))
    ok = spread.passed and artin_ok and all(r.passed for r in stationary) and gamma_ok
    return {
        "pass": ok,
        "gamma_beta_order": spread.as_json(),
        "artin_alpha_order": alpha_order.as_json(),
        "artin_pair_moments": list(artin_pair),
        "stationarity": [r.as_json() for r in stationary],
        "gamma_beta_symmetric": beta_sym.as_json(),
        "gamma_pair_moments": list(gamma_pair),
    }


def criterion_7(**_) -> dict:
    report = lap.compare_with_kesten(12)
    raw = [lap.raw_count("f2", n) for n in range(0, 9)]
    raw_ok = raw == report["counts"][:9]
    head = [report["counts"][n] for n in (0, 2, 4, 6)]
    return {"pass": report["match"] and raw_ok and head == [1, 4, 28, 232],
            "counts": report["counts"], "raw_counts": raw, "mismatches": report["mismatches"]}


def criterion_8(**_) -> dict:
    b3 = lap.counts_up_to("b3", 6)
    f2 = lap.counts_up_to("f2", 10)
    sq = lap.counts_up_to("b3", 10, power=2)
    ok = b3[:5] == f2[:5] and b3[6] > f2[6] and sq == f2
    return {"pass": ok, "b3": b3, "f2": f2, "b3_squared": sq, "excess_at_6": b3[6] - f2[6]}


def criterion_9(**_) -> dict:
    rows = []
    ok = True
    for p, sizes in GAUSSIAN_SIZES.items():
        omega2 = gaussian_omega(p) ** 2
        for n in sizes:
            rep = build_gaussian(p, n)
            res = max(rep.residuals().values())
            ad = residual(rep.u[0] @ rep.e[0] @ rep.u[0].conj().T, rep.e[1])
            uni = rep.spectral_uniformity()
            row_ok = res < 1e-9 and ad < 1e-9 and uni < 1e-9
            rows.append({"p": p, "n": n, "residual": res, "ad_residual": ad, "spectral": uni})
            ok &= row_ok
        a, b = gaussian_nonexchangeability_trace(p)
        trace_ok = abs(a - omega2) < 1e-9 and abs(b - omega2.conjugate()) < 1e-9
        distinct = abs(a - b) > 1e-9
        ok &= trace_ok and distinct == (p > 2)
        rows.append({"p": p, "traces": [[a.real, a.imag], [b.real, b.imag]], "distinct": distinct})
    return {"pass": bool(ok), "rows": rows}


def example_mixed_shift() -> dict:
    """Tensor flip mixed with the CAR flip (omega_1 = 1, omega_2 = -1) on three qubits."""
    us = leg_unitaries([r_matrix(1), r_matrix(-1)], 3)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.diag([1, -1]).astype(complex)
    one = np.eye(2)
    x = kron_all([X, one, one])
    a1 = alpha_power(us, [1, 1], x, 0, 1)
    a2 = alpha_power(us, [1, 1], x, 0, 2)
    return {
        "alpha_residual": residual(a1, kron_all([one, X, one])),
        "alpha2_residual": residual(a2, kron_all([Z, one, X])),
        "square1": residual((x @ a1) @ (x @ a1), np.eye(8)),
        "square2": residual((x @ a2) @ (x @ a2), -np.eye(8)),
        "trace1": normalized_trace(x @ a1 @ x @ a1),
        "trace2": normalized_trace(x @ a2 @ x @ a2),
    }


def criterion_10(**_) -> dict:
    ybe = {}
    worst = 0.0
    for name, w in (("1", 1), ("-1", -1), ("i", 1j)):
        r = ybe_residuals(r_matrix(w))
        b = braid_residuals(leg_unitaries([r_matrix(w)] * 4, 5))
        ybe[name] = {"ybe": list(r), **b}
        worst = max(worst, *r, *b.values())
    ex = example_mixed_shift()
    ex_res = max(ex["alpha_residual"], ex["alpha2_residual"], ex["square1"], ex["square2"])
    ok = (worst < 1e-9 and ex_res < 1e-9 and abs(ex["trace1"] - 1) < 1e-9
          and abs(ex["trace2"] + 1) < 1e-9)
    ex["trace1"], ex["trace2"] = ex["trace1"].real, ex["trace2"].real
    return {"pass": ok, "ybe": ybe, "mixed_shift": ex}


def criterion_11(**_) -> dict:
    rel = [hecke_check_relations(n) for n in range(2, 6)]
    q1 = {n: hecke_q1_check(n) for n in range(2, 6)}
    return {"pass": all(r["pass"] for r in rel) and all(q1.values()), "relations": rel,
            "q1": {str(k): v for k, v in q1.items()}}


def criterion_12(**_) -> dict:
    rep = build_gaussian(2, 6)
    space = FiniteProbSpace(rep.dim, list(rep.e))
    cells = commuting_square_grid(space, rep.e, 4)
    grid_ok = all(c.passed and c.consistent for c in cells.values())
    comm = {n: tower_commutant(space, rep.e, rep.u, n, 6) for n in range(0, 4)}
    comm_ok = all(r < 1e-8 for r in comm.values())
    return {"pass": grid_ok and comm_ok,
            "grid": {f"{i},{j}": c.as_json() for (i, j), c in sorted(cells.items())},
            "commutant_residuals": {str(n): r for n, r in comm.items()}}


CRITERIA: dict[int, tuple[str, float, Callable[..., dict]]] = {
    1: ("presentation relations and conversion round trip", 60, criterion_1),
    2: ("fundamental braid, pyramid and braid-shift identities", 10, criterion_2),
    3: ("normal form agrees with handle reduction", 120, criterion_3),
    4: ("total width example and shift increment", 60, criterion_4),
    5: ("trace witnesses", 5, criterion_5),
    6: ("symmetry battery", 300, criterion_6),
    7: ("Kesten series against free-group counts", 60, criterion_7),
    8: ("braided versus free Laplacian counts", 300, criterion_8),
    9: ("Gaussian representation", 60, criterion_9),
    10: ("R-matrix suite and mixed shift", 30, criterion_10),
    11: ("Hecke relations", 30, criterion_11),
    12: ("commuting squares and relative commutants", 120, criterion_12),
}


def run_criterion(number: int, seed: int = 0, jobs: int = 1) -> CriterionResult:
    title, budget, fn = CRITERIA[number]
    start = time.perf_counter()
    detail = fn(seed=seed, jobs=jobs)
    seconds = time.perf_counter() - start
    passed = bool(detail.pop("pass")) and seconds < budget
    return CriterionResult(number, title, passed, seconds, budget, detail)


def run_all(numbers=None, seed: int = 0, jobs: int = 1) -> list[CriterionResult]:
    return [run_criterion(n, seed, jobs) for n in (numbers or sorted(CRITERIA))]
