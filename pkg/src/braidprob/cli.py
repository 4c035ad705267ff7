"""Command line entry point.  Every subcommand prints one JSON document."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import acceptance, garside, laplacian, matrix_rep, ncprob
from .braid_word import (
    Presentation,
    RelationKind,
    WordError,
    format_word,
    free_reduce,
    gamma_to_sigma,
    invert,
    m_shift,
    parse_word,
    relation_instances,
    shift,
    sigma_to_gamma,
    to_sigma,
)
from .group_algebra import L
from .random_sequence import (
    MomentQuery,
    Relation,
    SequenceKind,
    SequenceSpec,
    check_symmetry,
    moment,
)


class UsageError(Exception):
    pass


def _clean(obj):
    """Make output JSON-ready and byte-stable."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return _clean(z.real) if abs(z.imag) < 1e-15 else [_clean(z.real), _clean(z.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return float(f"{x:.12g}")
    return obj


def _emit(payload: dict) -> None:
    print(json.dumps(_clean(payload), sort_keys=True))


def _word(text: str):
    try:
        return parse_word(text)
    except WordError as exc:
        raise UsageError(str(exc)) from exc


# --- word and group commands ---------------------------------------------------


def cmd_reduce(a):
    w = _word(a.word)
    out = {"free": format_word(free_reduce(w))}
    if w.presentation is Presentation.SIGMA:
        out["handle"] = format_word(garside.handle_reduce(w))
    return out


def cmd_nf(a):
    w = _word(a.word)
    nf = garside.minimal_normal_form(w)
    return {"key": garside.canonical_key(w).decode(), **nf.as_json(), "tw": nf.total_width()}


def cmd_trivial(a):
    return {"trivial": garside.is_trivial(_word(a.word))}


def cmd_equal(a):
    return {"equal": garside.equal(_word(a.left), _word(a.right))}


def cmd_tw(a):
    return {"tw": garside.total_width(_word(a.word))}


def cmd_orbit(a):
    return {"distinct": garside.shifted_orbit_distinct(_word(a.word), a.m, a.K)}


def cmd_convert(a):
    w = _word(a.word)
    if a.to == "sigma":
        out = gamma_to_sigma(w) if w.presentation is Presentation.GAMMA else free_reduce(w)
    else:
        out = sigma_to_gamma(w) if w.presentation is Presentation.SIGMA else free_reduce(w)
    return {"word": format_word(out)}


def cmd_shift(a):
    w = to_sigma(_word(a.word))
    out = shift(w, a.k) if a.m is None else m_shift(w, a.m)
    return {"word": format_word(out)}


def cmd_relcheck(a):
    kinds = list(RelationKind) if a.kind == "all" else [RelationKind(a.kind)]
    failures, count = [], 0
    for kind in kinds:
        for rel in relation_instances(kind, a.n):
            count += 1
            lhs, rhs = to_sigma(rel.lhs), to_sigma(rel.rhs)
            ok = garside.equal(lhs, rhs)
            if a.handle:
                ok = ok and not garside.handle_reduce(lhs * invert(rhs)).letters
            if not ok:
                failures.append({"kind": kind.value, "parameters": list(rel.parameters)})
    return {"instances": count, "failures": failures, "pass": not failures}, (1 if failures else 0)


def cmd_symmetry(a):
    spec = SequenceSpec(a.spec)
    report = check_symmetry(spec, a.rel, a.max_order, a.bound,
                            stop_at_first=not a.all_witnesses, jobs=a.jobs)
    out = report.as_json()
    return out, (0 if out["pass"] else 1)


def cmd_moment(a):
    spec = SequenceSpec(a.spec)
    idx = tuple(int(x) for x in a.tuple.split(","))
    words = [_word(t) for t in a.args]
    if len(words) != len(idx):
        raise UsageError("need one --arg per tuple entry")
    try:
        value = moment(spec, MomentQuery(idx, tuple(L(w) for w in words)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return {"moment": value}


def cmd_walk(a):
    counts = laplacian.counts_up_to(a.group, a.max_n, power=a.power, generators=a.generators)
    out = {"counts": {n: c for n, c in enumerate(counts)}}
    if a.raw_oracle:
        limit = min(a.max_n, 8 if a.group == "f2" else 6)
        raw = [laplacian.raw_count(a.group, n, power=a.power, generators=a.generators)
               for n in range(limit + 1)]
        out["raw"] = {n: c for n, c in enumerate(raw)}
        out["agree"] = raw == counts[: limit + 1]
        return out, (0 if out["agree"] else 1)
    return out


def cmd_kesten(a):
    return {"coefficients": list(laplacian.kesten_series(a.max_n).coefficients)}


# --- representations -------------------------------------------------------------


def _load_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        data = json.load(fh)
    rows = data["matrix"] if isinstance(data, dict) else data

    def entry(v):
        if isinstance(v, dict):
            return complex(v.get("re", 0.0), v.get("im", 0.0))
        if isinstance(v, (list, tuple)):
            return complex(v[0], v[1])
        return complex(v)

    return np.array([[entry(v) for v in row] for row in rows], dtype=complex)


def cmd_rep(a):
    if a.kind == "gaussian":
        rep = matrix_rep.build_gaussian(a.p, a.strands)
        res = rep.residuals()
        out = {"p": a.p, "strands": a.strands, "dim": rep.dim, "residuals": res,
               "spectral_uniformity": rep.spectral_uniformity()}
        if a.verify:
            ok = max(res.values()) < matrix_rep.TOL and out["spectral_uniformity"] < matrix_rep.TOL
            out["pass"] = ok
            return out, (0 if ok else 1)
        return out
    if a.kind == "ybe":
        R = _load_matrix(a.matrix) if a.matrix else matrix_rep.r_matrix(complex(a.omega))
        try:
            braid_form, flipped = matrix_rep.ybe_residuals(R)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        ok = max(braid_form, flipped) < matrix_rep.TOL
        return {"ybe": ok, "braid_form_residual": braid_form, "flipped_residual": flipped}, (0 if ok else 1)
    if a.kind == "hecke":
        out = matrix_rep.hecke_check_relations(a.n)
        return out, (0 if out["pass"] else 1)
    # perturb: tensor flips with a Xerox unitary g0^{(x) legs}, g0 = diag(1, e^{2 pi i / order})
    us = matrix_rep.leg_unitaries([matrix_rep.flip(2)] * (a.legs - 1), a.legs)
    phase = np.exp(2j * np.pi / a.order)
    if a.scalar:
        g = phase * np.eye(2 ** a.legs)
    else:
        g = matrix_rep.kron_all([np.diag([1, phase])] * a.legs)
    pr = matrix_rep.perturbed_rep(us, g)
    return {"period": pr.period, "flag": pr.flag, "ad_flag": pr.ad_flag,
            "braid_residual": pr.braid_residual}


def cmd_ncp(a):
    rep = matrix_rep.build_gaussian(a.p, a.strands)
    space = ncprob.FiniteProbSpace(rep.dim, list(rep.e))
    if a.kind == "square":
        cells = ncprob.commuting_square_grid(space, rep.e, a.max_sum)
        ok = all(c.passed and c.consistent for c in cells.values())
        return {"cells": {f"{i},{j}": c.as_json() for (i, j), c in sorted(cells.items())},
                "pass": ok}, (0 if ok else 1)
    if a.kind == "independence":
        M0 = ncprob.interval_algebra(space, rep.e, 0, 0)
        moved = space.subalgebra([rep.u[0] @ rep.e[0] @ rep.u[0].conj().T])
        r = ncprob.check_independence(space, space.scalars(), M0, moved)
        return r.as_json(), (0 if r.passed else 1)
    if a.kind == "commutant":
        res = ncprob.tower_commutant(space, rep.e, rep.u, a.n, a.K)
        return {"residual": res, "verdict": ncprob.verdict(res)}, (0 if res < ncprob.PASS_TOL else 1)
    r = ncprob.bernoulli_factorization_check(space, rep.u, [1] * len(rep.u), [rep.e[0]],
                                             a.max_shift, mode=a.mode)
    return r.as_json(), (0 if r.passed else 1)


def cmd_verify(a):
    only = [int(x) for x in a.only.split(",")] if getattr(a, "only", None) else None
    results = acceptance.run_all(only, seed=a.seed, jobs=a.jobs)
    ok = all(r.passed for r in results)
    return {"criteria": [r.as_json() for r in results], "pass": ok}, (0 if ok else 1)


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidprob", description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--verify-paper", dest="verify_all", action="store_true",
                   help="run every acceptance criterion (same as the verify-paper subcommand)")
    sub = p.add_subparsers(dest="command")

    def word_cmd(name, fn, *extra):
        sp = sub.add_parser(name)
        sp.add_argument("word")
        for args, kw in extra:
            sp.add_argument(*args, **kw)
        sp.set_defaults(fn=fn)
        return sp

    word_cmd("reduce", cmd_reduce)
    word_cmd("nf", cmd_nf)
    word_cmd("trivial", cmd_trivial)
    word_cmd("tw", cmd_tw)
    word_cmd("orbit", cmd_orbit, (("--m",), {"type": int, "default": 1}),
             (("--K",), {"type": int, "default": 5}))
    word_cmd("convert", cmd_convert, (("--to",), {"choices": ["sigma", "gamma"], "required": True}))
    word_cmd("shift", cmd_shift, (("--k",), {"type": int, "default": 1}),
             (("--m",), {"type": int, "default": None}))
    sp = sub.add_parser("equal")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(fn=cmd_equal)

    sp = sub.add_parser("relcheck")
    sp.add_argument("--kind", default="all", choices=["all"] + [k.value for k in RelationKind])
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--handle", action="store_true", help="also confirm with handle reduction")
    sp.set_defaults(fn=cmd_relcheck)

    specs = [k.value for k in SequenceKind]
    sp = sub.add_parser("symmetry")
    sp.add_argument("--spec", choices=specs, required=True)
    sp.add_argument("--rel", choices=[r.value for r in Relation], required=True)
    sp.add_argument("--max-order", type=int, default=4)
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--all-witnesses", action="store_true")
    sp.set_defaults(fn=cmd_symmetry)

    sp = sub.add_parser("moment")
    sp.add_argument("--spec", choices=specs, required=True)
    sp.add_argument("--tuple", required=True, help="comma separated sequence indices")
    sp.add_argument("--arg", dest="args", action="append", default=[],
                    help="one word per tuple entry, in the initial algebra")
    sp.set_defaults(fn=cmd_moment)

    sp = sub.add_parser("walk")
    sp.add_argument("--group", choices=["b3", "f2"], required=True)
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--power", type=int, default=1)
    sp.add_argument("--generators", type=int, default=2)
    sp.add_argument("--raw-oracle", action="store_true")
    sp.set_defaults(fn=cmd_walk)

    sp = sub.add_parser("kesten")
    sp.add_argument("--max-n", type=int, default=12)
    sp.set_defaults(fn=cmd_kesten)

    sp = sub.add_parser("rep")
    sp.add_argument("kind", choices=["gaussian", "ybe", "hecke", "perturb"])
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--strands", type=int, default=4)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--matrix", help="JSON file with a row-major matrix of {re, im} entries")
    sp.add_argument("--omega", default="1", help="parameter of the 4x4 R-matrix when --matrix is absent")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--legs", type=int, default=4)
    sp.add_argument("--order", type=int, default=4, help="order of the Xerox phase")
    sp.add_argument("--scalar", action="store_true", help="use a scalar Xerox unitary")
    sp.set_defaults(fn=cmd_rep)

    sp = sub.add_parser("ncp")
    sp.add_argument("kind", choices=["square", "independence", "commutant", "bernoulli"])
    sp.add_argument("--rep", choices=["gaussian"], default="gaussian")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--strands", type=int, default=6)
    sp.add_argument("--max-sum", type=int, default=4)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--K", type=int, default=6)
    sp.add_argument("--max-shift", type=int, default=3)
    sp.add_argument("--mode", choices=["order", "full"], default="full")
    sp.set_defaults(fn=cmd_ncp)

    sp = sub.add_parser("verify-paper")
    sp.add_argument("--only", help="comma separated criterion numbers")
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verify_all:
        args.fn = cmd_verify
    elif args.command is None:
        parser.error("a subcommand is required")
    try:
        result = args.fn(args)
    except (UsageError, laplacian.BudgetExceeded, matrix_rep.DimensionBudgetError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    payload, code = result if isinstance(result, tuple) else (result, 0)
    _emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
