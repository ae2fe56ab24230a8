"""Batch command-line front end; every command writes one JSON (or CSV) report.

Exit status: 0 when every gated check passes, 1 when one fails, 2 on invalid
input, 3 when a cache or truncation limit is hit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .hilbert_embed.embedding import (
    CacheLimitExceeded, EmbeddingError, build_embedding, cache_cap, classification_invariant,
    q_report, standardness, verify_conjugate,
)
from .ergodic_algebra import AlgebraError, TruncationOverflow
from .hilbert_embed.spec import EmbeddingSpec, SpecError
from .tl_core.scalars import BackendError, RationalBackend, backend_from_descriptor, root_of_unity_backend


class InputError(Exception):
    pass


# backends and d descriptors

def parse_d(text: str):
    """'5/2' or '3' -> exact rational backend; 'ell=4' -> 2cos(π/4) over its minimal polynomial."""
    text = text.strip()
    try:
        if text.startswith("ell="):
            return root_of_unity_backend(int(text[4:]))
        return RationalBackend(Fraction(text))
    except (ValueError, ZeroDivisionError, BackendError) as exc:
        raise InputError(f"invalid d descriptor {text!r}: {exc}") from exc


def parse_backend(text: str | None) -> dict:
    if text is None:
        return {"backend": "complex-float"}
    if text.lstrip().startswith("{"):
        try:
            desc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"backend descriptor is not valid JSON: {exc}") from exc
    else:
        desc = {"backend": text}
    try:
        backend_from_descriptor(desc)
    except (KeyError, BackendError) as exc:
        raise InputError(f"invalid backend descriptor {desc!r}: {exc}") from exc
    return desc


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _clean(x):
    """JSON-safe copy with floats rounded to a fixed number of significant digits."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    return x


# commands

def cmd_dims(args) -> tuple:
    from .oriented_core import calculus as oc
    from .tl_core import forms

    max_len = args.max_len
    d_values = args.d or []
    backends = [(text, parse_d(text)) for text in d_values]
    rows = []
    if args.category == "tl":
        for m in range(0, max_len + 1, 2):
            row = {"word": "y^%d" % m, "generic": forms.hom_dim(0, m)}
            for text, bk in backends:
                row[f"d={text}"] = forms.hom_dim(0, m, "specialized", bk)
            rows.append(row)
    else:
        for r in range(max_len // 2 + 1):
            w = "xX" * r
            row = {"word": f"(xX)^{r}", "generic": oc.hom_dim("", w)}
            for text, bk in backends:
                row[f"d={text}"] = oc.hom_dim("", w, "specialized", bk)
            rows.append(row)
    return {"category": args.category, "max_len": max_len, "rows": rows}, True


def cmd_verify_embedding(args) -> tuple:
    spec = EmbeddingSpec.from_json(load_json(args.spec))
    e = build_embedding(spec)
    conj = verify_conjugate(e, args.tol)
    q = q_report(e, args.tol)
    inv = classification_invariant(e)
    std = [standardness(e, r, seed=args.seed) for r in range(1, 3)] if spec.kind != "pseudoreal" else []
    ok = conj["pass"] and q["pass"] and inv["residual"] <= 1e-8 * max(1.0, spec.d)
    return {"embedding": spec.to_json(), "conjugate_equations": conj, "q_invariants": q,
            "classification": inv, "standardness": std}, ok


def _algebra(args):
    from .ergodic_algebra import algebra_from_json
    obj = load_json(args.spec)
    if args.tol is not None:
        obj = dict(obj, tol=args.tol)
    return obj, algebra_from_json(obj)


def cmd_algebra_report(args) -> tuple:
    from .ergodic_algebra import Coaction, brute_force_dimension, coaction_report

    obj, alg = _algebra(args)
    pos = alg.positivity_report(alg.tol)
    out = {"algebra": obj, "dimension": alg.dimension, "ambient_dimension": alg.ambient_dim,
           "class_words": [alg.class_word(k) for k in range(len(alg.m))],
           "class_ranks": [[m, t] for m, t in zip(alg.m, alg.t)],
           "haar_unit": alg.haar(alg.unit()), "positivity": pos,
           "quotient_residual": alg.quotient_residual(np.random.default_rng(args.seed))}
    ok = pos["pass"] and abs(out["haar_unit"] - 1) <= 1e-12
    if args.brute_force:
        out["brute_force_dimension"] = brute_force_dimension(alg.mu, alg.tau, alg.N)
        ok = ok and out["brute_force_dimension"] == alg.dimension
    if not args.skip_coaction:
        co = coaction_report(Coaction(alg))
        out["coaction"] = co
        ok = ok and co["pass"]
    return out, ok


def cmd_qmult(args) -> tuple:
    from .ergodic_algebra import multiplicity_table

    obj, alg = _algebra(args)
    table = [m.to_json() for m in multiplicity_table(alg.mu, args.r_max)]
    return {"algebra": obj, "functor": alg.mu.descriptor(), "rows": table}, all(r["within_bounds"] for r in table)


COMMANDS = {
    "dims": cmd_dims,
    "verify-embedding": cmd_verify_embedding,
    "algebra-report": cmd_algebra_report,
    "qmult": cmd_qmult,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", help="backend name or JSON descriptor (default complex-float)")
    common.add_argument("--tol", type=float, default=None, help="pass threshold for residuals")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized probes")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="tlkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tlkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dims", parents=[common], help="hom dimension tables, generic and specialized")
    d.add_argument("--category", choices=("tl", "oriented"), default="tl")
    d.add_argument("--max-len", type=int, default=8)
    d.add_argument("--d", action="append", help="specialization: rational like 5/2, or ell=L for 2cos(π/L)")

    v = sub.add_parser("verify-embedding", parents=[common], help="conjugate equations and Q-invariants")
    v.add_argument("--spec", required=True, help="EmbeddingSpec JSON file")

    a = sub.add_parser("algebra-report", parents=[common], help="truncated algebra, Haar form, coaction")
    a.add_argument("--spec", required=True, help="AlgebraSpec JSON file")
    a.add_argument("--brute-force", action="store_true", help="also compute the quotient dimension directly")
    a.add_argument("--skip-coaction", action="store_true")

    q = sub.add_parser("qmult", parents=[common], help="quantum multiplicity table")
    q.add_argument("--spec", required=True, help="AlgebraSpec JSON file")
    q.add_argument("--r-max", type=int, default=3)
    return p


def _csv(report: dict) -> str:
    results = report["results"]
    rows = results.get("rows")
    if rows is None:
        # flatten one level: section.key -> value
        rows = []
        for key, val in results.items():
            if isinstance(val, dict):
                rows += [{"key": f"{key}.{k}", "value": json.dumps(v)} for k, v in val.items()]
            else:
                rows.append({"key": key, "value": json.dumps(val)})
    buf = io.StringIO()
    fields = list(rows[0]) if rows else ["key", "value"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("out",)}
    try:
        backend = parse_backend(args.backend)
        if args.tol is None and args.command == "verify-embedding":
            args.tol = 1e-10
        results, ok = COMMANDS[args.command](args)
        status = 0 if ok else 1
    except (CacheLimitExceeded, TruncationOverflow) as exc:
        hint = " (raise N in the algebra spec)" if isinstance(exc, TruncationOverflow) else ""
        print(f"error: {exc}{hint}", file=sys.stderr)
        return 3
    except (InputError, SpecError, AlgebraError, EmbeddingError, ArithmeticError,
            KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = _clean({"command": args.command, "config": config, "backend": backend,
                     "version": __version__, "cache_cap": cache_cap(),
                     "results": results, "pass": ok})
    text = json.dumps(report, indent=2, sort_keys=True) + "\n" if args.format == "json" else _csv(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
