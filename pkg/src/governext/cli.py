"""Command-line front end: ``analyze`` a single set S, or ``verify`` a corpus."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from sympy import isprime

from .cache import cached_basis
from .classgroup import delta_field
from .corpus import DEFAULT_SEED, rational_intro_sets, run_corpus, run_field, squarefree_range
from .errors import ArchimedeanRequiresP2, GoverningError, InvariantFailure, MalformedToken, ValidationError
from .fields import make_field, parse_places
from .governing import SymbolNormalization, governing_matrix
from .oracle import verify_theorem_main
from .relations import (
    count_exact_ramified_classes,
    count_full_support_relations,
    koch_table,
    relation_space,
    wiles_greenberg_ledger,
)
from .virtual_units import exact_sequence_report

log = logging.getLogger("governext")

SCHEMA_VERSION = 1
ARCH_TOKENS = ("inf", "oo", "infinity")


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2)


def _check_prime(p):
    if not isprime(p):
        raise MalformedToken(f"p = {p} is not prime")


def _split_tokens(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def analyze(field, p, tokens, emit_matrix=False, verify=False, subsets=False,
            cache=None, generator_index=0):
    """Build the analysis document for one (K, p, S)."""
    _check_prime(p)
    if isinstance(tokens, str):
        tokens = _split_tokens(tokens)
    if p != 2 and any(str(t).strip().lower().partition(".")[0] in ARCH_TOKENS for t in tokens):
        raise ArchimedeanRequiresP2(f"archimedean places need p = 2, got p = {p}")
    F = make_field(field)
    S = parse_places(F, tokens)
    norm = SymbolNormalization(generator_index)
    B = cached_basis(F, p, S, cache)
    exact_sequence_report(B)
    G = governing_matrix(S, B, norm)
    R = relation_space(G)
    columns = dict(zip(S, G.columns))
    rel_count = count_full_support_relations(G)
    coh_count = count_exact_ramified_classes(S, B, columns)
    ledger = wiles_greenberg_ledger(S, B, G)
    doc = {
        "v": SCHEMA_VERSION,
        "field": dict(F.to_json(), delta=delta_field(F, p)),
        "p": p,
        "places": [v.token for v in S],
        "basis": {
            "d": B.d,
            "entries": [
                {"value": str(e.value), "coords": e.value.to_json(), "source": e.source}
                for e in B.entries
            ],
        },
        "relations": R.to_json(),
        "counts": {"relations": rel_count, "cohomology": coh_count},
        "ledger": {"mN": ledger.dim_N_perp, "mM": ledger.dim_M_perp, "value": ledger.value},
        "exists": rel_count > 0,
    }
    if emit_matrix:
        doc["matrix"] = G.to_json()
    if subsets:
        doc["koch"] = [r.to_json() for r in koch_table(S, B, columns)]
    if verify:
        rep = verify_theorem_main(F, p, S, basis=B, norm=norm)
        doc["counts"]["oracle"] = rep.cohomology_count_oracle
        doc["verdict"] = "pass" if rep.verdict and rep.proposition_holds else "fail"
    if rel_count != coh_count:
        raise InvariantFailure(f"relation count {rel_count} != cohomology count {coh_count}")
    return doc


def _parse_range(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise MalformedToken(f"range {text!r} must look like a..b")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise MalformedToken(f"bad range {text!r}") from None


def verify_intro(dmax, p=2, norm=None):
    """Odd squarefree D with |D| <= dmax over Q: both counts, plus existence iff D = 1 mod 4."""
    F = make_field("Q")
    pairs = rational_intro_sets(dmax)
    kw = {} if norm is None else {"norm": norm}
    n, failures, reports = run_field(F, p, [S for _, S in pairs], keep_reports=True, **kw)
    for (D, S), rep in zip(pairs, reports):
        expect = D % 4 == 1
        ok = (rep.relation_count > 0) == expect and (
            not expect or rep.relation_count == rep.cohomology_count_engine == 1
        )
        if not ok:
            failures.append({"D": D, "S": [v.token for v in S], "counts": [
                rep.relation_count, rep.cohomology_count_engine, rep.cohomology_count_oracle]})
    return n, failures


def cmd_analyze(args):
    doc = analyze(args.field, args.prime, args.places, args.emit_matrix, args.verify,
                  args.subsets, args.cache, args.generator_index)
    print(_dump(doc))
    return 0 if doc.get("verdict", "pass") == "pass" else 1


def cmd_verify(args):
    log.info("corpus seed %d", args.seed)
    if args.dmax is not None:
        if args.field not in (None, "Q", "q"):
            raise ValidationError("--dmax sweeps the rational field only")
        t0 = time.perf_counter()
        n, failures = verify_intro(args.dmax, args.prime or 2)
        summary = {"v": SCHEMA_VERSION, "cases": n, "fields": 1, "failures": failures,
                   "seconds": round(time.perf_counter() - t0, 3), "seed": args.seed}
    else:
        fields = []
        if args.field:
            fields.append(make_field(args.field))
        if args.drange:
            lo, hi = _parse_range(args.drange)
            fields.extend(make_field(d) for d in squarefree_range(lo, hi))
        if args.with_q and make_field("Q") not in fields:
            fields.append(make_field("Q"))
        primes = [int(x) for x in _split_tokens(args.primes)] if args.primes else [args.prime or 2]
        for p in primes:
            _check_prime(p)
        res = run_corpus(fields, primes, args.cases, args.max_places, args.norm_bound, args.seed)
        summary = dict(res.to_json(), seed=args.seed, primes=primes)
    summary["failures"] = sorted(summary["failures"], key=lambda f: json.dumps(f, sort_keys=True))
    print(_dump(summary))
    return 1 if summary["failures"] else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="governext", description=__doc__)
    ap.add_argument("--log-level", default="WARNING")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one ramification set S")
    a.add_argument("--field", required=True, help="Q, d=-23 or -23")
    a.add_argument("--prime", type=int, required=True)
    a.add_argument("--places", required=True, help="comma-separated tokens, e.g. 3,7 or 5.1,inf")
    a.add_argument("--emit-matrix", action="store_true")
    a.add_argument("--verify", action="store_true", help="also run the class field theory oracle")
    a.add_argument("--subsets", action="store_true", help="include the Koch table for all subsets")
    a.add_argument("--cache", default=None, help="cache directory (default: $GOVERNING_CACHE)")
    a.add_argument("--generator-index", type=int, default=0)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check both counts over a corpus")
    v.add_argument("--field", default=None)
    v.add_argument("--prime", type=int, default=None)
    v.add_argument("--primes", default=None, help="comma-separated, e.g. 2,3,5")
    v.add_argument("--dmax", type=int, default=None, help="rational sweep over |D| <= dmax")
    v.add_argument("--drange", default=None, help="squarefree d in a..b")
    v.add_argument("--with-q", action="store_true", help="add K = Q to a --drange corpus")
    v.add_argument("--max-places", type=int, default=4)
    v.add_argument("--cases", type=int, default=200, help="sampled sets per (field, p)")
    v.add_argument("--norm-bound", type=int, default=2000)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)
    return ap


def _glue_negative_values(argv):
    # let "--drange -200..200" and "--field -23" through argparse
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--drange", "--field", "--places"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    except InvariantFailure as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 3
    except GoverningError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
