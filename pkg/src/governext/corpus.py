"""Deterministic corpora of (field, p, S) cases and the loop that verifies them."""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass

from sympy import primefactors, primerange

from .classgroup import delta_place
from .fields import factor_rational_prime, is_squarefree, make_field, parse_place, real_places
from .governing import DEFAULT_NORMALIZATION
from .oracle import _PresentationData, verify_theorem_main
from .virtual_units import exact_sequence_report, virtual_unit_basis

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601


def squarefree_range(lo, hi):
    return [d for d in range(lo, hi + 1) if d not in (0, 1) and is_squarefree(d)]


def tame_places(F, p, norm_bound):
    """Places usable in S: delta(K_v) = 1, not above p, norm <= norm_bound."""
    out = []
    for ell in primerange(2, norm_bound + 1):
        if ell == p:
            continue
        for v in factor_rational_prime(F, ell):
            if v.norm <= norm_bound and delta_place(v, p):
                out.append(v)
    if p == 2:
        out.extend(real_places(F))
    return out


def sample_sets(F, p, n_sets, max_places, norm_bound, seed=DEFAULT_SEED):
    """``n_sets`` random tame sets with 1 <= |S| <= max_places."""
    pool = tame_places(F, p, norm_bound)
    rng = random.Random(f"{seed}:{F.spec_string()}:{p}")
    sets = []
    for _ in range(n_sets):
        k = rng.randint(1, min(max_places, len(pool)))
        sets.append(tuple(rng.sample(pool, k)))
    return sets


def rational_intro_sets(dmax):
    """S = primes dividing D (plus infinity when D < 0) for squarefree odd |D| <= dmax."""
    Q = make_field("Q")
    inf = parse_place(Q, "inf")
    out = []
    for D in range(-dmax, dmax + 1):
        if D in (0, 1) or D % 2 == 0 or not is_squarefree(D):
            continue
        S = tuple(parse_place(Q, str(ell)) for ell in primefactors(abs(D)))
        if D < 0:
            S = S + (inf,)
        out.append((D, S))
    return out


@dataclass
class CorpusResult:
    cases: int
    failures: list
    fields: int
    seconds: float
    reports: list

    def to_json(self):
        return {
            "v": 1,
            "cases": self.cases,
            "fields": self.fields,
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
        }


def run_field(F, p, sets, norm=DEFAULT_NORMALIZATION, keep_reports=False, checks=()):
    """Verify every set in ``sets`` for one (field, p); returns (n, failures, reports)."""
    union = sorted({v for S in sets for v in S}, key=lambda v: v.sort_key())
    B = virtual_unit_basis(F, p, union)
    exact_sequence_report(B)
    data = None if F.is_rational else _PresentationData(F, union)
    failures = []
    reports = []
    for S in sets:
        rep = verify_theorem_main(F, p, S, basis=B, norm=norm, data=data)
        ok = rep.verdict and rep.proposition_holds
        extra = [name for name, check in checks if not check(rep, B)]
        if not ok or extra:
            failures.append(
                {
                    "field": F.spec_string(),
                    "p": p,
                    "S": [v.token for v in S],
                    "counts": [rep.relation_count, rep.cohomology_count_engine, rep.cohomology_count_oracle],
                    "failed_checks": extra,
                }
            )
        if keep_reports:
            reports.append(rep)
    return len(sets), failures, reports


def run_corpus(fields, primes, n_sets, max_places, norm_bound, seed=DEFAULT_SEED,
               norm=DEFAULT_NORMALIZATION, keep_reports=False, checks=()):
    t0 = time.perf_counter()
    total = 0
    failures = []
    reports = []
    for F in fields:
        for p in primes:
            sets = sample_sets(F, p, n_sets, max_places, norm_bound, seed)
            n, fail, reps = run_field(F, p, sets, norm, keep_reports, checks)
            total += n
            failures.extend(fail)
            reports.extend(reps)
            log.debug("%s p=%d: %d cases, %d failures", F, p, n, len(fail))
    return CorpusResult(total, failures, len(fields), time.perf_counter() - t0, reports)
