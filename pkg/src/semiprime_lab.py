"""Exhaustive semiprimeness tests on finite graded rings.

A is semiprime iff x.A.x = 0 forces x = 0. Since a -> x.a.x is additive, it
is enough to let a run over r.u_g with r running through additive generators
of R; any witness found that way is re-checked against every element of A.
"""
import json
import logging
from dataclasses import dataclass

import pandas as pd
from tqdm import tqdm

from src.base_ring import BaseRing
from src.crystal_datum import group_algebra
from src.errors import InvariantViolation, RingError, SizeCapError
from src.graded_arith import GradedElement, encode_element, enumerate_elements, ge_mul
from src.group_core import cyclic
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemiprimeVerdict:
    semiprime: bool
    witness: GradedElement = None
    method: str = "exhaustive"
    char_divides_order: bool = False
    crystalline: bool = False
    ring_reduced: bool = True


def _require_finite(d, max_size):
    if not d.ring.is_finite:
        raise RingError(f"Semiprimeness is only decided exhaustively; {d.ring} is infinite")
    cap = max_size or get_settings().max_size
    if d.size > cap:
        raise SizeCapError(f"|A| = {d.size} exceeds the cap of {cap}")
    return cap


def char_divides_order(d):
    p = d.ring.characteristic
    return p > 0 and d.group.order % p == 0


def ring_is_reduced(ring):
    """No nonzero nilpotent in R (finite rings)."""
    zero = ring.zero()
    for a in ring.elements():
        if a == zero:
            continue
        x, seen = a, set()
        while x != zero and x not in seen:
            seen.add(x)
            x = ring.mul(x, a)
        if x == zero:
            return False
    return True


def _spanning_set(d):
    return [GradedElement(d, ((g, r),)) for g in d.group for r in d.ring.additive_generators()]


def _kills(x, spanning):
    return all(not ge_mul(ge_mul(x, a), x) for a in spanning)


def verify_witness(d, x, max_size=None):
    """x is nonzero and x.a.x = 0 for every a in A."""
    if not x:
        return False
    return all(not ge_mul(ge_mul(x, a), x) for a in enumerate_elements(d, max_size))


def is_semiprime_finite(d, max_size=None, progress=None):
    """
    Decide semiprimeness of a finite A by exhaustive search.

    Parameters:
        d: CrystalDatum over a finite ring
        max_size: cap on |A| (defaults to CRYSTAL_MAX_SIZE)
        progress: show a tqdm bar (defaults to CRYSTAL_PROGRESS)

    Returns:
        SemiprimeVerdict: the verdict, the first witness x with xAx = 0 if any, and hypothesis flags
    """
    cap = _require_finite(d, max_size)
    progress = get_settings().progress if progress is None else progress
    spanning = _spanning_set(d)
    witness = None
    candidates = tqdm(enumerate_elements(d, cap), total=d.size, desc="semiprime", disable=not progress)
    for x in candidates:
        if x and _kills(x, spanning):
            witness = x
            break
    if witness is not None and not verify_witness(d, witness, cap):
        raise InvariantViolation(f"Semiprime witness {witness!r} failed exhaustive re-verification")
    verdict = SemiprimeVerdict(
        semiprime=witness is None,
        witness=witness,
        char_divides_order=char_divides_order(d),
        crystalline=d.report.crystalline,
        ring_reduced=ring_is_reduced(d.ring),
    )
    logger.debug("Semiprime test on %s: %s", d.name or d.ring, verdict.semiprime)
    return verdict


def nilpotency_index(x, limit):
    """Smallest k with x**k = 0, or None if powers repeat (or exceed ``limit``) first."""
    seen = set()
    power, k = x, 1
    while power and k <= limit:
        if power in seen:
            return None
        seen.add(power)
        power = ge_mul(power, x)
        k += 1
    return k if not power else None


def nilpotent_witness(d, max_size=None):
    """First nonzero nilpotent element of A in enumeration order, or None."""
    cap = _require_finite(d, max_size)
    for x in enumerate_elements(d, cap):
        if x and nilpotency_index(x, d.size) is not None:
            return x
    return None


def maschke_sweep(primes=(2, 3, 5), orders=(2, 3, 4), max_size=None, progress=None):
    """Semiprimeness of F_p[C_q] over the grid, next to the expected answer p does not divide q."""
    progress = get_settings().progress if progress is None else progress
    rows = []
    grid = [(p, q) for p in primes for q in orders]
    for p, q in tqdm(grid, desc="sweep", disable=not progress):
        d = group_algebra(BaseRing.modular(p), cyclic(q), name=f"F{p}[C{q}]")
        verdict = is_semiprime_finite(d, max_size)
        expected = q % p != 0
        rows.append({
            "p": p,
            "q": q,
            "char_divides_order": verdict.char_divides_order,
            "semiprime": verdict.semiprime,
            "expected": expected,
            "agrees": verdict.semiprime == expected,
            "witness": None if verdict.witness is None else json.dumps(encode_element(verdict.witness)),
        })
    frame = pd.DataFrame(rows)
    logger.info("Sweep over %d group algebras: %d agree", len(frame), int(frame["agrees"].sum()))
    return frame
