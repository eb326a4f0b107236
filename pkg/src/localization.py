"""Fraction-field lifts, common multiples and Ore witnesses for S = reg R inside A."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from src.base_ring import RingKind
from src.crystal_datum import fraction_field_datum
from src.errors import DatumError, InvariantViolation, RingError
from src.graded_arith import GradedElement, enumerate_elements, ge_mul, scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalizedDatum:
    """A datum over Frac(R) together with the datum it was lifted from."""
    original: object
    lifted: object

    @property
    def ring(self):
        return self.lifted.ring


def to_fraction_field(d):
    if not d.ring.is_domain:
        raise RingError(f"{d.ring} is not a domain")
    lifted = fraction_field_datum(d)
    if d.report.pre_crystalline_consistent and not lifted.report.pre_crystalline_consistent:
        raise InvariantViolation("Lifting to the fraction field broke validation")
    return LocalizedDatum(d, lifted)


def lift_element(x, localized):
    src_ring, target = x.datum.ring, localized.ring
    return GradedElement(localized.lifted, tuple((g, src_ring.embed_into(target, a)) for g, a in x.terms))


def common_multiple(ring, values):
    """A nonzero s lying in R*s_i for every s_i (lcm over Z and Q, the product over quadratic rings)."""
    if not values:
        raise RingError("common_multiple needs at least one element")
    if not ring.is_domain:
        raise RingError(f"{ring} is not a domain")
    values = [ring.coerce(v) for v in values]
    if any(ring.is_zero(v) for v in values):
        raise RingError("common_multiple is undefined for a zero input")
    if ring.kind is RingKind.INTEGER:
        s = lcm(*(abs(v) for v in values))
    elif ring.kind is RingKind.RATIONAL:
        s = Fraction(lcm(*(abs(v.numerator) for v in values)),
                     reduce(gcd, (v.denominator for v in values)))
    else:
        s = reduce(ring.mul, values)
    for v in values:
        if ring.exact_divide(s, v) is None:
            raise InvariantViolation(f"common multiple {s!r} is not divisible by {v!r}")
    return s


def norm_element(d, s):
    """prod over g of sigma_g(s), taken in group order."""
    return reduce(d.ring.mul, (d.sig(g, s) for g in d.group), d.ring.one())


def _require_domain_and_nonzero(d, s):
    if not d.ring.is_domain:
        raise DatumError(f"Ore witnesses are built over a domain; {d.ring} is not one")
    if d.ring.is_zero(s):
        raise RingError("s must be a nonzero element")


def ore_witness(d, r, s):
    """Left Ore witness: (r', s') with s' r = r' s and s' = prod_g sigma_g(s)."""
    _require_domain_and_nonzero(d, s)
    ring = d.ring
    s_prime = norm_element(d, s)
    terms = []
    for g, a in r.terms:
        # b_g sigma_g(s) = s' a_g, with sigma_g(s) one of the factors of s'
        others = reduce(ring.mul, (d.sig(h, s) for h in d.group if h != g), ring.one())
        terms.append((g, ring.mul(a, others)))
    r_prime = GradedElement(d, tuple(terms))
    if ge_mul(scalar(d, s_prime), r) != ge_mul(r_prime, scalar(d, s)):
        raise InvariantViolation("left Ore witness failed s' r = r' s")
    return r_prime, s_prime


def right_ore_witness(d, r, s):
    """Right Ore witness: (r', s') with r s' = s r'."""
    _require_domain_and_nonzero(d, s)
    ring = d.ring
    s_prime = norm_element(d, s)
    terms = []
    for g, a in r.terms:
        b = ring.exact_divide(ring.mul(a, d.sig(g, s_prime)), s)
        if b is None:
            raise InvariantViolation(f"s does not divide a_{g} sigma_{g}(s')")
        terms.append((g, b))
    r_prime = GradedElement(d, tuple(terms))
    if ge_mul(r, scalar(d, s_prime)) != ge_mul(scalar(d, s), r_prime):
        raise InvariantViolation("right Ore witness failed r s' = s r'")
    return r_prime, s_prime


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    witness: GradedElement = None
    side: str = ""


def is_regular_in_A(d, a, max_size=None):
    """True iff a*u_e annihilates nothing nonzero in A on either side."""
    ring = d.ring
    a = ring.coerce(a)
    if not ring.is_finite:
        if ring.is_domain:
            return RegularityResult(not ring.is_zero(a))
        raise DatumError(f"Regularity in A is undecidable over {ring}")
    s = scalar(d, a)
    zero = GradedElement(d)

    def annihilates(x):
        if ge_mul(s, x) == zero:
            return "left"
        if ge_mul(x, s) == zero:
            return "right"
        return ""

    # annihilators are homogeneous componentwise; scan twisted components before u_e
    nonzero = [r for r in ring.elements() if not ring.is_zero(r)]
    for g in list(d.group)[1:] + [0]:
        for r in nonzero:
            x = GradedElement(d, ((g, r),))
            side = annihilates(x)
            if side:
                return RegularityResult(False, x, side)
    for x in enumerate_elements(d, max_size):
        side = annihilates(x) if x else ""
        if side:
            return RegularityResult(False, x, side)
    return RegularityResult(True)


def is_central_in_A(d, a):
    """a*u_e commutes with every u_g (and hence, R being commutative, with all of A)."""
    s = scalar(d, d.ring.coerce(a))
    return all(ge_mul(s, GradedElement(d, ((g, d.ring.one()),))) ==
               ge_mul(GradedElement(d, ((g, d.ring.one()),)), s) for g in d.group)


def regular_set_sigma_invariant(d):
    """Every sigma_g maps reg R into reg R (finite rings: exhaustive; domains: automatic)."""
    ring = d.ring
    if not ring.is_finite:
        return True
    return all(ring.is_regular(d.sig(g, a)) for a in ring.elements() if ring.is_regular(a) for g in d.group)
