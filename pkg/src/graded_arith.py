"""Arithmetic in A = sum over g of R*u_g, and the basis-inverse identities.

Elements are sparse: a sorted tuple of (group index, nonzero coefficient)
pairs, so equality by representation is equality in A.
"""
import logging
from dataclasses import dataclass
from itertools import combinations, product

from src.crystal_datum import CheckResult, Witness, fraction_field_datum
from src.errors import DatumError, FormatError, InvariantViolation, SizeCapError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GradedElement:
    """sum of a_g u_g over the support; ``terms`` never stores a zero coefficient."""
    datum: object
    terms: tuple = ()

    def __post_init__(self):
        ring, n = self.datum.ring, self.datum.group.order
        merged = {}
        for g, a in self.terms:
            if not isinstance(g, int) or not 0 <= g < n:
                raise DatumError(f"Group index {g!r} out of range for order {n}")
            merged[g] = ring.add(merged[g], a) if g in merged else a
        zero = ring.zero()
        object.__setattr__(self, "terms", tuple(sorted((g, a) for g, a in merged.items() if a != zero)))

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.terms == other.terms and _same_datum(self.datum, other.datum)

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        return ge_add(self, other)

    def __sub__(self, other):
        return ge_add(self, -other)

    def __neg__(self):
        ring = self.datum.ring
        return GradedElement(self.datum, tuple((g, ring.neg(a)) for g, a in self.terms))

    def __mul__(self, other):
        return ge_mul(self, other)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GradedElement({encode_element(self)})"

    @property
    def support(self):
        return tuple(g for g, _ in self.terms)

    def coefficient(self, g):
        return dict(self.terms).get(g, self.datum.ring.zero())

    def power(self, k):
        result = one(self.datum)
        for _ in range(k):
            result = ge_mul(result, self)
        return result


def _same_datum(d1, d2):
    return d1 is d2 or d1 == d2


# --- constructors -----------------------------------------------------------

def zero(d):
    return GradedElement(d, ())


def one(d):
    return GradedElement(d, ((0, d.ring.one()),))


def basis(d, g, coefficient=None):
    """coefficient * u_g (default coefficient 1)."""
    c = d.ring.one() if coefficient is None else coefficient
    return GradedElement(d, ((g, c),))


def scalar(d, r):
    """r * u_e."""
    return GradedElement(d, ((0, r),))


def from_components(d, coefficients):
    """Element with coefficient list indexed by group element."""
    return GradedElement(d, tuple(enumerate(coefficients)))


# --- arithmetic --------------------------------------------------------------

def _require_same(x, y):
    if not _same_datum(x.datum, y.datum):
        raise DatumError("Operands belong to different crystal data")


def ge_add(x, y):
    _require_same(x, y)
    return GradedElement(x.datum, x.terms + y.terms)


def ge_mul(x, y):
    """(a u_g)(b u_h) = a sigma_g(b) alpha(g,h) u_gh, extended bilinearly."""
    _require_same(x, y)
    d = x.datum
    if not d.report.pre_crystalline_consistent:
        raise DatumError("Multiplication needs a datum that passed validation")
    ring, G = d.ring, d.group
    acc = {}
    for g, a in x.terms:
        for h, b in y.terms:
            c = ring.mul(ring.mul(a, d.sig(g, b)), d.alpha[g][h])
            gh = G.mul(g, h)
            acc[gh] = ring.add(acc[gh], c) if gh in acc else c
    return GradedElement(d, tuple(acc.items()))


def homogeneous_component(x, g):
    x.datum.group.check_index(g)
    return x.coefficient(g)


# --- enumeration -------------------------------------------------------------

def enumerate_elements(d, max_size=None):
    """Every element of a finite A: zero first, then by support size, support, coefficients."""
    size = d.size
    if size is None:
        raise SizeCapError(f"A over {d.ring} is infinite")
    if max_size is not None and size > max_size:
        raise SizeCapError(f"|A| = {size} exceeds the cap of {max_size}")
    ring = d.ring
    nonzero = [r for r in ring.elements() if r != ring.zero()]
    yield zero(d)
    for k in range(1, d.group.order + 1):
        for support in combinations(range(d.group.order), k):
            for coefficients in product(nonzero, repeat=k):
                yield GradedElement(d, tuple(zip(support, coefficients)))


def random_element(d, rng, bound=5):
    return GradedElement(d, tuple((g, d.ring.random_value(rng, bound))
                                  for g in d.group if rng.random() < 0.7))


@dataclass(frozen=True)
class AssociativityReport:
    method: str
    triples: int
    failures: tuple


def associativity_check(d, rng=None, samples=1000, exhaustive_limit=256):
    """(xy)z = x(yz): exhaustive for finite A up to ``exhaustive_limit`` elements, sampled otherwise."""
    size = d.size
    if size is not None and size <= exhaustive_limit:
        elements = list(enumerate_elements(d))
        triples = product(elements, repeat=3)
        method, total = "exhaustive", size ** 3
    else:
        if rng is None:
            raise DatumError("Sampled associativity checks need a seeded rng")
        triples = ((random_element(d, rng), random_element(d, rng), random_element(d, rng))
                   for _ in range(samples))
        method, total = "sampled", samples
    failures = []
    for x, y, z in triples:
        if ge_mul(ge_mul(x, y), z) != ge_mul(x, ge_mul(y, z)):
            failures.append((x, y, z))
            if len(failures) >= 5:
                break
    return AssociativityReport(method, total, tuple(failures))


# --- inverses and identities --------------------------------------------

def _require_crystalline(d):
    if not d.report.crystalline:
        raise DatumError("Datum is not crystalline: some alpha value is not regular")


def _inverse_datum(d):
    """The datum in which u_g inverses live: d when every alpha is a unit, else d over Frac(R)."""
    ring = d.ring
    if all(ring.is_unit(a) for row in d.alpha for a in row):
        return d
    if not ring.is_domain:
        raise DatumError(f"alpha values are not units and {ring} has no fraction field")
    return fraction_field_datum(d)


def basis_inverse(d, g):
    """u_g^{-1} = u_{g^{-1}} alpha(g, g^{-1})^{-1}, built in the datum where it exists."""
    _require_crystalline(d)
    d.group.check_index(g)
    k = _inverse_datum(d)
    ring, gi = k.ring, k.group.inverse(g)
    c = ring.try_invert(k.alpha[g][gi])
    v = basis(k, gi, k.sig(gi, c))
    u = basis(k, g)
    if ge_mul(u, v) != one(k) or ge_mul(v, u) != one(k):
        raise InvariantViolation(f"basis_inverse({g}) failed to invert u_{g}")
    return v


@dataclass(frozen=True)
class LemmaReport:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)


def _identity_result(name, violations):
    for witness in violations:
        return CheckResult(name, False, witness)
    return CheckResult(name, True)


def check_lemma_identities(d, samples=()):
    """Evaluate both sides of the basis-inverse identities over Frac(R) for every g, h and sample x."""
    _require_crystalline(d)
    if not d.ring.is_domain:
        raise DatumError(f"The identities are stated over a domain; {d.ring} is not one")
    k = fraction_field_datum(d)
    ring, G = k.ring, k.group
    inv = {g: basis_inverse(k, g) for g in G}
    xs = [d.ring.embed_into(ring, d.ring.coerce(x)) for x in samples] or list(ring.generators())

    def inverse_forms():
        # u_{g^-1} alpha^{-1}(g, g^-1) and alpha^{-1}(g^-1, g) u_{g^-1} must agree
        for g in G:
            gi = G.inverse(g)
            right = ge_mul(basis(k, gi), scalar(k, ring.try_invert(k.alpha[g][gi])))
            left = basis(k, gi, ring.try_invert(k.alpha[gi][g]))
            if right != left or right != inv[g]:
                yield Witness("inverse_forms", (g,))

    def conjugation():
        for g in G:
            for x in xs:
                lhs = ge_mul(scalar(k, k.sig_inv(g, x)), inv[g])
                rhs = ge_mul(inv[g], scalar(k, x))
                if lhs != rhs:
                    yield Witness("inverse_conjugation", (g,), x)

    def composed_sigma():
        for h, g in product(G, repeat=2):
            a = k.alpha[h][g]
            if k.sig_inv(G.mul(h, g), a) != k.sig_inv(g, k.sig_inv(h, a)):
                yield Witness("composed_sigma", (h, g))

    def shifted_alpha():
        for g, h in product(G, repeat=2):
            gi = G.inverse(g)
            lhs = k.sig_inv(g, k.alpha[g][G.mul(gi, h)])
            rhs = ring.mul(ring.try_invert(k.alpha[gi][h]), k.sig_inv(g, k.alpha[g][gi]))
            if lhs != rhs:
                yield Witness("shifted_alpha", (g, h))

    def shifted_alpha_relation():
        # alpha(g, g^-1) alpha(e, h) = sigma_g(alpha(g^-1, h)) alpha(g, g^-1 h)
        for g, h in product(G, repeat=2):
            gi = G.inverse(g)
            lhs = ring.mul(k.alpha[g][gi], k.alpha[0][h])
            rhs = ring.mul(k.sig(g, k.alpha[gi][h]), k.alpha[g][G.mul(gi, h)])
            if lhs != rhs:
                yield Witness("shifted_alpha_relation", (g, h))

    checks = (
        _identity_result("inverse_forms", inverse_forms()),
        _identity_result("inverse_conjugation", conjugation()),
        _identity_result("composed_sigma", composed_sigma()),
        _identity_result("shifted_alpha", shifted_alpha()),
        _identity_result("shifted_alpha_relation", shifted_alpha_relation()),
    )
    return LemmaReport(checks)


# --- literals --------------------------------------------------------------

def encode_element(x):
    return [[g, x.datum.ring.encode(a)] for g, a in x.terms]


def decode_element(d, literal):
    """Parse [[g, ring literal], ...] into an element of A."""
    if not isinstance(literal, list):
        raise FormatError(f"Graded element literal must be a list of [index, value] pairs, got {literal!r}")
    terms = []
    for entry in literal:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], int)):
            raise FormatError(f"Bad graded term {entry!r}; expected [index, value]")
        if not 0 <= entry[0] < d.group.order:
            raise FormatError(f"Group index {entry[0]} out of range for order {d.group.order}")
        terms.append((entry[0], d.ring.decode(entry[1])))
    return GradedElement(d, tuple(terms))
