"""The datum (R, G, sigma, alpha) behind a pre-crystalline graded ring.

A = sum over g of R*u_g with u_g r = sigma_g(r) u_g and u_g u_h = alpha(g,h) u_gh.
Validation evaluates the consequences of the pre-crystalline axioms and
returns every outcome as data; torsion profiling evaluates the four
decidable torsion-freeness conditions side by side.
"""
import logging
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product

from src.base_ring import AutomorphismSpec, BaseRing, compose_automorphisms
from src.errors import CrystalError, DatumError, FormatError
from src.group_core import Group, build_group, cyclic, direct_product

logger = logging.getLogger(__name__)

CHECK_NAMES = (
    "sigma_identity",
    "cocycle",
    "twisted_commutation",
    "normalization",
    "inverse_normalization",
)


@dataclass(frozen=True)
class CrystalDatum:
    """The tuple (R, G, sigma, alpha); alpha[g][h] = alpha(g, h)."""
    ring: BaseRing
    group: Group
    sigma: tuple
    alpha: tuple
    samples: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.group.order
        sigma = tuple(AutomorphismSpec.parse(s) for s in self.sigma)
        if len(sigma) != n:
            raise DatumError(f"sigma has {len(sigma)} entries for a group of order {n}")
        for g, s in enumerate(sigma):
            if not self.ring.supports(s):
                raise DatumError(f"sigma[{g}] = {s.value} does not apply to {self.ring}")
        rows = [tuple(row) for row in self.alpha]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise DatumError(f"alpha must be a {n}x{n} table")
        try:
            alpha = tuple(tuple(self.ring.coerce(v) for v in row) for row in rows)
            samples = tuple(self.ring.coerce(v) for v in self.samples)
        except CrystalError as exc:
            raise DatumError(f"alpha entry outside {self.ring}: {exc}") from exc
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "samples", samples)

    # u_g r = sigma_g(r) u_g
    def sig(self, g, r):
        return self.ring.apply_automorphism(self.sigma[g], r)

    def sig_inv(self, g, r):
        return self.ring.apply_automorphism(self.sigma[g].inverse(), r)

    @property
    def order(self):
        return self.group.order

    @property
    def size(self):
        """|A| = |R|**|G|, or None when R is infinite."""
        if not self.ring.is_finite:
            return None
        return self.ring.size ** self.group.order

    @cached_property
    def report(self):
        return validate_datum(self)

    def with_alpha(self, g, h, value):
        rows = [list(row) for row in self.alpha]
        rows[g][h] = value
        return replace(self, alpha=tuple(tuple(r) for r in rows))

    def with_ring(self, ring):
        """The same datum with every coefficient pushed into ``ring`` (the fraction field)."""
        embed = lambda v: self.ring.embed_into(ring, v)
        return CrystalDatum(
            ring=ring,
            group=self.group,
            sigma=self.sigma,
            alpha=tuple(tuple(embed(v) for v in row) for row in self.alpha),
            samples=tuple(embed(v) for v in self.samples),
            name=self.name,
        )

    def to_document(self):
        doc = {
            "ring": self.ring.to_document(),
            "group": self.group.to_document(),
            "sigma": [s.value for s in self.sigma],
            "alpha": [[self.ring.encode(v) for v in row] for row in self.alpha],
        }
        if self.samples:
            doc["samples"] = [self.ring.encode(v) for v in self.samples]
        return doc

    @classmethod
    def from_document(cls, doc, name=""):
        if not isinstance(doc, dict):
            raise FormatError("A datum document must be a JSON object")
        missing = [k for k in ("ring", "group", "sigma", "alpha") if k not in doc]
        if missing:
            raise FormatError(f"Datum document is missing {', '.join(missing)}")
        ring = BaseRing.from_document(doc["ring"])
        group = build_group(doc["group"])
        if not isinstance(doc["alpha"], list) or not all(isinstance(r, list) for r in doc["alpha"]):
            raise FormatError("'alpha' must be a list of lists of ring literals")
        if not isinstance(doc["sigma"], list):
            raise FormatError("'sigma' must be a list of automorphism names")
        return cls(
            ring=ring,
            group=group,
            sigma=tuple(AutomorphismSpec.parse(s) for s in doc["sigma"]),
            alpha=tuple(tuple(ring.decode(v) for v in row) for row in doc["alpha"]),
            samples=tuple(ring.decode(v) for v in doc.get("samples", [])),
            name=name or doc.get("name", ""),
        )


@dataclass(frozen=True)
class Witness:
    """Concrete evidence for a failed check: group indices plus an optional ring element."""
    check: str
    indices: tuple
    value: object = None

    def to_document(self, ring):
        doc = {"check": self.check, "indices": list(self.indices)}
        if self.value is not None:
            doc["value"] = ring.encode(self.value)
        return doc


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Witness = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    pre_crystalline_consistent: bool
    centrally_consistent: bool
    crystalline: bool
    central_witness: Witness = None
    regularity_witness: Witness = None

    def check(self, name):
        return next(c for c in self.checks if c.name == name)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def witnesses(self):
        found = [c.witness for c in self.checks if c.witness is not None]
        return found + [w for w in (self.central_witness, self.regularity_witness) if w is not None]


@dataclass(frozen=True)
class TorsionProfile:
    condition3: CheckResult
    condition4: CheckResult
    condition5: CheckResult
    condition6: CheckResult
    agreement: bool
    reg_sigma_invariant: bool

    @property
    def conditions(self):
        return (self.condition3, self.condition4, self.condition5, self.condition6)


# --- validation ---------------------------------------------------------

def commutation_samples(d, extra=()):
    """Ring elements on which twisted commutation is evaluated: all of R when finite, generators otherwise."""
    if d.ring.is_finite:
        return d.ring.elements()
    values = list(d.ring.generators())
    for v in tuple(d.samples) + tuple(d.ring.coerce(x) for x in extra):
        if v not in values:
            values.append(v)
    return values


def _first(name, candidates):
    """CheckResult for the first violation produced by ``candidates``, if any."""
    for witness in candidates:
        return CheckResult(name, False, witness)
    return CheckResult(name, True)


def _cocycle_violations(d):
    ring, G = d.ring, d.group
    for g, h, t in product(G, repeat=3):
        lhs = ring.mul(d.alpha[g][h], d.alpha[G.mul(g, h)][t])
        rhs = ring.mul(d.sig(g, d.alpha[h][t]), d.alpha[g][G.mul(h, t)])
        if lhs != rhs:
            yield Witness("cocycle", (g, h, t))


def _commutation_violations(d, samples):
    ring, G = d.ring, d.group
    for g, h in product(G, repeat=2):
        a = d.alpha[g][h]
        gh = G.mul(g, h)
        for r in samples:
            if ring.mul(d.sig(g, d.sig(h, r)), a) != ring.mul(a, d.sig(gh, r)):
                yield Witness("twisted_commutation", (g, h), r)
                break


def _normalization_violations(d):
    one = d.ring.one()
    for g in d.group:
        if d.alpha[g][0] != one or d.alpha[0][g] != one:
            yield Witness("normalization", (g,))


def _inverse_normalization_violations(d):
    for g in d.group:
        gi = d.group.inverse(g)
        if d.alpha[g][gi] != d.sig(g, d.alpha[gi][g]):
            yield Witness("inverse_normalization", (g,))


def _central_violations(d):
    G = d.group
    for g, h in product(G, repeat=2):
        try:
            composed = compose_automorphisms(d.sigma[g], d.sigma[h])
        except CrystalError:
            composed = None
        if composed is not d.sigma[G.mul(g, h)]:
            yield Witness("central", (g, h))


def _irregular_alpha(d):
    for g, h in product(d.group, repeat=2):
        if not d.ring.is_regular(d.alpha[g][h]):
            yield Witness("alpha_regular", (g, h), d.alpha[g][h])


def validate_datum(d, samples=()):
    """
    Evaluate every pre-crystalline consequence on a datum.

    Parameters:
        d: CrystalDatum to check
        samples: extra ring values for twisted commutation (used when R is infinite)

    Returns:
        ValidationReport: one CheckResult per check; failures carry replayable witnesses
    """
    if not isinstance(d, CrystalDatum):
        raise DatumError(f"Expected a CrystalDatum, got {type(d).__name__}")
    if not d.ring.is_finite:
        logger.warning("Twisted commutation on %s is checked on generators and samples only", d.ring)
    sigma_ok = d.sigma[0] is AutomorphismSpec.IDENTITY
    checks = (
        CheckResult("sigma_identity", sigma_ok, None if sigma_ok else Witness("sigma_identity", (0,))),
        _first("cocycle", _cocycle_violations(d)),
        _first("twisted_commutation", _commutation_violations(d, commutation_samples(d, samples))),
        _first("normalization", _normalization_violations(d)),
        _first("inverse_normalization", _inverse_normalization_violations(d)),
    )
    pre = all(c.passed for c in checks)
    central = next(_central_violations(d), None)
    irregular = next(_irregular_alpha(d), None)
    report = ValidationReport(
        checks=checks,
        pre_crystalline_consistent=pre,
        centrally_consistent=central is None,
        crystalline=pre and irregular is None,
        central_witness=central,
        regularity_witness=irregular,
    )
    logger.debug("Validated %s: %s", d.name or d.ring, {c.name: c.passed for c in checks})
    return report


def replay_witness(d, witness):
    """True iff the violation described by ``witness`` still holds on d."""
    ring, G = d.ring, d.group
    idx = witness.indices
    if witness.check == "sigma_identity":
        return d.sigma[0] is not AutomorphismSpec.IDENTITY
    if witness.check == "cocycle":
        g, h, t = idx
        lhs = ring.mul(d.alpha[g][h], d.alpha[G.mul(g, h)][t])
        return lhs != ring.mul(d.sig(g, d.alpha[h][t]), d.alpha[g][G.mul(h, t)])
    if witness.check == "twisted_commutation":
        g, h = idx
        a, r = d.alpha[g][h], witness.value
        return ring.mul(d.sig(g, d.sig(h, r)), a) != ring.mul(a, d.sig(G.mul(g, h), r))
    if witness.check == "normalization":
        (g,) = idx
        return d.alpha[g][0] != ring.one() or d.alpha[0][g] != ring.one()
    if witness.check == "inverse_normalization":
        (g,) = idx
        gi = G.inverse(g)
        return d.alpha[g][gi] != d.sig(g, d.alpha[gi][g])
    if witness.check == "central":
        return any(w.indices == idx for w in _central_violations(d))
    if witness.check == "alpha_regular":
        g, h = idx
        return not ring.is_regular(d.alpha[g][h])
    if witness.check in ("condition3", "condition4"):
        g, h = idx
        r = witness.value
        return not ring.is_zero(r) and ring.is_zero(ring.mul(d.alpha[g][h], r))
    if witness.check == "condition5":
        (g,) = idx
        if witness.value is None:
            return any(d.sig_inv(g, d.sig(g, x)) != x for x in ring.generators())
        return not ring.is_zero(witness.value) and ring.is_zero(d.sig(g, witness.value))
    if witness.check == "condition6":
        (g,) = idx
        if witness.value is None:
            return any(d.sig(g, d.sig_inv(g, x)) != x for x in ring.generators())
        return witness.value not in {d.sig(g, x) for x in ring.elements()}
    raise DatumError(f"Unknown witness kind {witness.check!r}")


# --- torsion-freeness ----------------------------------------------------

def _annihilated(ring, a):
    """Nonzero r with a*r = 0, or None."""
    return ring.zero_divisor_partner(a)


def torsion_profile(d):
    """Evaluate the four decidable torsion conditions independently and report whether they agree."""
    ring, G = d.ring, d.group
    if not (ring.is_finite or ring.is_domain):
        raise DatumError(f"Torsion conditions are undecidable over {ring}")
    if not d.report.pre_crystalline_consistent:
        raise DatumError("Torsion profiling needs a datum passing the pre-crystalline checks")

    def cond3():
        for g in G:
            r = _annihilated(ring, d.alpha[g][G.inverse(g)])
            if r is not None:
                return CheckResult("condition3", False, Witness("condition3", (g, G.inverse(g)), r))
        return CheckResult("condition3", True)

    def cond4():
        for g, h in product(G, repeat=2):
            r = _annihilated(ring, d.alpha[g][h])
            if r is not None:
                return CheckResult("condition4", False, Witness("condition4", (g, h), r))
        return CheckResult("condition4", True)

    def cond5():
        zero = ring.zero()
        if ring.is_finite:
            for g in G:
                r = next((x for x in ring.elements() if x != zero and d.sig(g, x) == zero), None)
                if r is not None:
                    return CheckResult("condition5", False, Witness("condition5", (g,), r))
            return CheckResult("condition5", True)
        for g in G:
            if any(d.sig_inv(g, d.sig(g, x)) != x for x in ring.generators()):
                return CheckResult("condition5", False, Witness("condition5", (g,)))
        return CheckResult("condition5", True, detail="checked on generators")

    def cond6():
        if ring.is_finite:
            elements = ring.elements()
            for g in G:
                image = {d.sig(g, x) for x in elements}
                if len(image) != len(elements):
                    missing = next(x for x in elements if x not in image)
                    return CheckResult("condition6", False, Witness("condition6", (g,), missing))
            return CheckResult("condition6", True)
        for g in G:
            if any(d.sig(g, d.sig_inv(g, x)) != x for x in ring.generators()):
                return CheckResult("condition6", False, Witness("condition6", (g,)))
        return CheckResult("condition6", True, detail="checked on generators")

    c3, c4, c5, c6 = cond3(), cond4(), cond5(), cond6()
    agreement = len({c.passed for c in (c3, c4, c5, c6)}) == 1
    if not agreement:
        logger.warning("Torsion conditions disagree on %s: %s", d.name or ring,
                       {c.name: c.passed for c in (c3, c4, c5, c6)})
    if ring.is_finite:
        regular = [a for a in ring.elements() if ring.is_regular(a)]
        invariant = all(ring.is_regular(d.sig(g, a)) for g in G for a in regular)
    else:
        invariant = True
    return TorsionProfile(c3, c4, c5, c6, agreement, invariant)


# --- standard data -------------------------------------------------------

def group_algebra(ring, group, name=""):
    """R[G]: trivial action, alpha identically one."""
    n = group.order
    one = ring.one()
    return CrystalDatum(ring, group, (AutomorphismSpec.IDENTITY,) * n,
                        tuple((one,) * n for _ in range(n)), name=name)


def skew_group_ring(ring, group, sigma, name=""):
    """R*G with twisting sigma and alpha identically one."""
    n = group.order
    one = ring.one()
    return CrystalDatum(ring, group, tuple(sigma), tuple((one,) * n for _ in range(n)), name=name)


def cyclic_extension(ring, group, c, tau=AutomorphismSpec.IDENTITY, generator=None, name=""):
    """The cyclic family u**n = c: alpha(x**i, x**j) = c**((i + j) // n), sigma_{x**i} = tau**i.

    ``group`` may be an order n or a cyclic Group; ``generator`` picks x (default: first generator).
    """
    if isinstance(group, int):
        group = cyclic(group)
    x = group.generator() if generator is None else generator
    if x is None or group.element_order(x) != group.order:
        raise DatumError("The cyclic family needs a cyclic group and a generator")
    n = group.order
    exponent = {group.power(x, i): i for i in range(n)}
    tau_pow = lambda i: AutomorphismSpec.IDENTITY if i % 2 == 0 else tau
    if tau is not AutomorphismSpec.IDENTITY and n % 2:
        raise DatumError(f"An involution cannot give an action of a cyclic group of odd order {n}")
    c = ring.coerce(c)
    if ring.apply_automorphism(tau, c) != c:
        raise DatumError("The cyclic family needs a tau-invariant constant c")
    sigma = tuple(tau_pow(exponent[g]) for g in group)
    alpha = tuple(tuple(ring.power(c, (exponent[g] + exponent[h]) // n) for h in group) for g in group)
    return CrystalDatum(ring, group, sigma, alpha, name=name)


def quaternion_datum(ring=None, name="quaternion"):
    """Lipschitz quaternions over the Klein four-group: u_a = i, u_b = j, u_ab = k."""
    ring = ring or BaseRing.integer()
    klein = direct_product(cyclic(2), cyclic(2))
    table = [[1, 1, 1, 1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, -1, -1]]
    alpha = tuple(tuple(ring.from_int(v) for v in row) for row in table)
    return CrystalDatum(ring, klein, (AutomorphismSpec.IDENTITY,) * 4, alpha, name=name)


def fraction_field_datum(d):
    """d over Frac(R); returns d itself when R is already a field."""
    field_ring = d.ring.fraction_field()
    return d if field_ring == d.ring else d.with_ring(field_ring)


# --- mutation testing -------------------------------------------------------

def corrupt_alpha(d, rng):
    """A copy of d with one alpha entry replaced by a different ring value; returns (datum, (g, h))."""
    n = d.group.order
    g, h = rng.randrange(n), rng.randrange(n)
    old = d.alpha[g][h]
    if d.ring.is_finite:
        value = rng.choice([x for x in d.ring.elements() if x != old])
    else:
        value = old
        while value == old:
            value = d.ring.random_value(rng)
    return d.with_alpha(g, h, value), (g, h)


@dataclass(frozen=True)
class MutationSummary:
    count: int
    detected: int
    replayed: int
    undetected: tuple


def mutation_scan(d, seed=0, count=100):
    """Corrupt single alpha entries of d and count how many validation rejects."""
    rng = random.Random(seed)
    detected = replayed = 0
    undetected = []
    for _ in range(count):
        mutant, where = corrupt_alpha(d, rng)
        report = validate_datum(mutant)
        if report.pre_crystalline_consistent:
            undetected.append(where)
            continue
        detected += 1
        if all(replay_witness(mutant, c.witness) for c in report.failures()):
            replayed += 1
    logger.info("Mutation scan: %d/%d detected, %d witnesses replayed", detected, count, replayed)
    return MutationSummary(count, detected, replayed, tuple(undetected))
