"""Exact commutative coefficient rings.

Values are plain Python objects so they hash and compare by representation:

    Integer      int
    Rational     fractions.Fraction (always reduced, positive denominator)
    Modular n    int in [0, n)
    Quadratic d  (a, b) meaning a + b*w with w**2 = d; components are int
                 over an Integer base and Fraction over a Rational base
    PairProduct  (x, y) with residues mod p, componentwise arithmetic
"""
import logging
import itertools
from enum import Enum
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint, isprime, mod_inverse

from src.errors import FormatError, RingError

logger = logging.getLogger(__name__)


class RingKind(str, Enum):
    INTEGER = "integer"
    RATIONAL = "rational"
    MODULAR = "modular"
    QUADRATIC = "quadratic"
    PAIR = "pair"


class AutomorphismSpec(str, Enum):
    """Ring automorphisms available on the supported coefficient rings."""
    IDENTITY = "identity"
    QUADRATIC_CONJUGATION = "conjugation"
    PAIR_SWAP = "swap"

    @classmethod
    def parse(cls, literal):
        aliases = {
            "identity": cls.IDENTITY, "id": cls.IDENTITY,
            "conjugation": cls.QUADRATIC_CONJUGATION,
            "quadratic_conjugation": cls.QUADRATIC_CONJUGATION,
            "swap": cls.PAIR_SWAP, "pair_swap": cls.PAIR_SWAP,
        }
        if isinstance(literal, cls):
            return literal
        key = str(literal).strip().lower()
        if key not in aliases:
            raise FormatError(f"Unknown automorphism {literal!r}")
        return aliases[key]

    def inverse(self):
        # identity and both involutions are their own inverses
        return self


def compose_automorphisms(s, t):
    """The spec of s∘t."""
    if s is AutomorphismSpec.IDENTITY:
        return t
    if t is AutomorphismSpec.IDENTITY:
        return s
    if s is t:
        return AutomorphismSpec.IDENTITY
    raise RingError(f"Cannot compose {s.value} with {t.value}: no common ring")


def inverse_automorphism(s):
    return s.inverse()


@dataclass(frozen=True)
class BaseRing:
    """Descriptor of an exact commutative ring R."""
    kind: RingKind
    modulus: int = 0
    d: int = 0
    base: RingKind = None

    def __post_init__(self):
        if self.kind is RingKind.MODULAR and self.modulus < 2:
            raise RingError(f"Modular ring needs n >= 2, got {self.modulus}")
        if self.kind is RingKind.PAIR and not isprime(self.modulus):
            raise RingError(f"PairProduct needs a prime p, got {self.modulus}")
        if self.kind is RingKind.QUADRATIC:
            if self.d in (0, 1):
                raise RingError(f"Quadratic ring needs d not in {{0, 1}}, got {self.d}")
            if any(e > 1 for e in factorint(abs(self.d)).values()):
                raise RingError(f"Quadratic ring needs square-free d, got {self.d}")
            if self.base not in (RingKind.INTEGER, RingKind.RATIONAL):
                raise RingError(f"Quadratic base must be integer or rational, got {self.base}")

    # --- constructors -------------------------------------------------

    @classmethod
    def integer(cls):
        return cls(RingKind.INTEGER)

    @classmethod
    def rational(cls):
        return cls(RingKind.RATIONAL)

    @classmethod
    def modular(cls, n):
        return cls(RingKind.MODULAR, modulus=n)

    @classmethod
    def quadratic(cls, d, base=RingKind.INTEGER):
        return cls(RingKind.QUADRATIC, d=d, base=RingKind(base))

    @classmethod
    def pair_product(cls, p):
        return cls(RingKind.PAIR, modulus=p)

    def __str__(self):
        if self.kind is RingKind.MODULAR:
            return f"Z/{self.modulus}"
        if self.kind is RingKind.PAIR:
            return f"F{self.modulus}xF{self.modulus}"
        if self.kind is RingKind.QUADRATIC:
            return f"{'Z' if self.base is RingKind.INTEGER else 'Q'}[sqrt({self.d})]"
        return "Z" if self.kind is RingKind.INTEGER else "Q"

    # --- structure queries --------------------------------------------

    @property
    def characteristic(self):
        if self.kind in (RingKind.MODULAR, RingKind.PAIR):
            return self.modulus
        return 0

    @property
    def is_finite(self):
        return self.kind in (RingKind.MODULAR, RingKind.PAIR)

    @property
    def is_domain(self):
        if self.kind is RingKind.MODULAR:
            return isprime(self.modulus)
        return self.kind is not RingKind.PAIR

    @property
    def is_field(self):
        if self.kind is RingKind.QUADRATIC:
            return self.base is RingKind.RATIONAL
        return self.kind is RingKind.RATIONAL or (self.kind is RingKind.MODULAR and isprime(self.modulus))

    @property
    def size(self):
        """Number of elements, or None for an infinite ring."""
        if self.kind is RingKind.MODULAR:
            return self.modulus
        if self.kind is RingKind.PAIR:
            return self.modulus ** 2
        return None

    # --- values ---------------------------------------------------------

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, k):
        if self.kind is RingKind.INTEGER:
            return int(k)
        if self.kind is RingKind.RATIONAL:
            return Fraction(k)
        if self.kind is RingKind.MODULAR:
            return k % self.modulus
        if self.kind is RingKind.QUADRATIC:
            return (self._base_from(k), self._base_from(0))
        return (k % self.modulus, k % self.modulus)

    def omega(self):
        if self.kind is not RingKind.QUADRATIC:
            raise RingError(f"{self} has no adjoined square root")
        return (self._base_from(0), self._base_from(1))

    def _base_from(self, x):
        return Fraction(x) if self.base is RingKind.RATIONAL else int(x)

    def contains(self, a):
        k = self.kind
        if k is RingKind.INTEGER:
            return isinstance(a, int) and not isinstance(a, bool)
        if k is RingKind.RATIONAL:
            return isinstance(a, Fraction)
        if k is RingKind.MODULAR:
            return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.modulus
        if not (isinstance(a, tuple) and len(a) == 2):
            return False
        if k is RingKind.QUADRATIC:
            kind = Fraction if self.base is RingKind.RATIONAL else int
            return all(isinstance(c, kind) and not isinstance(c, bool) for c in a)
        return all(isinstance(c, int) and 0 <= c < self.modulus for c in a)

    def check(self, *values):
        for a in values:
            if not self.contains(a):
                raise RingError(f"Value {a!r} is not an element of {self}")

    def coerce(self, a):
        """Normalize a near-miss representation (e.g. an int for a Rational) into a valid value."""
        if self.contains(a):
            return a
        k = self.kind
        try:
            if k is RingKind.INTEGER:
                return _as_int(a)
            if k is RingKind.RATIONAL:
                return Fraction(a)
            if k is RingKind.MODULAR:
                return _as_int(a) % self.modulus
            if k is RingKind.QUADRATIC:
                parts = tuple(a) if isinstance(a, (tuple, list)) else (a, 0)
                if len(parts) == 2:
                    convert = Fraction if self.base is RingKind.RATIONAL else _as_int
                    return tuple(convert(c) for c in parts)
            elif isinstance(a, (tuple, list)) and len(a) == 2:
                return tuple(_as_int(c) % self.modulus for c in a)
        except (TypeError, ValueError) as exc:
            raise RingError(f"Cannot coerce {a!r} into {self}: {exc}") from exc
        raise RingError(f"Cannot coerce {a!r} into {self}")

    # --- arithmetic -----------------------------------------------------

    def add(self, a, b):
        k = self.kind
        if k in (RingKind.INTEGER, RingKind.RATIONAL):
            return a + b
        if k is RingKind.MODULAR:
            return (a + b) % self.modulus
        if k is RingKind.QUADRATIC:
            return (a[0] + b[0], a[1] + b[1])
        p = self.modulus
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def neg(self, a):
        k = self.kind
        if k in (RingKind.INTEGER, RingKind.RATIONAL):
            return -a
        if k is RingKind.MODULAR:
            return (-a) % self.modulus
        if k is RingKind.QUADRATIC:
            return (-a[0], -a[1])
        p = self.modulus
        return ((-a[0]) % p, (-a[1]) % p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        k = self.kind
        if k in (RingKind.INTEGER, RingKind.RATIONAL):
            return a * b
        if k is RingKind.MODULAR:
            return (a * b) % self.modulus
        if k is RingKind.QUADRATIC:
            return (a[0] * b[0] + self.d * a[1] * b[1], a[0] * b[1] + a[1] * b[0])
        p = self.modulus
        return ((a[0] * b[0]) % p, (a[1] * b[1]) % p)

    def power(self, a, k):
        result = self.one()
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def is_zero(self, a):
        return a == self.zero()

    def is_one(self, a):
        return a == self.one()

    def norm(self, a):
        """Field norm a0**2 - d*a1**2 of a quadratic value."""
        return a[0] * a[0] - self.d * a[1] * a[1]

    def exact_divide(self, a, b):
        """Some q with q*b = a, or None when b does not divide a in this ring."""
        k = self.kind
        if k is RingKind.INTEGER:
            if b == 0 or a % b:
                return None
            return a // b
        if k is RingKind.RATIONAL:
            return None if b == 0 else a / b
        if k is RingKind.MODULAR:
            return next((x for x in range(self.modulus) if (x * b - a) % self.modulus == 0), None)
        if k is RingKind.QUADRATIC:
            n = self.norm(b)
            if n == 0:
                return None
            num = self.mul(a, (b[0], -b[1]))
            if self.base is RingKind.RATIONAL:
                return (num[0] / n, num[1] / n)
            if num[0] % n or num[1] % n:
                return None
            return (num[0] // n, num[1] // n)
        parts = []
        for ai, bi in zip(a, b):
            if bi:
                parts.append((ai * mod_inverse(bi, self.modulus)) % self.modulus)
            elif ai:
                return None
            else:
                parts.append(0)
        return tuple(parts)

    def try_invert(self, a):
        return self.exact_divide(self.one(), a)

    def is_unit(self, a):
        return self.try_invert(a) is not None

    def is_regular(self, a):
        """True iff a is not a zero divisor; exhaustive on finite rings."""
        if not self.is_finite:
            return not self.is_zero(a)
        zero = self.zero()
        return all(self.mul(a, x) != zero for x in self.elements() if x != zero)

    def zero_divisor_partner(self, a):
        """Nonzero x with a*x = 0, or None."""
        zero = self.zero()
        if not self.is_finite:
            return self.one() if a == zero else None
        return next((x for x in self.elements() if x != zero and self.mul(a, x) == zero), None)

    # --- automorphisms ----------------------------------------------

    def supports(self, spec):
        if spec is AutomorphismSpec.IDENTITY:
            return True
        if spec is AutomorphismSpec.QUADRATIC_CONJUGATION:
            return self.kind is RingKind.QUADRATIC
        return self.kind is RingKind.PAIR

    def automorphisms(self):
        """Every supported automorphism spec compatible with this ring."""
        return [s for s in AutomorphismSpec if self.supports(s)]

    def apply_automorphism(self, spec, a):
        if spec is AutomorphismSpec.IDENTITY:
            return a
        if not self.supports(spec):
            raise RingError(f"Automorphism {spec.value} does not apply to {self}")
        if spec is AutomorphismSpec.QUADRATIC_CONJUGATION:
            return (a[0], -a[1])
        return (a[1], a[0])

    # --- enumeration and sampling -----------------------------------

    def elements(self):
        """All elements of a finite ring in a fixed order."""
        if self.kind is RingKind.MODULAR:
            return list(range(self.modulus))
        if self.kind is RingKind.PAIR:
            return list(itertools.product(range(self.modulus), repeat=2))
        raise RingError(f"{self} is infinite and cannot be enumerated")

    def additive_generators(self):
        """Elements generating (R, +) as a group; finite rings only."""
        if self.kind is RingKind.MODULAR:
            return [1]
        if self.kind is RingKind.PAIR:
            return [(1, 0), (0, 1)]
        raise RingError(f"{self} is not finitely generated as an abelian group here")

    def generators(self):
        """Ring generators used when a check cannot quantify over every element."""
        if self.kind is RingKind.QUADRATIC:
            return [self.one(), self.omega()]
        if self.is_finite:
            return self.elements()
        return [self.one()]

    def random_value(self, rng, bound=5):
        k = self.kind
        if k is RingKind.INTEGER:
            return rng.randint(-bound, bound)
        if k is RingKind.RATIONAL:
            return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if k is RingKind.QUADRATIC:
            if self.base is RingKind.RATIONAL:
                return tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(2))
            return (rng.randint(-bound, bound), rng.randint(-bound, bound))
        return rng.choice(self.elements())

    # --- fraction field ------------------------------------------------

    def fraction_field(self):
        if not self.is_domain:
            raise RingError(f"{self} is not a domain")
        if self.kind is RingKind.INTEGER:
            return BaseRing.rational()
        if self.kind is RingKind.QUADRATIC:
            return BaseRing.quadratic(self.d, RingKind.RATIONAL)
        return self

    def embed_into(self, target, a):
        """Image of a under the canonical inclusion R -> target (its fraction field)."""
        if target == self:
            return a
        if self.kind is RingKind.INTEGER and target.kind is RingKind.RATIONAL:
            return Fraction(a)
        if self.kind is RingKind.QUADRATIC and target.kind is RingKind.QUADRATIC and target.d == self.d:
            return (Fraction(a[0]), Fraction(a[1]))
        raise RingError(f"No embedding of {self} into {target}")

    # --- literals ---------------------------------------------------

    def encode(self, a):
        k = self.kind
        if k is RingKind.RATIONAL:
            return [a.numerator, a.denominator]
        if k is RingKind.QUADRATIC:
            return [_encode_base(c) for c in a] if self.base is RingKind.RATIONAL else [int(c) for c in a]
        if k is RingKind.PAIR:
            return [a[0], a[1]]
        return int(a)

    def decode(self, literal):
        k = self.kind
        try:
            if k is RingKind.INTEGER:
                return _decode_int(literal)
            if k is RingKind.RATIONAL:
                return _decode_fraction(literal)
            if k is RingKind.MODULAR:
                return _decode_int(literal) % self.modulus
            if not (isinstance(literal, (list, tuple)) and len(literal) == 2):
                if k is RingKind.QUADRATIC and not isinstance(literal, (list, tuple)):
                    scalar = _decode_fraction(literal) if self.base is RingKind.RATIONAL else _decode_int(literal)
                    return (scalar, self._base_from(0))
                raise FormatError(f"Expected a two-entry list for {self}, got {literal!r}")
            if k is RingKind.QUADRATIC:
                if self.base is RingKind.RATIONAL:
                    return tuple(_decode_fraction(c) for c in literal)
                return tuple(_decode_int(c) for c in literal)
            return tuple(_decode_int(c) % self.modulus for c in literal)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"Bad {self} literal {literal!r}: {exc}") from exc

    def to_document(self):
        doc = {"kind": self.kind.value}
        if self.kind in (RingKind.MODULAR,):
            doc["n"] = self.modulus
        if self.kind is RingKind.PAIR:
            doc["p"] = self.modulus
        if self.kind is RingKind.QUADRATIC:
            doc["d"] = self.d
            doc["base"] = self.base.value
        return doc

    @classmethod
    def from_document(cls, doc):
        if isinstance(doc, str):
            doc = {"kind": doc}
        if not isinstance(doc, dict) or "kind" not in doc:
            raise FormatError(f"Ring spec must be an object with a 'kind', got {doc!r}")
        try:
            kind = RingKind(str(doc["kind"]).lower())
        except ValueError as exc:
            raise FormatError(f"Unknown ring kind {doc['kind']!r}") from exc
        try:
            if kind is RingKind.MODULAR:
                return cls.modular(int(doc["n"]))
            if kind is RingKind.PAIR:
                return cls.pair_product(int(doc["p"]))
            if kind is RingKind.QUADRATIC:
                return cls.quadratic(int(doc["d"]), doc.get("base", "integer"))
        except KeyError as exc:
            raise FormatError(f"Ring spec {doc!r} is missing {exc}") from exc
        except RingError:
            raise
        except (TypeError, ValueError) as exc:
            raise FormatError(f"Ring spec {doc!r} has a malformed parameter: {exc}") from exc
        return cls(kind)


def _as_int(x):
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"{x} is not an integer")
        return int(x)
    return int(x)


def _decode_int(literal):
    if isinstance(literal, bool):
        raise ValueError("booleans are not ring literals")
    if isinstance(literal, int):
        return literal
    if isinstance(literal, str):
        return int(literal.strip())
    raise ValueError(f"expected an integer, got {literal!r}")


def _decode_fraction(literal):
    if isinstance(literal, (list, tuple)):
        if len(literal) != 2:
            raise ValueError("rational literal must be [num, den]")
        return Fraction(_decode_int(literal[0]), _decode_int(literal[1]))
    if isinstance(literal, str):
        return Fraction(literal.strip())
    return Fraction(_decode_int(literal))


def _encode_base(c):
    return int(c) if c.denominator == 1 else [c.numerator, c.denominator]


# --- operation-level API -----------------------------------------------

def arith(ring, op, a, b=None):
    """Checked arithmetic: op is one of 'add', 'mul', 'neg'."""
    if op == "neg":
        ring.check(a)
        return ring.neg(a)
    if op not in ("add", "mul"):
        raise RingError(f"Unknown ring operation {op!r}")
    if b is None:
        raise RingError(f"Operation {op!r} needs two operands")
    ring.check(a, b)
    return ring.add(a, b) if op == "add" else ring.mul(a, b)


def is_regular(ring, a):
    ring.check(a)
    return ring.is_regular(a)


def try_invert(ring, a):
    ring.check(a)
    return ring.try_invert(a)


def apply_automorphism(ring, spec, a):
    ring.check(a)
    return ring.apply_automorphism(spec, a)


def enumerate_ring(ring):
    return ring.elements()
