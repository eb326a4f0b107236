import random
from fractions import Fraction

import pytest

from src.base_ring import (
    AutomorphismSpec,
    BaseRing,
    RingKind,
    arith,
    compose_automorphisms,
    enumerate_ring,
    is_regular,
    try_invert,
)
from src.errors import FormatError, RingError

Z = BaseRing.integer()
Q = BaseRing.rational()
GAUSS = BaseRing.quadratic(-1)
Z4 = BaseRing.modular(4)
F3 = BaseRing.modular(3)
PAIR2 = BaseRing.pair_product(2)


def test_quadratic_product_uses_d():
    # (1 + w)(1 - w) = 1 - w**2 = 2 for d = -1
    assert arith(GAUSS, "mul", (1, 1), (1, -1)) == (2, 0)
    assert arith(GAUSS, "mul", GAUSS.omega(), GAUSS.omega()) == (-1, 0)


def test_modular_wraps_around():
    assert arith(Z4, "add", 3, 3) == 2
    assert arith(Z4, "mul", 2, 2) == 0
    assert arith(Z4, "neg", 1) == 3


def test_pair_product_is_componentwise():
    assert arith(PAIR2, "mul", (1, 0), (0, 1)) == (0, 0)
    assert arith(PAIR2, "add", (1, 1), (1, 0)) == (0, 1)


def test_kind_mismatch_raises():
    with pytest.raises(RingError):
        arith(Z4, "add", 1, (1, 0))
    with pytest.raises(RingError):
        arith(Z, "mul", Fraction(1, 2), 1)


def test_unknown_operation():
    with pytest.raises(RingError):
        arith(Z, "div", 1, 2)


@pytest.mark.parametrize("ring, value, expected", [
    (Z4, 2, False),
    (Z4, 3, True),
    (PAIR2, (1, 0), False),
    (PAIR2, (1, 1), True),
    (Z, 0, False),
    (Z, -7, True),
    (GAUSS, (0, 0), False),
    (GAUSS, (1, 1), True),
])
def test_regularity(ring, value, expected):
    assert is_regular(ring, value) is expected


def test_inverses():
    assert try_invert(Z, 2) is None
    assert try_invert(Z, -1) == -1
    assert try_invert(Q, Fraction(2, 3)) == Fraction(3, 2)
    assert try_invert(Z4, 3) == 3
    assert try_invert(Z4, 2) is None
    assert try_invert(GAUSS, (0, 1)) == (0, -1)
    assert try_invert(GAUSS, (1, 1)) is None
    assert try_invert(PAIR2, (1, 1)) == (1, 1)


def test_exact_divide_over_gaussian_integers():
    # (3 + w) / (1 + w) = 2 - w
    assert GAUSS.exact_divide((3, 1), (1, 1)) == (2, -1)
    assert GAUSS.exact_divide((1, 0), (2, 0)) is None


def test_automorphisms():
    conj = AutomorphismSpec.QUADRATIC_CONJUGATION
    assert GAUSS.apply_automorphism(conj, (3, 4)) == (3, -4)
    assert PAIR2.apply_automorphism(AutomorphismSpec.PAIR_SWAP, (1, 0)) == (0, 1)
    with pytest.raises(RingError):
        Z4.apply_automorphism(conj, 1)


def test_automorphism_composition():
    swap = AutomorphismSpec.PAIR_SWAP
    assert compose_automorphisms(swap, swap) is AutomorphismSpec.IDENTITY
    assert compose_automorphisms(AutomorphismSpec.IDENTITY, swap) is swap
    with pytest.raises(RingError):
        compose_automorphisms(swap, AutomorphismSpec.QUADRATIC_CONJUGATION)


def test_automorphism_aliases():
    assert AutomorphismSpec.parse("PAIR_SWAP") is AutomorphismSpec.PAIR_SWAP
    assert AutomorphismSpec.parse("id") is AutomorphismSpec.IDENTITY
    with pytest.raises(FormatError):
        AutomorphismSpec.parse("frobenius")


def test_enumeration_order():
    assert enumerate_ring(Z4) == [0, 1, 2, 3]
    assert enumerate_ring(PAIR2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(RingError):
        enumerate_ring(Z)


def test_construction_rejects_bad_parameters():
    with pytest.raises(RingError):
        BaseRing.modular(1)
    with pytest.raises(RingError):
        BaseRing.pair_product(4)
    with pytest.raises(RingError):
        BaseRing.quadratic(4)
    with pytest.raises(RingError):
        BaseRing.quadratic(1)


def test_structure_queries():
    assert F3.is_field and F3.is_domain
    assert not Z4.is_domain
    assert not PAIR2.is_domain
    assert Z.is_domain and not Z.is_field
    assert Z4.characteristic == 4 and Z.characteristic == 0
    assert PAIR2.size == 4 and Z.size is None


def test_fraction_field():
    assert Z.fraction_field() == Q
    frac = GAUSS.fraction_field()
    assert frac.kind is RingKind.QUADRATIC and frac.base is RingKind.RATIONAL
    assert GAUSS.embed_into(frac, (1, 2)) == (Fraction(1), Fraction(2))
    with pytest.raises(RingError):
        Z4.fraction_field()


def test_literals():
    assert Q.decode("3/4") == Fraction(3, 4)
    assert Q.decode([3, 4]) == Fraction(3, 4)
    assert Q.encode(Fraction(3, 4)) == [3, 4]
    assert Z.decode("-5") == -5
    assert Z4.decode(7) == 3
    assert GAUSS.decode(2) == (2, 0)
    assert GAUSS.fraction_field().encode((Fraction(1, 2), Fraction(3))) == [[1, 2], 3]
    with pytest.raises(FormatError):
        Z.decode(True)
    with pytest.raises(FormatError):
        PAIR2.decode([1, 0, 1])


def test_ring_documents():
    for ring in (Z, Q, GAUSS, Z4, PAIR2, BaseRing.quadratic(2, "rational")):
        assert BaseRing.from_document(ring.to_document()) == ring
    with pytest.raises(FormatError):
        BaseRing.from_document({"kind": "octonion"})
    with pytest.raises(FormatError):
        BaseRing.from_document({"kind": "modular"})


PROPERTY_RINGS = [Z, Q, GAUSS, BaseRing.quadratic(2, "rational"), Z4, F3, PAIR2, BaseRing.pair_product(3)]


@pytest.mark.parametrize("ring", PROPERTY_RINGS, ids=str)
def test_ring_axioms_on_seeded_samples(ring):
    rng = random.Random(1729)
    for _ in range(200):
        a, b, c = (ring.random_value(rng) for _ in range(3))
        assert arith(ring, "add", a, b) == arith(ring, "add", b, a)
        assert arith(ring, "mul", a, b) == arith(ring, "mul", b, a)
        assert arith(ring, "mul", arith(ring, "mul", a, b), c) == arith(ring, "mul", a, arith(ring, "mul", b, c))
        assert arith(ring, "add", arith(ring, "add", a, b), c) == arith(ring, "add", a, arith(ring, "add", b, c))
        assert arith(ring, "mul", a, arith(ring, "add", b, c)) == \
            arith(ring, "add", arith(ring, "mul", a, b), arith(ring, "mul", a, c))


@pytest.mark.parametrize("ring", PROPERTY_RINGS, ids=str)
def test_inverses_multiply_to_one(ring):
    rng = random.Random(31)
    values = ring.elements() if ring.is_finite else [ring.random_value(rng) for _ in range(200)]
    for a in values:
        b = try_invert(ring, a)
        if b is not None:
            assert ring.mul(a, b) == ring.one()


@pytest.mark.parametrize("ring", PROPERTY_RINGS, ids=str)
def test_automorphisms_are_ring_maps(ring):
    rng = random.Random(5)
    for spec in ring.automorphisms():
        assert ring.apply_automorphism(spec, ring.zero()) == ring.zero()
        assert ring.apply_automorphism(spec, ring.one()) == ring.one()
        for _ in range(100):
            a, b = ring.random_value(rng), ring.random_value(rng)
            image = lambda x: ring.apply_automorphism(spec, x)
            assert image(ring.add(a, b)) == ring.add(image(a), image(b))
            assert image(ring.mul(a, b)) == ring.mul(image(a), image(b))


@pytest.mark.parametrize("doc", [
    {"kind": "modular", "n": "four"},
    {"kind": "pair", "p": None},
    {"kind": "quadratic", "d": -1, "base": "complex"},
])
def test_malformed_ring_parameters_are_format_errors(doc):
    with pytest.raises(FormatError):
        BaseRing.from_document(doc)
