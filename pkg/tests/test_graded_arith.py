from fractions import Fraction

import pytest

from src.base_ring import BaseRing
from src.crystal_datum import CrystalDatum, cyclic_extension, group_algebra
from src.errors import DatumError, FormatError, SizeCapError
from src.graded_arith import (
    GradedElement,
    associativity_check,
    basis,
    basis_inverse,
    check_lemma_identities,
    decode_element,
    encode_element,
    enumerate_elements,
    ge_add,
    ge_mul,
    homogeneous_component,
    one,
    random_element,
    scalar,
    zero,
)
from src.group_core import cyclic


def test_addition(gaussian, f3c2):
    x = ge_add(basis(gaussian, 0), basis(gaussian, 1))
    assert encode_element(x) == [[0, 1], [1, 1]]
    assert not ge_add(x, -x)
    assert ge_add(basis(f3c2, 1, 2), basis(f3c2, 1, 1)) == zero(f3c2)


def test_gaussian_square_is_minus_one(gaussian):
    u = basis(gaussian, 1)
    assert ge_mul(u, u) == scalar(gaussian, -1)


def test_skew_conjugation_moves_past_u(skew):
    w = skew.ring.omega()
    product = ge_mul(basis(skew, 1), scalar(skew, w))
    assert product == basis(skew, 1, (0, -1))


def test_quaternion_anticommutation(quaternion):
    i, j = basis(quaternion, 1), basis(quaternion, 2)
    assert i * j == basis(quaternion, 3)
    assert j * i == -basis(quaternion, 3)


def test_quaternions_match_hamilton_oracle(quaternion, rng):
    def hamilton(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    for _ in range(50):
        p = tuple(rng.randint(-5, 5) for _ in range(4))
        q = tuple(rng.randint(-5, 5) for _ in range(4))
        x = GradedElement(quaternion, tuple(enumerate(p)))
        y = GradedElement(quaternion, tuple(enumerate(q)))
        assert ge_mul(x, y) == GradedElement(quaternion, tuple(enumerate(hamilton(p, q))))


def test_homogeneous_component(gaussian):
    x = GradedElement(gaussian, ((0, 1), (1, 2)))
    assert homogeneous_component(x, 1) == 2
    assert homogeneous_component(zero(gaussian), 1) == 0
    assert homogeneous_component(ge_mul(basis(gaussian, 1), basis(gaussian, 1)), 0) == gaussian.alpha[1][1]


def test_mixing_data_is_rejected(gaussian, f3c2):
    with pytest.raises(DatumError):
        ge_add(one(gaussian), one(f3c2))


def test_multiplication_needs_a_valid_datum():
    d = CrystalDatum(BaseRing.integer(), cyclic(2), ("identity",) * 2, ((1, 2), (1, 1)))
    with pytest.raises(DatumError):
        ge_mul(one(d), one(d))


def test_enumeration_is_complete_and_ordered(f2c2):
    elements = list(enumerate_elements(f2c2))
    assert len(elements) == f2c2.size == 4
    assert len(set(elements)) == 4
    assert elements[0] == zero(f2c2)
    assert encode_element(elements[-1]) == [[0, 1], [1, 1]]
    with pytest.raises(SizeCapError):
        list(enumerate_elements(f2c2, max_size=3))


def test_enumeration_of_infinite_ring_fails(gaussian):
    with pytest.raises(SizeCapError):
        next(enumerate_elements(gaussian))


@pytest.mark.parametrize("name", ["z4-alpha2", "f2c2", "f3c2"])
def test_associativity_exhaustive(load, name):
    report = associativity_check(load(name))
    assert report.method == "exhaustive"
    assert not report.failures


@pytest.mark.parametrize("name", ["gaussian", "quaternion", "skew-conjugation"])
def test_associativity_sampled(load, rng, name):
    report = associativity_check(load(name), rng, samples=1000)
    assert report.method == "sampled"
    assert report.triples == 1000
    assert not report.failures


def test_basis_inverses(gaussian, skew):
    assert basis_inverse(gaussian, 1) == basis(gaussian, 1, -1)
    assert basis_inverse(skew, 1) == basis(skew, 1)
    assert basis_inverse(gaussian, 0) == one(gaussian)


def test_basis_inverse_lifts_to_fraction_field():
    d = cyclic_extension(BaseRing.integer(), 2, 2)
    inv = basis_inverse(d, 1)
    assert inv.datum.ring == BaseRing.rational()
    assert inv.coefficient(1) == Fraction(1, 2)
    assert encode_element(inv) == [[1, [1, 2]]]


def test_basis_inverse_needs_crystalline(z4):
    with pytest.raises(DatumError):
        basis_inverse(z4, 1)


def test_lemma_identities_gaussian(gaussian):
    report = check_lemma_identities(gaussian, samples=[1, -1])
    assert report.passed


def test_lemma_identities_skew(skew):
    report = check_lemma_identities(skew, samples=[skew.ring.omega()])
    assert report.passed
    assert report.check("inverse_conjugation").passed


def test_lemma_identities_quaternion(quaternion):
    report = check_lemma_identities(quaternion)
    assert report.passed
    assert report.check("composed_sigma").passed


def test_lemma_identities_cyclic_family():
    d = cyclic_extension(BaseRing.quadratic(-1), 4, (3, 0))
    assert check_lemma_identities(d, samples=[(1, 2)]).passed


def test_lemma_identities_need_a_domain(f3c2):
    # F_3 is a field, so the identities are evaluated in place
    assert check_lemma_identities(f3c2).passed
    d = group_algebra(BaseRing.pair_product(3), cyclic(2))
    with pytest.raises(DatumError):
        check_lemma_identities(d)


def test_literals(gaussian):
    x = decode_element(gaussian, [[1, 1], [0, "3"], [1, 2]])
    assert encode_element(x) == [[0, 3], [1, 3]]
    with pytest.raises(FormatError):
        decode_element(gaussian, [[2, 1]])
    with pytest.raises(FormatError):
        decode_element(gaussian, "[[0, 1]]")
    with pytest.raises(FormatError):
        decode_element(gaussian, [[0]])


def test_power(gaussian):
    u = basis(gaussian, 1)
    assert u.power(4) == one(gaussian)
    assert u.power(0) == one(gaussian)


@pytest.mark.parametrize("name", ["gaussian", "quaternion", "skew-conjugation", "f3c2", "z4-alpha2"])
def test_multiplication_distributes_over_addition(load, rng, name):
    d = load(name)
    for _ in range(100):
        x, y, z = (random_element(d, rng) for _ in range(3))
        assert ge_mul(x, ge_add(y, z)) == ge_add(ge_mul(x, y), ge_mul(x, z))
        assert ge_mul(ge_add(x, y), z) == ge_add(ge_mul(x, z), ge_mul(y, z))


@pytest.mark.parametrize("name", ["gaussian", "quaternion", "skew-conjugation", "f3c2", "z4-alpha2"])
def test_products_of_homogeneous_elements_stay_in_degree(load, rng, name):
    d = load(name)
    G = d.group
    for _ in range(100):
        g, h = rng.randrange(G.order), rng.randrange(G.order)
        x = basis(d, g, d.ring.random_value(rng))
        y = basis(d, h, d.ring.random_value(rng))
        assert set(ge_mul(x, y).support) <= {G.mul(g, h)}


@pytest.mark.parametrize("name", ["gaussian", "quaternion", "skew-conjugation", "f3c2", "z4-alpha2"])
def test_one_is_a_two_sided_identity(load, rng, name):
    d = load(name)
    e = one(d)
    for _ in range(100):
        x = random_element(d, rng)
        assert ge_mul(e, x) == x
        assert ge_mul(x, e) == x
