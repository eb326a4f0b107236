import random

import pytest

from src.base_ring import AutomorphismSpec, BaseRing
from src.crystal_datum import cyclic_extension, group_algebra, skew_group_ring
from src.errors import RingError, SizeCapError
from src.graded_arith import basis, encode_element, one
from src.group_core import cyclic
from src.semiprime_lab import (
    char_divides_order,
    is_semiprime_finite,
    maschke_sweep,
    nilpotency_index,
    nilpotent_witness,
    ring_is_reduced,
    verify_witness,
)


def test_f2c2_is_not_semiprime(f2c2):
    verdict = is_semiprime_finite(f2c2)
    assert not verdict.semiprime
    assert encode_element(verdict.witness) == [[0, 1], [1, 1]]
    assert verdict.char_divides_order
    assert verify_witness(f2c2, verdict.witness)


def test_f3c2_is_semiprime(f3c2):
    verdict = is_semiprime_finite(f3c2)
    assert verdict.semiprime
    assert verdict.witness is None
    assert not verdict.char_divides_order


def test_z4_twist_is_not_semiprime(z4):
    verdict = is_semiprime_finite(z4)
    assert not verdict.semiprime
    assert verdict.witness == basis(z4, 0, 2)
    assert not verdict.ring_reduced
    assert not verdict.crystalline


def test_pair_product_group_algebra_is_semiprime():
    d = group_algebra(BaseRing.pair_product(3), cyclic(2))
    verdict = is_semiprime_finite(d)
    assert verdict.semiprime
    assert verdict.ring_reduced


def test_infinite_rings_are_rejected(gaussian):
    with pytest.raises(RingError):
        is_semiprime_finite(gaussian)


def test_size_cap(f3c2):
    with pytest.raises(SizeCapError):
        is_semiprime_finite(f3c2, max_size=8)


def test_verify_witness_rejects_non_witnesses(f3c2, f2c2):
    assert not verify_witness(f3c2, one(f3c2))
    assert not verify_witness(f2c2, basis(f2c2, 0, 0))


def test_reduced_rings():
    assert ring_is_reduced(BaseRing.modular(5))
    assert ring_is_reduced(BaseRing.pair_product(2))
    assert not ring_is_reduced(BaseRing.modular(8))


def test_char_divides_order(f2c2, f3c2, gaussian):
    assert char_divides_order(f2c2)
    assert not char_divides_order(f3c2)
    assert not char_divides_order(gaussian)


def test_nilpotent_witnesses(f2c2, f3c2):
    x = nilpotent_witness(f2c2)
    assert x is not None
    assert nilpotency_index(x, f2c2.size) == 2
    assert nilpotent_witness(f3c2) is None
    assert nilpotency_index(one(f3c2), 10) is None


def test_sweep_agrees_with_characteristic():
    frame = maschke_sweep(primes=(2, 3, 5), orders=(2, 3, 4))
    assert len(frame) == 9
    assert frame["agrees"].all()
    row = frame[(frame["p"] == 2) & (frame["q"] == 4)].iloc[0]
    assert not row["semiprime"]
    assert row["witness"]
    assert frame[frame["p"] == 5]["semiprime"].all()


def test_first_nilpotent_of_z4_is_two(z4):
    assert nilpotent_witness(z4) == basis(z4, 0, 2)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("q", [2, 3, 4])
def test_nilpotent_free_group_algebras_are_semiprime(p, q):
    d = group_algebra(BaseRing.modular(p), cyclic(q))
    verdict = is_semiprime_finite(d)
    # commutative, so semiprime means reduced
    assert (nilpotent_witness(d) is None) == verdict.semiprime


@pytest.mark.parametrize("d", [
    skew_group_ring(BaseRing.pair_product(3), cyclic(2), ("identity", "swap")),
    cyclic_extension(BaseRing.modular(3), 2, 2),
    cyclic_extension(BaseRing.modular(5), 4, 3),
], ids=["F3xF3-swap", "F3-u2-is-2", "F5-u4-is-3"])
def test_twisted_crystalline_data_are_semiprime(d):
    verdict = is_semiprime_finite(d)
    assert verdict.crystalline and verdict.ring_reduced and not verdict.char_divides_order
    assert verdict.semiprime


def _cyclic_family(rng, rings, orders, per_cell=2):
    for ring in rings:
        for q in orders:
            if ring.size ** q > 625:
                continue
            for tau in ring.automorphisms():
                if tau is not AutomorphismSpec.IDENTITY and q % 2:
                    continue
                constants = [c for c in ring.elements()
                             if ring.is_regular(c) and ring.apply_automorphism(tau, c) == c]
                for c in rng.sample(constants, min(per_cell, len(constants))):
                    yield cyclic_extension(ring, q, c, tau)


def test_crystalline_over_reduced_rings_without_bad_characteristic_are_semiprime():
    rng = random.Random(20240611)
    rings = [BaseRing.modular(2), BaseRing.modular(3), BaseRing.modular(5),
             BaseRing.pair_product(2), BaseRing.pair_product(3), BaseRing.pair_product(5)]
    checked = 0
    for d in _cyclic_family(rng, rings, orders=(2, 3, 4)):
        verdict = is_semiprime_finite(d)
        if verdict.ring_reduced and verdict.crystalline and not verdict.char_divides_order:
            assert verdict.semiprime, d
            checked += 1
    assert checked >= 10
