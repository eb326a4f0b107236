"""Seeded property runs over structured families of crystal data.

Trials come from families that satisfy the cocycle law by construction:

    cyclic  u**n = c with alpha(x**i, x**j) = c**((i + j) // n), c tau-invariant
    skew    alpha identically one, sigma_{x**i} = tau**i

Each trial is validated, torsion-profiled and checked for associativity.
"""
import logging
import random
from dataclasses import dataclass, field

import pandas as pd
from tqdm import tqdm

from src.base_ring import AutomorphismSpec, BaseRing
from src.crystal_datum import cyclic_extension, skew_group_ring, torsion_profile, validate_datum
from src.errors import DatumError, RingError, SizeCapError
from src.graded_arith import associativity_check
from src.group_core import Group
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

FAMILIES = ("cyclic", "skew")
MAX_FUZZ_GROUP_ORDER = 8


@dataclass(frozen=True)
class FuzzConfig:
    ring: BaseRing
    group: Group
    trials: int = 50
    family: str = "cyclic"
    automorphism: AutomorphismSpec = None


@dataclass
class FuzzSummary:
    trials: int = 0
    passed: int = 0
    cocycle_failures: int = 0
    commutation_failures: int = 0
    torsion_mismatches: int = 0
    associativity_failures: int = 0
    records: list = field(default_factory=list)

    def counters(self):
        return {
            "trials": self.trials,
            "passed": self.passed,
            "cocycle_failures": self.cocycle_failures,
            "commutation_failures": self.commutation_failures,
            "torsion_mismatches": self.torsion_mismatches,
            "associativity_failures": self.associativity_failures,
        }

    def to_frame(self):
        return pd.DataFrame(self.records)


def _check_config(config):
    if config.family not in FAMILIES:
        raise DatumError(f"Unknown fuzz family {config.family!r}; expected one of {', '.join(FAMILIES)}")
    if not config.ring.is_finite:
        raise RingError(f"Fuzzing needs a finite ring, got {config.ring}")
    if config.group.order > MAX_FUZZ_GROUP_ORDER:
        raise SizeCapError(f"Group order {config.group.order} exceeds the fuzz cap of {MAX_FUZZ_GROUP_ORDER}")
    if config.group.generator() is None:
        raise DatumError("Both fuzz families are built on a cyclic group")
    if config.automorphism is not None and not config.ring.supports(config.automorphism):
        raise RingError(f"Automorphism {config.automorphism.value} does not apply to {config.ring}")
    if config.family == "skew" and config.ring.automorphisms() == [AutomorphismSpec.IDENTITY]:
        raise RingError(f"The skew family has nothing to twist by over {config.ring}")


def _automorphism_choices(config):
    if config.automorphism is not None:
        choices = [config.automorphism]
    else:
        choices = config.ring.automorphisms()
    if config.group.order % 2:
        # an involution only gives an action of an even-order cyclic group
        choices = [s for s in choices if s is AutomorphismSpec.IDENTITY] or [AutomorphismSpec.IDENTITY]
    return choices


def _trial_datum(config, tau, c, index):
    name = f"{config.family}-{index}"
    if config.family == "cyclic":
        return cyclic_extension(config.ring, config.group, c, tau, name=name)
    x = config.group.generator()
    exponent = {config.group.power(x, i): i for i in range(config.group.order)}
    sigma = tuple(tau if exponent[g] % 2 else AutomorphismSpec.IDENTITY for g in config.group)
    return skew_group_ring(config.ring, config.group, sigma, name=name)


def fuzz_data(seed, config, progress=None):
    """Run ``config.trials`` seeded trials; every trial seed derives from ``seed``."""
    _check_config(config)
    progress = get_settings().progress if progress is None else progress
    ring = config.ring
    master = random.Random(seed)
    choices = _automorphism_choices(config)
    # c values cycle through a seeded order of the tau-invariant elements
    constants = {}
    for tau in choices:
        invariant = [x for x in ring.elements() if ring.apply_automorphism(tau, x) == x]
        master.shuffle(invariant)
        constants[tau] = invariant

    summary = FuzzSummary()
    for t in tqdm(range(config.trials), desc="fuzz", disable=not progress):
        trial_rng = random.Random(master.getrandbits(32))
        tau = trial_rng.choice(choices)
        c = constants[tau][t % len(constants[tau])] if config.family == "cyclic" else ring.one()
        d = _trial_datum(config, tau, c, t)
        report = validate_datum(d)
        summary.trials += 1
        record = {"trial": t, "family": config.family, "tau": tau.value, "c": str(ring.encode(c)),
                  "passed": report.pre_crystalline_consistent, "crystalline": report.crystalline}
        if not report.check("cocycle").passed:
            summary.cocycle_failures += 1
        if not report.check("twisted_commutation").passed:
            summary.commutation_failures += 1
        if report.pre_crystalline_consistent:
            summary.passed += 1
            profile = torsion_profile(d)
            if not profile.agreement:
                summary.torsion_mismatches += 1
            record.update({cond.name: cond.passed for cond in profile.conditions})
            record["agreement"] = profile.agreement
            assoc = associativity_check(d, trial_rng, samples=50, exhaustive_limit=64)
            if assoc.failures:
                summary.associativity_failures += 1
            record["associative"] = not assoc.failures
        summary.records.append(record)
    logger.info("Fuzzed %d %s trials over %s: %s", summary.trials, config.family, ring, summary.counters())
    return summary
