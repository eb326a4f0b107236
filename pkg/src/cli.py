"""Batch command line: load data files, run a computation, print a report.

Exit codes: 0 when the command ran (a "false" verdict is still 0), 2 for
malformed files or arguments, 1 when a result failed its own re-verification.
"""
import sys
import json
import logging
import argparse
from dataclasses import dataclass, field

import pandas as pd

from src.base_ring import BaseRing, AutomorphismSpec
from src.crystal_datum import (
    fraction_field_datum,
    mutation_scan,
    replay_witness,
    torsion_profile,
    validate_datum,
)
from src.data_io import DataManager, canonical_json, fingerprint
from src.errors import CrystalError, FormatError, InvariantViolation
from src.fuzzing import FAMILIES, FuzzConfig, fuzz_data
from src.graded_arith import basis_inverse, check_lemma_identities, decode_element, encode_element, ge_mul
from src.group_core import build_group
from src.localization import ore_witness, right_ore_witness
from src.maschke import (
    averaging_projection,
    check_a_linear,
    decode_projection,
    split_submodule,
    validate_module,
)
from src.semiprime_lab import is_semiprime_finite, maschke_sweep, nilpotent_witness, verify_witness
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


@dataclass
class Report:
    command: list
    fingerprint: str = ""
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    exit_status: int = 0

    def to_document(self):
        return {
            "command": self.command,
            "fingerprint": self.fingerprint,
            "checks": self.checks,
            "summary": self.summary,
            "tables": self.tables,
            "exit_status": self.exit_status,
        }

    def to_json(self):
        return json.dumps(self.to_document(), sort_keys=True, indent=2)

    def render_text(self):
        lines = [f"command: {' '.join(self.command)}"]
        if self.fingerprint:
            lines.append(f"fingerprint: {self.fingerprint}")
        if self.checks:
            frame = pd.DataFrame([{
                "check": c["name"],
                "passed": c["passed"],
                "witness": canonical_json(c["witness"]) if c.get("witness") is not None else "",
            } for c in self.checks])
            lines.append(frame.to_string(index=False))
        for key in sorted(self.summary):
            lines.append(f"{key}: {canonical_json(self.summary[key])}")
        for name in sorted(self.tables):
            lines.append(f"[{name}]")
            lines.append(pd.DataFrame(self.tables[name]).to_string(index=False))
        lines.append(f"exit status: {self.exit_status}")
        return "\n".join(lines)


def _check_doc(result, ring):
    return {
        "name": result.name,
        "passed": bool(result.passed),
        "witness": result.witness.to_document(ring) if result.witness is not None else None,
        "detail": result.detail,
    }


def _flag(name, value, detail=""):
    return {"name": name, "passed": bool(value), "witness": None, "detail": detail}


def _literal(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if what == "ring value":
            return text
        raise FormatError(f"Could not parse {what} {text!r} as JSON")


def parse_ring_option(text):
    """'integer', 'rational', 'modular:4', 'pair:2', 'quadratic:-1' or 'quadratic:-1:rational'."""
    parts = text.split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "modular":
            return BaseRing.modular(int(parts[1]))
        if kind == "pair":
            return BaseRing.pair_product(int(parts[1]))
        if kind == "quadratic":
            return BaseRing.quadratic(int(parts[1]), parts[2] if len(parts) > 2 else "integer")
    except (IndexError, ValueError) as exc:
        raise FormatError(f"Bad ring option {text!r}") from exc
    return BaseRing.from_document({"kind": kind})


def parse_group_option(text):
    """'cyclic:n' or 'product:n1,n2,...'."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "cyclic":
            return build_group({"type": "cyclic", "order": int(rest)})
        if kind == "product":
            factors = [{"type": "cyclic", "order": int(n)} for n in rest.split(",")]
            return build_group({"type": "product", "factors": factors})
    except ValueError as exc:
        raise FormatError(f"Bad group option {text!r}") from exc
    raise FormatError(f"Unknown group option {text!r}; use cyclic:n or product:n1,n2")


def _records(frame):
    """DataFrame rows as plain JSON-compatible dicts."""
    return json.loads(frame.to_json(orient="records"))


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise FormatError(f"Expected a comma-separated list of integers, got {text!r}") from exc


# --- commands ------------------------------------------------------------

def _load(ctx, name):
    d, _ = ctx.data.load_datum(name)
    return d, fingerprint(d.to_document())


def _samples(ctx, d):
    if ctx.args.samples is None:
        return ()
    raw = _literal(ctx.args.samples, "sample list")
    if not isinstance(raw, list):
        raise FormatError("--samples must be a JSON list of ring literals")
    return tuple(d.ring.decode(x) for x in raw)


def run_validate(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    report = validate_datum(d, _samples(ctx, d))
    for w in report.witnesses():
        if not replay_witness(d, w):
            raise InvariantViolation(f"Witness {w} does not replay")
    checks = [_check_doc(c, d.ring) for c in report.checks]
    summary = {
        "pre_crystalline": report.pre_crystalline_consistent,
        "centrally_consistent": report.centrally_consistent,
        "crystalline": report.crystalline,
        "failures": len(report.failures()),
    }
    if report.central_witness is not None:
        summary["central_witness"] = report.central_witness.to_document(d.ring)
    if report.regularity_witness is not None:
        summary["regularity_witness"] = report.regularity_witness.to_document(d.ring)
    return Report(ctx.argv, fp, checks, summary)


def run_torsion(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    profile = torsion_profile(d)
    for c in profile.conditions:
        if c.witness is not None and not replay_witness(d, c.witness):
            raise InvariantViolation(f"Torsion witness {c.witness} does not replay")
    checks = [_check_doc(c, d.ring) for c in profile.conditions]
    summary = {"agreement": profile.agreement, "reg_sigma_invariant": profile.reg_sigma_invariant}
    return Report(ctx.argv, fp, checks, summary)


def run_mul(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    x = decode_element(d, _literal(ctx.args.x, "element"))
    y = decode_element(d, _literal(ctx.args.y, "element"))
    product = ge_mul(x, y)
    return Report(ctx.argv, fp, [], {"product": encode_element(product)})


def run_inverse(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    g = ctx.args.g
    d.group.check_index(g)
    inv = basis_inverse(d, g)
    summary = {"g": g, "inverse": encode_element(inv), "ring": str(inv.datum.ring)}
    return Report(ctx.argv, fp, [_flag("two_sided_inverse", True)], summary)


def run_lemma(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    lemma = check_lemma_identities(d, _samples(ctx, d))
    ring = fraction_field_datum(d).ring
    checks = [_check_doc(c, ring) for c in lemma.checks]
    return Report(ctx.argv, fp, checks, {"passed": lemma.passed, "ring": str(ring)})


def run_ore(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    r = decode_element(d, _literal(ctx.args.r, "element"))
    s = d.ring.decode(_literal(ctx.args.s, "ring value"))
    build = right_ore_witness if ctx.args.right else ore_witness
    r_prime, s_prime = build(d, r, s)
    equation = "r s' = s r'" if ctx.args.right else "s' r = r' s"
    summary = {"r_prime": encode_element(r_prime), "s_prime": d.ring.encode(s_prime),
               "side": "right" if ctx.args.right else "left"}
    return Report(ctx.argv, fp, [_flag("ore_equation", True, equation)], summary)


def run_maschke(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    M = ctx.data.load_module(d, ctx.args.module)
    ring = M.ring
    report = validate_module(M)
    checks = [_check_doc(c, ring) for c in report.checks]
    summary = {"valid": report.passed, "rank": M.rank,
               "hypotheses": {c.name: bool(c.passed) for c in report.hypotheses}}
    encode = lambda m: [[ring.encode(x) for x in row] for row in m]
    if ctx.args.projection is not None:
        P = decode_projection(M, _literal(ctx.args.projection, "matrix"))
        linear = check_a_linear(M, P.matrix)
        summary["projection_a_linear"] = linear.holds
        if linear.witness is not None:
            summary["projection_witness"] = list(linear.witness)
        lam = averaging_projection(M, P)
        summary["lambda"] = encode(lam)
        checks.append(_flag("lambda_a_linear", check_a_linear(M, lam).holds))
    elif ctx.args.submodule is not None:
        projection = split_submodule(M, _literal(ctx.args.submodule, "submodule"), ctx.settings.max_size)
        summary["projection"] = encode(projection.matrix)
        checks.append(_flag("projection_a_linear", check_a_linear(M, projection.matrix).holds))
    return Report(ctx.argv, fp, checks, summary)


def run_semiprime(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    cap = ctx.settings.max_size
    verdict = is_semiprime_finite(d, cap, ctx.settings.progress)
    nilpotent = nilpotent_witness(d, cap)
    checks = []
    if verdict.witness is not None:
        checks.append(_flag("witness_reverified", verify_witness(d, verdict.witness, cap)))
    summary = {
        "semiprime": verdict.semiprime,
        "witness": None if verdict.witness is None else encode_element(verdict.witness),
        "nilpotent": None if nilpotent is None else encode_element(nilpotent),
        "method": verdict.method,
        "char_divides_order": verdict.char_divides_order,
        "crystalline": verdict.crystalline,
        "ring_reduced": verdict.ring_reduced,
    }
    return Report(ctx.argv, fp, checks, summary)


def run_fuzz(ctx):
    args = ctx.args
    ring = parse_ring_option(args.ring)
    group = parse_group_option(args.group)
    automorphism = AutomorphismSpec.parse(args.automorphism) if args.automorphism else None
    config = FuzzConfig(ring, group, ctx.settings.trials, args.family, automorphism)
    summary = fuzz_data(ctx.settings.seed, config, ctx.settings.progress)
    fp = fingerprint({"ring": ring.to_document(), "group": group.to_document(), "family": args.family,
                      "automorphism": automorphism.value if automorphism else None,
                      "seed": ctx.settings.seed, "trials": config.trials})
    checks = [
        _flag("cocycle", summary.cocycle_failures == 0),
        _flag("twisted_commutation", summary.commutation_failures == 0),
        _flag("associativity", summary.associativity_failures == 0),
    ]
    return Report(ctx.argv, fp, checks, dict(summary.counters(), seed=ctx.settings.seed),
                  {"trials": summary.records})


def run_fixtures(ctx):
    frame = ctx.data.list_fixtures()
    return Report(ctx.argv, "", [], {"count": len(frame)}, {"fixtures": _records(frame)})


def run_sweep(ctx):
    primes, orders = _int_list(ctx.args.primes), _int_list(ctx.args.orders)
    frame = maschke_sweep(primes, orders, ctx.settings.max_size, ctx.settings.progress)
    checks = [_flag(f"F{row['p']}[C{row['q']}]", row["agrees"]) for row in _records(frame)]
    fp = fingerprint({"primes": list(primes), "orders": list(orders)})
    summary = {"cells": len(frame), "agreeing": int(frame["agrees"].sum())}
    return Report(ctx.argv, fp, checks, summary, {"sweep": _records(frame)})


def run_mutate(ctx):
    d, fp = _load(ctx, ctx.args.datum)
    count = 100 if ctx.args.trials is None else ctx.args.trials
    scan = mutation_scan(d, ctx.settings.seed, count)
    summary = {
        "count": scan.count,
        "detected": scan.detected,
        "replayed": scan.replayed,
        "undetected": [list(w) for w in scan.undetected],
        "seed": ctx.settings.seed,
    }
    checks = [_flag("witness_replay", scan.replayed == scan.detected)]
    return Report(ctx.argv, fp, checks, summary)


COMMANDS = {
    "validate": run_validate,
    "torsion": run_torsion,
    "mul": run_mul,
    "inverse": run_inverse,
    "lemma14": run_lemma,
    "identities": run_lemma,
    "ore": run_ore,
    "maschke": run_maschke,
    "semiprime": run_semiprime,
    "fuzz": run_fuzz,
    "fixtures": run_fixtures,
    "sweep": run_sweep,
    "mutate": run_mutate,
}


# --- parsing and dispatch -------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit the machine-readable report")
    common.add_argument("--seed", type=int, default=None, help="Master seed for randomised commands")
    common.add_argument("--trials", type=int, default=None, help="Trial count for fuzz and mutate")
    common.add_argument("--max-size", type=int, default=None, help="Cap on |A| for exhaustive work")
    common.add_argument("--out", default=None, help="Directory to save the report as JSON and CSV")
    common.add_argument("--log-level", default=None, help="Logging level (default: CRYSTAL_LOG_LEVEL)")
    common.add_argument("--progress", action="store_true", default=None, help="Show progress bars")

    parser = argparse.ArgumentParser(prog="crystal", description="Experiment with crystalline graded rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, aliases=()):
        return sub.add_parser(name, parents=[common], help=help_text, aliases=list(aliases))

    p = add("validate", "Validate a datum")
    p.add_argument("datum")
    p.add_argument("--samples", default=None, help="JSON list of extra ring values for twisted commutation")

    p = add("torsion", "Evaluate the torsion conditions")
    p.add_argument("datum")

    p = add("mul", "Multiply two graded elements")
    p.add_argument("datum")
    p.add_argument("x")
    p.add_argument("y")

    p = add("inverse", "Invert a basis element u_g")
    p.add_argument("datum")
    p.add_argument("g", type=int)

    p = add("lemma14", "Check the basis-inverse identities over the fraction field", aliases=["identities"])
    p.add_argument("datum")
    p.add_argument("--samples", default=None, help="JSON list of ring values to test against")

    p = add("ore", "Build an Ore witness for (r, s)")
    p.add_argument("datum")
    p.add_argument("r")
    p.add_argument("s")
    p.add_argument("--right", action="store_true", help="Right Ore condition instead of left")

    p = add("maschke", "Validate a module and average a projection")
    p.add_argument("datum")
    p.add_argument("module")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--projection", default=None, help="JSON matrix of an R-linear idempotent")
    group.add_argument("--submodule", default=None, help="JSON list of row vectors spanning N")

    p = add("semiprime", "Exhaustive semiprimeness test")
    p.add_argument("datum")

    p = add("fuzz", "Seeded property run over a datum family")
    p.add_argument("--ring", default="modular:4")
    p.add_argument("--group", default="cyclic:2")
    p.add_argument("--family", choices=FAMILIES, default="cyclic")
    p.add_argument("--automorphism", default=None)

    add("fixtures", "List bundled fixtures")

    p = add("sweep", "Semiprimeness of F_p[C_q] over a grid")
    p.add_argument("--primes", default="2,3,5")
    p.add_argument("--orders", default="2,3,4")

    p = add("mutate", "Single-entry alpha corruption scan")
    p.add_argument("datum")
    return parser


@dataclass
class Context:
    argv: list
    args: argparse.Namespace
    settings: object
    data: DataManager


def execute(argv):
    """
    Run one command without printing.

    Parameters:
        argv: command line arguments, without the program name

    Returns:
        tuple: (exit code, Report); 0 when the command ran, 2 for bad input, 1 for a failed self-check
    """
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = 0 if exc.code in (0, None) else 2
        return code, Report(argv, summary={"error": "usage"} if code else {}, exit_status=code)

    settings = get_settings().override(
        max_size=args.max_size,
        seed=args.seed,
        trials=args.trials,
        log_level=args.log_level.upper() if args.log_level else None,
        progress=args.progress,
    )
    try:
        logging.getLogger("src").setLevel(settings.log_level)
    except ValueError:
        logger.error("Unknown log level %r", settings.log_level)
        return 2, Report(argv, summary={"error": f"unknown log level {settings.log_level}"}, exit_status=2)
    ctx = Context(argv, args, settings, DataManager())
    try:
        report = COMMANDS[args.command](ctx)
    except InvariantViolation as exc:
        logger.error("Internal re-verification failed: %s", exc)
        return 1, Report(argv, summary={"error": str(exc)}, exit_status=1)
    except CrystalError as exc:
        logger.error("%s", exc)
        return 2, Report(argv, summary={"error": str(exc)}, exit_status=2)

    if args.out:
        ctx.data.save_report(report.to_document(), report.checks, args.out, args.command)
    return 0, report


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    logging.basicConfig(
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    code, report = execute(argv)
    wants_json = "--json" in argv
    print(report.to_json() if wants_json else report.render_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
