"""Finite groups stored as validated Cayley tables.

Elements are indices 0..n-1 and the identity is always index 0.
"""
import logging
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

from src.errors import FormatError, GroupError
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Group:
    """A finite group; construction validates every group axiom."""
    table: tuple
    inverses: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        table = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", table)
        _validate_table(table)
        inverses = tuple(row.index(0) for row in table)
        object.__setattr__(self, "inverses", inverses)

    @property
    def order(self):
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def __iter__(self):
        return iter(range(len(self.table)))

    def mul(self, i, j):
        return self.table[i][j]

    def inverse(self, i):
        return self.inverses[i]

    def power(self, i, k):
        result = 0
        for _ in range(k % self.element_order(i)):
            result = self.table[result][i]
        return result

    def element_order(self, i):
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    def exponent(self):
        return lcm(*(self.element_order(i) for i in self))

    def generator(self):
        """An element generating the whole group, or None if the group is not cyclic."""
        n = self.order
        return next((i for i in self if self.element_order(i) == n), None)

    def check_index(self, *indices):
        for i in indices:
            if not isinstance(i, int) or not 0 <= i < self.order:
                raise GroupError(f"Group index {i!r} out of range for order {self.order}")

    def to_document(self):
        return {"type": "table", "table": [list(row) for row in self.table]}


def _validate_table(table):
    n = len(table)
    if n == 0:
        raise GroupError("Group table is empty")
    cap = get_settings().max_group_order
    if n > cap:
        raise GroupError(f"Group order {n} exceeds the exhaustive-validation cap of {cap}")
    for r, row in enumerate(table):
        if len(row) != n:
            raise GroupError(f"Malformed table: row {r} has {len(row)} entries, expected {n}")
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                raise GroupError(f"Malformed table: entry {x!r} in row {r} is not an index below {n}")
    full = set(range(n))
    for r in range(n):
        if set(table[r]) != full:
            raise GroupError(f"Not a Latin square: row {r} repeats an element")
        if {table[i][r] for i in range(n)} != full:
            raise GroupError(f"Not a Latin square: column {r} repeats an element")
    if any(table[0][j] != j or table[j][0] != j for j in range(n)):
        raise GroupError("Missing identity: index 0 is not a two-sided identity")
    for i in range(n):
        for j in range(n):
            ij = table[i][j]
            for k in range(n):
                if table[ij][k] != table[i][table[j][k]]:
                    raise GroupError(f"Table is not associative: ({i}, {j}, {k}) violates (ij)k = i(jk)")
    for i in range(n):
        j = table[i].index(0)
        if table[j][i] != 0:
            raise GroupError(f"Missing inverse: element {i} has no two-sided inverse")


def cyclic(n):
    if not isinstance(n, int) or n < 1:
        raise GroupError(f"Cyclic group order must be a positive integer, got {n!r}")
    return Group(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def direct_product(g, h):
    """G x H with (a, b) stored at index a*|H| + b."""
    m = h.order
    table = []
    for i in range(g.order * m):
        a1, b1 = divmod(i, m)
        table.append(tuple(g.mul(a1, j // m) * m + h.mul(b1, j % m) for j in range(g.order * m)))
    return Group(tuple(table))


def from_table(table):
    """Build a group from an explicit table, relabelling so the identity sits at index 0."""
    try:
        rows = [list(row) for row in table]
    except TypeError as exc:
        raise GroupError(f"Malformed table: {exc}") from exc
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise GroupError("Malformed table: explicit tables must be square")
    identity = next((e for e in range(n)
                     if all(rows[e][j] == j and rows[j][e] == j for j in range(n))), None)
    if identity not in (None, 0):
        swap = {0: identity, identity: 0}
        relabel = lambda x: swap.get(x, x)
        order = [relabel(i) for i in range(n)]
        rows = [[relabel(rows[order[i]][order[j]]) for j in range(n)] for i in range(n)]
        logger.debug("Relabelled explicit table: identity %d moved to index 0", identity)
    return Group(tuple(tuple(row) for row in rows))


def build_group(spec):
    """Build a group from its document form (cyclic / product / table) or pass a Group through."""
    if isinstance(spec, Group):
        return spec
    if not isinstance(spec, dict) or "type" not in spec:
        raise FormatError(f"Group spec must be an object with a 'type', got {spec!r}")
    kind = spec["type"]
    if kind == "cyclic":
        return cyclic(spec.get("order"))
    if kind == "product":
        factors = spec.get("factors") or []
        if not factors:
            raise FormatError("Product group spec needs a non-empty 'factors' list")
        return reduce(direct_product, (build_group(f) for f in factors))
    if kind == "table":
        return from_table(spec.get("table") or [])
    raise FormatError(f"Unknown group type {kind!r}")


def group_mul(group, i, j):
    group.check_index(i, j)
    return group.mul(i, j)


def group_inverse(group, i):
    group.check_index(i)
    return group.inverse(i)
