"""Finite-rank right A-modules given by semilinear action matrices, and the
averaging operator that turns an R-linear projection onto an A-submodule
into an A-linear one.

Vectors are rows. The right action of u_g is

    phi_g(v) = sigma_g^{-1}(v) . U_g

with sigma applied entrywise, and r in R acts by scaling every entry.
"""
import logging
from dataclasses import dataclass
from itertools import product

from src.crystal_datum import CheckResult, Witness, group_algebra
from src.base_ring import BaseRing
from src.errors import FormatError, InvariantViolation, ModuleError, SizeCapError
from src.group_core import cyclic, direct_product
from src.utils import linalg
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 8
MAX_RANK = 6


@dataclass(frozen=True)
class SemilinearModule:
    """R^m with u_g acting through ``actions[g]``."""
    datum: object
    rank: int
    actions: tuple

    def __post_init__(self):
        ring, n, m = self.datum.ring, self.datum.group.order, self.rank
        if not isinstance(m, int) or m < 0:
            raise ModuleError(f"Module rank must be a non-negative integer, got {m!r}")
        if len(self.actions) != n:
            raise ModuleError(f"Expected {n} action matrices, got {len(self.actions)}")
        actions = []
        for g, u in enumerate(self.actions):
            if not linalg.is_square(u, m):
                raise ModuleError(f"U_{g} is not a {m}x{m} matrix")
            actions.append(tuple(tuple(ring.coerce(x) for x in row) for row in u))
        object.__setattr__(self, "actions", tuple(actions))

    @property
    def ring(self):
        return self.datum.ring

    def basis(self):
        return [linalg.unit_vector(self.ring, self.rank, i) for i in range(self.rank)]


@dataclass(frozen=True)
class SubmoduleProjection:
    """An R-linear map v -> v.P whose image is the submodule N."""
    ring: BaseRing
    matrix: tuple

    @property
    def is_idempotent(self):
        return linalg.mat_mul(self.ring, self.matrix, self.matrix) == self.matrix

    def image_spanning_set(self):
        return [row for row in self.matrix if not linalg.is_zero_vector(self.ring, row)]


@dataclass(frozen=True)
class ModuleReport:
    """Validation checks, plus hypothesis flags that are reported but do not fail validation."""
    checks: tuple
    hypotheses: tuple = ()

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        return next(c for c in self.checks + self.hypotheses if c.name == name)

    def failures(self):
        return [c for c in self.checks if not c.passed]


@dataclass(frozen=True)
class LinearityResult:
    """Outcome of an A-linearity or A-stability test; ``witness`` is (g, basis index)."""
    holds: bool
    witness: tuple = None

    def __bool__(self):
        return self.holds


# --- the action ------------------------------------------------------

def act(M, g, v):
    """phi_g(v) = sigma_g^{-1}(v) . U_g."""
    d = M.datum
    return linalg.vec_mat(M.ring, tuple(d.sig_inv(g, x) for x in v), M.actions[g])


def act_inverse(M, g, w, u_inv=None):
    """phi_g^{-1}(w) = sigma_g(w . U_g^{-1})."""
    d = M.datum
    u_inv = u_inv or _invert(M, g)
    return tuple(d.sig(g, x) for x in linalg.vec_mat(M.ring, w, u_inv))


def act_element(M, v, x):
    """v . x for x = sum of a_g u_g in A, i.e. sum over g of phi_g(v a_g)."""
    ring = M.ring
    out = tuple(ring.zero() for _ in range(M.rank))
    for g, a in x.terms:
        out = linalg.vec_add(ring, out, act(M, g, linalg.vec_scale(ring, v, a)))
    return out


def _invert(M, g):
    u_inv = linalg.inverse(M.ring, M.actions[g])
    if u_inv is None:
        raise ModuleError(f"U_{g} is not invertible over {M.ring}")
    return u_inv


def _check_caps(M):
    if M.datum.group.order > MAX_GROUP_ORDER:
        raise SizeCapError(f"|G| = {M.datum.group.order} exceeds the module cap of {MAX_GROUP_ORDER}")
    if M.rank > MAX_RANK:
        raise SizeCapError(f"Rank {M.rank} exceeds the module cap of {MAX_RANK}")


# --- validation ------------------------------------------------------

def validate_module(M):
    """Check U_e = I, compatibility for every pair and invertibility of every U_g."""
    _check_caps(M)
    d, ring, G = M.datum, M.ring, M.datum.group
    report = d.report
    units = all(ring.is_unit(a) for row in d.alpha for a in row)

    ident = M.actions[0] == linalg.identity(ring, M.rank)
    singular = next((g for g in G if ring.try_invert(linalg.determinant(ring, M.actions[g])) is None), None)

    def incompatible():
        # sigma_h^{-1}(U_g) U_h = sigma_gh^{-1}(alpha(g,h)) U_gh
        for g, h in product(G, repeat=2):
            gh = G.mul(g, h)
            lhs = linalg.mat_mul(ring, linalg.map_entries(lambda x: d.sig_inv(h, x), M.actions[g]), M.actions[h])
            rhs = linalg.mat_scale(ring, d.sig_inv(gh, d.alpha[g][h]), M.actions[gh])
            if lhs != rhs:
                return g, h
        return None

    bad_pair = incompatible()
    checks = (
        CheckResult("datum_crystalline", report.crystalline),
        CheckResult("alpha_units", units),
        CheckResult("central_action", report.centrally_consistent, report.central_witness),
        CheckResult("identity_action", ident, None if ident else Witness("identity_action", (0,))),
        CheckResult("compatibility", bad_pair is None,
                    None if bad_pair is None else Witness("compatibility", bad_pair)),
        CheckResult("invertible", singular is None,
                    None if singular is None else Witness("invertible", (singular,))),
    )
    order_unit = ring.try_invert(ring.from_int(G.order)) is not None
    hypotheses = (
        CheckResult("group_order_unit", order_unit, detail=f"|G| = {G.order} in {ring}"),
        CheckResult("basis_units", all(ring.is_unit(d.alpha[g][G.inverse(g)]) for g in G)),
    )
    logger.debug("Module of rank %d: %s", M.rank, {c.name: c.passed for c in checks + hypotheses})
    return ModuleReport(checks, hypotheses)


def _require_valid(M):
    report = validate_module(M)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise ModuleError(f"Module fails validation: {names}")


def _group_order_inverse(M):
    n = M.datum.group.order
    inv = M.ring.try_invert(M.ring.from_int(n))
    if inv is None:
        raise ModuleError(f"|G| = {n} not invertible in {M.ring}")
    return inv


def _check_shape(M, T):
    if not linalg.is_square(T, M.rank):
        raise ModuleError(f"Expected a {M.rank}x{M.rank} matrix")
    return tuple(tuple(M.ring.coerce(x) for x in row) for row in T)


# --- linearity and stability ----------------------------------------

def check_a_linear(M, T):
    """T(phi_g(e_i)) == phi_g(T(e_i)) for every g and basis vector e_i."""
    T = _check_shape(M, T)
    ring = M.ring
    for g in M.datum.group:
        for i, e in enumerate(M.basis()):
            if linalg.vec_mat(ring, act(M, g, e), T) != act(M, g, linalg.vec_mat(ring, e, T)):
                return LinearityResult(False, (g, i))
    return LinearityResult(True)


def image_is_stable(M, P):
    """Every phi_g maps image(P) into image(P); P must be idempotent."""
    ring = M.ring
    for g in M.datum.group:
        for i, row in enumerate(P):
            w = act(M, g, row)
            if linalg.vec_mat(ring, w, P) != w:
                return LinearityResult(False, (g, i))
    return LinearityResult(True)


def span_oracle(ring, vectors, width, cap=None):
    """Membership test for the R-span of ``vectors``: elimination over a field, enumeration when finite."""
    vectors = [tuple(v) for v in vectors]
    if ring.is_field:
        basis, _ = linalg.row_basis(ring, vectors)
        rank = len(basis)
        return lambda v: len(linalg.row_basis(ring, list(basis) + [tuple(v)])[0]) == rank
    if ring.is_finite:
        members = linalg.span(ring, vectors, width, cap or get_settings().max_size)
        return lambda v: tuple(v) in members
    raise ModuleError(f"Span membership over {ring} is not decidable here")


def is_a_submodule(M, vectors, cap=None):
    """The R-span of ``vectors`` is closed under every phi_g; the witness is (g, vector index)."""
    vectors = decode_vectors(M, vectors)
    contains = span_oracle(M.ring, vectors, M.rank, cap)
    for g in M.datum.group:
        for i, v in enumerate(vectors):
            if not contains(act(M, g, v)):
                return LinearityResult(False, (g, i))
    return LinearityResult(True)


# --- averaging ---------------------------------------------------------

def averaging_projection(M, P):
    """
    Average an R-linear projection into an A-linear one.

    Lambda = |G|^{-1} sum over g of sigma_g(U_g P U_g^{-1}), which realizes
    v -> |G|^{-1} sum over g of phi_g^{-1}(P(phi_g(v))).

    Parameters:
        M: SemilinearModule passing validate_module
        P: idempotent matrix (or SubmoduleProjection) with A-stable image

    Returns:
        tuple: Lambda, an A-linear idempotent with the same image as P
    """
    _require_valid(M)
    ring = M.ring
    if isinstance(P, SubmoduleProjection):
        P = P.matrix
    P = _check_shape(M, P)
    scale = _group_order_inverse(M)
    if linalg.mat_mul(ring, P, P) != P:
        raise ModuleError("Projection is not idempotent")
    stable = image_is_stable(M, P)
    if not stable:
        g, i = stable.witness
        raise ModuleError(f"Image of the projection is not A-stable: phi_{g} moves row {i} out of it")
    d = M.datum
    total = linalg.zeros(ring, M.rank)
    for g in d.group:
        conj = linalg.mat_mul(ring, linalg.mat_mul(ring, M.actions[g], P), _invert(M, g))
        total = linalg.mat_add(ring, total, linalg.map_entries(lambda x: d.sig(g, x), conj))
    lam = linalg.mat_scale(ring, scale, total)
    _verify_averaged(M, P, lam)
    return lam


def _verify_averaged(M, P, lam):
    ring = M.ring
    if linalg.mat_mul(ring, lam, lam) != lam:
        raise InvariantViolation("Averaged projection is not idempotent")
    if linalg.mat_mul(ring, P, lam) != P:
        raise InvariantViolation("Averaged projection is not the identity on the submodule")
    if linalg.mat_mul(ring, lam, P) != lam:
        raise InvariantViolation("Averaged projection leaves the submodule")
    if not check_a_linear(M, lam):
        raise InvariantViolation("Averaged projection is not A-linear")


# --- R-projections -----------------------------------------------------

def field_projection(ring, vectors, width, complement_images=None):
    """P = Q^{-1} [B; C] with Q = [B; E]: B a reduced basis of N, E unit vectors off the pivots.

    ``complement_images`` (rows of C) must lie in N; zero rows give the projection along span(E).
    """
    basis, pivots = linalg.row_basis(ring, vectors)
    if not basis:
        return linalg.zeros(ring, width)
    free = [j for j in range(width) if j not in pivots]
    q = basis + tuple(linalg.unit_vector(ring, width, j) for j in free)
    c = complement_images or [tuple(ring.zero() for _ in range(width))] * len(free)
    target = basis + tuple(tuple(row) for row in c)
    q_inv = linalg.inverse(ring, q)
    if q_inv is None:
        raise InvariantViolation("Basis completion is singular")
    return linalg.mat_mul(ring, q_inv, target)


def r_projections(ring, vectors, width, cap=None):
    """Every R-linear idempotent with image span(vectors), finite rings only."""
    cap = cap or get_settings().max_size
    members = sorted(linalg.span(ring, vectors, width, cap))
    if len(members) ** width > cap:
        raise SizeCapError(f"{len(members)}**{width} candidate projections exceed the cap of {cap}")
    for rows in product(members, repeat=width):
        # rows inside N and identity on generators of N force idempotence
        if all(linalg.vec_mat(ring, v, rows) == tuple(v) for v in vectors):
            yield tuple(rows)


def find_r_projection(ring, vectors, width, cap=None):
    if ring.is_field:
        return field_projection(ring, vectors, width)
    if ring.is_finite:
        found = next(r_projections(ring, vectors, width, cap), None)
        if found is None:
            raise ModuleError("Submodule is not an R-direct summand: no R-linear projection exists")
        return found
    raise ModuleError(f"Searching for projections over {ring} is not supported")


def random_r_projection(ring, vectors, width, rng, cap=None):
    """A random R-projection onto span(vectors)."""
    if ring.is_field:
        basis, _ = linalg.row_basis(ring, vectors)
        extra = width - len(basis)
        images = []
        for _ in range(extra):
            row = tuple(ring.zero() for _ in range(width))
            for b in basis:
                row = linalg.vec_add(ring, row, linalg.vec_scale(ring, b, ring.random_value(rng)))
            images.append(row)
        return field_projection(ring, vectors, width, images)
    choices = list(r_projections(ring, vectors, width, cap))
    if not choices:
        raise ModuleError("Submodule is not an R-direct summand: no R-linear projection exists")
    return rng.choice(choices)


def split_submodule(M, vectors, cap=None):
    """An A-linear idempotent with image exactly span(vectors)."""
    _require_valid(M)
    _group_order_inverse(M)
    ring = M.ring
    vectors = decode_vectors(M, vectors)
    nonzero = [v for v in vectors if not linalg.is_zero_vector(ring, v)]
    if not nonzero:
        return SubmoduleProjection(ring, linalg.zeros(ring, M.rank))
    stable = is_a_submodule(M, nonzero, cap)
    if not stable:
        g, i = stable.witness
        raise ModuleError(f"Not an A-submodule: phi_{g} moves vector {i} out of the span")
    P = find_r_projection(ring, nonzero, M.rank, cap)
    return SubmoduleProjection(ring, averaging_projection(M, P))


# --- constructions -----------------------------------------------------

def regular_module(d):
    """A as a right module over itself.

    Coordinates are taken on the right, x = sum of u_h c_h, so c_h = sigma_h^{-1}(a_h)
    and U_g[h][hg] = sigma_hg^{-1}(alpha(h, g)).
    """
    ring, G = d.ring, d.group
    n = G.order
    actions = []
    for g in G:
        rows = [[ring.zero()] * n for _ in range(n)]
        for h in G:
            hg = G.mul(h, g)
            rows[h][hg] = d.sig_inv(hg, d.alpha[h][g])
        actions.append(linalg.freeze(rows))
    return SemilinearModule(d, n, tuple(actions))


def element_to_vector(x):
    d = x.datum
    return tuple(d.sig_inv(h, x.coefficient(h)) for h in d.group)


def direct_sum(M1, M2):
    if M1.datum != M2.datum:
        raise ModuleError("Direct sums need modules over the same datum")
    ring, m1, m2 = M1.ring, M1.rank, M2.rank
    actions = []
    for u1, u2 in zip(M1.actions, M2.actions):
        top = [tuple(row) + (ring.zero(),) * m2 for row in u1]
        bottom = [(ring.zero(),) * m1 + tuple(row) for row in u2]
        actions.append(tuple(top + bottom))
    return SemilinearModule(M1.datum, m1 + m2, tuple(actions))


def cyclic_submodule(M, w):
    """Spanning set of w.A: the vectors phi_g(w)."""
    return [act(M, g, tuple(w)) for g in M.datum.group]


def random_module_case(rng, p):
    """F_p[G] acting on itself with the cyclic submodule of a random vector, |G| prime to p."""
    ring = BaseRing.modular(p)
    orders = [q for q in (2, 3, 4) if q % p]
    if p != 2 and rng.random() < 0.25:
        group = direct_product(cyclic(2), cyclic(2))
    else:
        group = cyclic(rng.choice(orders))
    M = regular_module(group_algebra(ring, group))
    if group.order == 2 and rng.random() < 0.5:
        M = direct_sum(M, M)
    w = tuple(rng.choice(ring.elements()) for _ in range(M.rank))
    return M, cyclic_submodule(M, w)


# --- documents -------------------------------------------------------

def _decode_matrix(ring, literal, m, label):
    if not (isinstance(literal, list) and len(literal) == m and
            all(isinstance(row, list) and len(row) == m for row in literal)):
        raise FormatError(f"{label} must be a {m}x{m} list of lists")
    return tuple(tuple(ring.decode(x) for x in row) for row in literal)


def module_from_document(d, doc):
    """{"rank": m, "actions": {"g": [[...]]}}; a missing U_e defaults to the identity."""
    if not isinstance(doc, dict) or "rank" not in doc or "actions" not in doc:
        raise FormatError("A module document needs 'rank' and 'actions'")
    m = doc["rank"]
    if not isinstance(m, int) or m < 0:
        raise FormatError(f"Module rank must be a non-negative integer, got {m!r}")
    raw = doc["actions"]
    if not isinstance(raw, dict):
        raise FormatError("'actions' must map group indices to matrices")
    ring, n = d.ring, d.group.order
    actions = {}
    for key, literal in raw.items():
        try:
            g = int(key)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"Bad group index {key!r} in 'actions'") from exc
        if not 0 <= g < n:
            raise FormatError(f"Group index {g} out of range for order {n}")
        actions[g] = _decode_matrix(ring, literal, m, f"U_{g}")
    actions.setdefault(0, linalg.identity(ring, m))
    missing = [g for g in range(n) if g not in actions]
    if missing:
        raise FormatError(f"Module document has no action matrix for {missing}")
    return SemilinearModule(d, m, tuple(actions[g] for g in range(n)))


def module_to_document(M):
    ring = M.ring
    return {
        "rank": M.rank,
        "actions": {str(g): [[ring.encode(x) for x in row] for row in u] for g, u in enumerate(M.actions)},
    }


def decode_vectors(M, literal):
    """Row vectors of length rank, given as ring values or ring literals."""
    if not isinstance(literal, (list, tuple)):
        raise FormatError("A submodule is a list of row vectors")
    out = []
    for v in literal:
        if not isinstance(v, (list, tuple)) or len(v) != M.rank:
            raise FormatError(f"Vector {v!r} does not have length {M.rank}")
        out.append(tuple(x if M.ring.contains(x) else M.ring.decode(x) for x in v))
    return out


def decode_projection(M, literal):
    return SubmoduleProjection(M.ring, _decode_matrix(M.ring, literal, M.rank, "Projection"))
