"""Finite modules over (Z/p^a)[C_q].

Covers the Jordan blocks Y_i, block statistics (kappa, minimal generator
count), Hom groups computed as congruence kernels, isomorphism testing and
the Hom/Ext tables for Y_i over (Z/p)[C_p] and (Z/p^2)[C_p].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple, Sequence

from .errors import BadIndex, CapExceeded, ExponentTooLarge, InvalidModule, OracleMismatch
from .exact_linalg import (
    AbelianPGroup,
    FiniteQuotient,
    IntMatrix,
    block_diag,
    congruence_kernel,
    finite_homology,
    hstack,
    inverse_mod,
    lattice_basis,
    p_valuation,
    quotient_invariants,
    rank_mod,
)
from .lattice import cyclic_permutation_matrix
from .tate import FModule, ModuleMap

DEFAULT_CAP = 3 ** 8


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def jordan_block(k: int) -> IntMatrix:
    """Action of X on F[X]/(X-1)^k in the basis (X-1)^t."""
    return IntMatrix([[int(r == c or r == c + 1) for c in range(k)] for r in range(k)], k)


def y_module(i: int, p: int, q: int | None = None, a: int = 1) -> FModule:
    """Y_i = (Z/p)[X]/((X-1)^i) over (Z/p^a)[C_q]."""
    q = p if q is None else q
    if not 1 <= i <= q:
        raise BadIndex(f"Y_{i} is not defined over C_{q}")
    return FModule(p, a, q, AbelianPGroup(p, (1,) * i), jordan_block(i))


def regular_module(p: int, q: int, a: int) -> FModule:
    """The group ring (Z/p^a)[C_q] with basis 1, X, ..., X^{q-1}."""
    return FModule(p, a, q, AbelianPGroup(p, (a,) * q), cyclic_permutation_matrix(q))


def _permute(A: IntMatrix, perm: Sequence[int]) -> IntMatrix:
    return IntMatrix([[A[r, c] for c in perm] for r in perm], len(perm))


def module_direct_sum(*mods: FModule) -> FModule:
    if not mods:
        raise InvalidModule("empty direct sum")
    p, a, q = mods[0].p, mods[0].a, mods[0].q
    if any((M.p, M.a, M.q) != (p, a, q) for M in mods):
        raise InvalidModule("summands live over different rings")
    exps = [e for M in mods for e in M.group.exponents]
    A = block_diag(*(M.action for M in mods))
    # canonical order needs nonincreasing exponents; sort is stable
    perm = sorted(range(len(exps)), key=lambda k: -exps[k])
    return FModule(p, a, q, AbelianPGroup(p, tuple(exps[k] for k in perm)), _permute(A, perm))


def module_power(M: FModule, k: int) -> FModule:
    return module_direct_sum(*([M] * k)) if k else FModule.zero(M.p, M.a, M.q)


def transport(M: FModule, P: IntMatrix, P_inv: IntMatrix | None = None) -> FModule:
    """Same module in the coordinates y = P x, for an automorphism P of the group."""
    if P_inv is None:
        if M.group.exponent == M.p:
            P_inv = inverse_mod(P, M.p)
        else:
            P_inv = ModuleMap(FModule.trivial_action(M.group, M.a),
                              FModule.trivial_action(M.group, M.a), P).inverse().matrix
    return FModule(M.p, M.a, M.q, M.group, P @ M.action @ P_inv)


# ---------------------------------------------------------------------------
# Jordan type and block statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JordanPartition:
    """``multiplicities[k-1]`` copies of Y_k, k = 1..q."""

    p: int
    q: int
    multiplicities: tuple[int, ...]

    def dim(self) -> int:
        return sum(k * m for k, m in enumerate(self.multiplicities, start=1))

    def block_count(self) -> int:
        return sum(self.multiplicities)

    def blocks(self) -> tuple[int, ...]:
        """Block sizes in nonincreasing order."""
        return tuple(k for k in range(self.q, 0, -1) for _ in range(self.multiplicities[k - 1]))

    def __str__(self) -> str:
        parts = [f"Y_{k}" + (f"^{m}" if m > 1 else "")
                 for k, m in enumerate(self.multiplicities, start=1) if m]
        return " + ".join(parts) or "0"


def _require_exponent_p(M: FModule) -> None:
    if M.group.rank and M.group.exponent != M.p:
        raise ExponentTooLarge(f"module has exponent {M.group.exponent}, expected {M.p}")


def _nilpotent_part(M: FModule) -> IntMatrix:
    return (M.action - IntMatrix.identity(M.rank)).mod(M.p)


def jordan_partition(M: FModule) -> JordanPartition:
    """Block multiplicities from the ranks of (action - 1)^k over F_p."""
    _require_exponent_p(M)
    N = _nilpotent_part(M)
    ranks = [M.rank]
    power = IntMatrix.identity(M.rank)
    for _ in range(M.q + 1):
        power = (power @ N).mod(M.p)
        ranks.append(rank_mod(power, M.p))
    mults = tuple(ranks[k - 1] - 2 * ranks[k] + ranks[k + 1] for k in range(1, M.q + 1))
    part = JordanPartition(M.p, M.q, mults)
    assert part.dim() == M.rank, "Jordan blocks do not fill the module"
    return part


def kappa(M: FModule) -> int:
    """Number of indecomposable summands = dimension of the fixed subspace."""
    _require_exponent_p(M)
    return M.rank - rank_mod(_nilpotent_part(M), M.p)


def fixed_subgroup(M: FModule) -> AbelianPGroup:
    """Abelian invariants of M^G, the kernel of (action - 1)."""
    exps = M.group.exponents
    return congruence_kernel(M.action - IntMatrix.identity(M.rank), exps, exps, M.p).group


def fixed_point_count(M: FModule, cap: int = DEFAULT_CAP) -> int:
    """Brute-force count of fixed elements; only for small modules."""
    if M.order > cap:
        raise CapExceeded(f"|M| = {M.order} exceeds cap {cap}")
    A = M.action
    return sum(1 for v in M.elements() if M.reduce(A.apply(v)) == v)


def min_gens(M: FModule) -> int:
    """Minimal number of generators over the group ring: dim of M / ((action-1)M + pM)."""
    return M.rank - rank_mod(_nilpotent_part(M), M.p)


# ---------------------------------------------------------------------------
# linear systems of homomorphisms
# ---------------------------------------------------------------------------

class HomTerm(NamedTuple):
    """The composite ``left @ Phi_block @ right``."""

    left: IntMatrix
    block: int
    right: IntMatrix


class HomConstraint(NamedTuple):
    """``sum of terms = 0`` as a homomorphism domain -> codomain."""

    domain: AbelianPGroup
    codomain: AbelianPGroup
    terms: tuple[HomTerm, ...]


def _hom_scale(er: int, ej: int, p: int) -> tuple[int, int]:
    """Generator p^max(0, er-ej) and order exponent min(er, ej) of Hom(Z/p^ej, Z/p^er)."""
    return p ** max(0, er - ej), min(er, ej)


class HomSolution:
    """Solutions of a homogeneous system in a product of Hom groups.

    Each block ``b`` is Hom(source_b, target_b) parametrised entrywise by
    ``Phi[r][j] = p^max(0, e_r - e_j) * y[r][j]``.
    """

    def __init__(self, p: int, blocks: Sequence[tuple[AbelianPGroup, AbelianPGroup]],
                 quotient: FiniteQuotient | None):
        self.p = p
        self.blocks = tuple(blocks)
        self.quotient = quotient
        self.group = quotient.group if quotient is not None else AbelianPGroup(p)
        self._layout = []
        off = 0
        for src, tgt in self.blocks:
            self._layout.append(off)
            off += src.rank * tgt.rank
        self.nvars = off

    @property
    def order(self) -> int:
        return self.group.order

    def _matrices_from_y(self, y: Sequence[int]) -> tuple[IntMatrix, ...]:
        mats = []
        for (src, tgt), off in zip(self.blocks, self._layout):
            rows = []
            for r, er in enumerate(tgt.exponents):
                row = []
                for j, ej in enumerate(src.exponents):
                    s, _ = _hom_scale(er, ej, self.p)
                    row.append(s * y[off + r * src.rank + j] % self.p ** er)
                rows.append(row)
            mats.append(IntMatrix(rows, src.rank))
        return tuple(mats)

    def element(self, coords: Sequence[int]) -> tuple[IntMatrix, ...]:
        y = self.quotient.lift(coords) if self.quotient is not None else ()
        return self._matrices_from_y(y)

    def elements(self) -> Iterator[tuple[IntMatrix, ...]]:
        for c in self.group.elements():
            yield self.element(c)

    def generators(self) -> list[tuple[IntMatrix, ...]]:
        k = self.group.rank
        return [self.element([int(t == s) for t in range(k)]) for s in range(k)]

    def random_element(self, rng: random.Random) -> tuple[IntMatrix, ...]:
        return self.element([rng.randrange(m) for m in self.group.moduli])

    def coords(self, mats: Sequence[IntMatrix]) -> tuple[int, ...]:
        """Coordinates of a solution given by its block matrices."""
        y = []
        for (src, tgt), Phi in zip(self.blocks, mats):
            for r, er in enumerate(tgt.exponents):
                for j, ej in enumerate(src.exponents):
                    s, _ = _hom_scale(er, ej, self.p)
                    x = Phi[r, j] % self.p ** er
                    if x % s:
                        raise InvalidModule("matrix does not define a homomorphism")
                    y.append(x // s)
        if self.quotient is None:
            return ()
        return self.quotient.coords(y)


def solve_hom_system(p: int, blocks: Sequence[tuple[AbelianPGroup, AbelianPGroup]],
                     constraints: Sequence[HomConstraint]) -> HomSolution:
    """Group of tuples (Phi_b) in prod Hom(source_b, target_b) killing every constraint."""
    layout = []
    var_exps = []
    scales = []
    for src, tgt in blocks:
        layout.append(len(var_exps))
        for er in tgt.exponents:
            for ej in src.exponents:
                s, e = _hom_scale(er, ej, p)
                scales.append(s)
                var_exps.append(e)
    nvars = len(var_exps)
    if nvars == 0:
        return HomSolution(p, blocks, None)
    rows = []
    row_exps = []
    for con in constraints:
        for yy, ey in enumerate(con.codomain.exponents):
            for xx in range(con.domain.rank):
                row = [0] * nvars
                for term in con.terms:
                    src, tgt = blocks[term.block]
                    off = layout[term.block]
                    L, R = term.left, term.right
                    for r in range(tgt.rank):
                        lv = L[yy, r]
                        if not lv:
                            continue
                        for j in range(src.rank):
                            rv = R[j, xx]
                            if rv:
                                k = off + r * src.rank + j
                                row[k] += lv * rv * scales[k]
                if any(row):
                    rows.append(row)
                    row_exps.append(ey)
    L = IntMatrix(rows, nvars) if rows else IntMatrix.zeros(0, nvars)
    return HomSolution(p, blocks, congruence_kernel(L, row_exps, var_exps, p))


def _equivariance(M: FModule, N: FModule, block: int = 0) -> HomConstraint:
    """N.action @ Phi - Phi @ M.action = 0."""
    return HomConstraint(M.group, N.group, (
        HomTerm(N.action, block, IntMatrix.identity(M.rank)),
        HomTerm(-IntMatrix.identity(N.rank), block, M.action),
    ))


def _check_same_ring(M: FModule, N: FModule) -> None:
    if M.p != N.p or M.q != N.q:
        raise InvalidModule("modules over different group rings")


class HomGroup:
    """Hom_{R[C_q]}(M, N) as a finite abelian group of ModuleMaps."""

    def __init__(self, M: FModule, N: FModule):
        _check_same_ring(M, N)
        self.source, self.target = M, N
        self.solution = solve_hom_system(M.p, [(M.group, N.group)], [_equivariance(M, N)])

    @property
    def group(self) -> AbelianPGroup:
        return self.solution.group

    @property
    def order(self) -> int:
        return self.solution.order

    def element(self, coords: Sequence[int]) -> ModuleMap:
        return ModuleMap(self.source, self.target, self.solution.element(coords)[0])

    def elements(self) -> Iterator[ModuleMap]:
        for c in self.group.elements():
            yield self.element(c)

    def generators(self) -> list[ModuleMap]:
        return [ModuleMap(self.source, self.target, g[0]) for g in self.solution.generators()]

    def coords(self, f: ModuleMap | IntMatrix) -> tuple[int, ...]:
        matrix = f.matrix if isinstance(f, ModuleMap) else f
        return self.solution.coords([matrix])


def hom_group(M: FModule, N: FModule) -> HomGroup:
    return HomGroup(M, N)


def precomposition_matrix(H: HomGroup, right: IntMatrix, target: HomGroup) -> IntMatrix:
    """Coordinate matrix of Phi -> Phi @ right from H to ``target``."""
    cols = [target.coords(g.matrix @ right) for g in H.generators()]
    return (IntMatrix.from_columns(cols, target.group.rank) if cols
            else IntMatrix.zeros(target.group.rank, 0))


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

def subgroup_type(M: FModule, F: IntMatrix) -> AbelianPGroup:
    """Abelian invariants of the image of the endomorphism F."""
    D = IntMatrix.diagonal(M.moduli)
    return quotient_invariants(D, lattice_basis(hstack(F, D)), M.p).group


def kernel_type(M: FModule, F: IntMatrix) -> AbelianPGroup:
    exps = M.group.exponents
    return congruence_kernel(F, exps, exps, M.p).group


def module_invariants(M: FModule) -> tuple:
    """Isomorphism invariants: group types of images and kernels of p^s (g - 1)^t."""
    if M.rank == 0:
        return (M.group,)
    if M.group.exponent == M.p:
        return (M.group, jordan_partition(M).multiplicities)
    out: list = [M.group]
    N = M.action - IntMatrix.identity(M.rank)
    for s in range(M.group.exponents[0]):
        F = IntMatrix.identity(M.rank).scale(M.p ** s).mod_rows(M.moduli)
        while True:
            img = subgroup_type(M, F)
            out.append((img, kernel_type(M, F)))
            if img.is_trivial():
                break
            F = (N @ F).mod_rows(M.moduli)
    return tuple(out)


def find_isomorphism(M: FModule, N: FModule, cap: int = DEFAULT_CAP, seed: int = 0,
                     tries: int = 256) -> ModuleMap | None:
    """An isomorphism M -> N, or None if none exists.

    Hom(M, N) is enumerated when its order is at most ``cap``; otherwise
    seeded random elements are tried and CapExceeded is raised if that
    inconclusive search fails.
    """
    if (M.p, M.q) != (N.p, N.q) or M.group != N.group:
        return None
    if max(M.order, N.order) > cap:
        raise CapExceeded(f"module order {max(M.order, N.order)} exceeds cap {cap}")
    if module_invariants(M) != module_invariants(N):
        return None
    H = hom_group(M, N)
    if H.order != hom_group(M, M).order or H.order != hom_group(N, M).order:
        return None
    if H.order <= cap:
        for f in H.elements():
            if f.is_bijective():
                return f
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        f = H.element([rng.randrange(m) for m in H.group.moduli])
        if f.is_bijective():
            return f
    raise CapExceeded(f"Hom group of order {H.order} exceeds cap {cap}")


def is_isomorphic(M: FModule, N: FModule, cap: int = DEFAULT_CAP) -> bool:
    if (M.p, M.q) != (N.p, N.q) or M.group != N.group:
        return False
    if M.rank and M.group.exponent == M.p:
        # Jordan type is a complete invariant over (Z/p)[C_q]
        return jordan_partition(M) == jordan_partition(N)
    return find_isomorphism(M, N, cap) is not None


def automorphisms(M: FModule, cap: int = DEFAULT_CAP) -> list[ModuleMap]:
    """All automorphisms, by filtering End(M); refuses if |End(M)| > cap."""
    E = hom_group(M, M)
    if E.order > cap:
        raise CapExceeded(f"End of order {E.order} exceeds cap {cap}")
    return [f for f in E.elements() if f.is_bijective()]


# ---------------------------------------------------------------------------
# Hom and Ext tables for Y_i over (Z/p^a)[C_p]
# ---------------------------------------------------------------------------

def _check_indices(i: int, j: int, p: int) -> None:
    if not (1 <= i <= p and 1 <= j <= p):
        raise BadIndex(f"indices ({i}, {j}) outside 1..{p}")


def hom_order_modp(i: int, j: int, p: int) -> int:
    """|Hom(Y_i, Y_j)| over (Z/p)[C_p], checked against p^min(i, j)."""
    _check_indices(i, j, p)
    direct = hom_group(y_module(i, p), y_module(j, p)).order
    closed = p ** min(i, j)
    if direct != closed:
        raise OracleMismatch(f"|Hom(Y_{i}, Y_{j})| = {direct}, closed form {closed}")
    return direct


def ext1_modp_closed(i: int, j: int, p: int) -> int:
    _check_indices(i, j, p)
    return min(p - i, j) - max(j - i, 0)


def ext1_modp_resolution(i: int, j: int, p: int) -> int:
    """log_p |Ext^1(Y_i, Y_j)| from the periodic resolution by Y_p.

    Hom(-, Y_j) applied to Y_p --(X-1)^{p-i}--> Y_p --(X-1)^i--> Y_p
    gives Hom(Y_p, Y_j) -> Hom(Y_p, Y_j) -> Hom(Y_p, Y_j); Ext^1 is the
    homology in the middle.
    """
    _check_indices(i, j, p)
    free = y_module(p, p)
    H = hom_group(free, y_module(j, p))
    N = _nilpotent_part(free)
    d_in = precomposition_matrix(H, (N ** i).mod(p), H)
    d_out = precomposition_matrix(H, (N ** (p - i)).mod(p), H)
    exps = H.group.exponents
    return finite_homology(d_in, d_out, exps, exps, p).group.v_p


def _poly_power_coeffs(k: int, p: int) -> list[int]:
    """Coefficients of (X-1)^k reduced modulo X^p - 1, degree < p."""
    coeffs = [0] * p
    binom = 1
    for t in range(k + 1):
        coeffs[t % p] += binom * (-1) ** (k - t)
        binom = binom * (k - t) // (t + 1)
    return coeffs


def _ring_multiplication(coeffs: Sequence[int], A: IntMatrix, modulus: int) -> IntMatrix:
    """Matrix of sum_t c_t A^t, reduced modulo ``modulus``."""
    n = A.nrows
    total = IntMatrix.zeros(n, n)
    power = IntMatrix.identity(n)
    for c in coeffs:
        if c:
            total = total + power.scale(c)
        power = (power @ A).mod(modulus)
    return total.mod(modulus)


def _free_map_matrix(columns: Sequence[Sequence[int]], p: int, modulus: int) -> IntMatrix:
    """Matrix of the S-linear map S^b -> S^c with e_l -> columns[l], S = (Z/p^a)[C_p].

    Coordinates of S^c are (k, t) -> k * p + t for the element X^t e_k.
    """
    X = cyclic_permutation_matrix(p)
    cols = []
    for col in columns:
        for t in range(p):
            shifted = []
            for k in range(len(col) // p):
                piece = X ** t
                shifted.extend(x % modulus for x in piece.apply(col[k * p:(k + 1) * p]))
            cols.append(shifted)
    nrows = len(columns[0]) if columns else 0
    return IntMatrix.from_columns(cols, nrows)


def _dual_on_module(columns: Sequence[Sequence[int]], Y: FModule) -> IntMatrix:
    """Hom_S(S^c, Y) -> Hom_S(S^b, Y) induced by e_l -> columns[l].

    Hom_S(S^c, Y) = Y^c by evaluation on the basis; block (l, k) is the
    action of the k-th component of columns[l] on Y.
    """
    p, m = Y.p, Y.rank
    b = len(columns)
    c = len(columns[0]) // p if columns else 0
    rows = [[0] * (c * m) for _ in range(b * m)]
    for l, col in enumerate(columns):
        for k in range(c):
            blk = _ring_multiplication(col[k * p:(k + 1) * p], Y.action, Y.group.exponent)
            for r in range(m):
                for s in range(m):
                    rows[l * m + r][k * m + s] = blk[r, s]
    return IntMatrix(rows, c * m)


def ext1_by_presentation(i: int, j: int, p: int, a: int) -> AbelianPGroup:
    """Ext^1 over S = (Z/p^a)[C_p] of Y_i by Y_j, from a free presentation.

    Y_i = coker(S^r -> S) with relations (X-1)^i and, for a = 2, also p.
    The relation module K = ker(S^r -> S) is computed exactly and covered by
    S^m using its abelian generators; Ext^1 is the middle homology of
    Y_j -> Y_j^r -> Y_j^m.
    """
    _check_indices(i, j, p)
    modulus = p ** a
    relations = [_poly_power_coeffs(i, p)]
    if a >= 2:
        relations.append([p ** (a - 1)] + [0] * (p - 1))
    r = len(relations)
    d1 = _free_map_matrix(relations, p, modulus)
    K = congruence_kernel(d1, [a] * p, [a] * (r * p), p)
    syzygies = [tuple(x % modulus for x in g) for g in K.lifts.columns()]
    Y = y_module(j, p, a=a)
    d1_star = _dual_on_module(relations, Y)
    d2_star = _dual_on_module(syzygies, Y) if syzygies else IntMatrix.zeros(0, r * j)
    return finite_homology(d1_star, d2_star, [1] * (r * j), [1] * (len(syzygies) * j), p).group


def ext1_modp(i: int, j: int, p: int) -> int:
    """log_p |Ext^1_{(Z/p)[C_p]}(Y_i, Y_j)|; three computations must agree."""
    closed = ext1_modp_closed(i, j, p)
    resolved = ext1_modp_resolution(i, j, p)
    presented = ext1_by_presentation(i, j, p, 1).v_p
    if not closed == resolved == presented:
        raise OracleMismatch(f"Ext^1(Y_{i}, Y_{j}) over F_{p}[C_{p}]: closed {closed}, "
                             f"resolution {resolved}, presentation {presented}")
    return closed


def ext1_modp2(i: int, j: int, p: int) -> AbelianPGroup:
    """Ext^1_{(Z/p^2)[C_p]}(Y_i, Y_j) as an abelian group."""
    group = ext1_by_presentation(i, j, p, 2)
    if group.v_p > p:
        raise OracleMismatch(f"|Ext^1(Y_{i}, Y_{j})| = {group.order} exceeds p^p")
    if i == p and group != AbelianPGroup(p, (1,) * j):
        raise OracleMismatch(f"Ext^1(Y_p, Y_{j}) = {group} is not Y_{j} as a group")
    return group


# ---------------------------------------------------------------------------
# indecomposables over (Z/p)[C_q]
# ---------------------------------------------------------------------------

def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def _is_p_power(q: int, p: int) -> bool:
    return q >= 1 and p ** p_valuation(q, p) == q


def indecomposable_types(p: int, q: int) -> list[tuple[int, ...]]:
    """Jordan types of indecomposable (Z/p)[C_q]-modules, by exhaustive search.

    Every module is a sum of Jordan blocks at eigenvalue 1, so it suffices
    to run over all partitions of each dimension up to q + 1 and keep those
    whose action has order dividing q and whose fixed space is a line.
    """
    if not _is_p_power(q, p):
        raise InvalidModule(f"{q} is not a power of {p}")
    found = []
    for d in range(1, q + 2):
        for lam in partitions(d):
            A = block_diag(*(jordan_block(k) for k in lam))
            if not (A ** q).mod(p).is_identity():
                continue
            M = FModule(p, 1, q, AbelianPGroup(p, (1,) * d), A)
            if kappa(M) == 1:
                found.append(lam)
    return found


def indecomposable_count_modp(p: int, q: int) -> int:
    """Number of isomorphism classes of indecomposable (Z/p)[C_q]-modules."""
    types = indecomposable_types(p, q)
    if types != [(k,) for k in range(1, q + 1)]:
        raise OracleMismatch(f"indecomposables over F_{p}[C_{q}]: {types}")
    return len(types)


def enumerate_small_modules(p: int, q: int, dim: int) -> Iterator[FModule]:
    """Every (Z/p)[C_q]-module structure on F_p^dim, one per action matrix."""
    group = AbelianPGroup(p, (1,) * dim)
    for entries in product(range(p), repeat=dim * dim):
        A = IntMatrix([entries[r * dim:(r + 1) * dim] for r in range(dim)], dim)
        if rank_mod(A, p) < dim or not (A ** q).mod(p).is_identity():
            continue
        yield FModule(p, 1, q, group, A)


# ---------------------------------------------------------------------------
# random exponent-p modules with known block structure
# ---------------------------------------------------------------------------

def random_invertible_mod(n: int, p: int, rng: random.Random) -> IntMatrix:
    while True:
        A = IntMatrix([[rng.randrange(p) for _ in range(n)] for _ in range(n)], n)
        if rank_mod(A, p) == n:
            return A


def random_modp_module(p: int, q: int, seed: int, max_dim: int = 8
                       ) -> tuple[FModule, JordanPartition]:
    """Sum of random Jordan blocks in a random basis, with its true partition."""
    rng = random.Random(seed)
    target = rng.randint(1, max_dim)
    sizes = []
    while sum(sizes) < target:
        sizes.append(rng.randint(1, min(q, target - sum(sizes))))
    mults = [0] * q
    for k in sizes:
        mults[k - 1] += 1
    dim = sum(sizes)
    J = block_diag(*(jordan_block(k) for k in sizes))
    P = random_invertible_mod(dim, p, rng)
    M = FModule(p, 1, q, AbelianPGroup(p, (1,) * dim), P @ J @ inverse_mod(P, p))
    return M, JordanPartition(p, q, tuple(mults))
