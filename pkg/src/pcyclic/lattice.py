"""Lattices over the cyclic group of order p^n.

A lattice is stored as the integer matrix of a fixed generator ``sigma``.
``sigma_i = sigma ** p**(n - i)`` generates the subgroup of order ``p**i``.
Besides the catalog constructors this module holds the free-summand
criterion and the rank formula for the non-projective part.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import BadLevel, InvalidLattice, MixedGroup, WitnessNotFound
from .exact_linalg import (
    FiniteQuotient,
    IntMatrix,
    LatticeSolver,
    block_diag,
    inverse_unimodular,
    is_prime,
    matrix_polynomial,
    quotient_invariants,
    rank_mod,
    saturated_kernel,
)


@dataclass(frozen=True)
class Lattice:
    p: int
    n: int
    action: IntMatrix
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not (is_prime(self.p) and self.p % 2 == 1):
            raise InvalidLattice(f"p={self.p} is not an odd prime")
        if self.n < 1:
            raise InvalidLattice("level n must be at least 1")
        if self.action.nrows != self.action.ncols:
            raise InvalidLattice("action matrix is not square")
        if not (self.action ** (self.p ** self.n)).is_identity():
            raise InvalidLattice(f"action^({self.p}^{self.n}) is not the identity")

    @property
    def rank(self) -> int:
        return self.action.nrows

    @property
    def order(self) -> int:
        return self.p ** self.n

    def check_level(self, i: int, lo: int = 1) -> None:
        if not lo <= i <= self.n:
            raise BadLevel(f"level {i} outside [{lo}, {self.n}]")

    def generator(self, i: int) -> IntMatrix:
        """Matrix of sigma_i, the generator of the subgroup of order p^i."""
        self.check_level(i, lo=0)
        return _generator(self, i)

    def norm(self, i: int) -> IntMatrix:
        """The norm element of the subgroup of order p^i."""
        self.check_level(i, lo=0)
        return _norm(self, i)

    def relative_norm(self, i: int) -> IntMatrix:
        """``sum_{j<p} sigma_{i+1}^j``, the norm of Gamma_{i+1}/Gamma_i."""
        self.check_level(i + 1)
        return _relative_norm(self, i)


@functools.lru_cache(maxsize=None)
def _generator(M: Lattice, i: int) -> IntMatrix:
    return M.action ** (M.p ** (M.n - i))


@functools.lru_cache(maxsize=None)
def _norm(M: Lattice, i: int) -> IntMatrix:
    return _geometric_sum(_generator(M, i), M.p ** i)


@functools.lru_cache(maxsize=None)
def _relative_norm(M: Lattice, i: int) -> IntMatrix:
    return _geometric_sum(_generator(M, i + 1), M.p)


def _geometric_sum(g: IntMatrix, count: int) -> IntMatrix:
    total = IntMatrix.zeros(g.nrows, g.ncols)
    power = IntMatrix.identity(g.nrows)
    for _ in range(count):
        total = total + power
        power = power @ g
    return total


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def cyclic_permutation_matrix(m: int) -> IntMatrix:
    rows = [[0] * m for _ in range(m)]
    for k in range(m):
        rows[(k + 1) % m][k] = 1
    return IntMatrix(rows, m)


def permutation_lattice(p: int, n: int, i: int) -> Lattice:
    """Z_p[Gamma/Gamma_i], of rank p^(n-i)."""
    if not 0 <= i <= n:
        raise BadLevel(f"level {i} outside [0, {n}]")
    return Lattice(p, n, cyclic_permutation_matrix(p ** (n - i)), label=f"Z[G/G{i}]")


def trivial_lattice(p: int, n: int) -> Lattice:
    return Lattice(p, n, IntMatrix.identity(1), label="Z")


def regular_lattice(p: int, n: int) -> Lattice:
    return permutation_lattice(p, n, 0)


def cyclotomic_coefficients(p: int, k: int) -> list[int]:
    """Coefficients (constant first) of the p^k-th cyclotomic polynomial."""
    if k == 0:
        return [-1, 1]
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for t in range(p):
        coeffs[t * step] = 1
    return coeffs


def companion_matrix(coeffs: list[int]) -> IntMatrix:
    """Companion matrix of a monic polynomial: e_k -> e_{k+1}, last column -coeffs."""
    d = len(coeffs) - 1
    rows = [[0] * d for _ in range(d)]
    for k in range(d - 1):
        rows[k + 1][k] = 1
    for k in range(d):
        rows[k][d - 1] = -coeffs[k]
    return IntMatrix(rows, d)


def cyclotomic_lattice(p: int, n: int, i: int) -> Lattice:
    """Z_p[zeta_{p^i}] with sigma acting as a primitive p^i-th root of unity."""
    if not 1 <= i <= n:
        raise BadLevel(f"level {i} outside [1, {n}]")
    return Lattice(p, n, companion_matrix(cyclotomic_coefficients(p, i)), label=f"Z[zeta{i}]")


def restrict_action(action: IntMatrix, basis: IntMatrix) -> IntMatrix:
    """Matrix of ``action`` on the invariant sublattice with the given basis."""
    solver = LatticeSolver(basis)
    return solver.solve_matrix(action @ basis)


def augmentation_ideal(p: int, n: int) -> Lattice:
    """Kernel of the augmentation Z_p[Gamma] -> Z_p."""
    m = p ** n
    basis = saturated_kernel(IntMatrix([[1] * m]))
    action = restrict_action(cyclic_permutation_matrix(m), basis)
    return Lattice(p, n, action, label="I")


def direct_sum(*lattices: Lattice) -> Lattice:
    first = lattices[0]
    for M in lattices[1:]:
        if (M.p, M.n) != (first.p, first.n):
            raise MixedGroup(f"cannot sum lattices over C_{first.p}^{first.n} and C_{M.p}^{M.n}")
    label = " + ".join(M.label or "?" for M in lattices)
    return Lattice(first.p, first.n, block_diag(*(M.action for M in lattices)), label=label)


def conjugate(M: Lattice, U: IntMatrix) -> Lattice:
    """The same lattice in new coordinates: action ``U A U^{-1}``."""
    U_inv = inverse_unimodular(U)
    return Lattice(M.p, M.n, U @ M.action @ U_inv, label=M.label)


# ---------------------------------------------------------------------------
# random catalog sums with ground truth
# ---------------------------------------------------------------------------

class CatalogEntry(NamedTuple):
    name: str
    lattice: Lattice
    kind: str      # "permutation", "cyclotomic" or "augmentation"
    index: int     # j for Z[G/G_j], k for Z[zeta_{p^k}]

    def free_multiplicity(self, i: int) -> int:
        """Number of Z_p[Gamma_i]-free summands after restriction to Gamma_i."""
        p, n = self.lattice.p, self.lattice.n
        if self.kind == "permutation":
            return p ** (n - i) if self.index == 0 else 0
        if self.kind == "augmentation":
            # restricted to Gamma_i: I_{Gamma_i} + Z_p[Gamma_i]^{p^(n-i) - 1}
            return p ** (n - i) - 1
        return 0


def catalog(p: int, n: int) -> list[CatalogEntry]:
    entries = [CatalogEntry(f"Z[G/G{j}]", permutation_lattice(p, n, j), "permutation", j)
               for j in range(n, -1, -1)]
    entries += [CatalogEntry(f"Z[zeta{k}]", cyclotomic_lattice(p, n, k), "cyclotomic", k)
                for k in range(1, n + 1)]
    if n >= 2:
        # for n = 1 the augmentation ideal is isomorphic to Z_p[zeta_p]
        entries.append(CatalogEntry("I", augmentation_ideal(p, n), "augmentation", 0))
    return entries


@dataclass(frozen=True)
class Recipe:
    """How a random lattice was built: summand multiplicities and the conjugator."""

    p: int
    n: int
    seed: int
    multiplicities: tuple[tuple[str, int], ...]
    conjugator: IntMatrix

    def non_projective_rank(self, i: int) -> int:
        entries = {e.name: e for e in catalog(self.p, self.n)}
        total = 0
        for name, mult in self.multiplicities:
            e = entries[name]
            total += mult * (e.lattice.rank - self.p ** i * e.free_multiplicity(i))
        return total

    def free_rank(self, i: int) -> int:
        entries = {e.name: e for e in catalog(self.p, self.n)}
        return sum(mult * entries[name].free_multiplicity(i) for name, mult in self.multiplicities)


def random_unimodular(rank: int, rng: random.Random, steps: int | None = None) -> IntMatrix:
    rows = IntMatrix.identity(rank).tolist()
    if rank < 2:
        if rank == 1 and rng.random() < 0.5:
            rows[0][0] = -1
        return IntMatrix(rows, rank)
    for _ in range(steps if steps is not None else 2 * rank):
        i, j = rng.sample(range(rank), 2)
        c = rng.choice((-2, -1, 1, 2))
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix(rows, rank)


def random_lattice(p: int, n: int, seed: int, max_rank: int = 12,
                   max_summands: int = 4) -> tuple[Lattice, Recipe]:
    """Random direct sum of catalog lattices, conjugated by a random unimodular matrix."""
    rng = random.Random(seed)
    entries = [e for e in catalog(p, n) if e.lattice.rank <= max_rank]
    chosen: dict[str, int] = {}
    rank = 0
    for _ in range(rng.randint(1, max_summands)):
        fits = [e for e in entries if rank + e.lattice.rank <= max_rank]
        if not fits:
            break
        e = rng.choice(fits)
        chosen[e.name] = chosen.get(e.name, 0) + 1
        rank += e.lattice.rank
    order = [e for e in entries if e.name in chosen]
    parts = [e.lattice for e in order for _ in range(chosen[e.name])]
    U = random_unimodular(rank, rng)
    M = conjugate(direct_sum(*parts), U)
    recipe = Recipe(p, n, seed, tuple((e.name, chosen[e.name]) for e in order), U)
    return Lattice(p, n, M.action, label=f"random[{seed}]"), recipe


# ---------------------------------------------------------------------------
# fixed points, characters, free summands
# ---------------------------------------------------------------------------

def fixed_sublattice(M: Lattice, i: int) -> IntMatrix:
    """Saturated basis of M^{Gamma_i}."""
    M.check_level(i)
    return _fixed_sublattice(M, i)


@functools.lru_cache(maxsize=None)
def _fixed_sublattice(M: Lattice, i: int) -> IntMatrix:
    return saturated_kernel(M.generator(i) - IntMatrix.identity(M.rank))


@functools.lru_cache(maxsize=None)
def norm_quotient(M: Lattice, i: int) -> FiniteQuotient:
    """M^{Gamma_i} / N_i M, the group underlying H^0-hat."""
    M.check_level(i)
    return quotient_invariants(M.norm(i), _fixed_sublattice(M, i), M.p)


def euler_phi_prime_power(p: int, k: int) -> int:
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


@dataclass(frozen=True)
class CharacterProfile:
    """``multiplicities[k]``: multiplicity of the rational irreducible with kernel Gamma_k."""

    p: int
    n: int
    multiplicities: tuple[int, ...]

    def rank(self) -> int:
        return sum(m * euler_phi_prime_power(self.p, self.n - k)
                   for k, m in enumerate(self.multiplicities))


def character_profile(M: Lattice) -> CharacterProfile:
    mults = []
    for k in range(M.n + 1):
        conductor = M.n - k
        poly = cyclotomic_coefficients(M.p, conductor)
        kernel = saturated_kernel(matrix_polynomial(poly, M.action))
        deg = euler_phi_prime_power(M.p, conductor)
        m, r = divmod(kernel.ncols, deg)
        assert r == 0, "isotypic component rank not divisible by the character degree"
        mults.append(m)
    profile = CharacterProfile(M.p, M.n, tuple(mults))
    assert profile.rank() == M.rank, "character multiplicities do not exhaust the rank"
    return profile


class FreeRank(NamedTuple):
    rank: int
    witness: tuple[tuple[int, ...], ...] | None


def max_free_rank(M: Lattice, i: int, witness: bool = False) -> FreeRank:
    """Rank m of a maximal free Z_p[Gamma_i] summand.

    ``m = rk_p H^0 - rk_p H^0-hat``.  With ``witness=True`` also returns m
    vectors whose traces are independent in M^{Gamma_i}/p; the search runs
    over standard basis vectors and then small combinations.
    """
    M.check_level(i)
    fixed = _fixed_sublattice(M, i)
    m = fixed.ncols - norm_quotient(M, i).group.rank
    if not witness:
        return FreeRank(m, None)
    return FreeRank(m, _free_witness(M, i, fixed, m))


def _free_witness(M: Lattice, i: int, fixed: IntMatrix, m: int):
    p = M.p
    solver = LatticeSolver(fixed)
    N = M.norm(i)
    chosen: list[tuple[int, ...]] = []
    traces: list[tuple[int, ...]] = []

    def try_add(x):
        t = tuple(c % p for c in solver.solve(N.apply(x)))
        if rank_mod(IntMatrix(traces + [t], fixed.ncols), p) > len(traces):
            traces.append(t)
            chosen.append(tuple(x))
        return len(chosen) == m

    if m == 0:
        return ()
    r = M.rank
    for k in range(r):
        if try_add([int(j == k) for j in range(r)]):
            return tuple(chosen)
    # bounded fallback: pairs of basis vectors with coefficients up to p
    for a in range(r):
        for b in range(a + 1, r):
            for c in range(1, p + 1):
                x = [0] * r
                x[a], x[b] = 1, c
                if try_add(x):
                    return tuple(chosen)
    raise WitnessNotFound(f"found {len(chosen)} of {m} free generators", m)


def c_value(M: Lattice, i: int) -> int:
    """Total rank of the non-projective summands of M as a Gamma_i-lattice."""
    return M.rank - M.p ** i * max_free_rank(M, i).rank
