"""Tate cohomology of lattices over the subgroups Gamma_i.

H^1(Gamma_i, M) is realised as ker(N_i) / (sigma_i - 1)M and H^0-hat as
M^{Gamma_i} / N_i M.  Corestriction (forward, alpha_i) is induced by the
inclusion ker N_i in ker N_{i+1}; restriction (backward, beta_i) by the
relative norm of Gamma_{i+1}/Gamma_i.  All finite groups are emitted in the
SNF-adapted coordinates of :func:`quotient_invariants`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AxiomViolation, BadLevel, InvalidModule
from .exact_linalg import (
    AbelianPGroup,
    FiniteQuotient,
    IntMatrix,
    quotient_invariants,
    rank_mod,
    saturated_kernel,
)
from .lattice import Lattice, norm_quotient


def normalize_hom(matrix: IntMatrix, source: AbelianPGroup, target: AbelianPGroup) -> IntMatrix:
    """Reduce a homomorphism matrix row-wise and check it is well defined.

    Entry (r, j) must be divisible by p^max(0, e_r - e_j) so that the image
    of the j-th generator has order dividing p^{e_j}.
    """
    if matrix.shape != (target.rank, source.rank):
        raise InvalidModule(f"matrix shape {matrix.shape} does not match "
                            f"{target.rank}x{source.rank}")
    p = target.p
    reduced = matrix.mod_rows(target.moduli)
    for r, er in enumerate(target.exponents):
        for j, ej in enumerate(source.exponents):
            if er > ej and reduced[r, j] % p ** (er - ej):
                raise InvalidModule(f"entry ({r}, {j}) does not define a homomorphism")
    return reduced


@dataclass(frozen=True)
class FModule:
    """Finite module over (Z/p^a)[C_q], q a power of p.

    ``action`` is the matrix of the group generator in the coordinates of
    ``group``; it is stored reduced row-wise.
    """

    p: int
    a: int
    q: int
    group: AbelianPGroup
    action: IntMatrix

    def __post_init__(self):
        if self.group.p != self.p:
            raise InvalidModule("group and module primes differ")
        if self.group.exponents and self.group.exponents[0] > self.a:
            raise InvalidModule(f"exponent {self.group.exponent} exceeds p^{self.a}")
        object.__setattr__(self, "action", normalize_hom(self.action, self.group, self.group))
        if not self.action_power(self.q).is_identity():
            raise InvalidModule(f"generator action does not have order dividing {self.q}")

    @classmethod
    def trivial_action(cls, group: AbelianPGroup, a: int, q: int = 1) -> FModule:
        return cls(group.p, a, q, group, IntMatrix.identity(group.rank))

    @classmethod
    def zero(cls, p: int, a: int, q: int) -> FModule:
        return cls(p, a, q, AbelianPGroup(p), IntMatrix.zeros(0, 0))

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.group.moduli

    @property
    def rank(self) -> int:
        return self.group.rank

    @property
    def order(self) -> int:
        return self.group.order

    def is_zero(self) -> bool:
        return self.group.is_trivial()

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % m for x, m in zip(vec, self.moduli))

    def act(self, vec: Sequence[int], times: int = 1) -> tuple[int, ...]:
        A = self.action_power(times)
        return self.reduce(A.apply(vec))

    def action_power(self, k: int) -> IntMatrix:
        return self.action.power_mod_rows(k, self.moduli)

    def group_ring_element(self, coeffs: dict[int, int]) -> IntMatrix:
        """Matrix of ``sum c_k g^k`` acting on the module."""
        total = IntMatrix.zeros(self.rank, self.rank)
        for k, c in coeffs.items():
            total = total + self.action_power(k).scale(c)
        return total.mod_rows(self.moduli)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return self.group.elements()

    def describe(self) -> str:
        return f"{self.group} over (Z/{self.p}^{self.a})[C_{self.q}]"


@dataclass(frozen=True)
class ModuleMap:
    """Homomorphism of finite modules as a (target gens x source gens) matrix."""

    source: FModule
    target: FModule
    matrix: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix",
                           normalize_hom(self.matrix, self.source.group, self.target.group))

    @classmethod
    def zero(cls, source: FModule, target: FModule) -> ModuleMap:
        return cls(source, target, IntMatrix.zeros(target.rank, source.rank))

    @classmethod
    def identity(cls, M: FModule) -> ModuleMap:
        return cls(M, M, IntMatrix.identity(M.rank))

    @classmethod
    def scalar(cls, M: FModule, c: int) -> ModuleMap:
        return cls(M, M, IntMatrix.identity(M.rank).scale(c))

    @classmethod
    def endomorphism(cls, M: FModule, matrix: IntMatrix) -> ModuleMap:
        return cls(M, M, matrix)

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(vec))

    def __matmul__(self, other: ModuleMap) -> ModuleMap:
        """Composition ``self o other``."""
        if other.target.group != self.source.group:
            raise InvalidModule("composition of incompatible maps")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return (self.source.group == other.source.group
                and self.target.group == other.target.group
                and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.source.group, self.target.group, self.matrix))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_equivariant(self) -> bool:
        lhs = self.target.action @ self.matrix
        rhs = self.matrix @ self.source.action
        return (lhs - rhs).mod_rows(self.target.moduli).is_zero()

    def is_bijective(self) -> bool:
        if self.source.group != self.target.group:
            return False
        # equal orders: bijective iff surjective on Frattini quotients
        return rank_mod(self.matrix, self.source.p) == self.target.rank

    def inverse(self) -> ModuleMap:
        if not self.is_bijective():
            raise InvalidModule("map is not invertible")
        # Aut is finite, so some power of self is the inverse
        ident = IntMatrix.identity(self.source.rank)
        power = ModuleMap.identity(self.source)
        while True:
            nxt = power @ self
            if nxt.matrix == ident:
                return ModuleMap(self.target, self.source, power.matrix)
            power = nxt


# ---------------------------------------------------------------------------
# cohomology of lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyGroup:
    """A Tate cohomology group together with its coordinate data.

    ``quotient.coords`` maps integer vectors of the ambient sublattice
    (ker N_i for H^1, M^{Gamma_i} for H^0-hat) to module coordinates.
    """

    lattice: Lattice
    level: int
    degree: str
    module: FModule
    quotient: FiniteQuotient


def _sigma_module(M: Lattice, i: int, quotient: FiniteQuotient) -> FModule:
    sigma = M.action
    cols = [quotient.coords(sigma.apply(g)) for g in quotient.lifts.columns()]
    k = quotient.group.rank
    action = IntMatrix.from_columns(cols, k) if k else IntMatrix.zeros(0, 0)
    return FModule(M.p, i, M.p ** (M.n - i), quotient.group, action)


def h1(M: Lattice, i: int) -> CohomologyGroup:
    """H^1(Gamma_i, M) = ker N_i / (sigma_i - 1) M with its Gamma/Gamma_i action."""
    M.check_level(i)
    return _h1(M, i)


@functools.lru_cache(maxsize=None)
def _h1(M: Lattice, i: int) -> CohomologyGroup:
    ker = saturated_kernel(M.norm(i))
    image = M.generator(i) - IntMatrix.identity(M.rank)
    quotient = quotient_invariants(image, ker, M.p)
    # FModule validation asserts exponent | p^i and that Gamma_i acts trivially
    module = _sigma_module(M, i, quotient)
    return CohomologyGroup(M, i, "H1", module, quotient)


def h0_hat(M: Lattice, i: int) -> CohomologyGroup:
    """H^0-hat(Gamma_i, M) = M^{Gamma_i} / N_i M."""
    M.check_level(i)
    return _h0_hat(M, i)


@functools.lru_cache(maxsize=None)
def _h0_hat(M: Lattice, i: int) -> CohomologyGroup:
    quotient = norm_quotient(M, i)
    return CohomologyGroup(M, i, "H0hat", _sigma_module(M, i, quotient), quotient)


def _check_map_level(M: Lattice, i: int) -> None:
    if not 1 <= i <= M.n - 1:
        raise BadLevel(f"map index {i} outside [1, {M.n - 1}]")


def cores_map(M: Lattice, i: int) -> ModuleMap:
    """alpha_i : H^1(Gamma_i) -> H^1(Gamma_{i+1}), induced by inclusion."""
    _check_map_level(M, i)
    src, tgt = _h1(M, i), _h1(M, i + 1)
    cols = [tgt.quotient.coords(g) for g in src.quotient.lifts.columns()]
    return _checked_map(src.module, tgt.module, cols)


def res_map(M: Lattice, i: int) -> ModuleMap:
    """beta_i : H^1(Gamma_{i+1}) -> H^1(Gamma_i), induced by the relative norm."""
    _check_map_level(M, i)
    src, tgt = _h1(M, i + 1), _h1(M, i)
    nu = M.relative_norm(i)
    cols = [tgt.quotient.coords(nu.apply(g)) for g in src.quotient.lifts.columns()]
    return _checked_map(src.module, tgt.module, cols)


def _checked_map(source: FModule, target: FModule, cols) -> ModuleMap:
    matrix = (IntMatrix.from_columns(cols, target.rank) if cols
              else IntMatrix.zeros(target.rank, 0))
    f = ModuleMap(source, target, matrix)
    if not f.is_equivariant():
        raise AxiomViolation("induced map is not equivariant",
                             dump=f"source action {source.action}\ntarget action "
                                  f"{target.action}\nmap {f.matrix}")
    return f


def herbrand_quotient_log(M: Lattice, i: int) -> int:
    """log_p(|H^0-hat| / |H^1|) for Gamma_i."""
    return h0_hat(M, i).module.group.v_p - h1(M, i).module.group.v_p
