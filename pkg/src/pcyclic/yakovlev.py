"""Yakovlev diagrams: construction from lattices, axioms, equivalence, enumeration.

A diagram over Gamma = C_{p^n} is a chain M_1, ..., M_n of finite modules,
M_i over (Z/p^i)[Gamma/Gamma_i], with forward maps alpha_i : M_i -> M_{i+1}
and backward maps beta_i : M_{i+1} -> M_i such that beta_i alpha_i is the
relative norm of Gamma_{i+1}/Gamma_i and alpha_i beta_i is multiplication
by p.  Maps are matrices in the canonical coordinates of the entries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import AxiomViolation, CapExceeded, InconsistentProfile, UnsupportedLevel
from .exact_linalg import AbelianPGroup, IntMatrix, rank_mod
from .lattice import CharacterProfile, Lattice, character_profile
from .modrep import (
    DEFAULT_CAP,
    HomConstraint,
    HomSolution,
    HomTerm,
    jordan_partition,
    module_direct_sum,
    module_invariants,
    partitions,
    solve_hom_system,
    y_module,
)
from .tate import FModule, ModuleMap, cores_map, h1, res_map


def _matrix_text(A: IntMatrix) -> str:
    if A.nrows == 0 or A.ncols == 0:
        return f"[] ({A.nrows}x{A.ncols})"
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in A.rows) + "]"


@dataclass(frozen=True)
class YakovlevDiagram:
    p: int
    n: int
    modules: tuple[FModule, ...]
    forward: tuple[ModuleMap, ...]
    backward: tuple[ModuleMap, ...]
    label: str = field(default="", compare=False)

    def module(self, i: int) -> FModule:
        """M_i, 1-based."""
        return self.modules[i - 1]

    def alpha(self, i: int) -> ModuleMap:
        return self.forward[i - 1]

    def beta(self, i: int) -> ModuleMap:
        return self.backward[i - 1]

    def relative_norm(self, i: int) -> IntMatrix:
        """Action of sum_{j<p} sigma_{i+1}^j on M_i."""
        M = self.module(i)
        step = self.p ** (self.n - i - 1)
        return M.group_ring_element({j * step: 1 for j in range(self.p)})

    def size(self) -> int:
        total = 1
        for M in self.modules:
            total *= M.order
        return total

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.modules)

    def axiom_failures(self) -> list[str]:
        p, n = self.p, self.n
        problems = []
        if len(self.modules) != n or len(self.forward) != n - 1 or len(self.backward) != n - 1:
            return [f"expected {n} entries and {n - 1} maps in each direction"]
        for i, M in enumerate(self.modules, start=1):
            if M.rank and M.group.exponents[0] > i:
                problems.append(f"M_{i} has exponent {M.group.exponent} not dividing {p}^{i}")
            if not M.action_power(p ** (n - i)).is_identity():
                problems.append(f"Gamma_{i} does not act trivially on M_{i}")
        for i in range(1, n):
            a, b = self.alpha(i), self.beta(i)
            Mi, Mj = self.module(i), self.module(i + 1)
            if a.source.group != Mi.group or a.target.group != Mj.group:
                problems.append(f"alpha_{i} has the wrong source or target")
                continue
            if b.source.group != Mj.group or b.target.group != Mi.group:
                problems.append(f"beta_{i} has the wrong source or target")
                continue
            if not a.is_equivariant():
                problems.append(f"alpha_{i} is not equivariant")
            if not b.is_equivariant():
                problems.append(f"beta_{i} is not equivariant")
            if (b.matrix @ a.matrix).mod_rows(Mi.moduli) != self.relative_norm(i):
                problems.append(f"beta_{i} alpha_{i} differs from the relative norm")
            if (a.matrix @ b.matrix).mod_rows(Mj.moduli) != \
                    IntMatrix.identity(Mj.rank).scale(p).mod_rows(Mj.moduli):
                problems.append(f"alpha_{i} beta_{i} differs from multiplication by p")
        return problems

    def check_axioms(self) -> None:
        problems = self.axiom_failures()
        if problems:
            raise AxiomViolation("; ".join(problems), dump=self.serialize())

    def serialize(self) -> str:
        lines = [f"diagram p={self.p} n={self.n}"]
        for i, M in enumerate(self.modules, start=1):
            lines.append(f"M{i}: {M.group}")
            lines.append(f"  action: {_matrix_text(M.action)}")
        for i in range(1, self.n):
            lines.append(f"alpha{i}: {_matrix_text(self.alpha(i).matrix)}")
            lines.append(f"beta{i}: {_matrix_text(self.beta(i).matrix)}")
        return "\n".join(lines) + "\n"


def build_diagram(M: Lattice) -> YakovlevDiagram:
    """Delta(M): the chain of H^1(Gamma_i, M) with corestriction and restriction."""
    modules = tuple(h1(M, i).module for i in range(1, M.n + 1))
    forward = tuple(cores_map(M, i) for i in range(1, M.n))
    backward = tuple(res_map(M, i) for i in range(1, M.n))
    D = YakovlevDiagram(M.p, M.n, modules, forward, backward, label=M.label)
    D.check_axioms()
    return D


# ---------------------------------------------------------------------------
# morphisms and equivalence
# ---------------------------------------------------------------------------

def _identity(k: int) -> IntMatrix:
    return IntMatrix.identity(k)


def morphism_group(D: YakovlevDiagram, E: YakovlevDiagram) -> HomSolution:
    """All diagram morphisms (kappa_i : D.M_i -> E.M_i), as a finite group.

    Constraints: each kappa_i equivariant, kappa_{i+1} alpha_i = alpha'_i kappa_i
    and beta'_i kappa_{i+1} = kappa_i beta_i.
    """
    blocks = [(Dm.group, Em.group) for Dm, Em in zip(D.modules, E.modules)]
    cons = []
    for b, (Dm, Em) in enumerate(zip(D.modules, E.modules)):
        cons.append(HomConstraint(Dm.group, Em.group, (
            HomTerm(Em.action, b, _identity(Dm.rank)),
            HomTerm(-_identity(Em.rank), b, Dm.action),
        )))
    for i in range(1, D.n):
        Di, Dj = D.module(i), D.module(i + 1)
        Ei, Ej = E.module(i), E.module(i + 1)
        cons.append(HomConstraint(Di.group, Ej.group, (
            HomTerm(_identity(Ej.rank), i, D.alpha(i).matrix),
            HomTerm(-E.alpha(i).matrix, i - 1, _identity(Di.rank)),
        )))
        cons.append(HomConstraint(Dj.group, Ei.group, (
            HomTerm(E.beta(i).matrix, i, _identity(Dj.rank)),
            HomTerm(-_identity(Ei.rank), i - 1, D.beta(i).matrix),
        )))
    return solve_hom_system(D.p, blocks, cons)


def _is_iso_tuple(mats: Sequence[IntMatrix], D: YakovlevDiagram, p: int) -> bool:
    return all(rank_mod(K, p) == M.rank for K, M in zip(mats, D.modules))


def find_diagram_isomorphism(D: YakovlevDiagram, E: YakovlevDiagram, cap: int = DEFAULT_CAP,
                             seed: int = 0, tries: int = 256
                             ) -> tuple[IntMatrix, ...] | None:
    """Level-wise isomorphisms commuting with all alpha, beta, or None.

    The morphism group is enumerated when its order is at most ``cap``;
    beyond that seeded sampling is tried and CapExceeded is raised if it
    is inconclusive.
    """
    if (D.p, D.n) != (E.p, E.n):
        return None
    if any(a.group != b.group for a, b in zip(D.modules, E.modules)):
        return None
    if max(D.size(), E.size()) > cap:
        raise CapExceeded(f"diagram size exceeds cap {cap}")
    if any(module_invariants(a) != module_invariants(b) for a, b in zip(D.modules, E.modules)):
        return None
    H = morphism_group(D, E)
    # an isomorphism identifies Hom(D, E) with End(D) and with End(E)
    if H.order != morphism_group(D, D).order or H.order != morphism_group(E, E).order \
            or H.order != morphism_group(E, D).order:
        return None
    if H.order <= cap:
        for mats in H.elements():
            if _is_iso_tuple(mats, D, D.p):
                return mats
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        mats = H.random_element(rng)
        if _is_iso_tuple(mats, D, D.p):
            return mats
    raise CapExceeded(f"morphism group of order {H.order} exceeds cap {cap}")


def are_equivalent(D: YakovlevDiagram, E: YakovlevDiagram, cap: int = DEFAULT_CAP) -> bool:
    return find_diagram_isomorphism(D, E, cap) is not None


# ---------------------------------------------------------------------------
# permutation multiplicities
# ---------------------------------------------------------------------------

def permutation_multiplicities(M: Lattice, reference: CharacterProfile | Sequence[int] | None = None
                               ) -> tuple[int, ...]:
    """Multiplicities a_0..a_n of Z_p[Gamma/Gamma_i] beyond a reference part.

    Solves sum_{i<=k} a_i = m_k(M) - m_k(reference), where m_k counts the
    characters with kernel Gamma_k.
    """
    m = character_profile(M).multiplicities
    if reference is None:
        ref = (0,) * len(m)
    elif isinstance(reference, CharacterProfile):
        ref = reference.multiplicities
    else:
        ref = tuple(reference)
    if len(ref) != len(m):
        raise InconsistentProfile(f"reference has {len(ref)} entries, expected {len(m)}")
    partial = [x - y for x, y in zip(m, ref)]
    a = [partial[0]] + [partial[k] - partial[k - 1] for k in range(1, len(partial))]
    if any(x < 0 for x in a):
        raise InconsistentProfile(f"negative multiplicities {tuple(a)} for reference {ref}")
    return tuple(a)


# ---------------------------------------------------------------------------
# enumeration for n = 2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramConstraints:
    """rk_p(M_i) <= ranks[i-1]; optional cap on |M_1| * ... * |M_n|."""

    ranks: tuple[int, ...]
    size_cap: int | None = None


@dataclass(frozen=True)
class EnumerationResult:
    p: int
    n: int
    constraints: DiagramConstraints
    representatives: tuple[YakovlevDiagram, ...]
    class_counts: tuple[tuple[str, str, int], ...]

    @property
    def count(self) -> int:
        return len(self.representatives)

    def serialize(self) -> str:
        lines = [f"enumeration p={self.p} n={self.n} ranks={list(self.constraints.ranks)}",
                 f"classes: {self.count}"]
        for m1, m2, k in self.class_counts:
            lines.append(f"  M1={m1} M2={m2}: {k}")
        return "\n".join(lines) + "\n"


def modp_modules(p: int, max_dim: int) -> list[FModule]:
    """One (Z/p)[C_p]-module per Jordan type of dimension <= max_dim."""
    out = [FModule.zero(p, 1, p)]
    for d in range(1, max_dim + 1):
        for lam in partitions(d, p):
            out.append(module_direct_sum(*(y_module(k, p) for k in lam)))
    return out


def abelian_groups(p: int, max_rank: int, max_exponent: int) -> list[AbelianPGroup]:
    out = [AbelianPGroup(p)]
    for r in range(1, max_rank + 1):
        for lam in partitions_bounded(r, max_exponent):
            out.append(AbelianPGroup(p, lam))
    return out


def partitions_bounded(length: int, top: int) -> Iterator[tuple[int, ...]]:
    """Nonincreasing tuples of the given length with entries in 1..top."""
    if length == 0:
        yield ()
        return
    for first in range(top, 0, -1):
        for rest in partitions_bounded(length - 1, first):
            yield (first,) + rest


def _equivariant_homs(M: FModule, N: FModule) -> HomSolution:
    return solve_hom_system(M.p, [(M.group, N.group)], [HomConstraint(M.group, N.group, (
        HomTerm(N.action, 0, _identity(M.rank)),
        HomTerm(-_identity(N.rank), 0, M.action),
    ))])


def _automorphism_pairs(M: FModule, search_cap: int) -> list[tuple[IntMatrix, IntMatrix]]:
    """(g, g^{-1}) for every automorphism g of M."""
    E = _equivariant_homs(M, M)
    if E.order > search_cap:
        raise CapExceeded(f"End(M) has order {E.order}, search cap {search_cap}")
    units = [m[0] for m in E.elements() if rank_mod(m[0], M.p) == M.rank]
    ident = IntMatrix.identity(M.rank)
    # the inverse is the unique unit h with g h = 1
    return [(g, next(u for u in units if (g @ u).mod_rows(M.moduli) == ident)) for g in units]


def _orbit_count(valid: list[tuple[IntMatrix, IntMatrix]], aut1, aut2, M1: FModule,
                 M2: FModule) -> list[tuple[IntMatrix, IntMatrix]]:
    """Representatives of the orbits of Aut(M_1) x Aut(M_2) on (alpha, beta).

    (g, h) sends (alpha, beta) to (h alpha g^{-1}, g beta h^{-1}).
    """
    remaining = set(valid)
    reps = []
    for pair in valid:
        if pair not in remaining:
            continue
        reps.append(pair)
        a, b = pair
        for g, g_inv in aut1:
            for h, h_inv in aut2:
                image = ((h @ a @ g_inv).mod_rows(M2.moduli), (g @ b @ h_inv).mod_rows(M1.moduli))
                remaining.discard(image)
    return reps


def enumerate_diagrams(p: int, n: int = 2, constraints: DiagramConstraints | None = None,
                       cap: int = 3 ** 6, search_cap: int = 3 ** 12,
                       reverse: bool = False) -> EnumerationResult:
    """Equivalence classes of diagrams over C_{p^2} within rank caps.

    Diagrams with different entries are never equivalent, so the classes
    over a fixed pair (M_1, M_2) are the orbits of Aut(M_1) x Aut(M_2) on
    the admissible pairs (alpha, beta).  ``cap`` bounds the diagram size,
    ``search_cap`` the number of candidates examined per entry pair.
    ``reverse`` flips the traversal order; the count must not change.
    """
    if n != 2:
        raise UnsupportedLevel("diagram enumeration is implemented for n = 2 only")
    constraints = constraints or DiagramConstraints((1, 1))
    if len(constraints.ranks) != n:
        raise UnsupportedLevel(f"expected {n} rank caps, got {constraints.ranks}")
    d1, d2 = constraints.ranks
    size_cap = min(cap, constraints.size_cap or cap)
    firsts = modp_modules(p, d1)
    seconds = [FModule.trivial_action(g, 2, 1) for g in abelian_groups(p, d2, 2)]
    if max(M.order for M in firsts) * max(M.order for M in seconds) > size_cap:
        raise CapExceeded(f"diagrams up to size "
                          f"{max(M.order for M in firsts) * max(M.order for M in seconds)} "
                          f"exceed cap {size_cap}")
    entry_pairs = [(M1, M2) for M1 in firsts for M2 in seconds]
    if reverse:
        entry_pairs.reverse()
    reps: list[YakovlevDiagram] = []
    counts = []
    for M1, M2 in entry_pairs:
        homs_a = _equivariant_homs(M1, M2)
        homs_b = _equivariant_homs(M2, M1)
        if homs_a.order * homs_b.order > search_cap:
            raise CapExceeded(f"{homs_a.order * homs_b.order} candidate map pairs "
                              f"exceed search cap {search_cap}")
        skeleton = YakovlevDiagram(p, 2, (M1, M2), (ModuleMap.zero(M1, M2),),
                                   (ModuleMap.zero(M2, M1),))
        norm = skeleton.relative_norm(1)
        p_mult = IntMatrix.identity(M2.rank).scale(p).mod_rows(M2.moduli)
        valid = []
        for (a,) in homs_a.elements():
            for (b,) in homs_b.elements():
                if (b @ a).mod_rows(M1.moduli) == norm and (a @ b).mod_rows(M2.moduli) == p_mult:
                    valid.append((a, b))
        if reverse:
            valid.reverse()
        if not valid:
            counts.append((_entry_label(M1), str(M2.group), 0))
            continue
        aut1 = _automorphism_pairs(M1, search_cap)
        aut2 = _automorphism_pairs(M2, search_cap)
        orbit_reps = _orbit_count(valid, aut1, aut2, M1, M2)
        for a, b in orbit_reps:
            D = YakovlevDiagram(p, 2, (M1, M2), (ModuleMap(M1, M2, a),), (ModuleMap(M2, M1, b),))
            D.check_axioms()
            reps.append(D)
        counts.append((_entry_label(M1), str(M2.group), len(orbit_reps)))
    if reverse:
        counts.reverse()
    return EnumerationResult(p, n, constraints, tuple(reps), tuple(counts))


def _entry_label(M: FModule) -> str:
    return str(jordan_partition(M)) if M.rank else "0"
