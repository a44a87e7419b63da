"""Closed-form bounds on cohomology sizes and diagram counts.

Every evaluator works in exact integer arithmetic.  ``r`` counts ramified
primes and ``delta`` is the p-rank of the base class group.  The module also
counts conjugacy classes of automorphisms of small abelian p-groups by brute
force, which feeds the diagram-counting sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, lcm
from typing import NamedTuple, Sequence

from .errors import BadLevel, CapExceeded, MissingField
from .exact_linalg import AbelianPGroup, IntMatrix, is_prime, p_valuation, rank_mod
from .modrep import solve_hom_system

DEFAULT_GROUP_CAP_EXPONENT = 4
DEFAULT_END_CAP = 3 ** 10


@dataclass(frozen=True)
class BoundInput:
    p: int
    n: int = 1
    r: int = 0
    delta: int = 0
    group_order: int | None = None
    p_part_order: int | None = None
    cl_s_rank: int | None = None
    s_f: int | None = None

    def __post_init__(self):
        if not (is_prime(self.p) and self.p % 2):
            raise ValueError(f"p={self.p} is not an odd prime")
        for name in ("n", "r", "delta", "group_order", "p_part_order", "cl_s_rank", "s_f"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.group_order is not None and self.p_part_order is not None:
            if self.p_part_order == 0 or self.group_order % self.p_part_order:
                raise ValueError("|P| must divide |G|")


def _require(inp: BoundInput, *names: str) -> None:
    missing = [name for name in names if getattr(inp, name) is None]
    if missing:
        raise MissingField(f"missing field(s): {', '.join(missing)}")


def thmA_bound(inp: BoundInput) -> int:
    """3 |G| |P|^2 (rk_p Cl_S + |S_f|)."""
    _require(inp, "group_order", "p_part_order", "cl_s_rank", "s_f")
    return 3 * inp.group_order * inp.p_part_order ** 2 * (inp.cl_s_rank + inp.s_f)


class FixedPartBound(NamedTuple):
    value: int
    raw: int
    clamped: bool


def fixedpart_bound(i: int, n: int, r: int, delta: int) -> FixedPartBound:
    """r i (2+n-i) + delta i (n-i+1) - i n + i^2, clamped at 0.

    Bounds v_p of the Gamma-fixed part of H^1(Gamma_i, -) and the
    generator count gamma_i.
    """
    if not 1 <= i <= n - 1:
        raise BadLevel(f"level {i} outside [1, {n - 1}]")
    raw = r * i * (2 + n - i) + delta * i * (n - i + 1) - i * n + i * i
    return FixedPartBound(max(raw, 0), raw, raw < 0)


def rosen_bound(degree: int, r: int, delta: int, p: int | None = None) -> int:
    """degree (r + delta): p-rank bound for the class group in a cyclic p-extension."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if p is not None and p ** p_valuation(degree, p) != degree:
        raise ValueError(f"degree {degree} is not a power of {p}")
    return degree * (r + delta)


def res_cores3_exponents(p: int, r: int, delta: int) -> tuple[int, int]:
    """Exponents of p bounding the restriction and corestriction map counts for n = 3."""
    return (p * (5 * r + 2 * delta) * (6 * r + 4 * delta),
            p * (2 * r + delta) * (4 * r + 3 * delta))


def res_cores3_bounds(p: int, r: int, delta: int) -> tuple[int, int]:
    res, cores = res_cores3_exponents(p, r, delta)
    return p ** res, p ** cores


def adhoc_n2_bound(p: int, r: int, delta: int) -> int:
    """Bound on the number of module structures of the middle entry for n = 3."""
    t = 6 * r + 4 * delta
    return p ** (p * t * t) * comb(t + p, p) ** 2


def thmB1_exponent(r: int, delta: int) -> int:
    return 16 * r * r + 22 * r * delta + 9 * delta * delta


def thmB1_bound(p: int, r: int, delta: int) -> int:
    """p^(16 r^2 + 22 r delta + 9 delta^2)."""
    return p ** thmB1_exponent(r, delta)


def thmB1_unsimplified(p: int, r: int, delta: int) -> int:
    """The product preceding simplification in the n = 2 count."""
    return (p ** (2 * (r + delta) * (3 * r + 2 * delta))
            * comb(3 * r + 2 * delta + p, p) * comb(r + delta + 2, 2))


def thmB2_combination(p: int, r: int, delta: int) -> int:
    """Bound on n_1 n_2 n_3 for n = 3."""
    t = 6 * r + 4 * delta
    return (p ** (p * t * t) * comb(r + delta + 3, 3) * comb(t + p, p) ** 2
            * comb(4 * r + 3 * delta + p * p, p * p))


def thmB2_proof_bound(p: int, r: int, delta: int) -> int:
    """Structure count times restriction and corestriction counts for n = 3."""
    res, cores = res_cores3_exponents(p, r, delta)
    return thmB2_combination(p, r, delta) * p ** res * p ** cores


def counting_ref_bound(N: Sequence[int], s: Sequence[int],
                       restriction_factors: Sequence[tuple[int, int]] = (),
                       corestriction_factors: Sequence[tuple[int, int]] = ()) -> int:
    """prod binom(N_i + s_i, N_i) times the map-count factors.

    Each map factor is a pair (order, exponent): |M_i^{Gamma_{i+1}}| with
    gamma_{i+1} for restrictions, |M_{i+1}[p^i]| with gamma_i for
    corestrictions.
    """
    if len(N) != len(s):
        raise ValueError("N and s must have the same length")
    if any(x < 0 for x in list(N) + list(s)):
        raise ValueError("counts must be nonnegative")
    total = 1
    for Ni, si in zip(N, s):
        total *= comb(Ni + si, Ni)
    for order, exponent in list(restriction_factors) + list(corestriction_factors):
        if order < 1 or exponent < 0:
            raise ValueError("map factors need order >= 1 and exponent >= 0")
        total *= order ** exponent
    return total


# ---------------------------------------------------------------------------
# automorphisms of abelian p-groups
# ---------------------------------------------------------------------------

def abelian_automorphisms(A: AbelianPGroup, end_cap: int = DEFAULT_END_CAP) -> list[IntMatrix]:
    """All automorphisms of A as matrices in its canonical coordinates."""
    ident = IntMatrix.identity(A.rank)
    ends = solve_hom_system(A.p, [(A, A)], [])
    if ends.order > end_cap:
        raise CapExceeded(f"|End(A)| = {ends.order} exceeds cap {end_cap}")
    units = [m[0] for m in ends.elements() if rank_mod(m[0], A.p) == A.rank]
    assert A.rank == 0 or ident in units
    return units


def _closure(gens: list[IntMatrix], ident: IntMatrix, moduli: Sequence[int]) -> set[IntMatrix]:
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = (x @ s).mod_rows(moduli)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(group: list[IntMatrix], moduli: Sequence[int]) -> list[IntMatrix]:
    """Greedy generating set of a finite matrix group, in list order."""
    ident = IntMatrix.identity(len(moduli))
    gens: list[IntMatrix] = []
    span = {ident}
    for g in group:
        if len(span) == len(group):
            break
        if g not in span:
            gens.append(g)
            span = _closure(gens, ident, moduli)
    return gens


def _conjugacy_classes(elements: list[IntMatrix], group: list[IntMatrix],
                       moduli: Sequence[int]) -> list[list[IntMatrix]]:
    # orbits under conjugation by generators are the full conjugacy classes
    order = len(group)
    gens = [(s, s.power_mod_rows(order - 1, moduli)) for s in generating_set(group, moduli)]
    remaining = set(elements)
    classes = []
    for g in elements:
        if g not in remaining:
            continue
        cls = {g}
        frontier = [g]
        while frontier:
            nxt = []
            for x in frontier:
                for s, s_inv in gens:
                    y = (s @ x @ s_inv).mod_rows(moduli)
                    if y not in cls:
                        cls.add(y)
                        nxt.append(y)
            frontier = nxt
        remaining -= cls
        classes.append(sorted(cls, key=lambda m: m.rows))
    return classes


def c_i_classes(A: AbelianPGroup, order_divides: int,
                cap_exponent: int = DEFAULT_GROUP_CAP_EXPONENT,
                end_cap: int = DEFAULT_END_CAP) -> int:
    """Conjugacy classes of Aut(A) made of elements of order dividing ``order_divides``."""
    if order_divides < 1:
        raise ValueError("order bound must be positive")
    if A.v_p > cap_exponent:
        raise CapExceeded(f"|A| = {A.order} exceeds p^{cap_exponent}")
    if A.rank == 0:
        return 1
    group = abelian_automorphisms(A, end_cap)
    ident = IntMatrix.identity(A.rank)
    selected = [g for g in group if g.power_mod_rows(order_divides, A.moduli) == ident]
    return len(_conjugacy_classes(selected, group, A.moduli))


def conjugacy_class_count(A: AbelianPGroup, cap_exponent: int = DEFAULT_GROUP_CAP_EXPONENT,
                          end_cap: int = DEFAULT_END_CAP) -> int:
    """Total number of conjugacy classes of Aut(A)."""
    if A.v_p > cap_exponent:
        raise CapExceeded(f"|A| = {A.order} exceeds p^{cap_exponent}")
    if A.rank == 0:
        return 1
    group = abelian_automorphisms(A, end_cap)
    return len(_conjugacy_classes(group, group, A.moduli))


def automorphism_group_exponent(A: AbelianPGroup, end_cap: int = DEFAULT_END_CAP) -> int:
    """Least common multiple of the element orders of Aut(A)."""
    ident = IntMatrix.identity(A.rank)
    result = 1
    for g in abelian_automorphisms(A, end_cap):
        k, power = 1, g
        while power != ident:
            power = (power @ g).mod_rows(A.moduli)
            k += 1
        result = lcm(result, k)
    return result


def groups_in_range(p: int, max_rank: int, max_exponent: int) -> list[AbelianPGroup]:
    """Abelian p-groups with p-rank <= max_rank and exponent <= p^max_exponent."""
    out = []
    for rank in range(max_rank + 1):
        for exps in product(range(max_exponent, 0, -1), repeat=rank):
            if list(exps) == sorted(exps, reverse=True):
                out.append(AbelianPGroup(p, exps))
    return out


def burns_counting_bound(p: int, n: int, d: Sequence[int],
                         cap_exponent: int = DEFAULT_GROUP_CAP_EXPONENT,
                         end_cap: int = DEFAULT_END_CAP) -> int:
    """Sum over (J_1..J_n), rk J_i <= d_i, e(J_i) <= p^i, of
    prod c_i(J_i) * prod min(e(J_i), e(J_{i+1}))^(2 rk J_i rk J_{i+1})."""
    if len(d) != n:
        raise ValueError(f"expected {n} rank caps")
    levels = [groups_in_range(p, d[i - 1], i) for i in range(1, n + 1)]
    c_values = []
    for i, groups in enumerate(levels, start=1):
        c_values.append({J: c_i_classes(J, p ** (n - i), cap_exponent, end_cap) for J in groups})
    total = 0
    for combo in product(*levels):
        term = 1
        for i, J in enumerate(combo):
            term *= c_values[i][J]
        for J, K in zip(combo, combo[1:]):
            term *= min(J.exponent, K.exponent) ** (2 * J.rank * K.rank)
        total += term
    return total


# ---------------------------------------------------------------------------
# inequality sweeps
# ---------------------------------------------------------------------------

@dataclass
class InequalityReport:
    checks: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def serialize(self) -> str:
        lines = [f"inequality checks: {self.checks}", f"violations: {len(self.violations)}"]
        lines.extend(f"  {v}" for v in self.violations)
        return "\n".join(lines) + "\n"


def verify_binomial_inequalities(a_max: int = 64, c_max: int = 20, d_max: int = 20,
                                 primes: Sequence[int] = (3, 5, 7)) -> InequalityReport:
    """Sweep binom(a, b) <= 2^a, c + d <= d^c (c >= 2, d >= 3) and the chains
    used to simplify the n = 2 and n = 3 counts, for r + delta >= 1."""
    checks = 0
    bad = []
    for a in range(a_max + 1):
        for b in range(a + 1):
            checks += 1
            if comb(a, b) > 2 ** a:
                bad.append(f"binom({a},{b}) > 2^{a}")
    for c in range(2, c_max + 1):
        for d in range(3, d_max + 1):
            checks += 1
            if c + d > d ** c:
                bad.append(f"{c}+{d} > {d}^{c}")
    for p in primes:
        for r in range(c_max + 1):
            for delta in range(d_max + 1):
                if r + delta == 0:
                    continue
                t = 3 * r + 2 * delta
                u = 4 * r + 3 * delta
                chain = [
                    (comb(t + p, p), (t + p) ** t, f"binom({t}+{p},{p}) <= ({t}+{p})^{t}"),
                    ((t + p) ** t, p ** (t * t), f"({t}+{p})^{t} <= {p}^{t}^2"),
                    (comb(r + delta + 2, 2), p ** (r + delta),
                     f"binom({r + delta}+2,2) <= {p}^{r + delta}"),
                    (comb(u + p * p, p * p), (u + p * p) ** u,
                     f"binom({u}+{p * p},{p * p}) <= ({u}+{p * p})^{u}"),
                    ((u + p * p) ** u, p ** (2 * u * u), f"({u}+{p * p})^{u} <= {p}^(2*{u}^2)"),
                    (thmB1_unsimplified(p, r, delta), thmB1_bound(p, r, delta),
                     f"unsimplified n=2 product <= thmB1 at p={p}, r={r}, delta={delta}"),
                ]
                for lhs, rhs, label in chain:
                    checks += 1
                    if lhs > rhs:
                        bad.append(label)
    return InequalityReport(checks, bad)


def monotonicity_violations(p: int, grid: int = 3) -> list[str]:
    """Evaluators that decrease when r or delta grows on [0, grid]^2."""
    evaluators = {
        "fixedpart(1,2)": lambda r, d: fixedpart_bound(1, 2, r, d).value,
        "fixedpart(1,3)": lambda r, d: fixedpart_bound(1, 3, r, d).value,
        "fixedpart(2,3)": lambda r, d: fixedpart_bound(2, 3, r, d).value,
        "rosen": lambda r, d: rosen_bound(p, r, d),
        "res_cores3": lambda r, d: res_cores3_exponents(p, r, d),
        "adhoc": lambda r, d: adhoc_n2_bound(p, r, d),
        "thmB1": lambda r, d: thmB1_bound(p, r, d),
        "thmB2_proof": lambda r, d: thmB2_proof_bound(p, r, d),
    }
    bad = []
    for name, f in evaluators.items():
        for r in range(grid + 1):
            for d in range(grid + 1):
                here = f(r, d)
                here = here if isinstance(here, tuple) else (here,)
                for nr, nd in ((r + 1, d), (r, d + 1)):
                    if nr > grid or nd > grid:
                        continue
                    there = f(nr, nd)
                    there = there if isinstance(there, tuple) else (there,)
                    if any(x > y for x, y in zip(here, there)):
                        bad.append(f"{name} decreases from ({r},{d}) to ({nr},{nd})")
    return bad


def evaluate_all(inp: BoundInput) -> dict[str, object]:
    """Every evaluator that the input supports, keyed by name."""
    p, r, delta = inp.p, inp.r, inp.delta
    out: dict[str, object] = {}
    try:
        out["thmA"] = thmA_bound(inp)
    except MissingField:
        pass
    for i in range(1, inp.n):
        fp = fixedpart_bound(i, inp.n, r, delta)
        out[f"fixedpart[i={i}]"] = fp.value
        if fp.clamped:
            out[f"fixedpart[i={i}].raw"] = fp.raw
    out["rosen[degree=p]"] = rosen_bound(p, r, delta, p)
    res, cores = res_cores3_exponents(p, r, delta)
    out["res_cores3.res_exponent"] = res
    out["res_cores3.cores_exponent"] = cores
    out["adhoc_n2"] = adhoc_n2_bound(p, r, delta)
    out["thmB1"] = thmB1_bound(p, r, delta)
    out["thmB1.exponent"] = thmB1_exponent(r, delta)
    out["thmB1.unsimplified"] = thmB1_unsimplified(p, r, delta)
    out["thmB2_proof"] = thmB2_proof_bound(p, r, delta)
    return out
