"""The invariant suite behind ``pcyclic verify``.

Each check returns a line of deterministic text; nothing time- or
machine-dependent is printed, so two runs give byte-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import bounds
from .errors import PCyclicError
from .exact_linalg import AbelianPGroup
from .lattice import (
    augmentation_ideal,
    c_value,
    catalog,
    cyclotomic_lattice,
    direct_sum,
    permutation_lattice,
    random_lattice,
    trivial_lattice,
)
from .modrep import (
    ext1_modp,
    ext1_modp2,
    ext1_modp_closed,
    ext1_modp_resolution,
    fixed_subgroup,
    hom_group,
    hom_order_modp,
    indecomposable_count_modp,
    jordan_partition,
    kappa,
    random_modp_module,
    y_module,
)
from .tate import h0_hat, h1
from .yakovlev import DiagramConstraints, are_equivalent, build_diagram, enumerate_diagrams


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def check_ext_ledger(primes=(3, 5)) -> CheckResult:
    points = 0
    bad = []
    for p in primes:
        for i in range(1, p + 1):
            for j in range(1, p + 1):
                points += 1
                if ext1_modp_closed(i, j, p) != ext1_modp_resolution(i, j, p):
                    bad.append(f"modp({i},{j},{p})")
                ext1_modp(i, j, p)
                g = ext1_modp2(i, j, p)
                if g.order > p ** p:
                    bad.append(f"modp2({i},{j},{p}) too large")
                if i == p and g.order != p ** j:
                    bad.append(f"modp2({p},{j},{p}) has order {g.order}")
    return CheckResult("ext-ledger", not bad, f"{points} grid points" + _bad(bad))


def check_hom_ledger(primes=(3, 5)) -> CheckResult:
    bad = []
    points = 0
    for p in primes:
        for i in range(1, p + 1):
            for j in range(1, p + 1):
                points += 1
                direct = hom_group(y_module(i, p), y_module(j, p)).order
                if direct != p ** min(i, j) or hom_order_modp(i, j, p) != direct:
                    bad.append(f"({i},{j},{p})")
    return CheckResult("hom-ledger", not bad, f"{points} grid points" + _bad(bad))


def check_kappa_identity(count: int = 200) -> CheckResult:
    bad = []
    for seed in range(count):
        p = (3, 5)[seed % 2]
        M, truth = random_modp_module(p, p, seed)
        k = kappa(M)
        if not (k == fixed_subgroup(M).v_p == jordan_partition(M).block_count()
                == truth.block_count()):
            bad.append(str(seed))
    return CheckResult("kappa-identity", not bad, f"{count} random modules" + _bad(bad))


def check_c_formula(count: int = 100) -> CheckResult:
    bad = []
    for seed in range(count):
        n = 1 + seed % 2
        M, recipe = random_lattice(3, n, seed)
        for i in range(1, n + 1):
            if c_value(M, i) != recipe.non_projective_rank(i):
                bad.append(f"seed {seed} level {i}")
    return CheckResult("c-formula", not bad, f"{count} random lattices" + _bad(bad))


def _diagram_suite(p: int = 3, randoms: int = 12):
    lattices = []
    for n in (1, 2):
        lattices.extend(e.lattice for e in catalog(p, n))
    lattices.append(direct_sum(trivial_lattice(p, 2), cyclotomic_lattice(p, 2, 1),
                               cyclotomic_lattice(p, 2, 2)))
    for seed in range(randoms):
        lattices.append(random_lattice(p, 1 + seed % 2, 1000 + seed, max_rank=9)[0])
    return lattices


def check_diagram_axioms() -> CheckResult:
    bad = []
    lattices = _diagram_suite()
    for k, M in enumerate(lattices):
        try:
            D = build_diagram(M)
            for j in range(M.n + 1):
                E = build_diagram(direct_sum(M, permutation_lattice(M.p, M.n, j)))
                if not are_equivalent(D, E):
                    bad.append(f"#{k} + Z[G/G{j}]")
        except PCyclicError as exc:
            bad.append(f"#{k}: {type(exc).__name__}")
    return CheckResult("diagram-axioms", not bad, f"{len(lattices)} lattices" + _bad(bad))


def check_enumeration() -> CheckResult:
    d = (1, 1)
    forward = enumerate_diagrams(3, 2, DiagramConstraints(d))
    backward = enumerate_diagrams(3, 2, DiagramConstraints(d), reverse=True)
    bound = bounds.burns_counting_bound(3, 2, d)
    ok = forward.count == backward.count and forward.count <= bound
    return CheckResult("enumeration", ok,
                       f"classes {forward.count} (reversed {backward.count}) <= bound {bound}")


def check_bound_examples() -> CheckResult:
    B = bounds
    cases = [
        ("thmB1(3,1,0)", B.thmB1_bound(3, 1, 0), 3 ** 16),
        ("thmB1(3,0,1)", B.thmB1_bound(3, 0, 1), 3 ** 9),
        ("thmA(3,3,0,2)", B.thmA_bound(B.BoundInput(3, group_order=3, p_part_order=3,
                                                     cl_s_rank=0, s_f=2)), 162),
        ("thmA(9,9,1,1)", B.thmA_bound(B.BoundInput(3, group_order=9, p_part_order=9,
                                                     cl_s_rank=1, s_f=1)), 4374),
        ("fixedpart(1,2,1,1)", B.fixedpart_bound(1, 2, 1, 1).value, 4),
        ("fixedpart(1,2,0,0)", B.fixedpart_bound(1, 2, 0, 0).value, 0),
        ("fixedpart(2,3,1,0)", B.fixedpart_bound(2, 3, 1, 0).value, 4),
        ("rosen(3,1,0)", B.rosen_bound(3, 1, 0), 3),
        ("rosen(9,2,1)", B.rosen_bound(9, 2, 1), 27),
        ("res_cores3(3,1,0)", B.res_cores3_exponents(3, 1, 0), (90, 24)),
        ("res_cores3(3,0,1)", B.res_cores3_exponents(3, 0, 1), (24, 9)),
        ("adhoc(3,0,0)", B.adhoc_n2_bound(3, 0, 0), 1),
        ("adhoc(3,1,0)", B.adhoc_n2_bound(3, 1, 0), 3 ** 108 * 84 ** 2),
        ("c_1(Z/3)", B.c_i_classes(AbelianPGroup(3, (1,)), 3), 1),
        ("c_1((Z/3)^2)", B.c_i_classes(AbelianPGroup(3, (1, 1)), 3), 2),
        ("burns(3,1,(1))", B.burns_counting_bound(3, 1, (1,)), 2),
        ("burns(3,2,(1,1))", B.burns_counting_bound(3, 2, (1, 1)), 22),
    ]
    bad = [name for name, got, want in cases if got != want]
    bad += B.monotonicity_violations(3) + B.monotonicity_violations(5)
    return CheckResult("bound-evaluators", not bad, f"{len(cases)} examples, monotone grid"
                       + _bad(bad))


def check_inequalities() -> CheckResult:
    report = bounds.verify_binomial_inequalities()
    return CheckResult("inequalities", report.ok,
                       f"{report.checks} checks, {len(report.violations)} violations")


def check_indecomposables() -> CheckResult:
    cases = [((3, 3), 3), ((3, 9), 9), ((5, 5), 5)]
    bad = [f"{pq}" for pq, want in cases if indecomposable_count_modp(*pq) != want]
    return CheckResult("indecomposables", not bad, "counts 3, 9, 5" + _bad(bad))


def check_cohomology_examples() -> CheckResult:
    bad = []
    for n in (1, 2):
        for j in range(n + 1):
            M = permutation_lattice(3, n, j)
            for i in range(1, n + 1):
                if not h1(M, i).module.is_zero():
                    bad.append(f"h1 perm({n},{j}) level {i}")
                want = AbelianPGroup(3, (min(i, j),) * (3 ** (n - max(i, j)))) if min(i, j) \
                    else AbelianPGroup(3)
                if h0_hat(M, i).module.group != want:
                    bad.append(f"h0 perm({n},{j}) level {i}")
    D = build_diagram(augmentation_ideal(3, 2))
    if D.alpha(1).is_zero():
        bad.append("alpha_1 of the augmentation ideal vanishes")
    return CheckResult("cohomology-examples", not bad, "permutation lattices, augmentation ideal"
                       + _bad(bad))


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_ext_ledger,
    check_hom_ledger,
    check_kappa_identity,
    check_c_formula,
    check_cohomology_examples,
    check_diagram_axioms,
    check_enumeration,
    check_bound_examples,
    check_inequalities,
    check_indecomposables,
)


def _bad(items) -> str:
    if not items:
        return ""
    shown = ", ".join(items[:5])
    more = f" (+{len(items) - 5} more)" if len(items) > 5 else ""
    return f"; failures: {shown}{more}"


def run_verify() -> tuple[bool, str]:
    """Run every check; return overall status and the report text."""
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except PCyclicError as exc:
            results.append(CheckResult(check.__name__.removeprefix("check_").replace("_", "-"),
                                       False, f"{type(exc).__name__}: {exc}"))
    ok = all(r.ok for r in results)
    lines = ["pcyclic verify"] + [r.line() for r in results]
    lines.append(f"summary: {sum(r.ok for r in results)}/{len(results)} checks passed")
    return ok, "\n".join(lines) + "\n"
