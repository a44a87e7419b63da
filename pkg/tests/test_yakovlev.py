import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcyclic.errors import (
    AxiomViolation,
    CapExceeded,
    InconsistentProfile,
    InvalidModule,
    UnsupportedLevel,
)
from pcyclic.exact_linalg import AbelianPGroup, IntMatrix
from pcyclic.lattice import (
    augmentation_ideal,
    catalog,
    character_profile,
    conjugate,
    cyclotomic_lattice,
    direct_sum,
    permutation_lattice,
    random_lattice,
    random_unimodular,
    regular_lattice,
    trivial_lattice,
)
from pcyclic.modrep import module_direct_sum, y_module
from pcyclic.tate import FModule, ModuleMap
from pcyclic.yakovlev import (
    DiagramConstraints,
    YakovlevDiagram,
    are_equivalent,
    build_diagram,
    enumerate_diagrams,
    find_diagram_isomorphism,
    morphism_group,
    permutation_multiplicities,
)


def test_catalog_diagrams_satisfy_axioms():
    for n in (1, 2, 3):
        for entry in catalog(3, n):
            D = build_diagram(entry.lattice)
            assert D.axiom_failures() == [], entry.name


def test_augmentation_ideal_diagram():
    D = build_diagram(augmentation_ideal(3, 2))
    assert [M.group for M in D.modules] == [AbelianPGroup(3, (1,)), AbelianPGroup(3, (2,))]
    assert D.alpha(1).matrix == IntMatrix([[3]])
    assert D.beta(1).matrix == IntMatrix([[1]])


def test_cyclotomic_diagram_entries():
    D = build_diagram(cyclotomic_lattice(3, 2, 2))
    assert [M.group for M in D.modules] == [AbelianPGroup(3, (1, 1, 1)), AbelianPGroup(3, (1,))]
    assert build_diagram(regular_lattice(3, 2)).is_zero()
    assert build_diagram(trivial_lattice(3, 2)).is_zero()


def test_permutation_summands_do_not_change_the_diagram():
    for n in (1, 2):
        for entry in catalog(3, n):
            D = build_diagram(entry.lattice)
            for j in range(n + 1):
                E = build_diagram(direct_sum(entry.lattice, permutation_lattice(3, n, j)))
                assert are_equivalent(D, E), (entry.name, j)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_lattice_diagrams(seed):
    M, _ = random_lattice(3, 2, seed, max_rank=9)
    D = build_diagram(M)
    assert D.axiom_failures() == []
    U = random_unimodular(M.rank, random.Random(seed))
    assert are_equivalent(D, build_diagram(conjugate(M, U)))


def test_inequivalent_diagrams():
    D1 = build_diagram(cyclotomic_lattice(3, 2, 1))
    D2 = build_diagram(augmentation_ideal(3, 2))
    assert not are_equivalent(D1, D2)
    assert find_diagram_isomorphism(D1, D1) is not None


def test_axiom_violation_dumps_matrices():
    good = build_diagram(augmentation_ideal(3, 2))
    M1, M2 = good.modules
    bad = YakovlevDiagram(3, 2, (M1, M2), (ModuleMap.zero(M1, M2),), good.backward)
    assert bad.axiom_failures()
    with pytest.raises(AxiomViolation) as info:
        bad.check_axioms()
    assert "alpha1: [0]" in info.value.dump


def test_morphism_group_of_zero_diagram():
    D = build_diagram(regular_lattice(3, 2))
    assert morphism_group(D, D).order == 1


def test_permutation_multiplicities():
    assert permutation_multiplicities(regular_lattice(3, 2)) == (1, 0, 0)
    assert permutation_multiplicities(trivial_lattice(3, 2)) == (0, 0, 1)
    assert permutation_multiplicities(permutation_lattice(3, 2, 1)) == (0, 1, 0)
    M = direct_sum(cyclotomic_lattice(3, 2, 2), trivial_lattice(3, 2))
    ref = character_profile(cyclotomic_lattice(3, 2, 2))
    # the extra summand is Z = Z[G/G_2]
    assert permutation_multiplicities(M, ref) == (0, 0, 1)
    mixed = direct_sum(regular_lattice(3, 2), regular_lattice(3, 2), permutation_lattice(3, 2, 1))
    assert permutation_multiplicities(mixed) == (2, 1, 0)


def test_permutation_multiplicities_errors():
    with pytest.raises(InconsistentProfile):
        permutation_multiplicities(cyclotomic_lattice(3, 2, 2))
    with pytest.raises(InconsistentProfile):
        permutation_multiplicities(regular_lattice(3, 2), (0, 0))


def _all_group_homs(M: FModule, N: FModule):
    """Every group homomorphism M -> N, by exhaustion over entry residues."""
    ranges = [range(m) for m in N.moduli for _ in range(M.rank)]
    for entries in itertools.product(*ranges):
        F = IntMatrix([entries[r * M.rank:(r + 1) * M.rank] for r in range(N.rank)], M.rank)
        try:
            yield ModuleMap(M, N, F)
        except InvalidModule:
            continue


def _nonincreasing(length: int, top: int):
    return [t for t in itertools.product(range(top, 0, -1), repeat=length)
            if list(t) == sorted(t, reverse=True)]


def brute_force_class_count(p: int, d1: int, d2: int) -> int:
    """Classify all valid n = 2 diagrams by pairwise isomorphism search."""
    firsts = [FModule.zero(p, 1, p)]
    for dim in range(1, d1 + 1):
        for length in range(1, dim + 1):
            for blocks in _nonincreasing(length, p):
                if sum(blocks) == dim:
                    firsts.append(module_direct_sum(*(y_module(k, p) for k in blocks)))
    groups = [AbelianPGroup(p, e) for r in range(d2 + 1) for e in _nonincreasing(r, 2)]
    seconds = [FModule.trivial_action(g, 2, 1) for g in groups]
    reps: list[YakovlevDiagram] = []
    for M1 in firsts:
        for M2 in seconds:
            alphas = [a for a in _all_group_homs(M1, M2) if a.is_equivariant()]
            betas = [b for b in _all_group_homs(M2, M1) if b.is_equivariant()]
            for a in alphas:
                for b in betas:
                    D = YakovlevDiagram(p, 2, (M1, M2), (a,), (b,))
                    if D.axiom_failures():
                        continue
                    if not any(are_equivalent(D, R) for R in reps):
                        reps.append(D)
    return len(reps)


def test_enumeration_small_cases():
    assert enumerate_diagrams(3, 2, DiagramConstraints((0, 0))).count == 1
    assert enumerate_diagrams(3, 2, DiagramConstraints((1, 0))).count == 2
    assert enumerate_diagrams(3, 2, DiagramConstraints((0, 1))).count == 2
    result = enumerate_diagrams(3, 2, DiagramConstraints((1, 1)))
    assert result.count == 7
    assert [k for _, _, k in result.class_counts] == [1, 0, 1, 1, 1, 3]


@pytest.mark.parametrize("d", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
def test_enumeration_matches_brute_force_classification(d):
    assert enumerate_diagrams(3, 2, DiagramConstraints(d)).count == brute_force_class_count(3, *d)


def test_enumeration_representatives_are_pairwise_inequivalent():
    reps = enumerate_diagrams(3, 2, DiagramConstraints((1, 1))).representatives
    for D, E in itertools.combinations(reps, 2):
        assert not are_equivalent(D, E)
    for D in reps:
        assert D.axiom_failures() == []


def test_enumeration_is_order_independent():
    forward = enumerate_diagrams(3, 2, DiagramConstraints((1, 1)))
    backward = enumerate_diagrams(3, 2, DiagramConstraints((1, 1)), reverse=True)
    assert forward.count == backward.count
    assert forward.class_counts == backward.class_counts
    assert forward.serialize() == backward.serialize()


def test_enumeration_limits():
    with pytest.raises(UnsupportedLevel):
        enumerate_diagrams(3, 3, DiagramConstraints((1, 1, 1)))
    with pytest.raises(CapExceeded):
        enumerate_diagrams(3, 2, DiagramConstraints((3, 3)))
    with pytest.raises(CapExceeded):
        enumerate_diagrams(3, 2, DiagramConstraints((1, 1)), search_cap=5)
