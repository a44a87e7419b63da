import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pcyclic.errors import BadLevel, InvalidLattice
from pcyclic.exact_linalg import IntMatrix, rank_mod
from pcyclic.lattice import (
    Lattice,
    augmentation_ideal,
    c_value,
    catalog,
    character_profile,
    conjugate,
    cyclic_permutation_matrix,
    cyclotomic_coefficients,
    cyclotomic_lattice,
    direct_sum,
    max_free_rank,
    norm_quotient,
    permutation_lattice,
    random_lattice,
    regular_lattice,
    trivial_lattice,
)


def test_cyclic_permutation_matrix_shifts_basis():
    P = cyclic_permutation_matrix(3)
    assert P.apply((1, 0, 0)) == (0, 1, 0)
    assert P.apply((0, 0, 1)) == (1, 0, 0)
    assert (P ** 3).is_identity()


def test_permutation_lattices():
    assert permutation_lattice(3, 1, 0).action == cyclic_permutation_matrix(3)
    # Gamma/Gamma_1 has order 3 inside C_9
    assert permutation_lattice(3, 2, 1).action == cyclic_permutation_matrix(3)
    assert permutation_lattice(3, 2, 2).rank == 1
    assert regular_lattice(5, 1).rank == 5
    assert trivial_lattice(3, 2).action.is_identity()


def test_cyclotomic_coefficients_match_sympy():
    x = sympy.symbols("x")
    for p, k in [(3, 1), (3, 2), (5, 1), (3, 3)]:
        poly = sympy.Poly(sympy.cyclotomic_poly(p ** k, x), x)
        assert cyclotomic_coefficients(p, k) == [int(c) for c in reversed(poly.all_coeffs())]


def test_cyclotomic_lattice_satisfies_its_polynomial():
    M = cyclotomic_lattice(3, 2, 2)
    assert M.rank == 6
    A = M.action
    total = IntMatrix.identity(6) + A ** 3 + A ** 6
    assert total.is_zero()


def test_lattice_validation():
    with pytest.raises(InvalidLattice):
        Lattice(3, 1, IntMatrix([[0, 1], [1, 0]]))
    with pytest.raises(InvalidLattice):
        Lattice(4, 1, IntMatrix.identity(1))
    with pytest.raises(InvalidLattice):
        Lattice(2, 1, IntMatrix.identity(1))
    with pytest.raises(InvalidLattice):
        Lattice(3, 0, IntMatrix.identity(1))
    with pytest.raises(BadLevel):
        trivial_lattice(3, 1).norm(2)


def test_generator_and_norm_of_subgroups():
    M = regular_lattice(3, 2)
    # sigma_1 = sigma^3 generates the subgroup of order 3
    assert M.generator(1) == M.action ** 3
    assert M.generator(0).is_identity()
    N = M.norm(2)
    assert all(x == 1 for x in N.entries())
    assert M.relative_norm(0) == M.norm(1)


def test_character_profiles():
    assert character_profile(regular_lattice(3, 2)).multiplicities == (1, 1, 1)
    assert character_profile(trivial_lattice(3, 2)).multiplicities == (0, 0, 1)
    assert character_profile(permutation_lattice(3, 2, 1)).multiplicities == (0, 1, 1)
    assert character_profile(cyclotomic_lattice(3, 2, 1)).multiplicities == (0, 1, 0)
    assert character_profile(cyclotomic_lattice(3, 2, 2)).multiplicities == (1, 0, 0)
    assert character_profile(augmentation_ideal(3, 2)).multiplicities == (1, 1, 0)


def test_c_values_of_catalog():
    assert c_value(regular_lattice(3, 2), 1) == 0
    assert c_value(regular_lattice(3, 2), 2) == 0
    assert c_value(trivial_lattice(3, 2), 1) == 1
    assert c_value(cyclotomic_lattice(3, 1, 1), 1) == 2
    I = augmentation_ideal(3, 2)
    assert (I.rank, c_value(I, 1), c_value(I, 2)) == (8, 2, 8)
    # Z[G/G1] restricted to Gamma_1 is three trivial lattices
    assert c_value(permutation_lattice(3, 2, 1), 1) == 3


def test_catalog_free_multiplicities_agree_with_computation():
    for n in (1, 2):
        for entry in catalog(3, n):
            for i in range(1, n + 1):
                assert max_free_rank(entry.lattice, i).rank == entry.free_multiplicity(i), entry.name


def test_free_rank_witness_traces_are_independent():
    M = direct_sum(regular_lattice(3, 1), cyclotomic_lattice(3, 1, 1), regular_lattice(3, 1))
    free = max_free_rank(M, 1, witness=True)
    assert free.rank == 2
    traces = [M.norm(1).apply(v) for v in free.witness]
    assert rank_mod(IntMatrix(traces, M.rank), 3) == 2


def test_norm_quotient_of_trivial_lattice():
    assert norm_quotient(trivial_lattice(3, 2), 2).group.exponents == (2,)
    assert norm_quotient(regular_lattice(3, 1), 1).group.order == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_random_lattice_recipe_oracle(seed, n):
    M, recipe = random_lattice(3, n, seed)
    assert M.rank <= 12
    for i in range(1, n + 1):
        assert c_value(M, i) == recipe.non_projective_rank(i)
        assert max_free_rank(M, i).rank == recipe.free_rank(i)


def test_random_lattice_is_deterministic():
    assert random_lattice(3, 2, 17)[0] == random_lattice(3, 2, 17)[0]


def test_conjugation_preserves_invariants():
    M = augmentation_ideal(3, 2)
    U = IntMatrix.identity(M.rank)
    U = U + IntMatrix([[int(r == 0 and c == 1) for c in range(M.rank)] for r in range(M.rank)])
    N = conjugate(M, U)
    assert N.action != M.action
    assert character_profile(N) == character_profile(M)
    assert [c_value(N, i) for i in (1, 2)] == [c_value(M, i) for i in (1, 2)]
