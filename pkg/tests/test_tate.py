import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from pcyclic.errors import BadLevel, InvalidModule
from pcyclic.exact_linalg import AbelianPGroup, IntMatrix, p_valuation
from pcyclic.lattice import (
    augmentation_ideal,
    catalog,
    cyclotomic_lattice,
    direct_sum,
    permutation_lattice,
    random_lattice,
    regular_lattice,
    trivial_lattice,
)
from pcyclic.tate import FModule, ModuleMap, cores_map, h0_hat, h1, herbrand_quotient_log, res_map


def snf_group(A: IntMatrix, p: int) -> AbelianPGroup:
    """Torsion of Z^r / A Z^n restricted to its saturation, via sympy's SNF.

    ker N_i is saturated and spans the same space as (sigma_i - 1)M, so the
    nonzero invariants of sigma_i - 1 are the invariants of H^1; the same
    holds for N_i and H^0-hat.
    """
    D = sympy_snf(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
    inv = [abs(int(D[k, k])) for k in range(min(D.shape)) if D[k, k] != 0]
    return AbelianPGroup(p, tuple(sorted((p_valuation(d, p) for d in inv if d != 1),
                                         reverse=True)))


def oracle_h1(M, i):
    return snf_group(M.generator(i) - IntMatrix.identity(M.rank), M.p)


def oracle_h0(M, i):
    return snf_group(M.norm(i), M.p)


def test_trivial_and_free_lattices():
    for i in (1, 2):
        assert h1(trivial_lattice(3, 2), i).module.is_zero()
        assert h0_hat(trivial_lattice(3, 2), i).module.group == AbelianPGroup(3, (i,))
        assert h1(regular_lattice(3, 2), i).module.is_zero()
        assert h0_hat(regular_lattice(3, 2), i).module.is_zero()


def test_permutation_lattices_have_no_h1():
    for n in (1, 2):
        for j in range(n + 1):
            for i in range(1, n + 1):
                M = permutation_lattice(3, n, j)
                assert h1(M, i).module.is_zero()
                assert h0_hat(M, i).module.group == oracle_h0(M, i)


def test_cyclotomic_examples():
    H = h1(cyclotomic_lattice(3, 1, 1), 1).module
    assert H.group == AbelianPGroup(3, (1,))
    assert h0_hat(cyclotomic_lattice(3, 1, 1), 1).module.is_zero()
    M = cyclotomic_lattice(3, 2, 2)
    assert h1(M, 1).module.group == AbelianPGroup(3, (1, 1, 1))
    assert h1(M, 2).module.group == AbelianPGroup(3, (1,))


def test_catalog_against_sympy_oracle():
    for n in (1, 2, 3):
        for entry in catalog(3, n):
            M = entry.lattice
            for i in range(1, n + 1):
                assert h1(M, i).module.group == oracle_h1(M, i), (entry.name, i)
                assert h0_hat(M, i).module.group == oracle_h0(M, i), (entry.name, i)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_random_lattices_against_sympy_oracle(seed, n):
    M, _ = random_lattice(3, n, seed)
    for i in range(1, n + 1):
        assert h1(M, i).module.group == oracle_h1(M, i)
        assert h0_hat(M, i).module.group == oracle_h0(M, i)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_herbrand_quotient_is_additive(seed):
    M, recipe = random_lattice(3, 2, seed)
    entries = {e.name: e.lattice for e in catalog(3, 2)}
    for i in (1, 2):
        expected = sum(k * herbrand_quotient_log(entries[name], i)
                       for name, k in recipe.multiplicities)
        assert herbrand_quotient_log(M, i) == expected


def test_herbrand_quotients_of_building_blocks():
    # log_p h(Z) = i, h(Z[Gamma]) = 1, h(Z[zeta_p]) = 1/p over C_p
    assert herbrand_quotient_log(trivial_lattice(3, 2), 2) == 2
    assert herbrand_quotient_log(regular_lattice(3, 2), 1) == 0
    assert herbrand_quotient_log(cyclotomic_lattice(3, 1, 1), 1) == -1


def test_gamma_i_acts_trivially_on_cohomology():
    M = direct_sum(augmentation_ideal(3, 2), cyclotomic_lattice(3, 2, 1))
    for i in (1, 2):
        H = h1(M, i).module
        assert H.q == 3 ** (2 - i) and H.a == i
        assert H.action_power(H.q).is_identity()


def test_cores_and_res_axioms_on_augmentation_ideal():
    M = augmentation_ideal(3, 2)
    a, b = cores_map(M, 1), res_map(M, 1)
    assert a.source.group == AbelianPGroup(3, (1,))
    assert a.target.group == AbelianPGroup(3, (2,))
    assert a.matrix == IntMatrix([[3]])
    assert b.matrix == IntMatrix([[1]])
    assert (a @ b) == ModuleMap.scalar(a.target, 3)


def test_map_index_range():
    with pytest.raises(BadLevel):
        cores_map(trivial_lattice(3, 2), 2)
    with pytest.raises(BadLevel):
        res_map(trivial_lattice(3, 1), 1)
    with pytest.raises(BadLevel):
        h1(trivial_lattice(3, 1), 2)


def test_fmodule_validation():
    G = AbelianPGroup(3, (1, 1))
    with pytest.raises(InvalidModule):
        FModule(3, 1, 3, G, IntMatrix([[0, 1], [2, 0]]))   # order 4, not dividing 3
    with pytest.raises(InvalidModule):
        FModule(3, 1, 1, AbelianPGroup(3, (2,)), IntMatrix([[1]]))
    with pytest.raises(InvalidModule):
        # Z/3 -> Z/9 entry 1 is not a homomorphism
        FModule(3, 2, 1, AbelianPGroup(3, (2, 1)), IntMatrix([[1, 1], [0, 1]]))


def test_module_map_inverse_and_bijectivity():
    J = IntMatrix([[1, 0], [1, 1]])
    M = FModule(3, 1, 3, AbelianPGroup(3, (1, 1)), J)
    f = ModuleMap.endomorphism(M, IntMatrix([[2, 0], [1, 2]]))
    assert f.is_equivariant() and f.is_bijective()
    g = f.inverse()
    assert g @ f == ModuleMap.identity(M)
    assert not ModuleMap.endomorphism(M, IntMatrix([[0, 0], [1, 0]])).is_bijective()
    with pytest.raises(InvalidModule):
        ModuleMap.endomorphism(M, IntMatrix([[0, 0], [1, 0]])).inverse()


def test_group_ring_element_is_norm():
    M = FModule(3, 1, 3, AbelianPGroup(3, (1, 1, 1)),
                IntMatrix([[1, 0, 0], [1, 1, 0], [0, 1, 1]]))
    N = M.group_ring_element({0: 1, 1: 1, 2: 1})
    # on a single Jordan block of size p the norm is (A - 1)^(p-1)
    assert N == IntMatrix([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
