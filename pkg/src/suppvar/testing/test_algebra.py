import numpy as np
import pytest

from src.suppvar.algebra import (AlgebraPresentation, algebra_from_json, algebra_generators, algebra_to_json,
                                 cartan_matrix, composition_multiplicities, decompose, direct_sum, hom_space,
                                 is_homomorphism, is_projective, lift_idempotent, matrix_algebra_radical,
                                 module_from_json, module_isomorphic, module_to_json, principal_decomposition,
                                 radical, radical_filtration_multiplicities, radical_layers, regular_module, simples,
                                 split_idempotent, stably_isomorphic, tensor_module, top_multiplicities,
                                 unit_isomorphism, unit_module, validate)
from src.suppvar.errors import FormatError, InvalidParams, InvariantViolation
from src.suppvar.exactfield import FieldSpec, rank
from src.suppvar.generators import group_algebra, random_module, sweedler


def test_generated_algebras_validate(z2, klein, z3, sw3):
    for A in (z2, klein, z3, sw3):
        report = validate(A)
        assert report.valid, report.failures
        assert "antipode" in report.checked


def test_broken_antipode_is_reported(z2):
    # g * g = g keeps associativity and the bialgebra axioms but breaks g S(g) = 1
    mult = z2.mult.copy()
    mult[1, 1] = np.array([0, 1])
    broken = AlgebraPresentation(name="broken", field=z2.field, dim=2, mult=mult, unit=z2.unit,
                                 comul=z2.comul, counit=z2.counit, antipode=z2.antipode)
    report = validate(broken)
    assert not report.valid
    assert {f.identity for f in report.failures} <= {"left antipode", "right antipode"}


def test_non_associative_table_names_the_triple(z2):
    # basis e, a, b: a a = b, a b = 0, b a = a, so (a a) a != a (a a)
    mult = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        mult[0, i, i] = mult[i, 0, i] = 1
    mult[1, 1, 2] = 1
    mult[2, 1, 1] = 1
    A = AlgebraPresentation(name="skew", field=z2.field, dim=3, mult=mult, unit=np.array([1, 0, 0]))
    report = validate(A)
    assert not report.valid
    assert any(f.identity == "associativity" and f.indices[:2] == [1, 1] for f in report.failures)


@pytest.mark.parametrize("p,orders",[(4, [2]), (2, [3]), (3, []), (3, [6])])
def test_group_algebra_rejects_bad_params(p, orders):
    with pytest.raises(InvalidParams):
        group_algebra(p, orders)


def test_sweedler_needs_odd_characteristic():
    with pytest.raises(InvalidParams):
        sweedler(2)


def test_radical_dimensions(z2, klein, z3, sw3):
    assert radical(z2).dim == 1
    assert radical(z2).basis.tolist() == [[1, 1]]
    assert radical(klein).dim == 3
    assert radical(z3).dim == 2
    assert radical(sw3).dim == 2


def test_simples_and_cartan(z2, klein, z3, sw3):
    assert [S.label for S in simples(klein)] == ["trivial"]
    assert cartan_matrix(z2) == [[2]]
    assert cartan_matrix(klein) == [[4]]
    assert cartan_matrix(z3) == [[3]]
    labels = [S.label for S in simples(sw3)]
    assert len(labels) == 2 and "trivial" in labels
    assert cartan_matrix(sw3) == [[1, 1], [1, 1]]
    assert [P.dim for P in principal_decomposition(sw3)] == [2, 2]


def test_hom_dimensions(z2, klein):
    one = unit_module(z2)
    A = regular_module(z2)
    assert hom_space(one, A).shape[0] == 1
    assert hom_space(A, one).shape[0] == 1
    assert hom_space(A, A).shape[0] == 2
    assert hom_space(regular_module(klein), unit_module(klein)).shape[0] == 1


def test_tensor_with_unit_is_identity(klein):
    M = random_module(klein, seed=3)
    certificate = unit_isomorphism(M)
    assert is_homomorphism(tensor_module(unit_module(klein), M), M, certificate)
    assert is_homomorphism(tensor_module(M, unit_module(klein)), M, certificate)
    assert module_isomorphic(tensor_module(unit_module(klein), M), M).isomorphic
    assert module_isomorphic(tensor_module(M, unit_module(klein)), M).isomorphic


def test_decompose_and_projectivity(z2, sw3):
    M = direct_sum(unit_module(z2), regular_module(z2))
    report = decompose(M)
    assert sorted(report.dims) == [1, 2]
    assert sorted(report.projective) == [False, True]
    assert not is_projective(M)
    assert is_projective(regular_module(z2))
    assert sorted(decompose(regular_module(sw3)).dims) == [2, 2]
    assert stably_isomorphic(M, unit_module(z2))


def test_top_of_regular_module(klein, sw3):
    assert top_multiplicities(regular_module(klein)) == [1]
    assert top_multiplicities(regular_module(sw3)) == [1, 1]


@pytest.mark.parametrize("name", ["z2", "klein", "z3", "sw3"])
@pytest.mark.parametrize("seed", range(20))
def test_radical_filtration_counts_composition_factors(request, name, seed):
    A = request.getfixturevalue(name)
    M = random_module(A, seed=seed, summands=2, relations=1 + seed % 3)
    assert radical_filtration_multiplicities(M) == composition_multiplicities(M)


def test_algebra_json_keeps_content_hash(sw3):
    again = algebra_from_json(algebra_to_json(sw3))
    assert again.content_hash == sw3.content_hash


def test_module_file_for_other_algebra_is_rejected(z2, z3):
    with pytest.raises(FormatError):
        module_from_json(module_to_json(unit_module(z2)), z3)


@pytest.mark.parametrize("name", ["klein", "sw3"])
def test_tensor_with_projective_is_projective(request, name):
    A = request.getfixturevalue(name)
    M = random_module(A, seed=11)
    P = regular_module(A)
    assert is_projective(tensor_module(P, M))
    assert is_projective(tensor_module(M, P))


def test_decompose_is_seed_stable(sw3):
    M = direct_sum(random_module(sw3, seed=1), random_module(sw3, seed=2))
    first, second = decompose(M, seed=0), decompose(M, seed=9)
    assert sorted(first.dims) == sorted(second.dims)
    assert sorted(first.multiplicities) == sorted(second.multiplicities)


def test_isomorphism_certificate_and_witnesses(sw3):
    one, other = sorted(simples(sw3), key=lambda S: S.label != "trivial")
    result = module_isomorphic(one, one)
    assert result.isomorphic and result.certificate.shape == (1, 1)
    assert module_isomorphic(one, other).witness == "composition factors"
    assert module_isomorphic(one, regular_module(sw3)).witness == "dimension"


def test_algebra_generators_and_loewy_layers(z2, klein):
    assert len(algebra_generators(z2)) == 1
    assert len(algebra_generators(klein)) == 2
    assert [L.shape[1] for L in radical_layers(regular_module(z2))] == [2, 1, 0]
    assert [L.shape[1] for L in radical_layers(regular_module(klein))] == [4, 3, 1, 0]


def test_split_idempotent_is_lifted_modulo_the_radical(klein, sw3):
    rng = np.random.default_rng(5)
    for M in (direct_sum(unit_module(klein), regular_module(klein)), regular_module(sw3)):
        F = M.field
        e = split_idempotent(M, rng)
        assert np.array_equal(F.matmul(e, e), e)
        assert is_homomorphism(M, M, e)
        assert 0 < rank(F, e) < M.dim
    with pytest.raises(InvariantViolation):
        split_idempotent(unit_module(klein), rng)


def test_lift_idempotent_recovers_a_perturbed_projection(z2):
    F = z2.field
    # diag(1, 0) moved by a nilpotent: x^2 - x lies in the strictly upper triangular matrices
    x = np.array([[1, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.int64)
    e = lift_idempotent(F, F.matmul, x, steps=4)
    assert np.array_equal(F.matmul(e, e), e)
    assert rank(F, e) == 1


def test_decompose_groups_isomorphic_summands(klein):
    M = direct_sum(unit_module(klein), unit_module(klein), regular_module(klein))
    report = decompose(M, seed=4)
    assert report.dims == [1, 1, 4]
    assert report.projective == [False, False, True]
    assert report.multiplicities == [2, 1]


def test_radical_over_extension_field(z2):
    F4 = FieldSpec(2, 2, (1, 1, 1))
    A = AlgebraPresentation(name="F4[Z2]", field=F4, dim=2, mult=z2.mult.copy(), unit=z2.unit.copy(),
                            comul=z2.comul.copy(), counit=z2.counit.copy(), antipode=z2.antipode.copy())
    J = radical(A)
    assert J.dim == 1
    assert not np.any(A.product(J.basis[0], J.basis[0]))
    assert len(simples(A)) == 1
    # span{1, w E12} over F_4 has radical spanned by w E12
    w = 2
    mats = np.stack([F4.eye(2), np.array([[0, w], [0, 0]], dtype=np.int64)])
    rows = matrix_algebra_radical(F4, mats)
    assert rows.shape[0] == 1
    assert rows[0, 0] == 0 and rows[0, 1] != 0
