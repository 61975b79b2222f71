import numpy as np
import pytest

from src.suppvar.algebra import (decompose, direct_sum, is_projective, module_isomorphic, regular_module,
                                 stably_isomorphic)
from src.suppvar.carlson import (build_L_zeta, check_product_ses, check_tensor_variety, complexity_ladder,
                                 connectedness_report, find_reducing_element, phi_is_zero, power,
                                 product_sequence, realize, ses_bookkeeping, split_by_variety)
from src.suppvar.cohomology import engine_for
from src.suppvar.errors import CannotSplit, OddDegree, PreconditionViolation, ZeroClass, ZeroProduct
from src.suppvar.resolve import syzygy

D = 10


def test_carlson_objects_of_low_dimension(z2, z3, sw3):
    assert build_L_zeta(engine_for(z2).ring_class(1, 0), "u").module.dim == 0
    assert build_L_zeta(engine_for(z3).ring_class(2, 0), "z").module.dim == 0
    assert build_L_zeta(engine_for(sw3).ring_class(2, 0), "z").module.dim == 0


def test_klein_carlson_objects(klein, klein_classes):
    x, y = klein_classes["x"], klein_classes["y"]
    Lx = build_L_zeta(x, "x")
    assert Lx.module.dim == 2
    assert Lx.omega.dim == 3
    assert Lx.embedding.shape == (3, 2)
    assert not np.any(klein.field.matmul(Lx.zeta_hat, Lx.embedding))
    xy = engine_for(klein).yoneda_product(x, y)
    Lxy = build_L_zeta(xy, "xy").module
    assert Lxy.dim == 4
    Ly = build_L_zeta(y, "y").module
    assert module_isomorphic(Lxy, direct_sum(Lx.module, syzygy(Ly))).isomorphic


def test_rejected_classes(klein, z3):
    engine = engine_for(klein)
    with pytest.raises(ZeroClass):
        build_L_zeta(engine.ring_space(1).element(np.zeros(2, dtype=np.int64)))
    with pytest.raises(PreconditionViolation):
        build_L_zeta(engine.ring_class(0, 0))
    with pytest.raises(OddDegree):
        build_L_zeta(engine_for(z3).ring_class(1, 0))


def test_realize_products(klein, klein_classes):
    X = realize([klein_classes["x"], klein_classes["y"]], ["x", "y"])
    assert X.dim == 4
    assert is_projective(X)
    assert realize([], algebra=klein).dim == 1
    with pytest.raises(PreconditionViolation):
        realize([])


def test_power(klein_classes):
    x = klein_classes["x"]
    assert power(x, 1) is x
    square = power(x, 2)
    assert square.degree == 2
    assert not square.is_zero
    with pytest.raises(PreconditionViolation):
        power(x, 0)


def test_tensor_variety_drops_by_one(klein, klein_classes):
    report = check_tensor_variety(klein_classes["x"], engine_for(klein).unit, D, predicted=1, label="x")
    assert report.holds
    assert report.injective_on_tail
    assert (report.variety_dim_module, report.variety_dim_tensor) == (2, 1)


def test_product_sequence_bookkeeping(klein_classes):
    report = check_product_ses(klein_classes["x"], klein_classes["y"], D, ("x", "y"))
    assert (report.syzygy_dim, report.left_dim, report.product_dim, report.projective_dim) == (2, 2, 4, 0)
    assert report.dimension_identity and report.composition_identity
    assert report.kernel_stable and report.middle_stable
    assert report.middle_dim == 12
    with pytest.raises(PreconditionViolation):
        check_product_ses(klein_classes["x"], klein_classes["y"], 1, ("x", "y"))


def test_zero_product_is_refused(z3):
    u = engine_for(z3).ring_class(1, 0)
    with pytest.raises(ZeroProduct):
        check_product_ses(u, u, D, ("u", "u"))


def test_phi_on_unit_and_carlson_object(klein, klein_classes):
    x = klein_classes["x"]
    verdict = phi_is_zero(x, engine_for(klein).unit, D, "x")
    assert not verdict.zero
    assert verdict.by_action == verdict.by_stable_isomorphism
    Lx = build_L_zeta(x, "x").module
    assert phi_is_zero(power(x, 2), Lx, D, "x^2").zero


def test_reducing_element_for_unit(klein):
    result = find_reducing_element(engine_for(klein).unit, D)
    assert result.zeta.degree == 1
    assert (result.before.gamma, result.after.gamma) == (2, 1)
    assert result.to_dict()["reduced_dim"] == 2


def test_reducing_element_needs_positive_variety(klein):
    with pytest.raises(PreconditionViolation):
        find_reducing_element(regular_module(klein), D)


def test_split_by_variety(klein, klein_classes):
    x, y = klein_classes["x"], klein_classes["y"]
    Lxy = build_L_zeta(engine_for(klein).yoneda_product(x, y), "xy").module
    report = split_by_variety(Lxy, x, y, D, seed=0, labels=("x", "y"))
    assert sorted(S.dim for S in report.summands) == [2, 2]
    assert [c.gamma for c in report.complexities] == [1, 1]
    assert report.to_dict()["exponent"] >= 1


def test_unit_cannot_split(klein, klein_classes):
    with pytest.raises(CannotSplit):
        split_by_variety(engine_for(klein).unit, klein_classes["x"], klein_classes["y"], D, labels=("x", "y"))


def test_complexity_ladder_on_small_groups(z2):
    ladder = complexity_ladder(z2, D)
    assert ladder.top == 1
    assert [r.dim for r in ladder.rungs] == [1, 0]
    assert ladder.holds


@pytest.mark.slow
def test_complexity_ladder_klein(klein):
    ladder = complexity_ladder(klein, D)
    assert [r.dim for r in ladder.rungs] == [1, 2, 4]
    assert ladder.holds


@pytest.mark.slow
def test_unit_is_connected(klein):
    report = connectedness_report(engine_for(klein).unit, D)
    assert report.connected
    assert report.rows[0].pairs_tried == 10
    assert decompose(engine_for(klein).unit).dims == [1]


def test_tensor_variety_of_transverse_lines(klein, klein_classes):
    Ly = build_L_zeta(klein_classes["y"], "y").module
    report = check_tensor_variety(klein_classes["x"], Ly, D, predicted=0, label="x")
    assert report.holds
    assert report.tensor_projective
    projective = check_tensor_variety(klein_classes["x"], regular_module(klein), D, predicted=0, label="x")
    assert projective.holds and projective.variety_dim_tensor == 0


def test_product_sequence_over_cyclic_groups(z2, z3):
    u = engine_for(z2).ring_class(1, 0)
    report = check_product_ses(u, u, D, ("u", "u"))
    assert (report.syzygy_dim, report.left_dim, report.product_dim, report.projective_dim) == (0, 0, 0, 0)
    assert report.composition_identity
    z = engine_for(z3).ring_class(2, 0)
    assert check_product_ses(z, z, D, ("z", "z")).dimension_identity


def test_product_sequence_for_a_square(klein_classes):
    report = check_product_ses(klein_classes["x"], klein_classes["x"], D, ("x", "x"))
    assert report.dimension_identity and report.composition_identity


def test_phi_for_cyclic_group_and_projective(z2, klein, klein_classes):
    u = engine_for(z2).ring_class(1, 0)
    assert not phi_is_zero(u, engine_for(z2).unit, D, "u").zero
    assert phi_is_zero(klein_classes["x"], regular_module(klein), D, "x").zero


def test_reduction_to_projective(z2):
    result = find_reducing_element(engine_for(z2).unit, D)
    assert result.label == "h1_0"
    assert result.after.gamma == 0
    assert result.to_dict()["reduced_projective"]


def test_product_sequence_is_built_from_the_chain_lift(klein, klein_classes):
    x, y = klein_classes["x"], klein_classes["y"]
    K, E = product_sequence(x, y)
    Lx = build_L_zeta(x, "x").module
    Ly = build_L_zeta(y, "y").module
    Lxy = build_L_zeta(engine_for(klein).yoneda_product(x, y), "xy").module
    assert E.dim == K.dim + Lx.dim
    assert stably_isomorphic(K, syzygy(Ly))
    assert stably_isomorphic(E, Lxy)


def test_bookkeeping_fails_for_the_wrong_kernel(klein, klein_classes):
    x, y = klein_classes["x"], klein_classes["y"]
    K, E = product_sequence(x, y)
    Lx = build_L_zeta(x, "x").module
    Lxy = build_L_zeta(engine_for(klein).yoneda_product(x, y), "xy").module
    book = ses_bookkeeping(K, E, engine_for(klein).unit, Lx, Lxy)
    assert not book["kernel_stable"]
    assert not book["dimension_identity"]
    assert not book["composition_identity"]
    wrong_middle = ses_bookkeeping(K, E, syzygy(build_L_zeta(y, "y").module), Lx, Lx)
    assert not wrong_middle["middle_stable"]
    assert not wrong_middle["dimension_identity"]
