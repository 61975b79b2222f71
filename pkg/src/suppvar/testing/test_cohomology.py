import pytest

from src.suppvar.algebra import regular_module, unit_module, zero_module
from src.suppvar.cohomology import engine_for
from src.suppvar.errors import InvalidParams
from src.suppvar.exactfield import rank


def test_ext_dimensions(z2, klein, z3, sw3):
    assert engine_for(z2).ext_dims(unit_module(z2), unit_module(z2), 6) == [1] * 7
    assert engine_for(klein).ext_dims(unit_module(klein), unit_module(klein), 5) == [1, 2, 3, 4, 5, 6]
    assert engine_for(z3).ext_dims(unit_module(z3), unit_module(z3), 6) == [1] * 7
    assert engine_for(sw3).ext_dims(unit_module(sw3), unit_module(sw3), 6) == [1, 0, 1, 0, 1, 0, 1]


def test_ext_with_zero_module(klein):
    assert engine_for(klein).ext_dims(zero_module(klein), unit_module(klein), 3) == [0, 0, 0, 0]


def test_klein_ring_table(klein):
    table = engine_for(klein).ring_table(4)
    assert table.graded_commutative
    assert table.hilbert_function() == [1, 2, 3, 4, 5]
    assert table.to_dict()["parity_mode"] == "full"


def test_ring_table_multiplies_from_structure_constants(klein):
    engine = engine_for(klein)
    table = engine.ring_table(4)
    xy = engine.yoneda_product(engine.ring_class(1, 0), engine.ring_class(1, 1))
    assert table.multiply(1, [1, 0], 1, [0, 1]) == [int(c) for c in xy.coords]
    assert any(table.multiply(1, [1, 1], 1, [1, 1]))


def test_pair_ext_dims_feed_the_pair_variety(klein):
    engine = engine_for(klein)
    one = engine.unit
    assert engine.pair_ext_dims(one, one, 3) == [1, 2, 3, 4]
    assert engine.pair_ext_dims(one, regular_module(klein), 3) == [1, 0, 0, 0]


def test_sweedler_ring_uses_even_degrees(sw3):
    table = engine_for(sw3).ring_table(6)
    assert table.parity_mode == "even"
    assert table.hilbert_function() == [1, 1, 1, 1]
    assert table.graded_commutative


def test_klein_product_is_nonzero(klein, klein_classes):
    engine = engine_for(klein)
    xy = engine.yoneda_product(klein_classes["x"], klein_classes["y"])
    assert xy.degree == 2
    assert not xy.is_zero


def test_degree_one_square_vanishes_in_odd_characteristic(z3):
    engine = engine_for(z3)
    u = engine.ring_class(1, 0)
    assert engine.yoneda_product(u, u).is_zero
    z = engine.ring_class(2, 0)
    assert not engine.yoneda_product(z, z).is_zero


def test_ring_class_out_of_range(klein):
    with pytest.raises(InvalidParams):
        engine_for(klein).ring_class(1, 2)


def test_phi_on_unit_is_identity(klein, klein_classes):
    engine = engine_for(klein)
    x = klein_classes["x"]
    phi = engine.phi_class(x, engine.unit)
    assert [int(c) for c in phi.coords] == [int(c) for c in x.coords]


def test_annihilates_projective_and_zero(klein, klein_classes):
    engine = engine_for(klein)
    x = klein_classes["x"]
    assert engine.annihilates(x, regular_module(klein), 4)
    assert engine.annihilates(x, zero_module(klein), 4)
    assert not engine.annihilates(x, engine.unit, 4)


def test_ext_vanishes_from_projective(klein):
    verdict = engine_for(klein).ext_vanishes(regular_module(klein), unit_module(klein), 6)
    assert verdict.verdict == "vanishes-from-1"
    assert not verdict.red_flag
    nonvanishing = engine_for(klein).ext_vanishes(unit_module(klein), unit_module(klein), 6)
    assert nonvanishing.verdict == "nonvanishing"


def test_annihilator_of_unit_is_trivial(klein):
    record = engine_for(klein).annihilator_truncation(unit_module(klein), 4)
    assert all(not rows for rows in record.annihilators.values())


def test_cocycle_representatives(klein):
    engine = engine_for(klein)
    one = unit_module(klein)
    assert len(engine.cocycle_representatives(one, one, 1)) == 2
    assert engine.cocycle_representatives(one, regular_module(klein), 2) == []


def test_yoneda_product_is_associative(klein, klein_classes):
    engine = engine_for(klein)
    x, y = klein_classes["x"], klein_classes["y"]
    left = engine.yoneda_product(engine.yoneda_product(x, y), x)
    right = engine.yoneda_product(x, engine.yoneda_product(y, x))
    assert [int(c) for c in left.coords] == [int(c) for c in right.coords]


def test_actions_through_either_side_agree(klein, klein_classes):
    engine = engine_for(klein)
    one = unit_module(klein)
    x = klein_classes["x"]
    right = engine.act(x, one, one, 4)
    left = engine.left_action(x, one, one, 4)
    assert right.keys() == left.keys()
    for m in right:
        assert (right[m] == left[m]).all()


def test_unit_action_is_injective(klein, klein_classes):
    engine = engine_for(klein)
    mats = engine.act(klein_classes["x"], engine.unit, engine.unit, 5)
    assert all(mat.shape[1] == m + 1 for m, mat in mats.items())
    assert all(rank(engine.field, mat) == mat.shape[1] for mat in mats.values())


def test_annihilator_of_projective_is_everything(klein):
    engine = engine_for(klein)
    record = engine.annihilator_truncation(regular_module(klein), 4)
    assert {a: len(rows) for a, rows in record.annihilators.items()} == {1: 2, 2: 3}


def test_transverse_carlson_objects_have_no_ext(klein, klein_classes):
    from src.suppvar.carlson import build_L_zeta
    Lx = build_L_zeta(klein_classes["x"], "x").module
    Ly = build_L_zeta(klein_classes["y"], "y").module
    assert engine_for(klein).ext_vanishes(Lx, Ly, 8).verdict == "vanishes-from-1"
    assert engine_for(klein).ext_vanishes(Lx, Lx, 8).verdict == "nonvanishing"


def test_negative_degree_is_rejected(klein):
    with pytest.raises(InvalidParams):
        engine_for(klein).ext_space(unit_module(klein), unit_module(klein), -1)
