import json
import os

import pytest

from src.suppvar.algebra import AModule, regular_module, simples, unit_module
from src.suppvar.errors import CacheCorrupt, InvalidParams
from src.suppvar.generators import random_module
from src.suppvar.resolve import (ResolutionStore, kernel_of_cover, minimal_resolution, multiplicity_identity_check,
                                 projective_cover, schanuel_check, syzygy)


def test_cyclic_group_of_order_two(z2):
    res = ResolutionStore().get(unit_module(z2), 6)
    assert res.dims == [2] * 7
    assert res.verify()


def test_klein_four_dims(klein):
    res = ResolutionStore().get(unit_module(klein), 5)
    assert res.dims == [4 * (n + 1) for n in range(6)]
    assert res.syzygies[1].dim == 3
    assert syzygy(unit_module(klein)).dim == 3
    assert res.verify()


def test_sweedler_multiplicities_alternate(sw3):
    trivial = [S.label for S in simples(sw3)].index("trivial")
    other = 1 - trivial
    res = ResolutionStore().get(unit_module(sw3), 5)
    for n in range(6):
        expected = [0, 0]
        expected[trivial if n % 2 == 0 else other] = 1
        assert res.multiplicities(n) == expected
    assert res.dims == [2] * 6


def test_projective_module_resolves_to_zero(klein):
    res = ResolutionStore().get(regular_module(klein), 3)
    assert res.dims == [4, 0, 0, 0]


def test_negative_depth_is_rejected(z2):
    with pytest.raises(InvalidParams):
        ResolutionStore().get(unit_module(z2), -1)


def test_random_modules_verify(sw3, klein):
    for seed in range(4):
        M = random_module(klein if seed % 2 else sw3, seed=seed)
        assert ResolutionStore().get(M, 4).verify()


def test_cache_round_trip(tmp_path, klein):
    M = unit_module(klein)
    store = ResolutionStore(str(tmp_path))
    res = store.get(M, 4)
    path = store.path_for(M)
    assert os.path.exists(path)
    loaded = ResolutionStore(str(tmp_path)).load(M)
    assert loaded.depth == 4
    assert loaded.dims == res.dims


def test_unreadable_cache_is_corrupt(tmp_path, z3):
    M = unit_module(z3)
    store = ResolutionStore(str(tmp_path))
    with open(store.path_for(M), "w") as fh:
        fh.write("{")
    with pytest.raises(CacheCorrupt):
        store.load(M)


def test_cache_for_other_module_is_corrupt(tmp_path, z3):
    M = unit_module(z3)
    store = ResolutionStore(str(tmp_path))
    store.get(M, 3)
    with open(store.path_for(M)) as fh:
        data = json.load(fh)
    data["manifest"]["module_hash"] = "0" * 32
    with open(store.path_for(M), "w") as fh:
        json.dump(data, fh)
    with pytest.raises(CacheCorrupt):
        ResolutionStore(str(tmp_path)).load(M)


def test_schanuel_padding(klein, sw3):
    report = schanuel_check(unit_module(klein), [0])
    assert report.kernel_dim == 3 + 4
    assert report.stably_isomorphic
    assert report.dimension_identity and report.composition_identity
    assert schanuel_check(unit_module(sw3), [0, 1]).stably_isomorphic


def test_schanuel_rejects_unknown_principal(klein):
    with pytest.raises(InvalidParams):
        schanuel_check(unit_module(klein), [3])


@pytest.mark.parametrize("name", ["z2", "klein", "z3", "sw3"])
def test_multiplicity_identity(request, name):
    A = request.getfixturevalue(name)
    for S in simples(A):
        report = multiplicity_identity_check(minimal_resolution(S, 13), 12)
        assert report.holds, report.module
        assert len(report.rows) == 13


def test_store_reports_the_requested_label(klein):
    store = ResolutionStore()
    one = unit_module(klein)
    renamed = AModule(one.algebra, one.action, label="L_h1_0")
    first = store.get(one, 3)
    second = store.get(renamed, 3)
    assert second.module.label == "L_h1_0"
    assert second.syzygies[2].label == "Omega^2(L_h1_0)"
    assert store.get(one, 3).module.label == one.label
    assert second.dims == first.dims
    assert multiplicity_identity_check(second, 2).module == "L_h1_0"


def test_syzygies_of_unit_tensor_match(klein, klein_classes):
    from src.suppvar.algebra import stably_isomorphic, tensor_module
    from src.suppvar.carlson import build_L_zeta
    X = build_L_zeta(klein_classes["x"], "x").module
    res_one = ResolutionStore().get(unit_module(klein), 2)
    res_x = ResolutionStore().get(X, 2)
    for n in (1, 2):
        assert stably_isomorphic(tensor_module(res_one.syzygies[n], X), res_x.syzygies[n])


def test_extending_a_cached_resolution_keeps_the_prefix(tmp_path, klein):
    M = unit_module(klein)
    short = ResolutionStore(str(tmp_path)).get(M, 3)
    longer = ResolutionStore(str(tmp_path)).get(M, 5)
    assert longer.dims[:4] == short.dims
    for n in range(1, 4):
        assert (longer.differentials[n] == short.differentials[n]).all()


def test_projective_cover_of_unit(klein):
    cover = projective_cover(unit_module(klein))
    assert cover.module.dim == 4
    assert cover.multiplicities == [1]
    assert kernel_of_cover(unit_module(klein), cover.module, cover.epi).dim == 3
