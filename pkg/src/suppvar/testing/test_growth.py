from fractions import Fraction

import pytest

from src.suppvar.algebra import regular_module, unit_module, zero_module
from src.suppvar.errors import FormatError, InvalidParams, SequenceTooShort
from src.suppvar.growth import (GrowthSequence, berlekamp_massey, complexity, fixture_report, fpdim_module,
                                fpdims_of_simples, gamma_estimate, hilbert_series_coefficients, load_fixture,
                                pair_variety_dim, perron_root, variety_dim, variety_property_report)
from src.suppvar.resolve import ResolutionStore


def test_berlekamp_massey_finds_shortest_recurrence():
    C, L = berlekamp_massey([1, 1, 2, 3, 5, 8, 13, 21])
    assert L == 2
    assert C == [Fraction(1), Fraction(-1), Fraction(-1)]


@pytest.mark.parametrize("values,gamma", [
    ([5] * 12, 1),
    ([4 * (n + 1) for n in range(12)], 2),
    ([n * n + 1 for n in range(14)], 3),
    ([3] + [0] * 11, 0),
    ([1, 2] * 6, 1),
])
def test_gamma_from_exact_recurrence(values, gamma):
    verdict = gamma_estimate(GrowthSequence(values))
    assert verdict.gamma == gamma
    assert verdict.method == "recurrence-exact"


def test_exponential_growth_has_no_gamma():
    verdict = gamma_estimate(GrowthSequence([2 ** n for n in range(12)]))
    assert verdict.gamma is None
    assert verdict.method == "exponential"


def test_periodic_surds():
    values = ["2+2*sqrt(2)", "3+sqrt(2)"] * 6
    verdict = gamma_estimate(GrowthSequence(values))
    assert verdict.gamma == 1
    assert verdict.method == "recurrence-exact"


def test_float_sequences_fall_back_to_slope():
    verdict = gamma_estimate(GrowthSequence([float(n) ** 2 for n in range(12)]))
    assert verdict.method == "slope-estimate"
    assert verdict.gamma == 3
    assert not verdict.flagged


def test_short_and_negative_sequences():
    with pytest.raises(SequenceTooShort):
        gamma_estimate(GrowthSequence([1, 2, 3]))
    with pytest.raises(InvalidParams):
        GrowthSequence([1, -1, 2])


@pytest.mark.parametrize("matrix,value,exact", [
    ([[0, 1], [2, 0]], 2 ** 0.5, "sqrt(2)"),
    ([[2, 1], [1, 2]], 3.0, "3"),
    ([[1]], 1.0, "1"),
])
def test_perron_root(matrix, value, exact):
    root = perron_root(matrix)
    assert root.value == pytest.approx(value, abs=1e-9)
    assert root.exact == exact
    assert root.lower <= root.value <= root.upper


def test_perron_root_rejects_negative_entries():
    with pytest.raises(InvalidParams):
        perron_root([[1, -1], [0, 1]])


def test_hilbert_series_coefficients():
    assert hilbert_series_coefficients([[0, 1], [4, -1]], [1, 2, 3], 8) == [1, 1, 2, 3, 3, 4, 5, 5]
    with pytest.raises(InvalidParams):
        hilbert_series_coefficients([[0, 1]], [0], 4)


def test_c3_fixture(c3_fixture_path):
    fixture = load_fixture(str(c3_fixture_path))
    assert gamma_estimate(fixture.resolution_sequence("V", 18)).gamma == 1
    assert gamma_estimate(fixture.hilbert_sequence("1", 18)).gamma == 2
    report = fixture_report(fixture, 18)
    assert report["consistent"]
    assert report["fpdim_simples"]["V"] == "sqrt(2)"


def test_malformed_fixture(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "broken"}')
    with pytest.raises(FormatError):
        load_fixture(str(path))


def test_fpdims_of_group_and_sweedler(klein, sw3):
    assert [r.exact for r in fpdims_of_simples(klein)] == ["1"]
    assert [r.exact for r in fpdims_of_simples(sw3)] == ["1", "1"]
    assert fpdim_module(regular_module(sw3)) == 4
    assert ResolutionStore().get(unit_module(klein), 3).fpdims == [4, 8, 12, 16]


def test_complexity_matches_variety_dim(z2, klein, sw3):
    store = ResolutionStore()
    for A, expected in ((z2, 1), (klein, 2), (sw3, 1)):
        one = unit_module(A)
        assert complexity(one, 10, store).gamma == expected
        assert variety_dim(one, 10, store).gamma == expected
    assert complexity(regular_module(klein), 10, store).gamma == 0
    assert variety_dim(zero_module(klein), 10, store).gamma == 0


def test_variety_properties(klein):
    report = variety_property_report(unit_module(klein), regular_module(klein), 10)
    assert report.holds, [c for c in report.checks if not c.holds]


def test_pair_variety_dims(klein, klein_classes):
    from src.suppvar.carlson import build_L_zeta
    one = unit_module(klein)
    assert pair_variety_dim(one, one, 10).gamma == 2
    assert pair_variety_dim(zero_module(klein), one, 10).gamma == 0
    Lx = build_L_zeta(klein_classes["x"], "x").module
    Ly = build_L_zeta(klein_classes["y"], "y").module
    assert pair_variety_dim(Lx, Ly, 10).gamma == 0
    assert pair_variety_dim(one, Lx, 10).gamma == 1
