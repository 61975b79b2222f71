"""The bundled corpus: four small Hopf algebras and the objects the acceptance runs sweep over."""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from .algebra import (AlgebraPresentation, AModule, composition_multiplicities, decompose, is_projective,
                      principal_decomposition, radical_filtration_multiplicities, regular_module, simples,
                      tensor_module)
from .carlson import (build_L_zeta, check_product_ses, check_tensor_variety, connectedness_report,
                      find_reducing_element, phi_is_zero, split_by_variety)
from .cohomology import engine_for
from .config import read_config
from .errors import CannotSplit, InvalidParams, SuppVarError
from .generators import group_algebra, random_module, sweedler
from .growth import complexity, fixture_report, gamma_estimate, load_fixture, perron_root, variety_dim
from .resolve import multiplicity_identity_check, schanuel_check

logger = logging.getLogger(__name__)

corpus_config = read_config()['Corpus']
FIXTURE = Path(__file__).resolve().parents[2] / corpus_config.get('fixture', 'data/c3_fixture.json')
FIXTURE_LENGTH = int(corpus_config.get('fixture_length', 18))
RANDOM_MODULES = int(corpus_config.get('random_modules', 20))


def corpus_algebras() -> dict:
    algebras = [group_algebra(2, [2]), group_algebra(2, [2, 2]), group_algebra(3, [3]), sweedler(3)]
    return {A.name: A for A in algebras}


def named_classes(A: AlgebraPresentation, D: int, store=None) -> dict:
    """Basis classes of H(C) in degrees <= 2 as h{degree}_{index}, plus the usual short names.

    Two degree-one classes are x and y, a single one is u; in odd characteristic
    the first degree-two class is z.
    """
    engine = engine_for(A, store)
    out = {}
    for a in engine.ring_degrees(min(D, 2)):
        space = engine.ring_space(a)
        for i in range(space.dim):
            out[f"h{a}_{i}"] = space.basis_class(i)
    if A.field.p == 2:
        one = engine.ring_space(1)
        if one.dim == 1:
            out["u"] = one.basis_class(0)
        elif one.dim >= 2:
            out["x"], out["y"] = one.basis_class(0), one.basis_class(1)
    elif engine.ring_space(2).dim:
        out["z"] = engine.ring_space(2).basis_class(0)
    return out


def parse_zeta(engine, token: str) -> tuple:
    """DEG:INDEX -> (label, class)."""
    try:
        degree, index = (int(part) for part in token.split(":"))
    except ValueError as e:
        raise InvalidParams("classes are written DEG:INDEX", token=token) from e
    return f"h{degree}_{index}", engine.ring_class(degree, index)


def corpus_objects(A: AlgebraPresentation, D: int, store=None) -> list:
    """(label, module): simples, their first two syzygies, Carlson objects of low degree and x (x) y products."""
    engine = engine_for(A, store)
    objects = []
    for S in simples(A):
        res = engine.resolution(S, 2)
        objects += [(S.label, S), (f"Omega({S.label})", res.syzygies[1]), (f"Omega^2({S.label})", res.syzygies[2])]
    classes = named_classes(A, D, store)
    carlson = {}
    for label, zeta in classes.items():
        if not label.startswith("h"):
            continue
        carlson[label] = build_L_zeta(zeta, label, store).module
        objects.append((f"L_{label}", carlson[label]))
    if "x" in classes:
        Lx = build_L_zeta(classes["x"], "x", store).module
        Ly = build_L_zeta(classes["y"], "y", store).module
        objects.append(("L_x(x)L_y", tensor_module(Lx, Ly)))
    return objects


class ObjectRow(BaseModel):
    algebra: str
    object: str
    dim: int
    complexity: Optional[int]
    variety_dim: Optional[int]
    complexity_method: str
    variety_method: str
    projective: bool
    holds: bool


class CheckRow(BaseModel):
    algebra: str
    check: str
    holds: bool
    detail: dict = {}


class CorpusReport(BaseModel):
    depth: int
    seed: int
    objects: list[ObjectRow]
    checks: list[CheckRow]
    holds: bool


def _object_row(name: str, label: str, X: AModule, D: int, store) -> ObjectRow:
    cx = complexity(X, D, store)
    vd = variety_dim(X, D, store)
    projective = is_projective(X)
    holds = (cx.gamma == vd.gamma and cx.method == vd.method == "recurrence-exact"
             and projective == (vd.gamma == 0))
    if not holds:
        logger.warning("%s / %s: complexity %s, variety dim %s, projective %s",
                       name, label, cx.gamma, vd.gamma, projective)
    return ObjectRow(algebra=name, object=label, dim=X.dim, complexity=cx.gamma, variety_dim=vd.gamma,
                     complexity_method=cx.method, variety_method=vd.method, projective=projective, holds=holds)


def _attempt(name: str, check: str, fn) -> CheckRow:
    try:
        holds, detail = fn()
    except SuppVarError as e:
        return CheckRow(algebra=name, check=check, holds=False, detail=e.to_json())
    return CheckRow(algebra=name, check=check, holds=bool(holds), detail=detail)


def _fixture_checks(path: Path = FIXTURE, length: int = FIXTURE_LENGTH) -> list:
    """Complexities read off the bundled fixture and the Perron root of a two-cycle."""
    def fixture():
        data = load_fixture(str(path))
        report = fixture_report(data, length)
        gammas = (gamma_estimate(data.resolution_sequence("V", length)).gamma,
                  gamma_estimate(data.hilbert_sequence("1", length)).gamma)
        return report["consistent"] and gammas == (1, 2), report

    def two_cycle():
        root = perron_root([[0, 1], [2, 0]])
        return root.exact == "sqrt(2)" and math.isclose(root.value, math.sqrt(2), abs_tol=1e-9), root.model_dump()

    return [_attempt("C3", "fixture complexities", fixture),
            _attempt("C3", "perron root [[0,1],[2,0]]", two_cycle)]


def _structural_checks(name: str, A: AlgebraPresentation, D: int, seed: int, store) -> list:
    """Radical filtrations of random modules, Schanuel padding and the multiplicity identity per simple."""
    engine = engine_for(A, store)
    rows = []

    def filtrations():
        failed = []
        for s in range(RANDOM_MODULES):
            M = random_module(A, seed=seed + s, summands=2, relations=1 + s % 3)
            if radical_filtration_multiplicities(M) != composition_multiplicities(M):
                failed.append(seed + s)
        return not failed, {"modules": RANDOM_MODULES, "failed_seeds": failed}

    rows.append(_attempt(name, f"radical filtration of {RANDOM_MODULES} random modules", filtrations))
    extra = list(range(len(principal_decomposition(A))))
    for S in simples(A):
        def schanuel(S=S):
            report = schanuel_check(S, extra, seed)
            return (report.stably_isomorphic and report.dimension_identity and report.composition_identity,
                    report.model_dump())

        def multiplicities(S=S):
            report = multiplicity_identity_check(engine.resolution(S, D + 1), D)
            return report.holds, {"module": report.module, "depth": report.depth,
                                  "failed_degrees": [r.degree for r in report.rows if not r.agree]}

        rows += [_attempt(name, f"schanuel {S.label}", schanuel),
                 _attempt(name, f"multiplicity identity {S.label}", multiplicities)]
    return rows


def _connectedness_checks(name: str, A: AlgebraPresentation, D: int, seed: int, store) -> list:
    rows = []
    for label, X in corpus_objects(A, D, store):
        if X.dim == 0 or is_projective(X) or len(decompose(X, seed).summands) != 1:
            continue

        def connected(X=X):
            report = connectedness_report(X, D, seed, store)
            return report.connected, report.model_dump()

        rows.append(_attempt(name, f"connected {label}", connected))
    return rows


def _algebra_checks(name: str, A: AlgebraPresentation, D: int, seed: int, store) -> list:
    classes = named_classes(A, D, store)
    engine = engine_for(A, store)
    one = engine.unit
    regular = regular_module(A)
    omega = engine.resolution(one, 2).syzygies
    rows = []

    def product_ses(z1: str, z2: str):
        report = check_product_ses(classes[z1], classes[z2], D, (z1, z2), store, seed)
        return report.dimension_identity and report.composition_identity, report.model_dump()

    def phi(z: str, X: AModule, label: str, expected: Optional[bool] = None):
        verdict = phi_is_zero(classes[z], X, D, z, seed, store)
        return expected is None or verdict.zero == expected, {"module": label, **verdict.model_dump()}

    def tensor_variety(z: str, X: AModule, predicted: int):
        report = check_tensor_variety(classes[z], X, D, predicted, z, store)
        return report.holds, report.model_dump()

    def reduce_unit():
        result = find_reducing_element(one, D, seed, store)
        return result.after.gamma == result.before.gamma - 1, result.to_dict()

    if "x" in classes:
        Lx = build_L_zeta(classes["x"], "x", store).module
        Ly = build_L_zeta(classes["y"], "y", store).module
        xy = engine.yoneda_product(classes["x"], classes["y"])
        Lxy = build_L_zeta(xy, "xy", store).module
        classes["x^2"] = engine.yoneda_product(classes["x"], classes["x"])
        classes["y^2"] = engine.yoneda_product(classes["y"], classes["y"])
        rows += [_attempt(name, "product x*y", lambda: product_ses("x", "y")),
                 _attempt(name, "product x*x", lambda: product_ses("x", "x"))]
        rows += [_attempt(name, "phi x^2 on L_x", lambda: phi("x^2", Lx, "L_x", True)),
                 _attempt(name, "phi y^2 on L_y", lambda: phi("y^2", Ly, "L_y", True)),
                 _attempt(name, "phi x on k", lambda: phi("x", one, "k", False)),
                 _attempt(name, "phi y on L_x", lambda: phi("y", Lx, "L_x")),
                 _attempt(name, "phi x on kG", lambda: phi("x", regular, "kG", True)),
                 _attempt(name, "phi x on Omega(k)", lambda: phi("x", omega[1], "Omega(k)", False)),
                 _attempt(name, "phi y on Omega^2(k)", lambda: phi("y", omega[2], "Omega^2(k)", False)),
                 _attempt(name, "phi x on L_x(x)L_y",
                          lambda: phi("x", tensor_module(Lx, Ly), "L_x(x)L_y", True))]
        rows += [_attempt(name, "tensor variety x on k", lambda: tensor_variety("x", one, 1)),
                 _attempt(name, "tensor variety x on L_y", lambda: tensor_variety("x", Ly, 0))]

        def flagship():
            report = split_by_variety(Lxy, classes["x"], classes["y"], D, seed, ("x", "y"), store)
            dims = sorted(S.dim for S in report.summands)
            return ([c.gamma for c in report.complexities] == [1, 1] and dims == [2, 2]), report.to_dict()

        def refuses_unit():
            try:
                split_by_variety(one, classes["x"], classes["y"], D, seed, ("x", "y"), store)
            except CannotSplit as e:
                return True, e.to_json()
            return False, {}

        rows += [_attempt(name, "split L_xy", flagship), _attempt(name, "split k refused", refuses_unit)]
    if "u" in classes:
        rows += [_attempt(name, "product u*u", lambda: product_ses("u", "u")),
                 _attempt(name, "phi u on k", lambda: phi("u", one, "k", False)),
                 _attempt(name, "phi u on kG", lambda: phi("u", regular, "kG", True)),
                 _attempt(name, "phi u on Omega(k)", lambda: phi("u", omega[1], "Omega(k)", False)),
                 _attempt(name, "tensor variety u on k", lambda: tensor_variety("u", one, 0))]
    if "z" in classes:
        rows += [_attempt(name, "product z*z", lambda: product_ses("z", "z")),
                 _attempt(name, "phi z on k", lambda: phi("z", one, "k", False)),
                 _attempt(name, "phi z on A", lambda: phi("z", regular, "A", True)),
                 _attempt(name, "phi z on Omega^2(k)", lambda: phi("z", omega[2], "Omega^2(k)", False)),
                 _attempt(name, "tensor variety z on k", lambda: tensor_variety("z", one, 0))]
        for S in simples(A):
            if S.content_hash != one.content_hash:
                rows.append(_attempt(name, f"phi z on {S.label}", lambda S=S: phi("z", S, S.label)))
    if A.field.p == 2:
        rows.append(_attempt(name, "reducing element for k", reduce_unit))
    return rows


def run_corpus(D: int, seed: int = 0, store=None) -> CorpusReport:
    objects, checks = [], _fixture_checks()
    for name, A in corpus_algebras().items():
        logger.info("corpus: %s", name)
        for label, X in corpus_objects(A, D, store):
            objects.append(_object_row(name, label, X, D, store))
        checks += _algebra_checks(name, A, D, seed, store)
        checks += _structural_checks(name, A, D, seed, store)
        checks += _connectedness_checks(name, A, D, seed, store)
    phi_checks = sum(c.check.startswith("phi ") for c in checks)
    logger.info("corpus: %d objects, %d checks (%d phi)", len(objects), len(checks), phi_checks)
    return CorpusReport(depth=D, seed=seed, objects=objects, checks=checks,
                        holds=all(r.holds for r in objects) and all(c.holds for c in checks))
