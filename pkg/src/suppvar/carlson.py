"""Carlson objects L_zeta and the variety-driven splitting of modules.

For a nonzero class zeta in H^n(1, 1) represented by zeta_hat: Omega^n(1) -> 1,
L_zeta is the kernel of zeta_hat. Its support variety is the hypersurface of
zeta, which is what the reduction and splitting procedures below exploit.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel

from .algebra import (AModule, cartan_matrix, composition_multiplicities, decompose, direct_sum,
                      is_projective, module_isomorphic, principal_decomposition, projective_free_part,
                      stably_isomorphic, submodule, tensor_module, zero_module)
from .cohomology import ExtClass, engine_for
from .errors import (CannotSplit, InvariantViolation, NotFound, OddDegree, PhiDisagreement,
                     PreconditionViolation, SuppVarError, ZeroClass, ZeroProduct)
from .exactfield import NoSolution, kernel_basis, rank, solve
from .growth import GammaVerdict, complexity, variety_dim

logger = logging.getLogger(__name__)


def zeta_label(zeta: ExtClass) -> str:
    coords = ",".join(str(int(c)) for c in zeta.coords)
    return f"h{zeta.degree}[{coords}]"


def _check_ring_class(zeta: ExtClass):
    one = engine_for(zeta.source.algebra).unit
    if zeta.source.content_hash != one.content_hash or zeta.target.content_hash != one.content_hash:
        raise PreconditionViolation("class must lie in Ext*(1, 1)", source=one.label, target=zeta.target.label)
    if zeta.degree < 1:
        raise PreconditionViolation("class must have positive degree", degree=zeta.degree)
    if zeta.is_zero:
        raise ZeroClass("the zero class has no Carlson object", degree=zeta.degree)
    if one.field.p != 2 and zeta.degree % 2:
        raise OddDegree("odd-degree classes are not in H(C) in odd characteristic", degree=zeta.degree)


@dataclass
class LZetaRecord:
    zeta: ExtClass
    label: str
    module: AModule
    embedding: np.ndarray
    omega: AModule
    zeta_hat: np.ndarray

    @property
    def degree(self) -> int:
        return self.zeta.degree

    def to_dict(self) -> dict:
        return {
            "zeta": self.label,
            "degree": self.degree,
            "dim": self.module.dim,
            "omega_dim": self.omega.dim,
            "composition": composition_multiplicities(self.module),
        }


def build_L_zeta(zeta: ExtClass, label: str = "", store=None) -> LZetaRecord:
    """Kernel of zeta_hat: Omega^n(1) -> 1, with zeta_hat epis[n] equal to the cocycle of zeta."""
    _check_ring_class(zeta)
    one = zeta.source
    F, n = one.field, zeta.degree
    label = label or zeta_label(zeta)
    engine = engine_for(one.algebra, store)
    res = engine.resolution(one, n)
    omega, epi = res.syzygies[n], res.epis[n]
    section = solve(F, epi, F.eye(omega.dim))
    if isinstance(section, NoSolution):
        raise InvariantViolation("resolution epimorphism has no section", degree=n)
    zeta_hat = F.matmul(zeta.cocycle, section)
    if not np.array_equal(F.matmul(zeta_hat, epi), zeta.cocycle):
        raise InvariantViolation("cocycle does not factor through Omega^n(1)", zeta=label)
    if rank(F, zeta_hat) != 1:
        raise ZeroClass("representing map is not an epimorphism", zeta=label)
    K = kernel_basis(F, zeta_hat).T
    L = submodule(omega, K, label=f"L_{label}")
    if L.dim != omega.dim - 1:
        raise InvariantViolation("L_zeta has the wrong dimension", zeta=label, dim=L.dim, omega=omega.dim)
    logger.info("L_%s: dim %d inside Omega^%d(1) of dim %d", label, L.dim, n, omega.dim)
    return LZetaRecord(zeta, label, AModule(L.algebra, L.action, label=f"L_{label}"), K, omega, zeta_hat)


def realize(zetas: list, labels: Optional[list] = None, algebra=None, store=None) -> AModule:
    """L_{zeta_1} (x) ... (x) L_{zeta_t}; the unit object of algebra for an empty list."""
    if not zetas:
        if algebra is None:
            raise PreconditionViolation("an empty product needs the algebra of its unit object")
        return engine_for(algebra, store).unit
    labels = labels or [""] * len(zetas)
    records = [build_L_zeta(z, lab, store) for z, lab in zip(zetas, labels)]
    X = records[0].module
    for r in records[1:]:
        X = tensor_module(X, r.module)
    return AModule(X.algebra, X.action, label="x".join(r.module.label for r in records))


def power(zeta: ExtClass, s: int, store=None) -> ExtClass:
    if s < 1:
        raise PreconditionViolation("powers start at 1", exponent=s)
    engine = engine_for(zeta.source.algebra, store)
    out = zeta
    for _ in range(s - 1):
        out = engine.yoneda_product(out, zeta)
    return out


def _injective_on_tail(engine, zeta: ExtClass, X: AModule, D: int) -> bool:
    n = zeta.degree
    mats = engine.act(zeta, X, X, D)
    tail = [m for m in mats if m >= max(0, D // 2 - n)]
    if not tail:
        return False
    F = engine.field
    return all(rank(F, mats[m]) == mats[m].shape[1] for m in tail)


class TensorVarietyReport(BaseModel):
    zeta: str
    module: str
    depth: int
    variety_dim_module: Optional[int]
    variety_dim_tensor: Optional[int]
    predicted: Optional[int]
    injective_on_tail: bool
    tensor_projective: bool
    holds: bool


def check_tensor_variety(zeta: ExtClass, X: AModule, D: int, predicted: Optional[int] = None,
                         label: str = "", store=None) -> TensorVarietyReport:
    record = build_L_zeta(zeta, label, store)
    engine = engine_for(X.algebra, store)
    T = tensor_module(record.module, X)
    vx = variety_dim(X, D, store).gamma
    vt = variety_dim(T, D, store).gamma
    injective = X.dim > 0 and _injective_on_tail(engine, zeta, X, D)
    holds = vt is not None and vx is not None and vt <= vx
    if predicted is not None:
        holds = holds and vt == predicted
    if injective and vx is not None:
        holds = holds and vt == max(vx - 1, 0)
    projective = is_projective(T)
    holds = holds and projective == (vt == 0)
    return TensorVarietyReport(zeta=record.label, module=X.label, depth=D, variety_dim_module=vx,
                               variety_dim_tensor=vt, predicted=predicted, injective_on_tail=injective,
                               tensor_projective=projective, holds=holds)


def _projective_combination(A, diff: list) -> Optional[list]:
    """Nonnegative a with sum_j a_j [P_j : S_i] = diff_i, if one exists."""
    C = np.array(cartan_matrix(A))
    if any(d < 0 for d in diff):
        return None
    columns = C.T
    bounds = [max(diff) // max(1, int(col.max())) + 1 for col in columns]
    for a in itertools.product(*[range(b + 1) for b in bounds]):
        if np.array_equal(C @ np.array(a, dtype=np.int64), np.array(diff, dtype=np.int64)):
            return [int(x) for x in a]
    return None


class ProductSesReport(BaseModel):
    left: str
    right: str
    product_degree: int
    syzygy_dim: int
    left_dim: int
    product_dim: int
    middle_dim: int
    projective_dim: int
    projective_multiplicities: Optional[list[int]]
    kernel_stable: bool
    middle_stable: bool
    dimension_identity: bool
    composition_identity: bool


def _projective_dim(X: AModule, seed: int) -> int:
    core, _ = projective_free_part(X, seed)
    return X.dim - core.dim


def ses_bookkeeping(kernel: AModule, middle: AModule, syzygy: AModule, left: AModule, product: AModule,
                    seed: int = 0) -> dict:
    """Compare 0 -> kernel -> middle -> left -> 0 with 0 -> syzygy -> product + P -> left -> 0.

    P is whatever projective part of middle is left after the projective part
    of kernel and that of product are stripped off.
    """
    A = middle.algebra
    kernel_stable = stably_isomorphic(kernel, syzygy, seed)
    middle_stable = stably_isomorphic(middle, product, seed)
    projective = _projective_dim(middle, seed) - _projective_dim(kernel, seed) - _projective_dim(product, seed)
    comp = [a + b - c for a, b, c in zip(composition_multiplicities(syzygy), composition_multiplicities(left),
                                         composition_multiplicities(product))]
    combination = _projective_combination(A, comp)
    principal_dims = [P.dim for P in principal_decomposition(A)]
    combination_dim = None if combination is None else sum(a * d for a, d in zip(combination, principal_dims))
    dimension_identity = (kernel_stable and middle_stable and projective >= 0
                          and syzygy.dim + left.dim == product.dim + projective)
    return {
        "projective_dim": projective,
        "projective_multiplicities": combination,
        "kernel_stable": kernel_stable,
        "middle_stable": middle_stable,
        "dimension_identity": dimension_identity,
        "composition_identity": combination_dim == projective,
    }


def product_sequence(zeta1: ExtClass, zeta2: ExtClass, store=None) -> tuple:
    """(kernel, middle) of 0 -> K -> E -> L_{zeta1} -> 0 built from the chain lift of zeta2.

    h = (Omega^r of zeta2, epi): Omega^{r+s}(1) + P_r(1) -> Omega^r(1) is onto;
    K = ker h and E = ker(zeta1_hat h), so E / K = L_{zeta1}.
    """
    one = zeta1.source
    F = one.field
    r, s = zeta1.degree, zeta2.degree
    engine = engine_for(one.algebra, store)
    res = engine.resolution(one, r + s)
    lifted = engine.lift_chain_map(zeta2.cocycle, one, one, s, r)[r]
    section = solve(F, res.epis[r + s], F.eye(res.syzygies[r + s].dim))
    if isinstance(section, NoSolution):
        raise InvariantViolation("resolution epimorphism has no section", degree=r + s)
    through = F.matmul(lifted, section)
    h = np.hstack([F.matmul(res.epis[r], through), res.epis[r]])
    if rank(F, h) != res.syzygies[r].dim:
        raise InvariantViolation("pullback map is not onto Omega^r(1)", degree=r)
    c = np.hstack([F.matmul(zeta1.cocycle, through), zeta1.cocycle])
    V = direct_sum(res.syzygies[r + s], res.covers[r].module)
    K = submodule(V, kernel_basis(F, h).T, label="K")
    E = submodule(V, kernel_basis(F, c).T, label="E")
    return K, E


def check_product_ses(zeta1: ExtClass, zeta2: ExtClass, D: int, labels: tuple = ("", ""),
                      store=None, seed: int = 0) -> ProductSesReport:
    """Bookkeeping for 0 -> Omega^{|z1|}(L_{z2}) -> L_{z1 z2} + P -> L_{z1} -> 0."""
    engine = engine_for(zeta1.source.algebra, store)
    A = zeta1.source.algebra
    product = engine.yoneda_product(zeta1, zeta2)
    l1 = labels[0] or zeta_label(zeta1)
    l2 = labels[1] or zeta_label(zeta2)
    if product.is_zero:
        raise ZeroProduct("product vanishes; L of the zero class is undefined", left=l1, right=l2,
                          degree=product.degree)
    if product.degree > D:
        raise PreconditionViolation("product degree exceeds the depth", degree=product.degree, depth=D)
    L1 = build_L_zeta(zeta1, l1, store).module
    L2 = build_L_zeta(zeta2, l2, store).module
    L12 = build_L_zeta(product, f"{l1}{l2}", store).module
    r = zeta1.degree
    if L2.dim:
        omega = engine.resolution(L2, r).syzygies[r]
    else:
        omega = zero_module(A)
    K, E = product_sequence(zeta1, zeta2, store)
    if E.dim != K.dim + L1.dim:
        raise InvariantViolation("pullback sequence is not exact", kernel=K.dim, middle=E.dim, left=L1.dim)
    book = ses_bookkeeping(K, E, omega, L1, L12, seed)
    report = ProductSesReport(left=l1, right=l2, product_degree=product.degree, syzygy_dim=omega.dim,
                              left_dim=L1.dim, product_dim=L12.dim, middle_dim=E.dim, **book)
    logger.info("product sequence %s*%s: %d + %d = %d + %d", l1, l2, omega.dim, L1.dim, L12.dim,
                report.projective_dim)
    return report


class PhiVerdict(BaseModel):
    zeta: str
    module: str
    degree: int
    depth: int
    zero: bool
    by_action: bool
    by_stable_isomorphism: bool


def phi_is_zero(zeta: ExtClass, X: AModule, D: int, label: str = "", seed: int = 0,
                store=None) -> PhiVerdict:
    """phi_X(zeta) = 0, decided by the action and by L_zeta (x) X ~ Omega(X) + Omega^n(X)."""
    engine = engine_for(X.algebra, store)
    record = build_L_zeta(zeta, label, store)
    n = zeta.degree
    by_action = engine.annihilates(zeta, X, max(D, n))
    T = tensor_module(record.module, X)
    if X.dim:
        res = engine.resolution(X, n)
        target = direct_sum(res.syzygies[1], res.syzygies[n])
    else:
        target = zero_module(X.algebra)
    by_stable = stably_isomorphic(T, target, seed)
    if by_action != by_stable:
        raise PhiDisagreement("action and stable isomorphism disagree on phi_X(zeta)",
                              zeta=record.label, module=X.label, by_action=by_action,
                              by_stable_isomorphism=by_stable, tensor_dim=T.dim, target_dim=target.dim)
    return PhiVerdict(zeta=record.label, module=X.label, degree=n, depth=D, zero=by_action,
                      by_action=by_action, by_stable_isomorphism=by_stable)


@dataclass
class ReductionResult:
    zeta: ExtClass
    label: str
    reduced: AModule
    before: GammaVerdict
    after: GammaVerdict
    tried: list

    def to_dict(self) -> dict:
        return {
            "zeta": self.label,
            "degree": self.zeta.degree,
            "reduced_dim": self.reduced.dim,
            "reduced_projective": is_projective(self.reduced),
            "variety_dim_before": self.before.gamma,
            "variety_dim_after": self.after.gamma,
            "tried": self.tried,
        }


def find_reducing_element(X: AModule, D: int, seed: int = 0, store=None) -> ReductionResult:
    """A ring class acting injectively on the tail of Ext*(X, X) that cuts dim V(X) by one.

    The reduced object is the projective-free part of L_zeta (x) X.
    """
    engine = engine_for(X.algebra, store)
    before = variety_dim(X, D, store)
    if not before.gamma:
        raise PreconditionViolation("X has a zero-dimensional variety; nothing to reduce",
                                    module=X.label, variety_dim=before.gamma)
    tried = []
    for a in engine.ring_degrees(D // 2):
        space = engine.ring_space(a)
        for i in range(space.dim):
            zeta = space.basis_class(i)
            label = f"h{a}_{i}"
            if not _injective_on_tail(engine, zeta, X, D):
                tried.append({"zeta": label, "injective": False})
                continue
            T = tensor_module(build_L_zeta(zeta, label, store).module, X)
            reduced, _ = projective_free_part(T, seed)
            after = variety_dim(reduced, D, store)
            tried.append({"zeta": label, "injective": True, "variety_dim": after.gamma})
            if after.gamma == before.gamma - 1:
                logger.info("%s reduces %s from %s to %s", label, X.label, before.gamma, after.gamma)
                return ReductionResult(zeta, label, reduced, before, after, tried)
    raise NotFound("no reducing element up to degree D/2", module=X.label, depth=D, tried=tried)


@dataclass
class SplitReport:
    module: AModule
    witnesses: tuple
    exponent: int
    summands: tuple
    embeddings: tuple
    complexities: tuple
    annihilation: dict
    ext1: dict
    auxiliary: dict
    isomorphism: np.ndarray
    seed: int
    depth: int

    def to_dict(self) -> dict:
        return {
            "module": self.module.label,
            "dim": self.module.dim,
            "witnesses": list(self.witnesses),
            "exponent": self.exponent,
            "summand_dims": [S.dim for S in self.summands],
            "summand_complexity": [c.gamma for c in self.complexities],
            "annihilation": self.annihilation,
            "ext1": self.ext1,
            "auxiliary": self.auxiliary,
            "certified": True,
            "seed": self.seed,
            "depth": self.depth,
        }


def _side(engine, S: AModule, powers: tuple, D: int) -> Optional[int]:
    """0 or 1 for the witness whose power annihilates Ext(S, S), None when neither does."""
    if is_projective(S):
        return 0
    for side, zeta in enumerate(powers):
        if zeta.degree <= D // 2 and engine.annihilates(zeta, S, D):
            return side
    return None


def _group(engine, M: AModule, powers: tuple, D: int, seed: int, stage: str):
    report = decompose(M, seed)
    groups = ([], [])
    for S, U in zip(report.summands, report.embeddings):
        side = _side(engine, S, powers, D)
        if side is None:
            raise CannotSplit("a summand is annihilated by neither witness", stage=stage,
                              module=M.label, summand_dim=S.dim)
        groups[side].append((S, U))
    return groups


def _assemble(M: AModule, parts: list, label: str):
    if not parts:
        return zero_module(M.algebra), M.field.zeros((M.dim, 0))
    U = np.hstack([u for _, u in parts])
    return submodule(M, U, label=label), U


def split_by_variety(X: AModule, zeta1: ExtClass, zeta2: ExtClass, D: int, seed: int = 0,
                     labels: tuple = ("", ""), store=None) -> SplitReport:
    """Split X along Z(zeta1) and Z(zeta2) once a power of zeta1 zeta2 annihilates Ext(X, X)."""
    engine = engine_for(X.algebra, store)
    l1 = labels[0] or zeta_label(zeta1)
    l2 = labels[1] or zeta_label(zeta2)
    for z in (zeta1, zeta2):
        _check_ring_class(z)

    exponent, powers, product = None, None, None
    bound = max(1, D // (2 * (zeta1.degree + zeta2.degree)))
    for s in range(1, bound + 1):
        p1, p2 = power(zeta1, s, store), power(zeta2, s, store)
        candidate = engine.yoneda_product(p1, p2)
        if candidate.degree > D // 2:
            break
        if engine.annihilates(candidate, X, D):
            exponent, powers, product = s, (p1, p2), candidate
            break
    if exponent is None:
        raise CannotSplit("no power of the product annihilates Ext(X, X) in the window",
                          stage="annihilating power", module=X.label, witnesses=[l1, l2], depth=D)
    logger.info("split %s: (%s %s)^%d annihilates", X.label, l1, l2, exponent)
    if product.is_zero:
        raise CannotSplit("witness product vanishes", stage="annihilating power", module=X.label)

    n = product.degree
    auxiliary = {}
    if X.dim:
        res = engine.resolution(X, n)
        middle = direct_sum(res.syzygies[1], res.syzygies[n])
        L12 = build_L_zeta(product, f"({l1}{l2})^{exponent}", store).module
        auxiliary["product_tensor_stable"] = stably_isomorphic(tensor_module(L12, X), middle, seed)
    ext1 = {}
    try:
        r = powers[0].degree
        L1 = build_L_zeta(powers[0], f"{l1}^{exponent}", store).module
        L2 = build_L_zeta(powers[1], f"{l2}^{exponent}", store).module
        omega_l2 = engine.resolution(L2, r).syzygies[r] if L2.dim else zero_module(X.algebra)
        Y = tensor_module(omega_l2, X)
        Z = tensor_module(L1, X)
        Y1, Y2 = (_assemble(Y, g, f"Y{i + 1}")[0] for i, g in enumerate(_group(engine, Y, powers, D, seed, "Y")))
        Z1, Z2 = (_assemble(Z, g, f"Z{i + 1}")[0] for i, g in enumerate(_group(engine, Z, powers, D, seed, "Z")))
    except CannotSplit:
        raise
    except SuppVarError as e:
        raise CannotSplit(f"decomposition of auxiliary objects failed: {e.message}", stage="decomposition",
                          module=X.label) from e
    auxiliary.update({"Y_dims": [Y1.dim, Y2.dim], "Z_dims": [Z1.dim, Z2.dim]})
    for name, (P, Q) in {"Y1,Z2": (Y1, Z2), "Y2,Z1": (Y2, Z1)}.items():
        verdict = engine.ext_vanishes(P, Q, D)
        ext1[name] = verdict.verdict
        if verdict.dims[1]:
            raise CannotSplit("Ext^1 between opposite sides does not vanish", stage="Ext^1 obstruction",
                              module=X.label, pair=name, dims=verdict.dims)

    groups = _group(engine, X, powers, D, seed, "X")
    (X1, U1), (X2, U2) = (_assemble(X, g, f"{X.label or 'X'}_{i + 1}") for i, g in enumerate(groups))
    combined = direct_sum(*[P for P in (X1, X2) if P.dim]) if X.dim else X
    result = module_isomorphic(X, combined, seed)
    if not result.isomorphic:
        raise CannotSplit("reassembled summands are not isomorphic to X", stage="certification",
                          module=X.label, witness=result.witness)
    complexities = (complexity(X1, D, store), complexity(X2, D, store))
    annihilation = {
        "product": f"({l1}{l2})^{exponent}",
        "product_degree": n,
        "X1_by": l1 if X1.dim == 0 or engine.annihilates(powers[0], X1, D) else None,
        "X2_by": l2 if X2.dim == 0 or engine.annihilates(powers[1], X2, D) else None,
    }
    logger.info("split %s into dims %d + %d", X.label, X1.dim, X2.dim)
    return SplitReport(X, (l1, l2), exponent, (X1, X2), (U1, U2), complexities, annihilation, ext1,
                       auxiliary, result.certificate, seed, D)


class ConnectednessRow(BaseModel):
    summand: int
    dim: int
    projective: bool
    pairs_tried: int
    splits: list[str]
    cannot_split: int


class ConnectednessReport(BaseModel):
    module: str
    depth: int
    seed: int
    summand_dims: list[int]
    rows: list[ConnectednessRow]
    connected: bool


def _candidate_pairs(engine, D: int) -> list:
    classes = []
    for a in [d for d in engine.ring_degrees(2) if d <= D // 2]:
        space = engine.ring_space(a)
        classes += [(f"h{a}_{i}", space.basis_class(i)) for i in range(space.dim)]
    return list(itertools.combinations(classes, 2))


def connectedness_report(X: AModule, D: int, seed: int = 0, store=None) -> ConnectednessReport:
    """No pair of low-degree classes splits an indecomposable summand of X."""
    engine = engine_for(X.algebra, store)
    report = decompose(X, seed)
    pairs = _candidate_pairs(engine, D)
    rows = []
    for t, S in enumerate(report.summands):
        splits, refused = [], 0
        if not report.projective[t]:
            for (la, za), (lb, zb) in pairs:
                try:
                    result = split_by_variety(S, za, zb, D, seed, (la, lb), store)
                except (CannotSplit, ZeroClass, ZeroProduct):
                    refused += 1
                    continue
                if all(P.dim for P in result.summands):
                    splits.append(f"{la},{lb}")
        rows.append(ConnectednessRow(summand=t, dim=S.dim, projective=report.projective[t], pairs_tried=len(pairs),
                                     splits=splits, cannot_split=refused))
    return ConnectednessReport(module=X.label, depth=D, seed=seed, summand_dims=report.dims, rows=rows,
                               connected=not any(r.splits for r in rows))


class LadderRung(BaseModel):
    classes: list[str]
    dim: int
    expected: int
    complexity: Optional[int]
    variety_dim: Optional[int]
    projective: bool


class ComplexityLadder(BaseModel):
    algebra: str
    depth: int
    top: Optional[int]
    rungs: list[LadderRung]
    holds: bool


def complexity_ladder(algebra, D: int, store=None) -> ComplexityLadder:
    """Objects of every complexity c <= dim V(1) as products of Carlson objects."""
    engine = engine_for(algebra, store)
    top = variety_dim(engine.unit, D, store).gamma
    candidates = []
    for a in engine.ring_degrees(D // 2):
        space = engine.ring_space(a)
        candidates += [(f"h{a}_{i}", space.basis_class(i)) for i in range(space.dim)]
    rungs = []
    for t in range((top or 0) + 1):
        chosen = candidates[:t]
        X = realize([z for _, z in chosen], [lab for lab, _ in chosen], algebra, store)
        rungs.append(LadderRung(classes=[lab for lab, _ in chosen], dim=X.dim, expected=(top or 0) - t,
                                complexity=complexity(X, D, store).gamma,
                                variety_dim=variety_dim(X, D, store).gamma, projective=is_projective(X)))
    return ComplexityLadder(algebra=algebra.name, depth=D, top=top, rungs=rungs,
                            holds=all(r.complexity == r.expected == r.variety_dim for r in rungs))
