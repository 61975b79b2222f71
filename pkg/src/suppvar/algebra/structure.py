"""Krull-Schmidt decomposition, isomorphism and projectivity tests."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from ..config import read_config
from ..errors import Inconclusive, InvariantViolation, NonSplitEnd
from ..exactfield import image_basis, inverse, kernel_basis, matpow, rank
from .modules import AModule, hom_space, is_homomorphism, submodule, zero_module
from .radical import (composition_multiplicities, lift_idempotent, matrix_algebra_radical,
                      principal_decomposition, top_multiplicities)

logger = logging.getLogger(__name__)


iso_config = read_config()['Isomorphism']
TRIALS = int(iso_config.get('trials', 32))
FITTING_TRIALS = int(iso_config.get('fitting_trials', 64))


def is_local(M: AModule) -> bool:
    """End_A(M) is local, i.e. M is indecomposable (M nonzero)."""
    E = hom_space(M, M)
    if E.shape[0] == 1:
        return True
    J = matrix_algebra_radical(M.field, E)
    return E.shape[0] - J.shape[0] == 1


def _fitting_split(M: AModule, E: np.ndarray, rng: np.random.Generator, trials: int):
    """Find an endomorphism psi with 0 < rank psi^n < n; return (kernel, image) of psi^n."""
    F, n = M.field, M.dim
    for _ in range(trials):
        phi = F.lincomb(F.random(rng, E.shape[0]), E)
        for lam in F.elements():
            psi = matpow(F, F.sub(phi, F.mul(int(lam), F.eye(n))), n)
            r = rank(F, psi)
            if 0 < r < n:
                return kernel_basis(F, psi).T, image_basis(F, psi)
    raise NonSplitEnd("no splitting endomorphism found; End(M) may not be split over this field",
                      module=M.label, dim=n, trials=trials)


def split_idempotent(M: AModule, rng: np.random.Generator, trials: int = FITTING_TRIALS) -> np.ndarray:
    """A nontrivial idempotent of End(M), lifted from End(M) / J through e <- 3e^2 - 2e^3.

    The Fitting projection of a random endomorphism is moved by a random
    element of the radical J and the result is lifted back to an idempotent.
    """
    F, n = M.field, M.dim
    E = hom_space(M, M)
    J = matrix_algebra_radical(F, E)
    if E.shape[0] - J.shape[0] <= 1:
        raise InvariantViolation("End(M) is local; there is no nontrivial idempotent", module=M.label)
    K, I = _fitting_split(M, E, rng, trials)
    T = np.hstack([K, I])
    block = F.zeros((n, n))
    block[K.shape[1]:, K.shape[1]:] = F.eye(I.shape[1])
    e = F.matmul(F.matmul(T, block), inverse(F, T))
    if J.shape[0]:
        radical_mats = np.stack([F.lincomb(row, E) for row in J])
        e = F.add(e, F.lincomb(F.random(rng, J.shape[0]), radical_mats))
    steps = max(1, math.ceil(math.log2(max(n, 2)))) + 2
    e = lift_idempotent(F, F.matmul, e, steps, M.label)
    if not is_homomorphism(M, M, e) or rank(F, e) in (0, n):
        raise InvariantViolation("lifted idempotent is not a nontrivial endomorphism", module=M.label)
    return e


def _split(M: AModule, rng, trials: int) -> list:
    """List of (summand, embedding) pairs."""
    if M.dim == 0:
        return []
    if is_local(M):
        return [(M, M.field.eye(M.dim))]
    F = M.field
    e = split_idempotent(M, rng, trials)
    out = []
    for U in (image_basis(F, e), image_basis(F, F.sub(F.eye(M.dim), e))):
        part = submodule(M, U)
        out += [(S, F.matmul(U, T)) for S, T in _split(part, rng, trials)]
    return out


def indecomposable_iso(X: AModule, Y: AModule) -> Optional[np.ndarray]:
    """An isomorphism X -> Y of indecomposables, or None.

    If X ~ Y the products g f of basis maps span End(X), so one of them lies
    outside the radical of the local ring End(X) and its f is invertible.
    Checking the basis of Hom(X, Y) alone is therefore complete.
    """
    if X.dim != Y.dim:
        return None
    if composition_multiplicities(X) != composition_multiplicities(Y):
        return None
    if X.dim == 0:
        return X.field.eye(0)
    F = X.field
    for f in hom_space(X, Y):
        if rank(F, f) == X.dim:
            return f
    return None


@dataclass
class DecompositionReport:
    module: AModule
    summands: list
    embeddings: list
    iso_classes: list
    multiplicities: list
    seed: int
    projective: list = dc_field(default_factory=list)

    @property
    def dims(self) -> list:
        return [S.dim for S in self.summands]

    def to_dict(self) -> dict:
        return {
            "module": self.module.label,
            "dim": self.module.dim,
            "summand_dims": self.dims,
            "summand_composition": [composition_multiplicities(S) for S in self.summands],
            "projective": self.projective,
            "iso_classes": self.iso_classes,
            "multiplicities": self.multiplicities,
            "seed": self.seed,
        }


def decompose(M: AModule, seed: int = 0) -> DecompositionReport:
    """Split M into indecomposables by idempotents of End(M) lifted modulo its radical."""
    F = M.field
    rng = np.random.default_rng(seed)
    pieces = _split(M, rng, FITTING_TRIALS)
    pieces.sort(key=lambda st: (st[0].dim, tuple(composition_multiplicities(st[0]))))
    summands, embeddings = [], []
    for t, (S, U) in enumerate(pieces):
        summands.append(AModule(S.algebra, S.action, label=f"{M.label or 'M'}[{t}]"))
        embeddings.append(U)
    if embeddings and rank(F, np.hstack(embeddings)) != M.dim:
        raise InvariantViolation("summands do not form a direct sum decomposition", module=M.label)
    classes, representatives = [], []
    for t, S in enumerate(summands):
        for c, R in enumerate(representatives):
            if indecomposable_iso(R, S) is not None:
                classes[c].append(t)
                break
        else:
            representatives.append(S)
            classes.append([t])
    report = DecompositionReport(M, summands, embeddings, classes, [len(c) for c in classes], seed,
                                 projective=[is_projective(S) for S in summands])
    logger.info("decomposed %s (dim %d) into dims %s", M.label or "module", M.dim, report.dims)
    return report


@dataclass
class IsomorphismResult:
    isomorphic: bool
    certificate: Optional[np.ndarray] = None
    witness: str = ""

    def __bool__(self):
        return self.isomorphic


def _blockdiag(F, blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = F.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def module_isomorphic(M: AModule, N: AModule, seed: int = 0) -> IsomorphismResult:
    F = M.field
    if M.dim != N.dim:
        return IsomorphismResult(False, witness="dimension")
    if composition_multiplicities(M) != composition_multiplicities(N):
        return IsomorphismResult(False, witness="composition factors")
    if M.dim == 0:
        return IsomorphismResult(True, F.eye(0), "zero")
    H = hom_space(M, N)
    if H.shape[0] == 0:
        return IsomorphismResult(False, witness="no homomorphisms")
    rng = np.random.default_rng(seed)
    for f in H:
        if rank(F, f) == M.dim:
            return IsomorphismResult(True, f, "hom basis")
    for _ in range(TRIALS):
        f = F.lincomb(F.random(rng, H.shape[0]), H)
        if rank(F, f) == M.dim:
            return IsomorphismResult(True, f, "random hom")

    left, right = decompose(M, seed), decompose(N, seed)
    if left.dims != right.dims:
        return IsomorphismResult(False, witness="indecomposable summands")
    unmatched = list(range(len(right.summands)))
    pairs = []
    for i, S in enumerate(left.summands):
        for j in unmatched:
            f = indecomposable_iso(S, right.summands[j])
            if f is not None:
                pairs.append((i, j, f))
                unmatched.remove(j)
                break
        else:
            return IsomorphismResult(False, witness="indecomposable summands")
    T_M = np.hstack([left.embeddings[i] for i, _, _ in pairs])
    T_N = np.hstack([right.embeddings[j] for _, j, _ in pairs])
    phi = F.matmul(F.matmul(T_N, _blockdiag(F, [f for _, _, f in pairs])), inverse(F, T_M))
    if not is_homomorphism(M, N, phi) or rank(F, phi) != M.dim:
        raise Inconclusive("matched summands did not assemble to an isomorphism",
                           left=M.label, right=N.label)
    return IsomorphismResult(True, phi, "matched summands")


def is_projective(M: AModule) -> bool:
    """M is projective iff its projective cover has the same dimension."""
    if M.dim == 0:
        return True
    tops = top_multiplicities(M)
    cover_dim = sum(a * P.dim for a, P in zip(tops, principal_decomposition(M.algebra)))
    return cover_dim == M.dim


def projective_free_part(M: AModule, seed: int = 0):
    """(module, embedding) spanned by the non-projective indecomposable summands of M."""
    report = decompose(M, seed)
    keep = [U for U, proj in zip(report.embeddings, report.projective) if not proj]
    if not keep:
        return zero_module(M.algebra), M.field.zeros((M.dim, 0))
    U = np.hstack(keep)
    return submodule(M, U, label=f"pf({M.label})"), U


def stably_isomorphic(M: AModule, N: AModule, seed: int = 0) -> bool:
    left, _ = projective_free_part(M, seed)
    right, _ = projective_free_part(N, seed)
    return module_isomorphic(left, right, seed).isomorphic
