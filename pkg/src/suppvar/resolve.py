"""Projective covers, syzygies and minimal projective resolutions, with a disk cache."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
from pydantic import BaseModel

from .algebra import (AModule, composition_multiplicities, direct_sum, is_homomorphism, module_from_json,
                      module_to_json, orbit_matrix, principal_decomposition, radical_of_module,
                      stably_isomorphic, submodule, top_multiplicities, zero_module)
from .config import read_config
from .errors import CacheCorrupt, FormatError, InvalidParams, InvariantViolation, SuppVarError
from .exactfield import FieldSpec, NoSolution, in_span, kernel_basis, rank, solve
from .utils.jsonio import read_json, write_json_atomic

logger = logging.getLogger(__name__)

resolve_config = read_config()['Resolve']
DEFAULT_DEPTH = int(resolve_config.get('depth', 12))


@dataclass
class ProjectiveCover:
    module: AModule
    epi: np.ndarray
    multiplicities: list
    summands: list


def _principal_sum(A, summands: list) -> AModule:
    principal = principal_decomposition(A)
    if not summands:
        return zero_module(A)
    P = direct_sum(*[principal[t].module for t in summands])
    label = "+".join(principal[t].module.label for t in summands)
    return AModule(A, P.action, label=label)


def _block(M: AModule, v: np.ndarray, t: int) -> np.ndarray:
    """Matrix of the map P_t = A e_t -> M, a e_t |-> a v, for v in e_t M."""
    U = principal_decomposition(M.algebra)[t].basis
    return M.field.matmul(orbit_matrix(M, v), U)


def projective_cover(M: AModule) -> ProjectiveCover:
    """P(M) -> M built from generators of M chosen independent modulo rad(A) M."""
    def compute():
        A, F = M.algebra, M.field
        principal = principal_decomposition(A)
        tops = top_multiplicities(M)
        chosen = radical_of_module(M)
        base = chosen.shape[1]
        summands, blocks = [], []
        for t, P in enumerate(principal):
            if not tops[t]:
                continue
            candidates = F.matmul(M.act(P.idempotent), F.eye(M.dim))
            picked = 0
            for c in range(M.dim):
                if picked == tops[t]:
                    break
                v = candidates[:, c]
                if not np.any(v):
                    continue
                grown = np.hstack([chosen, v[:, None]])
                if rank(F, grown) > base:
                    chosen, base = grown, base + 1
                    summands.append(t)
                    blocks.append(_block(M, v, t))
                    picked += 1
            if picked != tops[t]:
                raise InvariantViolation("could not pick top generators", module=M.label, simple=t)
        cover = _principal_sum(A, summands)
        epi = np.hstack(blocks) if blocks else F.zeros((M.dim, 0))
        if rank(F, epi) != M.dim:
            raise InvariantViolation("projective cover map is not surjective", module=M.label)
        return ProjectiveCover(cover, epi, tops, summands)

    return M.memo("cover", compute)


def kernel_of_cover(M: AModule, P: AModule, epi: np.ndarray) -> AModule:
    """Kernel of any surjection P -> M from a projective module."""
    K = kernel_basis(M.field, epi).T
    return submodule(P, K, label=f"ker({P.label}->{M.label})")


def syzygy(M: AModule) -> AModule:
    cover = projective_cover(M)
    omega = kernel_of_cover(M, cover.module, cover.epi)
    return AModule(M.algebra, omega.action, label=f"Omega({M.label})")


@dataclass
class MinimalResolution:
    """Prefix P_0 -> X, P_1, ..., P_depth of the minimal resolution of X.

    epis[n]: P_n -> Omega^n X, incl[n]: Omega^n X -> P_{n-1} and
    differentials[n] = incl[n] @ epis[n] : P_n -> P_{n-1} for n >= 1.
    """

    module: AModule
    covers: list = dc_field(default_factory=list)
    syzygies: list = dc_field(default_factory=list)
    epis: list = dc_field(default_factory=list)
    incl: list = dc_field(default_factory=list)
    differentials: list = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.syzygies:
            self.syzygies.append(self.module)
            self.incl.append(None)
            self.differentials.append(None)

    @property
    def depth(self) -> int:
        return len(self.covers) - 1

    @property
    def field(self) -> FieldSpec:
        return self.module.field

    @property
    def terms(self) -> list:
        return [c.module for c in self.covers]

    @property
    def augmentation(self) -> np.ndarray:
        return self.epis[0]

    def term(self, n: int) -> AModule:
        self.extend(n)
        return self.covers[n].module

    def differential(self, n: int) -> np.ndarray:
        self.extend(n)
        return self.differentials[n]

    def _add_degree(self):
        F = self.field
        n = len(self.covers)
        omega = self.syzygies[n]
        cover = projective_cover(omega)
        self.covers.append(cover)
        self.epis.append(cover.epi)
        if n >= 1:
            self.differentials.append(F.matmul(self.incl[n], cover.epi))
        K = kernel_basis(F, cover.epi).T
        nxt = submodule(cover.module, K, label=f"Omega^{n + 1}({self.module.label})")
        self.syzygies.append(nxt)
        self.incl.append(K)
        logger.debug("%s: degree %d, dim P = %d, multiplicities %s",
                     self.module.label, n, cover.module.dim, cover.multiplicities)

    def extend(self, depth: int) -> "MinimalResolution":
        if depth < 0:
            raise InvalidParams("resolution depth must be >= 0", depth=depth)
        while self.depth < depth:
            self._add_degree()
        return self

    @property
    def dims(self) -> list:
        return [c.module.dim for c in self.covers]

    def multiplicities(self, n: int) -> list:
        self.extend(n)
        return list(self.covers[n].multiplicities)

    @property
    def fpdims(self) -> list:
        from .growth import resolution_fpdims
        return resolution_fpdims(self)

    def verify(self, upto: Optional[int] = None):
        """Exactness, A-linearity and minimality of every computed degree."""
        F = self.field
        top = self.depth if upto is None else min(upto, self.depth)
        X = self.module
        aug = self.epis[0]
        if rank(F, aug) != X.dim or not is_homomorphism(self.term(0), X, aug):
            raise InvariantViolation("augmentation is not an epimorphism of modules", degree=0)
        for n in range(1, top + 1):
            d = self.differentials[n]
            P, Q = self.covers[n].module, self.covers[n - 1].module
            if not is_homomorphism(P, Q, d):
                raise InvariantViolation("differential is not A-linear", degree=n)
            previous = aug if n == 1 else self.differentials[n - 1]
            if np.any(F.matmul(previous, d)):
                raise InvariantViolation("composite of differentials is not zero", degree=n)
            if rank(F, d) != Q.dim - rank(F, previous):
                raise InvariantViolation("resolution is not exact", degree=n - 1)
            if d.shape[1] and not in_span(F, radical_of_module(Q), d):
                raise InvariantViolation("differential leaves the radical; resolution not minimal",
                                         degree=n)
        return True


def minimal_resolution(M: AModule, depth: int = DEFAULT_DEPTH,
                       store: Optional["ResolutionStore"] = None) -> MinimalResolution:
    store = store or default_store()
    return store.get(M, depth)


def _matrix_to_json(F: FieldSpec, M: np.ndarray) -> dict:
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "entries": [F.element_to_json(v) for v in M.reshape(-1)]}


def _matrix_from_json(F: FieldSpec, data: dict) -> np.ndarray:
    rows, cols, entries = int(data["rows"]), int(data["cols"]), data["entries"]
    if len(entries) != rows * cols:
        raise CacheCorrupt("matrix entry count does not match its shape", rows=rows, cols=cols)
    return np.array([F.element_from_json(v) for v in entries], dtype=np.int64).reshape(rows, cols)


def resolution_to_json(res: MinimalResolution) -> dict:
    F = res.field
    X = res.module
    return {
        "manifest": {"algebra_hash": X.algebra.content_hash, "module_hash": X.content_hash,
                     "depth": res.depth, "dims": res.dims},
        "module": module_to_json(X),
        "terms": [{"summands": c.summands, "multiplicities": c.multiplicities} for c in res.covers],
        "augmentation": _matrix_to_json(F, res.epis[0]),
        "differentials": [_matrix_to_json(F, d) for d in res.differentials[1:]],
    }


def resolution_from_json(data: dict, M: AModule) -> MinimalResolution:
    """Rebuild and verify a stored resolution; any mismatch is CacheCorrupt."""
    A, F = M.algebra, M.field
    try:
        manifest = data["manifest"]
        if manifest["algebra_hash"] != A.content_hash or manifest["module_hash"] != M.content_hash:
            raise CacheCorrupt("cache entry belongs to a different algebra or module")
        terms = data["terms"]
        depth = int(manifest["depth"])
        if len(terms) != depth + 1 or len(data["differentials"]) != depth:
            raise CacheCorrupt("cache entry is truncated", depth=depth, terms=len(terms))
        stored = module_from_json(data["module"], A, label=M.label)
        if not np.array_equal(stored.action, M.action):
            raise CacheCorrupt("stored module differs from the requested one")
        res = MinimalResolution(M)
        for n, term in enumerate(terms):
            summands = [int(t) for t in term["summands"]]
            P = _principal_sum(A, summands)
            omega = res.syzygies[n]
            if n == 0:
                epi = _matrix_from_json(F, data["augmentation"])
            else:
                d = _matrix_from_json(F, data["differentials"][n - 1])
                epi = solve(F, res.incl[n], d)
                if isinstance(epi, NoSolution):
                    raise CacheCorrupt("differential does not factor through the syzygy", degree=n)
            if epi.shape != (omega.dim, P.dim):
                raise CacheCorrupt("stored map has the wrong shape", degree=n)
            cover = ProjectiveCover(P, epi, [int(a) for a in term["multiplicities"]], summands)
            res.covers.append(cover)
            res.epis.append(epi)
            if n >= 1:
                res.differentials.append(F.matmul(res.incl[n], epi))
            K = kernel_basis(F, epi).T
            res.syzygies.append(submodule(P, K, label=f"Omega^{n + 1}({M.label})"))
            res.incl.append(K)
        if res.covers and res.covers[0].multiplicities != top_multiplicities(M):
            raise CacheCorrupt("stored cover does not match the top of the module")
        res.verify()
    except CacheCorrupt:
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError, SuppVarError) as e:
        raise CacheCorrupt(f"cache entry failed verification: {e}") from e
    return res


def _relabelled(res: MinimalResolution, M: AModule) -> MinimalResolution:
    """The cached resolution seen under the label of M; the matrices are shared."""
    if res.module.label == M.label:
        return res
    syzygies = [M] + [AModule(S.algebra, S.action, label=f"Omega^{n}({M.label})")
                      for n, S in enumerate(res.syzygies[1:], start=1)]
    return MinimalResolution(M, list(res.covers), syzygies, list(res.epis), list(res.incl),
                             list(res.differentials))


class ResolutionStore:
    """Resolutions keyed by the module content hash, optionally mirrored to a cache directory."""

    def __init__(self, cache_dir: Optional[str] = None):
        self.cache_dir = cache_dir
        self._resolutions = {}

    def path_for(self, M: AModule) -> Optional[str]:
        if not self.cache_dir:
            return None
        return os.path.join(self.cache_dir, f"{M.content_hash}.resolution.json")

    def save(self, res: MinimalResolution):
        path = self.path_for(res.module)
        if path:
            write_json_atomic(path, resolution_to_json(res))

    def load(self, M: AModule) -> Optional[MinimalResolution]:
        path = self.path_for(M)
        if not path or not os.path.exists(path):
            return None
        try:
            data = read_json(path)
        except FormatError as e:
            raise CacheCorrupt(f"unreadable cache file {path}", path=path) from e
        res = resolution_from_json(data, M)
        logger.info("loaded cached resolution of %s to depth %d", M.label, res.depth)
        return res

    def get(self, M: AModule, depth: int = DEFAULT_DEPTH) -> MinimalResolution:
        key = M.content_hash
        res = self._resolutions.get(key)
        if res is None:
            res = self.load(M) or MinimalResolution(M)
            self._resolutions[key] = res
        stored = res.depth
        res.extend(depth)
        if res.depth > stored:
            self.save(res)
        return _relabelled(res, M)


_default_store = ResolutionStore()


def default_store() -> ResolutionStore:
    return _default_store


def set_default_store(store: ResolutionStore):
    global _default_store
    _default_store = store


class SchanuelReport(BaseModel):
    module: str
    extra: list[int]
    kernel_dim: int
    syzygy_dim: int
    stably_isomorphic: bool
    dimension_identity: bool
    composition_identity: bool


def schanuel_check(M: AModule, extra: list, seed: int = 0) -> SchanuelReport:
    """Compare the kernel of a padded cover P(M) + Q -> M with Omega(M)."""
    A, F = M.algebra, M.field
    rng = np.random.default_rng(seed)
    principal = principal_decomposition(A)
    cover = projective_cover(M)
    blocks = [cover.epi]
    for t in extra:
        if not 0 <= t < len(principal):
            raise InvalidParams("unknown principal indecomposable", index=t)
        v = F.matmul(M.act(principal[t].idempotent), F.random(rng, (M.dim, 1)))[:, 0]
        blocks.append(_block(M, v, t))
    Q = _principal_sum(A, list(extra))
    padded = direct_sum(cover.module, Q) if Q.dim else cover.module
    K = kernel_of_cover(M, padded, np.hstack(blocks))
    omega = syzygy(M)

    def comp(X):
        return np.array(composition_multiplicities(X))

    report = SchanuelReport(
        module=M.label,
        extra=[int(t) for t in extra],
        kernel_dim=K.dim,
        syzygy_dim=omega.dim,
        stably_isomorphic=stably_isomorphic(K, omega, seed),
        dimension_identity=K.dim + cover.module.dim == omega.dim + cover.module.dim + Q.dim,
        composition_identity=bool(np.array_equal(comp(K) + comp(cover.module),
                                                 comp(omega) + comp(cover.module) + comp(Q))),
    )
    logger.info("Schanuel check for %s: %s", M.label, report.stably_isomorphic)
    return report


class MultiplicityIdentityRow(BaseModel):
    degree: int
    multiplicities: list[int]
    hom_from_term: list[int]
    ext_dims: list[int]
    hom_from_syzygy: list[int]
    agree: bool


class MultiplicityIdentityReport(BaseModel):
    module: str
    depth: int
    rows: list[MultiplicityIdentityRow]
    holds: bool


def multiplicity_identity_check(res: MinimalResolution, depth: Optional[int] = None) -> MultiplicityIdentityReport:
    """a_{n,i} = dim Hom(P_n, S_i) = dim Ext^n(M, S_i) = dim Hom(Omega^n M, S_i) per degree."""
    from .algebra import hom_space, simples
    from .cohomology import engine_for

    M = res.module
    D = res.depth - 1 if depth is None else depth
    res.extend(D + 1)
    engine = engine_for(M.algebra)
    simple_modules = simples(M.algebra)
    ext = [engine.ext_dims(M, S, D) for S in simple_modules]
    rows = []
    for n in range(D + 1):
        mult = res.multiplicities(n)
        from_term = [hom_space(res.term(n), S).shape[0] for S in simple_modules]
        from_syzygy = [hom_space(res.syzygies[n], S).shape[0] for S in simple_modules]
        ext_n = [e[n] for e in ext]
        rows.append(MultiplicityIdentityRow(degree=n, multiplicities=mult, hom_from_term=from_term,
                                            ext_dims=ext_n, hom_from_syzygy=from_syzygy,
                                            agree=mult == from_term == ext_n == from_syzygy))
    return MultiplicityIdentityReport(module=M.label, depth=D, rows=rows, holds=all(r.agree for r in rows))
