"""Modules over an AlgebraPresentation, given by one action matrix per basis element."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from ..errors import FormatError, InvalidParams, InvariantViolation, MissingHopf
from ..exactfield import NoSolution, image_basis, kernel_basis, kron, rref, solve
from ..utils.hashing import content_hash
from .presentation import AlgebraPresentation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AModule:
    algebra: AlgebraPresentation
    action: np.ndarray
    label: str = ""
    _memo: dict = dc_field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return int(self.action.shape[1])

    @property
    def field(self):
        return self.algebra.field

    def act(self, x: np.ndarray) -> np.ndarray:
        """Matrix of the algebra element with coefficient vector x."""
        return self.field.lincomb(x, self.action)

    @cached_property
    def content_hash(self) -> str:
        return content_hash(self.algebra.content_hash, module_to_json(self))

    def memo(self, key, compute):
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def __repr__(self):
        name = self.label or "module"
        return f"AModule({name!r}, dim={self.dim}, over={self.algebra.name!r})"


def _same_algebra(M: AModule, N: AModule):
    if M.algebra is not N.algebra and M.algebra.content_hash != N.algebra.content_hash:
        raise InvalidParams("modules live over different algebras",
                            left=M.algebra.name, right=N.algebra.name)


def representation_failures(M: AModule) -> list:
    """Index tuples where the action breaks the multiplication table or the unit."""
    A, F = M.algebra, M.field
    failures = []
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = F.matmul(M.action[i], M.action[j])
            if np.any(lhs != M.act(A.mult[i, j])):
                failures.append(("mult", i, j))
    if np.any(M.act(A.unit) != F.eye(M.dim)):
        failures.append(("unit",))
    return failures


def unit_module(A: AlgebraPresentation) -> AModule:
    if not A.has_hopf:
        raise MissingHopf(f"{A.name} has no counit, so no unit object")
    return AModule(A, A.counit.reshape(A.dim, 1, 1).copy(), label="1")


def regular_module(A: AlgebraPresentation) -> AModule:
    return AModule(A, A.left_mats.copy(), label="A")


def zero_module(A: AlgebraPresentation) -> AModule:
    return AModule(A, A.field.zeros((A.dim, 0, 0)), label="0")


def direct_sum(*modules: AModule) -> AModule:
    if not modules:
        raise InvalidParams("direct_sum needs at least one module")
    A = modules[0].algebra
    for M in modules[1:]:
        _same_algebra(modules[0], M)
    n = sum(M.dim for M in modules)
    action = A.field.zeros((A.dim, n, n))
    at = 0
    for M in modules:
        action[:, at:at + M.dim, at:at + M.dim] = M.action
        at += M.dim
    return AModule(A, action, label="+".join(M.label or "?" for M in modules))


def submodule(M: AModule, basis: np.ndarray, label: str = "") -> AModule:
    """Module structure on the column span of basis (columns independent and invariant)."""
    F, d = M.field, M.algebra.dim
    k = basis.shape[1]
    if k == 0:
        return zero_module(M.algebra)
    images = np.hstack([F.matmul(M.action[i], basis) for i in range(d)])
    coords = solve(F, basis, images)
    if isinstance(coords, NoSolution):
        raise InvariantViolation("subspace is not invariant under the action", module=M.label)
    action = coords.reshape(k, d, k).transpose(1, 0, 2)
    return AModule(M.algebra, np.ascontiguousarray(action), label=label)


@dataclass
class Quotient:
    module: AModule
    projection: np.ndarray
    lift: np.ndarray


def quotient_module(M: AModule, basis: np.ndarray, label: str = "") -> Quotient:
    """M / span(basis), with the projection M -> Q and a linear section Q -> M."""
    F, n = M.field, M.dim
    R, rk, pivots = rref(F, basis.T) if basis.shape[1] else (basis.T, 0, [])
    pivot_set = set(pivots)
    rest = [c for c in range(n) if c not in pivot_set]
    q = len(rest)
    projection = F.zeros((q, n))
    projection[np.arange(q), rest] = 1
    for r, c in enumerate(pivots):
        projection[:, c] = F.neg(R[r, rest])
    lift = F.eye(n)[:, rest]
    action = np.stack([F.matmul(F.matmul(projection, M.action[i]), lift)
                       for i in range(M.algebra.dim)]) if q else F.zeros((M.algebra.dim, 0, 0))
    return Quotient(AModule(M.algebra, action, label=label), projection, lift)


def hom_space(M: AModule, N: AModule) -> np.ndarray:
    """Basis (h, dim N, dim M) of Hom_A(M, N)."""
    _same_algebra(M, N)
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return F.zeros((0, n, m))

    def compute():
        blocks = [F.sub(kron(F, F.eye(n), M.action[g].T), kron(F, N.action[g], F.eye(m)))
                  for g in M.algebra.generators]
        if not blocks:
            return F.eye(n * m).reshape(n * m, n, m)
        K = kernel_basis(F, np.vstack(blocks))
        return K.reshape(-1, n, m)

    return M.memo(("hom", N.content_hash), compute)


def is_homomorphism(M: AModule, N: AModule, f: np.ndarray) -> bool:
    F = M.field
    if f.shape != (N.dim, M.dim):
        return False
    return all(np.array_equal(F.matmul(f, M.action[i]), F.matmul(N.action[i], f))
               for i in range(M.algebra.dim))


def tensor_module(M: AModule, N: AModule) -> AModule:
    """b_i acts on M (x) N by sum comul[i, j, k] rho_M(b_j) (x) rho_N(b_k)."""
    _same_algebra(M, N)
    A, F = M.algebra, M.field
    if not A.has_hopf:
        raise MissingHopf(f"{A.name} has no comultiplication")
    size = M.dim * N.dim
    action = F.zeros((A.dim, size, size))
    if size:
        pure = {}
        for i in range(A.dim):
            for j, k in zip(*np.nonzero(A.comul[i])):
                if (j, k) not in pure:
                    pure[(j, k)] = kron(F, M.action[j], N.action[k])
                action[i] = F.add(action[i], F.mul(int(A.comul[i, j, k]), pure[(j, k)]))
    return AModule(A, action, label=f"({M.label or '?'})x({N.label or '?'})")


def unit_isomorphism(M: AModule) -> np.ndarray:
    """The canonical identification 1 (x) M = M (and M (x) 1 = M) in the pure-tensor basis."""
    return M.field.eye(M.dim)


def orbit_matrix(M: AModule, v: np.ndarray) -> np.ndarray:
    """Columns rho(b_i) v: the map A -> M, a |-> a v."""
    F = M.field
    if F.m == 1:
        return (M.action @ v.reshape(-1)).T % F.p
    return np.stack([F.matmul(a, v.reshape(-1, 1))[:, 0] for a in M.action], axis=1)


def cyclic_submodule(M: AModule, vectors: np.ndarray) -> np.ndarray:
    """Column basis of the submodule generated by the columns of vectors."""
    if vectors.shape[1] == 0:
        return M.field.zeros((M.dim, 0))
    return image_basis(M.field, np.hstack([orbit_matrix(M, vectors[:, t])
                                           for t in range(vectors.shape[1])]))


def module_to_json(M: AModule) -> dict:
    F = M.field
    return {"algebra": M.algebra.name, "dim": M.dim,
            "action": [F.matrix_to_json(a) for a in M.action]}


def module_from_json(data: dict, A: AlgebraPresentation, label: str = "") -> AModule:
    try:
        if data["algebra"] != A.name:
            raise FormatError("module file names a different algebra",
                              expected=A.name, got=data["algebra"])
        n = int(data["dim"])
        mats = data["action"]
    except KeyError as e:
        raise FormatError(f"module file lacks field {e}") from e
    if len(mats) != A.dim:
        raise FormatError(f"module action needs {A.dim} matrices", got=len(mats))
    F = A.field
    action = F.zeros((A.dim, n, n))
    for i, rows in enumerate(mats):
        mat = F.matrix_from_json(rows) if n else F.zeros((0, 0))
        if mat.shape != (n, n):
            raise FormatError(f"action matrix {i} must be {n}x{n}", got=list(mat.shape))
        action[i] = mat
    M = AModule(A, action, label=label or str(data.get("label", "")))
    failures = representation_failures(M)
    if failures:
        raise FormatError("action does not respect the algebra structure", failures=failures[:10])
    return M
