"""Finite-dimensional algebras with Hopf structure, given by structure constants."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Optional

import numpy as np
from pydantic import BaseModel

from ..errors import FormatError
from ..exactfield import FieldSpec, kron, rank, row_basis
from ..utils.hashing import content_hash

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    """b_i b_j = sum_k mult[i, j, k] b_k and Delta(b_i) = sum comul[i, j, k] b_j (x) b_k."""

    name: str
    field: FieldSpec
    dim: int
    mult: np.ndarray
    unit: np.ndarray
    comul: Optional[np.ndarray] = None
    counit: Optional[np.ndarray] = None
    antipode: Optional[np.ndarray] = None
    radical_basis: Optional[np.ndarray] = None
    braided: bool = False
    _memo: dict = dc_field(default_factory=dict, repr=False)

    @property
    def has_hopf(self) -> bool:
        return self.comul is not None and self.counit is not None

    @cached_property
    def left_mats(self) -> np.ndarray:
        # left_mats[i][k, j] = mult[i, j, k]
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def right_mats(self) -> np.ndarray:
        # right_mats[j][k, i] = mult[i, j, k]
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    @cached_property
    def content_hash(self) -> str:
        return content_hash(algebra_to_json(self))

    @cached_property
    def generators(self) -> list:
        return algebra_generators(self)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        F, d = self.field, self.dim
        outer = F.mul(x[:, None], y[None, :]).reshape(1, d * d)
        return F.matmul(outer, self.mult.reshape(d * d, d))[0]

    def left(self, x: np.ndarray) -> np.ndarray:
        return self.field.lincomb(x, self.left_mats)

    def right(self, x: np.ndarray) -> np.ndarray:
        return self.field.lincomb(x, self.right_mats)

    def memo(self, key, compute):
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def __repr__(self):
        return f"AlgebraPresentation({self.name!r}, {self.field}, dim={self.dim})"


def _span_closure(A: AlgebraPresentation, vectors: list) -> np.ndarray:
    """Row basis of the subalgebra generated by the given vectors and 1."""
    F = A.field
    gens = [A.unit] + list(vectors)
    span = row_basis(F, np.array(gens, dtype=np.int64))
    while True:
        products = [F.matmul(A.left(g), span.T).T for g in gens]
        grown = row_basis(F, np.vstack([span] + products))
        if grown.shape[0] == span.shape[0]:
            return grown
        span = grown


def algebra_generators(A: AlgebraPresentation) -> list:
    """Greedy list of basis indices generating A as a unital algebra."""
    F = A.field
    chosen = []
    closure = _span_closure(A, [])
    for i in range(A.dim):
        if closure.shape[0] == A.dim:
            break
        e = A.basis_vector(i)
        if rank(F, np.vstack([closure, e])) == closure.shape[0]:
            continue
        chosen.append(i)
        closure = _span_closure(A, [A.basis_vector(j) for j in chosen])
    return chosen


class AxiomFailure(BaseModel):
    identity: str
    indices: list[int]


class ValidationReport(BaseModel):
    name: str
    algebra_hash: str
    valid: bool
    checked: list[str]
    failures: list[AxiomFailure]


def validate(A: AlgebraPresentation) -> ValidationReport:
    """Check the (bi)algebra axioms by exact linear algebra."""
    F, d = A.field, A.dim
    failures = []
    checked = ["associativity", "unit"]
    L = A.left_mats

    for i in range(d):
        for j in range(d):
            lhs = F.matmul(L[i], L[j])
            rhs = F.lincomb(A.mult[i, j], L)
            for k in np.nonzero(np.any(lhs != rhs, axis=0))[0]:
                failures.append(AxiomFailure(identity="associativity", indices=[i, j, int(k)]))

    eye = F.eye(d)
    for k in np.nonzero(np.any(A.left(A.unit) != eye, axis=0))[0]:
        failures.append(AxiomFailure(identity="left unit", indices=[int(k)]))
    for k in np.nonzero(np.any(A.right(A.unit) != eye, axis=0))[0]:
        failures.append(AxiomFailure(identity="right unit", indices=[int(k)]))

    if A.has_hopf:
        checked += ["coassociativity", "counit", "comultiplicative", "counit multiplicative"]
        C, eps = A.comul, A.counit
        flat = C.reshape(d, d * d)
        for i in range(d):
            left = F.matmul(C[i].T, flat).reshape(d, d, d).transpose(1, 2, 0).reshape(d, d * d)
            right = F.matmul(C[i], flat)
            if np.any(left != right):
                failures.append(AxiomFailure(identity="coassociativity", indices=[i]))
            if np.any(F.matmul(eps[None, :], C[i])[0] != eye[i]):
                failures.append(AxiomFailure(identity="left counit", indices=[i]))
            if np.any(F.matmul(C[i], eps[:, None])[:, 0] != eye[i]):
                failures.append(AxiomFailure(identity="right counit", indices=[i]))

        stacked = C.reshape(d, d * d).T
        for i in range(d):
            action = F.zeros((d * d, d * d))
            for a, b in zip(*np.nonzero(C[i])):
                action = F.add(action, F.mul(int(C[i, a, b]), kron(F, L[a], L[b])))
            lhs = F.matmul(action, stacked)
            rhs = F.matmul(stacked, A.mult[i].T)
            for j in np.nonzero(np.any(lhs != rhs, axis=0))[0]:
                failures.append(AxiomFailure(identity="comultiplicative", indices=[i, int(j)]))
        if np.any(F.lincomb(A.unit, C) != F.mul(A.unit[:, None], A.unit[None, :])):
            failures.append(AxiomFailure(identity="comultiplicative unit", indices=[]))

        eps_prod = F.matmul(A.mult.reshape(d * d, d), eps[:, None]).reshape(d, d)
        outer = F.mul(eps[:, None], eps[None, :])
        for i, j in zip(*np.nonzero(eps_prod != outer)):
            failures.append(AxiomFailure(identity="counit multiplicative", indices=[int(i), int(j)]))
        if int(F.matmul(A.unit[None, :], eps[:, None])[0, 0]) != 1:
            failures.append(AxiomFailure(identity="counit of unit", indices=[]))

        if A.antipode is not None:
            checked.append("antipode")
            S = A.antipode
            mult_flat = A.mult.reshape(d * d, d)
            for i in range(d):
                target = F.mul(int(eps[i]), A.unit)
                g = F.matmul(F.matmul(S, C[i]).reshape(1, d * d), mult_flat)[0]
                h = F.matmul(F.matmul(C[i], S.T).reshape(1, d * d), mult_flat)[0]
                if np.any(g != target):
                    failures.append(AxiomFailure(identity="left antipode", indices=[i]))
                if np.any(h != target):
                    failures.append(AxiomFailure(identity="right antipode", indices=[i]))

    if failures:
        logger.warning("%s: %d axiom failures", A.name, len(failures))
    return ValidationReport(name=A.name, algebra_hash=A.content_hash, valid=not failures,
                            checked=checked, failures=failures)


def _table(F: FieldSpec, d: int, entries, what: str) -> np.ndarray:
    out = F.zeros((d, d, d))
    for entry in entries:
        if len(entry) != 4:
            raise FormatError(f"{what} entries must be [i, j, k, c]", entry=entry)
        i, j, k, c = entry
        if not all(0 <= int(x) < d for x in (i, j, k)):
            raise FormatError(f"{what} index out of range", entry=entry)
        out[i, j, k] = F.add(out[i, j, k], F.element_from_json(c))
    return out


def _vector(F: FieldSpec, d: int, values, what: str) -> np.ndarray:
    if len(values) != d:
        raise FormatError(f"{what} must have {d} entries", got=len(values))
    return np.array([F.element_from_json(v) for v in values], dtype=np.int64)


def algebra_from_json(data: dict) -> AlgebraPresentation:
    try:
        F = FieldSpec.from_json(data["field"])
        d = int(data["dim"])
        mult = _table(F, d, data["mult"], "mult")
        unit = _vector(F, d, data["unit"], "unit")
        comul = counit = antipode = None
        hopf = data.get("hopf")
        if hopf:
            comul = _table(F, d, hopf["comul"], "comul")
            counit = _vector(F, d, hopf["counit"], "counit")
            if hopf.get("antipode") is not None:
                antipode = F.matrix_from_json(hopf["antipode"], (d, d))
        radical_rows = None
        if data.get("radical_basis") is not None:
            radical_rows = F.matrix_from_json(data["radical_basis"]).reshape(-1, d)
        return AlgebraPresentation(name=str(data["name"]), field=F, dim=d, mult=mult, unit=unit,
                                   comul=comul, counit=counit, antipode=antipode,
                                   radical_basis=radical_rows, braided=bool(data.get("braided", False)))
    except KeyError as e:
        raise FormatError(f"algebra file lacks field {e}") from e


def _entries(F: FieldSpec, table: np.ndarray) -> list:
    return [[int(i), int(j), int(k), F.element_to_json(table[i, j, k])]
            for i, j, k in zip(*np.nonzero(table))]


def algebra_to_json(A: AlgebraPresentation) -> dict:
    F = A.field
    out = {
        "name": A.name,
        "field": F.to_json(),
        "dim": A.dim,
        "mult": _entries(F, A.mult),
        "unit": [F.element_to_json(v) for v in A.unit],
    }
    if A.has_hopf:
        out["hopf"] = {"comul": _entries(F, A.comul),
                       "counit": [F.element_to_json(v) for v in A.counit]}
        if A.antipode is not None:
            out["hopf"]["antipode"] = F.matrix_to_json(A.antipode)
    if A.radical_basis is not None:
        out["radical_basis"] = F.matrix_to_json(A.radical_basis)
    if A.braided:
        out["braided"] = True
    return out
