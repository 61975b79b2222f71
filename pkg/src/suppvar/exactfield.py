"""Exact arithmetic in F_{p^m} and dense linear algebra over it.

Matrices are numpy int64 arrays holding element encodings. For m = 1 an
element is its residue 0..p-1. For m > 1 an element with power-basis
coefficients c_0..c_{m-1} is encoded as sum(c_i * p**i), which is also the
integer representation used by galois.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import galois
import numpy as np

from .errors import FieldError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int = 1
    min_poly: tuple | None = None

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not galois.is_prime(int(self.p)):
            raise FieldError(f"p = {self.p} is not a prime", p=self.p)
        if self.m < 1:
            raise FieldError("extension degree must be >= 1", m=self.m)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "m", int(self.m))
        if self.m == 1:
            object.__setattr__(self, "min_poly", None)
            return
        if self.min_poly is None or len(self.min_poly) != self.m + 1:
            raise FieldError("min_poly must list m + 1 coefficients, lowest degree first",
                             m=self.m, min_poly=self.min_poly)
        coeffs = tuple(int(c) % self.p for c in self.min_poly)
        if coeffs[-1] != 1:
            raise FieldError("min_poly must be monic", min_poly=list(coeffs))
        object.__setattr__(self, "min_poly", coeffs)
        if not self._poly.is_irreducible():
            raise FieldError(f"min_poly {list(coeffs)} is reducible over F_{self.p}",
                             min_poly=list(coeffs))

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def _poly(self):
        return galois.Poly(list(reversed(self.min_poly)), field=galois.GF(self.p))

    @cached_property
    def _tables(self):
        gf = galois.GF(self.order, irreducible_poly=self._poly)
        elems = gf.elements

        def plain(x):
            return x.view(np.ndarray).astype(np.int64)

        add = plain(elems[:, None] + elems[None, :])
        mul = plain(elems[:, None] * elems[None, :])
        neg = plain(-elems)
        inv = np.zeros(self.order, dtype=np.int64)
        inv[1:] = plain(gf(1) / elems[1:])
        digits = np.array([[(a // self.p ** i) % self.p for i in range(self.m)]
                           for a in range(self.order)], dtype=np.int64)
        # block[a][:, t] = digits of a * w**t, the F_p matrix of multiplication by a
        block = np.stack([np.stack([digits[mul[a, self.p ** t]] for t in range(self.m)], axis=1)
                          for a in range(self.order)])
        logger.debug("built arithmetic tables for F_%d^%d", self.p, self.m)
        return {"add": add, "mul": mul, "neg": neg, "inv": inv, "digits": digits, "block": block}

    # elements

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def scalar(self, c: int) -> int:
        """Image of the integer c in the prime subfield."""
        return int(c) % self.p

    def asarray(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return a % self.p
        if a.size and (a.min() < 0 or a.max() >= self.order):
            raise FieldError("element encoding out of range", order=self.order)
        return a

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.order, size=shape, dtype=np.int64)

    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self._tables["add"][a, b]

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self._tables["neg"][a]

    def sub(self, a, b):
        if self.m == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        return self._tables["add"][a, self._tables["neg"][b]]

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        return self._tables["mul"][a, b]

    def inv(self, a) -> int:
        a = int(a)
        if a == 0:
            raise FieldError("zero has no inverse")
        if self.m == 1:
            return pow(a, -1, self.p)
        return int(self._tables["inv"][a])

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (A @ B) % self.p
        add, mul = self._tables["add"], self._tables["mul"]
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = add[out, mul[A[:, k][:, None], B[k, :][None, :]]]
        return out

    def lincomb(self, coeffs, mats: np.ndarray) -> np.ndarray:
        """sum_i coeffs[i] * mats[i] for a stack of equally shaped arrays."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if self.m == 1:
            return np.tensordot(coeffs, mats, axes=1) % self.p
        out = np.zeros(mats.shape[1:], dtype=np.int64)
        for c, mat in zip(coeffs, mats):
            if c:
                out = self.add(out, self.mul(int(c), mat))
        return out

    # interchange

    def element_from_json(self, value) -> int:
        if isinstance(value, list):
            if len(value) != self.m:
                raise FieldError(f"coefficient list must have length {self.m}", value=value)
            return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(value))
        return int(value) % self.p

    def element_to_json(self, a):
        a = int(a)
        if self.m == 1:
            return a
        return [int(d) for d in self._tables["digits"][a]]

    def matrix_from_json(self, rows, shape=None) -> np.ndarray:
        out = np.array([[self.element_from_json(v) for v in row] for row in rows], dtype=np.int64)
        if shape is not None:
            out = out.reshape(shape)
        return out

    def matrix_to_json(self, M: np.ndarray):
        return [[self.element_to_json(v) for v in row] for row in M]

    def to_json(self) -> dict:
        out = {"p": self.p, "m": self.m}
        if self.m > 1:
            out["min_poly"] = list(self.min_poly)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        try:
            min_poly = data.get("min_poly")
            return cls(int(data["p"]), int(data.get("m", 1)),
                       tuple(min_poly) if min_poly is not None else None)
        except KeyError as e:
            raise FieldError(f"field description lacks {e}", field=data) from e

    def __str__(self):
        return f"F_{self.p}" if self.m == 1 else f"F_{self.p}^{self.m}"


class NoSolution:
    """Returned by solve when B is outside the column space of A."""

    __slots__ = ()

    def __repr__(self):
        return "NoSolution"

    def __bool__(self):
        return False


NO_SOLUTION = NoSolution()


def rref(F: FieldSpec, M: np.ndarray):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns (R, rank, pivots).
    """
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = F.mul(R[r], F.inv(R[r, c]))
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = F.sub(R[others], F.mul(R[others, c][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(F: FieldSpec, M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return rref(F, M)[1]


def kernel_basis(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Rows spanning the right null space of M."""
    cols = M.shape[1]
    R, rk, pivots = rref(F, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        if rk:
            K[t, pivots] = F.neg(R[:rk, f])
    return K


def row_basis(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Nonzero rows of rref(M): a canonical basis of the row space."""
    if M.shape[0] == 0:
        return np.zeros((0, M.shape[1]), dtype=np.int64)
    R, rk, _ = rref(F, M)
    return R[:rk]


def image_basis(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Columns spanning the column space of M (canonical, from rref of M^T)."""
    return row_basis(F, M.T).T


def solve(F: FieldSpec, A: np.ndarray, B: np.ndarray):
    """X with A @ X = B, or NO_SOLUTION."""
    if A.shape[0] != B.shape[0]:
        raise FieldError("solve needs A.rows == B.rows", a=A.shape, b=B.shape)
    cols = A.shape[1]
    R, rk, pivots = rref(F, np.hstack([A, B]))
    if any(p >= cols for p in pivots):
        return NO_SOLUTION
    X = np.zeros((cols, B.shape[1]), dtype=np.int64)
    if rk:
        X[pivots] = R[:rk, cols:]
    return X


def inverse(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    if M.shape != (n, n) or rank(F, M) != n:
        raise FieldError("matrix is not invertible", shape=M.shape)
    return solve(F, M, F.eye(n))


def kron(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    a1, a2 = A.shape
    b1, b2 = B.shape
    prod = F.mul(A[:, None, :, None], B[None, :, None, :])
    return prod.reshape(a1 * b1, a2 * b2)


def matpow(F: FieldSpec, M: np.ndarray, e: int) -> np.ndarray:
    result = F.eye(M.shape[0])
    base = M
    while e:
        if e & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        e >>= 1
    return result


def in_span(F: FieldSpec, basis_cols: np.ndarray, vectors: np.ndarray) -> bool:
    if vectors.shape[1] == 0:
        return True
    if basis_cols.shape[1] == 0:
        return not np.any(vectors)
    return not isinstance(solve(F, basis_cols, vectors), NoSolution)


def blow_up(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Restriction of scalars: an F_{p^m} matrix as an F_p matrix of m x m blocks."""
    if F.m == 1:
        return np.array(M, dtype=np.int64)
    r, c = M.shape
    blocks = F._tables["block"][M]
    return blocks.transpose(0, 2, 1, 3).reshape(r * F.m, c * F.m)


def prime_field(F: FieldSpec) -> FieldSpec:
    return F if F.m == 1 else FieldSpec(F.p)
