"""Builders for the bundled algebras and random test modules."""
from __future__ import annotations

import itertools
import logging

import galois
import numpy as np

from .algebra import (AlgebraPresentation, AModule, cyclic_submodule, direct_sum, principal_decomposition,
                      quotient_module, validate)
from .errors import InvalidParams, InvariantViolation
from .exactfield import FieldSpec

logger = logging.getLogger(__name__)


def _checked(A: AlgebraPresentation) -> AlgebraPresentation:
    report = validate(A)
    if not report.valid:
        raise InvariantViolation(f"generated algebra {A.name} fails its axioms",
                                 failures=[f.model_dump() for f in report.failures[:10]])
    return A


def _prime_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


def group_algebra(p: int, orders: list) -> AlgebraPresentation:
    """F_p[Z/n_1 x ... x Z/n_r] with the group basis in lexicographic exponent order."""
    if not isinstance(p, int) or not galois.is_prime(p):
        raise InvalidParams("p must be a prime", p=p)
    orders = [int(n) for n in orders]
    if not orders or any(n < 2 or not _prime_power(n, p) for n in orders):
        raise InvalidParams("group type must be a nonempty list of powers of p", p=p, type=orders)
    F = FieldSpec(p)
    elements = list(itertools.product(*[range(n) for n in orders]))
    index = {g: i for i, g in enumerate(elements)}
    d = len(elements)
    mult, comul, antipode = F.zeros((d, d, d)), F.zeros((d, d, d)), F.zeros((d, d))
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            mult[i, j, index[tuple((a + b) % n for a, b, n in zip(g, h, orders))]] = 1
        comul[i, i, i] = 1
        antipode[index[tuple((-a) % n for a, n in zip(g, orders))], i] = 1
    unit = F.zeros(d)
    unit[0] = 1
    counit = np.ones(d, dtype=np.int64)
    name = f"F{p}[" + "x".join(f"Z{n}" for n in orders) + "]"
    logger.info("built %s of dimension %d", name, d)
    return _checked(AlgebraPresentation(name=name, field=F, dim=d, mult=mult, unit=unit, comul=comul,
                                        counit=counit, antipode=antipode, braided=False))


def sweedler(p: int) -> AlgebraPresentation:
    """The four-dimensional Hopf algebra <g, x | g^2 = 1, x^2 = 0, xg = -gx> over F_p, p odd.

    Basis b_{a + 2b} = g^a x^b, with Delta(g) = g (x) g and Delta(x) = x (x) 1 + g (x) x.
    """
    if not isinstance(p, int) or not galois.is_prime(p):
        raise InvalidParams("p must be a prime", p=p)
    if p == 2:
        raise InvalidParams("the Sweedler algebra needs characteristic other than 2", p=p)
    F = FieldSpec(p)

    def idx(a: int, b: int) -> int:
        return a % 2 + 2 * b

    mult, comul = F.zeros((4, 4, 4)), F.zeros((4, 4, 4))
    for a, b, c, e in itertools.product(range(2), repeat=4):
        if b + e < 2:
            mult[idx(a, b), idx(c, e), idx(a + c, b + e)] = F.scalar((-1) ** (b * c))
    for a in range(2):
        comul[idx(a, 0), idx(a, 0), idx(a, 0)] = 1
        comul[idx(a, 1), idx(a, 1), idx(a, 0)] = 1
        comul[idx(a, 1), idx(a + 1, 0), idx(a, 1)] = 1
    antipode = F.zeros((4, 4))
    antipode[idx(0, 0), idx(0, 0)] = 1
    antipode[idx(1, 0), idx(1, 0)] = 1
    antipode[idx(1, 1), idx(0, 1)] = F.scalar(-1)
    antipode[idx(0, 1), idx(1, 1)] = 1
    unit = F.zeros(4)
    unit[0] = 1
    counit = np.array([1, 1, 0, 0], dtype=np.int64)
    return _checked(AlgebraPresentation(name=f"Sweedler/F{p}", field=F, dim=4, mult=mult, unit=unit,
                                        comul=comul, counit=counit, antipode=antipode))


def random_module(A: AlgebraPresentation, seed: int, summands: int = 2, relations: int = 1) -> AModule:
    """Quotient of a random sum of principal indecomposables by a random cyclic submodule."""
    if summands < 1 or relations < 0:
        raise InvalidParams("need at least one summand and no negative relation count",
                            summands=summands, relations=relations)
    rng = np.random.default_rng(seed)
    principal = principal_decomposition(A)
    picks = [int(t) for t in rng.integers(0, len(principal), size=summands)]
    P = direct_sum(*[principal[t].module for t in picks])
    F = A.field
    V = F.random(rng, (P.dim, relations))
    K = cyclic_submodule(P, V)
    Q = quotient_module(P, K).module
    return AModule(A, Q.action, label=f"rand{seed}")
