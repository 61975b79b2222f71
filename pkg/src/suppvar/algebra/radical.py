"""Jacobson radical, simple modules and principal indecomposables of a basic split algebra."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvariantViolation, NonSplitSimple, RadicalFailure
from ..exactfield import (FieldSpec, NoSolution, blow_up, image_basis, in_span, kernel_basis,
                          rank, row_basis, solve)
from .modules import AModule, quotient_module, regular_module, submodule
from .presentation import AlgebraPresentation

logger = logging.getLogger(__name__)


def _trace_power(P: np.ndarray, e: int, modulus: int) -> int:
    """Trace of P**e over the integers, reduced mod modulus."""
    result = np.eye(P.shape[0], dtype=np.int64)
    base = P % modulus
    while e:
        if e & 1:
            result = (result @ base) % modulus
        base = (base @ base) % modulus
        e >>= 1
    return int(np.trace(result)) % modulus


def _prime_field_radical(p: int, mats: np.ndarray) -> np.ndarray:
    """Radical of the F_p matrix algebra spanned by mats (h, n, n), as coefficient rows.

    Iterated p-power trace refinement: I_i is the set of x in I_{i-1} with
    g_i(x y) = 0 for all y, where g_i(z) = Tr(z~^(p^i)) / p^i mod p for an
    integer lift z~. The last I_i, with p^i <= n, is the radical.
    """
    h, n, _ = mats.shape
    F = FieldSpec(p)
    levels = int(math.floor(math.log(n, p) + 1e-9)) if n > 1 else 0
    basis = F.eye(h)
    for i in range(levels + 1):
        if basis.shape[0] == 0:
            break
        scale = p ** i
        modulus = p ** (i + 1)
        elements = np.tensordot(basis, mats, axes=1) % p
        G = F.zeros((basis.shape[0], h))
        for s, U in enumerate(elements):
            for j in range(h):
                t = _trace_power((U @ mats[j]) % p, scale, modulus)
                if t % scale:
                    raise RadicalFailure("trace of a p-power is not divisible as expected",
                                         level=i, row=s, column=j)
                G[s, j] = (t // scale) % p
        coeffs = kernel_basis(F, G.T)
        basis = row_basis(F, F.matmul(coeffs, basis)) if coeffs.shape[0] else F.zeros((0, h))
        logger.debug("trace level %d: radical candidate dim %d", i, basis.shape[0])
    return basis


def matrix_algebra_radical(F: FieldSpec, mats: np.ndarray) -> np.ndarray:
    """Radical of the algebra spanned by mats acting faithfully, as coefficient rows over F."""
    h = mats.shape[0]
    if h == 0 or mats.shape[1] == 0:
        return F.zeros((0, h))
    if F.m == 1:
        return _prime_field_radical(F.p, mats)
    # restriction of scalars: F_p basis w^s b_a at index a * m + s
    omega_powers = [F.p ** s for s in range(F.m)]
    blown = np.stack([blow_up(F, F.mul(w, mats[a])) for a in range(h) for w in omega_powers])
    rows = _prime_field_radical(F.p, blown)
    weights = np.array(omega_powers, dtype=np.int64)
    collapsed = (rows.reshape(-1, h, F.m) * weights).sum(axis=2)
    return row_basis(F, collapsed) if collapsed.shape[0] else F.zeros((0, h))


@dataclass
class RadicalData:
    basis: np.ndarray
    nilpotency: int
    source: str

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])


def _ideal_and_nilpotency(A: AlgebraPresentation, J: np.ndarray) -> int:
    F, d = A.field, A.dim
    cols = J.T
    for i in range(d):
        left = F.matmul(A.left_mats[i], cols)
        right = F.matmul(A.right_mats[i], cols)
        if not in_span(F, cols, np.hstack([left, right])):
            raise RadicalFailure("radical candidate is not a two-sided ideal", basis_element=i)
    power, s = J, 1
    while power.shape[0]:
        if s > d + 1:
            raise RadicalFailure("radical candidate is not nilpotent", dim=J.shape[0])
        products = [A.product(x, y) for x in power for y in J]
        power = row_basis(F, np.array(products)) if products else F.zeros((0, d))
        s += 1
    return s


def radical(A: AlgebraPresentation) -> RadicalData:
    """rad(A), computed on the regular representation or certified when supplied."""
    def compute():
        F = A.field
        if A.radical_basis is not None:
            J = row_basis(F, A.radical_basis) if A.radical_basis.shape[0] else F.zeros((0, A.dim))
            source = "supplied"
        else:
            J = matrix_algebra_radical(F, A.left_mats)
            source = "computed"
        s = _ideal_and_nilpotency(A, J)
        logger.info("%s: radical dim %d (%s), nilpotency index %d", A.name, J.shape[0], source, s)
        return RadicalData(J, s, source)

    data = A.memo("radical", compute)
    if data.source == "supplied" and not A._memo.get("radical_certified"):
        A._memo["radical_certified"] = True
        found = len(characters(A))
        if found != A.dim - data.dim:
            raise RadicalFailure("supplied radical does not leave a split semisimple quotient",
                                 characters=found, codim=A.dim - data.dim)
    return data


@dataclass
class Character:
    values: np.ndarray
    idempotent: np.ndarray


def _eigenvector_value(v: np.ndarray, w: np.ndarray, F: FieldSpec) -> int:
    piv = int(np.nonzero(v)[0][0])
    return int(F.mul(int(w[piv]), F.inv(int(v[piv]))))


def characters(A: AlgebraPresentation) -> list:
    """Algebra maps A -> F with their idempotents lifted from A / rad(A).

    Joint eigenspaces of left multiplication on A / rad(A); each has to be
    one-dimensional or the quotient is not split basic.
    """
    def compute():
        F = A.field
        J = radical(A).basis if A.radical_basis is None else row_basis(F, A.radical_basis)
        quotient = quotient_module(regular_module(A), J.T)
        Q = quotient.module
        spaces = [F.eye(Q.dim)]
        for g in range(A.dim):
            refined = []
            for V in spaces:
                X = solve(F, V, F.matmul(Q.action[g], V))
                if isinstance(X, NoSolution):
                    raise NonSplitSimple("A / rad(A) is not commutative over this field; extend the field",
                                         algebra=A.name)
                found = 0
                for lam in F.elements():
                    E = kernel_basis(F, F.sub(X, F.mul(int(lam), F.eye(X.shape[0]))))
                    if E.shape[0]:
                        refined.append(F.matmul(V, E.T))
                        found += E.shape[0]
                if found != V.shape[1]:
                    raise NonSplitSimple("a simple module is not split over this field; extend the field",
                                         algebra=A.name, basis_element=g)
            spaces = refined
        if any(V.shape[1] != 1 for V in spaces):
            raise NonSplitSimple("a simple module has dimension > 1 over this field; extend the field",
                                 algebra=A.name)
        out = []
        for V in spaces:
            v = V[:, 0]
            values = np.array([_eigenvector_value(v, F.matmul(Q.action[i], V)[:, 0], F)
                               for i in range(A.dim)], dtype=np.int64)
            lifted = F.matmul(quotient.lift, V)[:, 0]
            scale = int(F.matmul(values[None, :], lifted[:, None])[0, 0])
            out.append(Character(values, F.mul(F.inv(scale), lifted)))
        counit = tuple(int(c) for c in A.counit) if A.has_hopf else None
        out.sort(key=lambda c: (tuple(int(x) for x in c.values) != counit, tuple(int(x) for x in c.values)))
        return out

    return A.memo("characters", compute)


def simples(A: AlgebraPresentation) -> list:
    chars = characters(A)
    out = []
    for t, chi in enumerate(chars):
        is_trivial = A.has_hopf and np.array_equal(chi.values, A.counit)
        label = "trivial" if is_trivial else f"S{t if A.has_hopf else t + 1}"
        out.append(AModule(A, chi.values.reshape(A.dim, 1, 1).copy(), label=label))
    return out


def lift_idempotent(F: FieldSpec, mul, x: np.ndarray, steps: int, where: str = "") -> np.ndarray:
    """Iterate e <- 3e^2 - 2e^3 from x, which is idempotent modulo a nilpotent ideal."""
    e = x
    for _ in range(steps):
        sq = mul(e, e)
        if np.array_equal(sq, e):
            return e
        cube = mul(sq, e)
        e = F.sub(F.mul(F.scalar(3), sq), F.mul(F.scalar(2), cube))
    if not np.array_equal(mul(e, e), e):
        raise InvariantViolation("idempotent lifting did not converge", where=where, steps=steps)
    return e


@dataclass
class PrincipalIndecomposable:
    module: AModule
    idempotent: np.ndarray
    basis: np.ndarray
    generator: np.ndarray
    simple_index: int

    @property
    def dim(self) -> int:
        return self.module.dim


def principal_decomposition(A: AlgebraPresentation) -> list:
    """Orthogonal primitive idempotents e_t summing to 1 and P_t = A e_t."""
    def compute():
        F = A.field
        chars = characters(A)
        steps = max(1, math.ceil(math.log2(max(radical(A).nilpotency, 2)))) + 2
        rest = A.unit
        idempotents = []
        for chi in chars[:-1]:
            x = A.product(A.product(rest, chi.idempotent), rest)
            e = lift_idempotent(A.field, A.product, x, steps, A.name)
            idempotents.append(e)
            rest = F.sub(rest, e)
        idempotents.append(rest)
        regular = regular_module(A)
        labels = [S.label for S in simples(A)]
        out = []
        for t, e in enumerate(idempotents):
            U = image_basis(F, A.right(e))
            P = submodule(regular, U, label=f"P({labels[t]})")
            gen = solve(F, U, e[:, None])
            out.append(PrincipalIndecomposable(P, e, U, gen[:, 0], t))
        if sum(P.dim for P in out) != A.dim:
            raise InvariantViolation("principal indecomposables do not span A", algebra=A.name)
        logger.info("%s: principal indecomposable dims %s", A.name, [P.dim for P in out])
        return out

    return A.memo("principal", compute)


def composition_multiplicities(Y: AModule) -> list:
    """[Y : S_t] = dim Hom(P_t, Y) = rank of e_t acting on Y."""
    F = Y.field
    return [rank(F, Y.act(P.idempotent)) if Y.dim else 0 for P in principal_decomposition(Y.algebra)]


def radical_of_module(M: AModule) -> np.ndarray:
    """Column basis of rad(A) M."""
    F = M.field
    J = radical(M.algebra).basis
    if M.dim == 0 or J.shape[0] == 0:
        return F.zeros((M.dim, 0))
    return image_basis(F, np.hstack([M.act(j) for j in J]))


def top_multiplicities(M: AModule) -> list:
    """Multiplicity of each simple in M / rad(A) M."""
    F = M.field
    if M.dim == 0:
        return [0] * len(characters(M.algebra))
    JM = radical_of_module(M)
    base = JM.shape[1]
    return [rank(F, np.hstack([M.act(P.idempotent), JM])) - base
            for P in principal_decomposition(M.algebra)]


def radical_layers(M: AModule) -> list:
    """Column bases of M, JM, J^2 M, ... down to zero."""
    F = M.field
    J = radical(M.algebra).basis
    layer = F.eye(M.dim)
    layers = [layer]
    while layer.shape[1]:
        if J.shape[0] == 0:
            break
        layer = image_basis(F, np.hstack([F.matmul(M.act(j), layer) for j in J]))
        layers.append(layer)
    return layers


def radical_filtration_multiplicities(M: AModule) -> list:
    """Composition multiplicities counted layer by layer in the radical filtration."""
    F = M.field
    layers = radical_layers(M)
    if len(layers) == 1:
        layers.append(F.zeros((M.dim, 0)))
    counts = [0] * len(principal_decomposition(M.algebra))
    for upper, lower in zip(layers, layers[1:]):
        base = rank(F, lower)
        for t, P in enumerate(principal_decomposition(M.algebra)):
            counts[t] += rank(F, np.hstack([F.matmul(M.act(P.idempotent), upper), lower])) - base
    return counts


def cartan_matrix(A: AlgebraPresentation) -> list:
    """c[i][j] = [P_j : S_i]."""
    columns = [composition_multiplicities(P.module) for P in principal_decomposition(A)]
    return [list(row) for row in zip(*columns)]
