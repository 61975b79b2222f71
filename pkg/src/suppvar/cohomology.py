"""Ext spaces over minimal resolutions, Yoneda products and the action of H(C) on Ext*(X, Y).

Classes are cocycle representatives P_n(X) -> Y in a deterministic basis of
Hom(P_n(X), Y); a hom out of P_n is recorded by where it sends the
generators of the principal summands of P_n.
"""
from __future__ import annotations

import logging
import weakref
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
from pydantic import BaseModel

from .algebra import AlgebraPresentation, AModule, orbit_matrix, principal_decomposition, tensor_module, unit_module
from .errors import InvalidParams, InvariantViolation, LiftFailure
from .exactfield import FieldSpec, NoSolution, image_basis, kernel_basis, kron, rank, solve
from .resolve import ResolutionStore, default_store

logger = logging.getLogger(__name__)


@dataclass
class ExtSpace:
    source: AModule
    target: AModule
    degree: int
    hom_basis: np.ndarray
    reps: np.ndarray
    boundaries: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.reps.shape[0])

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    def cocycle(self, coords: np.ndarray) -> np.ndarray:
        F = self.field
        if self.hom_basis.shape[0] == 0 or self.dim == 0:
            return F.zeros((self.target.dim, self.hom_basis.shape[2]))
        return F.lincomb(F.matmul(coords[None, :], self.reps)[0], self.hom_basis)

    def element(self, coords) -> "ExtClass":
        coords = self.field.asarray(coords).reshape(self.dim)
        return ExtClass(self, coords)

    def basis_class(self, i: int) -> "ExtClass":
        coords = self.field.zeros(self.dim)
        coords[i] = 1
        return ExtClass(self, coords)

    def class_of(self, hom_coords: np.ndarray) -> "ExtClass":
        """Class of a cocycle given in hom-basis coordinates."""
        F = self.field
        system = np.hstack([self.reps.T, self.boundaries])
        if system.shape[1] == 0:
            if np.any(hom_coords):
                raise InvariantViolation("map is not a cocycle", degree=self.degree)
            return self.element(F.zeros(0))
        sol = solve(F, system, hom_coords.reshape(-1, 1))
        if isinstance(sol, NoSolution):
            raise InvariantViolation("map is not a cocycle", degree=self.degree)
        return ExtClass(self, sol[:self.dim, 0])


@dataclass
class ExtClass:
    space: ExtSpace
    coords: np.ndarray

    @property
    def degree(self) -> int:
        return self.space.degree

    @property
    def source(self) -> AModule:
        return self.space.source

    @property
    def target(self) -> AModule:
        return self.space.target

    @property
    def cocycle(self) -> np.ndarray:
        return self.space.cocycle(self.coords)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        if other.space is not self.space:
            raise InvalidParams("classes live in different Ext spaces")
        return ExtClass(self.space, self.space.field.add(self.coords, other.coords))

    def scaled(self, c: int) -> "ExtClass":
        return ExtClass(self.space, self.space.field.mul(int(c), self.coords))

    def __repr__(self):
        return f"ExtClass(degree={self.degree}, coords={self.coords.tolist()})"


def lift_through(F: FieldSpec, h: np.ndarray, g: np.ndarray, generators: np.ndarray, summands: list,
                 principal: list, Q: AModule) -> np.ndarray:
    """A-linear g_hat: P -> Q with h g_hat = g, P a sum of principal indecomposables."""
    if generators.shape[1] == 0:
        return F.zeros((Q.dim, 0))
    targets = F.matmul(g, generators)
    sol = solve(F, h, targets)
    if isinstance(sol, NoSolution):
        raise LiftFailure("map does not lift through the given morphism", source_summands=summands)
    blocks = []
    for j, t in enumerate(summands):
        q = F.matmul(Q.act(principal[t].idempotent), sol[:, j:j + 1])[:, 0]
        blocks.append(F.matmul(orbit_matrix(Q, q), principal[t].basis))
    return np.hstack(blocks)


class CohomologyEngine:
    """Ext computations against the minimal resolutions held in a ResolutionStore."""

    def __init__(self, algebra: AlgebraPresentation, store: Optional[ResolutionStore] = None):
        self.algebra = algebra
        self.store = store or default_store()
        self.field = algebra.field
        self._generators = {}
        self._tops = {}
        self._hom = {}
        self._spaces = {}
        self._lifts = {}
        self._comparisons = {}

    # resolutions and hom spaces

    def resolution(self, X: AModule, depth: int):
        return self.store.get(X, depth)

    def generators(self, X: AModule, n: int):
        key = (X.content_hash, n)
        if key not in self._generators:
            res = self.resolution(X, n)
            principal = principal_decomposition(self.algebra)
            summands = res.covers[n].summands
            G = self.field.zeros((res.term(n).dim, len(summands)))
            at = 0
            for j, t in enumerate(summands):
                G[at:at + principal[t].dim, j] = principal[t].generator
                at += principal[t].dim
            self._generators[key] = (G, list(summands))
        return self._generators[key]

    def _top_space(self, Y: AModule, t: int) -> np.ndarray:
        """Column basis of e_t Y, which is Hom(P_t, Y) by evaluation at the generator."""
        key = (Y.content_hash, t)
        if key not in self._tops:
            e = principal_decomposition(self.algebra)[t].idempotent
            self._tops[key] = image_basis(self.field, Y.act(e)) if Y.dim else self.field.zeros((0, 0))
        return self._tops[key]

    def hom_basis(self, X: AModule, Y: AModule, n: int) -> np.ndarray:
        key = (X.content_hash, Y.content_hash, n)
        if key not in self._hom:
            F = self.field
            principal = principal_decomposition(self.algebra)
            P = self.resolution(X, n).term(n)
            _, summands = self.generators(X, n)
            maps = []
            at = 0
            for t in summands:
                U = principal[t].basis
                for y in self._top_space(Y, t).T:
                    f = F.zeros((Y.dim, P.dim))
                    f[:, at:at + U.shape[1]] = F.matmul(orbit_matrix(Y, y), U)
                    maps.append(f)
                at += U.shape[1]
            self._hom[key] = np.stack(maps) if maps else F.zeros((0, Y.dim, P.dim))
        return self._hom[key]

    def hom_coords(self, X: AModule, Y: AModule, n: int, maps: np.ndarray) -> np.ndarray:
        """Coordinates (k, h) of the homs maps (k, dim Y, dim P_n) in hom_basis."""
        F = self.field
        G, summands = self.generators(X, n)
        k = maps.shape[0]
        parts = []
        for j, t in enumerate(summands):
            E = self._top_space(Y, t)
            values = np.stack([F.matmul(f, G[:, j:j + 1])[:, 0] for f in maps], axis=1) if k \
                else F.zeros((Y.dim, 0))
            if E.shape[1] == 0:
                if np.any(values):
                    raise InvariantViolation("generator is sent outside e_t Y", summand=j)
                continue
            sol = solve(F, E, values)
            if isinstance(sol, NoSolution):
                raise InvariantViolation("generator is sent outside e_t Y", summand=j)
            parts.append(sol)
        if not parts:
            return F.zeros((k, 0))
        return np.vstack(parts).T

    def coboundary(self, X: AModule, Y: AModule, n: int) -> np.ndarray:
        """delta_n: Hom(P_{n-1}, Y) -> Hom(P_n, Y), f |-> f d_n, as an (h_n, h_{n-1}) matrix."""
        F = self.field
        if n == 0:
            return F.zeros((self.hom_basis(X, Y, 0).shape[0], 0))
        previous = self.hom_basis(X, Y, n - 1)
        current = self.hom_basis(X, Y, n)
        if previous.shape[0] == 0 or current.shape[0] == 0:
            return F.zeros((current.shape[0], previous.shape[0]))
        d = self.resolution(X, n).differential(n)
        composites = np.stack([F.matmul(f, d) for f in previous])
        return self.hom_coords(X, Y, n, composites).T

    def ext_space(self, X: AModule, Y: AModule, n: int) -> ExtSpace:
        if n < 0:
            raise InvalidParams("Ext degree must be >= 0", degree=n)
        if X.algebra is not self.algebra and X.algebra.content_hash != self.algebra.content_hash:
            raise InvalidParams("module lives over a different algebra", module=X.label)
        key = (X.content_hash, Y.content_hash, n)
        if key not in self._spaces:
            F = self.field
            self.resolution(X, n + 1)
            H = self.hom_basis(X, Y, n)
            h = H.shape[0]
            cocycles = kernel_basis(F, self.coboundary(X, Y, n + 1)) if h else F.zeros((0, 0))
            B = self.coboundary(X, Y, n)
            base = rank(F, B)
            current = B
            chosen = []
            for z in cocycles:
                grown = np.hstack([current, z[:, None]])
                if rank(F, grown) > base:
                    current, base = grown, base + 1
                    chosen.append(z)
            reps = np.array(chosen, dtype=np.int64).reshape(len(chosen), h)
            self._spaces[key] = ExtSpace(X, Y, n, H, reps, B)
            logger.debug("Ext^%d(%s, %s) has dim %d", n, X.label, Y.label, len(chosen))
        return self._spaces[key]

    def ext_dims(self, X: AModule, Y: AModule, D: int) -> list:
        if X.dim == 0 or Y.dim == 0:
            return [0] * (D + 1)
        return [self.ext_space(X, Y, n).dim for n in range(D + 1)]

    def pair_ext_dims(self, X: AModule, Y: AModule, D: int) -> list:
        """dim Ext^n(X, Y) for n <= D, the growth input of the pair variety V(X, Y)."""
        return self.ext_dims(X, Y, D)

    def cocycle_representatives(self, X: AModule, Y: AModule, n: int) -> list:
        space = self.ext_space(X, Y, n)
        return [space.cocycle(space.basis_class(i).coords) for i in range(space.dim)]

    def class_of_map(self, X: AModule, Y: AModule, n: int, f: np.ndarray) -> ExtClass:
        space = self.ext_space(X, Y, n)
        return space.class_of(self.hom_coords(X, Y, n, f[None])[0])

    # chain maps and products

    def lift_chain_map(self, cocycle: np.ndarray, X: AModule, Y: AModule, n: int, levels: int) -> list:
        """zeta_j: P_{n+j}(X) -> P_j(Y) for j <= levels, with d^Y_j zeta_j = zeta_{j-1} d^X_{n+j}."""
        F = self.field
        key = (X.content_hash, Y.content_hash, n, cocycle.shape, cocycle.tobytes())
        lifts = self._lifts.setdefault(key, [])
        res_x = self.resolution(X, n + levels)
        res_y = self.resolution(Y, levels)
        principal = principal_decomposition(self.algebra)
        while len(lifts) <= levels:
            j = len(lifts)
            G, summands = self.generators(X, n + j)
            if j == 0:
                h, g = res_y.augmentation, cocycle
            else:
                h = res_y.differential(j)
                g = F.matmul(lifts[j - 1], res_x.differential(n + j))
            lifts.append(lift_through(F, h, g, G, summands, principal, res_y.term(j)))
        return lifts[:levels + 1]

    def yoneda_product(self, zeta: ExtClass, theta: ExtClass) -> ExtClass:
        """zeta theta for zeta in Ext^m(Y, Z) and theta in Ext^n(X, Y)."""
        if zeta.source.content_hash != theta.target.content_hash:
            raise InvalidParams("classes are not composable",
                                left=zeta.source.label, right=theta.target.label)
        m, n = zeta.degree, theta.degree
        X, Y, Z = theta.source, theta.target, zeta.target
        lifted = self.lift_chain_map(theta.cocycle, X, Y, n, m)[m]
        product = self.field.matmul(zeta.cocycle, lifted)
        return self.class_of_map(X, Z, m + n, product)

    # the cohomology ring and its actions

    @property
    def unit(self) -> AModule:
        return unit_module(self.algebra)

    def ring_space(self, n: int) -> ExtSpace:
        return self.ext_space(self.unit, self.unit, n)

    def ring_class(self, degree: int, index: int) -> ExtClass:
        space = self.ring_space(degree)
        if not 0 <= index < space.dim:
            raise InvalidParams("no such basis class", degree=degree, index=index, dim=space.dim)
        return space.basis_class(index)

    def ring_degrees(self, D: int) -> list:
        """Degrees 1..D that belong to H(C): all in characteristic 2, even ones otherwise."""
        step = 1 if self.field.p == 2 else 2
        return list(range(step, D + 1, step))

    def ring_table(self, D: int) -> "CohomologyTable":
        F = self.field
        dims = [self.ring_space(n).dim for n in range(D + 1)]
        if dims[0] != 1:
            raise InvariantViolation("H^0 of the unit object is not one-dimensional", dim=dims[0])
        degrees = self.ring_degrees(D)
        constants = {}
        for a in degrees:
            for b in degrees:
                if a + b > D:
                    continue
                for i in range(dims[a]):
                    for j in range(dims[b]):
                        prod = self.yoneda_product(self.ring_class(a, i), self.ring_class(b, j))
                        constants[(a, i, b, j)] = [int(c) for c in prod.coords]
        commutative = True
        for (a, i, b, j), value in constants.items():
            sign = F.scalar((-1) ** (a * b))
            other = constants[(b, j, a, i)]
            if [int(F.mul(sign, c)) for c in other] != value:
                commutative = False
                logger.warning("graded commutativity fails for (%d,%d)x(%d,%d)", a, i, b, j)
        generators = {a: [f"h{a}_{i}" for i in range(dims[a])] for a in degrees if dims[a]}
        logger.info("%s: H* dims to degree %d: %s", self.algebra.name, D, dims)
        return CohomologyTable(algebra=self.algebra.name, depth=D,
                               parity_mode="full" if F.p == 2 else "even",
                               dims=dims, generators_by_degree=generators,
                               constants=constants, graded_commutative=commutative, field=F)

    def comparison(self, X: AModule, levels: int) -> list:
        """kappa_j: P_j(X) -> P_j(1) (x) X over id_X."""
        F = self.field
        one = self.unit
        res_one = self.resolution(one, levels)
        res_x = self.resolution(X, levels)
        principal = principal_decomposition(self.algebra)
        kappa = self._comparisons.setdefault(X.content_hash, [])
        eye = F.eye(X.dim)
        while len(kappa) <= levels:
            j = len(kappa)
            Q = tensor_module(res_one.term(j), X)
            G, summands = self.generators(X, j)
            if j == 0:
                h, g = kron(F, res_one.augmentation, eye), res_x.augmentation
            else:
                h = kron(F, res_one.differential(j), eye)
                g = F.matmul(kappa[j - 1], res_x.differential(j))
            kappa.append(lift_through(F, h, g, G, summands, principal, Q))
        return kappa[:levels + 1]

    def phi_class(self, zeta: ExtClass, X: AModule) -> ExtClass:
        """phi_X(zeta) in Ext^n(X, X): (zeta_hat (x) id_X) composed with the comparison map."""
        F = self.field
        n = zeta.degree
        kappa = self.comparison(X, n)[n]
        cocycle = F.matmul(kron(F, zeta.cocycle, F.eye(X.dim)), kappa)
        return self.class_of_map(X, X, n, cocycle)

    def act(self, zeta: ExtClass, X: AModule, Y: AModule, D: int) -> dict:
        """theta |-> theta . phi_X(zeta) as matrices Ext^m(X, Y) -> Ext^{m+n}(X, Y), m + n <= D."""
        F = self.field
        n = zeta.degree
        out = {}
        if n > D:
            return out
        phi = self.phi_class(zeta, X)
        lifts = self.lift_chain_map(phi.cocycle, X, X, n, D - n)
        for m in range(D - n + 1):
            source = self.ext_space(X, Y, m)
            target = self.ext_space(X, Y, m + n)
            cols = [self.class_of_map(X, Y, m + n, F.matmul(source.cocycle(source.basis_class(i).coords),
                                                            lifts[m])).coords
                    for i in range(source.dim)]
            out[m] = np.stack(cols, axis=1) if cols else F.zeros((target.dim, 0))
        return out

    def left_action(self, zeta: ExtClass, X: AModule, Y: AModule, D: int) -> dict:
        """theta |-> phi_Y(zeta) . theta, the action through Y."""
        F = self.field
        n = zeta.degree
        out = {}
        if n > D:
            return out
        phi = self.phi_class(zeta, Y).cocycle
        for m in range(D - n + 1):
            source = self.ext_space(X, Y, m)
            target = self.ext_space(X, Y, m + n)
            cols = []
            for i in range(source.dim):
                theta = source.cocycle(source.basis_class(i).coords)
                lifted = self.lift_chain_map(theta, X, Y, m, n)[n]
                cols.append(self.class_of_map(X, Y, m + n, F.matmul(phi, lifted)).coords)
            out[m] = np.stack(cols, axis=1) if cols else F.zeros((target.dim, 0))
        return out

    def annihilates(self, zeta: ExtClass, X: AModule, D: int) -> bool:
        """zeta . Ext^{<= D - deg}(X, X) = 0, checked up to degree D only."""
        if X.dim == 0:
            return True
        return all(not np.any(mat) for mat in self.act(zeta, X, X, D).values())

    def annihilator_truncation(self, X: AModule, D: int) -> "AnnihilatorRecord":
        F = self.field
        per_degree = {}
        for a in self.ring_degrees(D // 2):
            space = self.ring_space(a)
            if space.dim == 0:
                continue
            vectors = []
            for i in range(space.dim):
                mats = self.act(space.basis_class(i), X, X, D)
                flat = [mat.reshape(-1) for mat in mats.values()]
                vectors.append(np.concatenate(flat) if flat else F.zeros(0))
            V = np.stack(vectors)
            per_degree[a] = kernel_basis(F, V.T).tolist() if V.shape[1] else F.eye(space.dim).tolist()
        return AnnihilatorRecord(module=X.label, depth=D, annihilators=per_degree)

    def ext_vanishes(self, X: AModule, Y: AModule, D: int) -> "VanishingVerdict":
        dims = self.ext_dims(X, Y, D)
        positive = dims[1:]
        if not any(positive):
            verdict = "vanishes-from-1"
        else:
            last = max(n for n in range(1, D + 1) if dims[n])
            verdict = "vanishes-eventually-only" if last <= D // 2 else "nonvanishing"
        if verdict == "vanishes-eventually-only":
            logger.warning("Ext(%s, %s) vanishes late but not from degree 1: %s", X.label, Y.label, dims)
        return VanishingVerdict(source=X.label, target=Y.label, depth=D, dims=dims, verdict=verdict,
                                red_flag=verdict == "vanishes-eventually-only")


@dataclass
class CohomologyTable:
    algebra: str
    depth: int
    parity_mode: str
    dims: list
    generators_by_degree: dict
    constants: dict
    graded_commutative: bool
    field: FieldSpec = dc_field(repr=False, default=None)

    def hilbert_function(self) -> list:
        if self.parity_mode == "full":
            return list(self.dims)
        return [d for n, d in enumerate(self.dims) if n % 2 == 0]

    def multiply(self, a: int, u, b: int, v) -> list:
        """Product of sum u_i h_{a,i} and sum v_j h_{b,j} from the structure constants."""
        F = self.field
        out = F.zeros(self.dims[a + b])
        for i, ui in enumerate(u):
            for j, vj in enumerate(v):
                if ui and vj:
                    term = F.mul(int(F.mul(int(ui), int(vj))), np.array(self.constants[(a, i, b, j)]))
                    out = F.add(out, term)
        return [int(c) for c in out]

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "depth": self.depth,
            "parity_mode": self.parity_mode,
            "dims": self.dims,
            "hilbert_function": self.hilbert_function(),
            "generators_by_degree": {str(k): v for k, v in self.generators_by_degree.items()},
            "constants": [{"left": [a, i], "right": [b, j], "product": value}
                          for (a, i, b, j), value in sorted(self.constants.items())],
            "graded_commutative": self.graded_commutative,
        }


class AnnihilatorRecord(BaseModel):
    module: str
    depth: int
    annihilators: dict[int, list[list[int]]]


class VanishingVerdict(BaseModel):
    source: str
    target: str
    depth: int
    dims: list[int]
    verdict: str
    red_flag: bool


_engines = weakref.WeakKeyDictionary()


def engine_for(algebra: AlgebraPresentation, store: Optional[ResolutionStore] = None) -> CohomologyEngine:
    store = store or default_store()
    engines = _engines.setdefault(algebra, {})
    if id(store) not in engines:
        engines[id(store)] = CohomologyEngine(algebra, store)
    return engines[id(store)]
