"""Rate of growth, Frobenius-Perron dimensions, complexity and variety dimension."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy
from pydantic import BaseModel

from .config import read_config
from .errors import FormatError, InvalidParams, InvariantViolation, SequenceTooShort
from .utils.jsonio import read_json

logger = logging.getLogger(__name__)

growth_config = read_config()['Growth']
MIN_LENGTH = int(growth_config.get('min_length', 8))
SLOPE_FLAG = float(growth_config.get('slope_flag', 0.25))
PERRON_TOLERANCE = float(growth_config.get('perron_tolerance', 1e-12))
HOLDOUT = int(growth_config.get('holdout', 4))

t = sympy.Symbol("t")


@dataclass
class GrowthSequence:
    values: list
    source: str = ""

    def __post_init__(self):
        self.values = [_exact(v) for v in self.values]
        for n, v in enumerate(self.values):
            if sympy.sympify(v).is_negative:
                raise InvalidParams("growth sequences are nonnegative", index=n, value=str(v))

    def __len__(self):
        return len(self.values)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values)


def _exact(v):
    if isinstance(v, (bool, np.bool_)):
        raise InvalidParams("boolean is not a sequence value")
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return v
    expr = sympy.nsimplify(v) if isinstance(v, str) else sympy.sympify(v)
    if expr.is_Integer:
        return int(expr)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    return expr


class GammaVerdict(BaseModel):
    gamma: Optional[int]
    method: str
    recurrence: Optional[str] = None
    pole_order: Optional[int] = None
    window: list[int] = []
    slope: Optional[float] = None
    flagged: bool = False
    source: str = ""
    length: int = 0


def berlekamp_massey(values: list) -> tuple:
    """Shortest linear recurrence over Q: returns (connection coefficients c_0 = 1, ..., c_L, L)."""
    C, B = [Fraction(1)], [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n, s in enumerate(values):
        d = Fraction(s)
        for i in range(1, L + 1):
            if i < len(C):
                d += C[i] * values[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        update = C + [Fraction(0)] * max(0, len(B) + m - len(C))
        for i, bi in enumerate(B):
            update[i + m] -= coef * bi
        if 2 * L <= n:
            B, L, b, m = C, n + 1 - L, d, 1
        else:
            m += 1
        C = update
    C = C + [Fraction(0)] * max(0, L + 1 - len(C))
    return C[:L + 1], L


def _satisfies(values: list, C: list, L: int, start: int) -> bool:
    for n in range(max(start, L), len(values)):
        if sum(C[i] * values[n - i] for i in range(L + 1)) != 0:
            return False
    return True


def _rational_verdict(seq: GrowthSequence) -> Optional[GammaVerdict]:
    values = [Fraction(v) for v in seq.values]
    N = len(values)
    holdout = min(HOLDOUT, max(1, N // 4))
    fit = values[:N - holdout]
    C, L = berlekamp_massey(fit)
    if 2 * L > len(fit) or not _satisfies(values, C, L, len(fit)):
        return None

    def rational(x: Fraction):
        return sympy.Rational(x.numerator, x.denominator)

    denominator = sympy.Poly([rational(c) for c in reversed(C)], t)
    # the recurrence holds from degree L on, so C(t) S(t) is a polynomial of degree < L
    head = [sum((C[i] * values[k - i] for i in range(k + 1)), Fraction(0)) for k in range(L)]
    numerator = sympy.Poly([rational(c) for c in reversed(head)] or [0], t)
    if numerator.is_zero:
        return GammaVerdict(gamma=0, method="recurrence-exact", recurrence="1", pole_order=0,
                            window=[0, N - 1], source=seq.source, length=N)
    common = sympy.gcd(numerator, denominator)
    denominator = sympy.quo(denominator, common)
    if any(abs(complex(r)) < 1 - 1e-9 for r in denominator.nroots()):
        return GammaVerdict(gamma=None, method="exponential", recurrence=str(denominator.as_expr()),
                            window=[0, N - 1], source=seq.source, length=N)
    order = 0
    reduced = denominator
    while reduced.degree() > 0 and reduced.eval(1) == 0:
        reduced = sympy.quo(reduced, sympy.Poly(t - 1, t))
        order += 1
    return GammaVerdict(gamma=order, method="recurrence-exact", recurrence=str(denominator.as_expr()),
                        pole_order=order, window=[0, N - 1], source=seq.source, length=N)


def _period_verdict(seq: GrowthSequence) -> Optional[GammaVerdict]:
    values = [sympy.sympify(v) for v in seq.values]
    N = len(values)

    def same(a, b):
        return sympy.simplify(a - b) == 0

    for period in range(1, N // 2 + 1):
        for start in range(0, N // 2 + 1):
            if N - start < 2 * period:
                break
            if all(same(values[n], values[n + period]) for n in range(start, N - period)):
                periodic = values[start:start + period]
                gamma = 0 if all(same(v, 0) for v in periodic) else 1
                return GammaVerdict(gamma=gamma, method="recurrence-exact", recurrence=f"1 - t**{period}",
                                    pole_order=gamma, window=[start, N - 1], source=seq.source, length=N)
    return None


def _slope_verdict(seq: GrowthSequence) -> GammaVerdict:
    N = len(seq)
    start = max(1, N // 2)
    points = [(n, float(sympy.N(v)) if not isinstance(v, (int, float, Fraction)) else float(v))
              for n, v in enumerate(seq.values) if n >= start]
    points = [(n, v) for n, v in points if v > 0]
    if not points:
        return GammaVerdict(gamma=0, method="slope-estimate", window=[start, N - 1], slope=None,
                            source=seq.source, length=N)
    if len(points) == 1:
        return GammaVerdict(gamma=1, method="slope-estimate", window=[start, N - 1], slope=0.0, flagged=True,
                            source=seq.source, length=N)
    xs = np.log([n for n, _ in points])
    ys = np.log([v for _, v in points])
    slope = float(np.polyfit(xs, ys, 1)[0])
    nearest = int(round(slope))
    return GammaVerdict(gamma=max(nearest + 1, 0), method="slope-estimate", window=[start, N - 1],
                        slope=slope, flagged=abs(slope - nearest) > SLOPE_FLAG,
                        source=seq.source, length=N)


def gamma_estimate(seq: GrowthSequence) -> GammaVerdict:
    """gamma: the least c >= 0 with a_n <= b n^(c-1) for large n."""
    if not isinstance(seq, GrowthSequence):
        seq = GrowthSequence(list(seq))
    if len(seq) < MIN_LENGTH:
        raise SequenceTooShort(f"need at least {MIN_LENGTH} terms", length=len(seq), source=seq.source)
    verdict = None
    if seq.is_rational:
        verdict = _rational_verdict(seq)
    elif not any(isinstance(v, float) for v in seq.values):
        verdict = _period_verdict(seq)
    if verdict is None:
        verdict = _slope_verdict(seq)
    logger.debug("gamma of %s: %s (%s)", seq.source or "sequence", verdict.gamma, verdict.method)
    return verdict


class PerronRoot(BaseModel):
    value: float
    lower: float
    upper: float
    exact: Optional[str] = None
    charpoly: str


def _sign_changes(sturm: list, x) -> int:
    signs = [s for s in (p.eval(x) for p in sturm) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def perron_root(N) -> PerronRoot:
    """Largest real eigenvalue of a nonnegative integer matrix, isolated by Sturm sequences."""
    rows = [[int(x) for x in row] for row in N]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise InvalidParams("perron_root needs a nonempty square matrix")
    if any(x < 0 for r in rows for x in r):
        raise InvalidParams("perron_root needs nonnegative entries")
    lam = sympy.Symbol("lam")
    charpoly = sympy.Matrix(rows).charpoly(lam)
    poly = sympy.Poly(charpoly.as_expr(), lam)
    sqf = sympy.Poly(sympy.sqf_part(poly.as_expr()), lam)
    sturm = [sympy.Poly(p, lam) for p in sympy.sturm(sqf)]
    lo = sympy.Rational(min(sum(r) for r in rows) - 1)
    hi = sympy.Rational(max(sum(r) for r in rows))

    def roots_in(a, b) -> int:
        return _sign_changes(sturm, a) - _sign_changes(sturm, b)

    if roots_in(lo, hi) < 1:
        raise InvariantViolation("no eigenvalue between the row-sum bounds", matrix=rows)
    tol = sympy.Rational(PERRON_TOLERANCE)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if sqf.eval(mid) == 0 and roots_in(mid, hi) == 0:
            lo = hi = mid
            break
        if roots_in(mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    value = float((lo + hi) / 2)
    if not (min(sum(r) for r in rows) - 1e-9 <= value <= max(sum(r) for r in rows) + 1e-9):
        raise InvariantViolation("Perron root outside the row-sum bounds", value=value)
    exact = None
    for factor, _ in sympy.factor_list(poly.as_expr())[1]:
        f = sympy.Poly(factor, lam)
        if f.degree() > 2:
            continue
        for root in sympy.roots(f, lam):
            if root.is_real and abs(float(root) - value) < 1e-9:
                exact = str(sympy.nsimplify(root))
    return PerronRoot(value=value, lower=float(lo), upper=float(hi), exact=exact, charpoly=str(charpoly.as_expr()))


def fpdim_matrices(A) -> list:
    """N_s with (N_s)_{ij} = [S_s (x) S_i : S_j] for the simple modules S."""
    from .algebra import composition_multiplicities, simples, tensor_module
    simple_modules = simples(A)
    return [[composition_multiplicities(tensor_module(S, X)) for X in simple_modules]
            for S in simple_modules]


def fpdims_of_simples(A) -> list:
    def compute():
        out = []
        for s, N in enumerate(fpdim_matrices(A)):
            root = perron_root(N)
            if root.value < 1 - 1e-9:
                raise InvariantViolation("FP dimension of a simple below 1", simple=s, value=root.value)
            out.append(root)
        return out

    return A.memo("fpdims", compute)


def _fp_value(root: PerronRoot):
    return sympy.sympify(root.exact) if root.exact is not None else root.value


def fpdim_module(X):
    """sum_i [X : S_i] FPdim(S_i), exact when every FPdim is a surd."""
    from .algebra import composition_multiplicities
    if X.dim == 0:
        return 0
    total = sum(m * _fp_value(r) for m, r in zip(composition_multiplicities(X), fpdims_of_simples(X.algebra)))
    return _exact(sympy.nsimplify(total)) if not isinstance(total, float) else total


def resolution_fpdims(res) -> list:
    """FPdim(P_n) = sum_i a_{n,i} FPdim(P(S_i))."""
    from .algebra import principal_decomposition
    projective = [fpdim_module(P.module) for P in principal_decomposition(res.module.algebra)]
    out = []
    for n in range(res.depth + 1):
        total = sum(a * f for a, f in zip(res.multiplicities(n), projective))
        out.append(_exact(total) if not isinstance(total, float) else total)
    return out


def _zero_verdict(source: str, D: int) -> GammaVerdict:
    return GammaVerdict(gamma=0, method="recurrence-exact", recurrence="1", pole_order=0,
                        window=[0, D], source=source, length=D + 1)


def complexity(X, D: int, store=None) -> GammaVerdict:
    if X.dim == 0:
        return _zero_verdict(f"FPdim(P_n({X.label}))", D)
    from .resolve import default_store
    res = (store or default_store()).get(X, D)
    seq = GrowthSequence(resolution_fpdims(res)[:D + 1], source=f"FPdim(P_n({X.label}))")
    return gamma_estimate(seq)


def variety_dim(X, D: int, store=None) -> GammaVerdict:
    return pair_variety_dim(X, X, D, store)


def pair_variety_dim(X, Y, D: int, store=None) -> GammaVerdict:
    if X.dim == 0 or Y.dim == 0:
        return _zero_verdict(f"dim Ext^n({X.label}, {Y.label})", D)
    from .cohomology import engine_for
    dims = engine_for(X.algebra, store).pair_ext_dims(X, Y, D)
    return gamma_estimate(GrowthSequence(dims, source=f"dim Ext^n({X.label}, {Y.label})"))


class PropertyCheck(BaseModel):
    name: str
    lhs: Optional[int]
    rhs: Optional[int]
    relation: str
    holds: bool


class VarietyPropertyReport(BaseModel):
    left: str
    right: str
    depth: int
    checks: list[PropertyCheck]
    holds: bool


def _check(name, lhs, rhs, relation) -> PropertyCheck:
    if lhs is None or rhs is None:
        ok = False
    elif relation == "=":
        ok = lhs == rhs
    else:
        ok = lhs <= rhs
    return PropertyCheck(name=name, lhs=lhs, rhs=rhs, relation=relation, holds=ok)


def variety_property_report(X, Y, D: int, store=None) -> VarietyPropertyReport:
    from .algebra import direct_sum, simples, tensor_module
    from .resolve import syzygy

    def vd(M):
        return variety_dim(M, D, store).gamma

    vx, vy = vd(X), vd(Y)
    pair = pair_variety_dim(X, Y, D, store).gamma
    simple_dims = [pair_variety_dim(X, S, D, store).gamma for S in simples(X.algebra)]
    checks = [
        _check("sum", vd(direct_sum(X, Y)), max(vx, vy) if None not in (vx, vy) else None, "="),
        _check("pair", pair, min(vx, vy) if None not in (vx, vy) else None, "<="),
        _check("simples", max(simple_dims) if None not in simple_dims else None, vx, "="),
        _check("tensor", vd(tensor_module(X, Y)), vx, "<="),
        _check("syzygy", vd(syzygy(X)), vx, "="),
    ]
    return VarietyPropertyReport(left=X.label, right=Y.label, depth=D, checks=checks,
                                 holds=all(c.holds for c in checks))


def hilbert_series_coefficients(numerator: list, denominator_degrees: list, length: int) -> list:
    """Coefficients of N(t) / prod(1 - t^d); numerator as [degree, coefficient] pairs."""
    coeffs = [0] * length
    for degree, c in numerator:
        if degree < length:
            coeffs[degree] += int(c)
    for d in denominator_degrees:
        if d < 1:
            raise InvalidParams("denominator degrees must be positive", degree=d)
        for n in range(d, length):
            coeffs[n] += coeffs[n - d]
    return coeffs


def _surd(entry):
    if isinstance(entry, (int, float)):
        return sympy.Integer(entry) if isinstance(entry, int) else sympy.Float(entry)
    if not (isinstance(entry, list) and len(entry) == 3):
        raise FormatError("surd entries are [a, b, n] meaning a + b*sqrt(n)", entry=entry)
    a, b, n = entry
    return sympy.Integer(a) + sympy.Integer(b) * sympy.sqrt(sympy.Integer(n))


@dataclass
class Fixture:
    name: str
    fpdim_simples: dict
    fpdim_projectives: dict
    resolution_patterns: dict
    hilbert_series: dict
    expected_complexity: dict

    def resolution_sequence(self, label: str, length: int) -> GrowthSequence:
        pattern = self.resolution_patterns[label]
        values = [self.fpdim_projectives[pattern[n % len(pattern)]] for n in range(length)]
        return GrowthSequence(values, source=f"{self.name}: FPdim(P_n({label}))")

    def hilbert_sequence(self, label: str, length: int) -> GrowthSequence:
        spec = self.hilbert_series[label]
        values = hilbert_series_coefficients(spec["numerator"], spec["denominator_degrees"], length)
        return GrowthSequence(values, source=f"{self.name}: dim Ext^n({label}, {label})")


def load_fixture(path: str) -> Fixture:
    data = read_json(path)
    try:
        return Fixture(
            name=str(data["name"]),
            fpdim_simples={k: _surd(v) for k, v in data["fpdim_simples"].items()},
            fpdim_projectives={k: _surd(v) for k, v in data["fpdim_projectives"].items()},
            resolution_patterns={k: list(v) for k, v in data.get("resolution_patterns", {}).items()},
            hilbert_series=dict(data.get("hilbert_series", {})),
            expected_complexity={k: int(v) for k, v in data.get("expected_complexity", {}).items()},
        )
    except (KeyError, TypeError) as e:
        raise FormatError(f"fixture {path} is malformed: {e}", path=str(path)) from e


def fixture_report(fixture: Fixture, length: int) -> dict:
    rows = []
    for label in fixture.resolution_patterns:
        verdict = gamma_estimate(fixture.resolution_sequence(label, length))
        rows.append({"object": label, "sequence": "FPdim(P_n)", "gamma": verdict.gamma,
                     "method": verdict.method, "expected": fixture.expected_complexity.get(label)})
    for label in fixture.hilbert_series:
        verdict = gamma_estimate(fixture.hilbert_sequence(label, length))
        rows.append({"object": label, "sequence": "dim Ext^n", "gamma": verdict.gamma,
                     "method": verdict.method, "expected": fixture.expected_complexity.get(label)})
    simple_fp = {k: str(v) for k, v in fixture.fpdim_simples.items()}
    return {"fixture": fixture.name, "length": length, "fpdim_simples": simple_fp, "rows": rows,
            "consistent": all(r["expected"] is None or r["gamma"] == r["expected"] for r in rows)}

