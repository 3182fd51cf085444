"""
Combinatorics and geometry of the Schwarz curves C^(k)_{p,q}.

The curve of ordered k-tuples of distinct roots of x^n - g x^p - beta = 0
covers the zeta-line with degree (n-k+1)_k. This module produces the
branching data of its ordinary multiple points, the ramification profile
over zeta = 0, 1, oo, the genus (closed formula cross-checked against
Riemann-Hurwitz), the low-genus classification, the k = 3 plane models and
the j-invariants of the elliptic curves attached to the (2,3) and (1,4)
identities.
"""
import json
from math import comb, gcd
from typing import Any, Dict, List, Optional

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.log_policy import debug
from core.algebra import (
    ConstraintError,
    TranscriptionError,
    UnknownIdentityError,
    require_coprime,
    squarefree_part,
)
from core.symmetric_functions import (
    k3_defining_poly,
    k3_sigmas,
    vanishes_on_curve,
    x_symbols,
)


def rising(x: int, r: int) -> int:
    """Integer Pochhammer (x)_r for r >= 0."""
    result = 1
    for i in range(r):
        result *= x + i
    return result


class BranchDatum(BaseModel):
    """One row of the branching data: nu, the two counts and the multiplicity."""

    model_config = ConfigDict(extra='forbid', strict=True)

    nu: int
    N_P: int = Field(ge=0)
    N_T: int = Field(ge=0)
    M: int = Field(ge=1)


class RamProfile(BaseModel):
    """Multiplicity -> number of points, over zeta = 0, 1 and oo."""

    model_config = ConfigDict(extra='forbid')

    degree: int
    zero: Dict[int, int]
    one: Dict[int, int]
    infinity: Dict[int, int]

    @model_validator(mode='after')
    def validate_fibres(self):
        for name in ("zero", "one", "infinity"):
            fibre = getattr(self, name)
            total = sum(mult * count for mult, count in fibre.items())
            if total != self.degree:
                raise ValueError(f"fibre over {name} has total {total}, expected {self.degree}")
        return self

    def ramification(self) -> int:
        """Sum of (e - 1) over every point of the three fibres."""
        return sum(
            (mult - 1) * count
            for fibre in (self.zero, self.one, self.infinity)
            for mult, count in fibre.items()
        )

    def hurwitz_genus(self) -> int:
        """2g - 2 = -2 deg + sum (e - 1); raises TranscriptionError if g is not an integer."""
        twice = self.ramification() - 2 * self.degree + 2
        if twice % 2 or twice < 0:
            raise TranscriptionError(f"Riemann-Hurwitz gives 2g = {twice}")
        return twice // 2

    def compact(self) -> dict:
        return {
            name: {mult: count for mult, count in sorted(getattr(self, name).items()) if count}
            for name in ("zero", "one", "infinity")
        }


class GenusReport(BaseModel):
    model_config = ConfigDict(extra='forbid')

    p: int
    q: int
    k: int
    genus: int
    hurwitz_genus: int
    profile: RamProfile

    @model_validator(mode='after')
    def validate_agreement(self):
        if self.genus != self.hurwitz_genus:
            raise ValueError(f"formula genus {self.genus} != Hurwitz genus {self.hurwitz_genus}")
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        return self


class PlaneCurve(BaseModel):
    """A homogeneous polynomial in x1, x2, x3 over Q."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    label: str
    poly: Any

    @model_validator(mode='after')
    def validate_homogeneous(self):
        if not sp.Poly(self.poly, *x_symbols(3)).is_homogeneous:
            raise ValueError(f"{self.label} is not homogeneous")
        return self

    @property
    def total_degree(self) -> int:
        return sp.Poly(self.poly, *x_symbols(3)).total_degree()

    def degree_in(self, index: int) -> int:
        return sp.Poly(self.poly, *x_symbols(3)).degree(x_symbols(3)[index])

    def vanishes_at(self, point) -> bool:
        return sp.cancel(self.poly.subs(dict(zip(x_symbols(3), point)))) == 0


class EllipticModel(BaseModel):
    """w^2 = f(x) with f of degree 3 or 4 over Q, squarefree."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    label: str
    f: Any
    var: Any = sp.Symbol("x")

    @model_validator(mode='after')
    def validate_model(self):
        poly = sp.Poly(self.f, self.var)
        if poly.degree() not in (3, 4):
            raise ValueError(f"{self.label}: degree {poly.degree()} is not 3 or 4")
        if sp.degree(sp.gcd(poly, poly.diff(self.var)), self.var) > 0:
            raise ValueError(f"{self.label}: right-hand side is not squarefree")
        return self


# ---------------------------------------------------------------------------
# Branching data, profiles and genus
# ---------------------------------------------------------------------------

def nu_range(p: int, q: int, k: int) -> range:
    return range(max(0, k - p), min(q, k) + 1)


def branch_counts(p: int, q: int, k: int, nu: int) -> BranchDatum:
    """
    Counts for the ordinary multiple points in which nu of the k chosen roots
    come from the q roots tending to 0: nu = 0 gives ((p-k+1)_{k-1}, 1, p),
    nu = k gives ((q-k+1)_{k-1}, 1, q), otherwise
    (C(k,nu) (q-nu+1)_{nu-1}, (p-k+nu+1)_{k-nu-1}, pq).
    """
    require_coprime(p, q)
    if nu not in nu_range(p, q, k):
        raise ConstraintError(f"nu={nu} outside {list(nu_range(p, q, k))} for k={k}")
    if nu == 0:
        return BranchDatum(nu=nu, N_P=rising(p - k + 1, k - 1), N_T=1, M=p)
    if nu == k:
        return BranchDatum(nu=nu, N_P=rising(q - k + 1, k - 1), N_T=1, M=q)
    return BranchDatum(
        nu=nu,
        N_P=comb(k, nu) * rising(q - nu + 1, nu - 1),
        N_T=rising(p - k + nu + 1, k - nu - 1),
        M=p * q,
    )


def fibre_total(p: int, q: int, k: int) -> int:
    """sum over nu of N_P N_T M, which equals the covering degree (n-k+1)_k."""
    return sum(
        d.N_P * d.N_T * d.M for d in (branch_counts(p, q, k, nu) for nu in nu_range(p, q, k))
    )


def ram_profile(p: int, q: int, k: int) -> RamProfile:
    """
    Ramification over zeta = 0, 1, oo of the desingularized k-th curve.

    Over 0: (p-k+1)_{k-1} points of multiplicity p, (q-k+1)_{k-1} of
    multiplicity q, the rest of multiplicity pq. Over 1: (n-k-1)_k simple
    points, the rest double. Over oo: (n-k+1)_{k-1} points of multiplicity n.
    """
    n = require_coprime(p, q)
    if not 1 <= k <= n:
        raise ConstraintError(f"k={k} outside 1..{n}")
    degree = rising(n - k + 1, k)
    zero: Dict[int, int] = {}
    count_p = rising(p - k + 1, k - 1)
    count_q = rising(q - k + 1, k - 1)
    for mult, count in ((p, count_p), (q, count_q)):
        if count:
            zero[mult] = zero.get(mult, 0) + count
    rest = degree - p * count_p - q * count_q
    if rest % (p * q):
        raise TranscriptionError(f"fibre over 0 does not split for (p,q,k)=({p},{q},{k})")
    if rest:
        zero[p * q] = zero.get(p * q, 0) + rest // (p * q)
    simple = rising(n - k - 1, k)
    if (degree - simple) % 2:
        raise TranscriptionError(f"fibre over 1 does not split for (p,q,k)=({p},{q},{k})")
    one = {1: simple, 2: (degree - simple) // 2}
    infinity = {n: rising(n - k + 1, k - 1)}
    return RamProfile(
        degree=degree,
        zero={m: c for m, c in zero.items() if c},
        one={m: c for m, c in one.items() if c},
        infinity=infinity,
    )


def genus_formula(p: int, q: int, k: int) -> sp.Rational:
    """The closed genus formula, evaluated exactly."""
    n = p + q
    head = sp.Rational((k - 1) * (2 * n - k - 2), 4 * (n - 1)) - sp.Rational(n, 2 * p * q)
    return (
        1
        + head * rising(n - k + 1, k - 1)
        - sp.Rational(q - 1, 2 * q) * rising(p - k + 1, k - 1)
        - sp.Rational(p - 1, 2 * p) * rising(q - k + 1, k - 1)
    )


def genus(p: int, q: int, k: int) -> GenusReport:
    """Genus of C^(k)_{p,q}; the formula and Riemann-Hurwitz must agree."""
    require_coprime(p, q)
    value = genus_formula(p, q, k)
    profile = ram_profile(p, q, k)
    hurwitz = profile.hurwitz_genus()
    if value.q != 1 or value != hurwitz:
        raise TranscriptionError(
            f"genus formula {value} and Hurwitz genus {hurwitz} differ at ({p},{q},{k})"
        )
    return GenusReport(p=p, q=q, k=k, genus=int(value), hurwitz_genus=hurwitz, profile=profile)


def coprime_pairs(bound: int):
    for total in range(2, bound + 1):
        for p in range(1, total):
            q = total - p
            if gcd(p, q) == 1:
                yield p, q


def genus_table(bound: int) -> List[GenusReport]:
    """Every (p, q, k) with coprime p + q <= bound and 1 <= k <= n."""
    rows = []
    for p, q in coprime_pairs(bound):
        for k in range(1, p + q + 1):
            rows.append(genus(p, q, k))
    debug(f"genus table up to {bound}: {len(rows)} rows")
    return rows


def classify_low_genus(bound: int) -> dict:
    """Triples with k >= 3 whose curve has genus 0 or 1."""
    if bound < 2:
        raise ConstraintError("bound must be at least 2")
    found = {0: [], 1: []}
    for report in genus_table(bound):
        if report.k >= 3 and report.genus in found:
            found[report.genus].append((report.p, report.q, report.k))
    return found


# ---------------------------------------------------------------------------
# Table emitters
# ---------------------------------------------------------------------------

TABLE_NAMES = ("table-2", "genus", "classification")


def table_rows(name: str, p: Optional[int] = None, q: Optional[int] = None,
               k: Optional[int] = None, bound: int = 8) -> List[dict]:
    """Rows of one of the emitted tables as plain dicts."""
    if name == "table-2":
        if p is None or q is None or k is None:
            raise ConstraintError("table-2 needs p, q and k")
        return [branch_counts(p, q, k, nu).model_dump() for nu in nu_range(p, q, k)]
    if name == "genus":
        return [
            {"p": r.p, "q": r.q, "k": r.k, "genus": r.genus, "degree": r.profile.degree}
            for r in genus_table(bound)
        ]
    if name == "classification":
        found = classify_low_genus(bound)
        return [
            {"genus": g, "p": tp, "q": tq, "k": tk}
            for g in (0, 1)
            for tp, tq, tk in found[g]
        ]
    raise UnknownIdentityError(f"unknown table {name!r}; choose from {', '.join(TABLE_NAMES)}")


def render_rows(rows: List[dict], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if not rows:
        return "(empty)"
    headers = list(rows[0])
    widths = [max(len(h), *(len(str(r[h])) for r in rows)) for h in headers]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(row[h]).rjust(w) for h, w in zip(headers, widths)))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# The polynomial T_{p,q}
# ---------------------------------------------------------------------------

def T_poly(p: int, q: int) -> sp.Poly:
    """
    T_{p,q}(x) = sum_j t_j x^j with t_j = (j+1) q for j <= p-1 and
    (p+q-1-j) p for j >= p-1; p x^(p+q) - (p+q) x^p + q = (x-1)^2 T.
    """
    n = require_coprime(p, q)
    x = sp.Symbol("x")
    coeffs = []
    for j in range(n - 1):
        coeffs.append((j + 1) * q if j <= p - 1 else (n - 1 - j) * p)
    T = sp.Poly(list(reversed(coeffs)), x, domain=sp.QQ)
    target = sp.Poly(p * x ** n - n * x ** p + q, x, domain=sp.QQ)
    if T * sp.Poly((x - 1) ** 2, x, domain=sp.QQ) != target:
        raise TranscriptionError(f"(x-1)^2 T does not reproduce the trinomial for ({p},{q})")
    if squarefree_part(T) != T.monic():
        raise TranscriptionError(f"T_{p},{q} has a repeated root")
    return T


# ---------------------------------------------------------------------------
# k = 3 plane models
# ---------------------------------------------------------------------------

def defining_poly_k3(p: int, q: int) -> PlaneCurve:
    """The k = 3 curve: total degree n + p - 3, degree n - 2 in each variable."""
    n = require_coprime(p, q)
    curve = PlaneCurve(label=f"C3({p},{q})", poly=k3_defining_poly(p, q))
    if curve.total_degree != n + p - 3:
        raise TranscriptionError(f"{curve.label} has total degree {curve.total_degree}")
    for index in range(3):
        if curve.degree_in(index) != n - 2:
            raise TranscriptionError(f"{curve.label} has degree {curve.degree_in(index)} in x{index + 1}")
    return curve


def k3_sigma(p: int, q: int) -> dict:
    """
    sigma_n, sigma_q, zeta on the k = 3 curve. When p > 1 and q > 1 both
    closed forms exist and must agree modulo the defining polynomial.
    """
    curve = defining_poly_k3(p, q)
    xs = x_symbols(3)
    if p > 1 and q > 1:
        by_p = k3_sigmas(p, q, form="p")
        by_q = k3_sigmas(p, q, form="q")
        for key in ("sigma_n", "sigma_q"):
            if not vanishes_on_curve(by_p[key] - by_q[key], curve.poly, xs):
                raise TranscriptionError(f"the two forms of {key} differ on {curve.label}")
        return by_q
    return k3_sigmas(p, q)


# ---------------------------------------------------------------------------
# Parametrizations of the low-genus curves
# ---------------------------------------------------------------------------

W = sp.Symbol("w")                 # primitive cube root of unity, w^2 + w + 1 = 0
TT = sp.Symbol("tt")
U = sp.Symbol("u")


def _reduce_cube_root(expr):
    """Reduce a polynomial in w modulo w^2 + w + 1 after clearing denominators."""
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    num = sp.rem(sp.expand(num), W ** 2 + W + 1, W)
    den = sp.rem(sp.expand(den), W ** 2 + W + 1, W)
    return sp.cancel(num / den) if den != 0 else sp.nan


def line_parametrization():
    """The (1,2) line x1 + x2 + x3 = 0 as [1 + tt : wbar + w tt : w + wbar tt]."""
    wbar = -1 - W
    return (1 + TT, wbar + W * TT, W + wbar * TT)


def conic_parametrization():
    """The (2,1) conic x1 x2 + x2 x3 + x3 x1 = 0 by reciprocals of the line points."""
    wbar = -1 - W
    return (1 / (1 + TT), 1 / (W + wbar * TT), 1 / (wbar + W * TT))


def param3():
    """[(1-u)(1+2u) : wbar (1-w u)(1+2w u) : w (1-wbar u)(1+2wbar u)] on the (1,3) conic."""
    wbar = -1 - W
    return (
        (1 - U) * (1 + 2 * U),
        wbar * (1 - W * U) * (1 + 2 * W * U),
        W * (1 - wbar * U) * (1 + 2 * wbar * U),
    )


def param4():
    """param3 extended by the fourth root x4 = -3u, solving sigma_1 = 0."""
    return param3() + (-3 * U,)


def membership_checks() -> dict:
    """
    Substitute each parametrization into its curve and into sigma_1; every
    residual must vanish identically. Returns {check name: True}.
    """
    x1, x2, x3 = x_symbols(3)
    line = x1 + x2 + x3
    conic = x1 * x2 + x2 * x3 + x3 * x1
    checks = {}

    def zero(name, expr):
        residual = _reduce_cube_root(expr)
        if residual != 0:
            raise TranscriptionError(f"{name}: residual {residual}")
        checks[name] = True

    point = dict(zip((x1, x2, x3), line_parametrization()))
    zero("line", line.subs(point))
    point = dict(zip((x1, x2, x3), conic_parametrization()))
    zero("conic", conic.subs(point))
    nameless = defining_poly_k3(1, 3).poly
    point = dict(zip((x1, x2, x3), param3()))
    zero("param3-on-conic", nameless.subs(point))
    zero("param4-sigma1", sum(param4()))
    # sigma_n, sigma_q of the (1,3) curve pulled back along param3 give zeta_13(u)
    sigmas = k3_sigmas(1, 3)
    zeta_u = _reduce_cube_root(sigmas["zeta"].subs(point))
    target = -256 * U ** 3 * (1 - U ** 3) ** 3 * (1 + 8 * U ** 3) ** 3 / (1 - 20 * U ** 3 - 8 * U ** 6) ** 4
    zero("param3-zeta13", zeta_u - target)
    return checks


# ---------------------------------------------------------------------------
# j-invariants
# ---------------------------------------------------------------------------

def quartic_invariants(f, var) -> tuple:
    """
    I = 12ae - 3bd + c^2 and J = 72ace + 9bcd - 27ad^2 - 27eb^2 - 2c^3 of
    a x^4 + b x^3 + c x^2 + d x + e (a = 0 for a cubic).
    """
    coeffs = sp.Poly(f, var).all_coeffs()
    coeffs = [sp.Integer(0)] * (5 - len(coeffs)) + coeffs
    a, b, c, d, e = [sp.nsimplify(x) for x in coeffs]
    I = 12 * a * e - 3 * b * d + c ** 2
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d ** 2 - 27 * e * b ** 2 - 2 * c ** 3
    return I, J


def elliptic_j(model: EllipticModel):
    """j = 6912 I^3 / (4 I^3 - J^2) of the binary quartic (or cubic) on the right."""
    I, J = quartic_invariants(model.f, model.var)
    disc = 4 * I ** 3 - J ** 2
    if disc == 0:
        raise ConstraintError(f"{model.label} is singular")
    return sp.Rational(6912) * I ** 3 / disc


def quoted_models() -> List[EllipticModel]:
    """The elliptic curves whose j-invariants are quoted next to the (2,3) and (1,4) identities."""
    x, v = sp.Symbol("x"), sp.Symbol("v")
    return [
        EllipticModel(
            label="thm813-cubic",
            f=1 - sp.Rational(5, 4) * x - sp.Rational(5, 2) * x ** 2 - sp.Rational(5, 4) * x ** 3,
            var=x,
        ),
        EllipticModel(
            label="thm812-quartic",
            f=sp.expand((1 + 3 * v) * (1 + sp.Rational(115, 27) * v + sp.Rational(25, 27) * v ** 2
                                       + sp.Rational(25, 27) * v ** 3)),
            var=v,
        ),
    ]
