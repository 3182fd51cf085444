"""
Catalog of the Belyi maps behind the algebraic identities, with exact
ramification verification.

A map is a pair of coprime polynomials P, Q over Q in one variable. The
verification certifies that every finite critical point lies over 0, 1 or
oo (the squarefree part of the Wronskian P'Q - PQ' divides that of
P Q (P - Q)), reads the three fibres off the factorizations of P, P - Q and
Q, places the point at infinity by degree deficit, and applies
Riemann-Hurwitz.
"""
import time
from typing import Any, Callable, Dict, Optional

import sympy as sp
from pydantic import BaseModel, ConfigDict, model_validator

from config.log_policy import emit_metric
from core.algebra import (
    ConstraintError,
    TranscriptionError,
    UnknownIdentityError,
    poly_gcd,
    require_coprime,
    squarefree_part,
)
from core.symmetric_functions import T as T_SYMBOL
from core.symmetric_functions import k2_consistency
from integrations.schwarz_geometry import RamProfile, ram_profile

S = sp.Symbol("s")
T = T_SYMBOL
TT = sp.Symbol("tt")
U = sp.Symbol("u")
V = sp.Symbol("v")
X = sp.Symbol("x")


class RationalMap(BaseModel):
    """zeta = P(var)/Q(var) with gcd(P, Q) = 1."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    map_id: str
    var: Any
    P: Any                  # sympy Poly over QQ
    Q: Any
    stated_degree: Optional[int] = None

    @model_validator(mode='after')
    def validate_coprime(self):
        if self.P.is_zero or self.Q.is_zero:
            raise ValueError(f"{self.map_id}: numerator and denominator must be nonzero")
        if sp.gcd(self.P, self.Q).degree() > 0:
            raise ValueError(f"{self.map_id}: numerator and denominator share a factor")
        if self.stated_degree is not None and self.degree != self.stated_degree:
            raise ValueError(f"{self.map_id}: degree {self.degree}, expected {self.stated_degree}")
        return self

    @classmethod
    def from_expr(cls, map_id: str, expr, var, stated_degree: Optional[int] = None) -> "RationalMap":
        num, den = sp.fraction(sp.cancel(sp.together(expr)))
        return cls(
            map_id=map_id, var=var,
            P=sp.Poly(num, var, domain=sp.QQ), Q=sp.Poly(den, var, domain=sp.QQ),
            stated_degree=stated_degree,
        )

    @property
    def degree(self) -> int:
        return max(self.P.degree(), self.Q.degree())

    def as_expr(self):
        return self.P.as_expr() / self.Q.as_expr()


class BelyiReport(BaseModel):
    model_config = ConfigDict(extra='forbid')

    map_id: str
    degree: int
    critical_values_ok: bool
    profile: RamProfile
    genus: Optional[int] = None
    expected_match: Optional[bool] = None
    passed: bool


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def phi1(p: int, q: int) -> RationalMap:
    """s -> (-1)^q n^n/(p^p q^q) s^q/(1-s)^n, degree n."""
    n = require_coprime(p, q)
    expr = sp.Rational((-1) ** q * n ** n, p ** p * q ** q) * S ** q / (1 - S) ** n
    return RationalMap.from_expr(f"phi1({p},{q})", expr, S, stated_degree=n)


def phi2(p: int, q: int) -> RationalMap:
    """t -> s(t), degree n - 1."""
    n = require_coprime(p, q)
    return RationalMap.from_expr(f"phi2({p},{q})", k2_consistency(p, q).s_of_t, T, stated_degree=n - 1)


def pi2(p: int, q: int) -> RationalMap:
    """
    t -> n^n/(p^p q^q) (t^2-1)^(pq) [(t+1)^p-(t-1)^p]^p [(t+1)^q-(t-1)^q]^q
    / [(t+1)^n-(t-1)^n]^n, degree n(n-1).
    """
    n = require_coprime(p, q)
    expr = (
        sp.Rational(n ** n, p ** p * q ** q)
        * (T ** 2 - 1) ** (p * q)
        * ((T + 1) ** p - (T - 1) ** p) ** p
        * ((T + 1) ** q - (T - 1) ** q) ** q
        / ((T + 1) ** n - (T - 1) ** n) ** n
    )
    return RationalMap.from_expr(f"pi2({p},{q})", expr, T, stated_degree=n * (n - 1))


def zeta_p1(p: int) -> RationalMap:
    """s -> -n^n/p^p s/(1-s)^n with n = p + 1."""
    n = p + 1
    expr = -sp.Rational(n ** n, p ** p) * S / (1 - S) ** n
    return RationalMap.from_expr(f"zeta_p1({p})", expr, S, stated_degree=n)


def zeta_11() -> RationalMap:
    return RationalMap.from_expr("zeta_11", -4 * S / (1 - S) ** 2, S, stated_degree=2)


def zeta_p2_factors(p: int):
    """P = (1+t)^p + (1-t)^p and R = (1+t)^n + (1-t)^n, n = p + 2."""
    n = p + 2
    return (1 + T) ** p + (1 - T) ** p, (1 + T) ** n + (1 - T) ** n


def zeta_p2(p: int) -> RationalMap:
    """t -> 4 n^n/p^p t^2 (1-t^2)^(2p) P^p / R^n for odd p, degree n(n-1)."""
    if p < 1 or p % 2 == 0:
        raise ConstraintError(f"zeta_p2 needs odd p >= 1, got {p}")
    n = p + 2
    P, R = zeta_p2_factors(p)
    expr = 4 * sp.Rational(n ** n, p ** p) * T ** 2 * (1 - T ** 2) ** (2 * p) * P ** p / R ** n
    return RationalMap.from_expr(f"zeta_p2({p})", expr, T, stated_degree=n * (n - 1))


def zeta_12() -> RationalMap:
    """tt -> (1 + tt^3)^2/(4 tt^3), degree 6."""
    return RationalMap.from_expr("zeta_12", (1 + TT ** 3) ** 2 / (4 * TT ** 3), TT, stated_degree=6)


def zeta_13() -> RationalMap:
    """u -> -256 u^3 (1-u^3)^3 (1+8u^3)^3 / (1-20u^3-8u^6)^4, degree 24."""
    expr = (-256 * U ** 3 * (1 - U ** 3) ** 3 * (1 + 8 * U ** 3) ** 3
            / (1 - 20 * U ** 3 - 8 * U ** 6) ** 4)
    return RationalMap.from_expr("zeta_13", expr, U, stated_degree=24)


def zeta_23() -> RationalMap:
    """v -> 5^5/3^3 v (1-v)^6 (1+3v)^3 / (1+10v+5v^2)^5, degree 10."""
    expr = (sp.Rational(5 ** 5, 3 ** 3) * V * (1 - V) ** 6 * (1 + 3 * V) ** 3
            / (1 + 10 * V + 5 * V ** 2) ** 5)
    return RationalMap.from_expr("zeta_23", expr, V, stated_degree=10)


def zeta_14() -> RationalMap:
    """x -> x (1-5x)^4 (5+6x+5x^2)^4 / (4 (1-x)^5 (1+10x+5x^2)^5), degree 15."""
    expr = (X * (1 - 5 * X) ** 4 * (5 + 6 * X + 5 * X ** 2) ** 4
            / (4 * (1 - X) ** 5 * (1 + 10 * X + 5 * X ** 2) ** 5))
    return RationalMap.from_expr("zeta_14", expr, X, stated_degree=15)


# Builders keyed by id; parametrized entries take (p, q) or p.
CATALOG: Dict[str, Callable[..., RationalMap]] = {
    "phi1": phi1,
    "phi2": phi2,
    "pi2": pi2,
    "zeta_p1": zeta_p1,
    "zeta_11": zeta_11,
    "zeta_p2": zeta_p2,
    "zeta_12": zeta_12,
    "zeta_13": zeta_13,
    "zeta_23": zeta_23,
    "zeta_14": zeta_14,
}

CATALOG_ARITY = {"phi1": 2, "phi2": 2, "pi2": 2, "zeta_p1": 1, "zeta_p2": 1}


def belyi_catalog(map_id: str, p: Optional[int] = None, q: Optional[int] = None) -> RationalMap:
    """Look up a catalog map; parametrized families need p (and q)."""
    if map_id not in CATALOG:
        raise UnknownIdentityError(f"unknown Belyi map {map_id!r}")
    arity = CATALOG_ARITY.get(map_id, 0)
    if arity == 2:
        if p is None or q is None:
            raise ConstraintError(f"{map_id} needs p and q")
        return CATALOG[map_id](p, q)
    if arity == 1:
        if p is None:
            raise ConstraintError(f"{map_id} needs p")
        return CATALOG[map_id](p)
    return CATALOG[map_id]()


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _fibre(poly: sp.Poly, deficit: int) -> Dict[int, int]:
    """Points of a fibre: distinct roots of poly by multiplicity, plus oo."""
    fibre: Dict[int, int] = {}
    if poly.degree() > 0:
        _, factors = sp.sqf_list(poly)
        for factor, mult in factors:
            fibre[mult] = fibre.get(mult, 0) + factor.degree()
    if deficit > 0:
        fibre[deficit] = fibre.get(deficit, 0) + 1
    return fibre


def map_profile(rmap: RationalMap) -> RamProfile:
    """Fibres over 0, 1, oo with the point at infinity placed by degree deficit."""
    d = rmap.degree
    P, Q = rmap.P, rmap.Q
    diff = P - Q
    return RamProfile(
        degree=d,
        zero=_fibre(P, d - P.degree()),
        one=_fibre(diff, d - (diff.degree() if not diff.is_zero else 0)),
        infinity=_fibre(Q, d - Q.degree()),
    )


def critical_values_ok(rmap: RationalMap) -> bool:
    """Every root of P'Q - PQ' is a root of P Q (P - Q)."""
    P, Q = rmap.P, rmap.Q
    wronskian = P.diff(rmap.var) * Q - P * Q.diff(rmap.var)
    if wronskian.is_zero:
        return False
    critical = squarefree_part(wronskian)
    special = squarefree_part(P * Q * (P - Q))
    return poly_gcd(critical, special) == critical


def verify_belyi(rmap: RationalMap, expected: Optional[RamProfile] = None) -> BelyiReport:
    """
    Certify a catalog map; the source is P^1, so Riemann-Hurwitz must give genus 0.

    A map with critical values outside 0, 1, oo fails without a genus.
    """
    started = time.time()
    ok = critical_values_ok(rmap)
    profile = map_profile(rmap)
    g = profile.hurwitz_genus() if ok else None
    match = None
    if expected is not None:
        match = profile.compact() == expected.compact()
    passed = ok and g == 0 and match is not False
    emit_metric({
        "event": "belyi",
        "map_id": rmap.map_id,
        "degree": rmap.degree,
        "genus": g,
        "pass": passed,
        "millis": int((time.time() - started) * 1000),
    })
    return BelyiReport(
        map_id=rmap.map_id, degree=rmap.degree, critical_values_ok=ok,
        profile=profile, genus=g, expected_match=match, passed=passed,
    )


def expected_profile(map_id: str, p: Optional[int] = None, q: Optional[int] = None) -> Optional[RamProfile]:
    """pi2 must carry the k = 2 Schwarz-curve profile; other maps have none declared."""
    if map_id == "pi2":
        return ram_profile(p, q, 2)
    return None


# ---------------------------------------------------------------------------
# Compositions
# ---------------------------------------------------------------------------

def compose_maps(outer: RationalMap, inner: RationalMap, map_id: Optional[str] = None) -> RationalMap:
    """outer(inner(var)) as a reduced rational map in inner's variable."""
    expr = outer.as_expr().subs(outer.var, inner.as_expr())
    return RationalMap.from_expr(map_id or f"{outer.map_id}o{inner.map_id}", expr, inner.var)


def maps_equal(f: RationalMap, g: RationalMap) -> bool:
    if f.var != g.var:
        g = RationalMap.from_expr(g.map_id, g.as_expr().subs(g.var, f.var), f.var)
    return sp.cancel(f.as_expr() - g.as_expr()) == 0


def decomposition_checks(bound: int = 7) -> Dict[str, bool]:
    """
    pi2 = phi1 o phi2 for coprime p + q <= bound, and the two catalogued
    decompositions of zeta_12 and zeta_13. Raises TranscriptionError on a
    failure, returns {name: True} otherwise.
    """
    from integrations.schwarz_geometry import coprime_pairs

    results = {}
    for p, q in coprime_pairs(bound):
        name = f"pi2({p},{q})"
        if not maps_equal(pi2(p, q), compose_maps(phi1(p, q), phi2(p, q))):
            raise TranscriptionError(f"{name} is not phi1 o phi2")
        results[name] = True

    tt_inner = RationalMap.from_expr("m1", (1 - TT + TT ** 2) / (1 + TT) ** 2, TT)
    outer = RationalMap.from_expr("o1", sp.Rational(27, 4) * S ** 2 / (1 - S) ** 3, S)
    if not maps_equal(zeta_12(), compose_maps(outer, tt_inner)):
        raise TranscriptionError("zeta_12 decomposition through s^2/(1-s)^3 fails")
    tt_inner = RationalMap.from_expr("m2", (1 + TT) ** 2 / (1 - TT + TT ** 2), TT)
    outer = RationalMap.from_expr("o2", -sp.Rational(27, 4) * S / (1 - S) ** 3, S)
    if not maps_equal(zeta_12(), compose_maps(outer, tt_inner)):
        raise TranscriptionError("zeta_12 decomposition through s/(1-s)^3 fails")
    results["zeta_12"] = True

    outer = RationalMap.from_expr("o3", -sp.Rational(256, 27) * S ** 3 / (1 - S) ** 4, S)
    middle = RationalMap.from_expr("m3", (1 - T) * (1 + 3 * T ** 2) / (1 + T) ** 3, T)
    inner = RationalMap.from_expr("i3", (1 - 2 * U - 2 * U ** 2) / (1 + 4 * U - 2 * U ** 2), U)
    if not maps_equal(zeta_13(), compose_maps(compose_maps(outer, middle), inner)):
        raise TranscriptionError("zeta_13 three-step decomposition fails")
    results["zeta_13"] = True

    s_of_x = RationalMap.from_expr("s14", -(1 - 5 * X) * (5 + 6 * X + 5 * X ** 2) / (64 * X), X)
    if not maps_equal(zeta_14(), compose_maps(phi1(1, 4), s_of_x)):
        raise TranscriptionError("zeta_14 is not phi1(1,4) o s(x)")
    results["zeta_14"] = True

    t_squared = RationalMap.from_expr("sq", T ** 2, T)
    if not maps_equal(pi2(2, 3), compose_maps(zeta_23(), t_squared)):
        raise TranscriptionError("zeta_23(t^2) differs from pi2(2,3)")
    results["zeta_23"] = True
    return results
