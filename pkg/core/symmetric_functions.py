"""
Symmetric functions of trinomial roots.

Conversions between elementary symmetric polynomials e_l and power sums
p_g, power sums restricted to a Schwarz curve (where only sigma_q and
sigma_n survive), the dual formulas for the elementary polynomials of the
complementary roots, the k = 2 and k = 3 eliminations, and the coset
polynomials whose roots are q-th powers of root-of-unity weighted sums.

Everything here is exact sympy algebra; nothing is truncated.
"""
from itertools import permutations
from math import comb
from typing import Any, Dict, List, Literal, Optional, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, model_validator
from sympy.polys.polyfuncs import symmetrize

from config.log_policy import debug
from core.algebra import OMEGA, ConstraintError, TranscriptionError, require_coprime

T = sp.Symbol("t")
SIGMA_N = sp.Symbol("sigma_n")


def x_symbols(k: int) -> tuple:
    return sp.symbols(f"x1:{k + 1}")


def e_symbols(n: int) -> tuple:
    return sp.symbols(f"e1:{n + 1}")


def p_symbols(n: int) -> tuple:
    return sp.symbols(f"p1:{n + 1}")


class SymmetricExpr(BaseModel):
    """One symmetric polynomial written in the e or p generators."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    basis: Literal["e", "p"]
    arity: int          # number of underlying variables
    degree: int
    expr: Any

    @model_validator(mode='after')
    def validate_generators(self):
        allowed = set(e_symbols(self.arity) if self.basis == "e" else p_symbols(self.degree))
        stray = sp.sympify(self.expr).free_symbols - allowed
        if stray:
            raise ValueError(f"unexpected generators {sorted(map(str, stray))}")
        return self


class CurveReducedExpr(BaseModel):
    """
    A power sum on the curve where every sigma_l except sigma_q, sigma_n vanishes,
    stored as {(m_q, m_n): coefficient}.
    """

    model_config = ConfigDict(extra='forbid', frozen=True)

    p: int
    q: int
    gamma: int
    coefficients: Dict[Tuple[int, int], int]

    @model_validator(mode='after')
    def validate_weights(self):
        n = self.p + self.q
        for (m_q, m_n) in self.coefficients:
            if m_q * self.q + m_n * n != self.gamma:
                raise ValueError(
                    f"monomial sigma_q^{m_q} sigma_n^{m_n} has weight "
                    f"{m_q * self.q + m_n * n}, expected {self.gamma}"
                )
        return self

    def generators(self) -> tuple:
        n = self.p + self.q
        return sp.Symbol(f"s{self.q}"), sp.Symbol(f"s{n}")

    def as_expr(self, sigma_q=None, sigma_n=None):
        default_q, default_n = self.generators()
        sigma_q = default_q if sigma_q is None else sigma_q
        sigma_n = default_n if sigma_n is None else sigma_n
        return sp.Add(*[
            coeff * sigma_q ** m_q * sigma_n ** m_n
            for (m_q, m_n), coeff in sorted(self.coefficients.items())
        ])


# ---------------------------------------------------------------------------
# Newton-Girard
# ---------------------------------------------------------------------------

def elementary_from_power_sums(power_sums: List[Any], degree: int) -> list:
    """
    sigma_0..sigma_degree from p_1..p_degree by
    sigma_l = (1/l) sum_{g=1}^{l} (-1)^(g-1) p_g sigma_{l-g}.
    """
    sigmas = [sp.Integer(1)]
    for ell in range(1, degree + 1):
        total = sum(
            ((-1) ** (g - 1) * power_sums[g - 1] * sigmas[ell - g] for g in range(1, ell + 1)),
            sp.Integer(0),
        )
        sigmas.append(sp.expand(total / ell))
    return sigmas


def power_sums_from_elementary(elementary: List[Any], gamma: int) -> list:
    """
    p_1..p_gamma from sigma_0..sigma_n (sigma_l = 0 beyond the list) via
    p_g = sum_{i=1}^{g-1} (-1)^(i-1) sigma_i p_{g-i} + (-1)^(g-1) g sigma_g.
    """
    def sigma(i):
        return elementary[i] if i < len(elementary) else 0

    sums = []
    for g in range(1, gamma + 1):
        total = (-1) ** (g - 1) * g * sigma(g)
        for i in range(1, g):
            if sigma(i) != 0:
                total += (-1) ** (i - 1) * sigma(i) * sums[g - i - 1]
        sums.append(sp.expand(total))
    return sums


def power_sum_determinant(gamma: int, elementary: List[Any]):
    """
    p_gamma as the determinant of the gamma x gamma matrix with rows
    (i sigma_i, sigma_{i-1}, ..., sigma_1, 1, 0, ...).
    """
    def sigma(i):
        if i < 0:
            return 0
        return elementary[i] if i < len(elementary) else 0

    rows = []
    for i in range(1, gamma + 1):
        row = []
        for j in range(1, gamma + 1):
            if j == 1:
                row.append(i * sigma(i))
            else:
                row.append(sigma(i - j + 1))
        rows.append(row)
    return sp.expand(sp.Matrix(rows).det(method="berkowitz"))


def newton_girard(direction: Literal["e_from_p", "p_from_e"], degree: int, n: int) -> SymmetricExpr:
    """
    sigma_degree in the power sums, or p_degree in sigma_1..sigma_n.

    For n variables sigma_l vanishes when l > n; the p-from-e direction
    applies that, the e-from-p direction does not (the p's are free).
    """
    if degree < 1 or n < 1:
        raise ValueError("degree and arity must be positive")
    if direction == "e_from_p":
        sigmas = elementary_from_power_sums(list(p_symbols(degree)), degree)
        return SymmetricExpr(basis="p", arity=n, degree=degree, expr=sigmas[degree])
    if direction == "p_from_e":
        elementary = [sp.Integer(1)] + list(e_symbols(n))
        sums = power_sums_from_elementary(elementary, degree)
        return SymmetricExpr(basis="e", arity=n, degree=degree, expr=sums[-1])
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Power sums on the curve
# ---------------------------------------------------------------------------

def _chi(ell: int) -> int:
    return 1 if ell % 2 == 0 else 0


def power_sum_on_curve(gamma: int, p: int, q: int) -> CurveReducedExpr:
    """
    p_gamma of the n trinomial roots when only sigma_q and sigma_n survive:
    sum over m_q q + m_n n = gamma of
    (-1)^(chi(q) m_q + chi(n) m_n) [q C(m_q+m_n-1, m_n) + n C(m_q+m_n-1, m_q)].
    """
    if gamma < 1:
        raise ConstraintError("power sums are indexed from 1")
    n = require_coprime(p, q)
    coefficients = {}
    for m_n in range(gamma // n + 1):
        rest = gamma - m_n * n
        if rest % q:
            continue
        m_q = rest // q
        top = m_q + m_n - 1
        value = q * comb(top, m_n) + n * comb(top, m_q)
        value *= (-1) ** (_chi(q) * m_q + _chi(n) * m_n)
        if value:
            coefficients[(m_q, m_n)] = value
    return CurveReducedExpr(p=p, q=q, gamma=gamma, coefficients=coefficients)


def power_sum_restricted(gamma: int, p: int, q: int):
    """Newton-Girard p_gamma with every sigma_l other than sigma_q, sigma_n set to zero."""
    n = require_coprime(p, q)
    sigma_q, sigma_n = sp.Symbol(f"s{q}"), sp.Symbol(f"s{n}")
    elementary = [sp.Integer(1)] + [0] * n
    elementary[q] = sigma_q
    elementary[n] = sigma_n
    return power_sums_from_elementary(elementary, gamma)[-1]


def thm810_P(a: int):
    """The polynomial P_a(s3, s5) = p_{-3a} on the (2,3) curve, a = -1, -2, ..."""
    if a >= 0:
        raise ConstraintError(f"P_a is defined for negative integers a, got {a}")
    return power_sum_on_curve(-3 * a, 2, 3).as_expr()


# ---------------------------------------------------------------------------
# Elementary polynomials of the complementary roots
# ---------------------------------------------------------------------------

def _divided_sum(xs: tuple, exponent: int, reversed_factors: bool):
    total = sp.Integer(0)
    for j, xj in enumerate(xs):
        denom = sp.Integer(1)
        for ell, xl in enumerate(xs):
            if ell != j:
                denom *= (xl - xj) if reversed_factors else (xj - xl)
        total += xj ** exponent / denom
    return total


def hat_sigma_branches(m: int, k: int, p: int, q: int) -> dict:
    """
    The two closed forms of the m-th elementary polynomial of the n - k roots
    not in (x_1..x_k), keyed 1 and 2; a branch outside its range is absent.
    The second form carries the symbol sigma_n.
    """
    n = require_coprime(p, q)
    if not 0 < k < n:
        raise ConstraintError(f"need 0 < k < n, got k={k}, n={n}")
    xs = x_symbols(k)
    branches = {}
    if 0 <= m <= min(q - 1, n - k):
        branches[1] = sp.cancel((-1) ** m * _divided_sum(xs, m + k - 1, False))
    if max(q - k + 1, 0) <= m <= n - k:
        shift = m - (n - k)
        branches[2] = sp.cancel(
            (-1) ** shift * SIGMA_N * _divided_sum(xs, shift - 1, True)
        )
    if not branches:
        raise ConstraintError(f"m={m} is outside 0..{n - k}")
    return branches


def hat_sigma(m: int, k: int, p: int, q: int):
    """
    The m-th complementary elementary polynomial as a rational function of
    x_1..x_k (and sigma_n where only the second form applies).

    Where both forms apply and sigma_n is known in closed form (k = 2, 3)
    they must agree on the curve; disagreement raises TranscriptionError.
    """
    branches = hat_sigma_branches(m, k, p, q)
    if len(branches) == 1:
        return next(iter(branches.values()))
    first, second = branches[1], branches[2]
    sigma_n = _known_sigma_n(k, p, q)
    if sigma_n is None:
        debug(f"no closed form for sigma_n at k={k}; overlap at m={m} left unchecked")
        return first
    difference = sp.cancel(first - second.subs(SIGMA_N, sigma_n))
    if k == 3:
        ok = vanishes_on_curve(difference, k3_defining_poly(p, q), x_symbols(3))
    else:
        ok = difference == 0
    if not ok:
        raise TranscriptionError(f"the two forms of hat sigma_{m} disagree for (p,q,k)=({p},{q},{k})")
    return first


def _known_sigma_n(k: int, p: int, q: int):
    if k == 2:
        return k2_elimination(p, q).sigma_n
    if k == 3 and max(p, q) > 1:
        return k3_sigmas(p, q)["sigma_n"]
    return None


def vanishes_on_curve(expr, curve, xs: tuple) -> bool:
    """True when the numerator of expr lies in the principal ideal of the curve."""
    num, _ = sp.fraction(sp.cancel(sp.together(expr)))
    if num == 0:
        return True
    _, remainder = sp.reduced(sp.expand(num), [sp.expand(curve)], *xs)
    return sp.expand(remainder) == 0


# ---------------------------------------------------------------------------
# k = 2 elimination
# ---------------------------------------------------------------------------

class K2Elimination(BaseModel):
    """sigma_n, sigma_q, zeta on the k = 2 curve, in (x1, x2) and along [t+1 : t-1]."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    p: int
    q: int
    sigma_n: Any
    sigma_q: Any
    zeta: Any
    s_of_t: Any
    one_minus_s_of_t: Any
    zeta_of_t: Any


def k2_elimination(p: int, q: int) -> K2Elimination:
    """
    With x1, x2 two of the roots:
      sigma_n = (-1)^n (x1 x2)^p (x1^q - x2^q)/(x1^p - x2^p)
      sigma_q = (-1)^(q-1) (x1^n - x2^n)/(x1^p - x2^p)
      zeta    = (-1)^n n^n/(p^p q^q) sigma_n^q / sigma_q^n
    and s = (-1)^(n-1) sigma_n/x1^n, 1 - s = (-1)^(q-1) sigma_q/x1^q.
    """
    n = require_coprime(p, q)
    x1, x2 = x_symbols(2)
    sigma_n = sp.cancel((-1) ** n * (x1 * x2) ** p * (x1 ** q - x2 ** q) / (x1 ** p - x2 ** p))
    sigma_q = sp.cancel((-1) ** (q - 1) * (x1 ** n - x2 ** n) / (x1 ** p - x2 ** p))
    constant = sp.Rational((-1) ** n * n ** n, p ** p * q ** q)
    zeta = sp.cancel(constant * sigma_n ** q / sigma_q ** n)
    along = {x1: T + 1, x2: T - 1}
    s_of_t = sp.cancel(((-1) ** (n - 1) * sigma_n / x1 ** n).subs(along))
    one_minus = sp.cancel(((-1) ** (q - 1) * sigma_q / x1 ** q).subs(along))
    return K2Elimination(
        p=p, q=q, sigma_n=sigma_n, sigma_q=sigma_q, zeta=zeta,
        s_of_t=s_of_t, one_minus_s_of_t=one_minus,
        zeta_of_t=sp.cancel(zeta.subs(along)),
    )


def k2_consistency(p: int, q: int) -> K2Elimination:
    """k2_elimination plus its internal checks: s + (1 - s) = 1 and zeta = phi1(s)."""
    elim = k2_elimination(p, q)
    n = p + q
    if sp.cancel(elim.s_of_t + elim.one_minus_s_of_t - 1) != 0:
        raise TranscriptionError(f"the two forms of s disagree for (p,q)=({p},{q})")
    phi1 = sp.Rational((-1) ** q * n ** n, p ** p * q ** q) * elim.s_of_t ** q / elim.one_minus_s_of_t ** n
    if sp.cancel(phi1 - elim.zeta_of_t) != 0:
        raise TranscriptionError(f"zeta(t) is not phi1(s(t)) for (p,q)=({p},{q})")
    return elim


# ---------------------------------------------------------------------------
# k = 3: plane curves
# ---------------------------------------------------------------------------

def _cyclic_sum(fn, xs: tuple):
    x1, x2, x3 = xs
    return fn(x1, x2, x3) + fn(x2, x3, x1) + fn(x3, x1, x2)


def k3_defining_poly(p: int, q: int):
    """
    [x1^p (x2^n - x3^n) + cycl.] / ((x1 - x2)(x2 - x3)(x3 - x1)); the division
    must be exact.
    """
    n = require_coprime(p, q)
    if max(p, q) == 1:
        raise ConstraintError("the k = 3 curve needs max(p, q) > 1")
    xs = x_symbols(3)
    x1, x2, x3 = xs
    numer = sp.expand(_cyclic_sum(lambda u, v, w: u ** p * (v ** n - w ** n), xs))
    vandermonde = sp.expand((x1 - x2) * (x2 - x3) * (x3 - x1))
    quotient, remainder = sp.div(sp.Poly(numer, *xs), sp.Poly(vandermonde, *xs))
    if not remainder.is_zero:
        raise TranscriptionError(f"inexact division for the k = 3 curve of ({p},{q})")
    return quotient.as_expr()


def k3_sigmas(p: int, q: int, form: Optional[Literal["p", "q"]] = None) -> dict:
    """
    sigma_n, sigma_q and zeta as rational functions of three roots.

    form "p" needs p > 1, form "q" needs q > 1; by default q is preferred.
    """
    n = require_coprime(p, q)
    form = form or ("q" if q > 1 else "p")
    if (form == "p" and p == 1) or (form == "q" and q == 1):
        raise ConstraintError(f"form {form!r} is not available for (p,q)=({p},{q})")
    xs = x_symbols(3)
    x1, x2, x3 = xs
    prod = (x1 * x2 * x3) ** p
    if form == "p":
        base = _cyclic_sum(lambda u, v, w: u * (v ** p * w ** (p + 1) - v ** (p + 1) * w ** p), xs)
        sigma_n = (-1) ** (n - 1) * prod * _cyclic_sum(
            lambda u, v, w: u * (v ** (q + 1) - w ** (q + 1)), xs) / base
        sigma_q = (-1) ** (q - 1) * _cyclic_sum(
            lambda u, v, w: u * (v ** p * w ** (n + 1) - v ** (n + 1) * w ** p), xs) / base
    else:
        sigma_n = (-1) ** (n - 1) * prod * _cyclic_sum(
            lambda u, v, w: u * (v ** q - w ** q), xs) / _cyclic_sum(
            lambda u, v, w: u ** p * (v ** (p + 1) - w ** (p + 1)), xs)
        sigma_q = (-1) ** (q - 1) * _cyclic_sum(
            lambda u, v, w: u ** (p + 1) * (v ** n - w ** n), xs) / _cyclic_sum(
            lambda u, v, w: u ** (p + 1) * (v ** p - w ** p), xs)
    sigma_n = sp.cancel(sigma_n)
    sigma_q = sp.cancel(sigma_q)
    constant = sp.Rational((-1) ** n * n ** n, p ** p * q ** q)
    return {
        "sigma_n": sigma_n,
        "sigma_q": sigma_q,
        "zeta": constant * sigma_n ** q / sigma_q ** n,
    }


# ---------------------------------------------------------------------------
# Coset polynomials
# ---------------------------------------------------------------------------

class CosetPoly(BaseModel):
    """
    prod over coset representatives of (Y - term^q), coefficients listed
    from the top power of Y down.

    For m > 0 the negative powers are cleared: Y = (x1...xq)^(m q) y.
    """

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    q: int
    m: int
    coefficients: tuple
    cleared_power: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def as_elementary(self) -> list:
        """Coefficients rewritten in e1..eq; a non-symmetric remainder raises TranscriptionError."""
        xs = x_symbols(self.q)
        es = e_symbols(self.q)
        out = []
        for coeff in self.coefficients:
            coeff = sp.expand(coeff)
            if coeff.free_symbols.isdisjoint(xs):
                out.append(coeff)
                continue
            sym, rem, defs = symmetrize(coeff, *xs, formal=True)
            if sp.expand(rem) != 0:
                raise TranscriptionError(f"coefficient {coeff} is not symmetric")
            out.append(sp.expand(sym.subs({s: es[i] for i, (s, _) in enumerate(defs)})))
        return out


def coset_poly(q: int, m: int) -> CosetPoly:
    """
    G_{q,-m}(y) = prod_chi { y - [sum_j eps^(-(j-1)m) x_chi(j)^(-m)]^q } with chi
    running over the permutations fixing 1 and eps = exp(2 pi i/q).
    """
    if not 2 <= q <= 5:
        raise ConstraintError(f"coset polynomials are built for 2 <= q <= 5, got {q}")
    if m == 0:
        raise ConstraintError("m must be nonzero")
    xs = x_symbols(q)
    Y = sp.Symbol("Y")
    gens = (OMEGA, Y) + tuple(xs)
    phi = sp.Poly(sp.cyclotomic_poly(q, OMEGA), *gens)
    product_all = sp.Mul(*xs)

    def power_of(index: int):
        if m < 0:
            return xs[index] ** (-m)
        # x_i^(-m) * (x1...xq)^m
        return sp.Mul(*[x ** m for i, x in enumerate(xs) if i != index])

    result = sp.Poly(1, *gens)
    for rest in permutations(range(1, q)):
        chi = (0,) + rest
        term = sp.Add(*[
            OMEGA ** ((-j * m) % q) * power_of(chi[j]) for j in range(q)
        ])
        factor = (sp.Poly(Y, *gens) - sp.Poly(term, *gens) ** q).rem(phi)
        result = (result * factor).rem(phi)
    if result.degree(OMEGA) > 0:
        raise TranscriptionError(f"coset polynomial for q={q}, m={m} keeps its root of unity")
    in_y = sp.Poly(result.as_expr(), Y)
    return CosetPoly(
        q=q, m=m,
        coefficients=tuple(in_y.all_coeffs()),
        cleared_power=m * q if m > 0 else 0,
    )


def complementary_coefficients(p: int, q: int, m: int = -1) -> list:
    """
    Coefficients of coset_poly(q, m) when x1..xq are q roots of the n-root
    curve and the other two roots have elementary polynomials sigmabar1,
    sigmabar2; needs p = 2 so that the complement is a k = 2 pair.
    """
    n = require_coprime(p, q)
    if p != 2:
        raise ConstraintError("the complementary substitution needs p = 2")
    sb1, sb2 = sp.symbols("sigmabar1 sigmabar2")
    x4, x5 = sp.symbols("x4 x5")
    sigma_q = sp.cancel((-1) ** (q - 1) * (x4 ** n - x5 ** n) / (x4 ** p - x5 ** p))
    num, den = sp.fraction(sigma_q)

    def in_bar(expr):
        sym, rem, defs = symmetrize(sp.expand(expr), x4, x5, formal=True)
        if sp.expand(rem) != 0:
            raise TranscriptionError("complementary sigma_q is not symmetric")
        return sym.subs({s: (sb1, sb2)[i] for i, (s, _) in enumerate(defs)})

    sigma_q_bar = in_bar(num) / in_bar(den)
    sigma_bar = [sp.Integer(1), sb1, sb2]
    hat = [sp.Integer(1)]
    for ell in range(1, q + 1):
        full = sigma_q_bar if ell == q else sp.Integer(0)
        total = full - sum(
            (hat[i] * sigma_bar[ell - i] for i in range(ell) if ell - i <= 2), sp.Integer(0)
        )
        hat.append(sp.cancel(total))
    es = e_symbols(q)
    subs = {es[i]: hat[i + 1] for i in range(q)}
    return [sp.factor(sp.cancel(c.subs(subs))) for c in coset_poly(q, m).as_elementary()]


def eq819_coefficients() -> list:
    """The (2,3) instance: [1, linear coefficient, constant] in sigmabar1, sigmabar2."""
    return complementary_coefficients(2, 3, -1)
