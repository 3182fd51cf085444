"""
The (A,B)-Vandermonde convolution transform and the kernels built from it.

For a sequence f(k) the transform is
    f^(n) = sum_k (-1)^k C(n,k) C(A+Bk, n) f(k),
and a power series identity sum_k f(k) C(A+Bk, k) z^k = y^A F(y), with
y - 1 - z y^B = 0, holds with F(y) = sum_n f^(n) ((1-y)/y)^n.

Kernels F_l (rational in y) and G_0, G_1 (series in (y-1)/y) are the
building blocks of every parametric identity the verifier checks.
"""
from functools import lru_cache
from math import comb, factorial
from typing import Any, Callable, Dict, Optional

from pydantic import BaseModel, ConfigDict
from sympy.polys.polyerrors import ExactQuotientFailed

from core.algebra import (
    PARAM_FIELD,
    Y_INDEX,
    ConstraintError,
    param,
    limit_at_infinity,
    specialize,
    to_param,
)
from core.hypergeom import HypSpec, binom_ext, hyp_series, pochhammer
from core.series import TruncSeries, first_mismatch, solve_trinomial_std

Y = param("y")


class TransformSpec(BaseModel):
    """The transform data for one identity: index l and parameters A, B, C."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    ell: int
    A: Any
    B: Any
    C: Any = None

    def f(self, k: int):
        return f_ell(self.ell, self.A, self.B, k)

    def g(self, k: int):
        return g_ell(self.ell, self.A, self.B, self.C, k)


class KernelRat(BaseModel):
    """Rational kernel F_l(A,B;y), an element of the parameter field."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    ell: int
    expr: Any

    def numerator_coeffs(self) -> list:
        return _coeffs_in_y(self.expr.numer)

    def denominator_coeffs(self) -> list:
        return _coeffs_in_y(self.expr.denom)

    def at_one(self):
        return specialize(self.expr, {"y": 1})

    def at(self, series: TruncSeries) -> TruncSeries:
        return kernel_at_series(self, series)


# ---------------------------------------------------------------------------
# Sequences
# ---------------------------------------------------------------------------

def fin_diff_pow(h: Callable[[Any], Any], n: int, A, B):
    """n-th forward difference of h with step B, evaluated at A."""
    A, B = to_param(A), to_param(B)
    total = PARAM_FIELD.zero
    for k in range(n + 1):
        total += (-1) ** (n - k) * comb(n, k) * h(A + B * k)
    return total


def f_ell(ell: int, A, B, k: int):
    """f_l(A,B;k) = (A+Bk+1)_{l-1} / (A+1)_{l-1}."""
    A, B = to_param(A), to_param(B)
    return pochhammer(A + B * k + 1, ell - 1) / pochhammer(A + 1, ell - 1)


def hatf_ell(ell: int, A, B, n: int):
    """Transformed sequence of f_l via its finite difference representation."""
    A, B = to_param(A), to_param(B)
    scale = (-1) ** n / (factorial(n) * pochhammer(A + 1, ell - 1))
    return scale * fin_diff_pow(lambda X: pochhammer(X - n + 1, n + ell - 1), n, A, B)


def vandermonde_transform(f: Callable[[int], Any], A, B, n: int):
    """f^(n) = sum_k (-1)^k C(n,k) C(A+Bk, n) f(k)."""
    A, B = to_param(A), to_param(B)
    total = PARAM_FIELD.zero
    for k in range(n + 1):
        total += (-1) ** k * comb(n, k) * binom_ext(A + B * k, n) * to_param(f(k))
    return total


def g_ell(ell: int, A, B, C, k: int):
    """g_l(A,B,C;k) = (A+C+l)/(A+C+Bk+l) f_{l+1}(A,B;k)."""
    A, B, C = to_param(A), to_param(B), to_param(C)
    den = A + C + B * k + ell
    if not den:
        raise ConstraintError(f"A+C+Bk+l vanishes at k={k}")
    return (A + C + ell) / den * f_ell(ell + 1, A, B, k)


def hatg_rhs(A, B, C, n: int):
    """Right side of the two-term relation defining g^_1."""
    A, B, C = to_param(A), to_param(B), to_param(C)
    x = (A + 1) / (B - 1)
    return (-1) ** n * pochhammer(C, n) * pochhammer(x + 1, n) / (
        pochhammer((A + C + 1) / B + 1, n) * pochhammer(x, n)
    )


def hatg_ell(ell: int, A, B, C, n: int):
    """
    Transformed interpolating sequences: g^_0 in closed form, g^_1 from
    g^_1(n) = rhs(n) - B g^_1(n-1) with g^_1(0) = 1.
    """
    A, B, C = to_param(A), to_param(B), to_param(C)
    if ell == 0:
        return (-1) ** n * pochhammer(C, n) / pochhammer((A + C) / B + 1, n)
    if ell != 1:
        raise ValueError("interpolating sequences exist for l = 0, 1 only")
    value = PARAM_FIELD.one
    for i in range(1, n + 1):
        value = hatg_rhs(A, B, C, i) - B * value
    return value


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

def _coeffs_in_y(poly) -> list:
    buckets = {}
    for monom, coeff in poly.terms():
        key = monom[:Y_INDEX] + (0,) + monom[Y_INDEX + 1:]
        buckets.setdefault(monom[Y_INDEX], {})[key] = coeff
    top = max(buckets) if buckets else 0
    ring = poly.ring
    return [PARAM_FIELD(ring.from_dict(buckets.get(d, {}))) for d in range(top + 1)]


def recurrence_step(F, ell: int, A, B):
    """
    F_{l+1}(A,B) from F = F_l(A',B), A' = A - B + 1:
    (A-B+2)_{l-1}/(A+1)_l * y (A' F + y F') / ((1-B) y + B).
    """
    A, B = to_param(A), to_param(B)
    A_prime = A - B + 1
    scale = pochhammer(A - B + 2, ell - 1) / pochhammer(A + 1, ell)
    return scale * Y * (A_prime * F + Y * F.diff(Y)) / ((1 - B) * Y + B)


@lru_cache(maxsize=256)
def _kernel_expr(ell: int, A, B):
    if ell <= 0:
        v = (1 - Y) / Y
        total = PARAM_FIELD.zero
        for n in range(-ell + 1):
            total += hatf_ell(ell, A, B, n) * v ** n
        return total
    prev = _kernel_expr(ell - 1, A - B + 1, B)
    return recurrence_step(prev, ell - 1, A, B)


def F_ell_rational(ell: int, A, B) -> KernelRat:
    """Kernel F_l(A,B;y): a finite sum for l <= 0, the upward recurrence for l >= 1."""
    return KernelRat(ell=ell, expr=_kernel_expr(ell, to_param(A), to_param(B)))


def pole_shape(ell: int, A, B):
    """The product whose divisibility by the F_l denominator is asserted."""
    A, B = to_param(A), to_param(B)
    if ell == 0:
        return PARAM_FIELD.one
    if ell < 0:
        m = -ell
        total = Y ** m
        for i in range(1, m + 1):
            total *= pochhammer(A + i * B - m, m - i + 1)
        return total
    return pochhammer(A + 1, ell - 1) * ((1 - B) * Y + B) ** (2 * ell - 1)


def denominator_divides(ell: int, A=None, B=None) -> bool:
    A = param("A") if A is None else A
    B = param("B") if B is None else B
    kernel = F_ell_rational(ell, A, B)
    shape = to_param(pole_shape(ell, A, B))
    try:
        shape.numer.exquo(kernel.expr.denom * shape.denom)
    except ExactQuotientFailed:
        return False
    return True


def kernel_at_series(kernel: KernelRat, series: TruncSeries) -> TruncSeries:
    """F(series) for a series with constant term where the kernel is regular."""
    num = _horner(kernel.numerator_coeffs(), series)
    den = _horner(kernel.denominator_coeffs(), series)
    return num / den


def _horner(coeffs: list, series: TruncSeries) -> TruncSeries:
    result = TruncSeries.constant(coeffs[-1], series.order, series.var)
    for coeff in reversed(coeffs[:-1]):
        result = result * series + coeff
    return result


def G_series(ell: int, A, B, C, order: int, var: str = "w") -> TruncSeries:
    """G_0, G_1 as series in w = (y-1)/y."""
    A, B, C = to_param(A), to_param(B), to_param(C)
    if ell == 0:
        spec = HypSpec(upper=[C, 1], lower=[(A + C) / B + 1])
        return hyp_series(spec, order, var)
    if ell == 1:
        x = (A + 1) / (B - 1)
        spec = HypSpec(upper=[C, x + 1, 1], lower=[(A + C + 1) / B + 1, x])
        geometric = TruncSeries.from_poly([1, -B], order, var).inverse()
        return geometric * hyp_series(spec, order, var)
    raise ValueError("interpolating kernels exist for l = 0, 1 only")


def G_at_series(ell: int, A, B, C, series: TruncSeries) -> TruncSeries:
    """G_l(A,B,C; y) for y given as a series with constant term 1."""
    w = (series - 1) / series
    outer = G_series(ell, A, B, C, series.order, series.var)
    return outer.compose(w)


def transform_structure(ell: int, A=None, B=None, span: int = 6) -> Dict[str, bool]:
    """
    Structural facts about f^_l and F_l, each as a named flag:

      terminates        l <= 0: f^_l(n) = 0 for n = -l+1 .. -l+span
      polynomial_part   l >= 1: f^_l(n) (A+1)_{l-1} / ((n+1)_{l-1} (-B)^n) has
                        vanishing l-th difference in n
      two_term          l = 2: f^_2(n) + B f^_2(n-1) = [A+1+(B-1)n](-B)^n/(A+1)
      downward          l < 0: the recurrence applied to F_l gives F_{l+1}
      denominator       the F_l denominator divides its pole shape
      at_one            F_l(1) = 1
    """
    A = param("A") if A is None else to_param(A)
    B = param("B") if B is None else to_param(B)
    flags = {}
    if ell <= 0:
        m = -ell
        flags["terminates"] = all(not hatf_ell(ell, A, B, n) for n in range(m + 1, m + span + 1))
    else:
        def reduced(n):
            return hatf_ell(ell, A, B, n) * pochhammer(A + 1, ell - 1) / (
                pochhammer(PARAM_FIELD(n + 1), ell - 1) * (-B) ** n)

        flags["polynomial_part"] = all(
            not sum((-1) ** (ell - k) * comb(ell, k) * reduced(s + k) for k in range(ell + 1))
            for s in range(3)
        )
    if ell == 2:
        flags["two_term"] = all(
            not (hatf_ell(2, A, B, n) + B * hatf_ell(2, A, B, n - 1)
                 - (A + 1 + (B - 1) * n) * (-B) ** n / (A + 1))
            for n in range(1, span + 5)
        )
    if ell < 0:
        lower = _kernel_expr(ell, A - B + 1, B)
        flags["downward"] = not (recurrence_step(lower, ell, A, B) - _kernel_expr(ell + 1, A, B))
    flags["denominator"] = denominator_divides(ell, A, B)
    flags["at_one"] = F_ell_rational(ell, A, B).at_one() == 1
    return flags


def interpolation_limits(ell: int, order: int, A=None, B=None, var: str = "w") -> Dict[str, bool]:
    """
    The two ends of the C-interpolation, compared as series in w = (y-1)/y:
    G_l at C = 0 is F_l, and the coefficientwise limit of G_l as C -> oo is
    F_{l+1}.
    """
    A = param("A") if A is None else to_param(A)
    B = param("B") if B is None else to_param(B)
    y = TruncSeries.from_poly([1, -1], order, var).inverse()

    def kernel(k):
        return F_ell_rational(k, A, B).at(y)

    symbolic = G_series(ell, A, B, param("C"), order, var)
    limit = TruncSeries([limit_at_infinity(coeff, "C") for coeff in symbolic.coeffs], var)
    return {
        "at_zero": first_mismatch(G_series(ell, A, B, 0, order, var), kernel(ell)) is None,
        "at_infinity": first_mismatch(limit, kernel(ell + 1)) is None,
    }


# ---------------------------------------------------------------------------
# Identity sides
# ---------------------------------------------------------------------------

def section3_sides(ell: int, order: int, A=None, B=None, C=None, interp: bool = False):
    """
    Left side y^A K(y(z)) and right side sum coeff(k) C(A+Bk, k) z^k.

    K is F_l, or G_l when interp is set.
    """
    A = param("A") if A is None else to_param(A)
    B = param("B") if B is None else to_param(B)
    roots = solve_trinomial_std(B, order, "z")
    prefix = roots.pow_param(A)
    if interp:
        C = param("C") if C is None else to_param(C)
        lhs = prefix * G_at_series(ell, A, B, C, roots)
        weight = lambda k: g_ell(ell, A, B, C, k)
    else:
        lhs = prefix * F_ell_rational(ell, A, B).at(roots)
        weight = lambda k: f_ell(ell, A, B, k)
    rhs = TruncSeries([weight(k) * binom_ext(A + B * k, k) for k in range(order + 1)], "z")
    return lhs, rhs


def verify_section3(ell: int, order: int, interp: bool = False, values: Optional[dict] = None):
    """Compare both sides of the transform identity and return a VerifyReport."""
    from core.validators import build_report

    values = values or {}
    lhs, rhs = section3_sides(
        ell, order, values.get("A"), values.get("B"), values.get("C"), interp=interp
    )
    tag = f"m{-ell}" if ell < 0 else str(ell)
    ident = f"sec3-interp-{tag}" if interp else f"sec3-{tag}"
    params = {name: str(value) for name, value in values.items()}
    ring = "Q(A,B,C)" if interp else "Q(A,B)"
    return build_report(ident, "parametric", order, lhs, rhs, ring=ring, params=params)
