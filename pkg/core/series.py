"""
Truncated power series over the exact coefficient rings.

A TruncSeries of order N stores the coefficients of x^0..x^N; everything
beyond x^N is unknown. Results of arithmetic are only claimed through the
order that the inputs actually determine.
"""
from typing import Any, Iterable, Optional, Sequence

import sympy as sp

from core.algebra import (
    BranchError,
    ConstraintError,
    CycloElem,
    as_rational,
    exact_rational_root,
    expr_coeffs,
    to_param,
)


def _coerce(value):
    if isinstance(value, CycloElem):
        return value
    return to_param(value)


def _is_one(value) -> bool:
    return not (value - 1)


class TruncSeries:
    """Immutable truncated power series sum c_k var^k, k = 0..order."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[Any], var: str = "z"):
        coeffs = tuple(_coerce(ci) for ci in coeffs)
        if not coeffs:
            raise ValueError("a series needs at least its constant term")
        self.coeffs = coeffs
        self.var = var

    # -- constructors --------------------------------------------------
    @classmethod
    def constant(cls, value, order: int, var: str = "z") -> "TruncSeries":
        value = _coerce(value)
        return cls([value] + [value * 0] * order, var)

    @classmethod
    def monomial(cls, value, k: int, order: int, var: str = "z") -> "TruncSeries":
        value = _coerce(value)
        coeffs = [value * 0] * (order + 1)
        if k <= order:
            coeffs[k] = value
        return cls(coeffs, var)

    @classmethod
    def from_poly(cls, coeffs: Sequence[Any], order: int, var: str = "z") -> "TruncSeries":
        """Exact polynomial (low-to-high coefficients) viewed to `order`."""
        coeffs = [_coerce(ci) for ci in coeffs]
        zero = coeffs[0] * 0
        coeffs = coeffs[: order + 1] + [zero] * (order + 1 - len(coeffs))
        return cls(coeffs, var)

    # -- basic structure -----------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    @property
    def zero(self):
        return self.coeffs[0] * 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> Optional[int]:
        for k, coeff in enumerate(self.coeffs):
            if coeff:
                return k
        return None

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} series to {order}")
        return TruncSeries(self.coeffs[: order + 1], self.var)

    def pad(self, order: int) -> "TruncSeries":
        """Extend with zero coefficients; only valid when the series is a polynomial."""
        if order <= self.order:
            return self.truncate(order)
        return TruncSeries(self.coeffs + (self.zero,) * (order - self.order), self.var)

    def map_coeffs(self, fn) -> "TruncSeries":
        return TruncSeries([fn(ci) for ci in self.coeffs], self.var)

    def renamed(self, var: str) -> "TruncSeries":
        return TruncSeries(self.coeffs, var)

    def _check(self, other: "TruncSeries"):
        if other.var != self.var:
            raise ValueError(f"series variables differ: {self.var} vs {other.var}")

    # -- ring operations -----------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = _coerce(other)
            return TruncSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.var)
        self._check(other)
        n = min(self.order, other.order)
        return TruncSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-ci for ci in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            other = _coerce(other)
            return TruncSeries([ci * other for ci in self.coeffs], self.var)
        self._check(other)
        n = min(self.order, other.order)
        f, g = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            total = self.zero
            for i in range(k + 1):
                if f[i] and g[k - i]:
                    total = total + f[i] * g[k - i]
            out.append(total)
        return TruncSeries(out, self.var)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        lead = self.coeffs[0]
        if not lead:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv_lead = 1 / lead
        f = self.coeffs
        out = [inv_lead]
        for k in range(1, self.order + 1):
            total = self.zero
            for j in range(1, k + 1):
                if f[j]:
                    total = total + f[j] * out[k - j]
            out.append(-total * inv_lead)
        return TruncSeries(out, self.var)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return self * other.inverse()
        other = _coerce(other)
        if not other:
            raise ZeroDivisionError("division of a series by zero")
        return self * (1 / other)

    def __rtruediv__(self, other):
        return self.inverse() * _coerce(other)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("use pow_param for non-integer exponents")
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncSeries.constant(self.coeffs[0] * 0 + 1, self.order, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and substitution -------------------------------------
    def derivative(self) -> "TruncSeries":
        if self.order == 0:
            return TruncSeries([self.zero], self.var)
        return TruncSeries([k * self.coeffs[k] for k in range(1, self.order + 1)], self.var)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by var^k; negative k requires the low coefficients to vanish."""
        if k >= 0:
            return TruncSeries((self.zero,) * k + self.coeffs, self.var)
        if any(self.coeffs[:-k]):
            raise ValueError(f"cannot divide by {self.var}^{-k}: low terms nonzero")
        return TruncSeries(self.coeffs[-k:], self.var)

    def tail_from(self, m: int) -> "TruncSeries":
        """The series with its terms up to and including var^m removed; 0 <= m <= order."""
        if not 0 <= m <= self.order:
            raise ValueError(f"tail index {m} outside 0..{self.order}")
        return TruncSeries(
            [self.zero if k <= m else ci for k, ci in enumerate(self.coeffs)], self.var
        )

    def scale_var(self, factor) -> "TruncSeries":
        """f(factor * var)."""
        factor = _coerce(factor)
        power = factor * 0 + 1
        out = []
        for coeff in self.coeffs:
            out.append(coeff * power)
            power = power * factor
        return TruncSeries(out, self.var)

    def substitute_monomial(self, factor, k: int, var: Optional[str] = None) -> "TruncSeries":
        """f(factor * x^k); known through order k*(order+1) - 1."""
        if k < 1:
            raise ValueError("monomial degree must be positive")
        scaled = self.scale_var(factor)
        out = [self.zero] * (k * (self.order + 1))
        for i, coeff in enumerate(scaled.coeffs):
            out[i * k] = coeff
        return TruncSeries(out, var or self.var)

    def compose(self, inner: "TruncSeries", exact_outer: bool = False) -> "TruncSeries":
        """
        self(inner) for an inner series with zero constant term.

        The result is known through min(inner.order, v*(self.order+1) - 1)
        where v is the valuation of inner; exact_outer drops the second bound
        when self is a polynomial, and then inner may have any constant term.
        """
        if inner[0]:
            if not exact_outer:
                raise ValueError("inner series must have zero constant term")
            result = TruncSeries.constant(self.coeffs[-1], inner.order, inner.var)
            for coeff in reversed(self.coeffs[:-1]):
                result = result * inner + coeff
            return result
        val = inner.valuation()
        if val is None:
            return TruncSeries.constant(self.coeffs[0], inner.order, inner.var)
        order = inner.order
        if not exact_outer:
            order = min(order, val * (self.order + 1) - 1)
        inner = inner.truncate(order)
        top = min(self.order, order // val)
        result = TruncSeries.constant(self.coeffs[top], order, inner.var)
        for k in range(top - 1, -1, -1):
            result = result * inner + self.coeffs[k]
        return result

    def pow_param(self, alpha) -> "TruncSeries":
        """f^alpha for a constant term equal to 1 and alpha in the coefficient field."""
        if not _is_one(self.coeffs[0]):
            raise BranchError("pow_param requires constant term 1")
        alpha = _coerce(alpha)
        f = self.coeffs
        out = [self.coeffs[0] * 0 + 1]
        for k in range(1, self.order + 1):
            total = self.zero
            for j in range(1, k + 1):
                if f[j]:
                    total = total + (alpha * j - (k - j)) * f[j] * out[k - j]
            out.append(total * to_param(sp.Rational(1, k)))
        return TruncSeries(out, self.var)

    def nth_root(self, q: int) -> "TruncSeries":
        return self.pow_param(to_param(sp.Rational(1, q)))

    # -- comparison ----------------------------------------------------
    def equals(self, other: "TruncSeries") -> bool:
        return first_mismatch(self, other) is None and self.order == other.order

    def __repr__(self):
        head = ", ".join(str(ci) for ci in self.coeffs[:4])
        return f"TruncSeries({self.var}, order={self.order}, [{head}{', ...' if self.order > 3 else ''}])"


def first_mismatch(f: TruncSeries, g: TruncSeries, order: Optional[int] = None) -> Optional[int]:
    """Index of the first differing coefficient through min order, or None."""
    f._check(g)
    n = min(f.order, g.order) if order is None else order
    for k in range(n + 1):
        if f[k] - g[k]:
            return k
    return None



def solve_trinomial_std(B, order: int, var: str = "z") -> TruncSeries:
    """
    The power series root of Y - 1 - z Y^B = 0 with Y(0) = 1.

    Newton iteration on the doubling schedule 1, 3, 7, ...; each step solves
    to order 2k + 1 from an order k approximation.
    """
    B = to_param(B)
    approx = TruncSeries([1], var)
    known = 0
    while known < order:
        target = min(2 * known + 1, order)
        Y = approx.pad(target)
        z = TruncSeries.monomial(1, 1, target, var)
        Y_pow_B1 = Y.pow_param(B - 1)
        residual = Y - 1 - z * Y_pow_B1 * Y
        slope = 1 - z * Y_pow_B1 * B
        approx = Y - residual / slope
        known = target
    return approx.pad(order)


def map_power(numer: Sequence[Any], denom: Sequence[Any], exponent, order: int, var: str):
    """
    (P/Q)^exponent for exact polynomials P, Q (low-to-high coefficients).

    Returns (e, S): the value equals var^e * S with S a unit series of the
    given order. For a rational exponent r/d the valuations must split
    exactly and the leading constant must have a rational d-th root; a
    symbolic exponent requires P/Q to start with exactly 1.
    """
    numer = [_coerce(ci) for ci in numer]
    denom = [_coerce(ci) for ci in denom]
    v_num = next(k for k, ci in enumerate(numer) if ci)
    v_den = next(k for k, ci in enumerate(denom) if ci)
    lead = numer[v_num] / denom[v_den]
    P = TruncSeries.from_poly(numer[v_num:], order, var)
    Q = TruncSeries.from_poly(denom[v_den:], order, var)
    unit = (P / numer[v_num]) / (Q / denom[v_den])
    shift = v_num - v_den

    exponent = _coerce(exponent)
    ratio = as_rational(exponent) if not isinstance(exponent, CycloElem) else None
    if ratio is None:
        if shift != 0 or not _is_one(lead):
            raise BranchError("symbolic power needs a unit argument with constant term 1")
        return 0, unit.pow_param(exponent)

    r, d = int(ratio.numerator), int(ratio.denominator)
    if (shift * r) % d:
        raise BranchError(f"valuation {shift} does not split under exponent {r}/{d}")
    if d == 1:
        return shift * r, unit ** r * (lead ** r if r >= 0 else 1 / lead ** (-r))
    lead_rational = as_rational(lead)
    if lead_rational is None:
        if not _is_one(lead):
            raise BranchError("leading constant is not rational")
        lead_rational = 1
    root = exact_rational_root(lead_rational, d)
    lead_power = to_param(root) ** r if r >= 0 else 1 / to_param(root) ** (-r)
    return shift * r // d, unit.pow_param(exponent) * lead_power


def rational_series(expr, symbol: sp.Symbol, order: int, m: Optional[int] = None) -> TruncSeries:
    """Expansion of a rational sympy expression regular at symbol = 0."""
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    e, unit = map_power(
        expr_coeffs(num, symbol, m), expr_coeffs(den, symbol, m), 1, order, str(symbol)
    )
    if e < 0:
        raise ConstraintError(f"expression has a pole at {symbol} = 0")
    return unit.shift(e).truncate(order)
