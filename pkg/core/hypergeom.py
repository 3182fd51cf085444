"""
Generalized hypergeometric series and their differential operators.
"""
from math import comb, factorial
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from core.algebra import (
    PARAM_FIELD,
    ConstraintError,
    as_rational,
    is_integer_value,
    is_nonpositive_integer,
    to_param,
)
from core.series import TruncSeries


def pochhammer(x, r: int):
    """
    Rising factorial (x)_r, extended to negative r by (x)_r = 1/(x-1)...(x+r).

    Raises ConstraintError when a negative-index factorial hits zero.
    """
    x = to_param(x)
    result = PARAM_FIELD.one
    if r >= 0:
        for i in range(r):
            result *= x + i
        return result
    for i in range(1, -r + 1):
        factor = x - i
        if not factor:
            raise ConstraintError(f"({x})_{r} has a vanishing denominator")
        result *= factor
    return 1 / result


def binom_ext(top, r: int):
    """Generalized binomial coefficient C(top, r) = (top - r + 1)_r / r!."""
    if r < 0:
        return PARAM_FIELD.zero
    return pochhammer(to_param(top) - r + 1, r) / factorial(r)


class HypSpec(BaseModel):
    """
    Upper and lower parameter lists of an nFm series.

    `contiguous` marks the last upper and last lower parameter as a pair
    differing by exactly one (the c-interpolating factor x/(x+k)); the
    integer-difference screen leaves that pair out.
    """

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    upper: tuple
    lower: tuple
    contiguous: bool = False

    @field_validator('upper', 'lower', mode='before')
    @classmethod
    def coerce_params(cls, v):
        return tuple(to_param(x) for x in v)

    @property
    def n(self) -> int:
        return len(self.upper)

    def shifted(self, upper_shift, lower_shift=None) -> "HypSpec":
        lower_shift = upper_shift if lower_shift is None else lower_shift
        return HypSpec(
            upper=[x + upper_shift for x in self.upper],
            lower=[x + lower_shift for x in self.lower],
            contiguous=self.contiguous,
        )

    def specialized(self, fn) -> "HypSpec":
        return HypSpec(upper=[fn(x) for x in self.upper], lower=[fn(x) for x in self.lower],
                       contiguous=self.contiguous)

    def describe(self) -> str:
        ups = ", ".join(str(x.as_expr()) for x in self.upper)
        lows = ", ".join(str(x.as_expr()) for x in self.lower)
        return f"{self.n}F{len(self.lower)}({ups}; {lows})"


class HypOperator(BaseModel):
    """
    The operator D_n(a; b) = prod(theta + b_i - 1) - z prod(theta + a_i).

    Both lists have n entries; b_n = 1 is the convention for an nF(n-1)
    series at the origin.
    """

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    upper: tuple
    lower: tuple

    @field_validator('upper', 'lower', mode='before')
    @classmethod
    def coerce_params(cls, v):
        return tuple(to_param(x) for x in v)

    @classmethod
    def for_spec(cls, spec: HypSpec) -> "HypOperator":
        if len(spec.lower) != spec.n - 1:
            raise ValueError("operator form needs an nF(n-1) spec")
        return cls(upper=spec.upper, lower=tuple(spec.lower) + (PARAM_FIELD.one,))

    def shifted(self, lam) -> "HypOperator":
        return HypOperator(
            upper=[x + lam for x in self.upper], lower=[x + lam for x in self.lower]
        )


def parametric_excess(op) -> Any:
    """
    S = sum(b) - sum(a) - 1 for an operator, whose lower list carries b_n = 1;
    for a HypSpec the implicit 1 is not listed, so S = sum(b) - sum(a).
    """
    total = sum(op.lower, PARAM_FIELD.zero) - sum(op.upper, PARAM_FIELD.zero)
    return total - 1 if isinstance(op, HypOperator) else total


def hyp_series(spec: HypSpec, order: int, var: str = "zeta") -> TruncSeries:
    """
    Coefficients of sum (a)_k/(b)_k z^k/k! through `order`.

    A terminating numerator stops the series; a lower parameter hitting a
    non-positive integer first raises ConstraintError.
    """
    coeffs = [PARAM_FIELD.one]
    current = PARAM_FIELD.one
    for k in range(order):
        if not current:
            coeffs.append(PARAM_FIELD.zero)
            continue
        num = PARAM_FIELD.one
        for x in spec.upper:
            num *= x + k
        if not num:
            current = PARAM_FIELD.zero
            coeffs.append(current)
            continue
        den = PARAM_FIELD(k + 1)
        for x in spec.lower:
            factor = x + k
            if not factor:
                raise ConstraintError(
                    f"lower parameter {x.as_expr()} is a non-positive integer"
                )
            den *= factor
        current = current * num / den
        coeffs.append(current)
    return TruncSeries(coeffs, var)


def apply_Dn(op: HypOperator, f: TruncSeries) -> TruncSeries:
    """Apply D_n to a series; the result is known through f.order."""
    out = []
    for k in range(f.order + 1):
        low = PARAM_FIELD.one
        for x in op.lower:
            low *= x + k - 1
        term = f[k] * low
        if k > 0:
            high = PARAM_FIELD.one
            for x in op.upper:
                high *= x + k - 1
            term = term - f[k - 1] * high
        out.append(term)
    return TruncSeries(out, f.var)


def frobenius_branch(op: HypOperator, j: int, order: int, var: str = "zeta"):
    """
    The solution z^(1 - b_j) h(z) of D_n.

    Returns (lambda, h) with lambda = 1 - b_j and h the nF(n-1) series with
    every parameter shifted by lambda; b_j itself becomes the implicit 1.
    """
    lam = 1 - op.lower[j]
    upper = [x + lam for x in op.upper]
    lower = [x + lam for i, x in enumerate(op.lower) if i != j]
    return lam, hyp_series(HypSpec(upper=upper, lower=lower), order, var)


def degenerate_limit(upper_rest, lower_rest, m: int, m_prime: int, alpha, order: int,
                     var: str = "zeta") -> TruncSeries:
    """
    Tail of nFn-1 when an upper parameter tends to -m' and a lower one to -m.

    With both parameters moving linearly at rates whose ratio is alpha, the
    terms of index k > m' converge to this series; it starts at var^(m+1).
    """
    if not (0 <= m_prime <= m):
        raise ConstraintError(f"need 0 <= m' <= m, got m={m}, m'={m_prime}")
    upper_rest = [to_param(x) for x in upper_rest]
    lower_rest = [to_param(x) for x in lower_rest]
    if order <= m:
        return TruncSeries.constant(PARAM_FIELD.zero, order, var)
    if m_prime == m:
        rest = hyp_series(HypSpec(upper=upper_rest, lower=lower_rest), order, var)
        return rest.tail_from(m) * to_param(alpha)
    lead = to_param(alpha) * (-1) ** (m - m_prime) / comb(m, m_prime)
    for x in upper_rest:
        lead *= pochhammer(x, m + 1)
    for x in lower_rest:
        lead /= pochhammer(x, m + 1)
    lead /= factorial(m + 1)
    inner = HypSpec(
        upper=[x + m + 1 for x in upper_rest] + [m - m_prime + 1],
        lower=[x + m + 1 for x in lower_rest] + [m + 2],
    )
    return (hyp_series(inner, order - m - 1, var) * lead).shift(m + 1)


def resolve_degenerate(upper, lower, upper_rates, lower_rates, order: int,
                       var: str = "zeta") -> TruncSeries:
    """
    nFn-1 with numeric parameters, read as a limit when a lower parameter is
    a non-positive integer.

    The limit is taken along a line on which parameter i moves at rate
    rates[i]; the head through var^m' is the ordinary terminating sum and
    the tail comes from degenerate_limit.
    """
    upper = [to_param(x) for x in upper]
    lower = [to_param(x) for x in lower]
    bad_lower = [i for i, x in enumerate(lower) if is_nonpositive_integer(x)]
    if not bad_lower:
        return hyp_series(HypSpec(upper=upper, lower=lower), order, var)
    j = min(bad_lower, key=lambda i: -as_rational(lower[i]))
    m = -int(as_rational(lower[j]))
    candidates = [
        i for i, x in enumerate(upper)
        if is_nonpositive_integer(x) and -int(as_rational(x)) <= m
    ]
    if not candidates:
        raise ConstraintError(
            f"lower parameter {-m} has no upper partner in [-{m}, 0]; the series diverges"
        )
    i = min(candidates, key=lambda idx: -as_rational(upper[idx]))
    m_prime = -int(as_rational(upper[i]))
    alpha = to_param(upper_rates[i]) / to_param(lower_rates[j])

    head = [PARAM_FIELD.one]
    current = PARAM_FIELD.one
    for k in range(min(m_prime, order)):
        num = PARAM_FIELD.one
        for x in upper:
            num *= x + k
        den = PARAM_FIELD(k + 1)
        for x in lower:
            den *= x + k
        current = current * num / den
        head.append(current)
    head_series = TruncSeries.from_poly(head, order, var)
    rest_upper = [x for idx, x in enumerate(upper) if idx != i]
    rest_lower = [x for idx, x in enumerate(lower) if idx != j]
    return head_series + degenerate_limit(rest_upper, rest_lower, m, m_prime, alpha, order, var)


def reducibility_screen(upper, lower) -> list:
    """
    Numeric pairs (a_i, b_j) with a_i - b_j an integer, b_n = 1 included.

    Parameters that still carry a symbol are skipped.
    """
    clashes = []
    lowers = list(lower) + [PARAM_FIELD.one]
    for x in upper:
        for z in lowers:
            diff = to_param(x) - to_param(z)
            if is_integer_value(diff):
                clashes.append((to_param(x), to_param(z)))
    return clashes


def lower_screen(lower) -> list:
    """Numeric lower parameters that are non-positive integers."""
    return [to_param(x) for x in lower if is_nonpositive_integer(x)]


def ratio_check(spec: HypSpec, f: TruncSeries) -> Optional[int]:
    """First k where c_{k+1}/c_k differs from the parameter ratio, or None."""
    for k in range(f.order):
        num = PARAM_FIELD.one
        for x in spec.upper:
            num *= x + k
        den = PARAM_FIELD(k + 1)
        for x in spec.lower:
            den *= x + k
        if f[k + 1] * den - f[k] * num:
            return k
    return None
