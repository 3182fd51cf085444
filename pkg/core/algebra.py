"""
Exact scalar arithmetic: the parameter field, cyclotomic quotient rings and
univariate polynomial helpers.

Every coefficient in the verifier lives in one sympy rational function field
Q(A, B, C, a, c, y). A, B, C are the transform parameters, a and c the free
hypergeometric parameters, and y is the kernel variable. Elements are
normalized (numerator/denominator cancelled) after every operation, which is
what sympy's FracElement does for us.

Roots of unity are carried by CycloElem: coordinates over the parameter field
reduced modulo the m-th cyclotomic polynomial.
"""
from functools import lru_cache
from math import gcd
import re
from typing import Any, Iterable, Optional, Sequence

import sympy as sp
from sympy import QQ, Poly, Symbol, cyclotomic_poly, integer_nthroot
from sympy.polys.fields import field


PARAM_NAMES = ("A", "B", "C", "a", "c", "y")
PARAM_FIELD, A, B, C, a, c, y = field(",".join(PARAM_NAMES), QQ)
GEN_INDEX = {name: i for i, name in enumerate(PARAM_NAMES)}
Y_INDEX = GEN_INDEX["y"]

OMEGA = Symbol("omega")

_RATIONAL_LITERAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


class VerificationError(Exception):
    """Base class for every error raised by the verifier."""


class ConstraintError(VerificationError, ValueError):
    """A parameter constraint is violated or a numeric degeneracy was hit."""


class BranchError(VerificationError, ValueError):
    """A fractional power has no exact branch in the coefficient ring."""


class UnknownIdentityError(VerificationError, KeyError):
    """Unknown registry id, catalog id or table name."""


class TranscriptionError(VerificationError):
    """An internal consistency check of a displayed formula failed."""


def param(name: str):
    """Generator of the parameter field by name (A, B, C, a, c, y)."""
    return PARAM_FIELD.gens[GEN_INDEX[name]]


def parse_rational(text: str):
    """
    Parse an exact rational literal ("3", "-1/7").

    Floating point literals are rejected.
    """
    match = _RATIONAL_LITERAL.match(str(text))
    if not match:
        raise ValueError(f"not an exact rational literal: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2) or 1)
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return QQ(num, den)


def to_param(value: Any):
    """Coerce ints, rationals and sympy numbers into the parameter field."""
    if isinstance(value, CycloElem):
        return value
    if hasattr(value, "field") and value.field == PARAM_FIELD:
        return value
    if isinstance(value, str):
        return PARAM_FIELD(parse_rational(value))
    if isinstance(value, sp.Rational):
        return PARAM_FIELD(QQ(int(value.p), int(value.q)))
    if isinstance(value, sp.Basic):
        return PARAM_FIELD.from_expr(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return PARAM_FIELD(QQ(int(value.numerator), int(value.denominator)))
    return PARAM_FIELD(value)


def require_coprime(p: int, q: int) -> int:
    """Return n = p + q for positive coprime exponents, else raise ConstraintError."""
    if p < 1 or q < 1:
        raise ConstraintError(f"exponents must be positive, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise ConstraintError(f"p={p} and q={q} are not coprime")
    return p + q


def const(num: int, den: int = 1):
    """Rational constant num/den as a field element."""
    return PARAM_FIELD(QQ(num, den))


def as_rational(x) -> Optional[Any]:
    """Return x as a QQ value when it carries no parameter, else None."""
    x = to_param(x)
    if isinstance(x, CycloElem):
        if not x.is_rational():
            return None
        return as_rational(x.coords[0])
    if not (x.numer.is_ground and x.denom.is_ground):
        return None
    num = x.numer.LC if x.numer else QQ(0)
    return QQ.convert(num) / QQ.convert(x.denom.LC)


def is_nonpositive_integer(x) -> bool:
    """True for numeric field elements equal to 0, -1, -2, ..."""
    value = as_rational(x)
    return value is not None and value.denominator == 1 and value <= 0


def is_integer_value(x) -> bool:
    value = as_rational(x)
    return value is not None and value.denominator == 1


def specialize(x, values: dict):
    """
    Substitute rational values for named parameters.

    Raises ConstraintError if a denominator vanishes.
    """
    if isinstance(x, CycloElem):
        return x.map_coords(lambda coord: specialize(coord, values))
    x = to_param(x)
    ring = PARAM_FIELD.ring
    num, den = x.numer, x.denom
    for name, value in values.items():
        gen = ring.gens[GEN_INDEX[name]]
        value = as_rational(value)
        if value is None:
            raise ValueError(f"{name} must be specialized to a rational")
        num = num.subs(gen, value)
        den = den.subs(gen, value)
    if not den:
        raise ConstraintError(f"denominator vanishes at {values}")
    return PARAM_FIELD.new(num, den)


def _leading_wrt(poly, index: int):
    degree = poly.degree(index)
    terms = {
        monom[:index] + (0,) + monom[index + 1:]: coeff
        for monom, coeff in poly.terms()
        if monom[index] == degree
    }
    return degree, poly.ring.from_dict(terms)


def limit_at_infinity(x, name: str):
    """
    Limit of a field element as the parameter `name` tends to infinity.

    Raises ConstraintError when the element grows without bound.
    """
    if isinstance(x, CycloElem):
        return x.map_coords(lambda coord: limit_at_infinity(coord, name))
    x = to_param(x)
    index = GEN_INDEX[name]
    if not x:
        return x
    deg_num, lead_num = _leading_wrt(x.numer, index)
    deg_den, lead_den = _leading_wrt(x.denom, index)
    if deg_num < deg_den:
        return PARAM_FIELD.zero
    if deg_num > deg_den:
        raise ConstraintError(f"element is unbounded as {name} -> oo")
    return PARAM_FIELD.new(lead_num, lead_den)


def exact_rational_root(value, d: int):
    """
    Real d-th root of a rational when it is itself rational.

    Negative radicands are allowed for odd d; anything else raises BranchError.
    """
    value = QQ.convert(value)
    if d <= 0:
        raise ValueError("root index must be positive")
    if value == 0:
        return QQ(0)
    sign = 1
    if value < 0:
        if d % 2 == 0:
            raise BranchError(f"even root of negative constant {value}")
        sign, value = -1, -value
    num, num_exact = integer_nthroot(int(value.numerator), d)
    den, den_exact = integer_nthroot(int(value.denominator), d)
    if not (num_exact and den_exact):
        raise BranchError(f"{value} has no rational {d}-th root")
    return QQ(sign * num, den)


def format_value(x) -> str:
    """Human-readable rendering used in reports."""
    if isinstance(x, CycloElem):
        return str(x)
    return str(x.as_expr()) if hasattr(x, "as_expr") else str(x)


# ---------------------------------------------------------------------------
# Cyclotomic quotient rings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _cyclo_data(m: int):
    """(phi degree, Phi_m coefficients high-to-low, power table of omega^k)."""
    coeffs = [int(ci) for ci in cyclo_poly(m).all_coeffs()]
    degree = len(coeffs) - 1
    # omega^degree = -(sum of lower coefficients)
    top = [-coeffs[degree - i] for i in range(degree)]
    table = []
    current = [1] + [0] * (degree - 1)
    for _ in range(m):
        table.append(tuple(current))
        carry = current[-1]
        current = [0] + current[:-1]
        current = [current[i] + carry * top[i] for i in range(degree)]
    return degree, tuple(top), tuple(table)


def cyclo_poly(m: int) -> Poly:
    """The m-th cyclotomic polynomial in omega over QQ."""
    if m < 1:
        raise ValueError("conductor must be positive")
    return Poly(cyclotomic_poly(m, OMEGA), OMEGA, domain=QQ)


class CycloElem:
    """
    Element of Q(params)[omega]/(Phi_m(omega)), omega = exp(2 pi i / m).

    Immutable. Mixed-conductor arithmetic embeds both operands into the lcm
    conductor; plain field elements act as scalars.
    """

    __slots__ = ("m", "coords")

    def __init__(self, m: int, coords: Iterable[Any]):
        degree, _, _ = _cyclo_data(m)
        coords = tuple(to_param(ci) for ci in coords)
        if len(coords) != degree:
            raise ValueError(f"expected {degree} coordinates for conductor {m}")
        self.m = m
        self.coords = coords

    @classmethod
    def scalar(cls, m: int, value) -> "CycloElem":
        degree, _, _ = _cyclo_data(m)
        return cls(m, [value] + [0] * (degree - 1))

    @classmethod
    def root(cls, m: int, k: int = 1) -> "CycloElem":
        """omega^k for the primitive m-th root omega."""
        _, _, table = _cyclo_data(m)
        return cls(m, table[k % m])

    @classmethod
    def from_expr(cls, m: int, expr) -> "CycloElem":
        """Reduce a sympy expression polynomial in OMEGA modulo Phi_m."""
        degree, _, _ = _cyclo_data(m)
        reduced = sp.rem(sp.expand(expr), cyclo_poly(m).as_expr(), OMEGA)
        poly = Poly(reduced, OMEGA)
        coords = [0] * degree
        for (k,), coeff in poly.terms():
            coords[k] = coeff
        return cls(m, coords)

    # -- structure -----------------------------------------------------
    def is_rational(self) -> bool:
        """True when every coordinate beyond the constant one vanishes."""
        return not any(self.coords[1:])

    def map_coords(self, fn) -> "CycloElem":
        return CycloElem(self.m, [fn(ci) for ci in self.coords])

    def embed(self, m: int) -> "CycloElem":
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError(f"cannot embed conductor {self.m} into {m}")
        step = m // self.m
        result = CycloElem.scalar(m, 0)
        for k, coord in enumerate(self.coords):
            if coord:
                result = result + CycloElem.root(m, k * step) * coord
        return result

    def conjugate_by(self, k: int) -> "CycloElem":
        """Galois action omega -> omega^k, gcd(k, m) = 1."""
        result = CycloElem.scalar(self.m, 0)
        for i, coord in enumerate(self.coords):
            if coord:
                result = result + CycloElem.root(self.m, i * k) * coord
        return result

    def inverse(self) -> "CycloElem":
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        others = CycloElem.scalar(self.m, 1)
        for k in range(2, self.m + 1):
            if gcd(k, self.m) == 1 and k % self.m != 1:
                others = others * self.conjugate_by(k)
        norm = (self * others).coords[0]
        return others * (1 / norm)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.m == self.m:
                return self, other
            m = self.m * other.m // gcd(self.m, other.m)
            return self.embed(m), other.embed(m)
        return self, CycloElem.scalar(self.m, other)

    def __add__(self, other):
        left, right = self._coerce(other)
        return CycloElem(left.m, [x + z for x, z in zip(left.coords, right.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, [-x for x in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloElem):
            other = to_param(other)
            return CycloElem(self.m, [x * other for x in self.coords])
        left, right = self._coerce(other)
        degree, top, _ = _cyclo_data(left.m)
        product = [PARAM_FIELD.zero] * (2 * degree - 1)
        for i, x in enumerate(left.coords):
            if not x:
                continue
            for j, z in enumerate(right.coords):
                if z:
                    product[i + j] += x * z
        for k in range(len(product) - 1, degree - 1, -1):
            carry = product[k]
            if carry:
                for i in range(degree):
                    if top[i]:
                        product[k - degree + i] += carry * top[i]
        return CycloElem(left.m, product[:degree])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CycloElem):
            return self * other.inverse()
        other = to_param(other)
        if not other:
            raise ZeroDivisionError("division by zero scalar")
        return self * (1 / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloElem.scalar(self.m, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        try:
            left, right = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return not (left - right)

    __hash__ = None

    def __repr__(self):
        terms = []
        for k, coord in enumerate(self.coords):
            if coord:
                text = format_value(coord)
                terms.append(f"({text})" if k == 0 else f"({text})*w{self.m}^{k}")
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# Univariate polynomial helpers
# ---------------------------------------------------------------------------

def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd of two nonzero univariate polynomials in the same variable."""
    if f.is_zero or g.is_zero:
        raise ValueError("poly_gcd requires nonzero inputs")
    if f.gens != g.gens:
        raise ValueError(f"main variables differ: {f.gens} vs {g.gens}")
    return sp.gcd(f, g).to_field().monic()


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct irreducible factors of f, made monic."""
    if f.is_zero:
        raise ValueError("squarefree_part of zero")
    if f.degree() <= 0:
        return Poly(1, *f.gens, domain=f.to_field().domain)
    return f.to_field().exquo(poly_gcd(f, f.diff(f.gens[0]))).monic()


def expr_coeffs(expr, var: Symbol, m: Optional[int] = None) -> list:
    """
    Coefficients (low to high) of a polynomial expression in var.

    With a conductor m the symbol OMEGA is reduced modulo Phi_m and every
    coefficient comes back as a CycloElem.
    """
    expr = sp.expand(expr)
    if m is None:
        poly = Poly(expr, var)
        coeffs = poly.all_coeffs()[::-1]
        return [to_param(ci) for ci in coeffs]
    poly = Poly(expr, var)
    coeffs = poly.all_coeffs()[::-1]
    return [CycloElem.from_expr(m, ci) for ci in coeffs]


def rational_values(values: Sequence[Any]) -> list:
    return [to_param(v) for v in values]
