"""
Root series of the trinomial x^n - g x^p - beta = 0 and the identities that
express them through nF(n-1) series.

Two expansions are supported: near beta = 0 with g = 1 (part "i", q roots,
coefficients in Q(a)[eps_q]) and near g = 0 with beta = 1 (part "ii", n
roots, coefficients in Q(a)[eps_n]). Root j is carried as the series
y_j = (eps^(j-1) x_j)^q (resp. ^n) in the expansion variable, so every
fractional power of a root is a pow_param of a unit series.
"""
from math import factorial, gcd
from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

from core.algebra import CycloElem, const, param, to_param
from core.gould_transform import F_ell_rational, G_at_series, f_ell
from core.hypergeom import HypSpec, binom_ext, hyp_series, pochhammer
from core.series import TruncSeries, first_mismatch, solve_trinomial_std

Part = Literal["i", "ii"]


class TrinomialFamily(BaseModel):
    """Exponents p, q of the trinomial and which coefficient is normalized."""

    model_config = ConfigDict(extra='forbid', strict=True)

    p: int
    q: int
    part: Part = "i"

    @model_validator(mode='after')
    def validate_exponents(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} must be coprime")
        return self

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def conductor(self) -> int:
        """Order of the roots of unity in the coefficient ring."""
        return self.q if self.part == "i" else self.n

    @property
    def root_count(self) -> int:
        return self.conductor

    @property
    def variable(self) -> str:
        return "beta" if self.part == "i" else "g"

    @property
    def B(self):
        """Exponent of the standard form y - 1 - z y^B = 0."""
        if self.part == "i":
            return const(-self.p, self.q)
        return const(self.p, self.n)

    @property
    def twist(self) -> int:
        """z_j = eps^((j-1) * twist) * (expansion variable)."""
        return self.n if self.part == "i" else self.q

    @property
    def zeta_constant(self):
        """(-1)^q n^n / (p^p q^q)."""
        return const((-1) ** self.q * self.n ** self.n, self.p ** self.p * self.q ** self.q)


class RootFamily(BaseModel):
    """The canonical root series y_1..y_m of one family."""

    model_config = ConfigDict(extra='forbid', frozen=True, arbitrary_types_allowed=True)

    family: TrinomialFamily
    roots: tuple

    @property
    def variable(self) -> str:
        return self.family.variable

    @property
    def conductor(self) -> int:
        return self.family.conductor


def _twisted(series: TruncSeries, m: int, step: int) -> TruncSeries:
    """Replace var by eps_m^step * var."""
    return TruncSeries(
        [CycloElem.root(m, step * k) * ci for k, ci in enumerate(series.coeffs)], series.var
    )


def _roots(family: TrinomialFamily, order: int) -> RootFamily:
    base = solve_trinomial_std(family.B, order, family.variable)
    m = family.conductor
    roots = tuple(_twisted(base, m, (j - 1) * family.twist) for j in range(1, m + 1))
    return RootFamily(family=family, roots=roots)


def roots_near_beta0(p: int, q: int, order: int) -> RootFamily:
    """q root series in beta for g = 1."""
    return _roots(TrinomialFamily(p=p, q=q, part="i"), order)


def roots_near_g0(p: int, q: int, order: int) -> RootFamily:
    """n root series in g for beta = 1."""
    return _roots(TrinomialFamily(p=p, q=q, part="ii"), order)


def root_family(p: int, q: int, part: Part, order: int) -> RootFamily:
    return roots_near_beta0(p, q, order) if part == "i" else roots_near_g0(p, q, order)


def trinomial_residual(family: TrinomialFamily, root: TruncSeries, j: int) -> TruncSeries:
    """y_j - 1 - z_j y_j^B, which must vanish through the root's order."""
    z = _twisted(TruncSeries.monomial(1, 1, root.order, root.var), family.conductor,
                 (j - 1) * family.twist)
    return root - 1 - z * root.pow_param(family.B)


def zeta_link(p: int, q: int, part: Part, order: int) -> TruncSeries:
    """
    The hypergeometric argument as a series in the expansion variable:
    zeta = c0 beta^q for part i, 1/zeta = g^n / c0 for part ii.
    """
    family = TrinomialFamily(p=p, q=q, part=part)
    if part == "i":
        return TruncSeries.monomial(family.zeta_constant, q, order, "beta")
    return TruncSeries.monomial(1 / family.zeta_constant, family.n, order, "g")


# ---------------------------------------------------------------------------
# Hypergeometric parameter lists
# ---------------------------------------------------------------------------

def _q_list(r: int, kappa: int) -> list:
    """(i + kappa)/r for i = 1..r with i = r - kappa left out."""
    return [const(i + kappa, r) for i in range(1, r + 1) if i != r - kappa]


def birkeland_spec(p: int, q: int, ell: int, kappa: int, part: Part, a=None) -> HypSpec:
    """The nF(n-1) attached to residue class kappa."""
    a = param("a") if a is None else to_param(a)
    n = p + q
    if part == "i":
        shift = const(kappa, q)
        upper = [(a + i) / n + shift for i in range(n)]
        lower = [(a - ell + i) / p + shift for i in range(1, p + 1)] + _q_list(q, kappa)
    else:
        shift = const(kappa, n)
        upper = [(-a + ell + i) / p + shift for i in range(p)]
        upper += [(a + i) / q + shift for i in range(q)]
        lower = _q_list(n, kappa)
    return HypSpec(upper=upper, lower=lower)


def interpolating_spec(p: int, q: int, ell: int, kappa: int, part: Part, a=None, c=None) -> HypSpec:
    """The n+1Fn attached to residue class kappa in the c-interpolating family."""
    a = param("a") if a is None else to_param(a)
    c = param("c") if c is None else to_param(c)
    n = p + q
    if part == "i":
        shift = const(kappa, q)
        upper = [(a + i) / n + shift for i in range(n)] + [(a + c - ell) / p + shift]
        lower = [(a - ell + i) / p + shift for i in range(p)] + _q_list(q, kappa)
        lower += [(a + c - ell + p) / p + shift]
    else:
        shift = const(kappa, n)
        upper = [(-a + ell + i) / p + shift for i in range(1, p + 1)]
        upper += [(a + i) / q + shift for i in range(q)]
        upper += [(-a - c + ell) / p + shift]
        lower = _q_list(n, kappa) + [(-a - c + ell + p) / p + shift]
    return HypSpec(upper=upper, lower=lower, contiguous=True)


def kappa_range(p: int, q: int, part: Part) -> range:
    return range(q) if part == "i" else range(p + q)


def birkeland_weight(p: int, q: int, ell: int, kappa: int, part: Part, a=None):
    """Rational factor in front of the kappa-th term of the root expansion."""
    a = param("a") if a is None else to_param(a)
    r = q if part == "i" else p + q
    other = p + q if part == "i" else q
    return (-1) ** kappa * pochhammer(a, 1 - ell) / (
        pochhammer(a + const(other * kappa, r), 1 - ell - kappa) * factorial(kappa)
    )


def interpolating_weight(p: int, q: int, ell: int, kappa: int, part: Part, a=None, c=None):
    """Rational factor of the kappa-th term in the c-interpolating family."""
    a = param("a") if a is None else to_param(a)
    c = param("c") if c is None else to_param(c)
    n = p + q
    if part == "i":
        head = pochhammer(a + const(n * kappa, q), -ell - kappa)
        tail = a + c - ell + const(p * kappa, q)
    else:
        head = pochhammer(a + const(q * kappa, n), -ell - kappa)
        tail = a + c - ell - const(p * kappa, n)
    display = (-1) ** kappa * factorial(kappa) * head * tail / (pochhammer(a, -ell) * (a + c - ell))
    return 1 / display


def _class_term(spec: HypSpec, family: TrinomialFamily, kappa: int, order: int) -> TruncSeries:
    """var^kappa * H(zeta) with zeta the link series of the family."""
    if family.part == "i":
        step, factor = family.q, family.zeta_constant
    else:
        step, factor = family.n, 1 / family.zeta_constant
    inner_order = max(0, (order - kappa) // step)
    H = hyp_series(spec, inner_order, family.variable)
    return H.substitute_monomial(factor, step).shift(kappa).truncate(order)


# ---------------------------------------------------------------------------
# Identity sides
# ---------------------------------------------------------------------------

def root_power_kernel(root: TruncSeries, ell: int, a, B, c=None,
                      interpolating: bool = False) -> TruncSeries:
    """root^(-a) F_l(-a, B; root), or with G_l(-a, B, -c; root) when interpolating."""
    prefix = root.pow_param(-a)
    if interpolating:
        return prefix * G_at_series(ell, -a, B, -c, root)
    return prefix * F_ell_rational(ell, -a, B).at(root)


def build_thm41_side(p: int, q: int, ell: int, j: int, part: Part, side: str, order: int,
                     a=None) -> TruncSeries:
    """
    Root j raised to the power A = -a times F_l(A, B; root), against the
    binomial series in the twisted variable.
    """
    a = param("a") if a is None else to_param(a)
    family = TrinomialFamily(p=p, q=q, part=part)
    if side == "lhs":
        root = _roots(family, order).roots[j - 1]
        return root_power_kernel(root, ell, a, family.B)
    A, B = -a, family.B
    coeffs = [f_ell(ell, A, B, k) * binom_ext(A + B * k, k) for k in range(order + 1)]
    return _twisted(TruncSeries(coeffs, family.variable), family.conductor, (j - 1) * family.twist)


def build_thm46_side(p: int, q: int, ell: int, kappa: int, part: Part, side: str, order: int,
                     a=None) -> TruncSeries:
    """
    lhs: weight * var^kappa * H_kappa(zeta); rhs: the discrete Fourier
    coefficient (1/m) sum_j eps^(-(j-1) twist kappa) y_j^(-a) F_l(y_j).
    """
    a = param("a") if a is None else to_param(a)
    family = TrinomialFamily(p=p, q=q, part=part)
    if kappa not in kappa_range(p, q, part):
        raise ValueError(f"kappa={kappa} out of range for part {part}")
    if side == "lhs":
        spec = birkeland_spec(p, q, ell, kappa, part, a)
        return _class_term(spec, family, kappa, order) * birkeland_weight(p, q, ell, kappa, part, a)
    return _fourier_coefficient(family, ell, kappa, order, a)


def _fourier_coefficient(family: TrinomialFamily, ell: int, kappa: int, order: int, a,
                         c=None, interpolating: bool = False) -> TruncSeries:
    m = family.conductor
    roots = _roots(family, order).roots
    total = None
    for j, root in enumerate(roots, start=1):
        term = root_power_kernel(root, ell, a, family.B, c, interpolating)
        term = term * CycloElem.root(m, -(j - 1) * family.twist * kappa)
        total = term if total is None else total + term
    return total * const(1, m)


def build_thm44_side(p: int, q: int, ell: int, j: int, part: Part, side: str, order: int,
                     a=None) -> TruncSeries:
    """lhs: y_j^(-a) F_l(y_j); rhs: sum over kappa of the twisted class terms."""
    a = param("a") if a is None else to_param(a)
    family = TrinomialFamily(p=p, q=q, part=part)
    if side == "lhs":
        root = _roots(family, order).roots[j - 1]
        return root_power_kernel(root, ell, a, family.B)
    m = family.conductor
    total = None
    for kappa in kappa_range(p, q, part):
        term = build_thm46_side(p, q, ell, kappa, part, "lhs", order, a)
        term = term * CycloElem.root(m, (j - 1) * family.twist * kappa)
        total = term if total is None else total + term
    return total


def build_thm48_side(p: int, q: int, ell: int, kappa: int, part: Part, side: str, order: int,
                     a=None, c=None) -> TruncSeries:
    """The c-interpolating analogue of build_thm46_side with G_l kernels."""
    if ell not in (0, 1):
        raise ValueError("interpolating identities exist for l = 0, 1 only")
    a = param("a") if a is None else to_param(a)
    c = param("c") if c is None else to_param(c)
    family = TrinomialFamily(p=p, q=q, part=part)
    if kappa not in kappa_range(p, q, part):
        raise ValueError(f"kappa={kappa} out of range for part {part}")
    if side == "lhs":
        spec = interpolating_spec(p, q, ell, kappa, part, a, c)
        weight = interpolating_weight(p, q, ell, kappa, part, a, c)
        return _class_term(spec, family, kappa, order) * weight
    return _fourier_coefficient(family, ell, kappa, order, a, c, interpolating=True)


def kappa_aggregate(p: int, q: int, ell: int, part: Part, order: int, a=None):
    """
    Both directions of the Fourier relation between root terms u_j and class
    terms v_kappa: returns (first index of a forward mismatch, of an inverse
    mismatch), None meaning the relation holds.
    """
    a = param("a") if a is None else to_param(a)
    family = TrinomialFamily(p=p, q=q, part=part)
    m = family.conductor
    kappas = list(kappa_range(p, q, part))
    v = [build_thm46_side(p, q, ell, k, part, "lhs", order, a) for k in kappas]
    u = [build_thm44_side(p, q, ell, j, part, "lhs", order, a) for j in range(1, m + 1)]
    forward = None
    for j in range(1, m + 1):
        total = sum((v[k] * CycloElem.root(m, (j - 1) * family.twist * k) for k in kappas[1:]),
                    v[0] * CycloElem.root(m, 0))
        hit = first_mismatch(total, u[j - 1])
        if hit is not None:
            forward = hit
            break
    inverse = None
    for k in kappas:
        total = None
        for j in range(1, m + 1):
            term = u[j - 1] * CycloElem.root(m, -(j - 1) * family.twist * k)
            total = term if total is None else total + term
        hit = first_mismatch(total * const(1, m), v[k] * CycloElem.root(m, 0))
        if hit is not None:
            inverse = hit
            break
    return forward, inverse
