"""
Identity registry and verification engine.

Every entry names a builder that returns both sides of one identity as
truncated series in a single expansion variable. verify() compares them
through the requested order, either with the free parameters kept symbolic
(parametric mode) or at seeded rational samples (sampled mode), and caches
the resulting VerifyReport.
"""
import json
import random
import time
from typing import Any, Callable, Dict, List, Optional

import sympy as sp
from pydantic import BaseModel, ConfigDict

from config.log_policy import debug, emit_metric
from config.verify_config import DEFAULT_SAMPLES, VERIFY_SEED, default_order, get_session_metadata
from core.algebra import (
    OMEGA,
    ConstraintError,
    CycloElem,
    UnknownIdentityError,
    as_rational,
    const,
    expr_coeffs,
    param,
    parse_rational,
    require_coprime,
    to_param,
)
from core.cache_interface import DisabledReportCache, get_report_cache, report_key
from core.gould_transform import section3_sides
from core.hypergeom import HypSpec, hyp_series, resolve_degenerate
from core.schemas import IdentityCase, VerifyMode, VerifyReport
from core.series import TruncSeries, map_power, rational_series
from core.symmetric_functions import thm810_P
from core.trinomial_roots import (
    birkeland_spec,
    birkeland_weight,
    build_thm41_side,
    build_thm44_side,
    build_thm46_side,
    build_thm48_side,
    interpolating_spec,
    interpolating_weight,
    kappa_range,
    root_power_kernel,
)
from core.validators import build_report, compare_series, emit_verify_metric, match_branch, require_screened
from integrations.belyi_catalog import S, T, TT, U, V, X, zeta_13, zeta_14, zeta_23, zeta_p1, zeta_p2, zeta_p2_factors

H = sp.Symbol("h")          # s - 1, the local variable at s = 1

INT_PARAMS = ("p", "q", "l", "kappa", "j", "n")
RAT_PARAMS = ("a", "c", "A", "B", "C")


class IdentitySides(BaseModel):
    """Both sides of one identity, ready for comparison."""

    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    lhs: Any
    rhs: Any
    ring: str
    branch_choices: List[str] = []


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _case(ident: str, source: str, variable: str, ring: str, family: str, defaults=None,
          free=(), variant: Optional[str] = None) -> IdentityCase:
    return IdentityCase(
        id=ident, source=source, variable=variable, ring=ring, family=family,
        defaults=dict(defaults or {}), free=list(free), variant=variant,
    )


def _registry() -> Dict[str, IdentityCase]:
    cases = [
        _case("eq2-sample", "nF(n-1) at the even map zeta_p2, kernel-free form", "t", "Q(a)",
              "eq2", {"p": "1"}, ["a"]),
    ]
    for ell in range(-2, 4):
        tag = f"m{-ell}" if ell < 0 else str(ell)
        cases.append(_case(f"sec3-{tag}", f"Vandermonde transform identity, l={ell}", "z",
                           "Q(A,B)", "sec3", {"l": str(ell)}, ["A", "B"]))
    for ell in (0, 1):
        cases.append(_case(f"sec3-interp-{ell}", f"C-interpolating transform identity, l={ell}",
                           "z", "Q(A,B,C)", "sec3", {"l": str(ell)}, ["A", "B", "C"], "interp"))

    trinomial = {
        "thm41": ("root power against its binomial series", {"j": "1"}, ["a"]),
        "thm44": ("root power as a sum over residue classes", {"j": "1"}, ["a"]),
        "thm46": ("residue class term as a root average", {"kappa": "0"}, ["a"]),
        "thm48": ("c-interpolating residue class term", {"kappa": "0"}, ["a", "c"]),
    }
    for family, (source, extra, free) in trinomial.items():
        for part, variable, ring in (("i", "beta", "Q(a)[w_q]"), ("ii", "g", "Q(a)[w_n]")):
            defaults = {"p": "1", "q": "2", "l": "0", **extra}
            cases.append(_case(f"{family}-{part}", f"trinomial roots near {variable}=0: {source}",
                               variable, ring, family, defaults, free, part))

    uniformized = {
        "thm71": ("s", "degree-n map zeta_p1, q = 1", {"p": "2", "l": "0"}, ""),
        "thm72": ("h", "degree-2 map zeta_11 near s = 1", {"l": "0", "kappa": "0"}, ""),
        "thm73": ("t", "even map zeta_p2 for odd p", {"p": "1", "l": "0", "kappa": "0"}, ""),
        "thm74": ("tt", "degree-6 map zeta_12, argument 1/zeta", {"l": "0", "kappa": "0"}, "[w3]"),
        "thm75": ("u", "degree-24 map zeta_13", {"l": "0", "kappa": "0"}, "[w3]"),
    }
    for family, (variable, source, defaults, ext) in uniformized.items():
        cases.append(_case(f"{family}-a", f"{source}, F_l kernels", variable, f"Q(a){ext}",
                           family, defaults, ["a"], "a"))
        cases.append(_case(f"{family}-b", f"{source}, G_l kernels", variable, f"Q(a,c){ext}",
                           family, defaults, ["a", "c"], "b"))

    cases += [
        _case("thm88", "algebraic (n-1)F(n-2) at zeta_p1 with p = n - 1", "s", "Q", "thm88",
              {"n": "3"}),
        _case("thm88-limit", "the same function as a degenerate nF(n-1) limit", "s", "Q",
              "thm88-limit", {"n": "3"}),
        _case("thm810", "integer a on the (2,3) symmetric quotient curve", "t", "Q", "thm810",
              {"a": "-1"}),
        _case("thm810-a1", "the a = -1 reduction to a 4F3", "t", "Q", "thm810-reduction",
              variant="a1"),
        _case("thm810-a5", "the a = -5 reduction to a 5F4", "t", "Q", "thm810-reduction",
              variant="a5"),
        _case("cor811-a", "4F3 at the degree-10 map zeta_23", "v", "Q", "cor811", variant="a"),
        _case("cor811-b", "5F4 at the degree-10 map zeta_23", "v", "Q", "cor811", variant="b"),
        _case("thm812", "a = -1/3 on the (2,3) curve: nested radical", "v", "Q", "thm812"),
        _case("thm812-quadratic", "quadratic satisfied by the cube of the 4F3", "v", "Q",
              "thm812-quadratic"),
        _case("thm813", "a = -1/4 on the (1,4) curve: nested radical", "x", "Q", "thm813"),
        _case("thm813-f4eqn", "quadratic satisfied by the fourth power of the 4F3", "x", "Q",
              "thm813-f4eqn"),
    ]
    return {case.id: case for case in cases}


REGISTRY: Dict[str, IdentityCase] = _registry()


def list_identities() -> List[IdentityCase]:
    return list(REGISTRY.values())


def get_case(ident: str) -> IdentityCase:
    if ident not in REGISTRY:
        raise UnknownIdentityError(f"unknown identity {ident!r}")
    return REGISTRY[ident]


def spot_params(ident: str) -> Dict[str, str]:
    """The fixed rational values of DEFAULT_SAMPLES for the free a and c of `ident`."""
    case = get_case(ident)
    return {name: value for name, value in DEFAULT_SAMPLES.items() if name in case.free}


# ---------------------------------------------------------------------------
# Parameter handling
# ---------------------------------------------------------------------------

def _parse_int(name: str, text) -> int:
    value = parse_rational(str(text))
    if value.denominator != 1:
        raise ConstraintError(f"{name} must be an integer, got {text}")
    return int(value.numerator)


def resolve_args(case: IdentityCase, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Merge defaults with explicit values; integers for p, q, l, kappa, j, n and
    field elements for a, c, A, B, C. Free parameters without a value stay
    symbolic.
    """
    params = {k: v for k, v in (params or {}).items() if v is not None}
    accepted = set(case.defaults) | set(case.free)
    for name in params:
        if name not in accepted:
            raise ConstraintError(f"parameter {name!r} does not apply to {case.id}")
    args: Dict[str, Any] = {}
    for name, text in {**case.defaults, **params}.items():
        if name in INT_PARAMS:
            args[name] = _parse_int(name, text)
        elif name in RAT_PARAMS:
            try:
                args[name] = to_param(str(text))
            except ValueError as e:
                raise ConstraintError(str(e)) from e
        else:
            raise ConstraintError(f"unknown parameter {name!r}")
    for name in case.free:
        args.setdefault(name, param(name))
    return args


def _is_numeric(x) -> bool:
    return as_rational(x) is not None


def _ring(args: Dict[str, Any], names, conductor: Optional[int] = None) -> str:
    symbolic = [name for name in names if name in args and not _is_numeric(args[name])]
    ring = f"Q({','.join(symbolic)})" if symbolic else "Q"
    return f"{ring}[w{conductor}]" if conductor else ring


def _kappa(args: Dict[str, Any], allowed) -> int:
    kappa = args["kappa"]
    if kappa not in allowed:
        raise ConstraintError(f"kappa={kappa} not in {sorted(allowed)}")
    return kappa


def _interp_ell(ell: int) -> int:
    if ell not in (0, 1):
        raise ConstraintError(f"interpolating kernels exist for l = 0, 1 only, got l={ell}")
    return ell


def family_specs(case: IdentityCase, args: Dict[str, Any]) -> List[HypSpec]:
    """Hypergeometric parameter lists of an identity, for screening and sample plans."""
    family, variant = case.family, case.variant
    a, c = args.get("a"), args.get("c")
    if family == "eq2":
        return [_eq2_spec(args["p"], a)]
    if family in ("thm44",):
        p, q = args["p"], args["q"]
        return [birkeland_spec(p, q, args["l"], k, variant, a) for k in kappa_range(p, q, variant)]
    if family == "thm46":
        return [birkeland_spec(args["p"], args["q"], args["l"], args["kappa"], variant, a)]
    if family == "thm48":
        return [interpolating_spec(args["p"], args["q"], args["l"], args["kappa"], variant, a, c)]
    if family in UNIFORMIZED:
        p, q, part = UNIFORMIZED[family]["pq"](args)
        kappa = args.get("kappa", 0)
        if variant == "a":
            return [birkeland_spec(p, q, args["l"], kappa, part, a)]
        return [interpolating_spec(p, q, args["l"], kappa, part, a, c)]
    return []


# ---------------------------------------------------------------------------
# Series helpers
# ---------------------------------------------------------------------------

def _expand(expr, symbol: sp.Symbol, order: int) -> TruncSeries:
    """Rational expression regular at 0; OMEGA selects the cube-root-of-unity ring."""
    m = 3 if sp.sympify(expr).has(OMEGA) else None
    return rational_series(expr, symbol, order, m)


def _real_power(expr, exponent: sp.Rational, symbol: sp.Symbol, order: int) -> TruncSeries:
    """The real branch of expr^exponent; the valuation must split exactly."""
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    e, unit = map_power(
        expr_coeffs(num, symbol), expr_coeffs(den, symbol),
        const(exponent.p, exponent.q), order, str(symbol),
    )
    if e < 0:
        raise ConstraintError(f"{expr}^{exponent} has a pole at {symbol} = 0")
    return unit.shift(e).truncate(order)


def _compose(outer_builder: Callable[[int, str], TruncSeries], zeta: TruncSeries) -> TruncSeries:
    """outer(zeta) with the outer series built to the order composition needs."""
    v = zeta.valuation()
    if v is None:
        raise ConstraintError("argument series vanishes identically")
    outer = outer_builder(zeta.order // v + 1, zeta.var)
    return outer.compose(zeta)


def _hyp_at(spec: HypSpec, zeta: TruncSeries) -> TruncSeries:
    return _compose(lambda order, var: hyp_series(spec, order, var), zeta)


def _branch_candidates(d: int) -> list:
    if d == 2:
        return [("+1", 1), ("-1", -1)]
    return [(f"w{d}^{k}", 1 if k == 0 else CycloElem.root(d, k)) for k in range(d)]


def _root_average(roots, ell: int, a, B, order: int, symbol: sp.Symbol, c=None,
                  interpolating: bool = False) -> TruncSeries:
    """(1/m) sum of weight * y^(-a) K(y) over the listed (weight, y) pairs."""
    total = None
    for weight, y_expr in roots:
        y = _expand(y_expr, symbol, order)
        term = root_power_kernel(y, ell, a, B, c, interpolating) * weight
        total = term if total is None else total + term
    return total * const(1, len(roots))


def _uniformized_sides(symbol: sp.Symbol, order: int, spec: HypSpec, weight, zeta_expr,
                       roots, ell: int, a, B, c=None, interpolating: bool = False,
                       power=None) -> tuple:
    """
    lhs = weight * power * H(zeta), rhs = average of the root kernels.

    power is (base expression, exponent); its real branch is rotated by the
    root of unity that makes the leading coefficients agree.
    """
    zeta = _expand(zeta_expr, symbol, order)
    lhs = _hyp_at(spec, zeta) * weight
    rhs = _root_average(roots, ell, a, B, order, symbol, c, interpolating)
    choices = []
    if power is not None and power[1] != 0:
        base, exponent = power
        lhs = lhs * _real_power(base, exponent, symbol, order)
        label, factor = match_branch(rhs, lhs, _branch_candidates(exponent.q))
        lhs = lhs * factor
        choices.append(f"prefactor^({exponent}): {label}")
    return lhs, rhs, choices


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _eq2_spec(p: int, a) -> HypSpec:
    n = p + 2
    return HypSpec(
        upper=[(a + i) / n for i in range(n)],
        lower=[(a + i) / p for i in range(1, p + 1)] + [const(1, 2)],
    )


def _build_eq2(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    p, a = args["p"], args["a"]
    rmap = zeta_p2(p)
    P, R = zeta_p2_factors(p)
    lhs = _hyp_at(_eq2_spec(p, a), _expand(rmap.as_expr(), T, order))
    plus = TruncSeries.from_poly([1, 1], order, "t").pow_param(-2 * a)
    minus = TruncSeries.from_poly([1, -1], order, "t").pow_param(-2 * a)
    rhs = (plus + minus) * const(1, 2) * _expand(R / P, T, order).pow_param(a)
    return IdentitySides(lhs=lhs, rhs=rhs, ring=_ring(args, ["a"]))


def _build_sec3(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    interp = case.variant == "interp"
    ell = _interp_ell(args["l"]) if interp else args["l"]
    lhs, rhs = section3_sides(ell, order, args["A"], args["B"], args.get("C"), interp=interp)
    return IdentitySides(lhs=lhs, rhs=rhs, ring=_ring(args, ["A", "B", "C"]))


def _build_trinomial(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    p, q, ell, part = args["p"], args["q"], args["l"], case.variant
    n = require_coprime(p, q)
    m = q if part == "i" else n
    a, c = args["a"], args.get("c")
    family = case.family
    if family in ("thm41", "thm44"):
        j = args["j"]
        if not 1 <= j <= m:
            raise ConstraintError(f"root index j={j} outside 1..{m}")
        build = build_thm41_side if family == "thm41" else build_thm44_side
        lhs = build(p, q, ell, j, part, "lhs", order, a)
        rhs = build(p, q, ell, j, part, "rhs", order, a)
    elif family == "thm46":
        kappa = _kappa(args, kappa_range(p, q, part))
        lhs = build_thm46_side(p, q, ell, kappa, part, "lhs", order, a)
        rhs = build_thm46_side(p, q, ell, kappa, part, "rhs", order, a)
    else:
        kappa = _kappa(args, kappa_range(p, q, part))
        _interp_ell(ell)
        lhs = build_thm48_side(p, q, ell, kappa, part, "lhs", order, a, c)
        rhs = build_thm48_side(p, q, ell, kappa, part, "rhs", order, a, c)
    return IdentitySides(lhs=lhs, rhs=rhs, ring=_ring(args, ["a", "c"], m))


def _thm71_pq(args):
    require_coprime(args["p"], 1)
    return args["p"], 1, "i"


def _thm73_pq(args):
    if args["p"] % 2 == 0:
        raise ConstraintError(f"the zeta_p2 identities need odd p, got p={args['p']}")
    return args["p"], 2, "i"


def _thm71_data(args, kappa):
    p = args["p"]
    return {"symbol": S, "zeta": zeta_p1(p).as_expr(), "roots": [(1, 1 / (1 - S))], "B": const(-p),
            "power": None}


def _thm72_data(args, kappa):
    # s = 1 + h; the argument is 1/zeta_11 = -(1-s)^2/(4s)
    return {
        "symbol": H,
        "zeta": -H ** 2 / (4 * (1 + H)),
        "roots": [(1, 1 / (1 + H)), ((-1) ** kappa, 1 + H)],
        "B": const(1, 2),
        "power": (H ** 2 / (1 + H), sp.Rational(kappa, 2)),
    }


def _thm73_data(args, kappa):
    p = args["p"]
    n = p + 2
    P, R = zeta_p2_factors(p)
    zeta = zeta_p2(p).as_expr()
    return {
        "symbol": T,
        "zeta": zeta,
        "roots": [(1, (1 + T) ** 2 * P / R), ((-1) ** kappa, (1 - T) ** 2 * P / R)],
        "B": const(-p, 2),
        "power": (sp.Rational(4 * p ** p, n ** n) * zeta, sp.Rational(kappa, 2)),
    }


def _thm74_data(args, kappa):
    w, wbar = OMEGA, OMEGA ** 2
    base = 1 + TT ** 3
    return {
        "symbol": TT,
        "zeta": 4 * TT ** 3 / base ** 2,
        "roots": [
            (1, (1 + TT) ** 3 / base),
            (CycloElem.root(3, kappa), (wbar + w * TT) ** 3 / base),
            (CycloElem.root(3, 2 * kappa), (w + wbar * TT) ** 3 / base),
        ],
        "B": const(1, 3),
        "power": (27 * TT ** 3 / base ** 2, sp.Rational(kappa, 3)),
    }


def _thm75_data(args, kappa):
    w, wbar = OMEGA, OMEGA ** 2
    g = 1 - 20 * U ** 3 - 8 * U ** 6
    zeta = zeta_13().as_expr()
    return {
        "symbol": U,
        "zeta": zeta,
        "roots": [
            (1, (1 - U) ** 3 * (1 + 2 * U) ** 3 / g),
            (CycloElem.root(3, 2 * kappa), (1 - w * U) ** 3 * (1 + 2 * w * U) ** 3 / g),
            (CycloElem.root(3, kappa), (1 - wbar * U) ** 3 * (1 + 2 * wbar * U) ** 3 / g),
        ],
        "B": const(-1, 3),
        "power": (sp.Rational(-27, 256) * zeta, sp.Rational(kappa, 3)),
    }


UNIFORMIZED = {
    "thm71": {"pq": _thm71_pq, "data": _thm71_data, "kappas": {"a": (0,), "b": (0,)},
              "conductor": None},
    "thm72": {"pq": lambda args: (1, 1, "ii"), "data": _thm72_data,
              "kappas": {"a": (0, 1), "b": (0, 1)}, "conductor": None},
    "thm73": {"pq": _thm73_pq, "data": _thm73_data, "kappas": {"a": (0, 1), "b": (0, 1)},
              "conductor": None},
    "thm74": {"pq": lambda args: (1, 2, "ii"), "data": _thm74_data,
              "kappas": {"a": (0, 1, 2), "b": (0, 1)}, "conductor": 3},
    "thm75": {"pq": lambda args: (1, 3, "i"), "data": _thm75_data,
              "kappas": {"a": (0, 1, 2), "b": (0, 1, 2)}, "conductor": 3},
}


def _build_uniformized(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    entry = UNIFORMIZED[case.family]
    p, q, part = entry["pq"](args)
    ell = args["l"]
    kappa = _kappa(args, entry["kappas"][case.variant]) if "kappa" in args else 0
    a, c = args["a"], args.get("c")
    data = entry["data"](args, kappa)
    if case.variant == "a":
        spec = birkeland_spec(p, q, ell, kappa, part, a)
        weight = birkeland_weight(p, q, ell, kappa, part, a)
    else:
        _interp_ell(ell)
        spec = interpolating_spec(p, q, ell, kappa, part, a, c)
        weight = interpolating_weight(p, q, ell, kappa, part, a, c)
    lhs, rhs, choices = _uniformized_sides(
        data["symbol"], order, spec, weight, data["zeta"], data["roots"], ell, a, data["B"],
        c, interpolating=case.variant == "b", power=data["power"],
    )
    return IdentitySides(lhs=lhs, rhs=rhs, ring=_ring(args, ["a", "c"], entry["conductor"]),
                         branch_choices=choices)


def _thm88_n(args) -> int:
    n = args["n"]
    if n < 2:
        raise ConstraintError(f"n must be at least 2, got {n}")
    return n


def _build_thm88(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    n = _thm88_n(args)
    zeta = _expand(zeta_p1(n - 1).as_expr(), S, order)
    if case.family == "thm88":
        spec = HypSpec(
            upper=[const(-1, n)] + [const(k, n) for k in range(1, n - 1)],
            lower=[const(k, n - 1) for k in range(1, n - 1)],
        )
        lhs = _hyp_at(spec, zeta)
        rhs = _expand((n - 1 + S) / ((n - 1) * (1 - S)), S, order)
        return IdentitySides(lhs=lhs, rhs=rhs, ring="Q")
    # a -> -1 in the q = 1 family: upper (a+i)/n, lower (a+i)/(n-1)
    upper = [const(i - 1, n) for i in range(n)]
    lower = [const(i - 1, n - 1) for i in range(1, n)]
    outer = lambda h_order, var: resolve_degenerate(
        upper, lower, [const(1, n)] * n, [const(1, n - 1)] * (n - 1), h_order, var
    )
    lhs = _compose(outer, zeta)
    rhs = _expand(1 / (1 - S), S, order)
    return IdentitySides(lhs=lhs, rhs=rhs, ring="Q", branch_choices=["limit along a -> -1"])


def _thm810_zeta(order: int) -> TruncSeries:
    return _expand(zeta_23().as_expr().subs(V, T ** 2), T, order)


def thm810_rhs(a: int, order: int) -> TruncSeries:
    """(1/3) s3^a [P_a(s3, s5) - (t+1)^(-3a) - (t-1)^(-3a)] as a series in t."""
    s3 = (1 + 10 * T ** 2 + 5 * T ** 4) / (2 * T)
    s5 = -(1 - T ** 2) ** 2 * (1 + 3 * T ** 2) / (2 * T)
    P = thm810_P(a).subs({sp.Symbol("s3"): s3, sp.Symbol("s5"): s5})
    expr = sp.Rational(1, 3) * s3 ** a * (P - (T + 1) ** (-3 * a) - (T - 1) ** (-3 * a))
    return _expand(sp.cancel(expr), T, order)


def _build_thm810(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    value = as_rational(args["a"])
    if value is None or value.denominator != 1 or value >= 0:
        raise ConstraintError(f"a must be a negative integer, got {args['a']}")
    a = int(value)
    spec = birkeland_spec(2, 3, 0, 0, "i", a)
    upper_rates = [const(1, 5)] * 5
    lower_rates = [const(1, 2), const(1, 2), const(0), const(0)]
    outer = lambda h_order, var: resolve_degenerate(
        spec.upper, spec.lower, upper_rates, lower_rates, h_order, var
    )
    lhs = _compose(outer, _thm810_zeta(order))
    return IdentitySides(lhs=lhs, rhs=thm810_rhs(a, order), ring="Q",
                         branch_choices=[f"limit along a -> {a}"])


def _build_thm810_reduction(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    zeta = _thm810_zeta(order)
    if case.variant == "a1":
        spec = HypSpec(upper=[const(-1, 5), const(1, 5), const(2, 5), const(3, 5)],
                       lower=[const(1, 2), const(1, 3), const(2, 3)])
        lhs = _hyp_at(spec, zeta) * const(2, 5) + const(3, 5)
        return IdentitySides(lhs=lhs, rhs=thm810_rhs(-1, order), ring="Q")
    spec = _cor811_b_spec()
    tail = _hyp_at(spec, zeta) * zeta ** 3 * const(-2 ** 6 * 3 ** 9, 5 ** 14)
    lhs = tail - zeta * const(2 ** 2 * 3 ** 2, 5 ** 4) + 1
    return IdentitySides(lhs=lhs, rhs=thm810_rhs(-5, order), ring="Q")


def _cor811_b_spec() -> HypSpec:
    return HypSpec(
        upper=[const(11, 5), const(12, 5), const(13, 5), const(14, 5), const(2)],
        lower=[const(3, 2), const(10, 3), const(11, 3), const(4)],
    )


def _build_cor811(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    zeta = _expand(zeta_23().as_expr(), V, order)
    D = 1 + 10 * V + 5 * V ** 2
    if case.variant == "a":
        spec = HypSpec(upper=[const(-1, 5), const(1, 5), const(2, 5), const(3, 5)],
                       lower=[const(1, 2), const(1, 3), const(2, 3)])
        rhs_expr = (3 + 5 * V ** 2) / (3 * D)
    else:
        spec = _cor811_b_spec()
        rhs_expr = ((3 + V) * (5 + 10 * V + V ** 2)
                    * (1 + 28 * V + 134 * V ** 2 + 92 * V ** 3 + V ** 4) * D ** 10
                    / (15 * (1 - V) ** 18 * (1 + 3 * V) ** 9))
    return IdentitySides(lhs=_hyp_at(spec, zeta), rhs=_expand(rhs_expr, V, order), ring="Q")


def _thm812_hyp(order: int) -> TruncSeries:
    spec = HypSpec(upper=[const(-1, 15), const(2, 15), const(8, 15), const(11, 15)],
                   lower=[const(1, 3), const(2, 3), const(5, 6)])
    return _hyp_at(spec, _expand(zeta_23().as_expr(), V, order))


def _thm813_hyp(order: int) -> TruncSeries:
    spec = HypSpec(upper=[const(-1, 20), const(3, 20), const(7, 20), const(11, 20)],
                   lower=[const(1, 4), const(1, 2), const(3, 4)])
    return _hyp_at(spec, _expand(zeta_14().as_expr(), X, order))


def _build_radical(case: IdentityCase, args: Dict[str, Any], order: int) -> IdentitySides:
    principal = ["principal roots (constant term 1)"]
    if case.family.startswith("thm812"):
        D = 1 + 10 * V + 5 * V ** 2
        F = _thm812_hyp(order)
        if case.family == "thm812-quadratic":
            F3 = F ** 3
            c1 = _expand((27 + 90 * V - 5 * V ** 2) / (27 * D), V, order)
            c0 = _expand(4 * V * (3 + 5 * V) ** 3 / (729 * D ** 2), V, order)
            return IdentitySides(lhs=F3 * F3, rhs=c1 * F3 + c0, ring="Q")
        radicand = (1 + 3 * V) * (1 + sp.Rational(115, 27) * V + sp.Rational(25, 27) * V ** 2
                                  + sp.Rational(25, 27) * V ** 3)
        brace = (_expand(sp.Rational(1, 2) + sp.Rational(5, 3) * V - sp.Rational(5, 54) * V ** 2, V, order)
                 + _expand(radicand, V, order).nth_root(2) * const(1, 2))
        lhs = _expand(D, V, order).nth_root(3) * F
        return IdentitySides(lhs=lhs, rhs=brace.nth_root(3), ring="Q", branch_choices=principal)

    D = (1 - X) * (1 + 10 * X + 5 * X ** 2)
    F = _thm813_hyp(order)
    if case.family == "thm813-f4eqn":
        F4 = F ** 4
        c1 = _expand((8 - 5 * X - 10 * X ** 2 - 5 * X ** 3) / (8 * D), X, order)
        c0 = _expand(25 * X ** 2 * (1 + X) ** 4 / (256 * D ** 2), X, order)
        return IdentitySides(lhs=F4 * F4, rhs=c1 * F4 - c0, ring="Q")
    radicand = 1 - sp.Rational(5, 4) * X - sp.Rational(5, 2) * X ** 2 - sp.Rational(5, 4) * X ** 3
    head = (sp.Rational(1, 2) - sp.Rational(5, 16) * X - sp.Rational(5, 8) * X ** 2
            - sp.Rational(5, 16) * X ** 3)
    brace = _expand(head, X, order) + _expand(radicand, X, order).nth_root(2) * const(1, 2)
    lhs = _expand(D, X, order).nth_root(4) * F
    return IdentitySides(lhs=lhs, rhs=brace.nth_root(4), ring="Q", branch_choices=principal)


BUILDERS: Dict[str, Callable[[IdentityCase, Dict[str, Any], int], IdentitySides]] = {
    "eq2": _build_eq2,
    "sec3": _build_sec3,
    "thm41": _build_trinomial,
    "thm44": _build_trinomial,
    "thm46": _build_trinomial,
    "thm48": _build_trinomial,
    **{family: _build_uniformized for family in UNIFORMIZED},
    "thm88": _build_thm88,
    "thm88-limit": _build_thm88,
    "thm810": _build_thm810,
    "thm810-reduction": _build_thm810_reduction,
    "cor811": _build_cor811,
    "thm812": _build_radical,
    "thm812-quadratic": _build_radical,
    "thm813": _build_radical,
    "thm813-f4eqn": _build_radical,
}


def build_sides(ident: str, params: Optional[Dict[str, Any]] = None, order: int = 8) -> IdentitySides:
    """
    Both sides of identity `ident` through `order`.

    Numeric a or c values are screened first: a lower parameter at a
    non-positive integer or an upper/lower pair differing by an integer is a
    ConstraintError.
    """
    case = get_case(ident)
    args = resolve_args(case, params)
    if any(_is_numeric(args[name]) for name in ("a", "c") if name in case.free and name in args):
        require_screened(family_specs(case, args), ident)
    return BUILDERS[case.family](case, args, order)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def degree_bound(ident: str, order: int, params: Optional[Dict[str, Any]] = None) -> int:
    """
    Heuristic degree of a coefficient in the free parameters:
    (n + 1) N + |l| + 4, doubled when c is free.
    """
    case = get_case(ident)
    args = resolve_args(case, params)
    specs = family_specs(case, args)
    n = len(specs[0].upper) if specs else 1
    bound = (n + 1) * order + abs(args.get("l", 0)) + 4
    if "c" in case.free:
        bound *= 2
    return bound


def sample_plan(ident: str, order: int, params: Optional[Dict[str, Any]] = None) -> int:
    """Number of independent samples needed for a deterministic sampled verdict."""
    return degree_bound(ident, order, params) + 1


def _draw_rational(rng: random.Random, height: int, seen: set) -> Optional[sp.Rational]:
    value = sp.Rational(rng.randint(-height, height), rng.randint(2, height))
    if value.q == 1 or value in seen:
        return None
    seen.add(value)
    return value


def _sampled_report(case: IdentityCase, params: Dict[str, str], order: int, count: int,
                    seed: int, started: float) -> VerifyReport:
    names = [name for name in case.free if name not in params]
    if not names:
        raise ConstraintError(f"{case.id} has no free parameter left to sample")
    bound = degree_bound(case.id, order, params)
    certainty = "deterministic under degree bound" if count > bound else "probabilistic"
    emit_metric({"event": "sampling", "id": case.id, "count": count, "certainty": certainty})

    rng = random.Random(seed)
    seen: Dict[str, set] = {name: set() for name in names}
    samples: List[Dict[str, str]] = []
    branches: List[str] = []
    failure = None
    ring = "Q"
    attempts = 0
    max_attempts = 20 * count + 100
    while len(samples) < count and failure is None:
        attempts += 1
        if attempts > max_attempts:
            raise ConstraintError(f"{case.id}: could not draw {count} admissible samples")
        height = 9 + attempts // 100
        values = {}
        for name in names:
            value = _draw_rational(rng, height, seen[name])
            if value is None:
                break
            values[name] = str(value)
        if len(values) < len(names):
            continue
        try:
            sides = build_sides(case.id, {**params, **values}, order)
        except ConstraintError as e:
            debug(f"{case.id}: rejected sample {values}: {e}")
            continue
        samples.append(values)
        ring = sides.ring
        branches.extend(choice for choice in sides.branch_choices if choice not in branches)
        failure = compare_series(sides.lhs, sides.rhs, order)

    report = VerifyReport(
        id=case.id, mode="sampled", order=order, passed=failure is None, first_mismatch=failure,
        ring=ring, branch_choices=branches, millis=int((time.time() - started) * 1000),
        samples=samples, certainty=certainty, params=dict(params),
    )
    emit_verify_metric(report)
    return report


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

_session_logged = False


def _log_session_once() -> None:
    global _session_logged
    if not _session_logged:
        print(f"INFO: session {json.dumps(get_session_metadata(), default=str)}")
        _session_logged = True


def verify(ident: str, params: Optional[Dict[str, Any]] = None, mode: VerifyMode = "parametric",
           order: Optional[int] = None, samples: Optional[int] = None, seed: Optional[int] = None,
           use_cache: bool = True) -> VerifyReport:
    """
    Verify one identity through `order` and return its report.

    A mismatch is a failing report, never an exception; constraint violations
    and unknown ids raise.
    """
    case = get_case(ident)
    params = {k: str(v) for k, v in (params or {}).items() if v is not None}
    resolve_args(case, params)
    free_left = [name for name in case.free if name not in params]
    order = default_order(len(free_left)) if order is None else order
    seed = VERIFY_SEED if seed is None else seed
    _log_session_once()

    if mode == "sampled":
        samples = samples or sample_plan(ident, order, params)
        key = report_key(ident, mode, order, params, samples=samples, seed=seed)
    else:
        key = report_key(ident, mode, order, params)
    cache = get_report_cache() if use_cache else DisabledReportCache()
    report = cache.load(key)
    if report is not None:
        print(f"INFO: {ident} served from cache")
        return report

    started = time.time()
    if mode == "sampled":
        report = _sampled_report(case, params, order, samples, seed, started)
    else:
        sides = build_sides(ident, params, order)
        report = build_report(ident, mode, order, sides.lhs, sides.rhs, sides.ring,
                              sides.branch_choices, params, started)
    cache.store(key, report)
    return report
