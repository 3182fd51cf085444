"""
Unit tests for truncated power series arithmetic.
"""
import pytest
import sympy as sp

from core.algebra import BranchError, ConstraintError, CycloElem, OMEGA, const, param
from core.series import (
    TruncSeries,
    first_mismatch,
    map_power,
    rational_series,
    solve_trinomial_std,
)

x = sp.Symbol("x")


def coeffs(series):
    return list(series.coeffs)


class TestArithmetic:
    """Test ring operations and their truncation."""

    def test_geometric_inverse(self):
        """Test 1/(1 - x) has every coefficient 1."""
        inv = TruncSeries.from_poly([1, -1], 6, "x").inverse()
        assert coeffs(inv) == [const(1)] * 7

    def test_product_order_is_minimum(self):
        """Test a product is only known through the smaller order."""
        f = TruncSeries([1, 1, 1], "x")
        g = TruncSeries([1, 2, 3, 4, 5], "x")
        assert (f * g).order == 2

    def test_integer_power(self):
        """Test (1 + x)^3 and its negative power."""
        f = TruncSeries.from_poly([1, 1], 5, "x")
        assert coeffs(f ** 3)[:4] == [const(1), const(3), const(3), const(1)]
        assert ((f ** -2) * (f ** 2)).valuation() == 0
        assert first_mismatch((f ** -2) * (f ** 2), TruncSeries.constant(1, 5, "x")) is None

    def test_variables_must_match(self):
        """Test mixing variables is refused."""
        with pytest.raises(ValueError):
            TruncSeries([1, 1], "x") + TruncSeries([1, 1], "t")

    def test_shift_down_requires_vanishing_terms(self):
        """Test dividing by x needs a zero constant term."""
        f = TruncSeries([0, 2, 3], "x")
        assert coeffs(f.shift(-1)) == [const(2), const(3)]
        with pytest.raises(ValueError):
            TruncSeries([1, 2], "x").shift(-1)

    def test_cyclo_coefficients(self):
        """Test series over Q[w3] multiply through the cyclotomic layer."""
        w = CycloElem.root(3, 1)
        f = TruncSeries.from_poly([1, w], 3, "x")
        cube = f ** 3
        assert cube[3] == 1


class TestPowersAndComposition:
    """Test symbolic powers, roots and composition."""

    def test_symbolic_power(self):
        """Test (1 + x)^a gives the binomial coefficients in a."""
        a = param("a")
        f = TruncSeries.from_poly([1, 1], 3, "x").pow_param(a)
        assert f[1] == a
        assert f[2] == a * (a - 1) / 2

    def test_square_root_squares_back(self):
        """Test nth_root followed by the integer power."""
        f = TruncSeries.from_poly([1, 3, -2, 5], 8, "x")
        root = f.nth_root(2)
        assert first_mismatch(root * root, f) is None

    def test_pow_param_needs_unit(self):
        """Test a constant term other than 1 is a branch error."""
        with pytest.raises(BranchError):
            TruncSeries([2, 1], "x").pow_param(const(1, 2))

    def test_compose_order(self):
        """Test 1/(1-u) at u = x^2/(1-x) keeps the available order."""
        outer = TruncSeries.from_poly([1, -1], 4, "x").inverse()
        inner = rational_series(x ** 2 / (1 - x), x, 8)
        composed = outer.compose(inner)
        assert composed.order == 8
        expected = rational_series((1 - x) / (1 - x - x ** 2), x, 8)
        assert first_mismatch(composed, expected) is None

    def test_compose_needs_zero_constant(self):
        """Test the inner series must vanish at 0."""
        with pytest.raises(ValueError):
            TruncSeries([1, 1], "x").compose(TruncSeries([1, 1], "x"))

    def test_polynomial_outer_takes_any_constant(self):
        """Test (w + w^2) at 1 + z is 2 + 3z + z^2 when the outer is exact."""
        outer = TruncSeries.from_poly([0, 1, 1], 2, "w")
        composed = outer.compose(TruncSeries.from_poly([1, 1], 3, "z"), exact_outer=True)
        assert composed.var == "z"
        assert coeffs(composed) == [2, 3, 1, 0]

    def test_compose_is_associative(self):
        """Test f(g(h)) = (f o g)(h) for inner series vanishing at 0."""
        f = TruncSeries.from_poly([1, -1], 6, "x").inverse()
        g = TruncSeries.from_poly([0, 1, 1], 6, "x")
        h = TruncSeries.from_poly([0, 2, 0, -1], 6, "x")
        assert first_mismatch(f.compose(g.compose(h)), f.compose(g).compose(h)) is None

    def test_power_times_inverse_power(self):
        """Test f^a f^(-a) = 1 with a symbolic."""
        a = param("a")
        f = TruncSeries.from_poly([1, 2, -1, 3], 5, "x")
        product = f.pow_param(a) * f.pow_param(-a)
        assert first_mismatch(product, TruncSeries.constant(1, 5, "x")) is None

    def test_square_then_square_root(self):
        """Test the exponent 2 followed by 1/2 returns the series."""
        f = TruncSeries.from_poly([1, -3, 1, 2], 6, "x")
        back = f.pow_param(const(2)).pow_param(const(1, 2))
        assert first_mismatch(back, f) is None


class TestTail:
    """Test removal of leading terms."""

    def test_drops_through_index(self):
        """Test 1 + z + z^2 loses its constant term at index 0."""
        f = TruncSeries.from_poly([1, 1, 1], 2, "z")
        assert coeffs(f.tail_from(0)) == [0, 1, 1]
        assert f.tail_from(2).is_zero()

    def test_partition(self):
        """Test the tail past z^1 plus the first two terms gives back the series."""
        f = TruncSeries.from_poly([3, -1, 4, 1], 3, "z")
        head = TruncSeries.from_poly([3, -1], 3, "z")
        assert first_mismatch(f.tail_from(1) + head, f) is None

    @pytest.mark.parametrize("m", [-1, 3, 5])
    def test_index_outside_order(self, m):
        """Test an index past the order or below 0 is refused."""
        with pytest.raises(ValueError):
            TruncSeries.from_poly([1, 1, 1], 2, "z").tail_from(m)


class TestMapPower:
    """Test powers of rational maps with valuations split off."""

    def test_half_power_splits_valuation(self):
        """Test [x^2/(1+x)]^(1/2) = x (1+x)^(-1/2)."""
        e, unit = map_power([0, 0, 1], [1, 1], const(1, 2), 6, "x")
        assert e == 1
        expected = TruncSeries.from_poly([1, 1], 6, "x").pow_param(const(-1, 2))
        assert first_mismatch(unit, expected) is None

    def test_rational_leading_root(self):
        """Test the leading constant takes its exact rational root."""
        e, unit = map_power([0, 0, 0, 27], [1], const(1, 3), 4, "x")
        assert e == 1
        assert unit[0] == 3

    def test_odd_valuation_under_square_root(self):
        """Test x^1 has no square root series."""
        with pytest.raises(BranchError):
            map_power([0, 1], [1], const(1, 2), 4, "x")

    def test_symbolic_exponent_needs_unit(self):
        """Test symbolic exponents need constant term 1."""
        with pytest.raises(BranchError):
            map_power([2, 1], [1], param("a"), 4, "x")


class TestRationalSeries:
    """Test expansion of sympy rational expressions."""

    def test_expansion(self):
        """Test 1/(1 - 2x) expands to powers of 2."""
        f = rational_series(1 / (1 - 2 * x), x, 5)
        assert coeffs(f) == [const(2 ** k) for k in range(6)]

    def test_pole_rejected(self):
        """Test a pole at 0 is a constraint error."""
        with pytest.raises(ConstraintError):
            rational_series(1 / x, x, 4)

    def test_omega_coefficients(self):
        """Test conductor-3 expressions reduce w^3 = 1."""
        f = rational_series((OMEGA ** 2 + OMEGA * x) ** 3 / (1 + x ** 3), x, 4, 3)
        assert f[0] == 1


class TestTrinomialRoot:
    """Test Newton iteration for y - 1 - z y^B = 0."""

    def test_catalan(self):
        """Test B = 2 gives the Catalan numbers."""
        y = solve_trinomial_std(const(2), 6)
        assert coeffs(y) == [const(c) for c in (1, 1, 2, 5, 14, 42, 132)]

    def test_linear(self):
        """Test B = 0 gives y = 1 + z."""
        y = solve_trinomial_std(const(0), 4)
        assert coeffs(y) == [const(1), const(1), const(0), const(0), const(0)]

    def test_residual_vanishes_symbolically(self):
        """Test the residual for symbolic B."""
        B = param("B")
        y = solve_trinomial_std(B, 5)
        z = TruncSeries.monomial(1, 1, 5, "z")
        assert (y - 1 - z * y.pow_param(B)).is_zero()
