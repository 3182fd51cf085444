"""
Tests for symmetric functions of trinomial roots.
"""
import pytest
import sympy as sp

from core.algebra import ConstraintError
from core.symmetric_functions import (
    CurveReducedExpr,
    coset_poly,
    e_symbols,
    elementary_from_power_sums,
    eq819_coefficients,
    hat_sigma,
    hat_sigma_branches,
    k2_consistency,
    k3_defining_poly,
    newton_girard,
    p_symbols,
    power_sum_determinant,
    power_sum_on_curve,
    power_sum_restricted,
    power_sums_from_elementary,
    thm810_P,
    vanishes_on_curve,
    x_symbols,
)


class TestNewtonGirard:
    """Test conversions between elementary polynomials and power sums."""

    def test_elementary_from_power_sums(self):
        """Test sigma_2 = (p1^2 - p2)/2."""
        p1, p2 = p_symbols(2)
        result = newton_girard("e_from_p", 2, 2)
        assert sp.expand(result.expr - (p1 ** 2 - p2) / 2) == 0

    def test_power_sums_from_elementary(self):
        """Test p_3 = e1^3 - 3 e1 e2 + 3 e3."""
        e1, e2, e3 = e_symbols(3)
        result = newton_girard("p_from_e", 3, 3)
        assert sp.expand(result.expr - (e1 ** 3 - 3 * e1 * e2 + 3 * e3)) == 0

    def test_numeric_roots(self):
        """Test roots 1, 2, 3 give power sums 6, 14, 36, 98."""
        elementary = [1, 6, 11, 6]
        assert power_sums_from_elementary(elementary, 4) == [6, 14, 36, 98]
        assert power_sum_determinant(3, elementary) == 36

    def test_round_trip(self):
        """Test power sums of 1, 2, 3 map back to the elementary values."""
        assert elementary_from_power_sums([6, 14, 36], 3) == [1, 6, 11, 6]

    def test_unknown_direction(self):
        """Test an unknown direction is refused."""
        with pytest.raises(ValueError):
            newton_girard("sideways", 2, 2)

    def test_stray_generator(self):
        """Test SymmetricExpr rejects symbols outside its basis."""
        from core.symmetric_functions import SymmetricExpr

        with pytest.raises(ValueError):
            SymmetricExpr(basis="e", arity=2, degree=2, expr=sp.Symbol("x"))


class TestPowerSumsOnCurve:
    """Test power sums when only sigma_q and sigma_n survive."""

    @pytest.mark.parametrize("p,q", [(2, 3), (1, 2), (3, 2)])
    def test_closed_form_matches_recursion(self, p, q):
        """Test the closed form against restricted Newton-Girard."""
        for gamma in range(1, 16):
            closed = power_sum_on_curve(gamma, p, q).as_expr()
            assert sp.expand(closed - power_sum_restricted(gamma, p, q)) == 0

    def test_small_values(self):
        """Test p_3 = 3 s3 and p_6 = 3 s3^2 on the (2,3) curve."""
        s3 = sp.Symbol("s3")
        assert thm810_P(-1) == 3 * s3
        assert sp.expand(thm810_P(-2) - 3 * s3 ** 2) == 0

    def test_nonnegative_index(self):
        """Test P_a needs a negative integer."""
        with pytest.raises(ConstraintError):
            thm810_P(0)

    def test_weight_validation(self):
        """Test a monomial of the wrong weight is refused."""
        with pytest.raises(ValueError):
            CurveReducedExpr(p=2, q=3, gamma=6, coefficients={(1, 1): 2})


class TestComplementaryRoots:
    """Test elementary polynomials of the roots outside x1..xk."""

    def test_low_degrees(self):
        """Test hat sigma_0 = 1 and hat sigma_1 = -(x1 + x2) when sigma_1 = 0."""
        x1, x2 = x_symbols(2)
        assert hat_sigma(0, 2, 2, 3) == 1
        assert sp.expand(hat_sigma(1, 2, 2, 3) + x1 + x2) == 0

    def test_overlap_forms_agree(self):
        """Test both closed forms apply at m = 2 and agree on the curve."""
        assert set(hat_sigma_branches(2, 2, 2, 3)) == {1, 2}
        hat_sigma(2, 2, 2, 3)

    def test_out_of_range(self):
        """Test m beyond n - k is refused."""
        with pytest.raises(ConstraintError):
            hat_sigma_branches(4, 2, 2, 3)
        with pytest.raises(ConstraintError):
            hat_sigma_branches(1, 5, 2, 3)

    def test_k2_consistency(self):
        """Test the k = 2 parametrization is self-consistent."""
        for p, q in [(1, 1), (1, 2), (2, 3)]:
            k2_consistency(p, q)


class TestPlaneCurves:
    """Test the k = 3 defining polynomial."""

    def test_ideal_membership(self):
        """Test multiples of the curve vanish on it and x1 does not."""
        xs = x_symbols(3)
        curve = k3_defining_poly(2, 3)
        assert vanishes_on_curve(xs[0] * curve, curve, xs)
        assert not vanishes_on_curve(xs[0], curve, xs)

    def test_degenerate_exponents(self):
        """Test (p, q) = (1, 1) has no k = 3 curve."""
        with pytest.raises(ConstraintError):
            k3_defining_poly(1, 1)


class TestCosetPolynomials:
    """Test the coset polynomials and their symmetric coefficients."""

    def test_quadratic_case(self):
        """Test q = 2: Y - (x1 - x2)^2 = Y - (e1^2 - 4 e2)."""
        e1, e2 = e_symbols(2)
        poly = coset_poly(2, -1)
        assert poly.degree == 1
        leading, constant = poly.as_elementary()
        assert leading == 1
        assert sp.expand(constant + e1 ** 2 - 4 * e2) == 0

    def test_cubic_case_is_symmetric(self):
        """Test q = 3 gives a quadratic in Y with symmetric coefficients."""
        poly = coset_poly(3, -1)
        assert poly.degree == 2
        assert len(poly.as_elementary()) == 3

    def test_positive_m_clears_powers(self):
        """Test m > 0 records the cleared power."""
        assert coset_poly(2, 1).cleared_power == 2

    def test_rejected_arguments(self):
        """Test q out of range and m = 0."""
        with pytest.raises(ConstraintError):
            coset_poly(6, -1)
        with pytest.raises(ConstraintError):
            coset_poly(3, 0)

    @pytest.mark.slow
    def test_complementary_coefficients(self):
        """Test the (2,3) coefficients come back monic and free of x."""
        coefficients = eq819_coefficients()
        assert len(coefficients) == 3
        assert coefficients[0] == 1
        for c in coefficients:
            assert not (c.free_symbols & set(x_symbols(5)))
