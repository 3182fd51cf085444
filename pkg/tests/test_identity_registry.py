"""
Tests for the identity registry and the verification engine.

Covers parameter resolution, parametric and sampled verification, the
report cache and mutation checks: a corrupted builder must produce a
failing report at a low order.
"""
import shutil
import tempfile

import pytest
from unittest.mock import patch

import core.trinomial_roots
import integrations.identity_registry
from config.verify_config import default_order
from core.algebra import ConstraintError, UnknownIdentityError, to_param
from core.cache_interface import DirectoryReportCache, DisabledReportCache, set_report_cache
from core.gould_transform import KernelRat
from core.series import first_mismatch
from integrations.belyi_catalog import RationalMap, T
from integrations.identity_registry import (
    REGISTRY,
    build_sides,
    degree_bound,
    get_case,
    list_identities,
    resolve_args,
    sample_plan,
    spot_params,
    verify,
)


class TestRegistry:
    """Test registry contents and lookups."""

    def test_registry_size(self):
        """Test every family is registered."""
        ids = {case.id for case in list_identities()}
        assert len(ids) >= 28
        for ident in ("eq2-sample", "sec3-m2", "sec3-interp-1", "thm41-i", "thm48-ii",
                      "thm71-a", "thm75-b", "thm88", "thm88-limit", "thm810",
                      "cor811-a", "cor811-b", "thm812", "thm813"):
            assert ident in ids

    def test_unknown_identity(self):
        """Test an unknown id raises UnknownIdentityError."""
        with pytest.raises(UnknownIdentityError):
            get_case("thm99")

    def test_unknown_identity_is_a_key_error(self):
        """Test callers may catch the lookup failure as KeyError."""
        with pytest.raises(KeyError):
            verify("nosuch", order=2, use_cache=False)

    def test_case_metadata(self):
        """Test each case carries a source label and its expansion variable."""
        for case in REGISTRY.values():
            assert case.source
            assert case.variable


class TestParameterResolution:
    """Test defaults, overrides and rejection of foreign parameters."""

    def test_defaults_and_symbols(self):
        """Test integer defaults parse and free parameters stay symbolic."""
        args = resolve_args(get_case("thm46-i"))
        assert args["p"] == 1 and args["q"] == 2 and args["kappa"] == 0
        assert str(args["a"].as_expr()) == "a"

    def test_explicit_rational(self):
        """Test an explicit a becomes a field element."""
        args = resolve_args(get_case("thm46-i"), {"a": "2/7"})
        assert args["a"] == to_param("2/7")

    def test_spot_values_follow_free_parameters(self):
        """Test the fixed spot values cover only the free a and c."""
        assert spot_params("thm46-i") == {"a": "1/7"}
        assert spot_params("thm75-b") == {"a": "1/7", "c": "2/5"}
        assert spot_params("sec3-0") == {}

    def test_foreign_parameter(self):
        """Test a parameter the identity does not use is refused."""
        with pytest.raises(ConstraintError):
            resolve_args(get_case("thm46-i"), {"n": "3"})

    def test_non_integer_index(self):
        """Test integer parameters reject fractions."""
        with pytest.raises(ConstraintError):
            resolve_args(get_case("thm46-i"), {"kappa": "1/2"})

    def test_screened_value(self):
        """Test a = -1 puts a lower parameter at 0 and is refused."""
        with pytest.raises(ConstraintError):
            build_sides("thm46-i", {"a": "-1"}, 3)

    def test_even_p_for_even_map(self):
        """Test the zeta_p2 identities need odd p."""
        with pytest.raises(ConstraintError):
            build_sides("thm73-a", {"p": "2"}, 3)

    def test_kappa_outside_variant(self):
        """Test the G_l variant of the zeta_12 identity is limited to kappa in {0, 1}."""
        with pytest.raises(ConstraintError):
            build_sides("thm74-b", {"kappa": "2"}, 3)


class TestParametricVerification:
    """Test identities pass with their parameters symbolic."""

    def setup_method(self):
        set_report_cache(DisabledReportCache())

    def teardown_method(self):
        set_report_cache(None)

    @pytest.mark.parametrize("ident,params,order", [
        ("eq2-sample", {}, 4),
        ("sec3-0", {}, 4),
        ("sec3-m1", {}, 4),
        ("thm41-i", {}, 4),
        ("thm46-i", {"kappa": "1"}, 4),
        ("thm71-a", {}, 4),
        ("thm73-a", {}, 4),
        ("thm73-a", {"kappa": "1"}, 4),
        ("thm88", {"n": "3"}, 8),
        ("thm88-limit", {"n": "3"}, 8),
        ("cor811-a", {}, 8),
        ("thm810", {}, 6),
    ])
    def test_passes(self, ident, params, order):
        """Test the identity holds through a low order."""
        report = verify(ident, params, order=order, use_cache=False)
        assert report.passed, report.first_mismatch
        assert report.first_mismatch is None
        assert report.mode == "parametric"

    def test_branch_choice_recorded(self):
        """Test a fractional prefactor records its branch."""
        report = verify("thm73-a", {"kappa": "1"}, order=4, use_cache=False)
        assert any(choice.startswith("prefactor^(1/2)") for choice in report.branch_choices)

    def test_ring_reports_symbols(self):
        """Test the ring names the symbolic parameters only."""
        assert verify("thm46-i", order=2, use_cache=False).ring == "Q(a)[w2]"
        assert verify("thm46-i", {"a": "1/7"}, order=2, use_cache=False).ring == "Q[w2]"

    def test_interpolating_at_numeric_values(self):
        """Test the c-interpolating identities run at explicit rational a and c."""
        params = spot_params("thm48-i")
        assert params == {"a": "1/7", "c": "2/5"}
        report = verify("thm48-i", params, order=4, use_cache=False)
        assert report.passed, report.first_mismatch
        assert report.ring == "Q[w2]"

    @pytest.mark.parametrize("part", ["i", "ii"])
    def test_interpolating_at_c_zero(self, part):
        """Test the c-interpolating class term at c = 0 is the plain class term."""
        plain = build_sides(f"thm46-{part}", {"a": "1/7"}, 4)
        reduced = build_sides(f"thm48-{part}", {"a": "1/7", "c": "0"}, 4)
        assert first_mismatch(reduced.lhs, plain.lhs) is None
        assert first_mismatch(reduced.rhs, plain.rhs) is None
        assert verify(f"thm48-{part}", {"a": "1/7", "c": "0"}, order=4, use_cache=False).passed

    def test_interpolating_transform_at_c_zero(self):
        """Test sec3-interp-0 at C = 0 has the sides of sec3-0."""
        plain = build_sides("sec3-0", {"A": "2/3", "B": "3"}, 4)
        reduced = build_sides("sec3-interp-0", {"A": "2/3", "B": "3", "C": "0"}, 4)
        assert first_mismatch(reduced.lhs, plain.lhs) is None
        assert first_mismatch(reduced.rhs, plain.rhs) is None

    @pytest.mark.parametrize("ident", ["thm41-i", "thm73-a"])
    def test_pass_survives_order_escalation(self, ident):
        """Test a PASS at N stays a PASS at N + 8."""
        assert verify(ident, order=4, use_cache=False).passed
        assert verify(ident, order=12, use_cache=False).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("ident", ["thm812", "thm812-quadratic", "thm813", "thm813-f4eqn"])
    def test_radical_capstones(self, ident):
        """Test the nested radical identities through order 20."""
        assert verify(ident, order=20, use_cache=False).passed

    def test_default_order_override(self):
        """Test VERIFY_ORDER replaces the default truncation order."""
        with patch.dict('os.environ', {'VERIFY_ORDER': '3'}):
            assert default_order(1) == 3
            report = verify("thm41-i", use_cache=False)
        assert report.order == 3


class TestMutations:
    """Test corrupted builders are caught at low order."""

    def test_negated_kernel(self):
        """Test a sign error in F_l fails at the constant term."""
        original = core.trinomial_roots.F_ell_rational

        def negated(ell, A, B):
            kernel = original(ell, A, B)
            return KernelRat(ell=kernel.ell, expr=-kernel.expr)

        with patch("core.trinomial_roots.F_ell_rational", side_effect=negated):
            report = verify("thm41-i", order=3, use_cache=False)

        assert not report.passed
        assert report.first_mismatch.order == 0

    def test_shifted_pochhammer(self):
        """Test an off-by-one rising factorial in the class weight fails."""
        original = core.trinomial_roots.pochhammer

        with patch("core.trinomial_roots.pochhammer",
                   side_effect=lambda x, r: original(to_param(x) + 1, r)):
            report = verify("thm46-i", {"kappa": "1"}, order=3, use_cache=False)

        assert not report.passed
        assert report.first_mismatch.order <= 3

    def test_corrupted_map_coefficient(self):
        """Test doubling the argument map breaks the kernel-free identity."""
        original = integrations.identity_registry.zeta_p2

        def doubled(p):
            return RationalMap.from_expr("bad", 2 * original(p).as_expr(), T)

        with patch("integrations.identity_registry.zeta_p2", side_effect=doubled):
            report = verify("eq2-sample", order=3, use_cache=False)

        assert not report.passed
        assert report.first_mismatch.order == 2

    def test_wrong_closed_form(self):
        """Test a perturbed polynomial P_a breaks the integer-a identity."""
        original = integrations.identity_registry.thm810_P

        with patch("integrations.identity_registry.thm810_P",
                   side_effect=lambda a: original(a) + 1):
            report = verify("thm810", order=4, use_cache=False)

        assert not report.passed


class TestSampledVerification:
    """Test seeded rational sampling."""

    def test_sample_plan(self):
        """Test (n + 1) N + |l| + 4 + 1 samples for thm73-a at N = 10."""
        assert degree_bound("thm73-a", 10) == 44
        assert sample_plan("thm73-a", 10) == 45

    def test_plan_doubles_with_c(self):
        """Test a free c doubles the degree bound."""
        assert degree_bound("thm48-i", 4) == 2 * ((4 + 1) * 4 + 4)

    def test_deterministic_under_seed(self):
        """Test the same seed draws the same samples."""
        first = verify("thm46-i", mode="sampled", order=3, samples=3, seed=7, use_cache=False)
        second = verify("thm46-i", mode="sampled", order=3, samples=3, seed=7, use_cache=False)

        assert first.passed and second.passed
        assert first.samples == second.samples
        assert len(first.samples) == 3
        assert first.certainty == "probabilistic"

    def test_full_plan_is_deterministic(self):
        """Test a sample count above the degree bound is reported as deterministic."""
        count = sample_plan("thm41-i", 2)
        report = verify("thm41-i", mode="sampled", order=2, samples=count, seed=1, use_cache=False)
        assert report.passed
        assert report.certainty == "deterministic under degree bound"

    @pytest.mark.parametrize("ident", ["thm48-i", "thm72-b"])
    def test_interpolating_identities_sample(self, ident):
        """Test sampled mode draws admissible a and c for the c-interpolating identities."""
        report = verify(ident, mode="sampled", order=3, samples=3, seed=11, use_cache=False)
        assert report.passed, report.first_mismatch
        assert len(report.samples) == 3
        assert all(set(sample) == {"a", "c"} for sample in report.samples)

    def test_sampling_metric(self, capsys):
        """Test a sampling METRICS line is emitted."""
        verify("thm41-i", mode="sampled", order=2, samples=2, seed=3, use_cache=False)
        assert '"event": "sampling"' in capsys.readouterr().out

    def test_nothing_to_sample(self):
        """Test sampled mode with every free parameter fixed is refused."""
        with pytest.raises(ConstraintError):
            verify("thm46-i", {"a": "1/3"}, mode="sampled", order=2, samples=2, use_cache=False)

    def test_mutation_caught_by_samples(self):
        """Test the negated kernel also fails in sampled mode."""
        original = core.trinomial_roots.F_ell_rational

        def negated(ell, A, B):
            kernel = original(ell, A, B)
            return KernelRat(ell=kernel.ell, expr=-kernel.expr)

        with patch("core.trinomial_roots.F_ell_rational", side_effect=negated):
            report = verify("thm41-i", mode="sampled", order=2, samples=2, seed=5, use_cache=False)

        assert not report.passed
        assert len(report.samples) == 1


class TestReportCache:
    """Test reports are cached and served back."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        set_report_cache(DirectoryReportCache(self.temp_dir))

    def teardown_method(self):
        set_report_cache(None)
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_second_run_is_cached(self, capsys):
        """Test the second identical request is served from the cache."""
        first = verify("sec3-0", order=3)
        second = verify("sec3-0", order=3)

        assert not first.cached
        assert second.cached
        assert second.passed == first.passed
        assert "served from cache" in capsys.readouterr().out

    def test_parameters_change_the_key(self):
        """Test different parameters are not served from the same entry."""
        verify("sec3-0", order=3)
        assert not verify("sec3-0", {"B": "2"}, order=3).cached

    def test_no_cache_flag(self):
        """Test use_cache=False bypasses the stored report."""
        verify("sec3-0", order=3)
        assert not verify("sec3-0", order=3, use_cache=False).cached
