import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmetric import (
    BetaSequence,
    Element,
    IntervalModel,
    LevelOutOfRange,
    UhfModel,
    ZeroResidual,
    beta_from_element,
    beta_squared_from_element,
    conditional_expectation,
    domain_separation_report,
    lip_seminorm,
    residual,
    sup_norm,
    trace,
)
from qmetric import core, instances

GEOM = BetaSequence.geometric(0.5)


@pytest.fixture(scope="module")
def model():
    return IntervalModel.build(8)


class TestFilteredAlgebra:
    def test_level_validation(self, model):
        with pytest.raises(LevelOutOfRange):
            model.algebra.check_level(0)
        with pytest.raises(LevelOutOfRange):
            model.algebra.check_level(model.algebra.levels + 1)

    def test_weights_are_a_probability(self, model):
        w = model.algebra.weights
        assert (w > 0).all()
        assert np.sum(w) == pytest.approx(1.0, abs=1e-15)

    def test_bad_commutative_data_rejected(self):
        with pytest.raises(ValueError):
            # weights do not sum to 1
            core.FilteredAlgebra.commutative(
                ("a", "b"), np.array([0.5, 0.4]), [[(0, 1)], [(0,), (1,)]]
            )
        with pytest.raises(ValueError):
            # level 3 merges indices split at level 2: not a refinement
            core.FilteredAlgebra.commutative(
                ("a", "b", "c"),
                np.array([0.5, 0.25, 0.25]),
                [[(0, 1, 2)], [(0,), (1, 2)], [(0, 1), (2,)], [(0,), (1,), (2,)]],
            )


class TestConditionalExpectation:
    def test_level_one_is_trace(self, model):
        alg = model.algebra
        a = Element(alg, np.arange(alg.dim, dtype=float))
        e = conditional_expectation(alg, 1, a)
        assert np.allclose(e.data, trace(alg, a))

    def test_top_level_is_identity(self, model):
        alg = model.algebra
        a = Element(alg, np.random.default_rng(0).standard_normal(alg.dim))
        e = conditional_expectation(alg, alg.levels, a)
        np.testing.assert_allclose(e.data, a.data, atol=1e-14)

    def test_linearity(self, model):
        alg = model.algebra
        rng = np.random.default_rng(1)
        a, b = rng.standard_normal((2, alg.dim))
        for n in range(1, alg.levels + 1):
            lhs = conditional_expectation(alg, n, Element(alg, 2.0 * a - 3.0 * b)).data
            rhs = (
                2.0 * conditional_expectation(alg, n, Element(alg, a)).data
                - 3.0 * conditional_expectation(alg, n, Element(alg, b)).data
            )
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_matrix_expectation_is_block_form(self):
        alg = UhfModel.build(3).algebra
        rng = np.random.default_rng(2)
        g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        a = Element(alg, (g + g.conj().T) / 2.0)
        e = conditional_expectation(alg, 2, a).data
        # output lives in M_2 tensor 1_4
        b = e[::4, ::4]
        np.testing.assert_allclose(e, np.kron(b, np.eye(4)), atol=1e-12)


class TestSeminorm:
    def test_unit_has_zero_seminorm(self, model):
        unit = Element(model.algebra, np.ones(model.algebra.dim))
        assert lip_seminorm(model.algebra, GEOM, unit).value == 0.0

    def test_scaling(self, model):
        alg = model.algebra
        a = np.random.default_rng(4).standard_normal(alg.dim)
        base = lip_seminorm(alg, GEOM, Element(alg, a)).value
        assert lip_seminorm(alg, GEOM, Element(alg, -2.5 * a)).value == pytest.approx(2.5 * base, rel=1e-12)

    @given(st.floats(-10, 10))
    @settings(max_examples=30, deadline=None)
    def test_translation_invariance(self, shift):
        model = IntervalModel.build(6)
        alg = model.algebra
        a = np.linspace(-1.0, 1.0, alg.dim)
        base = lip_seminorm(alg, GEOM, Element(alg, a)).value
        shifted = lip_seminorm(alg, GEOM, Element(alg, a + shift)).value
        assert shifted == pytest.approx(base, abs=1e-10)

    def test_report_terms_length(self, model):
        rep = lip_seminorm(model.algebra, GEOM, instances.phi(model, 2))
        assert len(rep.terms) == model.algebra.levels
        assert rep.value == max(rep.terms)


class TestBetaSequence:
    def test_positivity_enforced(self):
        beta = BetaSequence(lambda n: 1.0 - 0.3 * n, monotone=False, name="bad")
        with pytest.raises(ValueError):
            beta(4)

    def test_monotone_validation(self):
        vals = [1.0, 2.0, 0.5]
        assert not BetaSequence.from_values(vals).monotone
        beta = BetaSequence(lambda n: vals[n - 1], monotone=True, name="claims-monotone")
        with pytest.raises(ValueError):
            beta.validate(3)

    def test_from_element(self, model):
        a = instances.p1(model, cutoff=30)
        beta = beta_from_element(model.algebra, a, 6)
        for n in range(1, 7):
            assert beta(n) == pytest.approx((4.0 / 3.0) * 2.0 ** -n, rel=1e-12)
        bsq = beta_squared_from_element(model.algebra, a, 6)
        assert bsq(3) == pytest.approx(beta(3) ** 2, rel=1e-12)

    def test_zero_residual_rejected(self, model):
        flat = Element(model.algebra, np.ones(model.algebra.dim))
        with pytest.raises(ZeroResidual):
            beta_from_element(model.algebra, flat, 4)


class TestDomainReport:
    def test_running_values(self, model):
        a = instances.p1(model, cutoff=30)
        rep = domain_separation_report(model.algebra, a, 10)
        assert max(abs(v - 1.0) for v in rep.l_beta_running) < 1e-12
        # running seminorm under the squared residuals doubles each level
        ratios = [b / a for a, b in zip(rep.l_beta_sq_running, rep.l_beta_sq_running[1:])]
        assert all(r == pytest.approx(2.0, rel=1e-12) for r in ratios)

    def test_residual_at_level(self, model):
        a = instances.phi(model, 3)
        assert residual(model.algebra, a, model.algebra.levels) == 0.0
        assert residual(model.algebra, a, 1) == pytest.approx(sup_norm(a), rel=1e-12)
