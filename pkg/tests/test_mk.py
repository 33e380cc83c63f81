import numpy as np
import pytest

from qmetric import (
    AgreementViolated,
    BetaSequence,
    CantorModel,
    IntervalModel,
    MatrixKindUnsupported,
    UhfModel,
    check_agreement,
    lip_seminorm,
    mk_distance,
    pure_state,
    push_agreement,
    random_state,
    sandwich_bounds,
)
from qmetric import instances, mk

GEOM = BetaSequence.geometric(0.5)


@pytest.fixture(scope="module")
def model():
    return IntervalModel.build(8)


class TestStates:
    def test_pure_state_evaluates_points(self, model):
        mu = pure_state(model.algebra, "1/4")
        f = instances.phi(model, 1)
        assert mu(f) == f.data[model.point_index(instances.Fraction(1, 4))]

    def test_unknown_point_rejected(self, model):
        with pytest.raises(ValueError):
            pure_state(model.algebra, "nope")

    def test_random_state_normalized(self, model):
        mu = random_state(model.algebra, 13)
        unit = instances.phi(model, 0)
        assert mu(unit) == pytest.approx(1.0, abs=1e-12)

    def test_random_state_deterministic(self, model):
        a = random_state(model.algebra, 5)
        b = random_state(model.algebra, 5)
        np.testing.assert_array_equal(a.data, b.data)

    def test_matrix_state_normalized(self):
        alg = UhfModel.build(3).algebra
        mu = random_state(alg, 1)
        assert np.trace(mu.data).real == pytest.approx(1.0, abs=1e-12)


class TestAgreement:
    def test_push_then_check(self, model):
        alg = model.algebra
        mu = random_state(alg, 0)
        nu = random_state(alg, 1)
        for n in range(1, alg.levels + 1):
            a, b = push_agreement(alg, mu, nu, n)
            assert check_agreement(alg, a, b, n) <= 1e-12

    def test_push_matrix_unsupported(self):
        alg = UhfModel.build(2).algebra
        mu, nu = random_state(alg, 0), random_state(alg, 1)
        with pytest.raises(MatrixKindUnsupported):
            push_agreement(alg, mu, nu, 2)


class TestDistance:
    def test_self_distance_zero(self, model):
        mu = pure_state(model.algebra, "1/2")
        assert mk_distance(model.algebra, GEOM, mu, mu).value == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self, model):
        alg = model.algebra
        mu, nu = random_state(alg, 2), random_state(alg, 3)
        d1 = mk_distance(alg, GEOM, mu, nu).value
        d2 = mk_distance(alg, GEOM, nu, mu).value
        assert d1 == pytest.approx(d2, abs=1e-10)

    def test_witness_in_unit_ball(self, model):
        alg = model.algebra
        mu, nu = pure_state(alg, "1"), pure_state(alg, IntervalModel.TAIL_LABEL)
        rep = mk_distance(alg, GEOM, mu, nu)
        w = rep.witness
        assert lip_seminorm(alg, GEOM, w).value <= 1.0 + 1e-9
        assert mu(w) - nu(w) == pytest.approx(rep.value, abs=1e-10)

    def test_matches_closed_form(self, model):
        alg = model.algebra
        mu = pure_state(alg, "1")
        nu = pure_state(alg, "1/4")
        want = instances.closed_form_mk(model, GEOM, instances.Fraction(1), instances.Fraction(1, 4))
        assert mk_distance(alg, GEOM, mu, nu).value == pytest.approx(want, abs=1e-10)

    def test_cantor_distance(self):
        model = CantorModel.build(3)
        alg = model.algebra
        v = mk_distance(alg, GEOM, pure_state(alg, "010"), pure_state(alg, "011")).value
        assert v == pytest.approx(instances.cantor_closed_form_mk(model, GEOM, "010", "011"), abs=1e-10)

    def test_matrix_distance_unsupported(self):
        alg = UhfModel.build(2).algebra
        mu, nu = random_state(alg, 0), random_state(alg, 1)
        with pytest.raises(MatrixKindUnsupported):
            mk_distance(alg, GEOM, mu, nu)


class TestSandwich:
    def test_bounds_bracket_lp(self, model):
        alg = model.algebra
        n = 3
        w = instances.phi(model, n)
        mu, nu = push_agreement(alg, random_state(alg, 8), random_state(alg, 9), n)
        lower, upper = sandwich_bounds(alg, GEOM, mu, nu, w, n)
        value = mk_distance(alg, GEOM, mu, nu).value
        assert lower <= value + 1e-9
        assert value <= upper + 1e-9
        assert upper == pytest.approx(2.0 * GEOM(n))

    def test_disagreeing_pair_rejected(self, model):
        alg = model.algebra
        mu = pure_state(alg, "1")
        nu = pure_state(alg, IntervalModel.TAIL_LABEL)
        with pytest.raises(AgreementViolated):
            sandwich_bounds(alg, GEOM, mu, nu, instances.phi(model, 2), 2)

    def test_bad_witness_rejected(self, model):
        alg = model.algebra
        n = 2
        mu, nu = push_agreement(alg, random_state(alg, 4), random_state(alg, 5), n)
        w = instances.phi(model, 5)  # wrong level: seminorm is not 1/beta(2)
        with pytest.raises(mk.WitnessMismatch):
            sandwich_bounds(alg, GEOM, mu, nu, w, n)
