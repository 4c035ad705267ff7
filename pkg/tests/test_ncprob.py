import numpy as np
import pytest

from braidprob.matrix_rep import build_gaussian, flip, kron_all, leg_unitaries, r_matrix
from braidprob.ncprob import (
    FiniteProbSpace,
    bernoulli_factorization_check,
    check_independence,
    commuting_square_grid,
    conditional_expectation,
    generated_algebra,
    interval_algebra,
    is_commuting_square,
    relative_commutant,
    span_basis,
    tower_commutant,
    verdict,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
I2 = np.eye(2)


def rotation(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]], dtype=complex)


@pytest.fixture(scope="module")
def gauss5():
    rep = build_gaussian(2, 5)
    return rep, FiniteProbSpace(rep.dim, list(rep.e))


def test_verdict_bands():
    assert verdict(1e-12) == "pass"
    assert verdict(1e-6) == "review"
    assert verdict(0.1) == "fail"


def test_generated_algebra_dimensions():
    assert len(generated_algebra([Z], 2)) == 2
    assert len(generated_algebra([X, Z], 2)) == 4
    assert len(generated_algebra([], 3)) == 1
    assert len(span_basis([X, 2 * X, Z])) == 2


def test_density_validation():
    with pytest.raises(ValueError):
        FiniteProbSpace(2, density=np.diag([1.0, 0.0]))
    with pytest.raises(ValueError):
        FiniteProbSpace(2, density=np.eye(2))


class TestConditionalExpectation:
    @pytest.mark.parametrize("density", [None, np.diag([0.7, 0.3])])
    def test_onto_diagonal(self, density):
        sp = FiniteProbSpace(2, density=density)
        E = conditional_expectation(sp, sp.subalgebra([Z]))
        assert np.allclose(E(X), 0)
        assert np.allclose(E(Z), Z)
        assert max(E.residuals().values()) < 1e-8

    def test_scalars_give_state(self):
        rho = np.diag([0.5, 0.25, 0.25])
        sp = FiniteProbSpace(3, density=rho)
        x = np.arange(9, dtype=complex).reshape(3, 3)
        E = conditional_expectation(sp, sp.scalars())
        assert np.allclose(E(x), sp.state(x) * np.eye(3))

    def test_tensor_leg(self):
        sp = FiniteProbSpace(4)
        E = conditional_expectation(sp, sp.subalgebra([kron_all([X, I2]), kron_all([Z, I2])]))
        a = np.array([[1, 2], [3, 4]], dtype=complex)
        assert np.allclose(E(kron_all([a, a])), np.trace(a) / 2 * kron_all([a, I2]))
        assert max(E.residuals().values()) < 1e-8

    def test_gaussian_subalgebra(self, gauss5):
        rep, sp = gauss5
        E = conditional_expectation(sp, interval_algebra(sp, rep.e, 0, 1))
        assert max(E.residuals().values()) < 1e-8
        assert np.allclose(E(rep.e[0] @ rep.e[2]), 0)

    def test_rejects_non_star_closed(self):
        sp = FiniteProbSpace(2)
        nilpotent = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(ValueError):
            conditional_expectation(sp, sp.span([np.eye(2), nilpotent]))

    def test_rejects_outside_ambient(self):
        sp = FiniteProbSpace(2, [Z])
        with pytest.raises(ValueError):
            sp.subalgebra([X])


class TestCommutingSquare:
    def test_tensor_legs(self):
        sp = FiniteProbSpace(4)
        N1 = sp.subalgebra([kron_all([X, I2]), kron_all([Z, I2])])
        N2 = sp.subalgebra([kron_all([I2, X]), kron_all([I2, Z])])
        rep = is_commuting_square(sp, sp.scalars(), N1, N2)
        assert rep.passed and rep.consistent

    def test_unbiased_masas(self):
        sp = FiniteProbSpace(2)
        rep = is_commuting_square(sp, sp.scalars(), sp.subalgebra([Z]), sp.subalgebra([X]))
        assert rep.passed

    def test_tilted_masas_fail(self):
        sp = FiniteProbSpace(2)
        R = rotation(0.3)
        rep = is_commuting_square(sp, sp.scalars(), sp.subalgebra([Z]), sp.subalgebra([R @ Z @ R.T]))
        assert not rep.passed and rep.consistent
        assert verdict(rep.residual_iv) == "fail"

    def test_corner_must_be_inside(self):
        sp = FiniteProbSpace(2)
        with pytest.raises(ValueError):
            is_commuting_square(sp, sp.subalgebra([X]), sp.subalgebra([Z]), sp.algebra)

    def test_gaussian_grid(self, gauss5):
        rep, sp = gauss5
        cells = commuting_square_grid(sp, rep.e, 2)
        assert len(cells) == 6
        assert all(c.passed and c.consistent for c in cells.values())

    def test_grid_needs_generators(self, gauss5):
        rep, sp = gauss5
        with pytest.raises(ValueError):
            commuting_square_grid(sp, rep.e, 4)


class TestIndependence:
    def test_tensor_legs(self):
        sp = FiniteProbSpace(4)
        N1 = sp.subalgebra([kron_all([X, I2]), kron_all([Z, I2])])
        N2 = sp.subalgebra([kron_all([I2, X]), kron_all([I2, Z])])
        rep = check_independence(sp, sp.scalars(), N1, N2)
        assert rep.passed and rep.witness is None

    def test_gaussian_neighbours(self, gauss5):
        rep, sp = gauss5
        A0 = sp.subalgebra([rep.e[0]])
        A1 = sp.subalgebra([rep.u[0] @ rep.e[0] @ rep.u[0].conj().T])
        assert check_independence(sp, sp.scalars(), A0, A1).passed

    def test_same_algebra_fails(self):
        sp = FiniteProbSpace(2)
        D = sp.subalgebra([Z])
        rep = check_independence(sp, sp.scalars(), D, D)
        assert not rep.passed
        assert rep.witness is not None
        assert rep.as_json()["verdict"] == "fail"

    def test_over_self_is_trivial(self):
        sp = FiniteProbSpace(2)
        D = sp.subalgebra([Z])
        assert check_independence(sp, D, D, D).passed


class TestCommutant:
    def test_empty_set(self):
        sp = FiniteProbSpace(3)
        assert relative_commutant(sp, []).dim == 9

    def test_full_matrix_algebra(self):
        sp = FiniteProbSpace(2)
        assert relative_commutant(sp, [X, Z]).dim == 1

    def test_tensor_leg(self):
        sp = FiniteProbSpace(4)
        comm = relative_commutant(sp, [kron_all([X, I2]), kron_all([Z, I2])])
        expected = sp.subalgebra([kron_all([I2, X]), kron_all([I2, Z])])
        assert sp.same_span(comm, expected) < 1e-8

    def test_within(self):
        sp = FiniteProbSpace(4)
        within = sp.subalgebra([kron_all([Z, I2]), kron_all([I2, Z])])
        comm = relative_commutant(sp, [kron_all([Z, Z])], within)
        assert comm.dim == 4

    @pytest.mark.parametrize("n", [0, 1])
    def test_tower(self, gauss5, n):
        rep, sp = gauss5
        assert tower_commutant(sp, rep.e, rep.u, n, 5) < 1e-8

    def test_tower_bounds(self, gauss5):
        rep, sp = gauss5
        with pytest.raises(ValueError):
            tower_commutant(sp, rep.e, rep.u, 3, 5)


class TestBernoulli:
    def test_gaussian_full_over_scalars(self):
        rep = build_gaussian(2, 6)
        sp = FiniteProbSpace(rep.dim, list(rep.e))
        eps = [1] * len(rep.u)
        r = bernoulli_factorization_check(sp, rep.u, eps, [rep.e[0]], 3, mode="full", over=sp.scalars())
        assert r.passed and r.checks > 0

    def test_mixed_shift_order(self):
        us = leg_unitaries([r_matrix(1), r_matrix(-1)], 3)
        sp = FiniteProbSpace(8)
        r = bernoulli_factorization_check(sp, us, [1, 1], [kron_all([X, I2, I2])], 2)
        assert r.passed and r.over_dim == 1

    def test_tensor_shift_over_scalars(self):
        us = leg_unitaries([flip(2)] * 2, 3)
        sp = FiniteProbSpace(8)
        gen = [kron_all([X, I2, I2]), kron_all([Z, I2, I2])]
        assert bernoulli_factorization_check(sp, us, [1, 1], gen, 2, mode="full", over=sp.scalars()).passed

    def test_boundary_commutant_is_not_trivial(self):
        # symmetric tensors commute with every flip of a finite chain
        us = leg_unitaries([flip(2)] * 2, 3)
        sp = FiniteProbSpace(8)
        r = bernoulli_factorization_check(sp, us, [1, 1], [kron_all([X, I2, I2])], 2)
        assert r.over_dim > 1 and not r.passed

    def test_vacuous_generator(self):
        us = leg_unitaries([flip(2)], 2)
        r = bernoulli_factorization_check(FiniteProbSpace(4), us, [1], [], 1)
        assert r.passed and r.checks == 0

    def test_mode_validation(self):
        us = leg_unitaries([flip(2)], 2)
        with pytest.raises(ValueError):
            bernoulli_factorization_check(FiniteProbSpace(4), us, [1], [np.eye(4)], 1, mode="partial")
