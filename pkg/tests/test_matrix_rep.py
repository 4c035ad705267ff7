import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from braidprob.matrix_rep import (
    DimensionBudgetError,
    HeckeElement,
    alpha_power,
    braid_residuals,
    build_gaussian,
    check_ybe,
    flip,
    gaussian_nonexchangeability_trace,
    gaussian_omega,
    hecke_check_relations,
    hecke_product,
    hecke_q1_check,
    kron_all,
    leg_unitaries,
    normalized_trace,
    perturbed_rep,
    product_endomorphism,
    q,
    r_matrix,
    residual,
    ybe_residuals,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
I2 = np.eye(2)


class TestGaussian:
    @pytest.mark.parametrize("p,n", [(2, 3), (2, 5), (3, 3), (3, 4), (4, 3)])
    def test_relations(self, p, n):
        rep = build_gaussian(p, n)
        assert max(rep.residuals().values()) < 1e-9
        assert rep.spectral_uniformity() < 1e-9

    def test_clifford_case_anticommutes(self):
        rep = build_gaussian(2, 4)
        for a, b in itertools.combinations(rep.e, 2):
            assert residual(a @ b, -b @ a) < 1e-12

    def test_omega(self):
        assert gaussian_omega(3) == pytest.approx(np.exp(2j * np.pi / 3))
        assert gaussian_omega(4) == pytest.approx(np.exp(1j * np.pi / 4))

    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_ad_u1(self, p):
        rep = build_gaussian(p, 3)
        assert residual(rep.u[0] @ rep.e[0] @ rep.u[0].conj().T, rep.e[1]) < 1e-9

    @pytest.mark.parametrize("p", [2, 3])
    def test_alpha_shifts_generators(self, p):
        rep = build_gaussian(p, 4)
        eps = [1] * len(rep.u)
        for i in range(rep.strands - 1):
            assert residual(product_endomorphism(rep.u, eps, rep.e[i], i), rep.e[i + 1]) < 1e-9

    def test_nonexchangeability(self):
        a, b = gaussian_nonexchangeability_trace(3)
        w2 = gaussian_omega(3) ** 2
        assert a == pytest.approx(w2) and b == pytest.approx(w2.conjugate())
        assert gaussian_nonexchangeability_trace(2) == pytest.approx((-1, -1))
        a, b = gaussian_nonexchangeability_trace(4)
        assert abs(a - b) > 1e-6 and abs(abs(a) - 1) < 1e-9

    def test_budget(self, monkeypatch):
        monkeypatch.setenv("BRAIDPROB_MAX_DIM", "64")
        with pytest.raises(DimensionBudgetError):
            build_gaussian(2, 7)
        with pytest.raises(ValueError):
            build_gaussian(1, 3)


class TestYBE:
    @pytest.mark.parametrize("omega", [1, -1, 1j, np.exp(0.3j)])
    def test_r_matrix(self, omega):
        R = r_matrix(omega)
        assert check_ybe(R)
        assert max(braid_residuals(leg_unitaries([R] * 3, 4)).values()) < 1e-9

    def test_identity(self):
        assert check_ybe(np.eye(4))
        assert check_ybe(np.eye(9))

    def test_diagonal_twist_of_flip_still_solves(self):
        R = r_matrix(1)
        R[3, 3] = 2
        assert check_ybe(R)

    def test_violation_detected(self):
        R = r_matrix(1)
        R[0, 1] = 0.5
        braid_form, flipped = ybe_residuals(R)
        assert braid_form > 0.1 and flipped > 0.1
        assert not check_ybe(R)

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, 9, elements=st.floats(-3, 3)))
    def test_flip_times_diagonal(self, diag):
        assert check_ybe(flip(3) @ np.diag(diag.astype(complex)), tol=1e-8)

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            ybe_residuals(np.eye(5))

    def test_locality(self):
        us = leg_unitaries([r_matrix(-1)] * 4, 5)
        x = kron_all([np.array([[1, 2], [3, 4]]), np.eye(16)])
        for k in range(2, 5):
            assert residual(us[k - 1] @ x, x @ us[k - 1]) < 1e-12


class TestMixedShift:
    def setup_method(self):
        self.us = leg_unitaries([r_matrix(1), r_matrix(-1)], 3)
        self.x = kron_all([X, I2, I2])

    def test_shifts(self):
        a1 = alpha_power(self.us, [1, 1], self.x, 0, 1)
        a2 = alpha_power(self.us, [1, 1], self.x, 0, 2)
        assert residual(a1, kron_all([I2, X, I2])) < 1e-12
        assert residual(a2, kron_all([Z, I2, X])) < 1e-12
        assert normalized_trace(self.x @ a1 @ self.x @ a1) == pytest.approx(1)
        assert normalized_trace(self.x @ a2 @ self.x @ a2) == pytest.approx(-1)

    def test_signs(self):
        y = product_endomorphism(self.us, [-1, 1], self.x, 0)
        assert residual(y, kron_all([I2, X, I2])) < 1e-12  # flips are self-inverse

    def test_insufficient_factors(self):
        with pytest.raises(ValueError):
            product_endomorphism(self.us, [1], self.x, 2)

    def test_unlocalized_input(self):
        far = kron_all([I2, I2, X])
        with pytest.raises(ValueError):
            product_endomorphism(self.us, [1, 1], far, 0)


class TestPerturbed:
    def setup_method(self):
        self.us = leg_unitaries([flip(2)] * 3, 4)

    def test_xerox(self):
        g = kron_all([np.diag([1, 1j])] * 4)
        pr = perturbed_rep(self.us, g)
        assert pr.braid_residual < 1e-12
        assert pr.period == 2 and pr.flag and pr.ad_flag

    def test_identity(self):
        pr = perturbed_rep(self.us, np.eye(16))
        assert all(residual(a, b) == 0 for a, b in zip(pr.unitaries, self.us))
        assert not pr.flag and not pr.ad_flag

    def test_scalar_phase(self):
        pr = perturbed_rep(self.us, 1j * np.eye(16))
        assert pr.flag and not pr.ad_flag

    def test_order_two_phase_is_silent(self):
        pr = perturbed_rep(self.us, -np.eye(16))
        assert not pr.flag

    def test_non_commuting(self):
        with pytest.raises(ValueError):
            perturbed_rep(self.us, kron_all([X, I2, I2, I2]))


class TestHecke:
    def test_quadratic(self):
        t = HeckeElement.generator(1, 3)
        assert t * t == t.scale(q - 1) + HeckeElement.one(3).scale(q)

    def test_commutation_h4(self):
        g1, g3 = HeckeElement.generator(1, 4), HeckeElement.generator(3, 4)
        assert g1 * g3 == g3 * g1

    def test_braid_h3(self):
        g1, g2 = HeckeElement.generator(1, 3), HeckeElement.generator(2, 3)
        assert g1 * g2 * g1 == g2 * g1 * g2
        assert g1 * g2 != g2 * g1

    @pytest.mark.parametrize("n", range(2, 6))
    def test_relation_report(self, n):
        assert hecke_check_relations(n)["pass"]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_q_one(self, n):
        assert hecke_q1_check(n)

    def test_budget(self):
        with pytest.raises(DimensionBudgetError):
            hecke_check_relations(8)
        with pytest.raises(ValueError):
            hecke_product(HeckeElement.one(3), HeckeElement.one(4))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.permutations(range(3)), st.integers(-3, 3)), min_size=1, max_size=3),
           st.lists(st.tuples(st.permutations(range(3)), st.integers(-3, 3)), min_size=1, max_size=3),
           st.lists(st.tuples(st.permutations(range(3)), st.integers(-3, 3)), min_size=1, max_size=3))
    def test_associative(self, a, b, c):
        def elem(spec):
            out = HeckeElement.from_dict(3, {})
            for w, k in spec:
                out = out + HeckeElement.basis(w).scale(k + q)
            return out

        x, y, z = elem(a), elem(b), elem(c)
        assert (x * y) * z == x * (y * z)

    def test_evaluate(self):
        t = HeckeElement.generator(1, 2)
        assert (t * t).at(2) == {(0, 1): 2, (1, 0): 1}
