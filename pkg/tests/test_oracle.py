import math

import numpy as np
import pytest

from radialweyl.oracle import (
    OracleTruncationError,
    PhasePoint,
    WaveFunction,
    hermite_state,
    matrix_element,
    matrix_element_with_error,
    multi_indices,
    oracle_report,
    pairing,
    support_radius,
    translate,
    translation_check,
    wigner,
    wigner_closed_form,
)
from radialweyl.orthopoly import MultiIndex
from radialweyl.spectral import eigenvalue
from radialweyl.symbols import builtin_profile

OME = builtin_profile("one_minus_exp")
GRID5 = np.linspace(-2.0, 2.0, 5)


class TestWigner:
    def test_ground_state_gaussian(self):
        f = hermite_state((0,))
        for x in GRID5:
            for xi in GRID5:
                w = wigner(f, f, PhasePoint((x,), (xi,)))
                assert w == pytest.approx(2 * math.exp(-(x * x + xi * xi)), abs=1e-12)

    def test_first_state_at_origin(self):
        f = hermite_state((1,))
        assert wigner(f, f, PhasePoint((0.0,), (0.0,))).real == pytest.approx(-2.0, abs=1e-12)

    def test_zero_momentum_is_real(self):
        f, g = hermite_state((2,)), hermite_state((3,))
        for x in GRID5:
            assert abs(wigner(f, g, PhasePoint((x,), (0.0,))).imag) <= 1e-13

    @pytest.mark.parametrize("n", range(4))
    @pytest.mark.parametrize("h", [1.0, 0.5])
    def test_closed_form_grid(self, n, h):
        f = hermite_state((n,), h)
        for x in GRID5:
            for xi in GRID5:
                w = wigner(f, f, PhasePoint((x,), (xi,)), h)
                assert abs(w - wigner_closed_form((n,), np.array([x]), np.array([xi]), h)) <= 1e-8

    def test_two_dimensional_closed_form(self):
        f = hermite_state((1, 2))
        Z = PhasePoint((0.3, -0.7), (0.5, 0.1))
        expected = wigner_closed_form((1, 2), np.array(Z.z), np.array(Z.zeta))
        assert abs(wigner(f, f, Z, n_points=80) - expected) <= 1e-8

    def test_conjugate_symmetry(self):
        f, g = hermite_state((1,)), hermite_state((2,))
        Z = PhasePoint((0.4,), (-0.9,))
        assert wigner(f, g, Z) == pytest.approx(np.conj(wigner(g, f, Z)), abs=1e-13)

    def test_limits(self):
        with pytest.raises(ValueError):
            wigner(hermite_state((0, 0, 0)), hermite_state((0, 0, 0)), PhasePoint((0, 0, 0), (0, 0, 0)))
        with pytest.raises(ValueError):
            wigner(lambda x: x[..., 0], lambda x: x[..., 0], PhasePoint((0.0,), (0.0,)))


def test_truncation_detected():
    f = hermite_state((3,))
    narrow = WaveFunction(f.factors, f.center, f.momentum, 2.0, "narrow")
    with pytest.raises(OracleTruncationError):
        pairing(lambda x, xi: np.ones(np.broadcast_shapes(x.shape, xi.shape)[:-1]), narrow, narrow, 1.0)


def test_support_radius_is_tail_bound():
    from radialweyl.orthopoly import hermite_table
    r = support_radius(4)
    x = np.linspace(r, r + 20, 200)
    assert np.max(np.abs(hermite_table(4, x))) <= 1e-15
    assert support_radius(10) > r


class TestPairingNormalization:
    # Op(x) is multiplication by x and Op(xi) is -i h d/dx; with
    # x H_0 = H_1 / sqrt 2 and H_0' = -H_1 / sqrt 2 this fixes the
    # normalization and the sign of the phase.
    f0, f1 = hermite_state((0,)), hermite_state((1,))

    def test_position(self):
        assert pairing(lambda x, xi: x[..., 0] + 0 * xi[..., 0], self.f0, self.f1, 1.0) == pytest.approx(
            1 / math.sqrt(2), abs=1e-12)

    def test_momentum(self):
        assert pairing(lambda x, xi: xi[..., 0] + 0 * x[..., 0], self.f0, self.f1, 1.0) == pytest.approx(
            1j / math.sqrt(2), abs=1e-12)

    def test_hermitian(self):
        sym = lambda x, xi: x[..., 0] * xi[..., 0] + x[..., 0] ** 2 + np.sin(xi[..., 0])  # noqa: E731
        f, g = hermite_state((1,)), hermite_state((2,))
        assert pairing(sym, f, g, 1.0) == pytest.approx(np.conj(pairing(sym, g, f, 1.0)), abs=1e-12)


class TestMatrixElements:
    def test_constant_is_identity(self):
        one = builtin_profile("constant")
        for a in range(4):
            for b in range(4):
                assert matrix_element(one, (a,), (b,), 1, 1.0) == pytest.approx(float(a == b), abs=1e-10)

    @pytest.mark.parametrize("profile", ["one_minus_exp", "tanh", "rational"])
    def test_diagonal_and_off_diagonal(self, profile):
        prof = builtin_profile(profile)
        for a in range(5):
            for b in range(5):
                v = matrix_element(prof, (a,), (b,), 1, 1.0)
                if a == b:
                    assert abs(v - eigenvalue(prof, a, 1, 1.0)) <= 1e-6
                    assert abs(v.imag) <= 1e-12
                else:
                    assert abs(v) <= 1e-8

    def test_small_h(self):
        for a in range(3):
            v = matrix_element(OME, (a,), (a,), 1, 0.1)
            assert abs(v - eigenvalue(OME, a, 1, 0.1)) <= 1e-6

    def test_error_estimate(self):
        value, err = matrix_element_with_error(OME, (2,), (2,), 1, 1.0)
        assert err <= 1e-10 and abs(value - eigenvalue(OME, 2, 1, 1.0)) <= 1e-10

    def test_two_dimensional(self):
        for alpha, beta in [((1, 0), (1, 0)), ((0, 1), (1, 0)), ((1, 1), (1, 1))]:
            v = matrix_element(OME, alpha, beta, 2, 1.0)
            expected = eigenvalue(OME, sum(alpha), 2, 1.0) if alpha == beta else 0.0
            assert abs(v - expected) <= 1e-6

    def test_index_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matrix_element(OME, (1, 0), (1,), 2, 1.0)


class TestTranslation:
    def test_identity_translation(self):
        res = translation_check(OME, [0.0], [0.0], [1], [0], 1.0)
        assert res.delta == 0.0

    @pytest.mark.parametrize("x0, xi0, fi, gi", [(1.0, 0.0, 0, 0), (0.0, 0.5, 0, 1), (0.7, -0.3, 1, 1)])
    def test_covariance(self, x0, xi0, fi, gi):
        assert translation_check(OME, [x0], [xi0], [fi], [gi], 1.0).delta <= 1e-6

    def test_translate_moves_center(self):
        f = translate(hermite_state((0,)), [1.5], [0.2], 1.0)
        assert f.center == (1.5,) and f.momentum == (0.2,)
        assert abs(f(np.array([[1.5]]))[0]) == pytest.approx(math.pi ** -0.25)


def test_multi_indices():
    for d in (1, 2, 3):
        for n in range(4):
            idx = multi_indices(d, n)
            assert len(idx) == math.comb(d + n, d)
            assert len(set(idx)) == len(idx)
    assert multi_indices(2, 1) == [MultiIndex.of(0, 0), MultiIndex.of(1, 0), MultiIndex.of(0, 1)]


def test_report_constant_identity():
    rep = oracle_report(builtin_profile("constant"), 1, 1.0, max_order=2)
    assert rep.max_diagonal_delta <= 1e-10 and rep.max_off_diagonal <= 1e-10
    assert len(rep.pairs) == 9 and rep.translations == []
