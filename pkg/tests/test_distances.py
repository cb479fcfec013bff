import math
from fractions import Fraction

import numpy as np
import pytest

from tlchannels.channels import approx_channel_pair, choi, tl_channel_pair
from tlchannels.distances import (
    GapReport,
    bures_upper,
    convergence_fit,
    diamond_lower,
    isometry_gap,
    projection_defect,
    projection_defect_numeric,
    projection_defect_squared,
    stinespring_matrix,
    tensor_gap_check,
)
from tlchannels.qarith import admissible_triples, check_admissible, qdim, theta
from tlchannels.tensorkit import trace_norm

rng = np.random.default_rng(20260808)

SMALL_GRID = [(N, t) for N in (3, 4, 5) for t in admissible_triples(4)]


class TestProjectionDefect:
    def test_cup_triple_has_no_defect(self):
        assert projection_defect(5, (1, 1, 0)) == 0.0

    @pytest.mark.parametrize("N", range(3, 13))
    def test_defect_is_one_over_n_for_211(self, N):
        assert abs(projection_defect(N, (2, 1, 1)) - 1 / N) < 1e-15
        assert projection_defect_squared(N, (2, 1, 1)) == Fraction(1, N * N)

    @pytest.mark.parametrize("N,t", SMALL_GRID)
    def test_closed_form_equals_numeric(self, N, t):
        assert abs(projection_defect(N, t) - projection_defect_numeric(N, t)) < 1e-9

    @pytest.mark.parametrize("N", [3, 4])
    def test_exact_rational_identity(self, N):
        for t in admissible_triples(5):
            dsq = projection_defect_squared(N, t)
            scale = qdim(N, t.k + 1) * Fraction(N) ** t.r
            assert dsq * scale + theta(N, t.l, t.m, t.k) == scale

    def test_zero_for_top_fusion(self):
        # r = 0 embeds H_(l+m) inside range(p_l (x) p_m) exactly
        for lmk in [(2, 1, 3), (1, 1, 2), (2, 2, 4)]:
            assert projection_defect(3, lmk) == 0.0


class TestIsometryGap:
    def test_cup_triple_gap_vanishes(self):
        for N in (3, 7):
            rep = isometry_gap(N, (1, 1, 0))
            assert rep.gap < 1e-12
            assert rep.defect == 0.0 and rep.coeff_dev == 0.0

    def test_frozen_211_n3(self):
        rep = isometry_gap(3, (2, 1, 1))
        # gap^2 = 2 (1 - sqrt(theta/([k+1]_q N^r))) = 2 (1 - sqrt(8/9))
        assert abs(rep.gap - math.sqrt(2 * (1 - math.sqrt(8 / 9)))) < 1e-12
        assert abs(rep.defect - 1 / 3) < 1e-15
        assert abs(rep.coeff_dev - (math.sqrt(9 / 8) - 1)) < 1e-12

    @pytest.mark.parametrize("N,t", SMALL_GRID)
    def test_triangle_inequality(self, N, t):
        rep = isometry_gap(N, t)
        assert 0 <= rep.gap <= rep.triangle_bound + 1e-10
        assert 0 <= rep.defect <= 1

    def test_gap_decays_like_one_over_n(self):
        gaps = {N: isometry_gap(N, (2, 1, 1)).gap for N in range(3, 13)}
        assert all(N * g < 1.2 for N, g in gaps.items())
        fit = convergence_fit(sorted(gaps.items()))
        assert -1.15 <= fit.slope <= -0.85

    def test_report_validation(self):
        with pytest.raises(ArithmeticError):
            GapReport(N=3, triple=check_admissible(2, 1, 1), gap=1.0, defect=0.1, coeff_dev=0.1)


class TestBuresUpper:
    def test_identical_channels(self):
        phi, _ = tl_channel_pair(3, (2, 1, 1))
        assert bures_upper(phi, phi) == 0.0

    @pytest.mark.parametrize("N,t", [(3, check_admissible(2, 1, 1)), (4, check_admissible(2, 2, 2))])
    def test_equals_gap_for_canonical_pair(self, N, t):
        phi, _ = tl_channel_pair(N, t)
        psi, _ = approx_channel_pair(N, t)
        assert abs(bures_upper(phi, psi) - isometry_gap(N, t).gap) < 1e-12

    def test_padding_invariance(self):
        # appending an unused environment dimension must not change the value
        from tlchannels.channels import ChannelRec, IsometryRec

        phi, _ = tl_channel_pair(3, (2, 1, 1))
        psi, _ = approx_channel_pair(3, (2, 1, 1))
        base = bures_upper(phi, psi)
        v = stinespring_matrix(psi)
        out, env, d = psi.out_dim, psi.traced_dim, psi.in_dim
        padded = np.zeros((out, env + 2, d))
        padded[:, :env, :] = v.reshape(out, env, d)
        iso = IsometryRec(padded.reshape(out * (env + 2), d), psi.isometry.out_dims, (env + 2,))
        assert abs(bures_upper(phi, ChannelRec(iso, "environment")) - base) < 1e-12

    def test_complement_pair(self):
        _, phi_c = tl_channel_pair(3, (2, 1, 1))
        _, psi_c = approx_channel_pair(3, (2, 1, 1))
        val = bures_upper(phi_c, psi_c)
        assert val <= isometry_gap(3, (2, 1, 1)).gap + 1e-12

    def test_dimension_mismatch_rejected(self):
        phi, _ = tl_channel_pair(3, (2, 1, 1))
        other, _ = tl_channel_pair(3, (1, 1, 2))
        with pytest.raises(ValueError):
            bures_upper(phi, other)


class TestDiamondLower:
    def test_identical_channels(self):
        phi, _ = tl_channel_pair(3, (2, 1, 1))
        assert diamond_lower(phi, phi) < 1e-14

    @pytest.mark.parametrize("N,t", [(3, t) for t in admissible_triples(3)])
    def test_matches_dense_choi_difference(self, N, t):
        phi, _ = tl_channel_pair(N, t)
        psi, _ = approx_channel_pair(N, t)
        factored = diamond_lower(phi, psi)
        dense = trace_norm(choi(phi).entries - choi(psi).entries) / phi.in_dim
        assert abs(factored - dense) < 1e-10

    @pytest.mark.parametrize("N,t", SMALL_GRID)
    def test_sandwich(self, N, t):
        phi, _ = tl_channel_pair(N, t)
        psi, _ = approx_channel_pair(N, t)
        lo = diamond_lower(phi, psi)
        up = bures_upper(phi, psi)
        assert lo / 2 <= up + 1e-10
        assert up <= isometry_gap(N, t).gap + 1e-10

    def test_decreases_with_n(self):
        vals = [diamond_lower(*_pair(N)) for N in range(3, 9)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        fit = convergence_fit([(N, v) for N, v in zip(range(3, 9), vals)])
        assert fit.slope < -0.8


def _pair(N):
    phi, _ = tl_channel_pair(N, (2, 1, 1))
    psi, _ = approx_channel_pair(N, (2, 1, 1))
    return phi, psi


class TestTensorGapCheck:
    def test_trivial_aux(self):
        assert abs(tensor_gap_check(3, (2, 1, 1), 1) - isometry_gap(3, (2, 1, 1)).gap) < 1e-12

    def test_identity_aux(self):
        assert abs(tensor_gap_check(3, (2, 1, 1), 2) - isometry_gap(3, (2, 1, 1)).gap) < 1e-10

    def test_rectangular_random_isometry(self):
        aux = np.linalg.qr(rng.standard_normal((4, 2)))[0]
        assert abs(tensor_gap_check(3, (2, 1, 1), 2, aux) - isometry_gap(3, (2, 1, 1)).gap) < 1e-10

    def test_non_isometry_rejected(self):
        with pytest.raises(ValueError):
            tensor_gap_check(3, (2, 1, 1), 2, np.ones((2, 2)))


class TestConvergenceFit:
    def test_exact_inverse_law(self):
        fit = convergence_fit([(n, 0.37 / n) for n in range(3, 10)])
        assert abs(fit.slope + 1.0) < 1e-9
        assert abs(fit.intercept - math.log(0.37)) < 1e-9
        assert fit.residual < 1e-12

    def test_exact_inverse_square_law(self):
        fit = convergence_fit([(n, 2.0 / n**2) for n in range(3, 10)])
        assert abs(fit.slope + 2.0) < 1e-9

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            convergence_fit([(3, 0.1), (4, 0.05), (5, 0.02)])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            convergence_fit([(3, 0.1), (4, 0.0), (5, 0.1), (6, 0.1)])
