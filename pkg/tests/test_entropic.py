import math

import numpy as np
import pytest

from tlchannels.channels import ChannelRec, approx_channel_pair, gamma_isometry, tl_channel_pair
from tlchannels.entropic import (
    CHANNEL,
    COMPLEMENT,
    CapacityBracket,
    Ensemble,
    capacity_bracket,
    coherent_information,
    entropy,
    holevo_chi,
    product_ensemble_bounds,
    witness_ensemble,
)
from tlchannels.jones_wenzl import in_irrep, irrep_basis
from tlchannels.qarith import check_admissible

rng = np.random.default_rng(20260808)


def random_density(d):
    A = rng.standard_normal((d, d))
    rho = A @ A.T
    return rho / np.trace(rho)


def shannon(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


class TestEntropy:
    def test_pure_state(self):
        v = rng.standard_normal(6)
        v /= np.linalg.norm(v)
        assert abs(entropy(np.outer(v, v))) < 1e-10

    @pytest.mark.parametrize("d", [1, 2, 3, 16, 64])
    def test_maximally_mixed(self, d):
        assert abs(entropy(np.eye(d) / d) - math.log2(d)) < 1e-12

    def test_binary_mixture(self):
        for p in (0.1, 0.5, 0.9):
            rho = np.diag([p, 1 - p])
            assert abs(entropy(rho) - shannon([p, 1 - p])) < 1e-12

    def test_unitary_invariance(self):
        rho = random_density(8)
        q, _ = np.linalg.qr(rng.standard_normal((8, 8)))
        assert abs(entropy(q @ rho @ q.T) - entropy(rho)) < 1e-9

    def test_natural_log_base(self):
        rho = np.eye(4) / 4
        assert abs(entropy(rho, base="e") - math.log(4)) < 1e-12

    def test_approximant_output_entropy_closed_form(self):
        # channel sends the witness mixture to (l-r) mixed bits (x) r mixed legs
        N = 3
        psi, _ = approx_channel_pair(N, (2, 1, 1))
        ens = witness_ensemble(N, (2, 1, 1))
        from tlchannels.channels import apply_channel

        H = entropy(apply_channel(psi, ens.average()))
        assert abs(H - (math.log2(N - 1) + math.log2(N))) < 1e-10

    def test_rejects_invalid_density(self):
        with pytest.raises(ValueError):
            entropy(np.diag([1.5, -0.5]))


class TestEnsemble:
    def test_validation(self):
        with pytest.raises(ValueError):
            Ensemble(np.array([0.7, 0.7]), (np.eye(2) / 2, np.eye(2) / 2))
        with pytest.raises(ValueError):
            Ensemble(np.array([1.0]), (np.diag([2.0, -1.0]),))

    def test_average(self):
        ens = Ensemble(np.array([0.25, 0.75]), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
        assert np.allclose(ens.average(), np.diag([0.25, 0.75]))


class TestWitnessEnsemble:
    def test_cup_triple_output_states(self):
        # (2,1,1) at N=3: the two states |2>, |3> on H_1
        ens = witness_ensemble(3, (2, 1, 1), side="output")
        assert len(ens) == 2
        supports = sorted(int(np.argmax(np.diag(s))) for s in ens.states)
        assert supports == [1, 2]

    def test_two_leg_output_states(self):
        # (1,1,2) at N=3: states |i,1> with i in {2,3}, all inside H_2
        ens = witness_ensemble(3, (1, 1, 2), side="output")
        assert len(ens) == 2
        iota = irrep_basis(3, 2).iota
        for s in ens.states:
            vals, vecs = np.linalg.eigh(s)
            vec = iota @ vecs[:, -1]  # lift back to H_1^(x 2)
            ok, _ = in_irrep(vec, 3, 2)
            assert ok
            idx = np.argsort(np.abs(vec))[-1]
            i, j = divmod(int(idx), 3)
            assert j == 0 and i in (1, 2)  # |21> or |31>

    @pytest.mark.parametrize("N", [2, 3, 4, 6])
    @pytest.mark.parametrize("lmk", [(2, 1, 1), (1, 1, 2), (2, 2, 2), (1, 1, 0), (0, 0, 0)])
    def test_counts(self, N, lmk):
        t = check_admissible(*lmk)
        assert len(witness_ensemble(N, t, side="output")) == (N - 1) ** (t.l - t.r)
        assert len(witness_ensemble(N, t, side="environment")) == (N - 1) ** (t.m - t.r)

    def test_degenerate_chain_at_n2(self):
        ens = witness_ensemble(2, (3, 1, 2), side="output")  # l - r = 2
        assert len(ens) == 1

    def test_all_states_unit_trace(self):
        ens = witness_ensemble(4, (2, 2, 2))
        for s in ens.states:
            assert abs(np.trace(s) - 1) < 1e-12

    def test_bad_side_rejected(self):
        with pytest.raises(ValueError):
            witness_ensemble(3, (2, 1, 1), side="sideways")


class TestCoherentInformation:
    @pytest.mark.parametrize("N", [3, 4, 5])
    def test_witness_value(self, N):
        t = check_admissible(2, 1, 1)
        psi, psi_c = approx_channel_pair(N, t)
        ens = witness_ensemble(N, t)
        ci = coherent_information(psi, psi_c, ens.average())
        assert abs(ci - math.log2(N - 1)) < 1e-9

    def test_identity_channel_gives_input_entropy(self):
        phi, phi_c = tl_channel_pair(3, (1, 0, 1))
        rho = random_density(3)
        assert abs(coherent_information(phi, phi_c, rho) - entropy(rho)) < 1e-10

    def test_cup_channel_is_symmetric(self):
        phi, phi_c = tl_channel_pair(3, (1, 1, 0))
        ci = coherent_information(phi, phi_c, np.array([[1.0]]))
        assert abs(ci) < 1e-12

    def test_mismatched_dilations_rejected(self):
        phi, _ = tl_channel_pair(3, (2, 1, 1))
        _, psi_c = approx_channel_pair(3, (2, 1, 1))
        with pytest.raises(ValueError):
            coherent_information(phi, psi_c, np.eye(3) / 3)
        with pytest.raises(ValueError):
            coherent_information(phi, phi, np.eye(3) / 3)

    def test_bounded_by_output_entropy(self):
        from tlchannels.channels import apply_channel

        phi, phi_c = tl_channel_pair(3, (2, 1, 1))
        for _ in range(3):
            rho = random_density(3)
            ci = coherent_information(phi, phi_c, rho)
            assert ci <= entropy(apply_channel(phi, rho)) + 1e-10


class TestHolevo:
    def test_single_state_ensemble(self):
        psi, _ = approx_channel_pair(3, (2, 1, 1))
        ens = Ensemble(np.array([1.0]), (np.eye(3) / 3,))
        assert holevo_chi(psi, ens) < 1e-12

    def test_witness_value(self):
        psi, _ = approx_channel_pair(3, (2, 1, 1))
        assert abs(holevo_chi(psi, witness_ensemble(3, (2, 1, 1))) - 1.0) < 1e-9

    def test_orthogonal_pure_outputs_give_shannon(self):
        phi, _ = tl_channel_pair(3, (1, 0, 1))  # identity channel on H_1
        probs = np.array([0.2, 0.3, 0.5])
        states = tuple(np.diag(row) for row in np.eye(3))
        ens = Ensemble(probs, states)
        assert abs(holevo_chi(phi, ens) - shannon(probs)) < 1e-10

    def test_bounded_by_output_dimension(self):
        psi, _ = approx_channel_pair(4, (2, 1, 1))
        chi = holevo_chi(psi, witness_ensemble(4, (2, 1, 1)))
        assert chi <= math.log2(psi.out_dim) + 1e-12


class TestCapacityBracket:
    def test_frozen_values(self):
        b = capacity_bracket(3, (2, 1, 1))
        assert abs(b.lower - 1.0) < 1e-12
        assert abs(b.upper - math.log2(3)) < 1e-12
        assert b.certified and b.certification_residual < 1e-9

    def test_degenerate_cases(self):
        for N in (3, 5):
            b = capacity_bracket(N, (1, 1, 0))
            assert b.lower == 0.0 and b.upper == 0.0
        bc = capacity_bracket(3, (2, 1, 1), which=COMPLEMENT)
        assert bc.lower == 0.0 and bc.upper == 0.0 and bc.certified

    def test_complement_bracket(self):
        bc = capacity_bracket(3, (1, 2, 1), which=COMPLEMENT)
        assert abs(bc.lower - 1.0) < 1e-12
        assert abs(bc.upper - math.log2(3)) < 1e-12
        assert bc.certified

    @pytest.mark.parametrize("N", range(3, 13))
    def test_width_formula_and_monotonicity(self, N):
        b = capacity_bracket(N, (2, 1, 1))
        assert abs(b.width - math.log2(N / (N - 1))) < 1e-12
        if N > 3:
            assert b.width < capacity_bracket(N - 1, (2, 1, 1)).width

    def test_natural_log(self):
        b = capacity_bracket(4, (2, 1, 1), base="e")
        assert abs(b.lower - math.log(3)) < 1e-9

    def test_inverted_bracket_rejected(self):
        with pytest.raises(ValueError):
            CapacityBracket(lower=1.0, upper=0.0, quantity="C", channel_tag="x")


class TestProductBounds:
    @pytest.mark.parametrize("N,d_aux", [(3, 2), (3, 3), (4, 2)])
    def test_additive_lower(self, N, d_aux):
        pb = product_ensemble_bounds(N, (2, 1, 1), d_aux)
        want = math.log2(N - 1) + math.log2(d_aux)
        assert abs(pb.lower - want) < 1e-9
        assert abs(pb.upper - (math.log2(N) + math.log2(d_aux))) < 1e-12
        assert pb.certified

    def test_d_aux_one_reduces_to_bracket(self):
        pb = product_ensemble_bounds(3, (2, 1, 1), 1)
        b = capacity_bracket(3, (2, 1, 1))
        assert abs(pb.lower - b.lower) < 1e-9
        assert abs(pb.upper - b.upper) < 1e-12

    def test_collapsed_bracket(self):
        pb = product_ensemble_bounds(3, (1, 1, 0), 4)
        assert abs(pb.lower - 2.0) < 1e-9
        assert abs(pb.upper - 2.0) < 1e-12

    def test_channel_tensor_structure(self):
        # the enlarged dilation really is (approximant (x) identity)
        from tlchannels.channels import apply_channel, tensor_with_identity

        iso = tensor_with_identity(gamma_isometry(3, (2, 1, 1)), 2)
        big = ChannelRec(iso, "environment")
        small = ChannelRec(gamma_isometry(3, (2, 1, 1)), "environment")
        rho, sigma = random_density(3), random_density(2)
        got = apply_channel(big, np.kron(rho, sigma))
        assert np.abs(got - np.kron(apply_channel(small, rho), sigma)).max() < 1e-12
