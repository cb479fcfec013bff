import numpy as np
import pytest

from tlchannels.jones_wenzl import (
    adjacent_cup_image,
    in_irrep,
    irrep_basis,
    jw_projector,
)
from tlchannels.qarith import qdim
from tlchannels.tensorkit import cup_vector, op_norm

GRID = [(N, n) for N in (2, 3, 4) for n in range(1, 5)] + [(2, 5), (2, 6), (5, 2), (5, 3)]


class TestProjector:
    def test_one_leg_is_identity(self):
        assert np.array_equal(jw_projector(3, 1).entries, np.eye(3))
        assert np.array_equal(jw_projector(4, 0).entries, np.ones((1, 1)))

    def test_two_legs_closed_form(self):
        cup = cup_vector(3, 1).vector
        expected = np.eye(9) - np.outer(cup, cup) / 3
        assert np.abs(jw_projector(3, 2).entries - expected).max() < 1e-14
        assert abs(np.trace(jw_projector(3, 2).entries) - 8) < 1e-12

    @pytest.mark.parametrize("N,n", GRID)
    def test_idempotent_symmetric(self, N, n):
        p = jw_projector(N, n).entries
        assert np.abs(p @ p - p).max() < 1e-9
        assert np.abs(p - p.T).max() < 1e-11

    @pytest.mark.parametrize("N,n", GRID)
    def test_trace_is_quantum_dimension(self, N, n):
        p = jw_projector(N, n).entries
        assert abs(np.trace(p) - qdim(N, n + 1)) < 1e-6

    def test_three_legs_trace(self):
        assert abs(np.trace(jw_projector(3, 3).entries) - 21) < 1e-9

    @pytest.mark.parametrize("N,n", [(N, n) for N, n in GRID if n >= 2])
    def test_cup_annihilation_every_position(self, N, n):
        for j in range(n - 1):
            assert op_norm(adjacent_cup_image(N, n, j)) < 1e-9

    def test_cached_entries_read_only(self):
        p = jw_projector(3, 2).entries
        with pytest.raises(ValueError):
            p[0, 0] = 7.0

    def test_cap_guard(self):
        from tlchannels.tensorkit import DimensionCapError, get_dim_cap, set_dim_cap

        old = get_dim_cap()
        try:
            set_dim_cap(50)
            with pytest.raises(DimensionCapError):
                jw_projector(7, 9)
        finally:
            set_dim_cap(old)


class TestIrrepBasis:
    def test_one_leg(self):
        b = irrep_basis(3, 1)
        assert b.iota.shape == (3, 3)
        assert np.abs(b.iota @ b.iota.T - np.eye(3)).max() < 1e-12

    def test_n2_complement_of_cup(self):
        # at N=2 the basis spans the 3-dim complement of the cup |11> + |22>
        b = irrep_basis(2, 2)
        assert b.iota.shape == (4, 3)
        cup = cup_vector(2, 1).vector
        assert np.abs(b.iota.T @ cup).max() < 1e-12

    @pytest.mark.parametrize("N,n", [(2, 2), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)])
    def test_orthonormal_and_reconstructs(self, N, n):
        b = irrep_basis(N, n)
        p = jw_projector(N, n).entries
        assert b.dim == qdim(N, n + 1)
        assert np.abs(b.iota.T @ b.iota - np.eye(b.dim)).max() < 1e-9
        assert np.abs(b.iota @ b.iota.T - p).max() < 1e-9

    @pytest.mark.parametrize("N,n", [(3, 2), (2, 3)])
    def test_orthonormalization_route_independence(self, N, n):
        # eigenvector-based orthonormalization must give the same projector
        b = irrep_basis(N, n)
        p = jw_projector(N, n).entries
        vals, vecs = np.linalg.eigh(p)
        alt = vecs[:, vals > 0.5]
        assert alt.shape == b.iota.shape
        assert np.abs(alt @ alt.T - b.iota @ b.iota.T).max() < 1e-9

    def test_deterministic(self):
        a = irrep_basis(3, 3).iota
        irrep_basis.cache_clear()
        jw_projector.cache_clear()
        b = irrep_basis(3, 3).iota
        assert np.array_equal(a, b)


class TestMembership:
    def test_adjacent_distinct_chain_is_member(self):
        e = np.zeros(9)
        e[1] = 1.0  # |12>
        ok, resid = in_irrep(e, 3, 2)
        assert ok and resid < 1e-12

    def test_repeated_index_not_member(self):
        e = np.zeros(9)
        e[0] = 1.0  # |11>
        ok, resid = in_irrep(e, 3, 2)
        assert not ok
        assert resid > 0.5  # overlaps the cup by 1/sqrt(3)

    @pytest.mark.parametrize("N,n", [(3, 3), (2, 4), (4, 3)])
    def test_all_nonrepeating_chains_are_members(self, N, n):
        # chains with no two adjacent indices equal are killed by every cap
        dims = (N,) * n
        for idx in np.ndindex(*dims):
            if any(idx[i] == idx[i + 1] for i in range(n - 1)):
                continue
            vec = np.zeros(N**n)
            vec[np.ravel_multi_index(idx, dims)] = 1.0
            ok, resid = in_irrep(vec, N, n)
            assert ok, f"chain {idx} rejected with residual {resid}"

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            in_irrep(np.zeros(9), 3, 2)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            in_irrep(np.ones(5), 3, 2)
