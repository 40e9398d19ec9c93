import numpy as np
import pytest

from vertexirf import HModule, ModuliConfig, WeightKey, WeightVector
from vertexirf.config import format_complex, parse_complex
from vertexirf.errors import DomainError, WeightError
from vertexirf.sampling import lambda_grid, sample_points
from vertexirf.tensorlegs import (dyn_columns, heisenberg_A_B, leg_embed,
                                  permutation_matrix)

CFG = ModuliConfig()


def test_heisenberg_relations():
    for n in (2, 3, 4):
        A, B = heisenberg_A_B(n)
        xi = np.exp(2j * np.pi / n)
        eye = np.eye(n)
        assert np.allclose(np.linalg.matrix_power(A, n), eye)
        assert np.allclose(np.linalg.matrix_power(B, n), eye)
        # the two generators commute up to the root of unity
        assert np.allclose(A @ B, xi * (B @ A)) or np.allclose(
            B @ A, xi * (A @ B))


def test_permutation_matrix_swaps():
    n = 3
    P = permutation_matrix(n)
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal(n), rng.standard_normal(n)
    assert np.allclose(P @ np.kron(x, y), np.kron(y, x))
    assert np.allclose(P @ P, np.eye(n * n))


def test_leg_embed_matches_kron():
    rng = np.random.default_rng(5)
    M = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    dims = [2, 3, 4]
    # embed on legs (0, 1) must equal M x Id
    full = leg_embed(M, (0, 1), dims)
    assert np.allclose(full, np.kron(M, np.eye(4)))
    # embed on leg 2 must equal Id x N
    N = rng.standard_normal((4, 4))
    assert np.allclose(leg_embed(N, (2,), dims), np.kron(np.eye(6), N))
    # embedding is multiplicative
    M2 = rng.standard_normal((6, 6))
    assert np.allclose(leg_embed(M @ M2, (0, 1), dims),
                       leg_embed(M, (0, 1), dims) @ leg_embed(M2, (0, 1), dims))


def test_dyn_columns_shifts_by_column_weight():
    n = 2
    cfg = ModuliConfig(n=n)
    vec = HModule.vector(n)
    lam = WeightVector.projected(np.array([0.3 + 0.1j, -0.1 + 0.2j]))

    def eval_at(lv):
        # encode the evaluation point in the matrix so the shift is visible
        return np.full((n * n, n * n), lv.coords[0], dtype=complex)

    out = dyn_columns(eval_at, [1], [vec, vec], lam, cfg.gamma, sign=-1)
    for col in range(n * n):
        j = col % n
        lv = lam.shifted(WeightKey.omega(n, j), -cfg.gamma)
        assert np.allclose(out[:, col], lv.coords[0])


def test_weight_key_arithmetic():
    n = 3
    w0 = WeightKey.omega(n, 0)
    w1 = WeightKey.omega(n, 1)
    assert (w0 - w0).is_zero()
    assert w0 + w1 == w1 + w0
    assert -(w0 - w1) == w1 - w0
    # canonical form is translation invariant in the ambient basis
    assert WeightKey.zero(n) == w0 - w0


def test_hmodule_tensor_and_dual():
    n = 2
    vec = HModule.vector(n)
    t = vec.tensor(vec)
    assert t.dim == 4
    d = vec.dual()
    assert d.dim == n
    ws = vec.require_weights()
    assert all((-w) in d.require_weights() for w in ws)
    triv = HModule.trivial(n)
    assert triv.dim == 1
    with pytest.raises(WeightError):
        HModule(2).require_weights()


def test_weight_vector_shift_and_diff():
    lam = WeightVector.projected(np.array([0.5, -0.25, 0.1]))
    assert abs(sum(lam.coords)) < 1e-12
    sh = lam.shifted(WeightKey.omega(3, 0), 0.1)
    assert abs((sh.coords[0] - lam.coords[0]) - 0.1 * (1 - 1 / 3)) < 1e-12
    assert abs(lam.diff(0, 1) - (lam.coords[0] - lam.coords[1])) < 1e-15


def test_parse_complex_round_trip():
    for z in (1.5 + 2.5j, -0.25j, 3.0, -1.0 - 1.0j, 0.0):
        assert parse_complex(format_complex(z)) == z
    assert parse_complex("2i") == 2j
    assert parse_complex("-i") == -1j
    with pytest.raises(ValueError):
        parse_complex("abc")
    with pytest.raises(ValueError):
        parse_complex("")


def test_config_validation():
    with pytest.raises(DomainError):
        ModuliConfig(n=1)
    with pytest.raises(DomainError):
        ModuliConfig(tau=0.3 - 1.1j)
    with pytest.raises(DomainError):
        ModuliConfig(tol=1e-12, series_tol=1e-8)
    assert ModuliConfig().with_(n=3).n == 3


def test_sampling_is_deterministic_and_respects_exclusion():
    pts1 = sample_points(CFG, 2, (0.0, CFG.gamma), count=20, stream=5)
    pts2 = sample_points(CFG, 2, (0.0, CFG.gamma), count=20, stream=5)
    assert [(p.z, p.w) for p in pts1] == [(p.z, p.w) for p in pts2]
    from vertexirf.theta import lattice_distance
    for p in pts1:
        assert lattice_distance(p.z, CFG.tau) >= CFG.exclusion
        assert lattice_distance(p.z - CFG.gamma, CFG.tau) >= CFG.exclusion
        assert abs(sum(p.lam.coords)) < 1e-12
    # unit-cell sampling stays in the requested cell
    small = sample_points(CFG, 1, (), count=10, stream=6, cell=1.0)
    for p in small:
        b = p.z.imag / CFG.tau.imag
        a = p.z.real - b * CFG.tau.real
        assert 0 <= a < 1 and 0 <= b < 1


def test_lambda_grid_deterministic():
    g1 = lambda_grid(CFG, count=4)
    g2 = lambda_grid(CFG, count=4)
    assert all(tuple(a.coords) == tuple(b.coords) for a, b in zip(g1, g2))
