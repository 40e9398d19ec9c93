import numpy as np

from vertexirf import (BelavinRMatrix, ModuliConfig, build_S,
                       check_det_ratio, verify_irf_components,
                       verify_vertex_irf)
from vertexirf.sampling import lambda_grid
from vertexirf.theta import phi_vec

CFG = ModuliConfig(samples=25)


def test_s_columns_are_shifted_intertwining_vectors():
    lam = lambda_grid(CFG, count=1)[0]
    z = 0.4 + 0.6j
    S = build_S(z, lam, CFG)
    for j in range(CFG.n):
        col = phi_vec(z - CFG.n * lam.coords[j], CFG)
        assert np.allclose(S[:, j], col)


def test_exchange_relations():
    for n in (2, 3):
        cfg = CFG.with_(n=n)
        rb = BelavinRMatrix(cfg)
        for rep in verify_vertex_irf(cfg, rb=rb):
            assert rep.passed, (rep.check_name, rep.max_rel)


def test_exchange_relation_componentwise():
    for n in (2, 3):
        cfg = CFG.with_(n=n)
        rb = BelavinRMatrix(cfg)
        for rep in verify_irf_components(cfg, rb=rb):
            assert rep.passed, (rep.check_name, rep.max_rel)


def test_exchange_negative_controls():
    rb = BelavinRMatrix(CFG)
    reps = verify_vertex_irf(CFG, rb=rb, corrupt=True)
    assert any(not rep.passed for rep in reps)
    reps = verify_irf_components(CFG, rb=rb, swap_coefficients=True)
    offdiag = [rep for rep in reps if rep.check_name.endswith("offdiag")]
    assert offdiag and all(not rep.passed for rep in offdiag)


def test_det_ratio_constant_in_z():
    for n in (2, 3, 4):
        rep = check_det_ratio(CFG.with_(n=n))
        assert rep.passed, (n, rep.max_rel)
