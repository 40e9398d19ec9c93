import numpy as np
import pytest

from vertexirf import (BelavinRMatrix, DiffOp, HModule, ModuliConfig,
                       WeightKey, build_S, canonical_I, canonical_intertwiner,
                       check_E01_DB, check_I_structure, diffop_inverse,
                       diffop_residual, functor_F, functor_H,
                       morphism_check_DB, proportionality, prop4_intertwiner,
                       shift_exp, tensor_B, tensor_F, tensor_intertwiners,
                       tilde_S, trivial_F, twist, untilde, vector_rep_B,
                       vector_rep_F, verify_lemma1)
from vertexirf.diffops import random_diffop
from vertexirf.errors import SingularFactorError, WeightError
from vertexirf.sampling import lambda_grid

CFG = ModuliConfig(samples=25)
N, G = CFG.n, CFG.gamma
W1, W2, W3 = 0.23 + 0.31j, 0.87 + 0.64j, 1.41 + 0.19j
LAMS = lambda_grid(CFG, count=3)


def _rand_fn(rng, dim):
    base = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    freq = rng.standard_normal(N)
    return lambda lam: np.exp(
        2j * np.pi * np.real(np.dot(freq, np.asarray(lam.coords)))) * base


def test_compose_matches_apply_oracle():
    rng = np.random.default_rng(41)
    a = random_diffop(N, G, 3, rng)
    b = random_diffop(N, G, 3, rng)
    f = _rand_fn(rng, 3)
    fv = lambda lam: f(lam)[:, 0]
    for lam in LAMS:
        via_compose = a.compose(b).apply(fv, lam)
        via_apply = a.apply(lambda lv: b.apply(fv, lv), lam)
        assert np.max(np.abs(via_compose - via_apply)) < 1e-12 * (
            1 + np.max(np.abs(via_apply)))


def test_composition_associative():
    rng = np.random.default_rng(43)
    a, b, c = (random_diffop(N, G, 2, rng) for _ in range(3))
    lhs = a.compose(b).compose(c)
    rhs = a.compose(b.compose(c))
    assert diffop_residual(lhs, rhs, LAMS) < 1e-12


def test_add_and_scale():
    rng = np.random.default_rng(47)
    a = random_diffop(N, G, 2, rng)
    two_a = a.add(a)
    assert diffop_residual(two_a, a.scale(2.0), LAMS) < 1e-12


def test_shift_exp_inverse():
    vec = HModule.vector(N)
    fwd = shift_exp(+1, 0, [vec], G)
    bwd = shift_exp(-1, 0, [vec], G)
    eye = DiffOp.identity(N, G, N)
    assert diffop_residual(fwd.compose(bwd).pruned(LAMS), eye, LAMS) < 1e-14
    assert diffop_residual(bwd.compose(fwd).pruned(LAMS), eye, LAMS) < 1e-14
    with pytest.raises(ValueError):
        shift_exp(2, 0, [vec], G)


def test_tilde_matches_generic_conjugation():
    # e^{-g D} M(l) e^{g D} computed as a DiffOp triple product
    z = 0.77 + 0.41j
    vec = HModule.vector(N)
    matfun = lambda lam: build_S(z, lam, CFG)
    via_tilde = tilde_S(z, CFG)
    generic = shift_exp(-1, 0, [vec], G).compose(
        DiffOp.mult_fn(N, G, N, matfun)).compose(shift_exp(+1, 0, [vec], G))
    assert diffop_residual(via_tilde, generic.pruned(LAMS), LAMS) < 1e-12


def test_untilde_round_trip():
    z = 0.77 + 0.41j
    matfun = untilde(tilde_S(z, CFG), LAMS)
    for lam in LAMS:
        ref = build_S(z, lam, CFG)
        assert np.max(np.abs(matfun(lam) - ref)) < 1e-10 * (
            1 + np.max(np.abs(ref)))
    rng = np.random.default_rng(53)
    with pytest.raises(WeightError):
        untilde(random_diffop(N, G, N, rng, n_terms=4), LAMS)


def test_diffop_inverse():
    z = 0.77 + 0.41j
    d = tilde_S(z, CFG)
    inv = diffop_inverse(d, LAMS)
    eye = DiffOp.identity(N, G, N)
    assert diffop_residual(d.compose(inv).pruned(LAMS), eye, LAMS) < 1e-10
    # single-term operator
    m = DiffOp(N, G, N, {WeightKey.omega(N, 0):
                         lambda lam: np.diag(np.asarray(lam.coords) + 2.0)})
    minv = diffop_inverse(m, LAMS)
    assert diffop_residual(m.compose(minv).pruned(LAMS), eye, LAMS) < 1e-10


def test_twist_has_one_shift_per_auxiliary_index():
    a = vector_rep_F(W1, CFG)
    S = lambda z, lam: build_S(z - CFG.x, lam, CFG)
    Sp = lambda z, lam: build_S(z - CFG.x - CFG.c, lam, CFG)
    tw = twist(a, S, Sp, CFG)
    op = tw.L(0.91 + 0.77j)
    expected = {-WeightKey.omega(N, i) for i in range(N)}
    assert op.support(LAMS) == expected


def test_lemma1_exchange():
    S = lambda z, lam: build_S(z - CFG.x, lam, CFG)
    Sp = lambda z, lam: build_S(z - CFG.x - CFG.c, lam, CFG)
    assert verify_lemma1(vector_rep_F(W1, CFG), S, Sp, CFG, count=4).passed
    assert verify_lemma1(trivial_F(CFG), S, Sp, CFG, count=4).passed


def test_functor_images_satisfy_vertex_rll():
    rb = BelavinRMatrix(CFG)
    fa = functor_F(vector_rep_F(W1, CFG), CFG)
    assert check_E01_DB(fa, CFG, "e01-F", rb=rb).passed
    hb = functor_H(vector_rep_B(W1, CFG, rb=rb), CFG)
    assert check_E01_DB(hb, CFG, "e01-H", rb=rb).passed
    assert check_E01_DB(canonical_I(CFG), CFG, "e01-I", rb=rb).passed


def test_canonical_object_structure():
    assert check_I_structure(CFG).passed


def test_single_intertwiner():
    rb = BelavinRMatrix(CFG)
    for w in (W1, W2):
        src = functor_H(vector_rep_B(w, CFG, rb=rb), CFG)
        dst = functor_F(vector_rep_F(w, CFG, twisted=True), CFG)
        psi = prop4_intertwiner(w, CFG)
        rep = morphism_check_DB(src, dst, psi, CFG, count=3)
        assert rep.passed, rep.max_rel


def test_single_intertwiner_rejects_singular_point():
    with pytest.raises(SingularFactorError):
        prop4_intertwiner(CFG.x + CFG.c, CFG)


def _multi_pair(ws, rb):
    vb = vector_rep_B(ws[0], CFG, rb=rb)
    vf = vector_rep_F(ws[0], CFG, twisted=True)
    for w in ws[1:]:
        vb = tensor_B(vb, vector_rep_B(w, CFG, rb=rb), CFG)
        vf = tensor_F(vf, vector_rep_F(w, CFG, twisted=True), CFG)
    return functor_H(vb, CFG), functor_F(vf, CFG)


def test_canonical_intertwiner_two_and_three_legs():
    rb = BelavinRMatrix(CFG)
    src2, dst2 = _multi_pair([W1, W2], rb)
    psi2 = canonical_intertwiner([W1, W2], CFG)
    rep2 = morphism_check_DB(src2, dst2, psi2, CFG, count=2)
    assert rep2.passed, rep2.max_rel
    src3, dst3 = _multi_pair([W1, W2, W3], rb)
    psi3 = canonical_intertwiner([W1, W2, W3], CFG)
    rep3 = morphism_check_DB(src3, dst3, psi3, CFG, count=2, tol=1e-7)
    assert rep3.passed, rep3.max_rel


def test_tensor_of_intertwiners_matches_canonical():
    comp = tensor_intertwiners(prop4_intertwiner(W1, CFG),
                               prop4_intertwiner(W2, CFG))
    canon = canonical_intertwiner([W1, W2], CFG)
    mean, std = proportionality(comp.pruned(LAMS), canon.pruned(LAMS), LAMS)
    assert std < 1e-7
    assert abs(mean) > 1e-3


def test_shiftless_candidate_is_not_a_morphism():
    rb = BelavinRMatrix(CFG)
    src = functor_H(vector_rep_B(W1, CFG, rb=rb), CFG)
    dst = functor_F(vector_rep_F(W1, CFG, twisted=True), CFG)
    u = W1 - CFG.x - CFG.c
    bad = DiffOp.mult_fn(N, G, N,
                         lambda lam: np.linalg.inv(build_S(u, lam, CFG)))
    rep = morphism_check_DB(src, dst, bad, CFG, count=2)
    assert not rep.passed
    assert rep.max_rel > 1e-3
