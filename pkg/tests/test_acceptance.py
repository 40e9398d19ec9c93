"""Acceptance gate: eight criteria, each printing one PASS/FAIL line.

Run with pytest -s to see the lines; each criterion also asserts, so the
suite fails loudly when a criterion regresses.
"""

import json
import time

import numpy as np

from vertexirf import (BelavinRMatrix, ModuliConfig, build_RF,
                       canonical_intertwiner, check_reference_independence,
                       check_rll_B, check_rll_F, check_z_periodicity,
                       diagonal_solution_converse, dual_B, dual_F,
                       morphism_check_DB, proportionality, prop4_intertwiner,
                       run_suite, tensor_B, tensor_F, tensor_intertwiners,
                       vector_rep_B, vector_rep_F, verify_belavin_properties,
                       verify_irf_components, verify_vertex_irf)
from vertexirf.cli import main, report_to_dict
from vertexirf.errors import SingularFactorError
from vertexirf.sampling import lambda_grid
from vertexirf.tensorlegs import permutation_matrix

W1, W2, W3 = 0.23 + 0.31j, 0.87 + 0.64j, 1.41 + 0.19j


def _verdict(num, label, ok, elapsed, cap, detail=""):
    status = "PASS" if ok and elapsed < cap else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"criterion {num} [{label}]: {status} "
          f"[{elapsed:.2f}s / cap {cap:.0f}s]{extra}")
    assert ok, f"criterion {num}: residual bound violated {detail}"
    assert elapsed < cap, f"criterion {num}: runtime {elapsed:.2f}s over cap"


def test_criterion_1_theta_suite():
    t0 = time.perf_counter()
    cfg = ModuliConfig(samples=100)
    report = run_suite("theta", cfg)
    worst = max(r.max_rel for r in report.reports)
    ok = all(r.max_rel < 1e-9 for r in report.reports)
    _verdict(1, "theta", ok, time.perf_counter() - t0, 1.0,
             f"worst max_rel {worst:.2e}")


def test_criterion_2_felder_suite():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for n in (2, 3):
        cfg = ModuliConfig(n=n, samples=100)
        report = run_suite("felder", cfg)
        worst = max(worst, max(r.max_rel for r in report.reports))
        ok = ok and all(r.max_rel < 1e-8 for r in report.reports)
        P = permutation_matrix(n)
        for lam in lambda_grid(cfg, count=5):
            ok = ok and np.max(np.abs(build_RF(0.0, lam, cfg) - P)) < 1e-9
    _verdict(2, "felder", ok, time.perf_counter() - t0, 10.0,
             f"worst max_rel {worst:.2e}")


def test_criterion_3_belavin_suite():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for n in (2, 3):
        cfg = ModuliConfig(n=n, samples=100)
        rb = BelavinRMatrix(cfg)
        ref = check_reference_independence(cfg, references=20, tol=1e-8)
        ok = ok and ref.passed
        worst = max(worst, ref.max_rel)
        for rep in verify_belavin_properties(cfg, rb=rb, tol=1e-8):
            if rep.check_name == "belavin-support-pattern":
                ok = ok and rep.max_rel < 1e-10
            else:
                ok = ok and rep.max_rel < 1e-8
            worst = max(worst, rep.max_rel)
        rng = np.random.default_rng(np.random.SeedSequence([2023, 2, n]))
        V = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        Vi = np.linalg.inv(V)
        X = V @ np.diag(np.exp(2j * np.pi * np.arange(2) / n)) @ Vi
        D1 = V @ np.diag(rng.standard_normal(2)
                         + 1j * rng.standard_normal(2)) @ Vi
        ok = ok and diagonal_solution_converse(cfg, X, D1, rb=rb).passed
        Ds = [rng.standard_normal((2, 2)) for _ in range(n)]
        neg = diagonal_solution_converse(cfg, X, D1, Ds=Ds, rb=rb)
        ok = ok and not neg.passed
    _verdict(3, "belavin", ok, time.perf_counter() - t0, 30.0,
             f"worst max_rel {worst:.2e}")


def test_criterion_4_vertex_irf_suite():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for n in (2, 3):
        cfg = ModuliConfig(n=n, samples=100)
        rb = BelavinRMatrix(cfg)
        for rep in (verify_vertex_irf(cfg, rb=rb)
                    + verify_irf_components(cfg, rb=rb)):
            ok = ok and rep.max_rel < 1e-8
            worst = max(worst, rep.max_rel)
        report = run_suite("vertex-irf", cfg)
        det = [r for r in report.reports if r.check_name == "irf-det-ratio"]
        ok = ok and det and det[0].max_rel < 1e-8
        worst = max(worst, det[0].max_rel)
    _verdict(4, "vertex-irf", ok, time.perf_counter() - t0, 20.0,
             f"worst max_rel {worst:.2e}")


def test_criterion_5_category_suites():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for n in (2, 3):
        cfg = ModuliConfig(n=n, samples=100)
        rb = BelavinRMatrix(cfg)
        vb1 = vector_rep_B(W1, cfg, rb=rb)
        vb2 = vector_rep_B(W2, cfg, rb=rb)
        vf1, vf2 = vector_rep_F(W1, cfg), vector_rep_F(W2, cfg)
        reps = [
            check_z_periodicity(vb1, cfg, "zp", tol=1e-8),
            check_rll_B(tensor_B(vb1, vb2, cfg), cfg, "rllB-t", rb=rb,
                        tol=1e-8),
            check_rll_B(dual_B(vb1, cfg), cfg, "rllB-d", rb=rb, tol=1e-8),
            check_rll_F(tensor_F(vf1, vf2, cfg), cfg, "rllF-t", tol=1e-8),
            check_rll_F(dual_F(vf1, cfg), cfg, "rllF-d", tol=1e-8),
        ]
        for rep in reps:
            ok = ok and rep.passed
            worst = max(worst, rep.max_rel)
    _verdict(5, "categories", ok, time.perf_counter() - t0, 30.0,
             f"worst max_rel {worst:.2e}")


def test_criterion_6_functor_suites():
    t0 = time.perf_counter()
    cfg = ModuliConfig(samples=100)
    report = run_suite("lemma1", cfg)
    reports = list(report.reports) + list(run_suite("functors", cfg).reports)
    worst = max(r.max_rel for r in reports)
    ok = all(r.max_rel < 1e-8 for r in reports)
    _verdict(6, "functors", ok, time.perf_counter() - t0, 60.0,
             f"worst max_rel {worst:.2e}")


def test_criterion_7_intertwiner_suites():
    t0 = time.perf_counter()
    cfg = ModuliConfig(samples=100)
    rb = BelavinRMatrix(cfg)
    ok = True
    worst = 0.0
    for w in (W1, W2, W3, 0.55 + 0.95j, 1.07 + 0.42j):
        src = vector_rep_B(w, cfg, rb=rb)
        from vertexirf import functor_F, functor_H
        rep = morphism_check_DB(
            functor_H(src, cfg),
            functor_F(vector_rep_F(w, cfg, twisted=True), cfg),
            prop4_intertwiner(w, cfg), cfg, count=3, tol=1e-8)
        ok = ok and rep.passed
        worst = max(worst, rep.max_rel)
    try:
        prop4_intertwiner(cfg.x + cfg.c, cfg)
        ok = False
    except SingularFactorError:
        pass
    from vertexirf import functor_F, functor_H
    vb = tensor_B(vector_rep_B(W1, cfg, rb=rb),
                  vector_rep_B(W2, cfg, rb=rb), cfg)
    vf = tensor_F(vector_rep_F(W1, cfg, twisted=True),
                  vector_rep_F(W2, cfg, twisted=True), cfg)
    rep2 = morphism_check_DB(functor_H(vb, cfg), functor_F(vf, cfg),
                             canonical_intertwiner([W1, W2], cfg), cfg,
                             count=2, tol=1e-8)
    ok = ok and rep2.passed
    worst = max(worst, rep2.max_rel)
    vb3 = tensor_B(vb, vector_rep_B(W3, cfg, rb=rb), cfg)
    vf3 = tensor_F(vf, vector_rep_F(W3, cfg, twisted=True), cfg)
    rep3 = morphism_check_DB(functor_H(vb3, cfg), functor_F(vf3, cfg),
                             canonical_intertwiner([W1, W2, W3], cfg), cfg,
                             count=2, tol=1e-7)
    ok = ok and rep3.passed
    worst = max(worst, rep3.max_rel)
    lams = lambda_grid(cfg, count=4)
    comp = tensor_intertwiners(prop4_intertwiner(W1, cfg),
                               prop4_intertwiner(W2, cfg))
    canon = canonical_intertwiner([W1, W2], cfg)
    _, std = proportionality(comp.pruned(lams), canon.pruned(lams), lams)
    ok = ok and std < 1e-7
    # negative control: dropping the shift factor breaks the morphism
    from vertexirf import DiffOp
    from vertexirf.irf import build_S
    u = W1 - cfg.x - cfg.c
    bad = DiffOp.mult_fn(cfg.n, cfg.gamma, cfg.n,
                         lambda lam: np.linalg.inv(build_S(u, lam, cfg)))
    neg = morphism_check_DB(
        functor_H(vector_rep_B(W1, cfg, rb=rb), cfg),
        functor_F(vector_rep_F(W1, cfg, twisted=True), cfg), bad, cfg,
        count=2)
    ok = ok and not neg.passed
    _verdict(7, "intertwiners", ok, time.perf_counter() - t0, 120.0,
             f"worst max_rel {worst:.2e}, ratio std {std:.2e}")


def test_criterion_8_determinism(tmp_path):
    t0 = time.perf_counter()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["--suite", "full", "--seed", "42", "--samples", "40",
            "--no-timing"]
    code_a = main(argv + ["--out", str(a)])
    code_b = main(argv + ["--out", str(b)])
    ok = code_a == 0 and code_b == 0 and a.read_bytes() == b.read_bytes()
    elapsed = time.perf_counter() - t0
    status = "PASS" if ok else "FAIL"
    print(f"criterion 8 [determinism]: {status} [{elapsed:.2f}s]")
    assert ok
