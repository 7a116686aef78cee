"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.
The real-data manifest check only runs when HOMOCLUST_REAL_CORPUS,
HOMOCLUST_REAL_INDEX, and HOMOCLUST_REAL_INVENTORY point at the real
cleaned corpus files; it is skipped otherwise.
"""

import contextlib
import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from homoclust.cli import main as cli_main
from homoclust.cluster import ClusterParams, agglomerative_ward, dbscan, mean_shift
from homoclust.dimred import (
    conditional_gaussians,
    joint_probabilities,
    kl_divergence,
    kl_gradient,
    mds_project,
    pca_project,
    tsne_project,
)
from homoclust.evaluate import adjusted_rand_index, align_labels
from oracles import align_oracle, ari_pair_oracle, dbscan_oracle, jacobi_eigh, ward_oracle


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {name}: FAIL", flush=True)
        raise
    print(f"ACCEPTANCE {name}: PASS", flush=True)


def three_blobs(rng, d, sigma, n_per):
    centers = [np.zeros(d)]
    for axis in (0, 1):
        c = np.zeros(d)
        c[axis] = 10.0
        centers.append(c)
    X = np.vstack([rng.normal(0.0, sigma, size=(n_per, d)) + c for c in centers])
    gold = tuple(100 * (i // n_per + 1) for i in range(3 * n_per))
    return X, gold


def test_dbscan_oracle_equivalence():
    with criterion("dbscan-oracle-equivalence"):
        start = time.perf_counter()
        settings = [(0.05, 2), (0.10, 3), (0.15, 4), (0.25, 6), (0.40, 10)]
        for seed in range(20):
            rng = np.random.default_rng(1000 + seed)
            d = 2 + seed % 9  # dimensions 2..10
            X = rng.uniform(0.0, 1.0, size=(200, d))
            scale = math.sqrt(d / 2.0)
            for eps_base, min_samples in settings:
                params = ClusterParams(algorithm="dbscan", eps=eps_base * scale, min_samples=min_samples)
                got = list(dbscan(X, params).labels)
                want = dbscan_oracle(X, eps_base * scale, min_samples)
                assert got == want, f"seed {seed} eps {eps_base * scale}"
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_ward_oracle_equivalence():
    with criterion("ward-oracle-equivalence"):
        start = time.perf_counter()
        for seed in range(20):
            rng = np.random.default_rng(2000 + seed)
            n = int(rng.integers(5, 51))
            d = int(rng.integers(2, 7))
            X = rng.uniform(-1.0, 1.0, size=(n, d))
            got = agglomerative_ward(X, ClusterParams(algorithm="ward", k=1))
            labels, history = ward_oracle(X, k=1)
            assert list(got.labels) == labels
            assert len(got.merge_history) == len(history) == n - 1
            for (gi, gj, gc), (wi, wj, wc) in zip(got.merge_history, history):
                assert (gi, gj) == (wi, wj)
                assert gc == pytest.approx(wc, rel=1e-9)
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_blob_recovery_all_algorithms():
    with criterion("blob-recovery"):
        rng = np.random.default_rng(7)
        X, gold = three_blobs(rng, d=10, sigma=0.1, n_per=10)
        runs = {
            "ward": agglomerative_ward(X, ClusterParams(algorithm="ward", k=3)),
            "meanshift": mean_shift(X, ClusterParams(algorithm="meanshift", bandwidth=2.0)),
            "dbscan": dbscan(X, ClusterParams(algorithm="dbscan", eps=1.0, min_samples=3)),
        }
        for name, result in runs.items():
            _, accuracy = align_labels(result.labels, gold)
            assert accuracy == 1.0, f"{name} accuracy {accuracy}"


def test_pca_identities():
    with criterion("pca-identities"):
        for seed in range(20):
            rng = np.random.default_rng(3000 + seed)
            n = int(rng.integers(6, 25))
            d = int(rng.integers(3, 8))
            X = rng.normal(size=(n, d)) @ rng.normal(size=(d, d))
            proj = pca_project(X, out_dims=2)

            centered = X - X.mean(axis=0)
            V = np.array(proj.diagnostics["components"]).T
            assert np.max(np.abs(V.T @ V - np.eye(2))) < 1e-10

            recon = np.array(proj.coords) @ V.T
            recon_error = float(np.sum((centered - recon) ** 2)) / (n - 1)
            evals, _ = jacobi_eigh(centered.T @ centered / (n - 1))
            trailing = float(np.sum(evals[2:]))
            assert abs(recon_error - trailing) < 1e-8

            shifted = pca_project(X + rng.normal(size=d) * 50.0, out_dims=2)
            assert np.max(np.abs(np.array(shifted.coords) - np.array(proj.coords))) < 1e-9


def test_smacof_stress():
    with criterion("smacof-stress"):
        for seed in range(20):
            rng = np.random.default_rng(4000 + seed)
            n = int(rng.integers(4, 20))
            d = int(rng.integers(2, 8))
            X = rng.normal(size=(n, d))
            history = mds_project(X, seed=seed).diagnostics["stress_history"]
            for before, after in zip(history, history[1:]):
                assert after <= before + 1e-12
        for seed in range(5):
            rng = np.random.default_rng(4500 + seed)
            planar = rng.uniform(-3.0, 3.0, size=(10, 2))
            final = mds_project(planar, tol=1e-13, max_iter=5000, seed=seed).diagnostics["final_stress"]
            assert final < 1e-6, f"seed {seed} stress {final}"


def test_tsne_calibration_gradient_and_convergence():
    with criterion("tsne-calibration-gradient-kl"):
        for seed in range(5):
            rng = np.random.default_rng(5000 + seed)
            X = rng.normal(size=(30, 8))
            target = 5.0
            P = conditional_gaussians(np.sum((X[:, None] - X[None, :]) ** 2, axis=2), target)
            for i in range(len(X)):
                nz = P[i][P[i] > 0]
                perp = 2.0 ** float(-(nz * np.log2(nz)).sum())
                assert abs(perp - target) <= 1e-4

        for seed in range(5):
            rng = np.random.default_rng(5100 + seed)
            n = int(rng.integers(5, 11))
            X = rng.normal(size=(n, 3))
            P = joint_probabilities(X, perplexity=2.0)
            Y = rng.normal(scale=0.5, size=(n, 2))
            analytic = kl_gradient(P, Y)
            h = 1e-6
            numeric = np.zeros_like(Y)
            for i in range(n):
                for dim in range(2):
                    plus, minus = Y.copy(), Y.copy()
                    plus[i, dim] += h
                    minus[i, dim] -= h
                    numeric[i, dim] = (kl_divergence(P, plus) - kl_divergence(P, minus)) / (2 * h)
            rel = np.linalg.norm(analytic - numeric) / np.linalg.norm(numeric)
            assert rel < 1e-5, f"seed {seed} rel {rel}"

        for seed in range(2):
            rng = np.random.default_rng(5200 + seed)
            X, _ = three_blobs(rng, d=5, sigma=0.1, n_per=10)
            diag = tsne_project(X, seed=seed, max_iter=1000).diagnostics
            assert diag["final_kl"] <= diag["kl_iter_250"]


def test_evaluation_oracles():
    with criterion("evaluation-oracles"):
        rng = np.random.default_rng(6000)
        for _ in range(200):
            n = int(rng.integers(2, 20))
            pred = rng.integers(-1, int(rng.integers(1, 6)), size=n).tolist()
            gold = (100 * rng.integers(1, int(rng.integers(2, 7)), size=n)).tolist()
            _, accuracy = align_labels(pred, gold)
            assert accuracy == pytest.approx(align_oracle(pred, gold), abs=1e-12)
            assert adjusted_rand_index(pred, gold) == pytest.approx(
                ari_pair_oracle(pred, gold), abs=1e-12
            )


def _prepare_fixtures(tmp_path, fixture_paths):
    prepared = tmp_path / "prepared"
    assert cli_main([
        "prepare",
        "--corpus", fixture_paths["corpus"],
        "--index", fixture_paths["index"],
        "--inventory", fixture_paths["inventory"],
        "--out", str(prepared),
    ]) == 0
    return prepared


def _run_fixtures(prepared, fixture_paths, results, seed="5"):
    assert cli_main([
        "run",
        "--prepared", str(prepared),
        "--embeddings", fixture_paths["embeddings"],
        "--seed", seed,
        "--out", str(results),
    ]) == 0
    return results


def test_end_to_end_determinism(tmp_path, fixture_paths):
    with criterion("end-to-end-determinism"):
        prepared = _prepare_fixtures(tmp_path, fixture_paths)
        a = _run_fixtures(prepared, fixture_paths, tmp_path / "results_a")
        b = _run_fixtures(prepared, fixture_paths, tmp_path / "results_b")
        assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
        svgs_a = sorted((a / "plots").glob("*.svg"))
        assert svgs_a, "no SVGs produced"
        for svg in svgs_a:
            assert svg.read_bytes() == (b / "plots" / svg.name).read_bytes()


def test_fixture_pipeline_verdicts(tmp_path, fixture_paths):
    with criterion("fixture-pipeline"):
        start = time.perf_counter()
        prepared = _prepare_fixtures(tmp_path, fixture_paths)
        results = _run_fixtures(prepared, fixture_paths, tmp_path / "results")
        doc = json.loads((results / "report.json").read_text())
        by_key = {(w["lemma"], w["algorithm"]): w for w in doc["words"]}
        assert by_key[("light", "ward")]["verdict"] is True
        assert by_key[("light", "ward")]["aligned_accuracy"] == 1.0
        assert by_key[("mass", "meanshift")]["verdict"] is False
        assert by_key[("mass", "dbscan")]["verdict"] is False
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


REAL_DATA_VARS = ("HOMOCLUST_REAL_CORPUS", "HOMOCLUST_REAL_INDEX", "HOMOCLUST_REAL_INVENTORY")


@pytest.mark.skipif(
    not all(os.environ.get(v) for v in REAL_DATA_VARS),
    reason="real cleaned corpus not available; set HOMOCLUST_REAL_* to enable",
)
def test_real_corpus_manifest_size(tmp_path):
    with criterion("real-corpus-37-words"):
        corpus, index, inventory = (os.environ[v] for v in REAL_DATA_VARS)
        prepared = tmp_path / "prepared_real"
        assert cli_main([
            "prepare",
            "--corpus", corpus,
            "--index", index,
            "--inventory", inventory,
            "--out", str(prepared),
        ]) == 0
        manifest = json.loads((prepared / "manifest.json").read_text())

        script = os.path.join(os.path.dirname(__file__), "..", "scripts", "count_multigroup_words.py")
        proc = subprocess.run(
            [sys.executable, script, corpus, index, inventory],
            capture_output=True,
            text=True,
            check=True,
        )
        independent_count = int(proc.stdout.strip())
        assert manifest["n_words"] == independent_count == 37
