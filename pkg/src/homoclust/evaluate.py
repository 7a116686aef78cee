"""Comparison of cluster labels against gold homonym groups.

Accuracy uses the unsupervised convention: build the contingency table
between non-noise predicted clusters and gold groups, find the injective
cluster-to-group assignment maximizing matched points, and divide by the
total point count. Noise points (-1) always count as wrong.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import EmptyInput, LengthMismatch


@dataclass(frozen=True)
class WordReport:
    """Evaluation result for one (word, algorithm) pair."""

    lemma: str
    pos: str
    n_points: int
    algorithm: str
    params: dict[str, Any]
    labels: tuple[int, ...]
    gold_groups: tuple[int, ...]
    aligned_accuracy: float
    ari: float
    verdict: bool
    majority_baseline: float
    projections: dict[str, tuple[tuple[float, ...], ...]] = field(default_factory=dict)


def _check_lengths(pred: Sequence[int], gold: Sequence[int]) -> None:
    if len(pred) != len(gold):
        raise LengthMismatch(f"pred has {len(pred)} labels, gold has {len(gold)}")


def contingency_table(
    pred: Sequence[int], gold: Sequence[int]
) -> tuple[list[int], list[int], np.ndarray]:
    """Counts of points per (pred label, gold group); labels in first-appearance order."""
    pred_ids = list(dict.fromkeys(pred))
    gold_ids = list(dict.fromkeys(gold))
    table = np.zeros((len(pred_ids), len(gold_ids)), dtype=np.int64)
    pred_pos = {p: i for i, p in enumerate(pred_ids)}
    gold_pos = {g: j for j, g in enumerate(gold_ids)}
    for p, g in zip(pred, gold):
        table[pred_pos[p], gold_pos[g]] += 1
    return pred_ids, gold_ids, table


def align_labels(pred: Sequence[int], gold: Sequence[int]) -> tuple[dict[int, int], float]:
    """Best injective mapping from predicted clusters to gold groups.

    Returns (mapping, accuracy) where accuracy = matched points / all
    points; noise points are excluded from the mapping but stay in the
    denominator.
    """
    _check_lengths(pred, gold)
    if len(pred) == 0:
        raise EmptyInput("no points to align")
    keep = [(p, g) for p, g in zip(pred, gold) if p != -1]
    if not keep:
        return {}, 0.0
    pred_ids, gold_ids, table = contingency_table([p for p, _ in keep], [g for _, g in keep])
    rows, cols = linear_sum_assignment(-table)
    mapping = {pred_ids[r]: gold_ids[c] for r, c in zip(rows, cols)}
    matched = int(table[rows, cols].sum())
    return mapping, matched / len(pred)


def adjusted_rand_index(pred: Sequence[int], gold: Sequence[int]) -> float:
    """Chance-corrected partition agreement; noise is its own cluster.

    Degenerate instances where the expected index equals the maximum index
    (for example both partitions trivial) are defined as 1.0.
    """
    _check_lengths(pred, gold)
    if len(pred) < 2:
        raise EmptyInput(f"need >= 2 points, got {len(pred)}")
    _, _, table = contingency_table(pred, gold)
    n = len(pred)
    sum_cells = float(sum(c * (c - 1) / 2 for c in table.ravel()))
    sum_rows = float(sum(a * (a - 1) / 2 for a in table.sum(axis=1)))
    sum_cols = float(sum(b * (b - 1) / 2 for b in table.sum(axis=0)))
    pairs = n * (n - 1) / 2
    expected = sum_rows * sum_cols / pairs
    maximum = (sum_rows + sum_cols) / 2
    if maximum == expected:
        return 1.0
    return (sum_cells - expected) / (maximum - expected)


def homonym_decision(result) -> bool:
    """Homonymous iff clustering found at least two clusters.

    Accepts a ClusterResult or any object with a ``labels`` sequence; the
    noise label -1 never counts as a cluster.
    """
    labels = result.labels if hasattr(result, "labels") else result
    return len({l for l in labels if l >= 0}) >= 2


def majority_baseline(gold: Sequence[int]) -> float:
    """Accuracy of always guessing the word's largest gold group."""
    if not gold:
        raise EmptyInput("no gold groups")
    return Counter(gold).most_common(1)[0][1] / len(gold)


def corpus_report(word_reports: Sequence[WordReport]) -> dict[str, Any]:
    """Aggregate per-algorithm means over all word reports.

    Every surviving word is homonymous by construction, so the verdict
    confusion reduces to recall (fraction of words judged homonymous).
    """
    if not word_reports:
        raise EmptyInput("no word reports")
    by_alg: dict[str, list[WordReport]] = {}
    for wr in word_reports:
        by_alg.setdefault(wr.algorithm, []).append(wr)
    summary: dict[str, Any] = {"n_reports": len(word_reports), "per_algorithm": {}}
    for alg in sorted(by_alg):
        reports = by_alg[alg]
        summary["per_algorithm"][alg] = {
            "n_words": len(reports),
            "mean_accuracy": sum(r.aligned_accuracy for r in reports) / len(reports),
            "mean_ari": sum(r.ari for r in reports) / len(reports),
            "verdict_recall": sum(1 for r in reports if r.verdict) / len(reports),
            "mean_majority_baseline": sum(r.majority_baseline for r in reports) / len(reports),
        }
    return summary


def word_report_to_dict(report: WordReport) -> dict[str, Any]:
    """JSON-ready dict with a stable key order for golden-file comparisons."""
    return {
        "lemma": report.lemma,
        "pos": report.pos,
        "n_points": report.n_points,
        "algorithm": report.algorithm,
        "params": report.params,
        "labels": list(report.labels),
        "gold_groups": list(report.gold_groups),
        "aligned_accuracy": report.aligned_accuracy,
        "ari": report.ari,
        "verdict": report.verdict,
        "majority_baseline": report.majority_baseline,
        "projections": {
            method: [list(xy) for xy in coords]
            for method, coords in report.projections.items()
        },
    }
