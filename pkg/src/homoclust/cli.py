"""End-to-end pipeline driver.

Subcommands:

* ``prepare`` -- parse corpus + sense index + inventory, assign homonym
  groups, filter to multi-group word types, write per-word instance files
  and a manifest.
* ``run`` -- average embeddings per sense, cluster with each configured
  algorithm, project with each configured method, evaluate, and write
  report.json, summary.tsv, and one SVG per (word, algorithm, projection).
* ``plot`` -- re-render the SVGs from an existing report.json.

Exit codes: 0 ok, 1 usage, 2 data error. Given identical inputs, config
and seed, outputs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import corpus as corpus_mod
from . import embed as embed_mod
from .cluster import ClusterParams, run_clustering
from .dimred import run_projection
from .errors import MissingEmbeddings, TooFewPoints, WorkbenchError
from .evaluate import (
    WordReport,
    adjusted_rand_index,
    align_labels,
    corpus_report,
    homonym_decision,
    majority_baseline,
    word_report_to_dict,
)
from .viz import PlotSpec, scatter_svg

DEFAULT_ALGORITHMS = ("ward", "meanshift", "dbscan")
DEFAULT_PROJECTIONS = ("pca", "mds", "tsne")


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; every output records the seed."""

    corpus: str | None = None
    index: str | None = None
    inventory: str | None = None
    prepared: str | None = None
    embeddings: str | None = None
    out: str = "out"
    radius: int = 10
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS
    projections: tuple[str, ...] = DEFAULT_PROJECTIONS
    seed: int = 0
    jobs: int = 1
    ward_k: int | None = None
    ward_distance_threshold: float | None = None
    bandwidth: float | None = None
    quantile: float = 0.3
    eps: float | None = None
    min_samples: int = 3


def slugify(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]", "-", text)


def derive_seed(base_seed: int, *parts: str) -> int:
    """Stable 63-bit seed from the base seed and string parts; independent
    of processing order so parallel runs stay reproducible."""
    digest = hashlib.sha256("|".join([str(base_seed), *parts]).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def cmd_prepare(config: RunConfig) -> int:
    """Build the prepared dataset directory from the three input files."""
    instances = corpus_mod.parse_corpus(config.corpus)
    index = corpus_mod.parse_sense_index(config.index)
    inventory = corpus_mod.parse_inventory(config.inventory)
    grouped, tally = corpus_mod.assign_groups(instances, index, inventory)
    words = corpus_mod.filter_multigroup(grouped)

    os.makedirs(os.path.join(config.out, "words"), exist_ok=True)
    manifest_words = []
    for (lemma, pos) in sorted(words):
        ds = words[(lemma, pos)]
        rel = os.path.join("words", f"{slugify(lemma)}_{pos}.jsonl")
        with open(os.path.join(config.out, rel), "w", encoding="utf-8") as fh:
            for gi in ds.instances:
                obj = corpus_mod.instance_to_obj(gi.instance)
                obj["sense_number"] = gi.sense_number
                obj["group_id"] = gi.group_id
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
        manifest_words.append(
            {
                "lemma": lemma,
                "pos": pos,
                "n_instances": len(ds.instances),
                "attested_groups": sorted(ds.attested_groups),
                "file": rel.replace(os.sep, "/"),
            }
        )

    manifest = {
        "n_words": len(manifest_words),
        "radius": config.radius,
        "words": manifest_words,
        "skips": tally.as_dict(),
    }
    with open(os.path.join(config.out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, ensure_ascii=False)
        fh.write("\n")

    if not manifest_words:
        print("warning: no word type attests two or more homonym groups", file=sys.stderr)
    print(f"prepared {len(manifest_words)} word types -> {config.out}")
    return 0


def _cluster_params(config: RunConfig, algorithm: str, k_default: int) -> ClusterParams:
    if algorithm == "ward":
        if config.ward_distance_threshold is not None:
            return ClusterParams(
                algorithm="ward",
                distance_threshold=config.ward_distance_threshold,
                seed=config.seed,
            )
        return ClusterParams(algorithm="ward", k=config.ward_k or k_default, seed=config.seed)
    if algorithm == "meanshift":
        return ClusterParams(
            algorithm="meanshift",
            bandwidth=config.bandwidth,
            quantile=config.quantile,
            seed=config.seed,
        )
    if algorithm == "dbscan":
        return ClusterParams(
            algorithm="dbscan",
            eps=config.eps,
            quantile=config.quantile,
            min_samples=config.min_samples,
            seed=config.seed,
        )
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _params_to_dict(params: ClusterParams) -> dict:
    fields = ("k", "distance_threshold", "bandwidth", "quantile", "eps", "min_samples")
    out = {"algorithm": params.algorithm}
    relevant = {
        "ward": ("k", "distance_threshold"),
        "meanshift": ("bandwidth", "quantile"),
        "dbscan": ("eps", "quantile", "min_samples"),
    }[params.algorithm]
    for name in fields:
        if name in relevant:
            out[name] = getattr(params, name)
    return out


def _process_word(args: tuple[dict, list, RunConfig]) -> dict:
    """Cluster, project, and evaluate one word. Returns a JSON-ready blob;
    failures come back as a skip reason instead of aborting the batch."""
    entry, records, config = args
    lemma, pos = entry["lemma"], entry["pos"]
    try:
        if not records:
            raise MissingEmbeddings(f"no embedding records for {lemma}/{pos}")
        averaged = embed_mod.average_by_sense(records)
        if len(averaged) < 2:
            raise TooFewPoints(
                f"{lemma}/{pos}: need >= 2 averaged embeddings, got {len(averaged)}"
            )
        points = [ae.mean_vector for ae in averaged]
        gold = tuple(ae.group_id for ae in averaged)
        sense_keys = [ae.sense_key for ae in averaged]

        projections: dict[str, tuple] = {}
        projection_errors: dict[str, str] = {}
        for method in config.projections:
            seed = derive_seed(config.seed, lemma, pos, method)
            try:
                projections[method] = run_projection(points, method, seed=seed).coords
            except WorkbenchError as exc:
                projection_errors[method] = str(exc)

        baseline = majority_baseline(gold)
        reports = []
        for algorithm in config.algorithms:
            params = _cluster_params(config, algorithm, k_default=len(set(gold)))
            result = run_clustering(points, params)
            _, accuracy = align_labels(result.labels, gold)
            report = WordReport(
                lemma=lemma,
                pos=pos,
                n_points=len(averaged),
                algorithm=algorithm,
                params=_params_to_dict(params),
                labels=result.labels,
                gold_groups=gold,
                aligned_accuracy=accuracy,
                ari=adjusted_rand_index(result.labels, gold),
                verdict=homonym_decision(result),
                majority_baseline=baseline,
                projections=projections,
            )
            reports.append(report)
        return {
            "lemma": lemma,
            "pos": pos,
            "sense_keys": sense_keys,
            "reports": reports,
            "projection_errors": projection_errors,
        }
    except WorkbenchError as exc:
        return {"lemma": lemma, "pos": pos, "skip_reason": str(exc)}


def _write_word_svgs(outcome: dict, config: RunConfig, plots_dir: str) -> list[str]:
    written = []
    lemma, pos = outcome["lemma"], outcome["pos"]
    for report in outcome["reports"]:
        for method, coords in report.projections.items():
            spec = PlotSpec(
                coords=tuple((c[0], c[1]) for c in coords),
                gold_groups=report.gold_groups,
                labels=report.labels,
                title=f"{lemma}/{pos}: {report.algorithm} on {method}",
                meta={
                    "algorithm": report.algorithm,
                    "projection": method,
                    "seed": str(config.seed),
                },
            )
            name = f"{slugify(lemma)}_{pos}_{report.algorithm}_{method}.svg"
            scatter_svg(spec, os.path.join(plots_dir, name))
            written.append(name)
    return written


def _config_echo(config: RunConfig) -> dict:
    return {
        "prepared": config.prepared,
        "embeddings": config.embeddings,
        "algorithms": list(config.algorithms),
        "projections": list(config.projections),
        "seed": config.seed,
        "radius": config.radius,
        "ward_k": config.ward_k,
        "ward_distance_threshold": config.ward_distance_threshold,
        "bandwidth": config.bandwidth,
        "quantile": config.quantile,
        "eps": config.eps,
        "min_samples": config.min_samples,
    }


def cmd_run(config: RunConfig) -> int:
    """Execute the averaged-embedding clustering pipeline over a prepared
    dataset and write report.json, summary.tsv, and the SVG plots."""
    manifest_path = os.path.join(config.prepared, "manifest.json")
    if not os.path.isfile(manifest_path):
        raise WorkbenchError(f"manifest not found: {manifest_path}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)

    records = embed_mod.read_embeddings(config.embeddings)
    by_word: dict[tuple[str, str], list] = {}
    for rec in records:
        by_word.setdefault((rec.lemma, rec.pos), []).append(rec)

    entries = sorted(manifest["words"], key=lambda w: (w["lemma"], w["pos"]))
    tasks = [(entry, by_word.get((entry["lemma"], entry["pos"]), []), config) for entry in entries]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_process_word, tasks))
    else:
        outcomes = [_process_word(t) for t in tasks]

    plots_dir = os.path.join(config.out, "plots")
    os.makedirs(plots_dir, exist_ok=True)
    word_blobs = []
    skipped = []
    all_reports = []
    for outcome in outcomes:
        if "skip_reason" in outcome:
            skipped.append(
                {"lemma": outcome["lemma"], "pos": outcome["pos"], "reason": outcome["skip_reason"]}
            )
            continue
        _write_word_svgs(outcome, config, plots_dir)
        for report in outcome["reports"]:
            blob = word_report_to_dict(report)
            blob["sense_keys"] = outcome["sense_keys"]
            if outcome["projection_errors"]:
                blob["projection_errors"] = outcome["projection_errors"]
            word_blobs.append(blob)
            all_reports.append(report)

    summary = (
        corpus_report(all_reports)
        if all_reports
        else {"n_reports": 0, "per_algorithm": {}}
    )
    report_doc = {
        "config": _config_echo(config),
        "words": word_blobs,
        "skipped": skipped,
        "summary": summary,
    }
    with open(os.path.join(config.out, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report_doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")

    _write_summary_tsv(all_reports, os.path.join(config.out, "summary.tsv"))

    if not all_reports:
        print("warning: no word produced a report", file=sys.stderr)
    print(
        f"evaluated {len({(r.lemma, r.pos) for r in all_reports})} word types, "
        f"skipped {len(skipped)} -> {config.out}"
    )
    return 0


def _write_summary_tsv(reports: list[WordReport], path: str) -> None:
    columns = (
        "lemma",
        "pos",
        "algorithm",
        "n_points",
        "n_clusters",
        "aligned_accuracy",
        "ari",
        "verdict",
        "majority_baseline",
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(columns) + "\n")
        for r in reports:
            n_clusters = len({l for l in r.labels if l >= 0})
            fh.write(
                "\t".join(
                    [
                        r.lemma,
                        r.pos,
                        r.algorithm,
                        str(r.n_points),
                        str(n_clusters),
                        f"{r.aligned_accuracy:.6g}",
                        f"{r.ari:.6g}",
                        "true" if r.verdict else "false",
                        f"{r.majority_baseline:.6g}",
                    ]
                )
                + "\n"
            )


def cmd_plot(report_path: str, out_dir: str) -> int:
    """Re-render all SVGs from an existing report.json."""
    if not os.path.isfile(report_path):
        raise WorkbenchError(f"report not found: {report_path}")
    with open(report_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    os.makedirs(out_dir, exist_ok=True)
    seed = doc.get("config", {}).get("seed", 0)
    count = 0
    for blob in doc["words"]:
        for method, coords in blob.get("projections", {}).items():
            spec = PlotSpec(
                coords=tuple((c[0], c[1]) for c in coords),
                gold_groups=tuple(blob["gold_groups"]),
                labels=tuple(blob["labels"]),
                title=f"{blob['lemma']}/{blob['pos']}: {blob['algorithm']} on {method}",
                meta={
                    "algorithm": blob["algorithm"],
                    "projection": method,
                    "seed": str(seed),
                },
            )
            name = f"{slugify(blob['lemma'])}_{blob['pos']}_{blob['algorithm']}_{method}.svg"
            scatter_svg(spec, os.path.join(out_dir, name))
            count += 1
    print(f"rendered {count} plots -> {out_dir}")
    return 0


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse's default of 2 is reserved for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_config_file(path: str) -> dict:
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError as exc:
            raise WorkbenchError("TOML config files need Python 3.11+; use JSON") from exc
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _merge_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicit flags"""
    config = RunConfig()
    if getattr(args, "config", None):
        raw = _load_config_file(args.config)
        unknown = set(raw) - {f.name for f in config.__dataclass_fields__.values()}
        if unknown:
            raise WorkbenchError(f"unknown config keys: {sorted(unknown)}")
        for key in ("algorithms", "projections"):
            if key in raw and isinstance(raw[key], list):
                raw[key] = tuple(raw[key])
        config = replace(config, **raw)
    overrides = {}
    for name in config.__dataclass_fields__:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return replace(config, **overrides)


def _split_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="homoclust", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_prep = sub.add_parser("prepare", help="parse and filter the corpus into per-word files")
    p_prep.add_argument("--corpus", required=True, help="corpus.jsonl path")
    p_prep.add_argument("--index", required=True, help="sense_index.tsv path")
    p_prep.add_argument("--inventory", required=True, help="inventory.tsv path")
    p_prep.add_argument("--out", required=True, help="output directory")
    p_prep.add_argument("--radius", type=int, default=None, help="context window radius (default 10)")
    p_prep.add_argument("--config", default=None, help="JSON (or TOML on 3.11+) config file")

    p_run = sub.add_parser("run", help="cluster, project, evaluate, and plot")
    p_run.add_argument("--prepared", required=True, help="directory written by prepare")
    p_run.add_argument("--embeddings", required=True, help="embeddings.jsonl path")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--algorithms", type=_split_list, default=None, help="comma list (default ward,meanshift,dbscan)")
    p_run.add_argument("--projections", type=_split_list, default=None, help="comma list (default pca,mds,tsne)")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--jobs", type=int, default=None, help="parallel word workers (default 1)")
    p_run.add_argument("--ward-k", dest="ward_k", type=int, default=None, help="override ward cluster count")
    p_run.add_argument("--ward-distance-threshold", dest="ward_distance_threshold", type=float, default=None)
    p_run.add_argument("--bandwidth", type=float, default=None, help="meanshift kernel radius")
    p_run.add_argument("--quantile", type=float, default=None, help="bandwidth estimation quantile (default 0.3)")
    p_run.add_argument("--eps", type=float, default=None, help="dbscan radius")
    p_run.add_argument("--min-samples", dest="min_samples", type=int, default=None, help="dbscan core threshold (default 3)")
    p_run.add_argument("--config", default=None, help="JSON (or TOML on 3.11+) config file")

    p_plot = sub.add_parser("plot", help="re-render SVGs from a report.json")
    p_plot.add_argument("--report", required=True, help="report.json path")
    p_plot.add_argument("--out", required=True, help="output directory for SVGs")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "prepare":
            config = _merge_config(args)
            return cmd_prepare(config)
        if args.command == "run":
            config = _merge_config(args)
            unknown_algs = set(config.algorithms) - {"ward", "meanshift", "dbscan"}
            unknown_projs = set(config.projections) - {"pca", "mds", "tsne"}
            if unknown_algs or unknown_projs:
                parser.error(f"unknown algorithms/projections: {sorted(unknown_algs | unknown_projs)}")
            return cmd_run(config)
        if args.command == "plot":
            return cmd_plot(args.report, args.out)
        parser.error(f"unknown command {args.command!r}")
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
