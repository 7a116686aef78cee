#!/usr/bin/env python3
"""Regenerate the bundled fixture dataset under fixtures/.

Two word types survive preparation:

* light/n -- 8 senses split 4/4 between groups 100 and 400, with the two
  groups' embeddings separated by 10 occurrence-noise sigmas: every
  algorithm should call it homonymous.
* mass/n -- 6 senses split 3/3 between groups 100 and 200, but all
  embeddings sit in one tight blob: density methods should see one
  cluster (or noise) and call it non-homonymous.

gravel/n attests only group 100 and must be filtered out; one corpus line
carries a sense key absent from the index to exercise the skip tally.

The script asserts the fixture's intended clustering behavior before
writing, so committed fixtures always satisfy the acceptance suite.
"""

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from homoclust.cluster import ClusterParams, dbscan, mean_shift, agglomerative_ward  # noqa: E402
from homoclust.evaluate import align_labels, homonym_decision  # noqa: E402

DIM = 16
LIGHT_SEED = 20240601
MASS_SEED = 8  # chosen so the blob yields one meanshift cluster and dbscan noise
OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")

FILLER = (
    "the old keeper watched while morning mist settled over quiet fields and "
    "every path toward town stayed empty for hours before anyone stirred"
).split()


def sentence(word, pad_before, pad_after):
    tokens = FILLER[:pad_before] + [word] + FILLER[:pad_after]
    return tokens, pad_before


def build_word(lemma, groups_per_sense, occurrences=3):
    """Corpus rows for one word type: one sense per entry of groups_per_sense."""
    rows = []
    for sense_idx, group in enumerate(groups_per_sense, start=1):
        sense_key = f"{lemma}%1:{sense_idx:02d}:00::"
        for occ in range(occurrences):
            # spans 0..17 before and 1..16 after, so some sentences exceed
            # the 10-word window on either side
            pad_before = (sense_idx * 5 + occ * 7) % 18
            pad_after = (sense_idx * 11 + occ * 3) % 16 + 1
            tokens, target_index = sentence(lemma, pad_before, pad_after)
            rows.append(
                {
                    "sentence_id": f"{lemma}.s{sense_idx:02d}.{occ}",
                    "tokens": tokens,
                    "target_index": target_index,
                    "lemma": lemma,
                    "pos": "n",
                    "sense_key": sense_key,
                    "sense_number": sense_idx,
                    "group_id": group,
                }
            )
    return rows


def embed_rows(rows, centers, sense_sigma, occ_sigma, rng):
    """One embedding record per corpus row; center chosen by group id."""
    sense_offsets = {}
    records = []
    for row in rows:
        key = row["sense_key"]
        if key not in sense_offsets:
            sense_offsets[key] = rng.normal(0.0, sense_sigma, DIM)
        center = centers[row["group_id"]]
        vector = center + sense_offsets[key] + rng.normal(0.0, occ_sigma, DIM)
        records.append(
            {
                "sentence_id": row["sentence_id"],
                "lemma": row["lemma"],
                "pos": row["pos"],
                "sense_key": key,
                "group_id": row["group_id"],
                "vector": [round(float(v), 9) for v in vector],
            }
        )
    return records


def averaged_points(records):
    by_key = {}
    for rec in records:
        by_key.setdefault(rec["sense_key"], []).append(rec["vector"])
    keys = list(by_key)
    points = np.array([np.mean(by_key[k], axis=0) for k in keys])
    groups = [next(r["group_id"] for r in records if r["sense_key"] == k) for k in keys]
    return points, groups


def check_behavior(light_records, mass_records):
    light_pts, light_gold = averaged_points(light_records)
    result = agglomerative_ward(light_pts, ClusterParams(algorithm="ward", k=2))
    _, acc = align_labels(result.labels, light_gold)
    assert acc == 1.0, f"light ward accuracy {acc}"
    assert homonym_decision(result)
    ms = mean_shift(light_pts, ClusterParams(algorithm="meanshift"))
    assert homonym_decision(ms), f"light meanshift clusters {ms.n_clusters}"
    db = dbscan(light_pts, ClusterParams(algorithm="dbscan"))
    assert homonym_decision(db), f"light dbscan labels {db.labels}"

    mass_pts, _ = averaged_points(mass_records)
    ms = mean_shift(mass_pts, ClusterParams(algorithm="meanshift"))
    assert not homonym_decision(ms), f"mass meanshift clusters {ms.n_clusters}"
    db = dbscan(mass_pts, ClusterParams(algorithm="dbscan"))
    assert not homonym_decision(db), f"mass dbscan labels {db.labels}"
    ward = agglomerative_ward(mass_pts, ClusterParams(algorithm="ward", k=2))
    assert homonym_decision(ward)


def main():
    light = build_word("light", [100, 100, 100, 100, 400, 400, 400, 400])
    mass = build_word("mass", [100, 100, 100, 200, 200, 200])
    gravel = build_word("gravel", [100, 100, 100], occurrences=2)

    # 10-sigma separation between light's two group centers (occ_sigma = 1)
    apart = np.full(DIM, 10.0 / np.sqrt(DIM))
    light_centers = {100: np.zeros(DIM), 400: apart}
    mass_center = np.full(DIM, 3.0)
    mass_centers = {100: mass_center, 200: mass_center}

    light_records = embed_rows(
        light, light_centers, sense_sigma=0.5, occ_sigma=1.0, rng=np.random.default_rng(LIGHT_SEED)
    )
    mass_records = embed_rows(
        mass, mass_centers, sense_sigma=0.2, occ_sigma=0.5, rng=np.random.default_rng(MASS_SEED)
    )
    check_behavior(light_records, mass_records)

    os.makedirs(OUT, exist_ok=True)
    corpus_rows = light + mass + gravel
    with open(os.path.join(OUT, "corpus.jsonl"), "w", encoding="utf-8") as fh:
        for row in corpus_rows:
            obj = {k: row[k] for k in ("sentence_id", "tokens", "target_index", "lemma", "pos", "sense_key")}
            fh.write(json.dumps(obj) + "\n")
        # sense key deliberately absent from the index: exercised as a skip
        tokens, target_index = sentence("light", 4, 6)
        fh.write(
            json.dumps(
                {
                    "sentence_id": "light.unmapped.0",
                    "tokens": tokens,
                    "target_index": target_index,
                    "lemma": "light",
                    "pos": "n",
                    "sense_key": "light%1:99:00::",
                }
            )
            + "\n"
        )

    seen = set()
    with open(os.path.join(OUT, "sense_index.tsv"), "w", encoding="utf-8") as fh:
        for row in corpus_rows:
            if row["sense_key"] in seen:
                continue
            seen.add(row["sense_key"])
            fh.write(f"{row['sense_key']}\t{row['lemma']}\t{row['pos']}\t{row['sense_number']}\n")

    seen = set()
    with open(os.path.join(OUT, "inventory.tsv"), "w", encoding="utf-8") as fh:
        for row in corpus_rows:
            key = (row["lemma"], row["pos"], row["sense_number"])
            if key in seen:
                continue
            seen.add(key)
            fh.write(f"{row['lemma']}\t{row['pos']}\t{row['sense_number']}\t{row['group_id']}\n")

    with open(os.path.join(OUT, "embeddings.jsonl"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": DIM}) + "\n")
        for rec in light_records + mass_records:
            fh.write(json.dumps(rec) + "\n")

    print(f"wrote fixtures for {len(corpus_rows) + 1} corpus lines -> {OUT}")


if __name__ == "__main__":
    main()
