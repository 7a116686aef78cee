"""Context windowing, embedding file I/O, and per-sense averaging.

The embedding interchange file is JSONL: line 1 is a header object
``{"dim": d}``, every following line one record. Vector dimension is
constant per file and every component must be finite.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    MalformedRecord,
    MissingFile,
    MixedDimension,
    MixedGroup,
    MixedLemma,
)

DEFAULT_RADIUS = 10


@dataclass(frozen=True)
class EmbeddingRecord:
    """Contextual vector for one target occurrence."""

    sentence_id: str
    lemma: str
    pos: str
    sense_key: str
    group_id: int
    vector: tuple[float, ...]


@dataclass(frozen=True)
class AveragedEmbedding:
    """Mean contextual vector over all occurrences of one sense key."""

    lemma: str
    pos: str
    sense_key: str
    group_id: int
    mean_vector: tuple[float, ...]
    count: int


def context_window(
    tokens: Sequence[str], target_index: int, radius: int = DEFAULT_RADIUS
) -> tuple[Sequence[str], int]:
    """Clip ``tokens`` to ``radius`` words on either side of the target.

    Returns the window and the target's index within it; the target token
    string itself is never changed.
    """
    if not 0 <= target_index < len(tokens):
        raise IndexOutOfRange(f"target_index {target_index} outside 0..{len(tokens) - 1}")
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    lo = max(0, target_index - radius)
    hi = min(len(tokens), target_index + radius + 1)
    return tokens[lo:hi], target_index - lo


def read_embeddings(path: str) -> list[EmbeddingRecord]:
    """Read an embeddings JSONL file, validating dimension and finiteness."""
    if not os.path.isfile(path):
        raise MissingFile(path)
    records: list[EmbeddingRecord] = []
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from exc
            if dim is None:
                if not isinstance(obj, dict) or "dim" not in obj:
                    raise MalformedRecord(line_no, 'first line must be a header {"dim": d}')
                dim = obj["dim"]
                if not isinstance(dim, int) or dim < 1:
                    raise MalformedRecord(line_no, f"dim must be a positive integer, got {dim!r}")
                continue
            records.append(_record_from_obj(obj, dim, line_no))
    if dim is None:
        raise MalformedRecord(1, "missing header line")
    return records


def _record_from_obj(obj: dict, dim: int, line_no: int) -> EmbeddingRecord:
    for key in ("sentence_id", "lemma", "pos", "sense_key", "group_id", "vector"):
        if key not in obj:
            raise MalformedRecord(line_no, f"missing field {key!r}")
    vector = obj["vector"]
    if not isinstance(vector, list):
        raise MalformedRecord(line_no, "vector must be a list")
    if len(vector) != dim:
        raise DimensionMismatch(f"line {line_no}: vector has {len(vector)} components, header dim is {dim}")
    values = []
    for v in vector:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise MalformedRecord(line_no, f"vector component not a finite number: {v!r}")
        values.append(float(v))
    group_id = obj["group_id"]
    if not isinstance(group_id, int) or isinstance(group_id, bool) or group_id < 1:
        raise MalformedRecord(line_no, f"group_id must be a positive integer, got {group_id!r}")
    return EmbeddingRecord(
        sentence_id=str(obj["sentence_id"]),
        lemma=str(obj["lemma"]),
        pos=str(obj["pos"]),
        sense_key=str(obj["sense_key"]),
        group_id=group_id,
        vector=tuple(values),
    )


def write_embeddings(records: list[EmbeddingRecord], path: str, dim: int | None = None) -> None:
    """Write records in the JSONL interchange format.

    ``dim`` defaults to the first record's dimension; a mismatching record
    is rejected before anything is written.
    """
    if dim is None:
        if not records:
            raise ValueError("dim is required when writing an empty record list")
        dim = len(records[0].vector)
    for i, rec in enumerate(records):
        if len(rec.vector) != dim:
            raise DimensionMismatch(f"record {i}: vector has {len(rec.vector)} components, expected {dim}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": dim}) + "\n")
        for rec in records:
            obj = {
                "sentence_id": rec.sentence_id,
                "lemma": rec.lemma,
                "pos": rec.pos,
                "sense_key": rec.sense_key,
                "group_id": rec.group_id,
                "vector": list(rec.vector),
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def average_by_sense(records: list[EmbeddingRecord]) -> list[AveragedEmbedding]:
    """Collapse one word's records into one mean vector per sense key.

    Output order is first-appearance order of the sense key. All records
    must share lemma, pos and dimension, and a sense key must always carry
    the same group id (the inventory maps each sense to exactly one group).
    """
    if not records:
        return []
    lemma, pos = records[0].lemma, records[0].pos
    dim = len(records[0].vector)
    sums: dict[str, np.ndarray] = {}
    counts: dict[str, int] = {}
    groups: dict[str, int] = {}
    for rec in records:
        if (rec.lemma, rec.pos) != (lemma, pos):
            raise MixedLemma(
                f"records mix {lemma}/{pos} with {rec.lemma}/{rec.pos}"
            )
        if len(rec.vector) != dim:
            raise MixedDimension(f"records mix dimensions {dim} and {len(rec.vector)}")
        if rec.sense_key in groups and groups[rec.sense_key] != rec.group_id:
            raise MixedGroup(
                f"sense key {rec.sense_key!r} carries groups "
                f"{groups[rec.sense_key]} and {rec.group_id}"
            )
        if rec.sense_key not in sums:
            sums[rec.sense_key] = np.zeros(dim, dtype=np.float64)
            counts[rec.sense_key] = 0
            groups[rec.sense_key] = rec.group_id
        sums[rec.sense_key] += np.asarray(rec.vector, dtype=np.float64)
        counts[rec.sense_key] += 1
    return [
        AveragedEmbedding(
            lemma=lemma,
            pos=pos,
            sense_key=sense_key,
            group_id=groups[sense_key],
            mean_vector=tuple((sums[sense_key] / counts[sense_key]).tolist()),
            count=counts[sense_key],
        )
        for sense_key in sums
    ]
