"""Sense-tagged corpus ingestion and homonym-group assignment.

Inputs are three flat files:

* ``corpus.jsonl`` -- one JSON object per line: sentence_id, tokens,
  target_index, lemma, pos, sense_key.
* ``sense_index.tsv`` -- tab-separated: sense_key, lemma, pos, sense_number.
* ``inventory.tsv`` -- tab-separated: lemma, pos, sense_number, group_id.

A word type is identified by (lemma, pos); only word types attesting at
least two distinct homonym groups survive filtering.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import (
    DuplicateKey,
    DuplicateSenseKey,
    IndexOutOfRange,
    MalformedRecord,
    MissingFile,
)

VALID_POS = ("n", "v", "a", "r")


@dataclass(frozen=True)
class SenseTaggedInstance:
    """One corpus sentence with a marked target token and its sense key."""

    sentence_id: str
    tokens: tuple[str, ...]
    target_index: int
    lemma: str
    pos: str
    sense_key: str

    @property
    def target_token(self) -> str:
        return self.tokens[self.target_index]


@dataclass(frozen=True)
class SenseIndex:
    """Maps sense_key -> (lemma, pos, sense_number)."""

    entries: dict[str, tuple[str, str, int]]

    def lookup(self, sense_key: str) -> tuple[str, str, int] | None:
        return self.entries.get(sense_key)


@dataclass(frozen=True)
class HomonymInventory:
    """Maps (lemma, pos, sense_number) -> homonym group id."""

    entries: dict[tuple[str, str, int], int]

    def lookup(self, lemma: str, pos: str, sense_number: int) -> int | None:
        return self.entries.get((lemma, pos, sense_number))


@dataclass(frozen=True)
class GroupedInstance:
    instance: SenseTaggedInstance
    sense_number: int
    group_id: int


@dataclass(frozen=True)
class WordDataset:
    """All grouped instances for one (lemma, pos), spanning >= 2 groups."""

    lemma: str
    pos: str
    instances: tuple[GroupedInstance, ...]
    attested_groups: frozenset[int]


@dataclass
class SkipTally:
    """Counts of instances dropped during group assignment, by reason."""

    missing_sense_key: int = 0
    missing_group: int = 0
    lemma_pos_mismatch: int = 0

    @property
    def total(self) -> int:
        return self.missing_sense_key + self.missing_group + self.lemma_pos_mismatch

    def as_dict(self) -> dict[str, int]:
        return {
            "missing_sense_key": self.missing_sense_key,
            "missing_group": self.missing_group,
            "lemma_pos_mismatch": self.lemma_pos_mismatch,
            "total": self.total,
        }


def _require_file(path: str) -> None:
    if not os.path.isfile(path):
        raise MissingFile(path)


def _instance_from_obj(obj: dict, line_no: int) -> SenseTaggedInstance:
    for key in ("sentence_id", "tokens", "target_index", "lemma", "pos", "sense_key"):
        if key not in obj:
            raise MalformedRecord(line_no, f"missing field {key!r}")
    tokens = obj["tokens"]
    if not isinstance(tokens, list) or not tokens or not all(isinstance(t, str) for t in tokens):
        raise MalformedRecord(line_no, "tokens must be a non-empty list of strings")
    if not isinstance(obj["lemma"], str) or not obj["lemma"]:
        raise MalformedRecord(line_no, "lemma must be a non-empty string")
    if obj["pos"] not in VALID_POS:
        raise MalformedRecord(line_no, f"pos must be one of {VALID_POS}, got {obj['pos']!r}")
    target_index = obj["target_index"]
    if not isinstance(target_index, int) or isinstance(target_index, bool):
        raise MalformedRecord(line_no, "target_index must be an integer")
    if not 0 <= target_index < len(tokens):
        raise IndexOutOfRange(f"line {line_no}: target_index {target_index} outside 0..{len(tokens) - 1}")
    if not isinstance(obj["sentence_id"], str):
        raise MalformedRecord(line_no, "sentence_id must be a string")
    if not isinstance(obj["sense_key"], str):
        raise MalformedRecord(line_no, "sense_key must be a string")
    return SenseTaggedInstance(
        sentence_id=obj["sentence_id"],
        tokens=tuple(tokens),
        target_index=target_index,
        lemma=obj["lemma"],
        pos=obj["pos"],
        sense_key=obj["sense_key"],
    )


def parse_corpus(path: str) -> list[SenseTaggedInstance]:
    """Read a JSONL corpus, preserving file order. Blank lines are ignored."""
    _require_file(path)
    instances = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "line is not a JSON object")
            instances.append(_instance_from_obj(obj, line_no))
    return instances


def write_corpus(instances: list[SenseTaggedInstance], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_to_obj(inst), ensure_ascii=False) + "\n")


def instance_to_obj(inst: SenseTaggedInstance) -> dict:
    return {
        "sentence_id": inst.sentence_id,
        "tokens": list(inst.tokens),
        "target_index": inst.target_index,
        "lemma": inst.lemma,
        "pos": inst.pos,
        "sense_key": inst.sense_key,
    }


def parse_sense_index(path: str) -> SenseIndex:
    """Read the 4-column sense index TSV; duplicate sense keys are fatal."""
    _require_file(path)
    entries: dict[str, tuple[str, str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 4:
                raise MalformedRecord(line_no, f"expected 4 tab-separated columns, got {len(cols)}")
            sense_key, lemma, pos, num_str = cols
            if not sense_key or not lemma:
                raise MalformedRecord(line_no, "sense_key and lemma must be non-empty")
            if pos not in VALID_POS:
                raise MalformedRecord(line_no, f"pos must be one of {VALID_POS}, got {pos!r}")
            try:
                sense_number = int(num_str)
            except ValueError:
                raise MalformedRecord(line_no, f"sense_number is not an integer: {num_str!r}")
            if sense_number < 1:
                raise MalformedRecord(line_no, f"sense_number must be >= 1, got {sense_number}")
            if sense_key in entries:
                raise DuplicateSenseKey(f"line {line_no}: duplicate sense key {sense_key!r}")
            entries[sense_key] = (lemma, pos, sense_number)
    return SenseIndex(entries=entries)


def write_sense_index(index: SenseIndex, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sense_key, (lemma, pos, sense_number) in index.entries.items():
            fh.write(f"{sense_key}\t{lemma}\t{pos}\t{sense_number}\n")


def parse_inventory(path: str) -> HomonymInventory:
    """Read the 4-column homonym inventory TSV; duplicate keys are fatal."""
    _require_file(path)
    entries: dict[tuple[str, str, int], int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 4:
                raise MalformedRecord(line_no, f"expected 4 tab-separated columns, got {len(cols)}")
            lemma, pos, num_str, group_str = cols
            if not lemma:
                raise MalformedRecord(line_no, "lemma must be non-empty")
            if pos not in VALID_POS:
                raise MalformedRecord(line_no, f"pos must be one of {VALID_POS}, got {pos!r}")
            try:
                sense_number = int(num_str)
                group_id = int(group_str)
            except ValueError:
                raise MalformedRecord(line_no, "sense_number and group_id must be integers")
            if sense_number < 1 or group_id < 1:
                raise MalformedRecord(line_no, "sense_number and group_id must be positive")
            key = (lemma, pos, sense_number)
            if key in entries:
                raise DuplicateKey(f"line {line_no}: duplicate inventory key {key}")
            entries[key] = group_id
    return HomonymInventory(entries=entries)


def write_inventory(inventory: HomonymInventory, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (lemma, pos, sense_number), group_id in inventory.entries.items():
            fh.write(f"{lemma}\t{pos}\t{sense_number}\t{group_id}\n")


def assign_groups(
    instances: list[SenseTaggedInstance],
    index: SenseIndex,
    inventory: HomonymInventory,
) -> tuple[list[GroupedInstance], SkipTally]:
    """Resolve each instance's sense key to a homonym group.

    Instances that do not resolve (sense key absent from the index, the
    index disagreeing with the instance's lemma/pos, or no inventory entry
    for the sense number) are dropped and tallied, never fatal: sparse
    mappings are expected for rare senses.
    """
    grouped: list[GroupedInstance] = []
    tally = SkipTally()
    for inst in instances:
        resolved = index.lookup(inst.sense_key)
        if resolved is None:
            tally.missing_sense_key += 1
            continue
        lemma, pos, sense_number = resolved
        if (lemma, pos) != (inst.lemma, inst.pos):
            tally.lemma_pos_mismatch += 1
            continue
        group_id = inventory.lookup(lemma, pos, sense_number)
        if group_id is None:
            tally.missing_group += 1
            continue
        grouped.append(GroupedInstance(instance=inst, sense_number=sense_number, group_id=group_id))
    return grouped, tally


def filter_multigroup(grouped: list[GroupedInstance]) -> dict[tuple[str, str], WordDataset]:
    """Keep only word types whose instances attest >= 2 homonym groups.

    Keys appear in first-attestation order; instance order is preserved
    within each word.
    """
    by_word: dict[tuple[str, str], list[GroupedInstance]] = {}
    for gi in grouped:
        key = (gi.instance.lemma, gi.instance.pos)
        by_word.setdefault(key, []).append(gi)
    out: dict[tuple[str, str], WordDataset] = {}
    for (lemma, pos), items in by_word.items():
        groups = frozenset(gi.group_id for gi in items)
        if len(groups) >= 2:
            out[(lemma, pos)] = WordDataset(
                lemma=lemma, pos=pos, instances=tuple(items), attested_groups=groups
            )
    return out
