#!/usr/bin/env python3
"""Count word types attesting two or more homonym groups.

Deliberately self-contained (no package imports): this is the independent
cross-check for the prepare step's manifest size. Given the real cleaned
corpus and inventory the count should come out at the published figure.

Usage: count_multigroup_words.py CORPUS.jsonl SENSE_INDEX.tsv INVENTORY.tsv
"""

import json
import sys


def main(corpus_path, index_path, inventory_path):
    index = {}
    with open(index_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            sense_key, lemma, pos, num = line.rstrip("\n").split("\t")
            index[sense_key] = (lemma, pos, int(num))

    inventory = {}
    with open(inventory_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            lemma, pos, num, group = line.rstrip("\n").split("\t")
            inventory[(lemma, pos, int(num))] = int(group)

    groups_per_word = {}
    with open(corpus_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            resolved = index.get(obj["sense_key"])
            if resolved is None or (resolved[0], resolved[1]) != (obj["lemma"], obj["pos"]):
                continue
            group = inventory.get(resolved)
            if group is None:
                continue
            groups_per_word.setdefault((obj["lemma"], obj["pos"]), set()).add(group)

    survivors = sorted(w for w, groups in groups_per_word.items() if len(groups) >= 2)
    for lemma, pos in survivors:
        print(f"{lemma}\t{pos}", file=sys.stderr)
    print(len(survivors))
    return 0


if __name__ == "__main__":
    if len(sys.argv) != 4:
        print(__doc__, file=sys.stderr)
        sys.exit(1)
    sys.exit(main(*sys.argv[1:]))
