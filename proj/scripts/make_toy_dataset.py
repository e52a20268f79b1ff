#!/usr/bin/env python3
"""Regenerates data/toy: a small English/German parallel dataset with
synthetic contextual embeddings for three layers.

Layer 0 vectors are word-specific with a per-language offset, so concepts
are lexical and monolingual. Layer 12 vectors are shared by translation
pairs and grouped by topic, so concepts align across languages and overlap
in mixed discovery. Layer 6 interpolates the two.
"""
import pathlib
import struct

import numpy as np

GROUPS = [
    [("red", "rot"), ("green", "grün"), ("blue", "blau"), ("yellow", "gelb"), ("black", "schwarz"), ("white", "weiß")],
    [("one", "eins"), ("two", "zwei"), ("three", "drei"), ("four", "vier"), ("five", "fünf"), ("six", "sechs")],
    [("dog", "hund"), ("cat", "katze"), ("horse", "pferd"), ("cow", "kuh"), ("bird", "vogel"), ("fish", "fisch")],
    [("mother", "mutter"), ("father", "vater"), ("brother", "bruder"), ("sister", "schwester"), ("son", "sohn"), ("daughter", "tochter")],
    [("hand", "hand"), ("foot", "fuß"), ("head", "kopf"), ("eye", "auge"), ("ear", "ohr"), ("nose", "nase")],
    [("bread", "brot"), ("milk", "milch"), ("cheese", "käse"), ("apple", "apfel"), ("water", "wasser"), ("wine", "wein")],
    [("rain", "regen"), ("snow", "schnee"), ("wind", "wind"), ("sun", "sonne"), ("cloud", "wolke"), ("storm", "sturm")],
    [("day", "tag"), ("night", "nacht"), ("week", "woche"), ("year", "jahr"), ("hour", "stunde"), ("month", "monat")],
]
LAYERS = [0, 6, 12]
DIM = 16
SENTENCES = 240
LENGTH = 6
SEED = 7


def write_lcem(path, layer, matrix):
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    rows, dim = matrix.shape
    with open(path, "wb") as out:
        out.write(b"LCEM")
        out.write(struct.pack("<HHQI", 1, layer, rows, dim))
        out.write(matrix.tobytes())


def write_tokens(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        out.write("#lcem-tokens v1\n")
        for row, (surface, sentence, position, language) in enumerate(records):
            out.write(f"{row}\t{surface}\t{sentence}\t{position}\t{language}\n")


def main():
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)

    pairs = [(g, p) for g, group in enumerate(GROUPS) for p in range(len(group))]
    sentences = [[pairs[i] for i in rng.integers(0, len(pairs), LENGTH)] for _ in range(SENTENCES)]
    counts = {}
    for sentence in sentences:
        for key in sentence:
            counts[key] = counts.get(key, 0) + 1
    assert len(counts) == len(pairs) and min(counts.values()) >= 10, "regenerate with another seed"

    group_centers = rng.normal(0.0, 4.0, (len(GROUPS), DIM))
    pair_offsets = {key: rng.normal(0.0, 0.4, DIM) for key in pairs}
    language_offset = {"en": rng.normal(0.0, 6.0, DIM), "de": rng.normal(0.0, 6.0, DIM)}
    lexical = {(lang, key): rng.normal(0.0, 4.0, DIM) + language_offset[lang]
               for lang in ("en", "de") for key in pairs}

    def vector(layer, lang, key):
        semantic = group_centers[key[0]] + pair_offsets[key]
        mix = layer / 12.0
        return (1.0 - mix) * lexical[(lang, key)] + mix * semantic + rng.normal(0.0, 0.15, DIM)

    records = {"en": [], "de": []}
    for s, sentence in enumerate(sentences):
        for position, key in enumerate(sentence):
            group = GROUPS[key[0]][key[1]]
            records["en"].append((group[0], s, position, "en"))
            records["de"].append((group[1], s, position, "de"))
    keys = [key for sentence in sentences for key in sentence]

    for lang in ("en", "de"):
        write_tokens(out_dir / f"{lang}.tokens", records[lang])
    write_tokens(out_dir / "mixed.tokens", records["en"] + records["de"])

    for layer in LAYERS:
        per_lang = {lang: np.stack([vector(layer, lang, key) for key in keys]) for lang in ("en", "de")}
        for lang, matrix in per_lang.items():
            write_lcem(out_dir / f"{lang}-L{layer}.lcem", layer, matrix)
        write_lcem(out_dir / f"mixed-L{layer}.lcem", layer, np.vstack([per_lang["en"], per_lang["de"]]))

    with open(out_dir / "corpus.en", "w", encoding="utf-8", newline="\n") as en, \
         open(out_dir / "corpus.de", "w", encoding="utf-8", newline="\n") as de, \
         open(out_dir / "corpus.align", "w", encoding="utf-8", newline="\n") as align:
        for sentence in sentences:
            en.write(" ".join(GROUPS[g][p][0] for g, p in sentence) + "\n")
            de.write(" ".join(GROUPS[g][p][1] for g, p in sentence) + "\n")
            align.write(" ".join(f"{i}-{i}" for i in range(len(sentence))) + "\n")


if __name__ == "__main__":
    main()
