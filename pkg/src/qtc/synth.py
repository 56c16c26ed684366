"""Seeded synthetic corpus generator.

Documents are keyword mixtures: each class owns a disjoint set of
high-frequency keywords and all classes share a pool of filler words, so the
generated corpus has the statistical shape of a balanced multi-class text
dataset without imitating any real text.  Everything is driven by one seed
and reproduces byte-for-byte.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .corpus import STOPWORDS, Document
from .errors import ValidationError

__all__ = ["synthesize_corpus", "write_corpus_csv", "CLASS_NAMES"]

CLASS_NAMES = [
    "ALFA", "BRAVO", "CHARLIE", "DELTA", "ECHO", "FOXTROT", "GOLF", "HOTEL",
    "INDIA", "JULIETT", "KILO", "LIMA", "MIKE", "NOVEMBER", "OSCAR", "PAPA",
    "QUEBEC", "ROMEO", "SIERRA", "TANGO", "UNIFORM", "VICTOR", "WHISKEY",
    "XRAY", "YANKEE", "ZULU",
]

_ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"]
_VOWELS = ["a", "e", "i", "o", "u"]

KEYWORD_SHARE = 0.6  # fraction of tokens drawn from the class keyword set
DOC_LEN_RANGE = (25, 40)


def _make_words(rng: np.random.Generator, count: int) -> list[str]:
    """Distinct pronounceable pseudo-words that survive tokenization."""
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < count:
        syllables = int(rng.integers(2, 4))
        word = "".join(
            _ONSETS[rng.integers(len(_ONSETS))] + _VOWELS[rng.integers(len(_VOWELS))]
            for _ in range(syllables)
        )
        if word in seen or word in STOPWORDS:
            continue
        seen.add(word)
        words.append(word)
    return words


def synthesize_corpus(
    classes: int = 3,
    per_class: int = 40,
    vocab_size: int = 30,
    seed: int = 13,
) -> list[Document]:
    """Generate ``classes * per_class`` labeled documents."""
    if classes < 2:
        raise ValidationError("need at least 2 classes")
    if per_class < 4:
        raise ValidationError("need at least 4 documents per class")
    if classes > len(CLASS_NAMES):
        raise ValidationError(f"at most {len(CLASS_NAMES)} classes supported")
    if vocab_size < 2 * classes + 2:
        raise ValidationError("vocab_size too small for disjoint keyword sets")

    rng = np.random.default_rng(seed)
    keywords_per_class = max(2, vocab_size // (classes + 1))
    n_filler = vocab_size - classes * keywords_per_class
    if n_filler < 2:
        keywords_per_class = (vocab_size - 2) // classes
        n_filler = vocab_size - classes * keywords_per_class
    words = _make_words(rng, vocab_size)
    class_words = [
        words[c * keywords_per_class : (c + 1) * keywords_per_class]
        for c in range(classes)
    ]
    filler = words[classes * keywords_per_class :]

    # Mildly skewed keyword weights so each class has a few dominant terms.
    kw_weights = 1.0 / np.arange(1, keywords_per_class + 1)
    kw_weights /= kw_weights.sum()

    docs: list[Document] = []
    serial = 10_000_000
    for c in range(classes):
        for _ in range(per_class):
            length = int(rng.integers(*DOC_LEN_RANGE))
            tokens = []
            for _ in range(length):
                if rng.random() < KEYWORD_SHARE:
                    tokens.append(class_words[c][rng.choice(keywords_per_class, p=kw_weights)])
                else:
                    tokens.append(filler[rng.integers(len(filler))])
            serial += 1
            docs.append(Document(str(serial), " ".join(tokens), CLASS_NAMES[c]))
    return docs


def write_corpus_csv(
    path,
    docs: list[Document],
    columns: tuple[str, str, str] = ("ID", "Resume_str", "Category"),
) -> None:
    """Write documents in the standard corpus CSV layout."""
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for doc in docs:
            writer.writerow([doc.id, doc.text, doc.label])
