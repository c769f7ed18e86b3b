"""Bundled sample corpus: 20 small synthetic graphs across the 4 domains.

Deterministic stand-ins for smoke tests (regenerate with
tools/make_corpus.py); real analyses should point the pipeline at their
own manifest.
"""

from pathlib import Path

CORPUS_DIR = Path(__file__).parent / "corpus"


def corpus_manifest():
    """Path of the bundled manifest.csv."""
    return CORPUS_DIR / "manifest.csv"
