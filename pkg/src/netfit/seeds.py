"""Deterministic seed derivation for batch jobs and named subtasks.

Two patterns: ``xor_index`` for replicate batches (master XOR replicate
index) and ``derive`` for mixing string context (graph names, model
names) into a master seed so results never depend on job scheduling.
"""

from __future__ import annotations

import hashlib

_MASK = (1 << 63) - 1


def xor_index(master, index):
    """Seed for the index-th job of a batch: master XOR index."""
    return (int(master) ^ int(index)) & _MASK


def derive(master, *parts):
    """Stable 63-bit seed from a master seed and string/int context parts."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for part in parts:
        h.update(b"\x1f")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "big") & _MASK
