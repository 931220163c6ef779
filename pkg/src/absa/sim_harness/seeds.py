"""Per-run seed derivation.

Seeds are a keyed hash of labels rather than draws from a shared stream, so a
run's seed never depends on how many other runs exist in the campaign.
"""

from __future__ import annotations

import hashlib
from typing import Sequence


def derive_seed(
    master_seed: int, campaign: str, context: Sequence[str], run_index: int
) -> int:
    """Return an unsigned 64-bit seed for one run."""
    h = hashlib.blake2b(digest_size=8, person=b"absa-seed")
    parts = [str(int(master_seed)), campaign, *map(str, context), str(int(run_index))]
    for part in parts:
        raw = part.encode("utf-8")
        # length prefix keeps ("ab", "c") distinct from ("a", "bc")
        h.update(len(raw).to_bytes(4, "big"))
        h.update(raw)
    return int.from_bytes(h.digest(), "big")


def value_label(value: float) -> str:
    """Stable text form of a parameter value for use as a seed label."""
    return repr(float(value))
