"""Deterministic counter-based random streams.

Every random draw in the toolkit flows through an :class:`RngStream` keyed by
``(master_seed, replicate, particle, purpose)``.  Identical keys yield
identical draw sequences on every run and under any parallel schedule, so
particle loops can be reordered or batched freely without changing output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

# Purpose codes.  Streams with different purposes are independent even when
# the remaining key fields coincide.
INITIAL = 0
MEDIA = 1
BROWNIAN = 2
SUBSAMPLE = 3
DICTIONARY = 4
PROBE = 5
FRESH_A = 6
FRESH_B = 7
BOOTSTRAP = 8


@dataclass(frozen=True)
class RngStream:
    """Key of a counter-based random stream.

    ``stream_id`` is the (replicate, particle, purpose) triple; the stream is
    realized lazily via :meth:`generator`.
    """

    master_seed: int
    replicate: int = 0
    particle: int = 0
    purpose: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit word")

    @property
    def stream_id(self) -> tuple[int, int, int]:
        return (self.replicate, self.particle, self.purpose)

    def with_(self, replicate: int | None = None, particle: int | None = None,
              purpose: int | None = None) -> "RngStream":
        """A sibling stream with some key fields replaced."""
        kw = {}
        if replicate is not None:
            kw["replicate"] = replicate
        if particle is not None:
            kw["particle"] = particle
        if purpose is not None:
            kw["purpose"] = purpose
        return replace(self, **kw)

    def generator(self) -> np.random.Generator:
        """A fresh Philox generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=(self.replicate, self.particle, self.purpose),
        )
        return np.random.Generator(np.random.Philox(ss))


def as_stream(seed_or_stream) -> RngStream:
    """Coerce an integer seed to a root stream; pass streams through."""
    if isinstance(seed_or_stream, RngStream):
        return seed_or_stream
    return RngStream(int(seed_or_stream))
