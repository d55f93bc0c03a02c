"""Seeded, hierarchically labelled random streams.

A stream is identified by ``(seed, path)``.  Two streams with the same
identity produce the same draws on every platform (PCG64 under a
``SeedSequence`` whose spawn key is derived from the path by SHA-256), so
substreams can be handed to independent stages without their results
depending on execution order.
"""
from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def _spawn_key(path: tuple) -> tuple:
    digest = hashlib.sha256("/".join(path).encode()).digest()
    return tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))


class RngStream:
    """Deterministic draw sequence for one ``(seed, path)`` pair."""

    def __init__(self, seed: int, path: tuple = (), transcript: list | None = None):
        self.seed = int(seed) & MASK64
        self.path = tuple(str(p) for p in path)
        self.transcript = transcript
        self._gen = None
        self._draws = 0

    def child(self, *labels) -> "RngStream":
        return RngStream(self.seed, self.path + tuple(str(x) for x in labels), self.transcript)

    def recording(self) -> "RngStream":
        """Same stream identity, with a fresh audit transcript attached."""
        return RngStream(self.seed, self.path, [])

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=_spawn_key(self.path))
            self._gen = np.random.Generator(np.random.PCG64(ss))
        return self._gen

    def _log(self, value):
        if self.transcript is not None:
            v = value.tolist() if isinstance(value, np.ndarray) else value
            self.transcript.append(("/".join(self.path), self._draws, v))
        self._draws += 1
        return value

    def integers(self, high: int, size=None):
        """Uniform integers in ``[0, high)``."""
        v = self.generator.integers(0, high, size=size)
        return self._log(v if size is not None else int(v))

    def random(self, size=None):
        v = self.generator.random(size)
        return self._log(v if size is not None else float(v))

    def choice(self, seq):
        return seq[self.integers(len(seq))]

    def sample_without_replacement(self, n: int, m: int) -> np.ndarray:
        """``m`` distinct integers from ``[0, n)`` in draw order."""
        return self._log(self.generator.choice(n, size=m, replace=False))

    def permutation(self, n: int) -> np.ndarray:
        return self._log(self.generator.permutation(n))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, path={'/'.join(self.path)!r})"


def as_stream(rng, *labels) -> RngStream:
    """Accept an ``RngStream`` or an integer seed."""
    if isinstance(rng, RngStream):
        return rng.child(*labels) if labels else rng
    return RngStream(0 if rng is None else int(rng), tuple(str(x) for x in labels))


def format_transcript(transcript) -> str:
    return "".join(f"{path}\t{idx}\t{value}\n" for path, idx, value in transcript)
