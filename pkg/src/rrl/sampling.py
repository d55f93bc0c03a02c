"""Partitionwise maps and their random generation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Edge, Params
from .errors import InvalidDomain, InvalidParams
from .rng import RngStream


@dataclass(frozen=True)
class PartitionwiseMap:
    """``images[i][w]`` is the vertex of part ``i`` that domain vertex ``w`` maps to."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(tuple(int(v) for v in part) for part in self.images))

    @property
    def domain_sizes(self) -> tuple:
        return tuple(len(p) for p in self.images)

    def image_set(self, i: int) -> tuple:
        """Distinct image vertices in part ``i``, sorted."""
        return tuple(sorted(set(self.images[i])))

    def check(self, params: Params) -> None:
        if len(self.images) != params.r:
            raise InvalidParams(f"map covers {len(self.images)} parts, graph has {params.r}")
        for i, part in enumerate(self.images):
            if any(not 0 <= v < params.part_sizes[i] for v in part):
                raise InvalidParams(f"image outside part {i}")


MapVector = tuple  # (phi_1, ..., phi_{k-1}); phi_s is used at arity s


def random_map(params: Params, m, rng: RngStream) -> PartitionwiseMap:
    """Each of the ``m_i`` domain vertices of part ``i`` maps independently and uniformly."""
    ms = (m,) * params.r if np.isscalar(m) else tuple(m)
    if len(ms) != params.r or min(ms) < 0:
        raise InvalidParams(f"bad domain sizes {m!r}")
    images = []
    for i, mi in enumerate(ms):
        images.append(tuple(int(v) for v in rng.integers(params.part_sizes[i], size=mi)) if mi else ())
    return PartitionwiseMap(tuple(images))


def random_map_vector(params: Params, ms, rng: RngStream) -> MapVector:
    """Independent maps ``phi_s in Phi(m_s)`` for ``s = 1 .. k-1``."""
    ms = tuple(ms)
    if len(ms) != params.k - 1:
        raise InvalidParams(f"need k-1={params.k - 1} domain sizes, got {len(ms)}")
    return tuple(random_map(params, m, rng.child("phi", s + 1)) for s, m in enumerate(ms))


def apply_map(phi: PartitionwiseMap, e: Edge) -> Edge:
    """Image of a domain edge under ``phi``; the index set is preserved."""
    verts = []
    for i, w in zip(e.index, e.verts):
        if i >= len(phi.images) or not 0 <= w < len(phi.images[i]):
            raise InvalidDomain(f"domain vertex {w} of part {i} outside map domain")
        verts.append(phi.images[i][w])
    return Edge(e.index, tuple(verts))


def format_map(phi: PartitionwiseMap) -> str:
    return "".join(f"{i}" + "".join(f" {v}" for v in part) + "\n" for i, part in enumerate(phi.images))


def parse_map(text: str, r: int) -> PartitionwiseMap:
    images = [()] * r
    for line in text.splitlines():
        tok = line.split("#", 1)[0].split()
        if not tok:
            continue
        i = int(tok[0])
        if not 0 <= i < r:
            raise InvalidParams(f"map line for unknown part {i}")
        images[i] = tuple(int(x) for x in tok[1:])
    return PartitionwiseMap(tuple(images))
