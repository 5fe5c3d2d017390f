"""Extremal and test families."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
from typing import Iterator

from .core import DEFAULT_ENUMERATION_CAP, Family, InputError, ProductSpace, ResourceError


@dataclass(frozen=True)
class CoverSpec:
    """Cover set ``S_i``: the first ``size`` vertices of part ``part`` (1-based)."""

    part: int
    size: int

    def check(self, space: ProductSpace) -> "CoverSpec":
        if not 1 <= self.part <= space.ell:
            raise InputError(f"cover part {self.part} out of range 1..{space.ell}")
        n = space.parts[self.part - 1][0]
        if not 0 <= self.size <= n:
            raise InputError(f"cover size {self.size} out of range 0..{n}")
        return self


@lru_cache(maxsize=None)
def _local_combinations(n: int, k: int) -> tuple[int, ...]:
    return tuple(sum(1 << p for p in c) for c in combinations(range(n), k))


def cover_factors(space: ProductSpace, spec: CoverSpec) -> list[list[int]]:
    """Per-part edge pieces whose products are exactly the cover family.

    Part ``i`` contributes the ``k_i``-subsets meeting ``S_i``; every other
    part contributes all of its ``k_j``-subsets.
    """
    spec.check(space)
    cover = (1 << spec.size) - 1
    factors = []
    for p, ((n, k), off) in enumerate(zip(space.parts, space.offsets), 1):
        local = _local_combinations(n, k)
        if p == spec.part:
            local = tuple(c for c in local if c & cover)
        factors.append([c << off for c in local])
    return factors


@lru_cache(maxsize=None)
def _meeting_count(n: int, k: int, s: int) -> int:
    cover = (1 << s) - 1
    return sum(1 for c in _local_combinations(n, k) if c & cover)


def cover_family_count(space: ProductSpace, spec: CoverSpec) -> int:
    """Size of the cover family, counted over the enumerated per-part factors."""
    spec.check(space)
    return prod(
        _meeting_count(n, k, spec.size) if p == spec.part else len(_local_combinations(n, k))
        for p, (n, k) in enumerate(space.parts, 1)
    )


def iter_cover_family(space: ProductSpace, spec: CoverSpec) -> Iterator[int]:
    for pieces in product(*cover_factors(space, spec)):
        mask = 0
        for piece in pieces:
            mask |= piece
        yield mask


def build_cover_family(space: ProductSpace, spec: CoverSpec,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> Family:
    """All edges meeting ``S_i = {v_{i,1}, ..., v_{i,s}}``."""
    count = cover_family_count(space, spec)
    if count > cap:
        raise ResourceError(f"cover family has {count} edges, above cap {cap}", count=count, cap=cap)
    return Family(space, frozenset(iter_cover_family(space, spec)))


def build_clique_family(space: ProductSpace, s: int) -> Family:
    """All ``k``-subsets of the first ``(s + 1) k - 1`` vertices (one part only)."""
    if space.ell != 1:
        raise InputError("the clique construction is defined for a single part")
    n, k = space.parts[0]
    width = (s + 1) * k - 1
    if s < 0 or width > n:
        raise InputError(f"need 0 <= s and (s + 1) k - 1 <= n, got s={s}, k={k}, n={n}")
    return Family(space, frozenset(_local_combinations(width, k)))


def random_family(space: ProductSpace, target_size: int, seed: int) -> Family:
    """``target_size`` distinct edges chosen uniformly, reproducible from ``seed``."""
    if not 0 <= target_size <= space.size:
        raise InputError(f"target size {target_size} outside 0..{space.size}")
    rng = random.Random(seed)
    picks = rng.sample(range(space.size), target_size)
    radices = [comb(n, k) for n, k in space.parts]
    tables = [_local_combinations(n, k) for n, k in space.parts]
    edges = set()
    for idx in picks:
        mask = 0
        for p in range(space.ell - 1, -1, -1):
            idx, r = divmod(idx, radices[p])
            mask |= tables[p][r] << space.offsets[p]
        edges.add(mask)
    return Family(space, frozenset(edges))
