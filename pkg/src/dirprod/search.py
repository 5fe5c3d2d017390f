"""Exact extremal search at desk scale.

Two problems:

* the largest family with matching number at most ``s``;
* the largest ``min_t |F_t|`` over rainbow-matching-free ``(F_1, ..., F_s)``.

Both are compared with the closed-form bounds by :func:`verify_theorem`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .bounds import (
    BoundReport,
    matching_threshold_holds,
    product_matching_bound,
    product_rainbow_bound,
    rainbow_threshold_holds,
)
from .constructions import CoverSpec, build_cover_family
from .core import Family, FamilyTuple, InputError, ProductSpace, ResourceError, enumerate_space
from .matching import has_rainbow_matching, matching_number, rainbow_by_index

EXHAUSTIVE_MAX_EDGES = 24
BNB_MAX_EDGES = 64
RAINBOW_MAX_TUPLES = 2 * 10**6
RAINBOW_MAX_FAMILIES = 2**12
CHUNK = 1 << 20


@dataclass(frozen=True)
class SearchResult:
    size: int
    witness: Family


@dataclass(frozen=True)
class RainbowSearchResult:
    min_size: int
    witness: FamilyTuple


def _predecessors(space: ProductSpace, e: int) -> list[int]:
    """Edges one elementary step below ``e``: some ``v_{i,j}`` replaced by ``v_{i,j-1}``."""
    out = []
    for i, (n, _) in enumerate(space.parts):
        off = space.offsets[i]
        for j in range(1, n):
            hi, lo = 1 << (off + j), 1 << (off + j - 1)
            if e & hi and not e & lo:
                out.append((e ^ hi) | lo)
    return out


def _linear_extension(space: ProductSpace, edges: list[int]) -> list[int]:
    return sorted(edges, key=lambda e: (sum(space.key(e)), space.key(e)))


def _matchings(edges: list[int], size: int) -> list[int]:
    """All ``size``-matchings as bitmasks over edge indices."""
    out = []

    def rec(start: int, used: int, picked: int, depth: int):
        if depth == size:
            out.append(picked)
            return
        for t in range(start, len(edges)):
            if not edges[t] & used:
                rec(t + 1, used | edges[t], picked | 1 << t, depth + 1)

    rec(0, 0, 0, 0)
    return out


def _has_matching(cands: list[int], t: int) -> bool:
    if t <= 0:
        return True
    if len(cands) < t:
        return False
    e, rest = cands[0], cands[1:]
    return _has_matching([f for f in rest if not f & e], t - 1) or _has_matching(rest, t)


def _exhaustive_matching(space: ProductSpace, edges: list[int], s: int,
                         shifted_only: bool) -> tuple[int, int]:
    count = len(edges)
    index = {e: t for t, e in enumerate(edges)}
    forbidden = _matchings(edges, s + 1)
    implications = []
    if shifted_only:
        for e in edges:
            implications.extend((index[e], index[p]) for p in _predecessors(space, e))
    best_size, best_mask = -1, 0
    total = 1 << count
    for start in range(0, total, CHUNK):
        subs = np.arange(start, min(total, start + CHUNK), dtype=np.uint64)
        ok = np.ones(len(subs), dtype=bool)
        for mm in forbidden:
            mm = np.uint64(mm)
            ok &= (subs & mm) != mm
        for e, p in implications:
            ok &= ((subs >> np.uint64(e)) & np.uint64(1)) <= ((subs >> np.uint64(p)) & np.uint64(1))
        if not ok.any():
            continue
        sizes = np.where(ok, np.bitwise_count(subs).astype(np.int64), -1)
        at = int(np.argmax(sizes))
        if sizes[at] > best_size:
            best_size, best_mask = int(sizes[at]), int(subs[at])
    return best_size, best_mask


def _bnb_matching(space: ProductSpace, edges: list[int], s: int,
                  shifted_only: bool) -> tuple[int, list[int]]:
    if shifted_only:
        edges = _linear_extension(space, edges)
    preds = {e: _predecessors(space, e) for e in edges} if shifted_only else {}
    best: list[int] = []
    chosen: list[int] = []
    chosen_set: set[int] = set()

    def rec(t: int):
        nonlocal best
        if len(chosen) + len(edges) - t <= len(best):
            return
        if t == len(edges):
            best = list(chosen)
            return
        e = edges[t]
        allowed = s >= 1 and not _has_matching([f for f in chosen if not f & e], s)
        if allowed and shifted_only:
            allowed = all(p in chosen_set for p in preds[e])
        if allowed:
            chosen.append(e)
            chosen_set.add(e)
            rec(t + 1)
            chosen.pop()
            chosen_set.discard(e)
        rec(t + 1)

    rec(0)
    return len(best), best


def max_family_with_matching_cap(space: ProductSpace, s: int, mode: str = "exhaustive",
                                 shifted_only: bool = False) -> SearchResult:
    """Largest ``|F|`` with ``nu(F) <= s``, with a witness.

    ``exhaustive`` scans all ``2^E`` subfamilies against the list of
    ``(s+1)``-matchings (``E <= 24``); ``bnb`` is include/exclude branch and
    bound with an incremental matching test (``E <= 64``). ``shifted_only``
    restricts either mode to shifted families.
    """
    if s < 0:
        raise InputError(f"s must be non-negative, got {s}")
    if mode not in ("exhaustive", "bnb"):
        raise InputError(f"unknown mode {mode!r}")
    limit = EXHAUSTIVE_MAX_EDGES if mode == "exhaustive" else BNB_MAX_EDGES
    if space.size > limit:
        raise ResourceError(f"{space.size} edges exceed the {mode} limit of {limit}",
                            count=space.size, cap=limit)
    edges = list(enumerate_space(space))
    if mode == "exhaustive":
        size, mask = _exhaustive_matching(space, edges, s, shifted_only)
        picked = [edges[t] for t in range(len(edges)) if mask >> t & 1]
    else:
        size, picked = _bnb_matching(space, edges, s, shifted_only)
    return SearchResult(size, Family(space, frozenset(picked)))


def shifted_families(space: ProductSpace, limit: int = RAINBOW_MAX_FAMILIES) -> list[frozenset[int]]:
    """Every shifted (downward closed) family of the space."""
    edges = _linear_extension(space, list(enumerate_space(space, cap=BNB_MAX_EDGES)))
    preds = {e: _predecessors(space, e) for e in edges}
    out: list[frozenset[int]] = []
    current: set[int] = set()

    def rec(t: int):
        if len(out) > limit:
            raise ResourceError(f"more than {limit} shifted families", count=len(out), cap=limit)
        if t == len(edges):
            out.append(frozenset(current))
            return
        e = edges[t]
        if all(p in current for p in preds[e]):
            current.add(e)
            rec(t + 1)
            current.discard(e)
        rec(t + 1)

    rec(0)
    return out


def _all_families(space: ProductSpace) -> list[frozenset[int]]:
    edges = list(enumerate_space(space, cap=BNB_MAX_EDGES))
    if 1 << len(edges) > RAINBOW_MAX_FAMILIES:
        raise ResourceError(f"2^{len(edges)} families exceed {RAINBOW_MAX_FAMILIES}",
                            count=1 << len(edges), cap=RAINBOW_MAX_FAMILIES)
    return [frozenset(e for t, e in enumerate(edges) if mask >> t & 1) for mask in range(1 << len(edges))]


def max_rainbow_free_tuple(space: ProductSpace, s: int, mode: str = "bnb",
                           shifted_only: bool = True) -> RainbowSearchResult:
    """Largest ``min_t |F_t|`` over rainbow-matching-free ``s``-tuples.

    Tuples are enumerated as multisets (rainbow-freeness and the minimum do
    not depend on order). ``shifted_only`` limits candidates to shifted
    families, which loses nothing because lockstep shifting keeps a tuple
    rainbow free and keeps every size. ``bnb`` stops descending once the
    tuple minimum cannot beat the best found; ``exhaustive`` checks every
    multiset.
    """
    if s < 2:
        raise InputError(f"the rainbow search needs s >= 2, got {s}")
    if mode not in ("exhaustive", "bnb"):
        raise InputError(f"unknown mode {mode!r}")
    cands = shifted_families(space) if shifted_only else _all_families(space)
    tuples = comb(len(cands) + s - 1, s)
    if mode == "exhaustive" and tuples > RAINBOW_MAX_TUPLES:
        raise ResourceError(f"{tuples} tuples exceed {RAINBOW_MAX_TUPLES}",
                            count=tuples, cap=RAINBOW_MAX_TUPLES)
    edges = list(enumerate_space(space))
    index = {e: t for t, e in enumerate(edges)}
    disjoint_from = [sum(1 << u for u, f in enumerate(edges) if not e & f) for e in edges]
    cands.sort(key=lambda f: (-len(f), sorted(index[e] for e in f)))
    masks = [sum(1 << index[e] for e in f) for f in cands]

    best, best_pick = -1, None
    if mode == "exhaustive":
        for pick in combinations_with_replacement(range(len(cands)), s):
            low = len(cands[pick[-1]])
            if low > best and rainbow_by_index([masks[i] for i in pick], disjoint_from) is None:
                best, best_pick = low, pick
    else:
        pick: list[int] = []

        def rec(start: int):
            nonlocal best, best_pick
            if len(pick) == s:
                if rainbow_by_index([masks[i] for i in pick], disjoint_from) is None:
                    best, best_pick = len(cands[pick[-1]]), tuple(pick)
                return
            for i in range(start, len(cands)):
                if len(cands[i]) <= best:
                    break
                pick.append(i)
                rec(i)
                pick.pop()

        rec(0)
    witness = FamilyTuple(tuple(Family(space, cands[i]) for i in best_pick))
    return RainbowSearchResult(best, witness)


@dataclass
class VerdictReport:
    theorem: str
    space: ProductSpace
    s: int
    threshold_satisfied: bool
    bound: BoundReport
    search_value: int
    vacuous: bool
    construction_size: int
    construction_valid: bool
    witness: list[Family]
    timings: dict = field(default_factory=dict)

    @property
    def bound_holds(self) -> bool:
        return self.search_value <= self.bound.value

    @property
    def bound_attained(self) -> bool:
        return (self.construction_valid and self.construction_size == self.bound.value
                and self.search_value == self.bound.value)

    @property
    def verdict(self) -> str:
        if self.vacuous:
            return "vacuous"
        return "holds" if self.bound_holds else "violated"

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "schema": 1,
            "theorem": self.theorem,
            "n": list(self.space.ns),
            "k": list(self.space.ks),
            "s": self.s,
            "threshold_satisfied": self.threshold_satisfied,
            "bound": str(self.bound.value),
            "bound_part": self.bound.witness,
            "search_value": str(self.search_value),
            "bound_holds": self.bound_holds,
            "construction_size": str(self.construction_size),
            "construction_valid": self.construction_valid,
            "bound_attained": self.bound_attained,
            "vacuous": self.vacuous,
            "verdict": self.verdict,
            "witness": [[self.space.format_edge(e) for e in f] for f in self.witness],
        }
        if timings:
            out["timings"] = self.timings
        return out


def verify_theorem(space: ProductSpace, s: int, theorem: str = "matching",
                   mode: str | None = None) -> VerdictReport:
    """Compare the exact extremal value with the closed-form bound.

    Reports whether the size threshold holds, whether the bound holds, and
    whether the cover construction attains it. For the rainbow problem the
    construction is ``F_1 = ... = F_s = E_i(n, k, s - 1)``.
    """
    ns, ks = space.ns, space.ks
    top = min(n // k for n, k in space.parts)
    timings = {}
    t0 = time.perf_counter()
    if theorem == "matching":
        bound = product_matching_bound(ns, ks, s)
        threshold = matching_threshold_holds(ns, ks, s)
        vacuous = s >= top
        if mode is None:
            mode = "exhaustive" if space.size <= EXHAUSTIVE_MAX_EDGES else "bnb"
        res = max_family_with_matching_cap(space, s, mode)
        value, witness = res.size, [res.witness]
        timings["search"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        part = bound.witness
        cover = build_cover_family(space, CoverSpec(part, min(s, space.parts[part - 1][0])))
        valid = matching_number(cover, cap=s)[0] <= s
    elif theorem == "rainbow":
        bound = product_rainbow_bound(ns, ks, s)
        threshold = rainbow_threshold_holds(ns, ks, s)
        vacuous = s > top
        res = max_rainbow_free_tuple(space, s, mode or "bnb")
        value, witness = res.min_size, list(res.witness)
        timings["search"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        part = bound.witness
        cover = build_cover_family(space, CoverSpec(part, min(s - 1, space.parts[part - 1][0])))
        valid = not has_rainbow_matching([cover] * s)[0]
    else:
        raise InputError(f"unknown theorem {theorem!r}")
    timings["construction"] = time.perf_counter() - t0
    return VerdictReport(theorem, space, s, threshold, bound, value, vacuous,
                         len(cover), valid, witness, timings)
