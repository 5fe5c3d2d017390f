"""Matching number, rainbow matchings and the s-overlapping predicate."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .core import Family, FamilyTuple, InputError, ProductSpace


@dataclass(frozen=True)
class MatchingCertificate:
    """Pairwise disjoint edges, optionally tagged with 1-based family indices."""

    space: ProductSpace
    edges: tuple[int, ...]
    families: tuple[int, ...] | None = None

    @property
    def size(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        out = {
            "size": self.size,
            "edges": [[f"{i}:{j}" for i, j in self.space.vertices(e)] for e in self.edges],
        }
        if self.families is not None:
            out["families"] = list(self.families)
        return out


def verify_certificate(cert: MatchingCertificate, families: Sequence[Family] | None = None) -> bool:
    """Re-check a certificate from scratch.

    Edges must be valid and pairwise disjoint. With ``families`` given and
    family indices present, the indices must be distinct and each edge must
    belong to its family.
    """
    seen = 0
    for e in cert.edges:
        if not cert.space.is_edge(e) or seen & e:
            return False
        seen |= e
    if cert.families is not None:
        if len(cert.families) != len(cert.edges) or len(set(cert.families)) != len(cert.families):
            return False
        if families is not None:
            for t, e in zip(cert.families, cert.edges):
                if not 1 <= t <= len(families) or e not in families[t - 1]:
                    return False
    return True


def _upper_bound(space: ProductSpace, cands: list[int]) -> int:
    union = 0
    for e in cands:
        union |= e
    ub = len(cands)
    for pm, (_, k) in zip(space.part_masks, space.parts):
        ub = min(ub, (union & pm).bit_count() // k)
    return ub


def _greedy(cands: list[int]) -> list[int]:
    used, out = 0, []
    for e in cands:
        if not e & used:
            out.append(e)
            used |= e
    return out


def matching_number(family: Family, cap: int | None = None) -> tuple[int, MatchingCertificate]:
    """Exact matching number by branch and bound.

    With ``cap`` the search stops as soon as ``cap + 1`` disjoint edges are
    found; a returned value of ``cap + 1`` then means "at least cap + 1".
    """
    space = family.space
    edges = list(family)
    if not edges:
        return 0, MatchingCertificate(space, ())
    conflicts = {e: sum(1 for f in edges if f & e) for e in edges}
    edges.sort(key=lambda e: (conflicts[e], space.key(e)))

    target = None if cap is None else cap + 1
    best = _greedy(edges)
    if target is not None and len(best) >= target:
        best = best[:target]
    else:
        chosen: list[int] = []

        def search(cands: list[int]) -> bool:
            nonlocal best
            if len(chosen) > len(best):
                best = list(chosen)
                if target is not None and len(best) >= target:
                    return True
            if not cands or len(chosen) + _upper_bound(space, cands) <= len(best):
                return False
            e, rest = cands[0], cands[1:]
            chosen.append(e)
            if search([f for f in rest if not f & e]):
                return True
            chosen.pop()
            return search(rest)

        search(edges)
    witness = tuple(sorted(best, key=space.key))
    return len(witness), MatchingCertificate(space, witness)


def has_rainbow_matching(tup: FamilyTuple | Sequence[Family]) -> tuple[bool, MatchingCertificate | None]:
    """Search for pairwise disjoint ``F_1 in F_1, ..., F_s in F_s``.

    Families are explored smallest first; the witness is reported in input
    order with 1-based family indices.
    """
    if not isinstance(tup, FamilyTuple):
        tup = FamilyTuple(tuple(tup))
    space = tup.space
    fams = [list(f) for f in tup]
    if any(not f for f in fams):
        return False, None
    order = sorted(range(len(fams)), key=lambda t: len(fams[t]))
    pick: list[int] = [0] * len(fams)

    def search(depth: int, used: int) -> bool:
        if depth == len(order):
            return True
        t = order[depth]
        for e in fams[t]:
            if e & used:
                continue
            nused = used | e
            # forward check: every later family still has an available edge
            if all(any(not f & nused for f in fams[u]) for u in order[depth + 1:]):
                pick[t] = e
                if search(depth + 1, nused):
                    return True
        return False

    if not search(0, 0):
        return False, None
    cert = MatchingCertificate(space, tuple(pick), tuple(range(1, len(fams) + 1)))
    return True, cert


def is_s_overlapping(families: Sequence[Family], s: int) -> tuple[bool, MatchingCertificate | None]:
    """True iff no ``s + 1`` distinct families admit a rainbow matching."""
    m = len(families)
    if s < 0:
        raise InputError(f"s must be non-negative, got {s}")
    if m <= s:
        raise InputError(f"need at least s + 1 = {s + 1} families, got {m}")
    # identical edge sets give identical answers; key combinations by content
    ids: dict[frozenset, int] = {}
    content = [ids.setdefault(f.edges, len(ids)) for f in families]
    memo: dict[tuple[int, ...], bool] = {}
    for combo in combinations(range(m), s + 1):
        if any(not families[t] for t in combo):
            continue
        key = tuple(sorted(content[t] for t in combo))
        if memo.get(key) is False:
            continue
        found, cert = has_rainbow_matching([families[t] for t in combo])
        memo[key] = found
        if found:
            return False, MatchingCertificate(cert.space, cert.edges, tuple(t + 1 for t in combo))
    return True, None


def rainbow_by_index(fam_masks: Sequence[int], disjoint_from: Sequence[int]) -> list[int] | None:
    """Rainbow search over families given as bitmasks of edge indices.

    ``disjoint_from[e]`` is the bitmask of edge indices disjoint from edge
    ``e``. Returns one edge index per family, or ``None``.
    """
    if any(f == 0 for f in fam_masks):
        return None
    order = sorted(range(len(fam_masks)), key=lambda t: fam_masks[t].bit_count())
    pick = [0] * len(fam_masks)

    def search(depth: int, allowed: int) -> bool:
        if depth == len(order):
            return True
        t = order[depth]
        cands = fam_masks[t] & allowed
        while cands:
            low = cands & -cands
            cands ^= low
            e = low.bit_length() - 1
            nallowed = allowed & disjoint_from[e]
            if all(fam_masks[u] & nallowed for u in order[depth + 1:]):
                pick[t] = e
                if search(depth + 1, nallowed):
                    return True
        return False

    full = (1 << len(disjoint_from)) - 1
    return pick if search(0, full) else None
