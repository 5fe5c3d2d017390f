"""Shifting (compression) on multipartite families."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import (
    Family,
    FamilyTuple,
    InputError,
    ProductSpace,
    Vertex,
    edge_dominates,
    enumerate_space,
    vertex_precedes,
)


@dataclass
class ShiftLog:
    """Effective shift steps ``(a, b, moved)`` in the order they ran."""

    steps: list[tuple[Vertex, Vertex, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_jsonl(self) -> str:
        lines = [
            json.dumps({"a": f"{a[0]}:{a[1]}", "b": f"{b[0]}:{b[1]}", "moved": moved})
            for a, b, moved in self.steps
        ]
        return "".join(line + "\n" for line in lines)


def _check_pair(space: ProductSpace, a: Vertex, b: Vertex) -> tuple[int, int]:
    if not vertex_precedes(space, a, b):
        raise InputError(f"shift needs a < b in one part, got {a} and {b}")
    return 1 << space.bit(a), 1 << space.bit(b)


def _shift_in_place(edges: set[int], abit: int, bbit: int) -> int:
    # Rewritten edges contain a and not b, so they never collide with a
    # later candidate; updating in place matches the simultaneous definition.
    moved = 0
    for e in [e for e in edges if e & bbit and not e & abit]:
        g = (e ^ bbit) | abit
        if g not in edges:
            edges.remove(e)
            edges.add(g)
            moved += 1
    return moved


def shift_once(family: Family, a: Vertex, b: Vertex) -> Family:
    """Apply ``S_ab``: replace ``b`` by ``a`` wherever the result is new."""
    abit, bbit = _check_pair(family.space, a, b)
    edges = set(family.edges)
    _shift_in_place(edges, abit, bbit)
    return family.with_edges(edges)


def shift_tuple_once(tup: FamilyTuple, a: Vertex, b: Vertex) -> FamilyTuple:
    """Apply the same ``S_ab`` to every family of the tuple."""
    return FamilyTuple(tuple(shift_once(f, a, b) for f in tup))


def _adjacent_pairs(space: ProductSpace) -> list[tuple[Vertex, Vertex]]:
    # round-robin over parts: (i, 1, 2) for every i, then (i, 2, 3), ...
    longest = max(space.ns)
    return [
        ((i, j), (i, j + 1))
        for j in range(1, longest)
        for i in range(1, space.ell + 1)
        if j < space.parts[i - 1][0]
    ]


def _fixpoint(space: ProductSpace, edge_sets: list[set[int]]) -> ShiftLog:
    log = ShiftLog()
    pairs = [(a, b, 1 << space.bit(a), 1 << space.bit(b)) for a, b in _adjacent_pairs(space)]
    clean = False
    while not clean:
        clean = True
        for a, b, abit, bbit in pairs:
            moved = sum(_shift_in_place(es, abit, bbit) for es in edge_sets)
            if moved:
                log.steps.append((a, b, moved))
                clean = False
    return log


def shift_to_fixpoint(family: Family) -> tuple[Family, ShiftLog]:
    """Shift until stable under every ``S_ab``.

    Adjacent swaps generate the whole order, so a clean pass over adjacent
    pairs certifies shiftedness. Each effective step strictly decreases the
    total of within-part positions, which bounds the number of passes.
    """
    edges = set(family.edges)
    log = _fixpoint(family.space, [edges])
    return family.with_edges(edges), log


def shift_tuple_to_fixpoint(tup: FamilyTuple) -> tuple[FamilyTuple, ShiftLog]:
    """Lockstep fixpoint: every step is applied to all families at once."""
    sets = [set(f.edges) for f in tup]
    log = _fixpoint(tup.space, sets)
    return FamilyTuple(tuple(f.with_edges(es) for f, es in zip(tup, sets))), log


def is_shifted(family: Family) -> bool:
    space = family.space
    edges = family.edges
    for i, (n, _) in enumerate(space.parts, 1):
        for p in range(1, n + 1):
            abit = 1 << space.bit((i, p))
            for q in range(p + 1, n + 1):
                bbit = 1 << space.bit((i, q))
                for e in edges:
                    if e & bbit and not e & abit and (e ^ bbit) | abit not in edges:
                        return False
    return True


def is_downward_closed(family: Family) -> bool:
    """Check ``A <= B, B in F  =>  A in F`` by brute force over the space."""
    space = family.space
    all_edges = list(enumerate_space(space))
    for b in family.edges:
        for a in all_edges:
            if a not in family.edges and edge_dominates(space, a, b):
                return False
    return True
