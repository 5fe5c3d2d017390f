"""Naive reference implementations used to cross-check the library.

Nothing here imports the search code it is meant to check; each function
works directly from the definitions, trading speed for obviousness.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from dirprod import Family, ProductSpace


def all_edges(space: ProductSpace) -> list[int]:
    """Every product edge, built from vertex tuples rather than bit tricks."""
    per_part = [
        [tuple((i, j) for j in c) for c in combinations(range(1, n + 1), k)]
        for i, (n, k) in enumerate(space.parts, 1)
    ]
    return [space.edge([v for piece in pick for v in piece]) for pick in product(*per_part)]


def pairwise_disjoint(edges) -> bool:
    return all(not (a & b) for a, b in combinations(edges, 2))


def brute_nu(edges) -> int:
    """Largest r such that some r-subset of ``edges`` is pairwise disjoint."""
    edges = list(edges)
    best = 0
    for r in range(1, len(edges) + 1):
        if any(pairwise_disjoint(c) for c in combinations(edges, r)):
            best = r
        else:
            break
    return best


def brute_rainbow(families) -> bool:
    """Direct product over the families, one edge from each."""
    return any(pairwise_disjoint(pick) for pick in product(*[list(f) for f in families]))


def dominates_by_permutation(space: ProductSpace, a: int, b: int) -> bool:
    """A ≺= B via the bijection definition: some per-part matching of
    positions of A onto positions of B that never increases an index."""
    for p in range(1, space.ell + 1):
        pa, pb = space.positions(a, p), space.positions(b, p)
        if not any(all(x <= y for x, y in zip(pa, perm)) for perm in permutations(pb)):
            return False
    return True


def shift_edges(space: ProductSpace, edges: set[int], a, b) -> set[int]:
    """S_ab written straight from the definition on vertex sets."""
    out = set()
    for e in edges:
        verts = set(space.vertices(e))
        if b in verts and a not in verts:
            moved = space.edge((verts - {b}) | {a})
            out.add(e if moved in edges else moved)
        else:
            out.add(e)
    return out


def reference_fixpoint(space: ProductSpace, edges: set[int]) -> set[int]:
    """Apply every S_ab with a before b in the same part until nothing moves."""
    pairs = [((i, x), (i, y)) for i, (n, _) in enumerate(space.parts, 1)
             for x in range(1, n + 1) for y in range(x + 1, n + 1)]
    edges = set(edges)
    while True:
        before = set(edges)
        for a, b in pairs:
            edges = shift_edges(space, edges, a, b)
        if edges == before:
            return edges


def random_space(rng: random.Random, max_n: int = 5, max_k: int = 2, max_parts: int = 2,
                 max_vertices: int = 12) -> ProductSpace:
    while True:
        ell = rng.randint(1, max_parts)
        parts = []
        for _ in range(ell):
            n = rng.randint(1, max_n)
            parts.append((n, rng.randint(1, min(n, max_k))))
        if sum(n for n, _ in parts) <= max_vertices:
            return ProductSpace(tuple(parts))


def random_subfamily(rng: random.Random, space: ProductSpace, max_size: int) -> Family:
    edges = all_edges(space)
    size = rng.randint(0, min(max_size, len(edges)))
    return Family(space, frozenset(rng.sample(edges, size)))
