"""Ground structure for direct products of uniform set systems.

A :class:`ProductSpace` is a list of parts ``(n_i, k_i)``. Vertex ``(i, j)``
is the ``j``-th vertex of part ``i`` (both 1-based) and occupies bit
``offset_i + j - 1`` of an integer bitmask. An edge is a bitmask with exactly
``k_i`` bits set inside part ``i`` for every ``i``; disjointness of two edges
is a single ``&``.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import comb, prod
from typing import Iterable, Iterator, Sequence, TextIO

Vertex = tuple[int, int]

DEFAULT_ENUMERATION_CAP = 10**7


class InputError(ValueError):
    """Malformed or out-of-range input."""


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, message: str, count: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.count = count
        self.cap = cap


def bits_of(mask: int) -> list[int]:
    """Positions of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class ProductSpace:
    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        parts = tuple((int(n), int(k)) for n, k in self.parts)
        if not parts:
            raise InputError("a product space needs at least one part")
        for i, (n, k) in enumerate(parts, 1):
            if not 1 <= k <= n:
                raise InputError(f"part {i}: need 1 <= k <= n, got n={n}, k={k}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_lists(cls, ns: Sequence[int], ks: Sequence[int]) -> "ProductSpace":
        if len(ns) != len(ks):
            raise InputError(f"n and k have different lengths ({len(ns)} vs {len(ks)})")
        return cls(tuple(zip(ns, ks)))

    @property
    def ell(self) -> int:
        return len(self.parts)

    @property
    def ns(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.parts)

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.parts)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for n, _ in self.parts:
            out.append(acc)
            acc += n
        return tuple(out)

    @property
    def N(self) -> int:
        """Total number of vertices."""
        return sum(self.ns)

    @property
    def k(self) -> int:
        """Uniformity of every edge."""
        return sum(self.ks)

    @cached_property
    def size(self) -> int:
        """Number of edges of the full direct product."""
        return prod(comb(n, k) for n, k in self.parts)

    @cached_property
    def part_masks(self) -> tuple[int, ...]:
        return tuple(((1 << n) - 1) << off for (n, _), off in zip(self.parts, self.offsets))

    # vertices -----------------------------------------------------------

    def check_vertex(self, v: Vertex) -> Vertex:
        try:
            i, j = v
        except (TypeError, ValueError):
            raise InputError(f"vertex must be a pair (part, index), got {v!r}") from None
        if not 1 <= i <= self.ell:
            raise InputError(f"vertex {i}:{j}: part out of range 1..{self.ell}")
        if not 1 <= j <= self.parts[i - 1][0]:
            raise InputError(f"vertex {i}:{j}: index out of range 1..{self.parts[i - 1][0]}")
        return (i, j)

    def bit(self, v: Vertex) -> int:
        i, j = self.check_vertex(v)
        return self.offsets[i - 1] + j - 1

    def vertex_at(self, bit: int) -> Vertex:
        for i in range(self.ell - 1, -1, -1):
            if bit >= self.offsets[i]:
                j = bit - self.offsets[i] + 1
                if j > self.parts[i][0]:
                    break
                return (i + 1, j)
        raise InputError(f"bit {bit} outside a space with {self.N} vertices")

    # edges --------------------------------------------------------------

    def is_edge(self, mask: int) -> bool:
        if mask < 0 or mask >> self.N:
            return False
        return all((mask & pm).bit_count() == k for pm, (_, k) in zip(self.part_masks, self.parts))

    def check_edge(self, mask: int) -> int:
        if not self.is_edge(mask):
            raise InputError(f"{self.format_edge(mask, strict=False)} is not an edge of {self}")
        return mask

    def edge(self, vertices: Iterable[Vertex]) -> int:
        """Encode an iterable of ``(i, j)`` vertices as an edge bitmask."""
        mask = 0
        for v in vertices:
            b = 1 << self.bit(v)
            if mask & b:
                raise InputError(f"duplicate vertex {v[0]}:{v[1]}")
            mask |= b
        for i, (pm, (_, k)) in enumerate(zip(self.part_masks, self.parts), 1):
            got = (mask & pm).bit_count()
            if got != k:
                raise InputError(f"part {i} has {got} vertices, expected {k}")
        return mask

    def vertices(self, mask: int) -> tuple[Vertex, ...]:
        return tuple(self.vertex_at(b) for b in bits_of(mask))

    def positions(self, mask: int, part: int) -> list[int]:
        """Sorted 1-based positions of ``mask`` inside ``part``."""
        off = self.offsets[part - 1]
        return [b - off + 1 for b in bits_of(mask & self.part_masks[part - 1])]

    def key(self, mask: int) -> tuple[int, ...]:
        """Sort key giving lexicographic order on sorted vertex lists."""
        return tuple(bits_of(mask))

    def format_edge(self, mask: int, strict: bool = True) -> str:
        if strict:
            self.check_edge(mask)
        return " ".join(f"{i}:{j}" for i, j in self.vertices(mask))

    def parse_edge(self, text: str) -> int:
        return self.edge(parse_vertex(tok) for tok in text.split())

    # part manipulation --------------------------------------------------

    def canonical_order(self) -> tuple[int, ...]:
        """0-based part order with ``n_i / k_i`` ascending (stable on ties)."""
        return tuple(sorted(range(self.ell), key=lambda i: Fraction(*self.parts[i])))

    def permuted(self, order: Sequence[int]) -> "ProductSpace":
        if sorted(order) != list(range(self.ell)):
            raise InputError(f"{order!r} is not a permutation of the parts")
        return ProductSpace(tuple(self.parts[i] for i in order))

    def header(self) -> str:
        return "space " + " ".join([str(self.ell)] + [f"{n} {k}" for n, k in self.parts])

    def __str__(self) -> str:
        return "ProductSpace(n=%s, k=%s)" % (list(self.ns), list(self.ks))


def parse_vertex(token: str) -> Vertex:
    try:
        a, b = token.split(":")
        return (int(a), int(b))
    except ValueError:
        raise InputError(f"bad vertex token {token!r}, expected 'i:j'") from None


def vertex_precedes(space: ProductSpace, a: Vertex, b: Vertex) -> bool:
    """Strict multipartite order: same part and smaller index."""
    a = space.check_vertex(a)
    b = space.check_vertex(b)
    return a[0] == b[0] and a[1] < b[1]


def edge_dominates(space: ProductSpace, a: int, b: int) -> bool:
    """True iff ``a`` precedes or equals ``b`` in the edge order.

    Cross-part vertices are incomparable, so a matching permutation exists
    iff, in every part, the sorted positions of ``a`` are coordinatewise at
    most those of ``b``.
    """
    space.check_edge(a)
    space.check_edge(b)
    for part in range(1, space.ell + 1):
        if any(x > y for x, y in zip(space.positions(a, part), space.positions(b, part))):
            return False
    return True


def _part_combinations(space: ProductSpace, part: int) -> list[int]:
    n, k = space.parts[part]
    off = space.offsets[part]
    return [sum(1 << (off + p) for p in c) for c in combinations(range(n), k)]


def enumerate_space(space: ProductSpace, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[int]:
    """Yield every edge once, in lexicographic order of vertex lists."""
    if space.size > cap:
        raise ResourceError(
            f"space has {space.size} edges, above the enumeration cap {cap}",
            count=space.size, cap=cap,
        )
    factors = [_part_combinations(space, p) for p in range(space.ell)]
    for pieces in product(*factors):
        mask = 0
        for piece in pieces:
            mask |= piece
        yield mask


@dataclass(frozen=True)
class Family:
    """A set of edges of one product space."""

    space: ProductSpace
    edges: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset(self.edges)
        for e in edges:
            self.space.check_edge(e)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def full(cls, space: ProductSpace, cap: int = DEFAULT_ENUMERATION_CAP) -> "Family":
        return cls(space, frozenset(enumerate_space(space, cap)))

    @classmethod
    def from_vertex_lists(cls, space: ProductSpace, edges: Iterable[Iterable[Vertex]]) -> "Family":
        return cls(space, frozenset(space.edge(e) for e in edges))

    @cached_property
    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges, key=self.space.key))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted_edges)

    def __contains__(self, mask: object) -> bool:
        return mask in self.edges

    def with_edges(self, edges: Iterable[int]) -> "Family":
        return Family(self.space, frozenset(edges))

    def vertex_lists(self) -> list[tuple[Vertex, ...]]:
        return [self.space.vertices(e) for e in self]


@dataclass(frozen=True)
class FamilyTuple:
    """Ordered families ``F_1, ..., F_s`` over one space."""

    families: tuple[Family, ...]

    def __post_init__(self):
        fams = tuple(self.families)
        if not fams:
            raise InputError("a family tuple needs s >= 1 families")
        space = fams[0].space
        for t, f in enumerate(fams, 1):
            if f.space != space:
                raise InputError(f"family {t} lives in {f.space}, expected {space}")
        object.__setattr__(self, "families", fams)

    @property
    def space(self) -> ProductSpace:
        return self.families[0].space

    @property
    def s(self) -> int:
        return len(self.families)

    def __len__(self) -> int:
        return len(self.families)

    def __iter__(self) -> Iterator[Family]:
        return iter(self.families)

    def __getitem__(self, t: int) -> Family:
        return self.families[t]


def permute_edge(space: ProductSpace, mask: int, order: Sequence[int]) -> int:
    """Re-encode ``mask`` for ``space.permuted(order)``."""
    target = space.permuted(order)
    out = 0
    for new_idx, old_idx in enumerate(order):
        chunk = (mask & space.part_masks[old_idx]) >> space.offsets[old_idx]
        out |= chunk << target.offsets[new_idx]
    return out


def permute_family(family: Family, order: Sequence[int]) -> Family:
    space = family.space
    return Family(space.permuted(order), frozenset(permute_edge(space, e, order) for e in family.edges))


# file format ------------------------------------------------------------

def format_family(family: Family) -> str:
    lines = [family.space.header()]
    lines.extend(family.space.format_edge(e, strict=False) for e in family)
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> Family:
    """Parse the text family format.

    First non-blank line: ``space l n_1 k_1 ... n_l k_l``; then one edge per
    line as ``i:j`` tokens. Blank lines and ``#`` comments are skipped.
    Duplicate edges are merged.
    """
    space = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if space is None:
            toks = line.split()
            if toks[0] != "space":
                raise InputError(f"line {lineno}: expected 'space' header")
            try:
                nums = [int(t) for t in toks[1:]]
            except ValueError:
                raise InputError(f"line {lineno}: non-integer in header") from None
            if not nums or len(nums) != 1 + 2 * nums[0]:
                raise InputError(f"line {lineno}: header must list l then l (n, k) pairs")
            space = ProductSpace(tuple(zip(nums[1::2], nums[2::2])))
            continue
        try:
            edges.add(space.parse_edge(line))
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if space is None:
        raise InputError("missing 'space' header")
    return Family(space, frozenset(edges))


def write_family(family: Family, dest: str | os.PathLike | TextIO) -> None:
    text = format_family(family)
    if isinstance(dest, io.TextIOBase) or hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_family(src: str | os.PathLike | TextIO) -> Family:
    if hasattr(src, "read"):
        return parse_family(src.read())
    with open(src, encoding="utf-8") as fh:
        return parse_family(fh.read())
