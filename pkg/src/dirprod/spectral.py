"""Kneser graph spectra, the disjointness graph on a direct product, and
the expander-mixing audit."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from .bounds import _check_lists, binom, canonical_order
from .core import Family, InputError, ProductSpace


@dataclass(frozen=True)
class SpectrumReport:
    pairs: tuple[tuple[int, int], ...]  # (eigenvalue, multiplicity), eigenvalue descending
    degree: int
    vertex_count: int
    lam: int
    degenerate: bool = False

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "eigenvalues": [{"value": str(v), "multiplicity": str(m)} for v, m in self.pairs],
            "degree": str(self.degree),
            "vertex_count": str(self.vertex_count),
            "lambda": str(self.lam),
            "degenerate": self.degenerate,
        }


def _merge(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    acc: dict[int, int] = defaultdict(int)
    for v, m in pairs:
        acc[v] += m
    return tuple(sorted(((v, m) for v, m in acc.items() if m), reverse=True))


def second_absolute(pairs: Sequence[tuple[int, int]], degree: int) -> int:
    """Largest ``|eigenvalue|`` after removing one copy of ``degree``."""
    best = 0
    for v, m in pairs:
        if v == degree:
            m -= 1
        if m > 0:
            best = max(best, abs(v))
    return best


def kneser_spectrum(n: int, k: int) -> SpectrumReport:
    """Spectrum of KG(n, k): ``(-1)^i C(n-k-i, k-i)`` with multiplicity
    ``C(n,i) - C(n,i-1)`` for ``i = 0..k``.

    For ``n < 2k`` the graph has no edges and the report is flagged
    degenerate (all eigenvalues zero).
    """
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= n, got n={n}, k={k}")
    count = binom(n, k)
    if n < 2 * k:
        return SpectrumReport(((0, count),), 0, count, 0, degenerate=True)
    pairs = _merge(
        ((-1) ** i * binom(n - k - i, k - i), binom(n, i) - binom(n, i - 1))
        for i in range(k + 1)
    )
    degree = binom(n - k, k)
    return SpectrumReport(pairs, degree, count, second_absolute(pairs, degree))


def product_graph_spectrum(ns: Sequence[int], ks: Sequence[int]) -> SpectrumReport:
    """Spectrum of the disjointness graph on the direct product.

    Its adjacency matrix is the Kronecker product of the Kneser adjacency
    matrices, so eigenvalues are products of per-part eigenvalues.
    """
    ns, ks = _check_lists(ns, ks)
    order = canonical_order(ns, ks)
    ns = tuple(ns[i] for i in order)
    ks = tuple(ks[i] for i in order)
    parts = [kneser_spectrum(n, k) for n, k in zip(ns, ks)]
    pairs: tuple[tuple[int, int], ...] = ((1, 1),)
    for spec in parts:
        pairs = _merge((v * w, m * c) for v, m in pairs for w, c in spec.pairs)
    degree = prod(p.degree for p in parts)
    count = prod(p.vertex_count for p in parts)
    lam = second_absolute(pairs, degree)
    if all(n > 2 * k for n, k in zip(ns, ks)):
        expected = Fraction(ks[0], ns[0] - ks[0]) * degree
        if lam != expected:
            raise AssertionError(f"second eigenvalue {lam} != (k_1/(n_1-k_1)) D = {expected}")
    return SpectrumReport(pairs, degree, count, lam, degenerate=any(p.degenerate for p in parts))


@dataclass(frozen=True)
class MixingAudit:
    size: int
    edges_inside: int
    degree: int
    vertex_count: int
    lam: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.size, self.vertex_count)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "size": self.size,
            "edges_inside": str(self.edges_inside),
            "degree": str(self.degree),
            "vertex_count": str(self.vertex_count),
            "lambda": str(self.lam),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
        }


def count_disjoint_pairs(edges: Sequence[int]) -> int:
    """Unordered pairs of disjoint edges."""
    total = 0
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            if not e & f:
                total += 1
    return total


def mixing_audit(space: ProductSpace, subset: Family | Iterable[int],
                 lam: int | None = None) -> MixingAudit:
    """Both sides of ``|e(G[S]) - (d/n)(alpha n)^2/2| <= lam alpha (1-alpha) n / 2``.

    The graph is KG(n, k) for a one-part space and the disjointness graph on
    the direct product otherwise; it is only touched through disjointness
    tests on members of ``S``.
    """
    if isinstance(subset, Family):
        if subset.space != space:
            raise InputError("subset lives in a different space")
        members = list(subset)
    else:
        members = sorted(set(subset), key=space.key)
        for e in members:
            if not space.is_edge(e):
                raise InputError(f"subset member {bin(e)} is not a vertex of the graph")
    spec = product_graph_spectrum(space.ns, space.ks)
    if lam is None:
        lam = spec.lam
    size, total = len(members), spec.vertex_count
    inside = count_disjoint_pairs(members)
    lhs = abs(inside - Fraction(spec.degree * size * size, 2 * total))
    rhs = Fraction(lam * size * (total - size), 2 * total)
    return MixingAudit(size, inside, spec.degree, total, lam, lhs, rhs)
