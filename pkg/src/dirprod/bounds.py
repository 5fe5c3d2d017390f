"""Exact evaluators for the extremal bounds on direct products.

Everything here is integer or :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor, prod
from typing import Any, Iterator, Sequence

from .core import DEFAULT_ENUMERATION_CAP, InputError, ResourceError


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def _num(x: int | Fraction) -> str:
    return str(x) if isinstance(x, int) or x.denominator != 1 else str(x.numerator)


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: int | Fraction
    inputs: dict
    witness: Any = None
    branch: str | None = None
    branches: tuple = ()
    order: tuple[int, ...] | None = None
    flags: tuple[str, ...] = ()

    @property
    def floor(self) -> int:
        return floor(self.value)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"schema": 1, "formula": self.name, "value": _num(self.value)}
        if isinstance(self.value, Fraction) and self.value.denominator != 1:
            out["numerator"] = str(self.value.numerator)
            out["denominator"] = str(self.value.denominator)
        out["floor"] = str(self.floor)
        out["inputs"] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.inputs.items()}
        if self.witness is not None:
            key = "witness_part" if isinstance(self.witness, int) else "witness"
            out[key] = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        if self.branch is not None:
            out["branch"] = self.branch
        if self.branches:
            out["branches"] = [_num(b) for b in self.branches]
        if self.order is not None:
            out["order"] = list(self.order)
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def _check_lists(ns: Sequence[int], ks: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    ns, ks = tuple(int(n) for n in ns), tuple(int(k) for k in ks)
    if not ns or len(ns) != len(ks):
        raise InputError("n and k must be non-empty lists of equal length")
    for n, k in zip(ns, ks):
        if not 1 <= k <= n:
            raise InputError(f"need 1 <= k <= n, got n={n}, k={k}")
    return ns, ks


def canonical_order(ns: Sequence[int], ks: Sequence[int]) -> tuple[int, ...]:
    """0-based part order with ``n_i / k_i`` ascending, stable on ties."""
    return tuple(sorted(range(len(ns)), key=lambda i: Fraction(ns[i], ks[i])))


def space_size(ns: Sequence[int], ks: Sequence[int]) -> int:
    return prod(binom(n, k) for n, k in zip(ns, ks))


def emc_bound(n: int, k: int, s: int) -> BoundReport:
    """``max{C(k(s+1)-1, k), C(n,k) - C(n-s,k)}`` for a single part."""
    if s < 0 or n < (s + 1) * k:
        raise InputError(f"need n >= (s + 1) k, got n={n}, k={k}, s={s}")
    clique = binom(k * (s + 1) - 1, k)
    cover = binom(n, k) - binom(n - s, k)
    branch = "clique" if clique >= cover else "cover"
    return BoundReport("emc", max(clique, cover), {"n": n, "k": k, "s": s},
                       branch=branch, branches=(clique, cover))


def _cover_branches(ns, ks, removed: int) -> tuple[int, ...]:
    total = space_size(ns, ks)
    return tuple(
        (binom(n, k) - binom(n - removed, k)) * (total // binom(n, k))
        for n, k in zip(ns, ks)
    )


def _argmax(values: Sequence[int]) -> int:
    best = max(values)
    return values.index(best) + 1


def product_matching_bound(ns: Sequence[int], ks: Sequence[int], s: int) -> BoundReport:
    """``max_i [C(n_i,k_i) - C(n_i-s,k_i)] prod_{j != i} C(n_j,k_j)``."""
    ns, ks = _check_lists(ns, ks)
    if s < 0:
        raise InputError(f"s must be non-negative, got {s}")
    branches = _cover_branches(ns, ks, s)
    return BoundReport("product-matching", max(branches), {"n": ns, "k": ks, "s": s},
                       witness=_argmax(branches), branches=branches)


def product_rainbow_bound(ns: Sequence[int], ks: Sequence[int], s: int) -> BoundReport:
    """``max_i [C(n_i,k_i) - C(n_i-s+1,k_i)] prod_{j != i} C(n_j,k_j)``."""
    ns, ks = _check_lists(ns, ks)
    if s < 1:
        raise InputError(f"s must be at least 1, got {s}")
    branches = _cover_branches(ns, ks, s - 1)
    return BoundReport("product-rainbow", max(branches), {"n": ns, "k": ks, "s": s},
                       witness=_argmax(branches), branches=branches)


def overlapping_sum_bound(n: int, k: int, s: int, m: int) -> BoundReport:
    """``max{s C(n,k), m s C(n-1,k-1)}`` for ``m`` s-overlapping families."""
    if s < 0 or n < (s + 1) * k or m < s + 1:
        raise InputError(f"need n >= (s + 1) k and m >= s + 1, got n={n}, k={k}, s={s}, m={m}")
    first = s * binom(n, k)
    second = m * s * binom(n - 1, k - 1)
    branch = "s*C(n,k)" if first >= second else "m*s*C(n-1,k-1)"
    return BoundReport("overlapping-sum", max(first, second), {"n": n, "k": k, "s": s, "m": m},
                       branch=branch, branches=(first, second))


def intersecting_bound(ns: Sequence[int], ks: Sequence[int]) -> BoundReport:
    """``(k_1/n_1) prod C(n_i,k_i)`` for intersecting families, ``n_1/k_1 >= 2``."""
    ns, ks = _check_lists(ns, ks)
    order = canonical_order(ns, ks)
    n1, k1 = ns[order[0]], ks[order[0]]
    if n1 < 2 * k1:
        raise InputError(f"need n_1 / k_1 >= 2, got {n1}/{k1}")
    value = Fraction(k1, n1) * space_size(ns, ks)
    return BoundReport("intersecting", value, {"n": ns, "k": ks},
                       order=tuple(i + 1 for i in order))


def averaging_bound(ns: Sequence[int], ks: Sequence[int], s: int) -> BoundReport:
    """``((s+1) k_1 / n_1) prod C(n_i,k_i)`` with part 1 minimising ``n/k``."""
    ns, ks = _check_lists(ns, ks)
    order = canonical_order(ns, ks)
    n1, k1 = ns[order[0]], ks[order[0]]
    if s < 0 or (s + 1) * k1 > n1:
        raise InputError(f"need s + 1 <= n_1 / k_1, got s={s}, n_1={n1}, k_1={k1}")
    value = Fraction((s + 1) * k1, n1) * space_size(ns, ks)
    return BoundReport("averaging", value, {"n": ns, "k": ks, "s": s},
                       order=tuple(i + 1 for i in order))


@dataclass(frozen=True)
class Composition:
    """Non-negative ``x_1 + ... + x_l = total``; ``clamped`` marks a zero binomial."""

    x: tuple[int, ...]
    clamped: bool = False

    @property
    def total(self) -> int:
        return sum(self.x)


def composition_value(ns: Sequence[int], ks: Sequence[int], x: Sequence[int]) -> int:
    return prod(binom(n - xi, k) for n, k, xi in zip(ns, ks, x))


def composition_min(ns: Sequence[int], ks: Sequence[int], total: int) -> tuple[int, Composition]:
    """Minimum of ``prod C(n_i - x_i, k_i)`` over compositions of ``total``.

    Evaluated by the vertex rule: the minimum puts all of ``total`` on a
    single part. Ties go to the smallest part index.
    """
    ns, ks = _check_lists(ns, ks)
    if total < 0:
        raise InputError(f"total must be non-negative, got {total}")
    best_val, best_i = None, 0
    for i in range(len(ns)):
        x = [0] * len(ns)
        x[i] = total
        val = composition_value(ns, ks, x)
        if best_val is None or val < best_val:
            best_val, best_i = val, i
    x = [0] * len(ns)
    x[best_i] = total
    clamped = total > ns[best_i] - ks[best_i]
    return best_val, Composition(tuple(x), clamped)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All compositions into ``parts`` non-negative summands, first coordinate descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def composition_min_enumerated(ns: Sequence[int], ks: Sequence[int], total: int,
                               cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[int, Composition]:
    """Same minimum by full enumeration of compositions."""
    ns, ks = _check_lists(ns, ks)
    count = binom(total + len(ns) - 1, len(ns) - 1)
    if count > cap:
        raise ResourceError(f"{count} compositions exceed cap {cap}", count=count, cap=cap)
    best_val, best_x = None, None
    for x in compositions(total, len(ns)):
        val = composition_value(ns, ks, x)
        if best_val is None or val < best_val:
            best_val, best_x = val, x
    clamped = any(xi > n - k for n, k, xi in zip(ns, ks, best_x))
    return best_val, Composition(best_x, clamped)


def composition_bound(ns: Sequence[int], ks: Sequence[int], s: int) -> BoundReport:
    """``prod C(n_i,k_i) - min_{sum x = s} prod C(n_i - x_i, k_i)``."""
    ns, ks = _check_lists(ns, ks)
    low, comp = composition_min(ns, ks, s)
    flags = ("clamped",) if comp.clamped else ()
    return BoundReport("composition", space_size(ns, ks) - low, {"n": ns, "k": ks, "s": s},
                       witness=comp.x, flags=flags)


def ratio_chain(n: int, k: int, s: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """The four terms ``C(n-s,k)/C(n,k)``, ``(1-s/(n-k))^k``, ``1-ks/(n-k)``, ``1/2``."""
    if s < 0 or k < 1 or n < (2 * s + 1) * k:
        raise InputError(f"need n >= (2s + 1) k, got n={n}, k={k}, s={s}")
    if s == 0:  # also covers n == k, where s / (n - k) is undefined
        return (Fraction(1), Fraction(1), Fraction(1), Fraction(1, 2))
    return (
        Fraction(binom(n - s, k), binom(n, k)),
        (1 - Fraction(s, n - k)) ** k,
        1 - Fraction(k * s, n - k),
        Fraction(1, 2),
    )


def check_ratio_inequality(n: int, k: int, s: int) -> tuple[bool, bool, bool]:
    """Truth of each link of the chain, exactly."""
    a, b, c, d = ratio_chain(n, k, s)
    return (a >= b, b >= c, c >= d)


def rainbow_threshold_bound(ns: Sequence[int], ks: Sequence[int], s: int) -> BoundReport:
    """``(6 s k_1 / n_1) prod C(n_j,k_j)``, requires ``3s <= n_1/k_1``."""
    ns, ks = _check_lists(ns, ks)
    order = canonical_order(ns, ks)
    n1, k1 = ns[order[0]], ks[order[0]]
    if s < 1 or 3 * s * k1 > n1:
        raise InputError(f"need 3s <= n_1 / k_1, got s={s}, n_1={n1}, k_1={k1}")
    total = space_size(ns, ks)
    value = Fraction(6 * s * k1, n1) * total
    flags = ("vacuous",) if value > total else ()
    return BoundReport("rainbow-threshold", value, {"n": ns, "k": ks, "s": s},
                       order=tuple(i + 1 for i in order), flags=flags)


def claim1_bound(ns: Sequence[int], ks: Sequence[int], s: int) -> BoundReport:
    """``(6 s k_1 / n_1) prod C(n_j - s, k_j)``."""
    ns, ks = _check_lists(ns, ks)
    if s < 0:
        raise InputError(f"s must be non-negative, got {s}")
    order = canonical_order(ns, ks)
    n1, k1 = ns[order[0]], ks[order[0]]
    value = Fraction(6 * s * k1, n1) * prod(binom(n - s, k) for n, k in zip(ns, ks))
    return BoundReport("claim1", value, {"n": ns, "k": ks, "s": s},
                       order=tuple(i + 1 for i in order))


def matching_threshold_holds(ns: Sequence[int], ks: Sequence[int], s: int) -> bool:
    """``n_i >= 4 l^2 k_i^2 s`` for every part."""
    ell = len(ns)
    return all(n >= 4 * ell * ell * k * k * s for n, k in zip(ns, ks))


def rainbow_threshold_holds(ns: Sequence[int], ks: Sequence[int], s: int) -> bool:
    """``n_i >= 8 l^2 k_i^2 s`` for every part."""
    ell = len(ns)
    return all(n >= 8 * ell * ell * k * k * s for n, k in zip(ns, ks))
