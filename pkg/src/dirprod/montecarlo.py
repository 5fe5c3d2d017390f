"""Random matchings and the Monte Carlo reproduction of the averaging and
concentration arguments.

Randomness: every run derives from one integer seed. Trials are grouped in
blocks of :data:`BLOCK` and block ``b`` draws from
``numpy.random.default_rng(SeedSequence(seed, spawn_key=(b,)))`` (PCG64), so
results do not depend on how many threads evaluate the blocks. Reductions
are exact integer sums.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Sequence

import numpy as np

from .bounds import binom, overlapping_sum_bound
from .core import (
    Family,
    FamilyTuple,
    InputError,
    ProductSpace,
    bits_of,
    permute_edge,
    permute_family,
)
from .matching import matching_number

BLOCK = 4096
SIGMA = 5


# sampling ---------------------------------------------------------------

def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _draw_positions(rng: np.random.Generator, n: int, k: int, m: int, count: int) -> np.ndarray:
    """``(count, m, k)`` sorted local positions: cut a random permutation into blocks."""
    perms = rng.permuted(np.tile(np.arange(n), (count, 1)), axis=1)
    return np.sort(perms[:, : m * k].reshape(count, m, k), axis=2)


def _colex_table(n: int, k: int) -> np.ndarray:
    return np.array([[comb(c, t + 1) for t in range(k)] for c in range(n)], dtype=np.int64)


def _colex_rank(table: np.ndarray, pos: np.ndarray) -> np.ndarray:
    k = pos.shape[-1]
    return table[pos, np.arange(k)].sum(axis=-1)


def _check_parts(space: ProductSpace, parts: Sequence[int] | None) -> tuple[int, ...]:
    if parts is None:
        return tuple(range(1, space.ell + 1))
    parts = tuple(parts)
    if not parts or any(not 1 <= p <= space.ell for p in parts) or len(set(parts)) != len(parts):
        raise InputError(f"bad part selection {parts!r}")
    return parts


def max_matching_size(space: ProductSpace, parts: Sequence[int]) -> int:
    return min(space.parts[p - 1][0] // space.parts[p - 1][1] for p in parts)


def sample_matching(space: ProductSpace, m: int, seed: int | np.random.Generator,
                    parts: Sequence[int] | None = None) -> list[int]:
    """A uniformly random indexed ``m``-matching on the selected parts.

    Each selected part is permuted uniformly and cut into consecutive
    ``k_i``-blocks; block ``t`` of every part forms edge ``t``. Edges are
    bitmasks over ``space`` touching only the selected parts.
    """
    parts = _check_parts(space, parts)
    if m < 0 or m > max_matching_size(space, parts):
        raise InputError(f"m={m} exceeds the largest matching on parts {parts}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    edges = [0] * m
    for p in parts:
        n, k = space.parts[p - 1]
        off = space.offsets[p - 1]
        pos = _draw_positions(rng, n, k, m, 1)[0]
        for t in range(m):
            for q in pos[t]:
                edges[t] |= 1 << (off + int(q))
    return edges


# family indicator -------------------------------------------------------

class _Indicator:
    """Dense boolean array over per-part colex ranks."""

    def __init__(self, family: Family):
        space = family.space
        self.space = space
        self.tables = [_colex_table(n, k) for n, k in space.parts]
        shape = tuple(comb(n, k) for n, k in space.parts)
        self.dense = np.zeros(shape, dtype=bool)
        if family.edges:
            idx = [[] for _ in space.parts]
            for e in family.edges:
                for p, (_, k) in enumerate(space.parts):
                    local = bits_of((e & space.part_masks[p]) >> space.offsets[p])
                    idx[p].append(sum(comb(c, t + 1) for t, c in enumerate(local)))
            self.dense[tuple(np.array(i) for i in idx)] = True

    def draw(self, rng: np.random.Generator, m: int, count: int, first: int = 0) -> list[np.ndarray]:
        """Rank arrays ``(count, m)`` for independent matchings in parts ``first..``."""
        out = []
        for (n, k), table in list(zip(self.space.parts, self.tables))[first:]:
            out.append(_colex_rank(table, _draw_positions(rng, n, k, m, count)))
        return out

    def incidence(self, ranks: list[np.ndarray]) -> np.ndarray:
        """``(count, m, m)``: part-1 block ``i`` joined with parts-2.. block ``j``."""
        a = ranks[0][:, :, None]
        if len(ranks) == 1:
            inc = self.dense[a]
            return np.broadcast_to(inc, inc.shape[:2] + (ranks[0].shape[1],))
        rest = tuple(r[:, None, :] for r in ranks[1:])
        return self.dense[(a,) + rest]


def _blocks(trials: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(math.ceil(trials / BLOCK))]


def _run_blocks(fn, trials: int, threads: int) -> list:
    blocks = _blocks(trials)
    if threads <= 1 or len(blocks) == 1:
        return [fn(b, c) for b, c in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda bc: fn(*bc), blocks))


def _bessel_variance(total: int, total_sq: int, count: int) -> Fraction:
    if count < 2:
        return Fraction(0)
    return (Fraction(total_sq) - Fraction(total * total, count)) / (count - 1)


def _within(observed: Fraction, target: Fraction, se: float) -> bool:
    if se == 0:
        return observed == target
    return abs(float(observed - target)) <= SIGMA * se


# bipartite graph --------------------------------------------------------

def build_bipartite(space: ProductSpace, a: Sequence[int], b: Sequence[int],
                    family: Family) -> tuple[int, np.ndarray]:
    """Edge count and ``m x m`` incidence of ``(A_i, B_j)`` with ``A_i | B_j`` in ``family``.

    ``a`` lives in part 1, ``b`` in parts ``2..l``; both must be matchings of
    the same length with the right per-part sizes.
    """
    if len(a) != len(b):
        raise InputError(f"matchings have different sizes ({len(a)} vs {len(b)})")
    k1 = space.parts[0][1]
    rest = ~space.part_masks[0]
    used_a = used_b = 0
    for e in a:
        if e & rest or (e & space.part_masks[0]).bit_count() != k1 or e & used_a:
            raise InputError("first matching must be disjoint k_1-sets of part 1")
        used_a |= e
    for e in b:
        sizes_ok = all(
            (e & pm).bit_count() == k for pm, (_, k) in zip(space.part_masks[1:], space.parts[1:])
        )
        if e & space.part_masks[0] or e & used_b or e >> space.N or not sizes_ok:
            raise InputError("second matching must be disjoint edges of parts 2..l")
        used_b |= e
    inc = np.array([[(x | y) in family.edges for y in b] for x in a], dtype=bool).reshape(len(a), len(b))
    return int(inc.sum()), inc


# averaging --------------------------------------------------------------

@dataclass
class AveragingReport:
    trials: int
    m: int
    exact: Fraction
    mean: Fraction
    standard_error: float
    s: int | None
    nu_within_s: bool | None
    checked: bool
    violations: int
    per_trial_min: int
    per_trial_max: int

    @property
    def mean_ok(self) -> bool:
        return _within(self.mean, self.exact, self.standard_error)

    @property
    def passed(self) -> bool:
        return self.mean_ok and self.violations == 0

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "trials": self.trials,
            "m": self.m,
            "exact": str(self.exact),
            "mean": str(self.mean),
            "mean_float": float(self.mean),
            "standard_error": self.standard_error,
            "s": self.s,
            "nu_within_s": self.nu_within_s,
            "sum_bound_checked": self.checked,
            "violations": self.violations,
            "per_trial_min": self.per_trial_min,
            "per_trial_max": self.per_trial_max,
            "mean_ok": self.mean_ok,
            "passed": self.passed,
        }


def averaging_check(family: Family, trials: int, seed: int, s: int | None = None,
                    threads: int = 1) -> AveragingReport:
    """Estimate ``E|F(B_j)|`` over random matchings ``B`` in parts ``2..l``.

    ``F(B) = {A in C(V_1, k_1) : A | B in F}``; its exact mean is
    ``|F| / prod_{p >= 2} C(n_p, k_p)``. When ``s`` is given and
    ``nu(F) <= s``, each trial is also checked against the overlapping-sum
    bound ``max{s C(n_1,k_1), m s C(n_1-1,k_1-1)}`` and, when
    ``n_1/k_1 <= m + 1``, against ``(m + 1) s C(n_1-1, k_1-1)``.
    """
    space = family.space
    if space.ell < 2:
        raise InputError("the averaging check needs at least two parts")
    if trials < 1:
        raise InputError("trials must be positive")
    n1, k1 = space.parts[0]
    m = max_matching_size(space, range(2, space.ell + 1))
    ind = _Indicator(family)
    slice_counts = ind.dense.sum(axis=0)
    exact = Fraction(len(family), prod(comb(n, k) for n, k in space.parts[1:]))

    limits: list[int] = []
    nu_ok = None
    if s is not None:
        nu_ok = matching_number(family, cap=s)[0] <= s
        if nu_ok and m >= s + 1 and n1 >= (s + 1) * k1:
            limits.append(overlapping_sum_bound(n1, k1, s, m).value)
            if n1 <= (m + 1) * k1:
                limits.append((m + 1) * s * binom(n1 - 1, k1 - 1))

    def block(b: int, count: int):
        rng = _block_rng(seed, b)
        ranks = ind.draw(rng, m, count, first=1)
        sizes = slice_counts[tuple(ranks)].astype(np.int64)  # (count, m)
        sums = sizes.sum(axis=1)
        bad = sum(int((sums > lim).sum()) for lim in limits)
        return int(sums.sum()), int((sums * sums).sum()), int(sizes.min()), int(sizes.max()), bad

    results = _run_blocks(block, trials, threads)
    total = sum(r[0] for r in results)
    total_sq = sum(r[1] for r in results)
    # per-trial statistic: mean of |F(B_j)| over j
    trial_var = _bessel_variance(total, total_sq, trials) / (m * m)
    se = math.sqrt(trial_var / trials) if trials > 1 else 0.0
    return AveragingReport(
        trials=trials, m=m, exact=exact, mean=Fraction(total, trials * m),
        standard_error=se, s=s, nu_within_s=nu_ok, checked=bool(limits),
        violations=sum(r[4] for r in results),
        per_trial_min=min(r[2] for r in results), per_trial_max=max(r[3] for r in results),
    )


# concentration ----------------------------------------------------------

@dataclass
class TrialStats:
    samples: np.ndarray = field(repr=False)
    s: int
    m: int
    alpha: Fraction
    mean: Fraction
    variance: Fraction
    tail_count: int
    order: tuple[int, ...]
    n1: int
    k1: int

    @property
    def trials(self) -> int:
        return len(self.samples)

    @property
    def expected_mean(self) -> Fraction:
        return self.alpha * self.m * self.m

    @property
    def variance_bound(self) -> Fraction:
        return 3 * self.alpha * self.m ** 3

    @property
    def tail_threshold(self) -> int:
        return (self.s - 1) * self.m

    @property
    def tail_frequency(self) -> Fraction:
        return Fraction(self.tail_count, self.trials)

    @property
    def mean_standard_error(self) -> float:
        return math.sqrt(self.variance / self.trials)

    @property
    def tail_standard_error(self) -> float:
        p = 1 / self.s
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def alpha_threshold(self) -> Fraction:
        return Fraction(6 * self.s * self.k1, self.n1)

    @property
    def tail_applies(self) -> bool:
        return self.alpha >= self.alpha_threshold

    @property
    def mean_ok(self) -> bool:
        return _within(self.mean, self.expected_mean, self.mean_standard_error)

    @property
    def tail_ok(self) -> bool:
        if not self.tail_applies:
            return True
        return float(self.tail_frequency) <= 1 / self.s + SIGMA * self.tail_standard_error

    @property
    def tail_margin_ok(self) -> bool:
        """Empirical tail plus five standard errors stays below ``1/s``."""
        return float(self.tail_frequency) + SIGMA * self.tail_standard_error < 1 / self.s

    @property
    def variance_within_bound(self) -> bool:
        return self.variance <= self.variance_bound

    @property
    def passed(self) -> bool:
        return self.mean_ok and self.tail_ok

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "trials": self.trials,
            "s": self.s,
            "m": self.m,
            "order": list(self.order),
            "alpha": str(self.alpha),
            "mean": str(self.mean),
            "mean_float": float(self.mean),
            "expected_mean": str(self.expected_mean),
            "mean_standard_error": self.mean_standard_error,
            "variance": str(self.variance),
            "variance_float": float(self.variance),
            "variance_bound": str(self.variance_bound),
            "variance_within_bound": self.variance_within_bound,
            "tail_threshold": self.tail_threshold,
            "tail_count": self.tail_count,
            "tail_frequency": float(self.tail_frequency),
            "tail_applies": self.tail_applies,
            "mean_ok": self.mean_ok,
            "tail_ok": self.tail_ok,
            "passed": self.passed,
        }


def write_samples_csv(stats: TrialStats, dest) -> None:
    def dump(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "X"])
        for t, x in enumerate(stats.samples.tolist()):
            w.writerow([t, x])

    if hasattr(dest, "write"):
        dump(dest)
    else:
        with open(dest, "w", newline="") as fh:
            dump(fh)


def _canonical(family: Family) -> tuple[Family, tuple[int, ...]]:
    order = family.space.canonical_order()
    if order != tuple(range(family.space.ell)):
        family = permute_family(family, order)
    return family, tuple(i + 1 for i in order)


def concentration_run(family: Family, s: int, trials: int, seed: int,
                      threads: int = 1) -> TrialStats:
    """Sample ``X = e(G)``, the number of pairs ``(A_i, B_j)`` with union in ``F``.

    ``A`` is a random ``m``-matching of part 1 and ``B`` of parts ``2..l``,
    ``m = floor(n_1/k_1)``, after putting the part minimising ``n/k`` first.
    """
    if not family.edges:
        raise InputError("the concentration run needs a non-empty family")
    if trials < 1 or s < 1:
        raise InputError("need trials >= 1 and s >= 1")
    family, order = _canonical(family)
    n1, k1 = family.space.parts[0]
    if 3 * s * k1 > n1:
        raise InputError(f"need 3s <= n_1/k_1, got s={s}, n_1={n1}, k_1={k1}")
    m = n1 // k1
    ind = _Indicator(family)

    def block(b: int, count: int) -> np.ndarray:
        rng = _block_rng(seed, b)
        return ind.incidence(ind.draw(rng, m, count)).sum(axis=(1, 2)).astype(np.int64)

    samples = np.concatenate(_run_blocks(block, trials, threads))
    total = int(samples.sum())
    total_sq = int((samples * samples).sum())
    stats = TrialStats(
        samples=samples, s=s, m=m,
        alpha=Fraction(len(family), family.space.size),
        mean=Fraction(total, trials),
        variance=_bessel_variance(total, total_sq, trials),
        tail_count=int((samples <= (s - 1) * m).sum()),
        order=order, n1=n1, k1=k1,
    )
    return stats


# rainbow compound run ---------------------------------------------------

def bipartite_rainbow(incidences: Sequence[np.ndarray]) -> list[tuple[int, int]] | None:
    """Pick one edge ``(i_t, j_t)`` from each bipartite graph, all rows and
    columns distinct."""
    s = len(incidences)
    adj = [list(zip(*np.nonzero(g))) for g in incidences]
    order = sorted(range(s), key=lambda t: len(adj[t]))
    pick: list[tuple[int, int]] = [(0, 0)] * s

    def search(depth: int, rows: int, cols: int) -> bool:
        if depth == s:
            return True
        t = order[depth]
        for i, j in adj[t]:
            if rows >> int(i) & 1 or cols >> int(j) & 1:
                continue
            pick[t] = (int(i), int(j))
            if search(depth + 1, rows | 1 << int(i), cols | 1 << int(j)):
                return True
        return False

    return list(pick) if search(0, 0, 0) else None


@dataclass
class RainbowRunReport:
    trials: int
    s: int
    m: int
    clear: int
    found: int
    order: tuple[int, ...]
    certificate: list[int] | None = None
    space: ProductSpace | None = None

    @property
    def missed(self) -> int:
        """Trials clearing every edge threshold without a rainbow matching."""
        return self.clear - self.found

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "trials": self.trials,
            "s": self.s,
            "m": self.m,
            "order": list(self.order),
            "threshold": (self.s - 1) * self.m,
            "all_clear_trials": self.clear,
            "rainbow_found": self.found,
            "missed": self.missed,
        }
        if self.certificate is not None:
            out["certificate"] = [
                [f"{i}:{j}" for i, j in self.space.vertices(e)] for e in self.certificate
            ]
        return out


def rainbow_run(tup: FamilyTuple, trials: int, seed: int) -> RainbowRunReport:
    """Per trial: build ``G_1..G_s`` on shared random matchings; when every
    ``e(G_t) > (s - 1) m``, extract a rainbow matching by direct search."""
    s = tup.s
    fams = []
    order = None
    for f in tup:
        g, order = _canonical(f)
        fams.append(g)
    space = fams[0].space
    n1, k1 = space.parts[0]
    m = n1 // k1
    if m < s:
        raise InputError(f"need m = floor(n_1/k_1) >= s, got m={m}, s={s}")
    inds = [_Indicator(f) for f in fams]
    clear = found = 0
    cert = None
    for b, count in _blocks(trials):
        rng = _block_rng(seed, b)
        ranks = inds[0].draw(rng, m, count)
        incs = [ind.incidence(ranks) for ind in inds]
        counts = np.stack([inc.sum(axis=(1, 2)) for inc in incs])  # (s, count)
        ok = (counts > (s - 1) * m).all(axis=0)
        for trial in np.nonzero(ok)[0]:
            clear += 1
            pick = bipartite_rainbow([inc[trial] for inc in incs])
            if pick is not None:
                found += 1
                if cert is None:
                    cert = _certificate(space, inds[0], ranks, trial, pick)
    if cert is not None:
        # back to the caller's part order
        back = tuple(sorted(range(len(order)), key=lambda i: order[i]))
        cert = [permute_edge(space, e, back) for e in cert]
    return RainbowRunReport(trials, s, m, clear, found, order, cert, tup.space)


def _certificate(space, ind, ranks, trial, pick) -> list[int]:
    # invert colex ranks back to vertex sets
    edges = []
    for i, j in pick:
        mask = 0
        for p, (n, k) in enumerate(space.parts):
            r = int(ranks[p][trial, i if p == 0 else j])
            mask |= _colex_unrank(r, k) << space.offsets[p]
        edges.append(mask)
    return edges


def _colex_unrank(rank: int, k: int) -> int:
    mask = 0
    for t in range(k, 0, -1):
        c = t - 1
        while comb(c + 1, t) <= rank:
            c += 1
        rank -= comb(c, t)
        mask |= 1 << c
    return mask
