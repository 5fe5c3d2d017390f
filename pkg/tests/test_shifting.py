import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirprod import CoverSpec, Family, FamilyTuple, InputError, ProductSpace, build_cover_family
from dirprod import has_rainbow_matching, matching_number
from dirprod.shifting import (
    is_downward_closed,
    is_shifted,
    shift_once,
    shift_to_fixpoint,
    shift_tuple_once,
    shift_tuple_to_fixpoint,
)
from conftest import families
from oracles import all_edges, reference_fixpoint, shift_edges


def sp(*parts):
    return ProductSpace(tuple(parts))


def fam(space, *vertex_lists):
    return Family.from_vertex_lists(space, vertex_lists)


class TestShiftOnce:
    def test_lone_edge_moves(self):
        s = sp((3, 1))
        assert shift_once(fam(s, [(1, 2)]), (1, 1), (1, 2)) == fam(s, [(1, 1)])

    def test_blocked_when_target_present(self):
        s = sp((3, 1))
        f = fam(s, [(1, 1)], [(1, 2)])
        assert shift_once(f, (1, 1), (1, 2)) == f

    def test_other_parts_untouched(self):
        s = sp((2, 1), (2, 1))
        f = fam(s, [(1, 2), (2, 1)])
        assert shift_once(f, (1, 1), (1, 2)) == fam(s, [(1, 1), (2, 1)])

    @pytest.mark.parametrize("a,b", [((1, 2), (1, 1)), ((1, 1), (2, 2)), ((1, 1), (1, 1))])
    def test_rejects_bad_pairs(self, a, b):
        s = sp((2, 1), (2, 1))
        with pytest.raises(InputError):
            shift_once(Family.full(s), a, b)


class TestFixpoint:
    def test_shifted_input_is_fixed(self):
        s = sp((4, 1), (4, 1))
        f = build_cover_family(s, CoverSpec(1, 2))
        g, log = shift_to_fixpoint(f)
        assert g == f and len(log) == 0

    def test_singleton_slides(self):
        s = sp((3, 1))
        g, log = shift_to_fixpoint(fam(s, [(1, 3)]))
        assert g == fam(s, [(1, 1)])
        assert [(a, b) for a, b, _ in log.steps] == [((1, 2), (1, 3)), ((1, 1), (1, 2))]

    def test_three_pairs_slide_to_the_front(self):
        s = sp((5, 2))
        top = [(1, 3), (1, 4), (1, 5)]
        front = [(1, 1), (1, 2), (1, 3)]
        f = fam(s, *[[a, b] for i, a in enumerate(top) for b in top[i + 1:]])
        g, _ = shift_to_fixpoint(f)
        assert g == fam(s, *[[a, b] for i, a in enumerate(front) for b in front[i + 1:]])
        assert g.edges == frozenset(reference_fixpoint(s, set(f.edges)))
        assert is_shifted(g) and is_downward_closed(g)

    def test_log_jsonl(self):
        s = sp((3, 1))
        _, log = shift_to_fixpoint(fam(s, [(1, 3)]))
        rows = [json.loads(line) for line in log.to_jsonl().splitlines()]
        assert rows == [{"a": "1:2", "b": "1:3", "moved": 1}, {"a": "1:1", "b": "1:2", "moved": 1}]


class TestIsShifted:
    def test_examples(self):
        assert is_shifted(Family.full(sp((4, 2), (3, 1))))
        assert not is_shifted(fam(sp((2, 1)), [(1, 2)]))
        assert is_shifted(build_cover_family(sp((4, 1), (4, 1)), CoverSpec(1, 2)))

    @pytest.mark.parametrize("parts", [((4, 2),), ((3, 1), (3, 1)), ((4, 2), (2, 1))])
    def test_shifted_iff_downward_closed(self, parts):
        # exhaustive over every family of a tiny space
        s = sp(*parts)
        edges = all_edges(s)
        for bits in range(1 << len(edges)):
            f = Family(s, frozenset(e for i, e in enumerate(edges) if bits >> i & 1))
            assert is_shifted(f) == is_downward_closed(f)


@st.composite
def shift_cases(draw):
    f = draw(families(max_edges=10, max_n=5, max_k=2))
    parts = [i for i, (n, _) in enumerate(f.space.parts, 1) if n >= 2]
    if not parts:
        return f, None, None
    i = draw(st.sampled_from(parts))
    n = f.space.parts[i - 1][0]
    x = draw(st.integers(1, n - 1))
    y = draw(st.integers(x + 1, n))
    return f, (i, x), (i, y)


@settings(max_examples=150, deadline=None)
@given(shift_cases())
def test_single_shift_properties(case):
    f, a, b = case
    if a is None:
        return
    g = shift_once(f, a, b)
    assert g.edges == frozenset(shift_edges(f.space, set(f.edges), a, b))
    assert len(g) == len(f)
    assert matching_number(g)[0] <= matching_number(f)[0]


@settings(max_examples=100, deadline=None)
@given(families(max_edges=12, max_n=5, max_k=2))
def test_fixpoint_properties(f):
    g, log = shift_to_fixpoint(f)
    assert len(g) == len(f)
    assert matching_number(g)[0] <= matching_number(f)[0]
    assert is_shifted(g) and is_downward_closed(g)
    assert shift_to_fixpoint(g)[0] == g
    assert all(moved > 0 for _, _, moved in log.steps)


def rainbow_free_pair(rng, space):
    edges = all_edges(space)
    first = frozenset(rng.sample(edges, rng.randint(1, min(4, len(edges)))))
    blocked = [e for e in edges if all(e & g for g in first)]
    second = frozenset(rng.sample(blocked, rng.randint(0, len(blocked))))
    return FamilyTuple((Family(space, first), Family(space, second)))


def test_lockstep_shift_keeps_rainbow_freeness():
    rng = random.Random(7)
    tiny = [sp((3, 1), (3, 1)), sp((4, 2)), sp((4, 1), (2, 1)), sp((3, 1), (4, 2))]
    for _ in range(120):
        tup = rainbow_free_pair(rng, rng.choice(tiny))
        assert not has_rainbow_matching(tup)[0]
        space = tup.space
        i = rng.randint(1, space.ell)
        n = space.parts[i - 1][0]
        x = rng.randint(1, n - 1)
        y = rng.randint(x + 1, n)
        assert not has_rainbow_matching(shift_tuple_once(tup, (i, x), (i, y)))[0]
        fixed, _ = shift_tuple_to_fixpoint(tup)
        assert not has_rainbow_matching(fixed)[0]
        assert [len(f) for f in fixed] == [len(f) for f in tup]
        assert all(is_shifted(f) for f in fixed)
