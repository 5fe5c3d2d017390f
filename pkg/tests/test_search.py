import pytest

from dirprod import (
    CoverSpec,
    Family,
    InputError,
    ProductSpace,
    ResourceError,
    build_cover_family,
    has_rainbow_matching,
    matching_number,
    product_matching_bound,
)
from dirprod.core import enumerate_space
from dirprod.search import (
    max_family_with_matching_cap,
    max_rainbow_free_tuple,
    shifted_families,
    verify_theorem,
)
from dirprod.shifting import is_downward_closed, is_shifted, shift_to_fixpoint


def sp(*parts):
    return ProductSpace(tuple(parts))


SMALL = [
    sp((2, 1), (2, 1)),
    sp((3, 1), (3, 1)),
    sp((4, 2)),
    sp((5, 2)),
    sp((4, 1), (3, 1)),
    sp((4, 2), (2, 1)),
    sp((3, 1), (2, 1), (2, 1)),
]


class TestMatchingCap:
    def test_examples(self):
        assert max_family_with_matching_cap(sp((3, 1), (3, 1)), 1).size == 3
        assert max_family_with_matching_cap(sp((2, 1), (2, 1)), 1).size == 2

    def test_cap_never_binds(self):
        s = sp((4, 2), (3, 1))
        assert max_family_with_matching_cap(s, 2, mode="bnb").size == 18

    @pytest.mark.parametrize("space", SMALL)
    @pytest.mark.parametrize("s", [0, 1, 2])
    def test_modes_agree_and_witness_is_valid(self, space, s):
        ex = max_family_with_matching_cap(space, s, "exhaustive")
        bb = max_family_with_matching_cap(space, s, "bnb")
        sh = max_family_with_matching_cap(space, s, "bnb", shifted_only=True)
        assert ex.size == bb.size == sh.size
        for res in (ex, bb, sh):
            assert len(res.witness) == res.size
            assert matching_number(res.witness)[0] <= s
        assert is_shifted(sh.witness)
        best_cover = max(
            len(build_cover_family(space, CoverSpec(i, min(s, n))))
            for i, (n, _) in enumerate(space.parts, 1)
        )
        assert ex.size >= best_cover
        shifted, _ = shift_to_fixpoint(ex.witness)
        assert len(shifted) == ex.size and matching_number(shifted)[0] <= s

    def test_resource_caps(self):
        with pytest.raises(ResourceError) as exc:
            max_family_with_matching_cap(sp((5, 1), (5, 1)), 1, "exhaustive")
        assert exc.value.count == 25
        with pytest.raises(ResourceError):
            max_family_with_matching_cap(sp((9, 1), (9, 1)), 1, "bnb")

    def test_bad_arguments(self):
        with pytest.raises(InputError):
            max_family_with_matching_cap(sp((3, 1)), -1)
        with pytest.raises(InputError):
            max_family_with_matching_cap(sp((3, 1)), 1, mode="greedy")


class TestShiftedFamilies:
    @pytest.mark.parametrize("space", [sp((4, 2)), sp((3, 1), (3, 1)), sp((4, 2), (2, 1))])
    def test_exactly_the_downward_closed_families(self, space):
        fams = shifted_families(space)
        assert len(set(fams)) == len(fams)
        edges = list(enumerate_space(space))
        closed = []
        for mask in range(1 << len(edges)):
            f = Family(space, frozenset(e for t, e in enumerate(edges) if mask >> t & 1))
            if is_downward_closed(f):
                closed.append(f.edges)
        assert set(fams) == set(closed)


class TestRainbowSearch:
    def test_two_by_two(self):
        res = max_rainbow_free_tuple(sp((2, 1), (2, 1)), 2)
        assert res.min_size == 2
        assert not has_rainbow_matching(res.witness)[0]
        assert min(len(f) for f in res.witness) == 2

    def test_three_by_three(self):
        assert max_rainbow_free_tuple(sp((3, 1), (3, 1)), 2).min_size == 3

    @pytest.mark.parametrize("space", [sp((2, 1), (2, 1)), sp((4, 2)), sp((3, 1), (2, 1))])
    def test_shifted_restriction_loses_nothing(self, space):
        full = max_rainbow_free_tuple(space, 2, "exhaustive", shifted_only=False)
        shifted = max_rainbow_free_tuple(space, 2, "exhaustive", shifted_only=True)
        pruned = max_rainbow_free_tuple(space, 2, "bnb", shifted_only=True)
        assert full.min_size == shifted.min_size == pruned.min_size

    def test_needs_s_at_least_two(self):
        with pytest.raises(InputError):
            max_rainbow_free_tuple(sp((3, 1)), 1)

    def test_unshifted_cap(self):
        with pytest.raises(ResourceError):
            max_rainbow_free_tuple(sp((3, 1), (3, 1), (2, 1)), 2, shifted_only=False)


class TestVerify:
    @pytest.mark.parametrize("n", [(3, 3), (2, 2)])
    def test_matching_examples(self, n):
        r = verify_theorem(ProductSpace.from_lists(n, (1, 1)), 1, "matching")
        assert not r.threshold_satisfied
        assert r.bound_holds and r.bound_attained and r.verdict == "holds"
        assert r.search_value == product_matching_bound(n, (1, 1), 1).value
        out = r.to_json()
        assert out["bound_holds"] is True and "timings" not in out
        assert "timings" in r.to_json(timings=True)

    def test_vacuous(self):
        r = verify_theorem(sp((2, 1), (2, 1)), 2, "matching")
        assert r.vacuous and r.verdict == "vacuous" and r.search_value == 4

    def test_rainbow(self):
        r = verify_theorem(sp((3, 1), (3, 1)), 2, "rainbow")
        assert r.search_value == 3 and r.bound.value == 3
        assert r.bound_holds and r.bound_attained and r.construction_valid

    def test_unknown_theorem(self):
        with pytest.raises(InputError):
            verify_theorem(sp((3, 1)), 1, "other")
