# Cover families and the matching-number bound on a direct product.
#
# Run with:  python3 demos/01_cover_families.py

from dirprod import (
    CoverSpec,
    Family,
    ProductSpace,
    build_cover_family,
    matching_number,
    product_matching_bound,
)

# A direct product: 2-subsets of a 4-set times 1-subsets of a 3-set.
space = ProductSpace(((4, 2), (3, 1)))
print("edges in the space:", space.size)            # 6 * 3 = 18

# The full space has as many disjoint edges as the scarcest part allows.
nu, cert = matching_number(Family.full(space))
print("nu(full space):", nu)                         # min(4 // 2, 3 // 1) = 2
print("a maximum matching:", cert.to_json()["edges"])

# E_1: every edge meeting the first vertex of part 1. No two such edges can
# be disjoint, so nu = 1.
cover = build_cover_family(space, CoverSpec(part=1, size=1))
print("|E_1| =", len(cover), " nu =", matching_number(cover)[0])

# The bound is the best cover over all parts.
report = product_matching_bound(space.ns, space.ks, 1)
print("per-part cover sizes:", report.branches)      # (9, 6)
print("bound:", report.value, "attained by part", report.witness)

# Raising s widens the cover and the bound together.
for s in range(0, 4):
    rep = product_matching_bound(space.ns, space.ks, s)
    fam = build_cover_family(space, CoverSpec(rep.witness, min(s, space.ns[rep.witness - 1])))
    print(f"s={s}: bound {rep.value}, cover size {len(fam)}, nu(cover) {matching_number(fam)[0]}")
