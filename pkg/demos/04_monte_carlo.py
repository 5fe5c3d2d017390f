# Random matchings, the averaging identity, and the concentration of X,
# the number of pairs (A_i, B_j) whose union lies in the family.
#
# Run with:  python3 demos/04_monte_carlo.py

from fractions import Fraction

from dirprod import CoverSpec, Family, FamilyTuple, ProductSpace, build_cover_family, random_family
from dirprod.montecarlo import averaging_check, concentration_run, rainbow_run, sample_matching

space = ProductSpace(((8, 2), (9, 3)))

# An indexed 2-matching: block t of each part forms edge t.
for e in sample_matching(space, 2, seed=1):
    print("edge:", space.format_edge(e))

# E|F(B_j)| equals |F| divided by the size of parts 2..l.
fam = random_family(space, 600, seed=4)
avg = averaging_check(fam, trials=20_000, seed=4)
print(f"averaging: mean {float(avg.mean):.4f}  exact {float(avg.exact):.4f}  SE {avg.standard_error:.4f}")

# Concentration of X on a non-degenerate space: m = 18 pairs in part 1
# leave part 2 partly uncovered, so X really varies.
big = ProductSpace(((36, 2), (40, 1)))
alpha = Fraction(1, 3)
fam = random_family(big, int(alpha * big.size), seed=8)
stats = concentration_run(fam, s=2, trials=20_000, seed=8)
print("m =", stats.m, " alpha =", stats.alpha)
print(f"mean X {float(stats.mean):.2f} vs alpha m^2 = {float(stats.expected_mean):.2f}")
print(f"Var X {float(stats.variance):.2f} vs bound 3 alpha m^3 = {float(stats.variance_bound):.0f}")
print(f"Pr[X <= (s-1) m] = {float(stats.tail_frequency):.4f}  (needs < 1/s)")

# Whenever every G_t has more than (s-1) m edges, a rainbow matching exists.
grid = ProductSpace(((9, 1), (9, 1)))
tup = FamilyTuple((build_cover_family(grid, CoverSpec(1, 3)), Family.full(grid)))
run = rainbow_run(tup, trials=2_000, seed=0)
print("trials clearing the threshold:", run.clear, " rainbow found:", run.found, " missed:", run.missed)
