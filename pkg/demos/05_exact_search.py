# Exhaustive extremal search at desk scale, compared with the closed-form
# bounds well below the size thresholds where they are proven.
#
# Run with:  python3 demos/05_exact_search.py

from dirprod import ProductSpace, composition_min, composition_min_enumerated
from dirprod.search import max_family_with_matching_cap, max_rainbow_free_tuple, verify_theorem

# Largest family on the 3 x 3 rook board with no two disjoint edges.
board = ProductSpace(((3, 1), (3, 1)))
best = max_family_with_matching_cap(board, 1, mode="exhaustive")
print("max |F| with nu <= 1:", best.size)
print("witness:", [board.format_edge(e) for e in best.witness])

report = verify_theorem(board, 1, "matching")
print({k: report.to_json()[k] for k in ("threshold_satisfied", "bound", "bound_holds",
                                        "bound_attained", "verdict")})

# Rainbow-free pairs: the best minimum size over shifted families.
pair = max_rainbow_free_tuple(board, 2)
print("rainbow-free pairs, best min size:", pair.min_size)
print(verify_theorem(board, 2, "rainbow").to_json()["verdict"])

# The composition minimum sits at a vertex of the simplex.
for ns, ks, total in [((5, 5), (1, 1), 3), ((6, 8), (2, 2), 2), ((9, 7, 6), (3, 2, 1), 4)]:
    fast, comp = composition_min(ns, ks, total)
    slow, _ = composition_min_enumerated(ns, ks, total)
    print(ns, ks, total, "->", fast, "at", comp.x, " enumeration agrees:", fast == slow)
