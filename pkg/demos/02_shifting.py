# Shifting pushes a family toward the low end of each part without changing
# its size and without creating new disjoint pairs.
#
# Run with:  python3 demos/02_shifting.py

from dirprod import Family, FamilyTuple, ProductSpace, has_rainbow_matching, matching_number
from dirprod.shifting import is_shifted, shift_once, shift_to_fixpoint, shift_tuple_to_fixpoint

space = ProductSpace(((5, 2),))

# The three pairs inside {3, 4, 5}.
top = Family.from_vertex_lists(space, [[(1, 3), (1, 4)], [(1, 3), (1, 5)], [(1, 4), (1, 5)]])
print("start:", [space.format_edge(e) for e in top])

# One compression: replace 5 by 1 wherever that yields a new edge.
once = shift_once(top, (1, 1), (1, 5))
print("after S_(1,5):", [space.format_edge(e) for e in once])

# Keep going until nothing moves; the log records each effective step.
fixed, log = shift_to_fixpoint(top)
print("fixpoint:", [space.format_edge(e) for e in fixed])
print("steps:", len(log), " shifted:", is_shifted(fixed))
print(log.to_jsonl(), end="")
print("nu before/after:", matching_number(top)[0], matching_number(fixed)[0])

# Applying the same shifts to every member of a tuple keeps it rainbow free.
grid = ProductSpace(((3, 1), (3, 1)))
f1 = Family.from_vertex_lists(grid, [[(1, 2), (2, 3)]])
f2 = Family.from_vertex_lists(grid, [[(1, 2), (2, 1)], [(1, 3), (2, 3)]])
pair = FamilyTuple((f1, f2))
shifted_pair, _ = shift_tuple_to_fixpoint(pair)
print("rainbow before:", has_rainbow_matching(pair)[0],
      " after:", has_rainbow_matching(shifted_pair)[0])
print("shifted pair:", [[grid.format_edge(e) for e in f] for f in shifted_pair])
