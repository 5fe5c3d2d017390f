# Kneser spectra, the disjointness graph on a product, and the
# expander-mixing inequality checked in exact arithmetic.
#
# Run with:  python3 demos/03_spectra_and_mixing.py

import numpy as np

from dirprod import Family, ProductSpace, enumerate_space
from dirprod.spectral import kneser_spectrum, mixing_audit, product_graph_spectrum

# The Petersen graph is KG(5, 2).
petersen = kneser_spectrum(5, 2)
print("Petersen spectrum:", petersen.as_dict(), " degree", petersen.degree, " lambda", petersen.lam)

# Compare with a numeric eigendecomposition of the explicit adjacency matrix.
space = ProductSpace(((5, 2),))
verts = list(enumerate_space(space))
adj = np.array([[0 if a & b else 1 for b in verts] for a in verts], dtype=float)
print("numeric:", np.round(np.linalg.eigvalsh(adj), 8))

# On a product the adjacency is a Kronecker product, so eigenvalues multiply.
prod = product_graph_spectrum((5, 4), (2, 1))
print("(5,2) x (4,1):", prod.as_dict(), " D =", prod.degree, " lambda =", prod.lam)

# A star of four pairs through vertex 1 is independent and meets the
# mixing bound with equality.
star = Family.from_vertex_lists(space, [[(1, 1), (1, j)] for j in range(2, 6)])
audit = mixing_audit(space, star)
print("star: lhs =", audit.lhs, " rhs =", audit.rhs, " holds:", audit.holds)

# Random subsets keep lhs <= rhs.
rng = np.random.default_rng(3)
for _ in range(5):
    subset = [v for v in verts if rng.random() < 0.4]
    a = mixing_audit(space, subset)
    print(f"|S|={a.size:2d}  e(S)={a.edges_inside:2d}  lhs={str(a.lhs):>6}  rhs={str(a.rhs):>6}")
