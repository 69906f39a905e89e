"""When are two tensor modules isomorphic?

Exactly when the identity scalars agree, the alpha parameters differ by a
lattice vector, and the fibers are isomorphic as sl_d-modules.  For catalog
fibers the last condition is decided from parameters (folding in the genuine
coincidences: first exterior = first symmetric = natural, top exterior =
zeroth symmetric = trivial, and the d=2 shift fibers at beta and -1-beta,
whose operators are literally identical).  Explicit fibers are compared by
an exact simultaneous-conjugacy search.
"""

from fractions import Fraction as F

from wittmod import FSpaceConfig, exterior, explicit, iso_criterion, nilsson, symmetric

def show(label, left, right):
    result = iso_criterion(left, right)
    verdict = "isomorphic" if result.isomorphic else f"not isomorphic ({result.reason})"
    print(f"  {label}: {verdict}")

print("alpha shifts and identity scalars:")
base = FSpaceConfig(2, (F(1, 2), 0), exterior(2, 1, 1))
show("alpha shifted by (-1, 1)", base, FSpaceConfig(2, (F(3, 2), -1), exterior(2, 1, 1)))
show("alpha shifted by (1/6, 0)", base, FSpaceConfig(2, (F(1, 3), 0), exterior(2, 1, 1)))
show("identity scalar 1 vs 2", base, FSpaceConfig(2, (F(1, 2), 0), exterior(2, 1, 2)))

print("\ncatalog coincidences:")
alpha = (F(1, 2), F(1, 3))
show(
    "first exterior vs first symmetric power",
    FSpaceConfig(2, alpha, exterior(2, 1, 1)),
    FSpaceConfig(2, alpha, symmetric(2, 1, 1)),
)
show(
    "shift fibers at beta=1/2 and beta=-3/2 (d=2)",
    FSpaceConfig(2, alpha, nilsson(2, "1/2", 0)),
    FSpaceConfig(2, alpha, nilsson(2, "-3/2", 0)),
)
show(
    "shift fibers at beta=1/2 and beta=1/3",
    FSpaceConfig(2, alpha, nilsson(2, "1/2", 0)),
    FSpaceConfig(2, alpha, nilsson(2, "1/3", 0)),
)

print("\nexplicit fibers go through the conjugacy search:")
natural = {
    (1, 1): [[1, 0], [0, 0]],
    (1, 2): [[0, 1], [0, 0]],
    (2, 1): [[0, 0], [1, 0]],
    (2, 2): [[0, 0], [0, 1]],
}
conjugated = {  # the same action in the basis e1, e1 + e2
    (1, 1): [[1, 1], [0, 0]],
    (1, 2): [[0, 1], [0, 0]],
    (2, 1): [[-1, -1], [1, 1]],
    (2, 2): [[0, -1], [0, 1]],
}
show(
    "natural matrices vs a conjugate of them",
    FSpaceConfig(2, alpha, explicit(2, 1, natural)),
    FSpaceConfig(2, alpha, explicit(2, 1, conjugated)),
)
show(
    "explicit natural matrices vs catalog exterior(2,1)",
    FSpaceConfig(2, alpha, explicit(2, 1, natural)),
    FSpaceConfig(2, alpha, exterior(2, 1, 1)),
)
