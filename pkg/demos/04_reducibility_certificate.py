"""A reducibility certificate for the exterior fiber at the matching scalar.

When the fiber is the k-th exterior power and the identity scalar equals k,
the wedge map v(n) -> ((alpha + n) ^ v)(n) from (k-1)-forms intertwines the
two spaces, and its graded image is a proper invariant subspace: an exact,
finite certificate of reducibility.  With any other identity scalar the
invariance check fails at some site, matching the fact that those modules
are irreducible.
"""

from fractions import Fraction as F

from wittmod import (
    NoCertificate,
    Window,
    basis_fvector,
    certify_reducible_fundamental,
    derham_map,
    derham_source_config,
    derham_target_config,
    verify_derham_intertwines,
)

alpha = (F(1, 2), F(1, 3))

# The wedge map itself: on the trivial fiber it wedges with alpha + n.
src = derham_source_config(2, 1, alpha)
print("wedge image of 1(n) for a few lattice degrees:")
for n in [(0, 0), (1, 0), (-1, 2)]:
    print(f"  n={n}: {derham_map(src, basis_fvector(src, (), n))!r}")

# It commutes with every tested operator between the b=0 and b=1 spaces.
hit = verify_derham_intertwines(2, 1, alpha, Window(2), 2)
print("\nintertwiner check at radius 2 over the N=2 window:", "pass" if hit is None else hit)

# ... and breaks immediately if the target scalar is twisted away from k.
hit = verify_derham_intertwines(2, 1, alpha, Window(1), 1, target_b=2)
print("mutated target scalar b=2: first failing site", hit)

# The certificate: graded image ranks plus exhaustive invariance checks.
cert = certify_reducible_fundamental(2, 1, 1, alpha, Window(2), 1)
print("\ncertificate for the 1-form space at b=1:")
print(f"  image rank {set(cert.image_ranks.values())} vs fiber dimension {cert.full_rank}")
print(f"  invariance sites checked: {cert.invariance_sites_checked}")
print(f"  proper at all {len(cert.proper_weights)} tested weights")

outcome = certify_reducible_fundamental(2, 1, 0, alpha, Window(2), 1)
assert isinstance(outcome, NoCertificate)
print("\nsame space at b=0:", outcome.reason, "at site", outcome.failing_site)

print("\nhigher rank, k=2 inside d=3:")
cert3 = certify_reducible_fundamental(3, 2, 2, (F(1, 2), F(1, 3), F(1, 5)), Window(1), 1)
print(f"  image ranks {sorted(set(cert3.image_ranks.values()))} vs fiber dimension {cert3.full_rank}")
