"""Extracting operator-polynomial coefficients by exact interpolation.

Compositions of the action are polynomial in the lattice argument n and the
direction u.  Evaluating such a blackbox on a small integer grid and solving
the (exact, rational) Vandermonde systems recovers every coefficient.  Two
composite actions matter for irreducibility:

* D(u, m-n) D(u, n) v(0): its n_s^2 u_t^2 coefficient is -E_st E_st v at m,
* D(u, n) v(m-n): its n_i u_j coefficient is E_ij v at m (E_ii - 1 for i=j),

so membership of those fiber images in an invariant subspace follows from
membership of the composite images.  The replay functions check both
identities coefficient-by-coefficient.
"""

from fractions import Fraction as F

from wittmod import (
    FSpaceConfig,
    FVector,
    SparseVector,
    apply_E,
    act,
    WittOperator,
    basis_fvector,
    extract_coefficient,
    interpolate_operator_polynomial,
    nilsson,
    replay_claim1,
    replay_claim2,
)

alpha = (F(1, 2), F(1, 3))
cfg = FSpaceConfig(2, alpha, nilsson(2, "1/2", 0))

# Warm-up: a hand-built bilinear blackbox has exactly one coefficient.
marker = basis_fvector(cfg, (1,), (0, 0))
poly = interpolate_operator_polynomial(
    cfg, lambda n, u: (n[0] * u[1]) * marker, (1, 1), (1, 1)
)
print("bilinear blackbox coefficients:")
for (a, b), vec in sorted(poly.coefficients.items()):
    print(f"  n^{a} u^{b}: {vec!r}")

# The composite double action, interpolated on a 3-point-per-variable grid.
m = (1, -1)
v = SparseVector.unit((1,))  # the monomial h1

def double_action(n, u):
    inner = act(cfg, WittOperator(u, n), FVector.single((0, 0), v))
    outer_r = tuple(mi - ni for mi, ni in zip(m, n))
    return act(cfg, WittOperator(u, outer_r), inner)

coeff = extract_coefficient(cfg, double_action, (2, 2), (2, 2), (2, 0), (0, 2))
expected = FVector.single(m, -1 * apply_E(cfg.module, 1, 2, apply_E(cfg.module, 1, 2, v)))
print("\nn_1^2 u_2^2 coefficient of D(u,m-n)D(u,n) h1(0):")
print("  extracted:", coeff)
print("  -E_12 E_12 h1 at m:", expected)
print("  equal:", coeff == expected)

# The packaged replays run the same extraction for chosen index pairs.
print("\nreplay checks on the shift fiber:")
print("  first claim,  (s,t)=(2,1), m=(0,0), v=1:", replay_claim1(cfg, 2, 1, (0, 0), SparseVector.unit((0,))))
print("  second claim, (i,j)=(1,2), m=(1,0), v=h1:", replay_claim2(cfg, 1, 2, (1, 0), v))
print("  second claim, diagonal (i,i) extracts E_ii - 1:",
      replay_claim2(cfg, 1, 1, (0, 0), SparseVector.unit((0,))))
