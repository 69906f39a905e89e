"""Operators D(u, r), the bracket, and the weight grading.

The tensor module F = V (x) A_d is spanned by components v(n) with v in a
fiber module V and n a lattice degree.  An operator D(u, r) sends v(n) to
((u | n + alpha) v + (r u^T) v)(n + r): a scalar part from the pairing with
the shifted weight, and a matrix part where the rank-one matrix r u^T acts
on the fiber.  This script walks through both parts on the smallest space.
"""

from fractions import Fraction as F

from wittmod import (
    FSpaceConfig,
    act,
    act_sum,
    basis_fvector,
    bracket,
    cartan,
    exterior,
    shifted,
    weight_of,
)

alpha = (F(1, 2), F(1, 3))
cfg = FSpaceConfig(2, alpha, exterior(2, 1, 1))
print(f"space: fiber {cfg.module.describe()}, alpha = ({alpha[0]}, {alpha[1]})")

# The Cartan operators D(e_i, 0) are diagonal: each component v(n) is an
# eigenvector with eigenvalue alpha_i + n_i.
x = basis_fvector(cfg, (1,), (2, -1))
print("\ncomponent e1 at lattice degree (2,-1):")
print("  weight:", weight_of(cfg, (2, -1)))
for i in (1, 2):
    image = act(cfg, cartan(2, i), x)
    print(f"  D(e{i},0) scales it by {weight_of(cfg, (2,-1))[i-1]}: {image!r}")

# A shift operator moves the lattice degree by r and mixes the fiber.
op = shifted(2, 1, (1, 0))
print("\nD(e1,(1,0)) applied to e1(0,0) and e2(0,0):")
print("  ->", act(cfg, op, basis_fvector(cfg, (1,), (0, 0))))
print("  ->", act(cfg, op, basis_fvector(cfg, (2,), (0, 0))))

# The bracket [D(u,r), D(v,s)] = D((u|s)v - (v|r)u, r+s), realized on the
# module: applying both sides to a vector gives the same answer.
a = shifted(2, 1, (1, 0))
b = shifted(2, 2, (-1, 1))
br = bracket(a, b)
print("\nbracket of D(e1,(1,0)) and D(e2,(-1,1)):")
for term in br.terms:
    print(f"  D({tuple(map(str, term.u))}, {term.r})")
y = basis_fvector(cfg, (2,), (0, 0))
lhs = act(cfg, a, act(cfg, b, y)) - act(cfg, b, act(cfg, a, y))
rhs = act_sum(cfg, br, y)
print("  commutator on e2(0,0) equals bracket action:", lhs == rhs)
