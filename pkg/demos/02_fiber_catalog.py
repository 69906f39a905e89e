"""The fiber catalog and its structural checkers.

Four kinds of gl_d-modules can sit inside the tensor module: exterior and
symmetric powers of the natural module, explicit matrix actions, and the
polynomial shift module C[h_1, ..., h_{d-1}] -- an infinite dimensional
irreducible sl_d-module.  Two checkers validate and probe them: an
exhaustive bracket-law verifier, and the nilpotent/injective dichotomy
classifier for off-diagonal matrix units.
"""

from wittmod import (
    apply_E,
    basis_enumerate,
    basis_vector,
    classify_operator,
    exterior,
    explicit,
    nilsson,
    symmetric,
    verify_gl_bracket,
)

print("bases of small fibers:")
for spec, bound in [(exterior(3, 2, 2), None), (symmetric(2, 2, 2), None), (nilsson(2, "1/2", 0), 2)]:
    print(f"  {spec.describe()}: {basis_enumerate(spec, bound)}")

# The polynomial fiber acts by shifts and multiplications; h-monomials are
# keyed by exponent tuples.
spec = nilsson(2, "1/2", 0)
one = basis_vector(spec, (0,))
print("\nshift fiber at beta = 1/2:")
print("  E_21 . h1   =", apply_E(spec, 2, 1, basis_vector(spec, (1,))))
print("  E_12 . 1    =", apply_E(spec, 1, 2, one))
print("  E_11 . 1    =", apply_E(spec, 1, 1, one))

# Every catalog action must satisfy [E_ij, E_kl] = d_jk E_il - d_li E_kj;
# the checker tries all index quadruples on every basis vector.
print("\nbracket law:")
for s, bound in [(exterior(3, 1, 0), None), (symmetric(3, 2, "1/3"), None), (nilsson(3, "1/2", 1), 3)]:
    verdict = verify_gl_bracket(s, bound)
    print(f"  {s.describe()}: {'pass' if verdict is None else verdict}")

# A deliberately broken explicit action is caught with a counterexample.
broken = explicit(2, 1, {
    (1, 1): [[1, 0], [0, 0]],
    (1, 2): [[0, -1], [0, 0]],   # sign flipped
    (2, 1): [[0, 0], [1, 0]],
    (2, 2): [[0, 0], [0, 1]],
})
print("  sign-flipped explicit fiber:", verify_gl_bracket(broken))

# Off-diagonal units act nilpotently exactly on finite-dimensional fibers;
# on the polynomial fiber every truncated matrix has full column rank.
print("\ndichotomy classifier:")
print("  exterior(2,1):  E_12 ->", classify_operator(exterior(2, 1, 1), 1, 2))
print("  symmetric(2,2): E_12 ->", classify_operator(symmetric(2, 2, 2), 1, 2))
print("  shift fiber, degrees <= 3: E_21 ->", classify_operator(spec, 2, 1, truncation=3))
