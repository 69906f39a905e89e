"""Budgeted cyclicity evidence: spanning a window from one vector.

The closure engine spans all operator words D(e_i, r), |r|_inf <= R, of
length <= T applied to a generator, organized by weight, with exact vectors
throughout.  If the span contains every fiber basis vector at every weight
of a window, the window is covered: finite evidence that the generator is
cyclic, the computational shadow of irreducibility.  Coverage reports carry
the smallest sufficient budget; shortfalls carry the dimension table.
"""

from fractions import Fraction as F

from wittmod import (
    ClosureBudget,
    FSpaceConfig,
    Window,
    basis_fvector,
    closure_reach,
    derham_map,
    derham_source_config,
    derham_target_config,
    exterior,
    find_cyclic_budget,
    nilsson,
)

alpha = (F(1, 2), F(1, 3))

# Raw closure: per-weight ranks grow with the word length.
cfg = FSpaceConfig(2, alpha, exterior(2, 1, 0))
gen = basis_fvector(cfg, (1,), (0, 0))
for t in range(3):
    reach = closure_reach(cfg, [gen], ClosureBudget(1, t))
    print(f"word length <= {t}: ranks {reach.dims()}")

# Irreducible case: one vector covers the whole window quickly.
report = find_cyclic_budget(cfg, gen, Window(1), ClosureBudget(2, 8))
print(f"\n1-form space at b=0 from e1(0,0): covered={report.covered}, "
      f"smallest budget (R,T)={report.sufficient}")

# The infinite-dimensional shift fiber is covered too (degree-bounded window).
ncfg = FSpaceConfig(2, alpha, nilsson(2, "1/2", 0))
nreport = find_cyclic_budget(
    ncfg, basis_fvector(ncfg, (0,), (0, 0)), Window(1, D=2), ClosureBudget(2, 8)
)
print(f"shift fiber from 1(0,0), window N=1 deg<=2: covered={nreport.covered}, "
      f"smallest budget={nreport.sufficient}")

# Reducible case: a generator inside the wedge image stays inside it, so the
# achieved rank is stuck at 1 per weight and the window is never covered.
src = derham_source_config(2, 1, alpha)
tgt = derham_target_config(src)
image_gen = derham_map(src, basis_fvector(src, (), (0, 0)))
stuck = find_cyclic_budget(tgt, image_gen, Window(1), ClosureBudget(1, 6))
print(f"\nwedge-image generator in the b=1 space: covered={stuck.covered}")
print("per-weight achieved/required:")
for n, row in sorted(stuck.table.items()):
    print(f"  {n}: {row['achieved']}/{row['required']}")
