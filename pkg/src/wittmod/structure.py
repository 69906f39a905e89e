"""Structural analysis of the tensor modules.

Three groups of tools live here:

* a budgeted closure engine that spans operator words applied to a generator
  and reports per-weight reach -- finite, windowed evidence for cyclicity
  (hence irreducibility) claims;
* the wedge intertwiner from the (k-1)-form space at identity scalar k-1 into
  the k-form space at identity scalar k, whose graded image yields an exact
  reducibility certificate for the fundamental-weight case;
* the isomorphism criterion for two tensor modules: equal identity scalar,
  integral difference of the alpha parameters, and isomorphic fiber modules.

Positive outputs (covered, certificate) are exact statements about the
windowed objects; negative ones are evidence only and carry the budget used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .exactlinalg import (
    LatticeVector,
    QVector,
    Rational,
    SparseVector,
    SubspaceBasis,
    kernel_basis,
    parse_rational,
    rref_basis,
)
from .glmodules import (
    BasisKey,
    GlModuleSpec,
    _binomial,
    basis_enumerate,
    exterior,
    operator_matrix,
)
from .wittaction import (
    FSpaceConfig,
    FVector,
    WittOperator,
    act,
    act_component,
    basis_fvector,
    lattice_box,
    shifted,
    weight_of,
)


@dataclass(frozen=True)
class Window:
    """Truncation box: lattice degrees with |n_i| <= N, fiber degree <= D.

    D applies to the infinite-dimensional (nilsson) fiber only.
    """

    N: int
    D: int | None = None

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("window N must be >= 0")
        if self.D is not None and self.D < 0:
            raise ValueError("window D must be >= 0 when present")


@dataclass(frozen=True)
class ClosureBudget:
    """Operator set D(e_i, r), |r|_inf <= R; words of length <= T."""

    R: int
    T: int

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("budget R must be >= 1")
        if self.T < 0:
            raise ValueError("budget T must be >= 0")


class GradedSubspace:
    """Per-weight canonical bases of a graded subspace of the tensor module."""

    __slots__ = ("spaces",)

    def __init__(self, spaces: dict | None = None):
        self.spaces = spaces if spaces is not None else {}

    def weights(self) -> list[LatticeVector]:
        return sorted(self.spaces)

    def basis_at(self, n: LatticeVector) -> SubspaceBasis:
        return self.spaces.get(tuple(n), SubspaceBasis())

    def rank_at(self, n: LatticeVector) -> int:
        return self.basis_at(n).rank

    def dims(self) -> dict[LatticeVector, int]:
        return {n: b.rank for n, b in sorted(self.spaces.items())}

    def contains_component(self, n: LatticeVector, v: SparseVector) -> bool:
        return self.basis_at(n).contains(v)

    def contains(self, x: FVector) -> bool:
        """Membership for graded subspaces: every component must lie in its
        weight space (sound because all stored spans are weight-homogeneous)."""
        return all(
            self.contains_component(n, v) for n, v in x.components.items()
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.spaces == other.spaces


def _closure_levels(cfg: FSpaceConfig, generators: Sequence[FVector], radius: int, max_words: int):
    """Drive the span-growth iteration, yielding after every word length.

    Word images of a homogeneous vector stay homogeneous, so the span is
    maintained as per-weight canonical bases.  Each level extends only the
    rows added in the previous level; together with level barriers this spans
    exactly the images of all operator words of the current length bound.
    """
    d = cfg.d
    ops = [
        (tuple(1 if t == i else 0 for t in range(d)), r)
        for i in range(d)
        for r in itertools.product(range(-radius, radius + 1), repeat=d)
    ]
    spaces: dict = {}
    frontier: list[tuple[LatticeVector, SparseVector]] = []
    for g in generators:
        if g.is_zero():
            raise ValueError("closure generators must be nonzero")
        if len(g.components) != 1:
            raise ValueError(
                "closure generators must be homogeneous (a single lattice degree); "
                "split the vector into components first"
            )
        ((n, v),) = g.components.items()
        basis = spaces.get(n, SubspaceBasis())
        basis, row = basis.insert(v)
        if row is not None:
            spaces[n] = basis
            frontier.append((n, row))
    yield 0, spaces, frontier
    for level in range(1, max_words + 1):
        new_frontier: list[tuple[LatticeVector, SparseVector]] = []
        for n, v in frontier:
            for u, r in ops:
                n2, w = act_component(cfg, u, r, n, v)
                if w.is_zero():
                    continue
                basis = spaces.get(n2, SubspaceBasis())
                basis, row = basis.insert(w)
                if row is not None:
                    spaces[n2] = basis
                    new_frontier.append((n2, row))
        frontier = new_frontier
        yield level, spaces, frontier
        if not frontier:
            return


def closure_reach(
    cfg: FSpaceConfig, generators: Sequence[FVector], budget: ClosureBudget
) -> GradedSubspace:
    """Exact span of all operator words of length <= T applied to the
    generators, organized by weight.  Vectors are never truncated; only
    reports downstream are windowed."""
    spaces: dict = {}
    for _, spaces, _ in _closure_levels(cfg, generators, budget.R, budget.T):
        pass
    return GradedSubspace(dict(spaces))


def window_weights(d: int, window: Window) -> list[LatticeVector]:
    return lattice_box(d, window.N)


def required_fiber_keys(module: GlModuleSpec, window: Window) -> list[BasisKey]:
    """Fiber basis a coverage check must reach at every windowed weight."""
    if module.variant == "nilsson":
        if window.D is None:
            raise ValueError("window needs a fiber degree bound D for the nilsson fiber")
        return basis_enumerate(module, window.D)
    return basis_enumerate(module)


@dataclass(frozen=True)
class CyclicityReport:
    """Outcome of a windowed cyclicity probe.

    ``sufficient`` is the smallest (R, T) that achieved coverage, or None.
    ``table`` maps each windowed weight to (achieved rank, required dim,
    covered flag); achieved rank counts exact reached vectors of any fiber
    degree, while the covered flag tests actual containment of each required
    basis vector.
    """

    covered: bool
    budget: ClosureBudget
    sufficient: tuple[int, int] | None
    table: dict = field(compare=False)

    def shortfall(self) -> list[LatticeVector]:
        return [n for n, row in self.table.items() if not row["covered"]]


def _coverage_table(reach_spaces: dict, weights, keys) -> tuple[bool, dict]:
    table = {}
    all_covered = True
    for n in weights:
        basis = reach_spaces.get(n, SubspaceBasis())
        ok = all(basis.contains(SparseVector.unit(key)) for key in keys)
        table[n] = {
            "achieved": basis.rank,
            "required": len(keys),
            "covered": ok,
        }
        all_covered = all_covered and ok
    return all_covered, table


def is_window_cyclic(
    cfg: FSpaceConfig, generator: FVector, window: Window, budget: ClosureBudget
) -> CyclicityReport:
    """Covered iff budgeted operator words of the generator span every
    required fiber basis vector at every windowed weight.

    Coverage is tested after each word length, so the report's ``sufficient``
    field records the smallest word length that worked at this radius.
    not_covered outcomes are evidence only: a larger budget may still cover.
    """
    weights = window_weights(cfg.d, window)
    keys = required_fiber_keys(cfg.module, window)
    last_table: dict = {}
    for level, spaces, _ in _closure_levels(cfg, [generator], budget.R, budget.T):
        covered, last_table = _coverage_table(spaces, weights, keys)
        if covered:
            return CyclicityReport(True, budget, (budget.R, level), last_table)
    return CyclicityReport(False, budget, None, last_table)


def find_cyclic_budget(
    cfg: FSpaceConfig, generator: FVector, window: Window, max_budget: ClosureBudget
) -> CyclicityReport:
    """Escalate the operator radius from 1 to max_budget.R, reporting the
    smallest sufficient (R, T) within the budget, or the final shortfall."""
    report = None
    for radius in range(1, max_budget.R + 1):
        report = is_window_cyclic(
            cfg, generator, window, ClosureBudget(radius, max_budget.T)
        )
        if report.covered:
            return CyclicityReport(True, max_budget, report.sufficient, report.table)
    return CyclicityReport(False, max_budget, None, report.table)


# ---------------------------------------------------------------------------
# the wedge intertwiner and the reducibility certificate


def _wedge_covector_key(weights: QVector, key: tuple) -> SparseVector:
    """(sum_i w_i e_i) wedge e_key, with the Koszul sign for sorted order."""
    out = {}
    for i in range(1, len(weights) + 1):
        c = weights[i - 1]
        if not c or i in key:
            continue
        crossings = sum(1 for s in key if s < i)
        out[tuple(sorted(key + (i,)))] = -c if crossings % 2 else c
    return SparseVector(out)


def derham_source_config(d: int, k: int, alpha: QVector) -> FSpaceConfig:
    """The (k-1)-form space at identity scalar k-1 that maps into k-forms."""
    if not 1 <= k <= d:
        raise ValueError(f"wedge intertwiner needs 1 <= k <= d, got k={k}")
    return FSpaceConfig(d, alpha, exterior(d, k - 1, k - 1))


def derham_target_config(cfg_source: FSpaceConfig) -> FSpaceConfig:
    k = cfg_source.module.k + 1
    return FSpaceConfig(cfg_source.d, cfg_source.alpha, exterior(cfg_source.d, k, k))


def derham_map(cfg_source: FSpaceConfig, x: FVector) -> FVector:
    """v(n) -> ((alpha + n) wedge v)(n), from (k-1)-forms into k-forms.

    The source must be the exterior fiber at its own degree as identity
    scalar (b = k-1); the image lands in the k-form space with b = k and is
    weight-preserving by construction.
    """
    module = cfg_source.module
    if module.variant != "exterior" or module.b != module.k:
        raise ValueError(
            "wedge intertwiner source must be an exterior fiber with b equal "
            f"to its degree, got {module.describe()}"
        )
    if module.k + 1 > cfg_source.d:
        raise ValueError("wedge intertwiner target degree exceeds d")
    out: dict = {}
    for n, v in x.components.items():
        w = weight_of(cfg_source, n)
        acc = SparseVector.zero()
        for key, c in v.items():
            acc = acc.add_scaled(_wedge_covector_key(w, key), c)
        if not acc.is_zero():
            out[n] = acc
    return FVector(out)


def verify_derham_intertwines(
    d: int,
    k: int,
    alpha: QVector,
    window: Window,
    radius: int,
    target_b: Rational | None = None,
) -> tuple[int, LatticeVector, LatticeVector, BasisKey] | None:
    """Exhaustively check that the wedge map commutes with every D(e_i, r),
    |r|_inf <= radius, on all source basis vectors v(n) with n in the window.

    Returns None, or the least failing site (i, r, n, key).  ``target_b``
    exists for mutation tests: any value other than k breaks the intertwiner.
    """
    src = derham_source_config(d, k, alpha)
    tgt = derham_target_config(src)
    if target_b is not None:
        tgt = FSpaceConfig(d, alpha, exterior(d, k, target_b))
    keys = basis_enumerate(src.module)
    for i in range(1, d + 1):
        for r in lattice_box(d, radius):
            op = shifted(d, i, r)
            for n in window_weights(d, window):
                for key in keys:
                    x = basis_fvector(src, key, n)
                    lhs = derham_map(src, act(src, op, x))
                    rhs = act(tgt, op, derham_map(src, x))
                    if lhs != rhs:
                        return (i, r, n, key)
    return None


@dataclass(frozen=True)
class ReducibilityCertificate:
    """Finite certificate that the wedge image is a windowed proper invariant
    graded subspace: every tested operator maps each image space into the
    image space at the shifted weight, and the image rank stays below the
    fiber dimension at the listed weights."""

    d: int
    k: int
    b: Rational
    alpha: QVector
    window_n: int
    radius: int
    full_rank: int
    image_ranks: dict = field(compare=False)
    proper_weights: tuple[LatticeVector, ...] = ()
    invariance_sites_checked: int = 0


@dataclass(frozen=True)
class NoCertificate:
    reason: str
    failing_site: tuple | None = None
    image_ranks: dict | None = field(default=None, compare=False)


def certify_reducible_fundamental(
    d: int,
    k: int,
    b,
    alpha: QVector,
    window: Window,
    radius: int,
) -> ReducibilityCertificate | NoCertificate:
    """Try to certify reducibility of the exterior-fiber module via the
    graded wedge image.

    The certificate checks (i) invariance: D(e_i, r) maps the image at n into
    the image at n+r for every windowed pair of weights, and (ii) properness:
    the image rank is strictly below the fiber dimension at some tested
    weight.  Both checks are exact; with b different from k invariance fails
    and no certificate exists.
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}")
    b = parse_rational(b)
    cfg = FSpaceConfig(d, tuple(alpha), exterior(d, k, b))
    source_keys = list(itertools.combinations(range(1, d + 1), k - 1))
    weights = window_weights(d, window)
    image = {
        n: rref_basis(
            _wedge_covector_key(weight_of(cfg, n), key) for key in source_keys
        )
        for n in weights
    }
    ranks = {n: image[n].rank for n in weights}
    full = _binomial(d, k)
    proper = tuple(n for n in weights if ranks[n] < full)
    if not proper:
        return NoCertificate(
            "image has full rank at every tested weight", None, ranks
        )
    window_set = set(weights)
    sites = 0
    for n in weights:
        for i in range(1, d + 1):
            u = tuple(1 if t == i - 1 else 0 for t in range(d))
            for r in lattice_box(d, radius):
                n2 = tuple(a + c for a, c in zip(n, r))
                if n2 not in window_set:
                    continue
                target = image[n2]
                for row in image[n].rows:
                    m2, w = act_component(cfg, u, r, n, row)
                    sites += 1
                    if not target.contains(w):
                        return NoCertificate(
                            "invariance fails", (i, tuple(r), n), ranks
                        )
    return ReducibilityCertificate(
        d=d,
        k=k,
        b=b,
        alpha=tuple(alpha),
        window_n=window.N,
        radius=radius,
        full_rank=full,
        image_ranks=ranks,
        proper_weights=proper,
        invariance_sites_checked=sites,
    )


# ---------------------------------------------------------------------------
# the isomorphism criterion


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    reason: str = ""
    b_equal: bool = False
    alpha_shift_integral: bool = False
    fibers_isomorphic: bool = False


def _sl_canonical_key(spec: GlModuleSpec):
    """Canonical tag of the fiber's sl_d-isomorphism class, when decidable
    from catalog parameters alone; None for explicit fibers.

    Coincidences folded in: the first exterior power and the first symmetric
    power are both the natural module; the top exterior power and the zeroth
    symmetric power are both trivial; for d = 2 the shift-action fibers at
    beta and -1-beta carry literally identical operators.
    """
    if spec.variant == "exterior":
        if spec.k == 1:
            return ("sym", 1)
        if spec.k == spec.d:
            return ("sym", 0)
        return ("ext", spec.k)
    if spec.variant == "symmetric":
        return ("sym", spec.m)
    if spec.variant == "nilsson":
        beta = spec.beta
        if spec.d == 2:
            beta = max(beta, -1 - beta)
        return ("nil", beta)
    return None


def _sl_generator_matrices(spec: GlModuleSpec) -> list:
    return [
        operator_matrix(spec, i, j)
        for i in range(1, spec.d + 1)
        for j in range(1, spec.d + 1)
        if i != j
    ]


def _matrix_rank(mat: Sequence[Sequence[Rational]]) -> int:
    rows = [
        SparseVector({c: val for c, val in enumerate(row) if val}) for row in mat
    ]
    return rref_basis(rows).rank


def _explicit_sl_isomorphic(spec1: GlModuleSpec, spec2: GlModuleSpec, cap: int) -> bool:
    """Simultaneous-conjugacy search for the off-diagonal unit actions.

    Solves the linear system sigma A_g = B_g sigma for all generators and
    looks for an invertible element of the solution space.  Candidate combos
    are deterministic; for irreducible fibers any nonzero intertwiner is
    already invertible, so the bounded search is complete there.
    """
    dim1, dim2 = spec1.dimension, spec2.dimension
    if dim1 != dim2:
        return False
    if dim1 > cap:
        raise ValueError(
            f"explicit fiber comparison capped at dimension {cap}, got {dim1}"
        )
    gens1 = _sl_generator_matrices(spec1)
    gens2 = _sl_generator_matrices(spec2)
    dim = dim1
    keys = [(r, c) for r in range(dim) for c in range(dim)]
    rows = []
    for a_mat, b_mat in zip(gens1, gens2):
        for r in range(dim):
            for c in range(dim):
                entries: dict = {}
                for t in range(dim):
                    if a_mat[t][c]:
                        entries[(r, t)] = entries.get((r, t), 0) + a_mat[t][c]
                    if b_mat[r][t]:
                        entries[(t, c)] = entries.get((t, c), 0) - b_mat[r][t]
                row = SparseVector(entries)
                if not row.is_zero():
                    rows.append(row)
    hom = kernel_basis(rows, keys)
    if not hom:
        return False
    candidates = list(hom)
    running = SparseVector.zero()
    for idx, h in enumerate(hom):
        running = running.add_scaled(h, idx + 1)
        candidates.append(running)
    for cand in candidates:
        mat = [[cand.get((r, c)) for c in range(dim)] for r in range(dim)]
        if _matrix_rank(mat) == dim:
            return True
    return False


def _fibers_sl_isomorphic(spec1: GlModuleSpec, spec2: GlModuleSpec, cap: int) -> bool:
    key1, key2 = _sl_canonical_key(spec1), _sl_canonical_key(spec2)
    if key1 is not None and key2 is not None:
        return key1 == key2
    # at least one explicit fiber: compare matrices (infinite fibers cannot match)
    if spec1.dimension is None or spec2.dimension is None:
        return False
    return _explicit_sl_isomorphic(spec1, spec2, cap)


def iso_criterion(
    cfg1: FSpaceConfig, cfg2: FSpaceConfig, explicit_dim_cap: int = 8
) -> IsoResult:
    """Decide whether two tensor modules are isomorphic: the identity scalars
    must agree, the alpha parameters must differ by a lattice vector, and the
    fibers must be isomorphic as sl_d-modules."""
    if cfg1.d != cfg2.d:
        raise ValueError("isomorphism criterion needs equal d")
    b_equal = cfg1.module.b == cfg2.module.b
    shift = tuple(a - c for a, c in zip(cfg1.alpha, cfg2.alpha))
    alpha_integral = all(x.denominator == 1 for x in shift)
    fibers = _fibers_sl_isomorphic(cfg1.module, cfg2.module, explicit_dim_cap)
    if b_equal and alpha_integral and fibers:
        return IsoResult(True, "", True, True, True)
    reasons = []
    if not b_equal:
        reasons.append(
            f"identity scalars differ ({cfg1.module.b} vs {cfg2.module.b})"
        )
    if not alpha_integral:
        reasons.append("alpha parameters do not differ by a lattice vector")
    if not fibers:
        reasons.append("fiber modules are not sl_d-isomorphic")
    return IsoResult(False, "; ".join(reasons), b_equal, alpha_integral, fibers)
