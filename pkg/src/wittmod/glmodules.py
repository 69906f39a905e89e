"""Catalog of gl_d-module structures used as fibers of the tensor modules.

Each entry fixes a vector space V with an action of the matrix units E_ij and
a scalar b by which the identity matrix acts.  Four variants are supported:

* ``exterior``  -- the k-th exterior power of the natural module,
* ``symmetric`` -- the m-th symmetric power of the natural module,
* ``nilsson``   -- the polynomial ring C[h_1, ..., h_{d-1}] with the explicit
  shift/multiplication action parameterized by a rational beta (an infinite
  dimensional irreducible sl_d-module),
* ``explicit``  -- user-supplied matrices on a finite basis.

The sl_d-action of each variant is fixed; the identity scalar b is free.  The
diagonal units act as (natural diagonal action) + (b - b0)/d where b0 is the
natural identity scalar of the variant, so that the gl bracket relations are
preserved for every b.  ``verify_gl_bracket`` checks them exhaustively rather
than trusting the formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exactlinalg import Rational, SparseVector, make_rational, parse_rational, rref_basis

# A basis key: sorted index tuple (exterior), exponent tuple (symmetric,
# nilsson) or plain integer index (explicit).
BasisKey = tuple | int

# Vector in a catalog module: SparseVector keyed by BasisKey.
ModuleVector = SparseVector

VARIANTS = ("exterior", "symmetric", "nilsson", "explicit")


@dataclass(frozen=True)
class GlModuleSpec:
    variant: str
    d: int
    b: Rational
    k: int | None = None
    m: int | None = None
    beta: Rational | None = None
    matrices: tuple | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown module variant {self.variant!r}")
        if self.d < 2:
            raise ValueError("d must be at least 2")

    @property
    def natural_identity_scalar(self) -> Rational:
        """Scalar by which the identity acts in the untwisted action."""
        if self.variant == "exterior":
            return self.k
        if self.variant == "symmetric":
            return self.m
        if self.variant == "nilsson":
            return 0
        return self.b

    @property
    def dimension(self) -> int | None:
        """Dimension of V, or None for the infinite-dimensional variant."""
        if self.variant == "exterior":
            return _binomial(self.d, self.k)
        if self.variant == "symmetric":
            return _binomial(self.m + self.d - 1, self.d - 1)
        if self.variant == "explicit":
            return len(self.matrices[0][0])
        return None

    def describe(self) -> str:
        if self.variant == "exterior":
            return f"exterior(d={self.d}, k={self.k}, b={self.b})"
        if self.variant == "symmetric":
            return f"symmetric(d={self.d}, m={self.m}, b={self.b})"
        if self.variant == "nilsson":
            return f"nilsson(d={self.d}, beta={self.beta}, b={self.b})"
        return f"explicit(d={self.d}, dim={self.dimension}, b={self.b})"


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def exterior(d: int, k: int, b) -> GlModuleSpec:
    """k-th exterior power of the natural module; identity acts as b.

    k = 0 (the trivial module) is permitted: it is the source of the wedge
    intertwiner into the k = 1 module.
    """
    if not 0 <= k <= d:
        raise ValueError(f"exterior power needs 0 <= k <= d, got k={k}, d={d}")
    return GlModuleSpec("exterior", d, parse_rational(b), k=k)


def symmetric(d: int, m: int, b) -> GlModuleSpec:
    """m-th symmetric power of the natural module; identity acts as b."""
    if m < 0:
        raise ValueError(f"symmetric power needs m >= 0, got {m}")
    return GlModuleSpec("symmetric", d, parse_rational(b), m=m)


def nilsson(d: int, beta, b) -> GlModuleSpec:
    """Polynomial module C[h_1,...,h_{d-1}] with shift action at parameter beta."""
    return GlModuleSpec("nilsson", d, parse_rational(b), beta=parse_rational(beta))


def explicit(d: int, b, matrices: Mapping | Sequence) -> GlModuleSpec:
    """Finite-dimensional module given by one matrix per unit E_ij.

    ``matrices`` maps (i, j) (1-based) to a row-major matrix; entries may be
    rational strings.  The identity must act as b times the identity matrix;
    the bracket law itself is checked by verify_gl_bracket, not here, so that
    deliberately broken fixtures remain constructible.
    """
    b = parse_rational(b)
    grid = []
    dim = None
    for i in range(1, d + 1):
        row_of_mats = []
        for j in range(1, d + 1):
            raw = matrices[(i, j)] if isinstance(matrices, Mapping) else matrices[i - 1][j - 1]
            mat = tuple(tuple(parse_rational(x) for x in row) for row in raw)
            if dim is None:
                dim = len(mat)
            if len(mat) != dim or any(len(r) != dim for r in mat):
                raise ValueError(f"matrix for E_{i}{j} is not {dim}x{dim}")
            row_of_mats.append(mat)
        grid.append(tuple(row_of_mats))
    for r in range(dim):
        for c in range(dim):
            total = sum(grid[i][i][r][c] for i in range(d))
            if total != (b if r == c else 0):
                raise ValueError(
                    f"identity does not act as scalar {b}: entry ({r},{c}) of sum E_ii is {total}"
                )
    return GlModuleSpec("explicit", d, b, matrices=tuple(grid))


def basis_enumerate(spec: GlModuleSpec, degree_bound: int | None = None) -> list[BasisKey]:
    """Canonical (lexicographic) basis list; nilsson needs a total-degree bound."""
    if spec.variant == "exterior":
        return list(itertools.combinations(range(1, spec.d + 1), spec.k))
    if spec.variant == "symmetric":
        return [
            a
            for a in itertools.product(range(spec.m + 1), repeat=spec.d)
            if sum(a) == spec.m
        ]
    if spec.variant == "nilsson":
        if degree_bound is None:
            raise ValueError("nilsson basis enumeration requires a degree bound")
        return [
            a
            for a in itertools.product(range(degree_bound + 1), repeat=spec.d - 1)
            if sum(a) <= degree_bound
        ]
    return list(range(spec.dimension))


def basis_vector(spec: GlModuleSpec, key: BasisKey) -> ModuleVector:
    return SparseVector.unit(key)


def key_degree(key: BasisKey) -> int:
    """Total degree of a nilsson monomial key."""
    return sum(key)


# ---------------------------------------------------------------------------
# polynomial helpers for the nilsson action (keys are exponent tuples)


def _poly_mul_h(v: SparseVector, var: int) -> SparseVector:
    out = {}
    for key, c in v.items():
        k2 = key[:var] + (key[var] + 1,) + key[var + 1 :]
        out[k2] = out.get(k2, 0) + c
    return SparseVector(out)


def _poly_shift(v: SparseVector, var: int, delta: int) -> SparseVector:
    """Substitute h_var -> h_var + delta, exactly (binomial expansion)."""
    out = {}
    for key, c in v.items():
        m = key[var]
        if m == 0:
            out[key] = out.get(key, 0) + c
            continue
        power = 1
        for t in range(m, -1, -1):
            k2 = key[:var] + (t,) + key[var + 1 :]
            out[k2] = out.get(k2, 0) + c * _binomial(m, t) * power
            power *= delta
    return SparseVector(out)


def _apply_key(spec: GlModuleSpec, i: int, j: int, key: BasisKey) -> ModuleVector:
    d = spec.d
    if spec.variant == "exterior":
        twist = make_rational(spec.b - spec.k, d)
        if i == j:
            coeff = (1 if i in key else 0) + twist
            return coeff * SparseVector.unit(key)
        if j not in key or i in key:
            return SparseVector.zero()
        rest = tuple(s for s in key if s != j)
        lo, hi = min(i, j), max(i, j)
        crossings = sum(1 for s in rest if lo < s < hi)
        sign = -1 if crossings % 2 else 1
        return sign * SparseVector.unit(tuple(sorted(rest + (i,))))
    if spec.variant == "symmetric":
        twist = make_rational(spec.b - spec.m, d)
        if i == j:
            return (key[i - 1] + twist) * SparseVector.unit(key)
        aj = key[j - 1]
        if aj == 0:
            return SparseVector.zero()
        k2 = list(key)
        k2[j - 1] -= 1
        k2[i - 1] += 1
        return aj * SparseVector.unit(tuple(k2))
    if spec.variant == "nilsson":
        beta = spec.beta
        shift_b = make_rational(spec.b, d)
        f = SparseVector.unit(key)
        if i == j:
            if i < d:
                return _poly_mul_h(f, i - 1) + shift_b * f
            out = shift_b * f
            for k in range(d - 1):
                out = out - _poly_mul_h(f, k)
            return out
        if i == d:
            # E_{d,j} f = -f(..., h_j + 1, ...)
            return -_poly_shift(f, j - 1, 1)
        if j == d:
            # E_{i,d} f = (beta + sum_k h_k)(h_i - beta - 1) f(..., h_i - 1, ...)
            g = _poly_shift(f, i - 1, -1)
            g = _poly_mul_h(g, i - 1) - (beta + 1) * g
            out = beta * g
            for k in range(d - 1):
                out = out + _poly_mul_h(g, k)
            return out
        # E_{i,j} f = (h_i - beta - 1) f(..., h_i - 1, ..., h_j + 1, ...)
        g = _poly_shift(_poly_shift(f, i - 1, -1), j - 1, 1)
        return _poly_mul_h(g, i - 1) - (beta + 1) * g
    # explicit
    mat = spec.matrices[i - 1][j - 1]
    return SparseVector({r: mat[r][key] for r in range(len(mat))})


def apply_E(spec: GlModuleSpec, i: int, j: int, v: ModuleVector) -> ModuleVector:
    """Image of v under the matrix unit E_ij (1-based indices)."""
    if not (1 <= i <= spec.d and 1 <= j <= spec.d):
        raise ValueError(f"matrix unit indices out of range: ({i},{j}) for d={spec.d}")
    cache = spec._cache
    acc: dict = {}
    for key, c in v.items():
        ck = (i, j, key)
        image = cache.get(ck)
        if image is None:
            image = _apply_key(spec, i, j, key)
            cache[ck] = image
        for k2, c2 in image.items():
            s = acc.get(k2, 0) + c * c2
            if s:
                acc[k2] = s
            elif k2 in acc:
                del acc[k2]
    return SparseVector._raw(acc)


def verify_gl_bracket(
    spec: GlModuleSpec, degree_bound: int | None = None
) -> tuple[int, int, int, int, BasisKey] | None:
    """Exhaustively check [E_ij, E_kl] = d_jk E_il - d_li E_kj on the basis.

    Returns None on success, else the lexicographically least failing
    (i, j, k, l, basis key).
    """
    basis = basis_enumerate(spec, degree_bound)
    d = spec.d
    for i, j, k, l in itertools.product(range(1, d + 1), repeat=4):
        for key in basis:
            v = SparseVector.unit(key)
            lhs = apply_E(spec, i, j, apply_E(spec, k, l, v)) - apply_E(
                spec, k, l, apply_E(spec, i, j, v)
            )
            rhs = SparseVector.zero()
            if j == k:
                rhs = rhs + apply_E(spec, i, l, v)
            if l == i:
                rhs = rhs - apply_E(spec, k, j, v)
            if lhs != rhs:
                return (i, j, k, l, key)
    return None


@dataclass(frozen=True)
class Nilpotent:
    """E_ij^index = 0 on the whole module, index minimal."""

    index: int


@dataclass(frozen=True)
class InjectiveOnTruncation:
    """The (possibly truncated) matrix of E_ij has full column rank."""


def classify_operator(
    spec: GlModuleSpec, i: int, j: int, truncation: int | None = None
) -> Nilpotent | InjectiveOnTruncation:
    """Decide which side of the nilpotent/injective dichotomy E_ij sits on.

    Finite-dimensional variants get an exact verdict.  For the nilsson
    variant the matrix from degree <= truncation into degree <= truncation+2
    is tested for full column rank (the action can raise degree by 2).
    """
    if i == j:
        raise ValueError("the dichotomy is stated for off-diagonal units only")
    if not (1 <= i <= spec.d and 1 <= j <= spec.d):
        raise ValueError(f"indices out of range: ({i},{j}) for d={spec.d}")
    if spec.variant == "nilsson":
        if truncation is None:
            raise ValueError("nilsson classification requires a truncation degree")
        domain = basis_enumerate(spec, truncation)
        images = [apply_E(spec, i, j, SparseVector.unit(key)) for key in domain]
        if rref_basis(images).rank == len(domain):
            return InjectiveOnTruncation()
        raise ArithmeticError(
            f"E_({i},{j}) has a kernel vector below degree {truncation}; "
            "the bounded check cannot classify it"
        )
    basis = basis_enumerate(spec)
    current = [SparseVector.unit(key) for key in basis]
    for t in range(1, len(basis) + 1):
        current = [apply_E(spec, i, j, v) for v in current]
        if all(v.is_zero() for v in current):
            return Nilpotent(t)
    images = [apply_E(spec, i, j, SparseVector.unit(key)) for key in basis]
    if rref_basis(images).rank == len(basis):
        return InjectiveOnTruncation()
    raise ArithmeticError(
        f"E_({i},{j}) is neither nilpotent nor injective; "
        "the module is not an irreducible sl_d-module"
    )


def operator_matrix(spec: GlModuleSpec, i: int, j: int) -> tuple[tuple[Rational, ...], ...]:
    """Row-major matrix of E_ij over the canonical basis (finite variants)."""
    if spec.dimension is None:
        raise ValueError("operator_matrix needs a finite-dimensional module")
    basis = basis_enumerate(spec)
    cols = [apply_E(spec, i, j, SparseVector.unit(key)) for key in basis]
    return tuple(
        tuple(col.get(basis[r]) for col in cols) for r in range(len(basis))
    )
