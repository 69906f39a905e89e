"""Witt algebra operators and their action on the tensor modules F = V (x) A_d.

An operator D(u, r) (u rational, r integral) acts on a component v(n) by

    D(u, r) v(n) = ( (u | n + alpha) v + (r u^T) v )(n + r)

where the rank-one matrix r u^T = sum_ij r_i u_j E_ij acts through the fiber
module.  This file carries the bracket, the action, the exhaustive
representation-axiom checker, and the interpolation machinery that extracts
operator-polynomial coefficients (the engine behind the proof-replay checks).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .exactlinalg import (
    LatticeVector,
    QVector,
    Rational,
    SparseVector,
    dot,
    vandermonde_solve,
)
from .glmodules import (
    BasisKey,
    GlModuleSpec,
    ModuleVector,
    _apply_key,
    apply_E,
    basis_enumerate,
)


@dataclass(frozen=True)
class WittOperator:
    """D(u, r): the derivation x^r sum_i u_i x_i d/dx_i.

    u = 0 is allowed and denotes the zero operator; D(e_i, 0) is the i-th
    Cartan generator and the monomial multiplier x^a lives in r.
    """

    u: QVector
    r: LatticeVector

    def __post_init__(self):
        if len(self.u) != len(self.r):
            raise ValueError(f"operator arity mismatch: u has {len(self.u)}, r has {len(self.r)}")
        if not all(isinstance(c, int) for c in self.r):
            raise ValueError("lattice part r must be integral")

    @property
    def d(self) -> int:
        return len(self.u)

    def is_zero(self) -> bool:
        return not any(self.u)


def cartan(d: int, i: int) -> WittOperator:
    """D(e_i, 0), 1-based."""
    return WittOperator(tuple(1 if t == i - 1 else 0 for t in range(d)), (0,) * d)


def shifted(d: int, i: int, r: LatticeVector) -> WittOperator:
    """D(e_i, r), 1-based."""
    return WittOperator(tuple(1 if t == i - 1 else 0 for t in range(d)), tuple(r))


@dataclass(frozen=True)
class WittSum:
    """Formal finite sum of operators (rational coefficients folded into u)."""

    terms: tuple[WittOperator, ...]

    def is_zero(self) -> bool:
        return not self.terms


def bracket(a: WittOperator, b: WittOperator) -> WittSum:
    """[D(u,r), D(v,s)] = D((u|s)v - (v|r)u, r+s)."""
    if a.d != b.d:
        raise ValueError("bracket of operators with different d")
    cu = dot(a.u, b.r)
    cv = dot(b.u, a.r)
    w = tuple(cu * bv - cv * av for av, bv in zip(a.u, b.u))
    if not any(w):
        return WittSum(())
    return WittSum((WittOperator(w, tuple(x + y for x, y in zip(a.r, b.r))),))


@dataclass(frozen=True)
class FSpaceConfig:
    """The tensor module F = V (x) A_d determined by alpha and a fiber module."""

    d: int
    alpha: QVector
    module: GlModuleSpec

    def __post_init__(self):
        if self.module.d != self.d:
            raise ValueError(f"module has d={self.module.d}, config says d={self.d}")
        if len(self.alpha) != self.d:
            raise ValueError(f"alpha must have length {self.d}")


class FVector:
    """Element of F: finite map from lattice degree n to a fiber vector v(n)."""

    __slots__ = ("components",)

    def __init__(self, components: dict | None = None):
        self.components = {
            n: v for n, v in (components or {}).items() if not v.is_zero()
        }

    @classmethod
    def _raw(cls, clean: dict) -> "FVector":
        x = cls.__new__(cls)
        x.components = clean
        return x

    @classmethod
    def single(cls, n: LatticeVector, v: ModuleVector) -> "FVector":
        return cls({tuple(n): v})

    @classmethod
    def zero(cls) -> "FVector":
        return cls._raw({})

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def support(self) -> list[LatticeVector]:
        return sorted(self.components)

    def component(self, n: LatticeVector) -> ModuleVector:
        return self.components.get(tuple(n), SparseVector.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FVector):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        raise TypeError("FVector is not hashable")

    def __add__(self, other: "FVector") -> "FVector":
        out = dict(self.components)
        for n, v in other.components.items():
            s = out.get(n)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(n, None)
            else:
                out[n] = s
        return FVector._raw(out)

    def __sub__(self, other: "FVector") -> "FVector":
        out = dict(self.components)
        for n, v in other.components.items():
            s = out.get(n)
            s = -v if s is None else s - v
            if s.is_zero():
                out.pop(n, None)
            else:
                out[n] = s
        return FVector._raw(out)

    def __neg__(self) -> "FVector":
        return FVector._raw({n: -v for n, v in self.components.items()})

    def __rmul__(self, scalar: Rational) -> "FVector":
        if scalar == 0:
            return FVector._raw({})
        return FVector._raw({n: scalar * v for n, v in self.components.items()})

    __mul__ = __rmul__

    def __repr__(self) -> str:
        parts = ", ".join(f"{n}: {v!r}" for n, v in sorted(self.components.items()))
        return f"FVector({{{parts}}})"


def basis_fvector(cfg: FSpaceConfig, key: BasisKey, n: LatticeVector) -> FVector:
    """The basis element v(n) for v the fiber basis vector at ``key``."""
    return FVector.single(tuple(n), SparseVector.unit(key))


def act_component(
    cfg: FSpaceConfig,
    u: QVector,
    r: LatticeVector,
    n: LatticeVector,
    v: ModuleVector,
) -> tuple[LatticeVector, ModuleVector]:
    """Image (n + r, w) of the single component v(n) under D(u, r)."""
    alpha = cfg.alpha
    scalar: Rational = 0
    for i, ui in enumerate(u):
        if ui:
            scalar += ui * (n[i] + alpha[i])
    entries = v.entries
    acc: dict = {}
    if scalar:
        for key, c in entries.items():
            acc[key] = scalar * c
    spec = cfg.module
    cache = spec._cache
    nz_u = [(j + 1, uj) for j, uj in enumerate(u) if uj]
    nz_r = [(i + 1, ri) for i, ri in enumerate(r) if ri]
    if not (nz_u and nz_r):
        return tuple(x + y for x, y in zip(n, r)), SparseVector._raw(acc)
    acc_get = acc.get
    if len(nz_u) == 1:
        # common case u = c.e_j: pre-merge sum_i r_i E_ij per key and cache it
        jj, uj = nz_u[0]
        for key, c in entries.items():
            ck = (jj, r, key)
            image = cache.get(ck)
            if image is None:
                merged: dict = {}
                for ii, ri in nz_r:
                    part = cache.get((ii, jj, key))
                    if part is None:
                        part = _apply_key(spec, ii, jj, key)
                        cache[(ii, jj, key)] = part
                    for k2, c2 in part.entries.items():
                        merged[k2] = merged.get(k2, 0) + ri * c2
                image = SparseVector(merged)
                cache[ck] = image
            cc = uj * c
            for k2, c2 in image.entries.items():
                s = acc_get(k2, 0) + cc * c2
                if s:
                    acc[k2] = s
                elif k2 in acc:
                    del acc[k2]
    else:
        for ii, ri in nz_r:
            for jj, uj in nz_u:
                cij = ri * uj
                for key, c in entries.items():
                    ck = (ii, jj, key)
                    image = cache.get(ck)
                    if image is None:
                        image = _apply_key(spec, ii, jj, key)
                        cache[ck] = image
                    cc = cij * c
                    for k2, c2 in image.entries.items():
                        s = acc_get(k2, 0) + cc * c2
                        if s:
                            acc[k2] = s
                        elif k2 in acc:
                            del acc[k2]
    return tuple(x + y for x, y in zip(n, r)), SparseVector._raw(acc)


def act(cfg: FSpaceConfig, op: WittOperator, x: FVector) -> FVector:
    """Exact image of x under D(u, r), extended linearly over components."""
    if op.d != cfg.d:
        raise ValueError(f"operator has d={op.d}, space has d={cfg.d}")
    out: dict = {}
    for n, v in x.components.items():
        target, w = act_component(cfg, op.u, op.r, n, v)
        if w.is_zero():
            continue
        s = out.get(target)
        s = w if s is None else s + w
        if s.is_zero():
            out.pop(target, None)
        else:
            out[target] = s
    return FVector._raw(out)


def act_sum(cfg: FSpaceConfig, ws: WittSum, x: FVector) -> FVector:
    out = FVector.zero()
    for term in ws.terms:
        out = out + act(cfg, term, x)
    return out


def weight_of(cfg: FSpaceConfig, n: LatticeVector) -> QVector:
    """Eigenvalue tuple of the Cartan operators D(e_i, 0) on the component at n."""
    return tuple(a + c for a, c in zip(cfg.alpha, n))


@dataclass(frozen=True)
class RepCounterexample:
    """A site where the commutator identity fails."""

    op_a: WittOperator
    op_b: WittOperator
    n: LatticeVector
    key: BasisKey


def _check_pair_generic(cfg, op_a, op_b, degrees, basis, act_fn):
    br = bracket(op_a, op_b)
    for n_idx, n in enumerate(degrees):
        for k_idx, key in enumerate(basis):
            x = basis_fvector(cfg, key, n)
            bx = act_fn(cfg, op_b, x)
            ax = act_fn(cfg, op_a, x)
            lhs = act_fn(cfg, op_a, bx) - act_fn(cfg, op_b, ax)
            rhs = FVector.zero()
            for term in br.terms:
                rhs = rhs + act_fn(cfg, term, x)
            if lhs != rhs:
                return (n_idx, k_idx)
    return None


def verify_representation(
    cfg: FSpaceConfig,
    operator_set: Sequence[WittOperator],
    degrees: Sequence[LatticeVector],
    v_degree_bound: int | None = None,
    threads: int = 1,
    act_fn: Callable | None = None,
) -> RepCounterexample | None:
    """Exhaustively check A(Bx) - B(Ax) = [A,B]x over the given finite box.

    All unordered operator pairs from ``operator_set`` are tested against
    every basis component v(n) with n in ``degrees`` (fiber basis truncated
    to ``v_degree_bound`` for the nilsson variant).  Returns None when every
    site satisfies the identity exactly, else the failing site that is least
    in the ordering (index of A, index of B, position of n, basis position)
    regardless of thread count.  ``act_fn`` exists so tests can check that a
    mutated action is caught; passing it selects an unoptimized code path.
    """
    degrees = [tuple(n) for n in degrees]
    basis = basis_enumerate(cfg.module, v_degree_bound)
    operator_set = list(operator_set)
    pairs = [
        (ai, bi)
        for ai in range(len(operator_set))
        for bi in range(ai + 1, len(operator_set))
    ]

    if act_fn is not None:
        def task(pair):
            ai, bi = pair
            hit = _check_pair_generic(
                cfg, operator_set[ai], operator_set[bi], degrees, basis, act_fn
            )
            return None if hit is None else (ai, bi, hit[0], hit[1])
    else:
        # Component-level fast path.  Every tested vector is homogeneous, so
        # both sides of the identity live in the single lattice degree
        # n + r_A + r_B and the check can compare fiber vectors directly.
        # First-level images A x are shared across all pairs involving A.
        units = {key: SparseVector.unit(key) for key in basis}
        first_level: dict = {}

        def first(oi, n, key):
            memo_key = (oi, n, key)
            got = first_level.get(memo_key)
            if got is None:
                op = operator_set[oi]
                got = act_component(cfg, op.u, op.r, n, units[key])
                first_level[memo_key] = got
            return got

        def task(pair):
            ai, bi = pair
            op_a, op_b = operator_set[ai], operator_set[bi]
            br = bracket(op_a, op_b).terms
            for n_idx, n in enumerate(degrees):
                for k_idx, key in enumerate(basis):
                    nb, wb = first(bi, n, key)
                    na, wa = first(ai, n, key)
                    _, w1 = act_component(cfg, op_a.u, op_a.r, nb, wb)
                    _, w2 = act_component(cfg, op_b.u, op_b.r, na, wa)
                    lhs = w1 - w2
                    if br:
                        _, wr = act_component(cfg, br[0].u, br[0].r, n, units[key])
                        ok = lhs == wr
                    else:
                        ok = lhs.is_zero()
                    if not ok:
                        return (ai, bi, n_idx, k_idx)
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(task, pairs, chunksize=16))
    else:
        results = map(task, pairs)
    hits = [h for h in results if h is not None]
    if not hits:
        return None
    ai, bi, n_idx, k_idx = min(hits)
    return RepCounterexample(operator_set[ai], operator_set[bi], degrees[n_idx], basis[k_idx])


def operator_box(d: int, radius: int) -> list[WittOperator]:
    """All D(e_i, r) with |r|_inf <= radius, in (i, r) lexicographic order."""
    return [
        shifted(d, i, r)
        for i in range(1, d + 1)
        for r in itertools.product(range(-radius, radius + 1), repeat=d)
    ]


def lattice_box(d: int, radius: int) -> list[LatticeVector]:
    """All n with |n|_inf <= radius, lexicographically ordered."""
    return list(itertools.product(range(-radius, radius + 1), repeat=d))


# ---------------------------------------------------------------------------
# operator polynomials and coefficient extraction


@dataclass(frozen=True)
class OperatorPolynomial:
    """Vector-valued polynomial g(n, u) applied to a fixed fiber vector.

    Coefficients are indexed by multidegree pairs (a, b) with a the exponent
    tuple of the n-variables and b that of the u-variables.
    """

    coefficients: dict = field(compare=False)
    n_bounds: tuple[int, ...] = ()
    u_bounds: tuple[int, ...] = ()

    def coefficient(self, a: LatticeVector, b: LatticeVector) -> FVector:
        return self.coefficients.get((tuple(a), tuple(b)), FVector.zero())

    def evaluate(self, n: Sequence[Rational], u: Sequence[Rational]) -> FVector:
        point = tuple(n) + tuple(u)
        acc = FVector.zero()
        for (a, b), vec in self.coefficients.items():
            term: Rational = 1
            for e, val in zip(a + b, point):
                if e:
                    term *= val**e
            acc = acc + term * vec
        return acc


def interpolate_operator_polynomial(
    cfg: FSpaceConfig,
    blackbox: Callable[[LatticeVector, QVector], FVector],
    n_bounds: Sequence[int],
    u_bounds: Sequence[int],
) -> OperatorPolynomial:
    """Recover all coefficients of a polynomial blackbox (n, u) -> FVector.

    The blackbox must be polynomial of the stated per-variable degrees, which
    holds for every composition of operator actions.  Evaluations run on the
    integer grid 0..bound per variable and the solve is exact.
    """
    n_bounds = tuple(n_bounds)
    u_bounds = tuple(u_bounds)
    grid = list(
        itertools.product(*(range(b + 1) for b in n_bounds + u_bounds))
    )
    dn = len(n_bounds)
    values = [blackbox(p[:dn], p[dn:]) for p in grid]
    solved = vandermonde_solve(grid, values, n_bounds + u_bounds)
    coefficients = {
        (deg[:dn], deg[dn:]): vec for deg, vec in solved.items() if not vec.is_zero()
    }
    return OperatorPolynomial(coefficients, n_bounds, u_bounds)


def extract_coefficient(
    cfg: FSpaceConfig,
    blackbox: Callable[[LatticeVector, QVector], FVector],
    n_bounds: Sequence[int],
    u_bounds: Sequence[int],
    target_a: LatticeVector,
    target_b: LatticeVector,
) -> FVector:
    """The coefficient of n^a u^b in the blackbox, by exact grid interpolation."""
    poly = interpolate_operator_polynomial(cfg, blackbox, n_bounds, u_bounds)
    return poly.coefficient(target_a, target_b)


# ---------------------------------------------------------------------------
# proof replay: the two coefficient claims behind the irreducibility argument


def _unit_tuple(d: int, idx: int, value: int = 1) -> tuple[int, ...]:
    return tuple(value if t == idx - 1 else 0 for t in range(d))


def replay_claim1(
    cfg: FSpaceConfig, s: int, t: int, m: LatticeVector, v: ModuleVector
) -> bool:
    """Check that the n_s^2 u_t^2 coefficient of D(u, m-n) D(u, n) v(0)
    equals -E_st E_st v placed at lattice degree m (s != t).

    The composed action is polynomial of degree <= 2 in every n_i and u_j,
    so a 3-point grid per variable determines it exactly.
    """
    if s == t:
        raise ValueError("claim 1 needs s != t")
    d = cfg.d
    m = tuple(m)

    def blackbox(n: LatticeVector, u: QVector) -> FVector:
        x = FVector.single((0,) * d, v)
        inner = act(cfg, WittOperator(u, n), x)
        outer_r = tuple(mi - ni for mi, ni in zip(m, n))
        return act(cfg, WittOperator(u, outer_r), inner)

    got = extract_coefficient(
        cfg, blackbox, (2,) * d, (2,) * d, _unit_tuple(d, s, 2), _unit_tuple(d, t, 2)
    )
    spec = cfg.module
    expected_fiber = -1 * apply_E(spec, s, t, apply_E(spec, s, t, v))
    expected = FVector.single(m, expected_fiber)
    return got == expected


def replay_claim2(
    cfg: FSpaceConfig, i: int, j: int, m: LatticeVector, v: ModuleVector
) -> bool:
    """Check the n_i u_j coefficient of D(u, n) v(m - n): it must equal
    E_ij v at degree m for i != j, and (E_ii - 1) v for i = j.

    Degree <= 1 per variable, so a 2-point grid per variable suffices.
    """
    d = cfg.d
    m = tuple(m)

    def blackbox(n: LatticeVector, u: QVector) -> FVector:
        base = tuple(mi - ni for mi, ni in zip(m, n))
        return act(cfg, WittOperator(u, n), FVector.single(base, v))

    got = extract_coefficient(
        cfg, blackbox, (1,) * d, (1,) * d, _unit_tuple(d, i), _unit_tuple(d, j)
    )
    spec = cfg.module
    expected_fiber = apply_E(spec, i, j, v)
    if i == j:
        expected_fiber = expected_fiber - v
    expected = FVector.single(m, expected_fiber)
    return got == expected
