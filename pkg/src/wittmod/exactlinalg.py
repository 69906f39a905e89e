"""Exact rational scalars, sparse vectors, and the linear-algebra kernel.

Everything downstream (module actions, closure spans, interpolation) is built
on the pieces in this file.  All arithmetic is exact: scalars are Python ints
or ``fractions.Fraction`` values, which interoperate transparently and compare
equal whenever they denote the same rational.  No float is ever produced.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

try:
    # gmpy2's exact rationals share value semantics (equality, hashing,
    # "p/q" string form) with fractions.Fraction but are much faster.
    from gmpy2 import mpq as make_rational
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    make_rational = Fraction

# A rational scalar: plain int, Fraction, or gmpy2.mpq.  All three mix freely
# in arithmetic, compare equal when they denote the same rational, and are
# always in lowest terms with positive denominator.
Rational = int | Fraction

# Fixed-length integer tuple (lattice degrees, exponent vectors).
LatticeVector = tuple[int, ...]

# Fixed-length tuple of rationals (alpha, u-arguments, weights).
QVector = tuple[Rational, ...]

ONE = make_rational(1)


def parse_rational(text) -> Rational:
    """Parse an exact rational from a "p/q" or "p" string; ints pass through.

    Floats are rejected: no rounding is allowed anywhere in the package.
    """
    if isinstance(text, int):
        return text
    if isinstance(text, float):
        raise TypeError("refusing to build an exact rational from a float")
    if not isinstance(text, str):
        try:
            value = make_rational(text)
        except TypeError:
            raise TypeError(f"cannot parse rational from {type(text).__name__}")
    else:
        value = make_rational(text.strip())
    return int(value) if value.denominator == 1 else value


def format_rational(x: Rational) -> str:
    """Canonical "p/q" (or "p" when integral) form; inverse of parse_rational."""
    n, d = x.numerator, x.denominator
    return str(n) if d == 1 else f"{n}/{d}"


def dot(u: QVector, v: QVector) -> Rational:
    """Standard bilinear form u^T v, exactly."""
    if len(u) != len(v):
        raise ValueError(f"dot: length mismatch {len(u)} vs {len(v)}")
    total: Rational = 0
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def vec_add(u: Sequence[Rational], v: Sequence[Rational]) -> QVector:
    if len(u) != len(v):
        raise ValueError(f"vec_add: length mismatch {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


class SparseVector:
    """Sparse vector over an ordered key universe: key -> nonzero rational.

    Instances are immutable by convention; all public operations return new
    vectors.  Keys must be mutually orderable (ints, or tuples of ints) --
    the canonical key order of the universe is plain Python ``<``.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping | Iterable | None = None):
        if entries is None:
            self.entries = {}
        else:
            items = entries.items() if isinstance(entries, Mapping) else entries
            self.entries = {k: v for k, v in items if v != 0}

    @classmethod
    def _raw(cls, clean: dict) -> "SparseVector":
        # internal: caller guarantees no zero values
        v = cls.__new__(cls)
        v.entries = clean
        return v

    @classmethod
    def unit(cls, key) -> "SparseVector":
        return cls._raw({key: 1})

    @classmethod
    def zero(cls) -> "SparseVector":
        return cls._raw({})

    def get(self, key) -> Rational:
        return self.entries.get(key, 0)

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def keys(self):
        return self.entries.keys()

    def items(self):
        return self.entries.items()

    def sorted_items(self) -> list:
        return sorted(self.entries.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        raise TypeError("SparseVector is not hashable")

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self.entries)
        for k, c in other.entries.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return SparseVector._raw(out)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self.entries)
        for k, c in other.entries.items():
            s = out.get(k, 0) - c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return SparseVector._raw(out)

    def __neg__(self) -> "SparseVector":
        return SparseVector._raw({k: -c for k, c in self.entries.items()})

    def __rmul__(self, scalar: Rational) -> "SparseVector":
        if scalar == 0:
            return SparseVector._raw({})
        return SparseVector._raw({k: scalar * c for k, c in self.entries.items()})

    __mul__ = __rmul__

    def add_scaled(self, other: "SparseVector", scalar: Rational) -> "SparseVector":
        """self + scalar*other without an intermediate allocation."""
        if scalar == 0:
            return self
        out = dict(self.entries)
        for k, c in other.entries.items():
            s = out.get(k, 0) + scalar * c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return SparseVector._raw(out)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {format_rational(c)}" for k, c in self.sorted_items())
        return f"SparseVector({{{inner}}})"


class SubspaceBasis:
    """Canonical reduced-row-echelon basis of a subspace.

    Rows are ordered by strictly increasing pivot key, every pivot coefficient
    is 1, and each pivot key occurs in no other row.  This form is unique for
    a given subspace and key order, so any insertion sequence spanning the
    same space produces the identical basis.
    """

    __slots__ = ("rows", "pivots")

    def __init__(self, rows: Sequence[SparseVector] = (), pivots: Sequence = ()):
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: SparseVector) -> SparseVector:
        """Residual of v after eliminating all pivot coordinates."""
        for pivot, row in zip(self.pivots, self.rows):
            c = v.entries.get(pivot, 0)
            if c:
                v = v.add_scaled(row, -c)
        return v

    def contains(self, v: SparseVector) -> bool:
        return self.reduce(v).is_zero()

    def insert(self, v: SparseVector) -> tuple["SubspaceBasis", SparseVector | None]:
        """Adjoin v; returns (new basis, normalized new row or None if dependent)."""
        w = self.reduce(v)
        if w.is_zero():
            return self, None
        pivot = min(w.entries)
        w = (ONE / w.entries[pivot]) * w
        rows = []
        for row in self.rows:
            c = row.entries.get(pivot, 0)
            rows.append(row.add_scaled(w, -c) if c else row)
        pivots = list(self.pivots)
        pos = 0
        while pos < len(pivots) and pivots[pos] < pivot:
            pos += 1
        rows.insert(pos, w)
        pivots.insert(pos, pivot)
        return SubspaceBasis(rows, pivots), w

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.pivots == other.pivots and list(self.rows) == list(other.rows)

    def __repr__(self) -> str:
        return f"SubspaceBasis(rank={self.rank}, pivots={list(self.pivots)})"


def rref_basis(vectors: Iterable[SparseVector]) -> SubspaceBasis:
    """Canonical RREF basis of the span; deterministic for any input order."""
    basis = SubspaceBasis()
    for v in vectors:
        basis, _ = basis.insert(v)
    return basis


def contains(basis: SubspaceBasis, v: SparseVector) -> bool:
    """True iff v lies in the span of the basis (exact reduction)."""
    return basis.contains(v)


def kernel_basis(rows: Iterable[SparseVector], key_universe: Sequence) -> list[SparseVector]:
    """Basis of {x : row . x = 0 for every row}, over the given keys.

    Returns one kernel vector per non-pivot key, in canonical key order.
    """
    rref = rref_basis(rows)
    pivot_set = set(rref.pivots)
    pivot_row = dict(zip(rref.pivots, rref.rows))
    out = []
    for free in key_universe:
        if free in pivot_set:
            continue
        entries = {free: 1}
        for pivot, row in pivot_row.items():
            c = row.entries.get(free, 0)
            if c:
                entries[pivot] = -c
        out.append(SparseVector._raw(entries))
    return out


@lru_cache(maxsize=None)
def _vandermonde_inverse(size: int) -> tuple[tuple[Rational, ...], ...]:
    """Exact inverse of the Vandermonde matrix on nodes 0..size-1."""
    aug = [
        [make_rational(i**j) for j in range(size)]
        + [make_rational(int(i == r)) for r in range(size)]
        for i in range(size)
    ]
    for col in range(size):
        pivot_row = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


def _interp_1d(values: Sequence, degree_bound: int):
    """Coefficients (length degree_bound+1) of the polynomial through
    values[t] at nodes t = 0..len(values)-1; raises on inconsistent data."""
    size = degree_bound + 1
    vinv = _vandermonde_inverse(size)
    coeffs = []
    for i in range(size):
        acc = 0 * values[0]
        for j in range(size):
            c = vinv[i][j]
            if c:
                acc = acc + c * values[j]
        coeffs.append(acc)
    for t in range(size, len(values)):
        acc = 0 * values[0]
        power = 1
        for c in coeffs:
            acc = acc + power * c
            power *= t
        if not acc == values[t]:
            raise ValueError(
                f"vandermonde_solve: values inconsistent with degree <= {degree_bound} at node {t}"
            )
    return coeffs


def vandermonde_solve(
    evaluation_points: Sequence[LatticeVector],
    values: Sequence,
    degree_bounds: Sequence[int],
) -> dict:
    """Recover the coefficients of a vector-valued polynomial from exact
    evaluations on a full integer grid.

    The grid must be a tensor product of consecutive-integer ranges starting
    at 0, with at least degree_bounds[i]+1 nodes per variable.  Values may be
    any objects supporting + and rational *; the returned map sends each
    multidegree (within bounds) to its exact coefficient vector.
    """
    if len(evaluation_points) != len(values):
        raise ValueError("vandermonde_solve: points/values length mismatch")
    if not evaluation_points:
        raise ValueError("vandermonde_solve: no evaluation points")
    nvars = len(degree_bounds)
    for p in evaluation_points:
        if len(p) != nvars or not all(isinstance(c, int) for c in p):
            raise ValueError(f"vandermonde_solve: bad evaluation point {p!r}")
    sizes = [0] * nvars
    for p in evaluation_points:
        for i, c in enumerate(p):
            if c < 0:
                raise ValueError(f"vandermonde_solve: negative grid coordinate in {p!r}")
            sizes[i] = max(sizes[i], c + 1)
    if nvars == 0:
        return {(): values[0]}
    expected = set(itertools.product(*(range(s) for s in sizes)))
    got = set(evaluation_points)
    if len(got) != len(evaluation_points) or got != expected:
        raise ValueError("vandermonde_solve: points do not form a full 0-based grid")
    for i, (s, db) in enumerate(zip(sizes, degree_bounds)):
        if s < db + 1:
            raise ValueError(
                f"vandermonde_solve: variable {i} has {s} nodes, needs {db + 1}"
            )
    data = dict(zip(evaluation_points, values))
    for axis in range(nvars):
        newdata = {}
        rest_axes = [i for i in range(nvars) if i != axis]
        rest_ranges = [
            range(degree_bounds[i] + 1) if i < axis else range(sizes[i]) for i in rest_axes
        ]
        for rest in itertools.product(*rest_ranges):

            def key_at(t: int) -> tuple:
                full = list(rest)
                full.insert(axis, t)
                return tuple(full)

            column = [data[key_at(t)] for t in range(sizes[axis])]
            for deg, coeff in enumerate(_interp_1d(column, degree_bounds[axis])):
                newdata[key_at(deg)] = coeff
        data = newdata
    return data


def evaluate_multipoly(coefficients: Mapping, point: Sequence[Rational]):
    """Evaluate a multidegree->vector coefficient map at a rational point."""
    acc = None
    for multidegree, vec in coefficients.items():
        term = 1
        for exponent, value in zip(multidegree, point):
            if exponent:
                term *= value**exponent
        scaled = term * vec
        acc = scaled if acc is None else acc + scaled
    if acc is None:
        raise ValueError("evaluate_multipoly: empty coefficient map")
    return acc
