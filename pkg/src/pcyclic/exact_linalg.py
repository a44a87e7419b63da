"""Exact integer and Z/p^k matrix algebra.

Everything here works on Python integers; there is no floating point
anywhere.  The central objects are :class:`IntMatrix` (an immutable integer
matrix), :func:`smith_normal_form` with unimodular transforms, saturated
kernels, and :func:`quotient_invariants`, which realises a finite quotient of
lattices in SNF-adapted coordinates.  Those coordinates are the canonical
coordinates used by every finite module elsewhere in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ContainmentViolation, InfiniteQuotient, NotPPrimary, NotUnimodular


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers.

    ``rows`` is a tuple of row tuples.  The column count is stored
    separately so that ``0 x m`` matrices keep their shape.
    """

    __slots__ = ("nrows", "ncols", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(([0] * ncols for _ in range(nrows)), ncols)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None,
                 ncols: int | None = None) -> IntMatrix:
        k = len(entries)
        nrows = k if nrows is None else nrows
        ncols = k if ncols is None else ncols
        rows = [[0] * ncols for _ in range(nrows)]
        for i, d in enumerate(entries):
            rows[i][i] = d
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls(([c[i] for c in cols] for i in range(nrows)), len(cols))

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(([r[j] for r in self.rows] for j in range(self.ncols)), self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix(([self.rows[i][j] for j in cols] for i in rows), len(cols))

    def select_columns(self, cols: Sequence[int]) -> IntMatrix:
        return self.submatrix(range(self.nrows), cols)

    # arithmetic ---------------------------------------------------------
    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows),
            other.ncols,
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)),
                         self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(([a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)),
                         self.ncols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(([-a for a in r] for r in self.rows), self.ncols)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(([k * a for a in r] for r in self.rows), self.ncols)

    def __pow__(self, k: int) -> IntMatrix:
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = IntMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def power_mod_rows(self, k: int, moduli: Sequence[int]) -> IntMatrix:
        """``self ** k`` reduced row-wise after every product.

        Valid when the matrix represents an endomorphism of the group with
        cyclic factors of orders ``moduli``.
        """
        if k < 0:
            raise ValueError("negative matrix power")
        result = IntMatrix.identity(self.nrows).mod_rows(moduli)
        base = self.mod_rows(moduli)
        while k:
            if k & 1:
                result = (result @ base).mod_rows(moduli)
            base = (base @ base).mod_rows(moduli)
            k >>= 1
        return result

    def mod(self, m: int) -> IntMatrix:
        return IntMatrix(([a % m for a in r] for r in self.rows), self.ncols)

    def mod_rows(self, moduli: Sequence[int]) -> IntMatrix:
        """Reduce row ``i`` modulo ``moduli[i]``."""
        return IntMatrix(([a % m for a in r] for r, m in zip(self.rows, moduli)), self.ncols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            a == int(i == j) for i, r in enumerate(self.rows) for j, a in enumerate(r))

    # protocol -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nrows, self.ncols, self.rows)))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"


def hstack(*blocks: IntMatrix) -> IntMatrix:
    nrows = blocks[0].nrows
    if any(b.nrows != nrows for b in blocks):
        raise ValueError("hstack row mismatch")
    ncols = sum(b.ncols for b in blocks)
    return IntMatrix((sum((b.rows[i] for b in blocks), ()) for i in range(nrows)), ncols)


def vstack(*blocks: IntMatrix) -> IntMatrix:
    ncols = blocks[0].ncols
    if any(b.ncols != ncols for b in blocks):
        raise ValueError("vstack column mismatch")
    return IntMatrix((r for b in blocks for r in b.rows), ncols)


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    ncols = sum(b.ncols for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for r in b.rows:
            rows.append([0] * offset + list(r) + [0] * (ncols - offset - b.ncols))
        offset += b.ncols
    return IntMatrix(rows, ncols)


def matrix_polynomial(coeffs: Sequence[int], A: IntMatrix) -> IntMatrix:
    """Evaluate ``sum(coeffs[k] * A**k)`` by Horner's rule."""
    n = A.nrows
    result = IntMatrix.zeros(n, n)
    ident = IntMatrix.identity(n)
    for c in reversed(coeffs):
        result = result @ A + ident.scale(c)
    return result


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    ``U_inv`` and ``V_inv`` are carried along because quotient coordinates
    need the inverse transforms and recomputing them is wasteful.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[k, k] for k in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


class _Workspace:
    """Mutable state for SNF: the matrix and the four transforms."""

    def __init__(self, A: IntMatrix):
        self.m, self.n = A.shape
        self.a = A.tolist()
        self.u = IntMatrix.identity(self.m).tolist()
        self.ui = IntMatrix.identity(self.m).tolist()
        self.v = IntMatrix.identity(self.n).tolist()
        self.vi = IntMatrix.identity(self.n).tolist()

    # row_i += c * row_j
    def row_add(self, i, j, c):
        if c == 0:
            return
        for mat in (self.a, self.u):
            ri, rj = mat[i], mat[j]
            for k in range(len(ri)):
                ri[k] += c * rj[k]
        for r in self.ui:
            r[j] -= c * r[i]

    def row_swap(self, i, j):
        if i == j:
            return
        for mat in (self.a, self.u):
            mat[i], mat[j] = mat[j], mat[i]
        for r in self.ui:
            r[i], r[j] = r[j], r[i]

    def row_negate(self, i):
        for mat in (self.a, self.u):
            mat[i] = [-x for x in mat[i]]
        for r in self.ui:
            r[i] = -r[i]

    # col_j += c * col_i
    def col_add(self, j, i, c):
        if c == 0:
            return
        for mat in (self.a, self.v):
            for r in mat:
                r[j] += c * r[i]
        ri, rj = self.vi[i], self.vi[j]
        for k in range(len(ri)):
            ri[k] -= c * rj[k]

    def col_swap(self, i, j):
        if i == j:
            return
        for mat in (self.a, self.v):
            for r in mat:
                r[i], r[j] = r[j], r[i]
        self.vi[i], self.vi[j] = self.vi[j], self.vi[i]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: the nonzero entry of smallest absolute value in the active
    submatrix, ties broken by lowest (row, col).  Output is therefore a
    deterministic function of ``A``.
    """
    w = _Workspace(A)
    a = w.a
    m, n = w.m, w.n
    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (pivot is None or abs(x) < pivot[0]):
                    pivot = (abs(x), i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        w.row_swap(t, pi)
        w.col_swap(t, pj)
        while True:
            piv = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    w.row_add(i, t, -_nearest_quotient(a[i][t], piv))
            for j in range(t + 1, n):
                if a[t][j]:
                    w.col_add(j, t, -_nearest_quotient(a[t][j], piv))
            best = None
            for i in range(t + 1, m):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), "r", i)
            for j in range(t + 1, n):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), "c", j)
            if best is not None:
                if best[1] == "r":
                    w.row_swap(t, best[2])
                else:
                    w.col_swap(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                if any(a[i][j] % piv for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            w.row_add(t, bad, 1)
        if a[t][t] < 0:
            w.row_negate(t)
        t += 1
    return SmithDecomposition(
        U=IntMatrix(w.u, m), D=IntMatrix(a, n), V=IntMatrix(w.v, n),
        U_inv=IntMatrix(w.ui, m), V_inv=IntMatrix(w.vi, n),
    )


def inverse_unimodular(U: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix; raises NotUnimodular otherwise."""
    if U.nrows != U.ncols:
        raise NotUnimodular("matrix is not square")
    snf = smith_normal_form(U)
    if any(d != 1 for d in snf.diagonal):
        raise NotUnimodular("determinant is not +-1")
    # snf.U @ U @ snf.V = I, hence U^{-1} = snf.V @ snf.U
    return snf.V @ snf.U


def saturated_kernel(A: IntMatrix) -> IntMatrix:
    """Basis (as columns) of ``{x in Z^n : A x = 0}``.

    The basis is read off the unimodular right transform of the SNF, so the
    kernel lattice is saturated: Z^n modulo it is torsion-free.
    """
    snf = smith_normal_form(A)
    r = snf.rank
    return snf.V.select_columns(range(r, A.ncols))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of ``gens``."""
    snf = smith_normal_form(gens)
    d = snf.diagonal
    r = snf.rank
    cols = [tuple(x * d[k] for x in snf.U_inv.column(k)) for k in range(r)]
    return IntMatrix.from_columns(cols, gens.nrows)


class LatticeSolver:
    """Expresses vectors in the coordinates of a full-column-rank basis."""

    def __init__(self, basis: IntMatrix):
        self.basis = basis
        self._snf = smith_normal_form(basis)
        if self._snf.rank != basis.ncols:
            raise ValueError("basis columns are linearly dependent")
        self._d = self._snf.diagonal

    def solve(self, vec: Sequence[int]) -> tuple[int, ...]:
        w = self._snf.U.apply(vec)
        m = self.basis.ncols
        if any(w[k] for k in range(m, len(w))):
            raise ContainmentViolation("vector is not in the rational span of the lattice")
        z = []
        for k in range(m):
            q, r = divmod(w[k], self._d[k])
            if r:
                raise ContainmentViolation("vector is in the span but not in the lattice")
            z.append(q)
        return self._snf.V.apply(z)

    def solve_matrix(self, M: IntMatrix) -> IntMatrix:
        return IntMatrix.from_columns([self.solve(c) for c in M.columns()], self.basis.ncols)


# ---------------------------------------------------------------------------
# finite abelian p-groups and quotients
# ---------------------------------------------------------------------------

def p_valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class AbelianPGroup:
    """The group ``sum_j Z/p^{e_j}`` with ``e_1 >= e_2 >= ... >= 1``."""

    p: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        e = tuple(self.exponents)
        object.__setattr__(self, "exponents", e)
        if any(x < 1 for x in e) or list(e) != sorted(e, reverse=True):
            raise ValueError(f"non-canonical exponents {e}")

    @classmethod
    def from_exponents(cls, p: int, exponents: Iterable[int]) -> AbelianPGroup:
        return cls(p, tuple(sorted((e for e in exponents if e), reverse=True)))

    @property
    def rank(self) -> int:
        """rk_p: the number of cyclic factors."""
        return len(self.exponents)

    @property
    def v_p(self) -> int:
        """log_p of the order."""
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p ** self.v_p

    @property
    def exponent(self) -> int:
        return self.p ** self.exponents[0] if self.exponents else 1

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** e for e in self.exponents)

    def is_trivial(self) -> bool:
        return not self.exponents

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(m) for m in self.moduli))

    def __str__(self) -> str:
        if not self.exponents:
            return "0"
        return " + ".join(f"Z/{self.p}^{e}" if e > 1 else f"Z/{self.p}" for e in self.exponents)


@dataclass(frozen=True)
class FiniteQuotient:
    """A finite p-group ``amb / sub`` in SNF-adapted coordinates.

    ``basis`` is a basis of the ambient lattice (columns, inside Z^N).
    ``to_coords`` maps ambient-lattice coordinates to quotient coordinates
    (one row per cyclic factor, nonincreasing exponents).  ``lifts`` holds
    ambient vectors in Z^N representing the canonical generators.
    """

    group: AbelianPGroup
    basis: IntMatrix
    to_coords: IntMatrix
    lifts: IntMatrix
    solver: LatticeSolver

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.group.moduli

    def coords_from_amb(self, y: Sequence[int]) -> tuple[int, ...]:
        c = self.to_coords.apply(y)
        return tuple(x % m for x, m in zip(c, self.moduli))

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Quotient coordinates of an ambient vector given in Z^N."""
        return self.coords_from_amb(self.solver.solve(vec))

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.lifts.apply(coords)


def quotient_invariants(sub: IntMatrix, amb: IntMatrix, p: int) -> FiniteQuotient:
    """Abelian invariants and coordinates of ``amb / sub``.

    ``amb`` must have linearly independent columns; ``sub`` may be any
    generating set.  Raises ContainmentViolation, InfiniteQuotient or
    NotPPrimary as appropriate.
    """
    if sub.nrows != amb.nrows:
        raise ValueError("sub and amb live in different ambient spaces")
    solver = LatticeSolver(amb)
    m = amb.ncols
    X = solver.solve_matrix(sub) if sub.ncols else IntMatrix.zeros(m, 0)
    snf = smith_normal_form(X)
    d = list(snf.diagonal) + [0] * (m - min(X.shape))
    if any(x == 0 for x in d[:m]):
        raise InfiniteQuotient("quotient has positive rank")
    idx = []
    exps = []
    for k in range(m):
        if d[k] == 1:
            continue
        v = p_valuation(d[k], p)
        if p ** v != d[k]:
            raise NotPPrimary(f"invariant factor {d[k]} is not a power of {p}")
        idx.append(k)
        exps.append(v)
    # SNF lists invariants increasingly; canonical order is nonincreasing
    idx.reverse()
    exps.reverse()
    to_coords = snf.U.submatrix(idx, range(m)) if idx else IntMatrix.zeros(0, m)
    gens_amb = snf.U_inv.select_columns(idx)
    lifts = amb @ gens_amb if idx else IntMatrix.zeros(amb.nrows, 0)
    return FiniteQuotient(AbelianPGroup(p, tuple(exps)), amb, to_coords, lifts, solver)


# ---------------------------------------------------------------------------
# linear algebra modulo prime powers
# ---------------------------------------------------------------------------

def rank_mod(A: IntMatrix, p: int) -> int:
    """Rank over F_p."""
    rows = [[x % p for x in r] for r in A.rows]
    rank = 0
    ncols = A.ncols
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _local_column_transform(L: list[list[int]], nvars: int, p: int, K: int):
    """Column-reduce ``L`` over Z/p^K; return (Q, valuations of pivots).

    Finds an invertible (mod p^K) ``Q`` such that, up to invertible row
    operations, ``L @ Q`` is diagonal with pivots ``p^{f_k}``; columns
    without a pivot get valuation K.  The row operations are not recorded
    since only the solution set of ``L y = 0 mod p^K`` is needed.
    """
    mod = p ** K
    a = [[x % mod for x in r] for r in L]
    q = [[int(i == j) for j in range(nvars)] for i in range(nvars)]
    m = len(a)
    vals = [K] * nvars
    used_rows = [False] * m
    col = 0
    while col < nvars:
        best = None
        for i in range(m):
            if used_rows[i]:
                continue
            row = a[i]
            for j in range(col, nvars):
                x = row[j]
                if x:
                    v = p_valuation(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        if pj != col:
            for r in a:
                r[col], r[pj] = r[pj], r[col]
            for r in q:
                r[col], r[pj] = r[pj], r[col]
        piv = a[pi][col]
        unit = piv // p ** v
        inv = pow(unit, -1, mod)
        # normalise pivot column so the pivot becomes p^v
        for r in a:
            r[col] = r[col] * inv % mod
        for r in q:
            r[col] = r[col] * inv % mod
        for j in range(col + 1, nvars):
            x = a[pi][j]
            if x:
                f = x // p ** v  # p^v divides every entry of the pivot row
                for r in a:
                    r[j] = (r[j] - f * r[col]) % mod
                for r in q:
                    r[j] = (r[j] - f * r[col]) % mod
        # row pi is now p^v e_col; row operations clear the rest of the column
        for i in range(m):
            if i != pi and not used_rows[i]:
                a[i][col] = 0
        used_rows[pi] = True
        vals[col] = v
        col += 1
    return q, vals


def modular_lattice_basis(gens: Sequence[Sequence[int]], dim: int, p: int, K: int) -> IntMatrix:
    """Triangular basis of ``span(gens) + p^K Z^dim``.

    Entries are kept reduced modulo p^K, so there is no coefficient growth.
    """
    mod = p ** K
    pool = [[x % mod for x in g] for g in gens]
    pool = [g for g in pool if any(g)]
    basis = []
    for i in range(dim):
        best = None
        for idx, g in enumerate(pool):
            if g[i]:
                v = p_valuation(g[i], p)
                if best is None or v < best[0]:
                    best = (v, idx)
        if best is None or best[0] >= K:
            h = [0] * dim
            h[i] = mod
            basis.append(h)
            continue
        v, idx = best
        h = pool.pop(idx)
        inv = pow(h[i] // p ** v, -1, mod)
        h = [x * inv % mod for x in h]
        h[i] = p ** v
        new_pool = []
        for g in pool:
            if g[i]:
                f = g[i] // p ** v
                g = [(x - f * y) % mod for x, y in zip(g, h)]
            if any(g):
                new_pool.append(g)
        # p^K e_i is replaced by h; keep the difference for later rows
        w = [(x * p ** (K - v)) % mod for x in h]
        w[i] = 0
        if any(w):
            new_pool.append(w)
        pool = new_pool
        basis.append(h)
    return IntMatrix.from_columns(basis, dim)


def congruence_lattice(L: IntMatrix, row_exponents: Sequence[int], p: int) -> IntMatrix:
    """Basis of ``{y in Z^V : (L y)_k = 0 mod p^{row_exponents[k]}}``.

    Rows with exponent 0 impose no condition.  The result always contains
    ``p^K Z^V`` where K is the largest row exponent.
    """
    nvars = L.ncols
    K = max(row_exponents, default=0)
    if K == 0:
        return IntMatrix.identity(nvars)
    scaled = [[x * p ** (K - e) for x in r] for r, e in zip(L.rows, row_exponents)]
    q, vals = _local_column_transform(scaled, nvars, p, K)
    gens = []
    for k in range(nvars):
        g = p ** (K - vals[k]) if vals[k] < K else 1
        gens.append([q[i][k] * g for i in range(nvars)])
    return modular_lattice_basis(gens, nvars, p, K)


def congruence_kernel(L: IntMatrix, row_exponents: Sequence[int],
                      var_exponents: Sequence[int], p: int) -> FiniteQuotient:
    """Solutions of ``L y = 0`` (row-wise mod p^e) modulo ``y = 0 mod p^{var_exponents}``.

    The trivial solutions must satisfy the congruences; this is the case
    whenever ``L`` describes a well-defined map of finite groups.
    """
    K = congruence_lattice(L, row_exponents, p)
    T = IntMatrix.diagonal([p ** e for e in var_exponents])
    return quotient_invariants(T, K, p)


def finite_homology(d_in: IntMatrix, d_out: IntMatrix, mid_exponents: Sequence[int],
                    out_exponents: Sequence[int], p: int) -> FiniteQuotient:
    """Homology at the middle term of ``A --d_in--> B --d_out--> C``.

    Each term is a direct sum of cyclic groups ``Z/p^e`` given by its
    exponent list; the maps are integer matrices on representatives.
    """
    cycles = congruence_lattice(d_out, out_exponents, p)
    boundaries = hstack(d_in, IntMatrix.diagonal([p ** e for e in mid_exponents]))
    return quotient_invariants(boundaries, cycles, p)


def inverse_mod(A: IntMatrix, p: int) -> IntMatrix:
    """Inverse of a square matrix over F_p; raises NotUnimodular if singular."""
    n = A.nrows
    rows = [[x % p for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(A.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            raise NotUnimodular(f"matrix is singular modulo {p}")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = pow(rows[c][c], -1, p)
        rows[c] = [x * inv % p for x in rows[c]]
        for i in range(n):
            if i != c and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[c])]
    return IntMatrix([r[n:] for r in rows], n)
