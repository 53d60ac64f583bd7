"""Exact linear algebra over the integers.

Everything here runs on arbitrary-precision integers: Smith normal form
with unimodular transforms, integer linear solves, kernels, and the
presentation of finitely generated abelian groups in invariant-factor
normal form.  These are the primitives behind every (co)homology and
K-group computed elsewhere in the package.

All values are immutable; functions are pure and safe to share between
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Optional, Sequence


class NoSolution(Exception):
    """The linear system has no integer solution."""


class CompositionNotZero(Exception):
    """The two maps handed to homology_at do not compose to zero."""


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix.  ``data`` is a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.data:
            if len(r) != self.cols:
                raise ValueError("column count mismatch")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if rows:
            ncols = len(rows[0])
        else:
            if cols is None:
                raise ValueError("empty matrix needs explicit column count")
            ncols = cols
        return IntMatrix(len(rows), ncols, tuple(rows))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ot = other.transpose().data
        out = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.data)
        return IntMatrix(self.rows, other.cols, out)

    def mul_vec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.data[i][j] for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.data)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * x for x in row) for row in self.data))

    def add(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)))

    def mod(self, m: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(x % m for x in row) for row in self.data))


def hstack(blocks: Sequence[IntMatrix]) -> IntMatrix:
    if not blocks:
        raise ValueError("need at least one block")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("row mismatch in hstack")
    data = tuple(tuple(x for b in blocks for x in b.data[i]) for i in range(rows))
    return IntMatrix(rows, sum(b.cols for b in blocks), data)


def vstack(blocks: Sequence[IntMatrix]) -> IntMatrix:
    if not blocks:
        raise ValueError("need at least one block")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("column mismatch in vstack")
    data = tuple(row for b in blocks for row in b.data)
    return IntMatrix(sum(b.rows for b in blocks), cols, data)


def block_matrix(grid: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
    return vstack([hstack(row) for row in grid])


def determinant(a: IntMatrix) -> int:
    """Fraction-free Bareiss determinant."""
    if a.rows != a.cols:
        raise ValueError("determinant of non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(row) for row in a.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

class _Smith:
    """Smith decomposition D = L * A * R.

    ``A = Linv * D * Rinv`` with ``Linv``, ``Rinv`` unimodular; the inverse
    transforms are only accumulated when ``full`` is set (solving and
    kernels need just L and R).  Pivoting is deterministic: the nonzero
    entry of minimal absolute value, ties broken by lowest (row, col).
    """

    def __init__(self, a: IntMatrix, full: bool = False):
        self.shape = (a.rows, a.cols)
        self.full = full
        m, n = a.rows, a.cols
        A = [list(row) for row in a.data]
        L = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        R = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        Linv = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if full else None
        Rinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if full else None

        def row_swap(i, j):
            A[i], A[j] = A[j], A[i]
            L[i], L[j] = L[j], L[i]
            if full:
                for r in Linv:
                    r[i], r[j] = r[j], r[i]

        def col_swap(i, j):
            for r in A:
                r[i], r[j] = r[j], r[i]
            for r in R:
                r[i], r[j] = r[j], r[i]
            if full:
                Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

        def row_add(i, j, c):
            # row i += c * row j
            Ai, Aj = A[i], A[j]
            for k in range(n):
                Ai[k] += c * Aj[k]
            Li, Lj = L[i], L[j]
            for k in range(m):
                Li[k] += c * Lj[k]
            if full:
                for r in Linv:
                    r[j] -= c * r[i]

        def col_add(i, j, c):
            # col i += c * col j
            for r in A:
                r[i] += c * r[j]
            for r in R:
                r[i] += c * r[j]
            if full:
                Ri, Rj = Rinv[i], Rinv[j]
                for k in range(n):
                    Rj[k] -= c * Ri[k]

        def row_negate(i):
            A[i] = [-x for x in A[i]]
            L[i] = [-x for x in L[i]]
            if full:
                for r in Linv:
                    r[i] = -r[i]

        t = 0
        while t < min(m, n):
            empty = False
            while True:
                # deterministic pivot: minimal |value|, then lowest (row, col)
                best = None
                for i in range(t, m):
                    Ai = A[i]
                    for j in range(t, n):
                        v = Ai[j]
                        if v != 0:
                            av = abs(v)
                            if best is None or av < best[0]:
                                best = (av, i, j)
                if best is None:
                    empty = True
                    break
                _, bi, bj = best
                if bi != t:
                    row_swap(t, bi)
                if bj != t:
                    col_swap(t, bj)
                if A[t][t] < 0:
                    row_negate(t)

                pivot = A[t][t]
                col_clean = True
                for i in range(t + 1, m):
                    v = A[i][t]
                    if v:
                        q = v // pivot
                        if q:
                            row_add(i, t, -q)
                        if A[i][t]:
                            col_clean = False
                if not col_clean:
                    continue  # a smaller remainder appeared; re-pivot
                row_clean = True
                for j in range(t + 1, n):
                    v = A[t][j]
                    if v:
                        q = v // pivot
                        if q:
                            col_add(j, t, -q)
                        if A[t][j]:
                            row_clean = False
                if not row_clean:
                    continue
                # pivot row/col clean: enforce divisibility over the rest
                bad = None
                for i in range(t + 1, m):
                    Ai = A[i]
                    for j in range(t + 1, n):
                        if Ai[j] % pivot:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
            if empty:
                break
            t += 1

        self.rank = sum(1 for i in range(min(m, n)) if A[i][i] != 0)
        self.diag = tuple(A[i][i] for i in range(min(m, n)))
        self._A = A
        self._L = L
        self._Linv = Linv
        self._R = R
        self._Rinv = Rinv

    def d_matrix(self) -> IntMatrix:
        m, n = self.shape
        return IntMatrix(m, n, tuple(tuple(r) for r in self._A))

    def u_matrix(self) -> IntMatrix:
        if not self.full:
            raise ValueError("inverse transforms were not tracked")
        m = self.shape[0]
        return IntMatrix(m, m, tuple(tuple(r) for r in self._Linv))

    def v_matrix(self) -> IntMatrix:
        if not self.full:
            raise ValueError("inverse transforms were not tracked")
        n = self.shape[1]
        return IntMatrix(n, n, tuple(tuple(r) for r in self._Rinv))

    def l_matrix(self) -> IntMatrix:
        m = self.shape[0]
        return IntMatrix(m, m, tuple(tuple(r) for r in self._L))

    def solve(self, b: Sequence[int]) -> tuple[int, ...]:
        """One integer solution of A x = b, free parameters set to zero."""
        m, n = self.shape
        if len(b) != m:
            raise ValueError("rhs length mismatch")
        nz_b = [(k, v) for k, v in enumerate(b) if v]
        L = self._L
        c = [sum(L[i][k] * v for k, v in nz_b) for i in range(m)]
        y = [0] * n
        for i in range(min(m, n)):
            d = self._A[i][i]
            if d == 0:
                if c[i] != 0:
                    raise NoSolution("inconsistent row in diagonalized system")
            else:
                if c[i] % d:
                    raise NoSolution("divisibility obstruction")
                y[i] = c[i] // d
        for i in range(min(m, n), m):
            if c[i] != 0:
                raise NoSolution("inconsistent row in diagonalized system")
        nz_y = [(k, v) for k, v in enumerate(y) if v]
        R = self._R
        return tuple(sum(R[i][k] * v for k, v in nz_y) for i in range(n))

    def kernel_columns(self) -> list[tuple[int, ...]]:
        """Basis of the integer kernel lattice of A."""
        m, n = self.shape
        out = []
        for j in range(n):
            if j >= min(m, n) or self._A[j][j] == 0:
                out.append(tuple(self._R[i][j] for i in range(n)))
        return out


@lru_cache(maxsize=4096)
def _smith_cached(a: IntMatrix) -> _Smith:
    return _Smith(a)


@lru_cache(maxsize=1024)
def _smith_full_cached(a: IntMatrix) -> _Smith:
    return _Smith(a, full=True)


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with A = U*D*V, U and V unimodular, D diagonal
    with non-negative entries in a divisibility chain."""
    s = _smith_full_cached(a)
    return s.u_matrix(), s.d_matrix(), s.v_matrix()


def solve_integer(a: IntMatrix, b: Sequence[int]) -> tuple[int, ...]:
    """Some integer x with A x = b.  Raises NoSolution if b is not in the
    image of A over the integers.  Deterministic: free parameters are zero
    after the Smith substitution."""
    return _smith_cached(a).solve(b)


def kernel_basis(a: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the lattice of integer solutions of A x = 0."""
    return _smith_cached(a).kernel_columns()


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FGAbelianGroup:
    """Invariant-factor normal form Z^r + Z/d1 + ... + Z/dk, d1 | d2 | ..."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError("torsion coefficients must be >= 2")
            if i and self.torsion[i] % self.torsion[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> Optional[int]:
        """Group order; None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def direct_sum(self, other: "FGAbelianGroup") -> "FGAbelianGroup":
        rels = list(self.torsion) + list(other.torsion)
        n = len(rels)
        mat = IntMatrix.from_rows([[rels[i] if i == j else 0 for j in range(n)] for i in range(n)],
                                  cols=n)
        merged = normal_form(PresentedGroup(n, mat))
        return FGAbelianGroup(self.free_rank + other.free_rank + merged.free_rank, merged.torsion)

    def presentation(self) -> "PresentedGroup":
        """Canonical presentation: one relation d_i * e_{r+i} per factor."""
        n = self.free_rank + len(self.torsion)
        rows = []
        for i, d in enumerate(self.torsion):
            row = [0] * n
            row[self.free_rank + i] = d
            rows.append(row)
        return PresentedGroup(n, IntMatrix.from_rows(rows, cols=n))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PresentedGroup:
    """Quotient of Z^ambient_rank by the row space of ``relations``."""

    ambient_rank: int
    relations: IntMatrix
    generator_labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.relations.cols != self.ambient_rank:
            raise ValueError("relation width must equal ambient rank")
        if self.generator_labels is not None and len(self.generator_labels) != self.ambient_rank:
            raise ValueError("label count mismatch")


def normal_form(g: PresentedGroup) -> FGAbelianGroup:
    """Cokernel of the relation matrix in invariant-factor form."""
    s = _smith_cached(g.relations)
    diag = s.diag
    torsion = tuple(d for d in diag if d > 1)
    rank = g.ambient_rank - s.rank
    return FGAbelianGroup(rank, torsion)


# ---------------------------------------------------------------------------
# Homology of a pair of composable maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupData:
    """A subquotient ker(d_out)/im(d_in) with explicit generators.

    ``representatives`` are cycles in the middle term, ordered to match the
    coordinates used by ``class_of``: free generators first, then torsion
    generators in invariant-factor order.  ``class_of`` maps any cycle to
    its coordinate tuple, reducing torsion coordinates into [0, d).
    """

    group: FGAbelianGroup
    representatives: tuple[tuple[int, ...], ...]
    class_of: Optional[Callable[[Sequence[int]], tuple[int, ...]]] = field(default=None, compare=False)

    def coordinates(self, cycle: Sequence[int]) -> tuple[int, ...]:
        if self.class_of is None:
            raise ValueError("no class_of map attached")
        return self.class_of(cycle)


def _subquotient(kernel_cols: list[tuple[int, ...]], n_mid: int,
                 image_cols: list[tuple[int, ...]],
                 mod_reduce: Optional[int] = None) -> GroupData:
    """ker/im where ``kernel_cols`` spans a saturated sublattice of Z^n_mid
    containing every column of ``image_cols``."""
    k = len(kernel_cols)
    kmat = IntMatrix.from_rows([[kernel_cols[j][i] for j in range(k)] for i in range(n_mid)],
                               cols=k)
    ksmith = _Smith(kmat)
    rel_rows = []
    for colv in image_cols:
        rel_rows.append(ksmith.solve(colv))  # coordinates of the column in the kernel basis
    relmat = IntMatrix.from_rows([list(r) for r in rel_rows], cols=k)
    # relations act on Z^k; columns of relmat^T span the image
    msmith = _Smith(relmat.transpose(), full=True)
    diag = msmith.diag
    torsion_pos = [i for i in range(len(diag)) if diag[i] > 1]
    free_pos = [i for i in range(k) if i >= len(diag) or diag[i] == 0]
    order = free_pos + torsion_pos
    torsion = tuple(diag[i] for i in torsion_pos)
    group = FGAbelianGroup(len(free_pos), torsion)

    u = msmith.u_matrix()         # k x k; columns are the adapted basis
    l = msmith.l_matrix()         # u^{-1}
    reps = []
    for pos in order:
        gen_coord = u.col(pos)
        vec = tuple(sum(kernel_cols[j][i] * gen_coord[j] for j in range(k)) for i in range(n_mid))
        reps.append(vec)

    moduli = [0] * len(free_pos) + list(torsion)

    def class_of(cycle: Sequence[int]) -> tuple[int, ...]:
        if len(cycle) != n_mid:
            raise ValueError("cycle has wrong length")
        try:
            y = ksmith.solve(tuple(cycle))
        except NoSolution as exc:
            raise ValueError("not a cycle") from exc
        z = [sum(l.data[i][j] * y[j] for j in range(k)) for i in range(k)]
        out = []
        for pos, m in zip(order, moduli):
            out.append(z[pos] % m if m else z[pos])
        return tuple(out)

    if mod_reduce:
        def class_of_mod(cycle: Sequence[int], _inner=class_of) -> tuple[int, ...]:
            return _inner(cycle)
        return GroupData(group, tuple(reps), class_of_mod)
    return GroupData(group, tuple(reps), class_of)


def homology_at(d_in: IntMatrix, d_out: IntMatrix) -> GroupData:
    """ker(d_out)/im(d_in) with generators and a class_of map.

    ``d_in``: C_in -> C_mid and ``d_out``: C_mid -> C_out; requires
    d_out . d_in = 0.
    """
    if d_in.rows != d_out.cols:
        raise ValueError("middle dimensions disagree")
    if not d_out.mul(d_in).is_zero():
        raise CompositionNotZero("d_out . d_in != 0")
    n_mid = d_in.rows
    kernel = kernel_basis(d_out)
    image = [d_in.col(j) for j in range(d_in.cols)]
    return _subquotient(kernel, n_mid, image)


def homology_at_mod(d_in: IntMatrix, d_out: IntMatrix, m: int) -> GroupData:
    """Homology of the complex reduced mod m, via integer lattices."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    if d_in.rows != d_out.cols:
        raise ValueError("middle dimensions disagree")
    if not d_out.mul(d_in).mod(m).is_zero():
        raise CompositionNotZero("d_out . d_in != 0 (mod m)")
    n_mid = d_in.rows
    n_out = d_out.rows
    # x with d_out x = 0 (mod m): project the kernel of [d_out | m*I]
    stacked = hstack([d_out, IntMatrix.identity(n_out).scale(m)]) if n_out else IntMatrix.zeros(0, n_mid)
    kernel = [v[:n_mid] for v in kernel_basis(stacked)] if n_out else \
             [tuple(1 if i == j else 0 for i in range(n_mid)) for j in range(n_mid)]
    image = [d_in.col(j) for j in range(d_in.cols)]
    image += [tuple(m if i == j else 0 for i in range(n_mid)) for j in range(n_mid)]
    return _subquotient(kernel, n_mid, image, mod_reduce=m)


def rank_of(a: IntMatrix) -> int:
    return _smith_cached(a).rank


def homology_rank_at(d_in: IntMatrix, d_out: IntMatrix) -> int:
    """Dimension over Q of ker(d_out)/im(d_in)."""
    if not d_out.mul(d_in).is_zero():
        raise CompositionNotZero("d_out . d_in != 0")
    return d_in.rows - rank_of(d_out) - rank_of(d_in)


def element_order(group: FGAbelianGroup, coords: Sequence[int]) -> Optional[int]:
    """Order of the element with the given normal-form coordinates;
    None when infinite."""
    r = group.free_rank
    if any(coords[i] for i in range(r)):
        return None
    n = 1
    for c, d in zip(coords[r:], group.torsion):
        c %= d
        if c:
            n = n * (d // gcd(d, c)) // gcd(n, d // gcd(d, c))
    return n


def solve_mod(a: IntMatrix, b: Sequence[int], m: int) -> tuple[int, ...]:
    """Some x with A x = b (mod m); raises NoSolution otherwise."""
    if a.rows == 0:
        return (0,) * a.cols
    aug = hstack([a, IntMatrix.identity(a.rows).scale(m)])
    x = solve_integer(aug, b)
    return tuple(v % m for v in x[:a.cols])
