"""Exact dense linear algebra over the rationals and over integer lattices.

No floating point anywhere: matrix entries are ``int`` or
``fractions.Fraction`` and every routine is deterministic, so repeated
runs produce identical results.

Conventions
-----------
* Hermite form is row style.  ``hnf(M)`` returns ``(H, U)`` with ``U``
  unimodular, ``U * M == H``, ``H`` in row echelon form with positive
  pivots and every entry above a pivot reduced into ``[0, pivot)``.
* ``snf(M)`` returns a :class:`SmithDecomposition` with
  ``U * M * V == D``, nonnegative diagonal, each entry dividing the next.
* ``kernel_lattice(M)`` returns a basis (matrix rows, in Hermite form)
  of the saturated lattice of integer vectors ``x`` with ``M x = 0``.
  Saturated means every integer vector of the rational kernel is an
  integer combination of the basis.
* Vectors are plain tuples.  ``M.apply(v)`` treats ``v`` as a column,
  ``M.apply_left(v)`` as a row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import InternalError, PreconditionError
from .polynomials import Poly

Scalar = Union[int, Fraction]
Vector = Tuple[Scalar, ...]


def _norm_entry(x: Scalar):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


class Matrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, rows: Iterable[Iterable[Scalar]], ncols: Optional[int] = None):
        ent = tuple(tuple(_norm_entry(x) for x in row) for row in rows)
        if ent:
            width = len(ent[0])
            if any(len(r) != width for r in ent):
                raise PreconditionError("ragged rows")
            if ncols is not None and ncols != width:
                raise PreconditionError(f"expected {ncols} columns, got {width}")
        else:
            width = 0 if ncols is None else ncols
        self.entries: tuple = ent
        self.nrows: int = len(ent)
        self.ncols: int = width

    # construction helpers

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @staticmethod
    def zero(nrows: int, ncols: int) -> "Matrix":
        return Matrix([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @staticmethod
    def diagonal(diag: Sequence[Scalar]) -> "Matrix":
        n = len(diag)
        return Matrix([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @staticmethod
    def from_cols(cols: Sequence[Sequence[Scalar]], nrows: Optional[int] = None) -> "Matrix":
        if not cols:
            return Matrix([[] for _ in range(nrows or 0)], ncols=0) if nrows else Matrix([], ncols=0)
        height = len(cols[0])
        return Matrix([[c[i] for c in cols] for i in range(height)], ncols=len(cols))

    # basic access

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_lists(self):
        return [list(r) for r in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.entries[i][j] for j in cols] for i in rows], ncols=len(cols))

    # predicates

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self.entries for x in r)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_identity(self) -> bool:
        return self.is_square() and all(
            x == (1 if i == j else 0) for i, r in enumerate(self.entries) for j, x in enumerate(r)
        )

    # arithmetic

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.entries))

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.entries]!r})"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            ncols=self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            ncols=self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.entries], ncols=self.ncols)

    def _same_shape(self, other: "Matrix"):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = [other.col(j) for j in range(other.ncols)]
        return Matrix(
            [[_dot(r, c) for c in cols] for r in self.entries],
            ncols=other.ncols,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, s: Scalar) -> "Matrix":
        return Matrix([[s * x for x in r] for r in self.entries], ncols=self.ncols)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise PreconditionError("matrix power needs a square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def apply(self, v: Sequence[Scalar]) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_norm_entry(_dot(r, v)) for r in self.entries)

    def apply_left(self, v: Sequence[Scalar]) -> Vector:
        """Row vector times matrix."""
        if len(v) != self.nrows:
            raise ValueError("vector length mismatch")
        return tuple(_norm_entry(_dot(v, self.col(j))) for j in range(self.ncols))

    def transpose(self) -> "Matrix":
        return Matrix([self.col(j) for j in range(self.ncols)], ncols=self.nrows)

    def trace(self) -> Scalar:
        if not self.is_square():
            raise PreconditionError("trace needs a square matrix")
        return _norm_entry(sum(self.entries[i][i] for i in range(self.nrows)) if self.nrows else 0)

    def det(self) -> Scalar:
        if not self.is_square():
            raise PreconditionError("determinant needs a square matrix")
        n = self.nrows
        if n == 0:
            return 1
        rows = [[Fraction(x) for x in r] for r in self.entries]
        sign = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                sign = -sign
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    f = rows[i][c] / rows[c][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        d = Fraction(sign)
        for i in range(n):
            d *= rows[i][i]
        return _norm_entry(d)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise PreconditionError("inverse needs a square matrix")
        n = self.nrows
        aug = [[Fraction(x) for x in r] + [Fraction(1 if i == j else 0) for j in range(n)]
               for i, r in enumerate(self.entries)]
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
            if piv is None:
                raise PreconditionError("matrix is singular")
            aug[r], aug[piv] = aug[piv], aug[r]
            f = aug[r][c]
            aug[r] = [x / f for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][c] != 0:
                    g = aug[i][c]
                    aug[i] = [a - g * b for a, b in zip(aug[i], aug[r])]
            r += 1
        return Matrix([row[n:] for row in aug], ncols=n)

    def rank(self) -> int:
        return len(_rref([list(r) for r in self.entries], self.ncols)[1])


def _dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Scalar:
    return sum(x * y for x, y in zip(a, b))


def hstack(a: Matrix, b: Matrix) -> Matrix:
    if a.nrows != b.nrows:
        raise ValueError("row count mismatch")
    return Matrix([ra + rb for ra, rb in zip(a.entries, b.entries)], ncols=a.ncols + b.ncols)


def vstack(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.ncols:
        raise ValueError("column count mismatch")
    return Matrix(list(a.entries) + list(b.entries), ncols=a.ncols)


def block_diag(*mats: Matrix) -> Matrix:
    total_r = sum(m.nrows for m in mats)
    total_c = sum(m.ncols for m in mats)
    rows = [[0] * total_c for _ in range(total_r)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.nrows):
            for j in range(m.ncols):
                rows[r0 + i][c0 + j] = m.entries[i][j]
        r0 += m.nrows
        c0 += m.ncols
    return Matrix(rows, ncols=total_c)


def vec(m: Matrix) -> Vector:
    """Rows of ``m`` concatenated into one tuple."""
    return tuple(itertools.chain.from_iterable(m.entries))


# ---------------------------------------------------------------------------
# integer lattice routines


def _xgcd(a: int, b: int):
    """Returns ``(g, x, y)`` with ``g = ax + by`` and ``g = gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _require_integral(m: Matrix, what: str):
    if not m.is_integral():
        raise PreconditionError(f"{what} needs an integer matrix")


def hnf(m: Matrix) -> Tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U * m == H``.  ``H``
    is in row echelon form with positive pivots, entries above each
    pivot reduced into ``[0, pivot)``, zero rows at the bottom.  ``H``
    depends only on the row lattice of ``m``.
    """
    _require_integral(m, "hnf")
    nr, nc = m.nrows, m.ncols
    a = m.to_lists()
    u = Matrix.identity(nr).to_lists()
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if a[i][c] != 0 and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                piv = i
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, nr):
            if a[i][c] == 0:
                continue
            g, s, t = _xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            a[r], a[i] = (
                [s * x + t * y for x, y in zip(a[r], a[i])],
                [-q * x + p * y for x, y in zip(a[r], a[i])],
            )
            u[r], u[i] = (
                [s * x + t * y for x, y in zip(u[r], u[i])],
                [-q * x + p * y for x, y in zip(u[r], u[i])],
            )
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return Matrix(a, ncols=nc), Matrix(u, ncols=nr)


def row_hermite_basis(m: Matrix) -> Matrix:
    """Hermite basis of the lattice spanned by the rows (zero rows dropped)."""
    h, _ = hnf(m)
    rows = [r for r in h.entries if any(x != 0 for x in r)]
    return Matrix(rows, ncols=m.ncols)


@dataclass(frozen=True)
class SmithDecomposition:
    """Witnessed Smith normal form: ``U * M * V == D``."""

    d: Matrix
    u: Matrix
    v: Matrix

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        k = min(self.d.nrows, self.d.ncols)
        return tuple(self.d[i, i] for i in range(k) if self.d[i, i] != 0)


def snf(m: Matrix) -> SmithDecomposition:
    """Smith normal form with unimodular witnesses.

    Diagonal entries are nonnegative and each divides the next.
    """
    _require_integral(m, "snf")
    nr, nc = m.nrows, m.ncols
    a = m.to_lists()
    u = Matrix.identity(nr).to_lists()
    v = Matrix.identity(nc).to_lists()

    def row_op(i, j, g, s, t, p, q):
        a[i], a[j] = (
            [s * x + t * y for x, y in zip(a[i], a[j])],
            [-q * x + p * y for x, y in zip(a[i], a[j])],
        )
        u[i], u[j] = (
            [s * x + t * y for x, y in zip(u[i], u[j])],
            [-q * x + p * y for x, y in zip(u[i], u[j])],
        )

    def col_op(i, j, g, s, t, p, q):
        for row in a:
            row[i], row[j] = s * row[i] + t * row[j], -q * row[i] + p * row[j]
        for row in v:
            row[i], row[j] = s * row[i] + t * row[j], -q * row[i] + p * row[j]

    t_idx = 0
    limit = min(nr, nc)
    while t_idx < limit:
        piv = None
        for i in range(t_idx, nr):
            for j in range(t_idx, nc):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t_idx:
            a[t_idx], a[i0] = a[i0], a[t_idx]
            u[t_idx], u[i0] = u[i0], u[t_idx]
        if j0 != t_idx:
            for row in a:
                row[t_idx], row[j0] = row[j0], row[t_idx]
            for row in v:
                row[t_idx], row[j0] = row[j0], row[t_idx]
        while True:
            # plain subtraction when the pivot divides; the gcd rotation
            # otherwise (it strictly shrinks the pivot, so this terminates)
            for i in range(t_idx + 1, nr):
                x = a[i][t_idx]
                if x:
                    pv = a[t_idx][t_idx]
                    if x % pv == 0:
                        q = x // pv
                        a[i] = [y - q * z for y, z in zip(a[i], a[t_idx])]
                        u[i] = [y - q * z for y, z in zip(u[i], u[t_idx])]
                    else:
                        g, s, t = _xgcd(pv, x)
                        row_op(t_idx, i, g, s, t, pv // g, x // g)
            for j in range(t_idx + 1, nc):
                x = a[t_idx][j]
                if x:
                    pv = a[t_idx][t_idx]
                    if x % pv == 0:
                        q = x // pv
                        for row in a:
                            row[j] -= q * row[t_idx]
                        for row in v:
                            row[j] -= q * row[t_idx]
                    else:
                        g, s, t = _xgcd(pv, x)
                        col_op(t_idx, j, g, s, t, pv // g, x // g)
            if any(a[i][t_idx] for i in range(t_idx + 1, nr)):
                continue
            if any(a[t_idx][j] for j in range(t_idx + 1, nc)):
                continue
            bad = None
            p0 = a[t_idx][t_idx]
            for i in range(t_idx + 1, nr):
                for j in range(t_idx + 1, nc):
                    if a[i][j] % p0 != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t_idx] = [x + y for x, y in zip(a[t_idx], a[bad])]
            u[t_idx] = [x + y for x, y in zip(u[t_idx], u[bad])]
        if a[t_idx][t_idx] < 0:
            a[t_idx] = [-x for x in a[t_idx]]
            u[t_idx] = [-x for x in u[t_idx]]
        t_idx += 1
    d = Matrix(a, ncols=nc)
    for i in range(limit - 1):
        di, dj = d[i, i], d[i + 1, i + 1]
        if di == 0 and dj != 0:
            raise InternalError("smith diagonal out of order")
        if di != 0 and dj % di != 0:
            raise InternalError("smith divisibility chain broken")
    return SmithDecomposition(d, Matrix(u, ncols=nr), Matrix(v, ncols=nc))


def kernel_lattice(m: Matrix) -> Matrix:
    """Hermite basis (rows) of the saturated integer kernel ``{x : m x = 0}``."""
    _require_integral(m, "kernel_lattice")
    h, u = hnf(m.transpose())
    rows = [u.entries[i] for i in range(h.nrows) if all(x == 0 for x in h.entries[i])]
    if not rows:
        return Matrix([], ncols=m.ncols)
    return row_hermite_basis(Matrix(rows, ncols=m.ncols))


def lattice_coordinates(basis: Matrix, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Integer coordinates of ``v`` in the row lattice of ``basis``, or None.

    ``basis`` rows need not be in Hermite form but must be independent.
    """
    _require_integral(basis, "lattice_coordinates")
    if len(v) != basis.ncols:
        raise ValueError("vector length mismatch")
    if any(not isinstance(x, int) for x in v):
        raise PreconditionError("lattice_coordinates needs an integer vector")
    h, u = hnf(basis)
    rem = list(v)
    y = [0] * h.nrows
    for i in range(h.nrows):
        p = next((j for j, x in enumerate(h.entries[i]) if x != 0), None)
        if p is None:
            break
        q, r = divmod(rem[p], h.entries[i][p])
        if r != 0:
            return None
        y[i] = q
        if q:
            rem = [x - q * hx for x, hx in zip(rem, h.entries[i])]
    if any(rem):
        return None
    return tuple(_dot(y, u.col(j)) for j in range(u.ncols))


def in_row_lattice(basis: Matrix, v: Sequence[int]) -> bool:
    return lattice_coordinates(basis, v) is not None


# ---------------------------------------------------------------------------
# rational elimination


def _rref(rows, ncols):
    """In-place reduced row echelon form; returns ``(rows, pivot_columns)``."""
    rows = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = rows[r][c]
        rows[r] = [x / f for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                g = rows[i][c]
                rows[i] = [x - g * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    rows, pivots = _rref(m.to_lists(), m.ncols)
    return Matrix(rows, ncols=m.ncols), tuple(pivots)


def rational_kernel(m: Matrix) -> Matrix:
    """Basis (rows) of the kernel ``{x : m x = 0}`` over Q, in a canonical form.

    One basis vector per free column, carrying entry 1 there.
    """
    rows, pivots = _rref(m.to_lists(), m.ncols)
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    basis = []
    for f in free:
        vecr = [Fraction(0)] * m.ncols
        vecr[f] = Fraction(1)
        for i, p in enumerate(pivots):
            vecr[p] = -rows[i][f]
        basis.append(vecr)
    return Matrix(basis, ncols=m.ncols)


def solve(a: Matrix, b: Sequence[Scalar]) -> Optional[Vector]:
    """One exact solution of ``a x = b`` (free variables set to 0), or None."""
    if len(b) != a.nrows:
        raise ValueError("right hand side length mismatch")
    aug = [list(r) + [b[i]] for i, r in enumerate(a.entries)]
    rows, pivots = _rref(aug, a.ncols + 1)
    if a.ncols in pivots:
        return None
    x = [Fraction(0)] * a.ncols
    for i, p in enumerate(pivots):
        x[p] = rows[i][a.ncols]
    return tuple(_norm_entry(t) for t in x)


# ---------------------------------------------------------------------------
# characteristic structure


def char_poly(a: Matrix) -> Poly:
    """Characteristic polynomial ``det(xI - a)``, monic, by the trace recursion."""
    if not a.is_square():
        raise PreconditionError("char_poly needs a square matrix")
    n = a.nrows
    if n == 0:
        return Poly.of(1)
    ident = Matrix.identity(n)
    mk = a
    desc = [Fraction(1), -Fraction(mk.trace())]
    for k in range(2, n + 1):
        mk = a * (mk + Matrix.identity(n).scale(desc[-1]))
        desc.append(-Fraction(mk.trace()) / k)
    return Poly.of(*reversed(desc))


def min_poly(a: Matrix) -> Poly:
    """Minimal polynomial of ``a``, monic.  Divides :func:`char_poly`."""
    if not a.is_square():
        raise PreconditionError("min_poly needs a square matrix")
    n = a.nrows
    if n == 0:
        return Poly.of(1)
    width = n * n
    reduced = []  # rows: (coeffs over powers, payload), echelon over payload
    power = Matrix.identity(n)
    for k in range(n + 1):
        payload = [Fraction(x) for x in vec(power)]
        tag = [Fraction(0)] * (n + 1)
        tag[k] = Fraction(1)
        for lead, prow, ptag in reduced:
            c = payload[lead]
            if c != 0:
                payload = [x - c * y for x, y in zip(payload, prow)]
                tag = [x - c * y for x, y in zip(tag, ptag)]
        lead = next((j for j, x in enumerate(payload) if x != 0), None)
        if lead is None:
            return Poly.of(*tag[: k + 1]).monic()
        f = payload[lead]
        payload = [x / f for x in payload]
        tag = [x / f for x in tag]
        reduced.append((lead, payload, tag))
        power = power * a
    raise InternalError("no annihilating polynomial of degree <= n found")


def poly_eval(p: Poly, a: Matrix) -> Matrix:
    if not a.is_square():
        raise PreconditionError("poly_eval needs a square matrix")
    n = a.nrows
    acc = Matrix.zero(n, n)
    for c in reversed(p.coeffs):
        acc = acc * a + Matrix.identity(n).scale(c)
    return acc


@dataclass(frozen=True)
class JordanPair:
    """Multiplicative Jordan decomposition ``a == semisimple * unipotent``."""

    semisimple: Matrix
    unipotent: Matrix


def jordan_chevalley(a: Matrix) -> JordanPair:
    """Multiplicative Jordan decomposition over Q.

    Returns ``JordanPair(s, u)`` with ``s * u == u * s == a``, the
    minimal polynomial of ``s`` squarefree, and ``u - I`` nilpotent.
    Both factors are polynomial expressions in ``a``, found by Newton
    iteration against the squarefree part of the minimal polynomial.
    """
    if not a.is_square():
        raise PreconditionError("jordan_chevalley needs a square matrix")
    if a.det() == 0:
        raise PreconditionError("jordan_chevalley needs an invertible matrix")
    p = min_poly(a).squarefree_part()
    s = a
    for _ in range(a.nrows + 2):
        ps = poly_eval(p, s)
        if ps.is_zero():
            break
        s = s - ps * poly_eval(p.derivative(), s).inverse()
    else:
        raise InternalError("newton iteration for the semisimple factor did not converge")
    u = s.inverse() * a
    return JordanPair(s, u)


def _totient(m: int) -> int:
    n, phi, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            phi -= phi // p
        p += 1
    if n > 1:
        phi -= phi // n
    return phi


def _prime_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def finite_order(a: Matrix) -> Optional[int]:
    """Multiplicative order of ``a`` in GL(n, Q), or None if infinite.

    Rests on two facts: a finite order rational matrix has squarefree
    minimal polynomial, and its order is a number m with phi(m) <= n
    for every primitive root of unity among the eigenvalues, so the
    order divides lcm{m : phi(m) <= n}.
    """
    if not a.is_square():
        raise PreconditionError("finite_order needs a square matrix")
    n = a.nrows
    if n == 0:
        return 1
    if a.det() == 0:
        return None
    if not min_poly(a).is_squarefree():
        return None
    cap = 2 * n * n + 2  # phi(m) >= sqrt(m/2), so phi(m) <= n forces m <= 2 n^2
    big = 1
    for m in range(1, cap + 1):
        if _totient(m) <= n:
            big = big * m // gcd(big, m)
    if not (a ** big).is_identity():
        return None
    order = big
    for p in _prime_factors(big):
        while order % p == 0 and (a ** (order // p)).is_identity():
            order //= p
    return order


def nilpotency_index(a: Matrix) -> Optional[int]:
    """Smallest k >= 1 with ``a**k == 0``, or None if not nilpotent."""
    if not a.is_square():
        raise PreconditionError("nilpotency_index needs a square matrix")
    if a.nrows == 0:
        return 1
    power = a
    for k in range(1, a.nrows + 1):
        if power.is_zero():
            return k
        power = power * a
    return None


def nilpotent_log(u: Matrix) -> Matrix:
    """Logarithm of a unipotent matrix, a finite exact series."""
    if not u.is_square():
        raise PreconditionError("nilpotent_log needs a square matrix")
    n = u.nrows
    nil = u - Matrix.identity(n)
    if nilpotency_index(nil) is None:
        raise PreconditionError("matrix is not unipotent")
    acc = Matrix.zero(n, n)
    power = Matrix.identity(n)
    for k in range(1, n + 1):
        power = power * nil
        if power.is_zero():
            break
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
    return acc


def nilpotent_exp(m: Matrix) -> Matrix:
    """Exponential of a nilpotent matrix, a finite exact series."""
    if not m.is_square():
        raise PreconditionError("nilpotent_exp needs a square matrix")
    if nilpotency_index(m) is None:
        raise PreconditionError("matrix is not nilpotent")
    n = m.nrows
    acc = Matrix.identity(n)
    power = Matrix.identity(n)
    fact = 1
    for k in range(1, n + 1):
        power = power * m
        if power.is_zero():
            break
        fact *= k
        acc = acc + power.scale(Fraction(1, fact))
    return acc


def wedge_power(m: Matrix, p: int) -> Matrix:
    """p-th exterior power: entries are the p x p minors, index sets in
    lexicographic order, so column J holds the image of the wedge of the
    J-indexed basis vectors."""
    if not m.is_square():
        raise PreconditionError("wedge_power needs a square matrix")
    n = m.nrows
    if p < 0 or p > n:
        raise PreconditionError("wedge power degree out of range")
    subsets = list(itertools.combinations(range(n), p))
    return Matrix(
        [[m.submatrix(ri, ci).det() for ci in subsets] for ri in subsets],
        ncols=len(subsets),
    )
