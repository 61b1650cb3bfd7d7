"""Square matrices over Z[t,t^-1], over Z[s]/(s^N), and over Z, plus integer
lattice solving by Hermite normal form.

The exact path (:class:`LaurentMatrix`) is used for membership checks,
determinants and depth; the truncated path (:class:`TruncMatrix`) for long
word evaluation, where only the first N s-adic coefficients matter.  Both
paths are exact in their own ring: truncation at t = 1 + s is a ring
homomorphism, so a truncated result is a theorem about the exact one.

Integer matrices double as s-adic coefficients and as vectors in Z^(n^2)
(row-major) for the Hermite-normal-form machinery at the bottom of the file.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .laurent import ONE, ZERO, LaurentPoly, TruncSeries


class NonUnitDeterminant(Exception):
    """Raised when inverting a matrix whose determinant is not +-t^a."""


def _square(rows: Sequence[Sequence]) -> int:
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix must be square")
    return n


# ---------------------------------------------------------------------------
# integer matrices


class IntMatrix:
    """An n x n matrix of arbitrary-precision integers."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.n = _square(rows)
        self.rows = tuple(tuple(int(v) for v in row) for row in rows)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int) -> "IntMatrix":
        return IntMatrix([[0] * n for _ in range(n)])

    @staticmethod
    def ones(n: int) -> "IntMatrix":
        """The all-ones matrix."""
        return IntMatrix([[1] * n for _ in range(n)])

    @staticmethod
    def unit(n: int, i: int, j: int) -> "IntMatrix":
        """E_ij with a single 1 in (1-based) position (i, j)."""
        rows = [[0] * n for _ in range(n)]
        rows[i - 1][j - 1] = 1
        return IntMatrix(rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix([[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix([[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in row] for row in self.rows])

    def __mul__(self, other: "IntMatrix | int") -> "IntMatrix":
        if isinstance(other, int):
            return IntMatrix([[a * other for a in row] for row in self.rows])
        self._check(other)
        n = self.n
        cols = list(zip(*other.rows))
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in cols]
                          for row in self.rows])

    def __rmul__(self, other: int) -> "IntMatrix":
        return self.__mul__(other)

    def _check(self, other: "IntMatrix") -> None:
        if self.n != other.n:
            raise ValueError("dimension mismatch")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def is_zero(self) -> bool:
        return all(not v for row in self.rows for v in row)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.rows)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.rows))

    def mul_vec(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.rows)

    def vec_mul(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(x * a for x, a in zip(vec, col)) for col in zip(*self.rows))

    def commutator(self, other: "IntMatrix") -> "IntMatrix":
        return self * other - other * self

    def is_permutation(self) -> bool:
        seen = set()
        for row in self.rows:
            ones = [j for j, v in enumerate(row) if v == 1]
            if len(ones) != 1 or any(v not in (0, 1) for v in row):
                return False
            seen.add(ones[0])
        return len(seen) == self.n

    def permutation_images(self) -> tuple[int, ...]:
        """1-based images i -> pi(i), assuming is_permutation()."""
        return tuple(row.index(1) + 1 for row in self.rows)

    def det(self) -> int:
        return _det_minors(self.rows, 0, 1, lambda a, b: a * b,
                           lambda a, b: a + b, lambda a: -a)

    def inverse(self) -> "IntMatrix":
        """Inverse of a matrix with determinant +-1."""
        d = self.det()
        if d not in (1, -1):
            raise NonUnitDeterminant(f"integer determinant {d} is not +-1")
        adj = _adjugate(self.rows, 0, 1, lambda a, b: a * b,
                        lambda a, b: a + b, lambda a: -a)
        return IntMatrix([[v * d for v in row] for row in adj])

    def vec(self) -> tuple[int, ...]:
        """Row-major vectorization into Z^(n^2)."""
        return tuple(v for row in self.rows for v in row)

    @staticmethod
    def from_vec(n: int, vec: Sequence[int]) -> "IntMatrix":
        if len(vec) != n * n:
            raise ValueError("vector length must be n^2")
        return IntMatrix([vec[i * n:(i + 1) * n] for i in range(n)])

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    @staticmethod
    def from_json(obj: Sequence[Sequence[int]]) -> "IntMatrix":
        return IntMatrix(obj)

    def __str__(self) -> str:
        width = max((len(str(v)) for row in self.rows for v in row), default=1)
        return "\n".join(" ".join(str(v).rjust(width) for v in row)
                         for row in self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]!r})"


def perm_matrix(pi) -> IntMatrix:
    """Permutation matrix P with P[i, pi(i)] = 1 (1-based images).

    With this orientation P is a homomorphism for left-to-right
    composition: perm_matrix(pi then rho) = perm_matrix(pi) * perm_matrix(rho).
    Accepts any object with an ``images`` attribute, or a bare sequence.
    """
    images = tuple(getattr(pi, "images", pi))
    n = len(images)
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..n")
    rows = [[0] * n for _ in range(n)]
    for i, img in enumerate(images):
        rows[i][img - 1] = 1
    return IntMatrix(rows)


# ---------------------------------------------------------------------------
# determinants by minor expansion, generic over the scalar ring


def _det_minors(rows, zero, one, mul, add, neg):
    """Determinant via first-row Laplace expansion, memoized on column sets.

    The submatrices that appear always consist of the last len(cols) rows,
    so the column tuple alone is a sound memo key.  Cost O(2^n * n) ring
    multiplications: fine for the n <= 8 range this package targets.
    """
    n = len(rows)
    memo: dict[tuple[int, ...], object] = {}

    def go(cols: tuple[int, ...]) -> object:
        if not cols:
            return one
        got = memo.get(cols)
        if got is not None:
            return got
        row = rows[n - len(cols)]
        total = zero
        for pos, c in enumerate(cols):
            entry = row[c]
            if entry == zero:
                continue
            sub = go(cols[:pos] + cols[pos + 1:])
            term = mul(entry, sub)
            if pos % 2:
                term = neg(term)
            total = add(total, term)
        memo[cols] = total
        return total

    return go(tuple(range(n)))


def _adjugate(rows, zero, one, mul, add, neg):
    """Adjugate matrix: adj[i][j] = (-1)^(i+j) det(minor with row j, col i removed)."""
    n = len(rows)
    out = [[zero] * n for _ in range(n)]
    for j in range(n):
        reduced = [row for r, row in enumerate(rows) if r != j]
        for i in range(n):
            minor = [[row[c] for c in range(n) if c != i] for row in reduced]
            d = _det_minors(minor, zero, one, mul, add, neg) if minor else one
            out[i][j] = neg(d) if (i + j) % 2 else d
    return out


# ---------------------------------------------------------------------------
# Laurent matrices


class LaurentMatrix:
    """An n x n matrix over Z[t, t^-1]."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[LaurentPoly]]):
        self.n = _square(rows)
        self.rows = tuple(
            tuple(e if isinstance(e, LaurentPoly) else LaurentPoly(e) for e in row)
            for row in rows)

    @staticmethod
    def identity(n: int) -> "LaurentMatrix":
        return LaurentMatrix([[ONE if i == j else ZERO for j in range(n)]
                              for i in range(n)])

    @staticmethod
    def from_int(m: IntMatrix) -> "LaurentMatrix":
        return LaurentMatrix([[LaurentPoly(v) for v in row] for row in m.rows])

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: "LaurentMatrix") -> None:
        if self.n != other.n:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        return LaurentMatrix([[a + b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        return LaurentMatrix([[a - b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix([[-a for a in row] for row in self.rows])

    def __mul__(self, other: "LaurentMatrix | LaurentPoly | int") -> "LaurentMatrix":
        if isinstance(other, (LaurentPoly, int)):
            return LaurentMatrix([[a * other for a in row] for row in self.rows])
        self._check(other)
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = ZERO
                for a, b in zip(row, col):
                    if a._c and b._c:
                        acc = acc + a * b
                new_row.append(acc)
            out.append(new_row)
        return LaurentMatrix(out)

    def __rmul__(self, other: "LaurentPoly | int") -> "LaurentMatrix":
        return self.__mul__(other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(list(zip(*self.rows)))

    def star(self) -> "LaurentMatrix":
        """The involution (A*)_ij = bar(A_ji)."""
        return LaurentMatrix([[self.rows[j][i].bar() for j in range(self.n)]
                              for i in range(self.n)])

    def mul_vec(self, vec: Sequence[LaurentPoly]) -> tuple[LaurentPoly, ...]:
        return tuple(sum((a * x for a, x in zip(row, vec)), ZERO)
                     for row in self.rows)

    def vec_mul(self, vec: Sequence[LaurentPoly]) -> tuple[LaurentPoly, ...]:
        return tuple(sum((x * a for x, a in zip(vec, col)), ZERO)
                     for col in zip(*self.rows))

    def at_one(self) -> IntMatrix:
        """Reduction modulo s = t - 1, i.e. entrywise evaluation at t = 1."""
        return IntMatrix([[e.at_one() for e in row] for row in self.rows])

    def s_expand(self, precision: int) -> list[IntMatrix]:
        """The coefficient matrices of the s-adic expansion, degrees 0..N-1.

        Reassembling sum_i s^i * coeff[i] recovers the matrix modulo s^N.
        """
        series = [[e.to_series(precision) for e in row] for row in self.rows]
        return [IntMatrix([[series[i][j].coeff(k) for j in range(self.n)]
                           for i in range(self.n)])
                for k in range(precision)]

    def truncate(self, precision: int) -> "TruncMatrix":
        return TruncMatrix(precision,
                           [[e.to_series(precision) for e in row]
                            for row in self.rows])

    def depth(self) -> int | float:
        """Largest k with A congruent to I modulo s^k; inf exactly for A = I.

        Computed by exact repeated division by (t - 1), not by truncation,
        so there is no precision cap.
        """
        best: int | float = math.inf
        ident = LaurentMatrix.identity(self.n)
        for row, irow in zip(self.rows, ident.rows):
            for e, ie in zip(row, irow):
                diff = e - ie
                if not diff.is_zero():
                    best = min(best, diff.s_valuation())
        return best

    def det(self) -> LaurentPoly:
        return _det_minors(self.rows, ZERO, ONE, lambda a, b: a * b,
                           lambda a, b: a + b, lambda a: -a)

    def inverse(self) -> "LaurentMatrix":
        """Adjugate inverse; requires a unit determinant +-t^a."""
        d = self.det()
        if d.as_unit() is None:
            raise NonUnitDeterminant(f"determinant {d} is not a unit of Z[t,t^-1]")
        adj = _adjugate(self.rows, ZERO, ONE, lambda a, b: a * b,
                        lambda a, b: a + b, lambda a: -a)
        dinv = d.inverse()
        return LaurentMatrix([[e * dinv for e in row] for row in adj])

    def to_json(self) -> dict:
        return {"n": self.n,
                "entries": [[e.to_json() for e in row] for row in self.rows]}

    @staticmethod
    def from_json(obj: dict) -> "LaurentMatrix":
        rows = [[LaurentPoly.from_json(e) for e in row] for row in obj["entries"]]
        m = LaurentMatrix(rows)
        if m.n != obj["n"]:
            raise ValueError("declared dimension does not match entries")
        return m

    def __str__(self) -> str:
        cells = [[str(e) for e in row] for row in self.rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]"
                         for row in cells)

    def __repr__(self) -> str:
        return f"LaurentMatrix(n={self.n})"


# ---------------------------------------------------------------------------
# truncated matrices


class TruncMatrix:
    """An n x n matrix over Z[s]/(s^N); all entries share one precision."""

    __slots__ = ("n", "precision", "rows")

    def __init__(self, precision: int, rows: Sequence[Sequence[TruncSeries]]):
        self.n = _square(rows)
        self.precision = precision
        for row in rows:
            for e in row:
                if e.precision != precision:
                    raise ValueError("entry precision mismatch")
        self.rows = tuple(tuple(row) for row in rows)

    @staticmethod
    def identity(n: int, precision: int) -> "TruncMatrix":
        one = TruncSeries.one(precision)
        zero = TruncSeries.zero(precision)
        return TruncMatrix(precision,
                           [[one if i == j else zero for j in range(n)]
                            for i in range(n)])

    @staticmethod
    def from_int(m: IntMatrix, precision: int) -> "TruncMatrix":
        return TruncMatrix(precision,
                           [[TruncSeries(precision, [v]) for v in row]
                            for row in m.rows])

    def _check(self, other: "TruncMatrix") -> None:
        if self.n != other.n or self.precision != other.precision:
            raise ValueError("dimension or precision mismatch")

    def __add__(self, other: "TruncMatrix") -> "TruncMatrix":
        self._check(other)
        return TruncMatrix(self.precision,
                           [[a + b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "TruncMatrix") -> "TruncMatrix":
        self._check(other)
        return TruncMatrix(self.precision,
                           [[a - b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "TruncMatrix":
        return TruncMatrix(self.precision,
                           [[-a for a in row] for row in self.rows])

    def __mul__(self, other: "TruncMatrix") -> "TruncMatrix":
        self._check(other)
        cols = list(zip(*other.rows))
        zero = TruncSeries.zero(self.precision)
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    acc = acc + a * b
                new_row.append(acc)
            out.append(new_row)
        return TruncMatrix(self.precision, out)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, TruncMatrix)
                and self.precision == other.precision and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.precision, self.rows))

    def coefficient(self, k: int) -> IntMatrix:
        """The s^k coefficient matrix, 0 <= k < precision."""
        return IntMatrix([[e.coeff(k) for e in row] for row in self.rows])

    def depth_bound(self) -> int:
        """Largest k <= N with A congruent to I mod s^k.

        A return of N means "at least N": the matrix is the identity to full
        precision and only the exact path can distinguish deeper agreement.
        """
        n, prec = self.n, self.precision
        best = prec
        for i in range(n):
            for j in range(n):
                e = self.rows[i][j]
                base = 1 if i == j else 0
                for k in range(min(best, prec)):
                    v = e.coeff(k) - (base if k == 0 else 0)
                    if v:
                        best = k
                        break
                if best == 0:
                    return 0
        return best

    def inverse(self) -> "TruncMatrix":
        """Inverse in the truncated ring via a Neumann series.

        The constant coefficient must be invertible over Z (determinant +-1);
        for the matrices this package meets it is a permutation matrix.
        """
        prec = self.precision
        head = self.coefficient(0)
        head_inv = TruncMatrix.from_int(head.inverse(), prec)
        m = head_inv * self - TruncMatrix.identity(self.n, prec)
        # Horner form of I - M + M^2 - ...: X <- I - M X
        x = TruncMatrix.identity(self.n, prec)
        for _ in range(prec - 1):
            x = TruncMatrix.identity(self.n, prec) - m * x
        return x * head_inv

    def to_json(self) -> dict:
        return {"n": self.n, "precision": self.precision,
                "entries": [[e.coeffs() for e in row] for row in self.rows]}

    @staticmethod
    def from_json(obj: dict) -> "TruncMatrix":
        prec = obj["precision"]
        rows = [[TruncSeries(prec, e) for e in row] for row in obj["entries"]]
        m = TruncMatrix(prec, rows)
        if m.n != obj["n"]:
            raise ValueError("declared dimension does not match entries")
        return m

    def __repr__(self) -> str:
        return f"TruncMatrix(n={self.n}, precision={self.precision})"


# ---------------------------------------------------------------------------
# Hermite normal form and integer lattices


def row_hnf(rows: Sequence[Sequence[int]]):
    """Row Hermite normal form with transformation matrix.

    Returns (H, U, pivots) where U is unimodular, U * M = H, H is in row
    echelon form with positive pivots and entries above each pivot reduced
    into [0, pivot), and pivots is a list of (row, col) pairs.  Deterministic:
    columns are scanned left to right and ties in the remainder loop are
    broken by lowest row index.
    """
    h = [list(map(int, row)) for row in rows]
    m = len(h)
    d = len(h[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    pivots: list[tuple[int, int]] = []
    for c in range(d):
        # gcd elimination below row r in column c
        while True:
            nonzero = [i for i in range(r, m) if h[i][c]]
            if not nonzero:
                break
            i0 = min(nonzero, key=lambda i: (abs(h[i][c]), i))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, m):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    if q:
                        h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                        u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if h[i][c]:
                        done = False
            if done:
                break
        if r < m and h[r][c]:
            if h[r][c] < 0:
                h[r] = [-a for a in h[r]]
                u[r] = [-a for a in u[r]]
            p = h[r][c]
            for i in range(r):
                q = h[i][c] // p
                if q:
                    h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
            pivots.append((r, c))
            r += 1
            if r == m:
                break
    return h, u, pivots


class IntLattice:
    """The sublattice of Z^d spanned by a list of integer vectors.

    Keeps the original generators (for expressing solutions in their terms),
    the canonical HNF basis (for membership and equality), and the
    transformation matrix (for kernels).
    """

    __slots__ = ("dim", "gens", "hnf", "transform", "pivots")

    def __init__(self, dim: int, generators: Iterable[Sequence[int]]):
        self.dim = dim
        self.gens = [tuple(map(int, g)) for g in generators]
        for g in self.gens:
            if len(g) != dim:
                raise ValueError("generator length mismatch")
        h, u, pivots = row_hnf(self.gens)
        self.hnf = [tuple(row) for row in h[:len(pivots)]]
        self.transform = u
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[tuple[int, ...]]:
        return list(self.hnf)

    def _reduce(self, target: Sequence[int]):
        """Back-substitute target against the HNF rows.

        Returns (coeffs over hnf rows, remainder); membership means the
        remainder is zero and every division was exact.
        """
        if isinstance(target, IntMatrix):
            target = target.vec()
        rem = list(map(int, target))
        coeffs = []
        for (row, col), basis_row in zip(self.pivots, self.hnf):
            p = basis_row[col]
            q, r = divmod(rem[col], p)
            if r:
                return None, rem
            if q:
                rem = [a - q * b for a, b in zip(rem, basis_row)]
            coeffs.append(q)
        return coeffs, rem

    def contains(self, target: Sequence[int]) -> bool:
        coeffs, rem = self._reduce(target)
        return coeffs is not None and not any(rem)

    def solve(self, target: Sequence[int]) -> list[int] | None:
        """Integer coefficients over the original generators, or None."""
        coeffs, rem = self._reduce(target)
        if coeffs is None or any(rem):
            return None
        m = len(self.gens)
        out = [0] * m
        for c, (row, _col) in zip(coeffs, self.pivots):
            if c:
                urow = self.transform[row]
                for j in range(m):
                    out[j] += c * urow[j]
        return out

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Basis of all integer relations among the original generators."""
        return [tuple(self.transform[i]) for i in range(self.rank, len(self.gens))]

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, IntLattice)
                and self.dim == other.dim and self.hnf == other.hnf)

    def __hash__(self) -> int:
        return hash((self.dim, tuple(self.hnf)))

    def __repr__(self) -> str:
        return f"IntLattice(dim={self.dim}, rank={self.rank})"


def matrix_lattice(generators: Sequence[IntMatrix]) -> IntLattice:
    if not generators:
        raise ValueError("need at least one generator to fix the dimension")
    n = generators[0].n
    return IntLattice(n * n, [g.vec() for g in generators])


def hnf_solve(generators: Sequence[IntMatrix], target: IntMatrix) -> list[int] | None:
    """Integer c with sum c_i * gen_i = target, or None if no solution."""
    return matrix_lattice(generators).solve(target.vec())


def hnf_membership(generators: Sequence[IntMatrix], target: IntMatrix) -> bool:
    return matrix_lattice(generators).contains(target.vec())


def hnf_kernel(generators: Sequence[IntMatrix]) -> list[tuple[int, ...]]:
    """Generators of all integer relations sum c_i * gen_i = 0."""
    return matrix_lattice(generators).kernel_basis()
