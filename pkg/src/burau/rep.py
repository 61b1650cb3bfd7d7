"""The unreduced Burau representation and its s-adic filtration.

beta sends sigma_i to the identity with a 2x2 block [[1-t, 1], [t, 0]]
spliced in at rows/columns (i, i+1).  Every image fixes the column vector
v = (t, t^2, ..., t^n)^T, fixes the all-ones row covector, and is unitary
for the Hermitian form J (ones on the diagonal, -t below, -t^(-1) above,
with conjugation t -> t^(-1)).  Gamma is the group of all matrices with
those three properties whose reduction mod s = t - 1 is a permutation
matrix; gamma_check certifies membership exactly.

Writing A in Gamma as a power series in s gives integer coefficient
matrices (A)_k; the depth of A is the smallest k >= 1 with (A)_k nonzero.
gamma_coeff extracts the leading coefficient as a GradedElement.
"""

from __future__ import annotations

from .laurent import LaurentPoly, TruncSeries, ONE, ZERO, T, T_INV
from .linalg import IntMatrix, LaurentMatrix, TruncMatrix
from .liealg import GradedElement
from .words import (BraidWord, Commutator, Concat, Inverse, Literal,
                    Perm, Power)


class DepthTooSmall(ValueError):
    """Asked for a coefficient below the certified depth of the element."""


# ---------------------------------------------------------------------------
# generators and invariant data

_POS_BLOCK = ((ONE - T, ONE), (T, ZERO))
_NEG_BLOCK = ((ZERO, T_INV), (ONE, ONE - T_INV))


def burau_gen(n: int, i: int, sign: int = 1) -> LaurentMatrix:
    """beta(sigma_i^sign): identity with the 2x2 block at (i, i+1)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} not in 1..{n - 1}")
    block = _POS_BLOCK if sign > 0 else _NEG_BLOCK
    rows = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
    for r in range(2):
        for c in range(2):
            rows[i - 1 + r][i - 1 + c] = block[r][c]
    return LaurentMatrix(rows)


def vector_v(n: int) -> tuple[LaurentPoly, ...]:
    """The fixed column vector (t, t^2, ..., t^n)."""
    return tuple(T ** k for k in range(1, n + 1))


def ones_row(n: int) -> tuple[LaurentPoly, ...]:
    """The fixed row covector (1, ..., 1)."""
    return (ONE,) * n


def form_j(n: int) -> LaurentMatrix:
    """The Hermitian form: 1 on the diagonal, -t below, -t^(-1) above."""
    neg_t = -T
    neg_t_inv = -T_INV
    return LaurentMatrix([[ONE if r == c else neg_t if r > c else neg_t_inv
                           for c in range(n)] for r in range(n)])


# ---------------------------------------------------------------------------
# word evaluation

def _apply_letter_exact(cols: list[list[LaurentPoly]], i: int, sign: int) -> None:
    """Right-multiply (in place, column list) by beta(sigma_i^sign)."""
    a, b = cols[i - 1], cols[i]
    if sign > 0:
        # new col i = a*(1-t) + b*t ; new col i+1 = a
        one_minus_t = ONE - T
        cols[i - 1] = [x * one_minus_t + y * T for x, y in zip(a, b)]
        cols[i] = a
    else:
        # new col i = b ; new col i+1 = a*t^-1 + b*(1-t^-1)
        one_minus = ONE - T_INV
        cols[i - 1] = b
        cols[i] = [x * T_INV + y * one_minus for x, y in zip(a, b)]


def _literal_exact(node: Literal, inv: bool) -> LaurentMatrix:
    n = node.n
    cols = [[ONE if r == c else ZERO for r in range(n)] for c in range(n)]
    letters = node.letters
    if inv:
        letters = tuple((i, -s) for i, s in reversed(letters))
    for i, s in letters:
        _apply_letter_exact(cols, i, s)
    return LaurentMatrix([[cols[c][r] for c in range(n)] for r in range(n)])


def burau_eval(w: BraidWord) -> LaurentMatrix:
    """Exact image of a word, memoized over shared DAG nodes.

    Inverses are evaluated structurally (the inverse flag distributes to the
    leaves), so no Laurent-matrix inversion ever happens.
    """
    memo: dict[tuple[int, bool], LaurentMatrix] = {}
    keep: list[BraidWord] = []

    def go(node: BraidWord, inv: bool) -> LaurentMatrix:
        key = (id(node), inv)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Literal):
            out = _literal_exact(node, inv)
        elif isinstance(node, Concat):
            parts = reversed(node.parts) if inv else node.parts
            out = LaurentMatrix.identity(node.n)
            for part in parts:
                out = out * go(part, inv)
        elif isinstance(node, Inverse):
            out = go(node.child, not inv)
        elif isinstance(node, Power):
            k = node.exponent
            if k == 0:
                out = LaurentMatrix.identity(node.n)
            else:
                base = go(node.child, inv != (k < 0))
                out = _mat_power(base, abs(k), LaurentMatrix.identity(node.n))
        elif isinstance(node, Commutator):
            x, y = node.left, node.right
            order = ((y, False), (x, False), (y, True), (x, True)) if inv else \
                    ((x, False), (y, False), (x, True), (y, True))
            out = LaurentMatrix.identity(node.n)
            for child, child_inv in order:
                out = out * go(child, child_inv)
        else:
            raise TypeError(f"unknown word node {type(node).__name__}")
        memo[key] = out
        keep.append(node)
        return out

    return go(w, False)


def _mat_power(base, k: int, ident):
    out = ident
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def burau_eval_trunc(w: BraidWord, precision: int) -> TruncMatrix:
    """Image of a word in the ring truncated at s^precision."""
    n = w.n
    t_s = T.to_series(precision)
    t_inv_s = T_INV.to_series(precision)
    one_s = TruncSeries.one(precision)
    zero_s = TruncSeries.zero(precision)
    one_minus_t = one_s - t_s
    one_minus_t_inv = one_s - t_inv_s

    def literal(node: Literal, inv: bool) -> TruncMatrix:
        cols = [[one_s if r == c else zero_s for r in range(n)] for c in range(n)]
        letters = node.letters
        if inv:
            letters = tuple((i, -s) for i, s in reversed(letters))
        for i, s in letters:
            a, b = cols[i - 1], cols[i]
            if s > 0:
                cols[i - 1] = [x * one_minus_t + y * t_s for x, y in zip(a, b)]
                cols[i] = a
            else:
                cols[i - 1] = b
                cols[i] = [x * t_inv_s + y * one_minus_t_inv for x, y in zip(a, b)]
        return TruncMatrix(precision,
                           [[cols[c][r] for c in range(n)] for r in range(n)])

    memo: dict[tuple[int, bool], TruncMatrix] = {}
    keep: list[BraidWord] = []

    def go(node: BraidWord, inv: bool) -> TruncMatrix:
        key = (id(node), inv)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Literal):
            out = literal(node, inv)
        elif isinstance(node, Concat):
            parts = reversed(node.parts) if inv else node.parts
            out = TruncMatrix.identity(n, precision)
            for part in parts:
                out = out * go(part, inv)
        elif isinstance(node, Inverse):
            out = go(node.child, not inv)
        elif isinstance(node, Power):
            k = node.exponent
            if k == 0:
                out = TruncMatrix.identity(n, precision)
            else:
                base = go(node.child, inv != (k < 0))
                out = _mat_power(base, abs(k), TruncMatrix.identity(n, precision))
        elif isinstance(node, Commutator):
            x, y = node.left, node.right
            order = ((y, False), (x, False), (y, True), (x, True)) if inv else \
                    ((x, False), (y, False), (x, True), (y, True))
            out = TruncMatrix.identity(n, precision)
            for child, child_inv in order:
                out = out * go(child, child_inv)
        else:
            raise TypeError(f"unknown word node {type(node).__name__}")
        memo[key] = out
        keep.append(node)
        return out

    return go(w, False)


# ---------------------------------------------------------------------------
# Gamma membership


class GammaElement:
    """A certified element of Gamma, with cached derived data.

    Equality is equality of matrices; the cached expansion, depth, and
    permutation are memoized lazily (idempotent fills, safe to race).
    """

    __slots__ = ("matrix", "word", "_depth", "_coeffs", "_perm")

    def __init__(self, matrix: LaurentMatrix, word: BraidWord | None = None,
                 *, _certified: bool = False):
        if not _certified:
            bad = _violations(matrix)
            if bad:
                raise ValueError(f"matrix is not in Gamma: {bad}")
        self.matrix = matrix
        self.word = word
        self._depth: int | float | None = None
        self._coeffs: dict[int, IntMatrix] = {}
        self._perm: Perm | None = None

    @property
    def n(self) -> int:
        return self.matrix.n

    def depth(self) -> int | float:
        if self._depth is None:
            self._depth = self.matrix.depth()
        return self._depth

    def coeff(self, k: int) -> IntMatrix:
        got = self._coeffs.get(k)
        if got is None:
            got = self.matrix.s_expand(k + 1)[k]
            self._coeffs[k] = got
        return got

    def permutation(self) -> Perm:
        if self._perm is None:
            self._perm = Perm(self.matrix.at_one().permutation_images())
        return self._perm

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GammaElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def to_json(self) -> dict:
        out = self.matrix.to_json()
        if self.word is not None:
            from .words import word_format
            out["word"] = word_format(self.word)
        return out

    @staticmethod
    def from_json(data: dict, n: int | None = None,
                  bindings=None) -> "GammaElement":
        mat = LaurentMatrix.from_json(data)
        word = None
        if data.get("word") is not None:
            from .words import parse_word
            word = parse_word(data["word"], mat.n, bindings)
        checked = gamma_check(mat, word=word)
        if isinstance(checked, GammaReport):
            raise ValueError(f"matrix is not in Gamma: {checked.violations}")
        return checked

    def __repr__(self) -> str:
        return f"GammaElement(n={self.n}, depth={self.depth()})"


class GammaReport:
    """Failed membership test: which of the four conditions broke."""

    __slots__ = ("matrix", "violations")

    def __init__(self, matrix: LaurentMatrix, violations: list[str]):
        self.matrix = matrix
        self.violations = list(violations)

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"GammaReport(violations={self.violations})"


#: names of the four membership conditions, in check order
GAMMA_CONDITIONS = ("fixes_v", "fixes_ones", "unitary", "permutation_mod_s")


def _violations(matrix: LaurentMatrix) -> list[str]:
    n = matrix.n
    bad: list[str] = []
    v = vector_v(n)
    if matrix.mul_vec(v) != v:
        bad.append("fixes_v")
    ones = ones_row(n)
    if matrix.vec_mul(ones) != ones:
        bad.append("fixes_ones")
    j = form_j(n)
    if matrix.star() * j * matrix != j:
        bad.append("unitary")
    if not matrix.at_one().is_permutation():
        bad.append("permutation_mod_s")
    return bad


def gamma_check(matrix: LaurentMatrix,
                word: BraidWord | None = None) -> GammaElement | GammaReport:
    """Certify membership in Gamma, or report every violated condition.

    Exact input only: a truncation can witness failure but never certify
    the unitarity identity.
    """
    bad = _violations(matrix)
    if bad:
        return GammaReport(matrix, bad)
    return GammaElement(matrix, word=word, _certified=True)


def burau_gamma(w: BraidWord) -> GammaElement:
    """Evaluate a word and wrap it; skips re-checking the four conditions.

    Images of words satisfy them identically (the test suite pins this on
    generators and on random words), so wrapping directly is sound.
    """
    return GammaElement(burau_eval(w), word=w, _certified=True)


def gamma_coeff(g: GammaElement | LaurentMatrix | BraidWord, k: int) -> GradedElement:
    """The degree-k coefficient of an element of depth >= k.

    Raises DepthTooSmall when the element visibly fails to lie that deep;
    the result is the zero element when it lies strictly deeper.
    """
    if isinstance(g, BraidWord):
        g = burau_gamma(g)
    elif isinstance(g, LaurentMatrix):
        g = GammaElement(g)
    if k < 1:
        raise ValueError("coefficient degree must be >= 1")
    coeffs = g.matrix.s_expand(k + 1)
    if coeffs[0] != IntMatrix.identity(g.n):
        raise DepthTooSmall(f"element has depth 0 < {k}")
    for j in range(1, k):
        if not coeffs[j].is_zero():
            raise DepthTooSmall(f"element has depth {j} < {k}")
    return GradedElement(k, coeffs[k])
