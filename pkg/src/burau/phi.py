"""The connecting map phi from kernel elements to deeper graded cosets.

A kernel element in half-degree k is a formal sum a = sum_i X_{I_i} (x) W_i
with W_i in G_{2k-1} and sum_i <X_{I_i}, W_i> = 0.  Realizing each W_i as
the leading coefficient of a braid word omega_i of depth 2k-1, the product

    alpha = prod_i [beta(A_{I_i}), omega_i]

has depth 2k+1, and its leading coefficient, taken modulo the sublattice
<G_1, G_2k>, depends only on a (not on the chosen witnesses).  That coset
is phi(a).

Two computation paths are implemented.  The direct path evaluates alpha.
The expansion path evaluates

    sum_i ( <X_i, (omega_i)_2k> + <(beta A_i)_2, W_i> + <W_i, X_i> X_i )

and the two are asserted equal as exact matrices, not just as cosets.

There is also a witness-free path (phi_from_w).  The symmetric part of
(omega)_2k is forced by unitarity:

    (omega)+_2k = -1/4 ( <(J)_1, W> + (4k-2) W ),

a half-integer matrix depending only on W.  The skew part is witness
dependent, but only through an element of G_2k: its column-sum vector
u = -ones . (omega)+_2k and its fractional class (the positions carrying
half-integer entries, which are the same positions where (omega)+_2k does)
are both visible from W.  Substituting the banded skew matrix w_prime(W, k)
with column sums u, corrected by a canonical representative of the
fractional class, reproduces phi exactly modulo <G_1, G_2k> with an
integral result.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .liealg import GradedElement, bracket_lattice, gen_x
from .linalg import IntLattice, IntMatrix
from .rep import burau_eval_trunc, form_j
from .words import BraidWord, commutator, concat, pure_gen


class KernelViolation(ValueError):
    """The defining relation sum <X_i, W_i> = 0 fails."""


class DepthViolation(ValueError):
    """A witness word does not have the depth or coefficient it claims."""


class HalfIntegralityViolation(ValueError):
    """An entry that must lie in (1/2) Z does not."""


# ---------------------------------------------------------------------------
# small exact-rational matrix helpers (module-internal)

FracRows = list[list[Fraction]]


def _fr(m: IntMatrix) -> FracRows:
    return [[Fraction(v) for v in row] for row in m.rows]


def _fadd(*ms: FracRows) -> FracRows:
    n = len(ms[0])
    return [[sum(m[i][j] for m in ms) for j in range(n)] for i in range(n)]


def _fneg(m: FracRows) -> FracRows:
    return [[-v for v in row] for row in m]


def _fbracket(a: FracRows, b: FracRows) -> FracRows:
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]


def _to_int(m: FracRows, what: str) -> IntMatrix:
    if any(v.denominator != 1 for row in m for v in row):
        raise HalfIntegralityViolation(f"{what} has non-integral entries")
    return IntMatrix([[int(v) for v in row] for row in m])


# ---------------------------------------------------------------------------
# kernel elements and cosets


class KernelTerm:
    """One summand X_pair (x) W, optionally with a witness word."""

    __slots__ = ("pair", "w", "witness")

    def __init__(self, pair: tuple[int, int], w: GradedElement,
                 witness: BraidWord | None = None):
        i, j = pair
        if not 1 <= i < j <= w.n:
            raise ValueError(f"pair {pair} invalid for n={w.n}")
        self.pair = (i, j)
        self.w = w
        self.witness = witness

    def to_json(self) -> dict:
        out = {"pair": list(self.pair), "W": self.w.to_json()}
        if self.witness is not None:
            from .words import word_format
            out["witness"] = word_format(self.witness)
        return out


class KernelElement:
    """A validated element of the kernel of G_1 (x) G_{2k-1} -> G_2k."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, terms: Sequence[KernelTerm]):
        if not terms:
            raise ValueError("a kernel element needs at least one term")
        self.n = terms[0].w.n
        self.degree = terms[0].w.degree
        if self.degree % 2 != 1 or self.degree < 3:
            raise ValueError("kernel degree must be odd and >= 3")
        self.terms = list(terms)
        total = IntMatrix.zero(self.n)
        for t in self.terms:
            if t.w.n != self.n or t.w.degree != self.degree:
                raise ValueError("mixed sizes or degrees in kernel terms")
            x = gen_x(*t.pair, self.n).matrix
            total = total + x.commutator(t.w.matrix)
        if not total.is_zero():
            raise KernelViolation("sum <X_i, W_i> does not vanish")

    @property
    def half_degree(self) -> int:
        return (self.degree + 1) // 2

    def relabel(self, degree: int) -> "KernelElement":
        """The same matrix data read in another odd degree >= 3."""
        if degree % 2 != 1 or degree < 3:
            raise ValueError("target degree must be odd and >= 3")
        return KernelElement([
            KernelTerm(t.pair, GradedElement(degree, t.w.matrix), t.witness)
            for t in self.terms])

    def with_witnesses(self, witnesses: Sequence[BraidWord]) -> "KernelElement":
        if len(witnesses) != len(self.terms):
            raise ValueError("witness count mismatch")
        return KernelElement([KernelTerm(t.pair, t.w, w)
                              for t, w in zip(self.terms, witnesses)])

    def to_json(self) -> dict:
        return {"degree": self.degree, "terms": [t.to_json() for t in self.terms]}

    @staticmethod
    def from_json(data: dict, bindings=None) -> "KernelElement":
        terms = []
        for t in data["terms"]:
            w = GradedElement.from_json(t["W"])
            witness = None
            if t.get("witness") is not None:
                from .words import parse_word
                witness = parse_word(t["witness"], w.n, bindings)
            terms.append(KernelTerm(tuple(t["pair"]), w, witness))
        return KernelElement(terms)

    def __repr__(self) -> str:
        return f"KernelElement(degree={self.degree}, terms={len(self.terms)})"


class CosetElement:
    """An element of G_{2k+1} modulo the sublattice <G_1, G_2k>."""

    __slots__ = ("representative", "modulus")

    def __init__(self, representative: GradedElement, modulus: IntLattice):
        self.representative = representative
        self.modulus = modulus

    @property
    def degree(self) -> int:
        return self.representative.degree

    def is_zero(self) -> bool:
        return self.modulus.contains(self.representative.matrix.vec())

    def transport(self, degree: int) -> "CosetElement":
        """The same coset read in another degree of equal parity >= 3.

        The underlying matrix lattices are literally equal across degrees of
        one parity, so this is a relabel plus a parity check.
        """
        if degree % 2 != self.degree % 2 or degree < 3:
            raise ValueError("transport requires equal parity and degree >= 3")
        return CosetElement(GradedElement(degree, self.representative.matrix),
                            self.modulus)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CosetElement):
            return NotImplemented
        if self.degree != other.degree or self.modulus != other.modulus:
            return False
        diff = self.representative.matrix - other.representative.matrix
        return self.modulus.contains(diff.vec())

    def __hash__(self) -> int:
        raise TypeError("cosets are unhashable; compare with ==")

    def to_json(self) -> dict:
        return {"representative": self.representative.to_json(),
                "modulus_rank": self.modulus.rank}

    def __repr__(self) -> str:
        return f"CosetElement(degree={self.degree})"


def coset_modulus(n: int, half_degree: int) -> IntLattice:
    """The lattice <G_1, G_2k> used as the modulus at half-degree k."""
    return bracket_lattice(n, 2 * half_degree)


# ---------------------------------------------------------------------------
# unitarity reconstruction


def reconstruct_plus(w: GradedElement, k: int) -> FracRows:
    """The symmetric part of (omega)_2k for ANY witness omega of w.

    Equal to -1/4 (<(J)_1, w> + (4k-2) w); entries lie in (1/2) Z.
    """
    if w.degree % 2 != 1:
        raise ValueError("w must have odd degree")
    n = w.n
    j1 = form_j(n).s_expand(2)[1]
    br = j1.commutator(w.matrix)
    out = [[Fraction(-(br[(i, j)] + (4 * k - 2) * w.matrix[(i, j)]), 4)
            for j in range(n)] for i in range(n)]
    if any(v.denominator > 2 for row in out for v in row):
        raise HalfIntegralityViolation("reconstructed symmetric part has "
                                       "denominator > 2")
    return out


def _banded_skew(colsums: Sequence[Fraction]) -> FracRows:
    """The skew matrix supported on the off-diagonal band whose column sums
    are the given vector (which must sum to zero)."""
    n = len(colsums)
    partial: list[Fraction] = []
    acc = Fraction(0)
    for v in colsums:
        acc += v
        partial.append(acc)
    if acc != 0:
        raise ValueError("column sums must total zero")
    out = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n - 1):
        out[j + 1][j] = partial[j]
        out[j][j + 1] = -partial[j]
    return out


def w_prime(w: GradedElement, k: int) -> FracRows:
    """A banded skew stand-in for the skew part of (omega)_2k.

    Its column sums match those of the true skew part (which are forced by
    unitarity); entries are half-integers, genuinely so for some w, e.g.
    w = X_24 - X_25 at n = 5, k = 2, where u = (0, 1/2, 0, 1, -3/2).
    """
    plus = reconstruct_plus(w, k)
    n = w.n
    u = [-sum(plus[i][j] for i in range(n)) for j in range(n)]
    if sum(u) != 0:
        raise HalfIntegralityViolation("column-sum vector does not total zero")
    return _banded_skew(u)


def _fractional_class_rep(w: GradedElement, k: int) -> FracRows:
    """Canonical skew, zero-row-sum matrix in the fractional class of
    (the skew part of (omega)_2k) - w_prime(w, k).

    The half-integer positions of the skew part coincide with those of the
    symmetric part (their sum is integral), so the class is visible from w;
    the true difference then lies in this representative plus G_2k, which
    is what lets phi_from_w land in the right coset.
    """
    n = w.n
    plus = reconstruct_plus(w, k)
    wp = w_prime(w, k)
    f = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if (plus[i][j] - wp[i][j]).denominator == 2:
                f[i][j] = Fraction(1, 2)
                f[j][i] = Fraction(-1, 2)
    rows = [sum(f[i][j] for j in range(n)) for i in range(n)]
    if any(r.denominator != 1 for r in rows):
        raise HalfIntegralityViolation("fractional class has no zero-row-sum "
                                       "representative")
    return _fadd(f, _fneg(_banded_skew([-r for r in rows])))


# ---------------------------------------------------------------------------
# phi


def _expansion_term(n: int, pair: tuple[int, int], w: IntMatrix,
                    omega_2k: IntMatrix, k: int) -> IntMatrix:
    """One summand of the expansion path, as an exact integer matrix."""
    x = gen_x(*pair, n).matrix
    a2 = burau_eval_trunc(pure_gen(n, *pair), 3).coefficient(2)
    return x.commutator(omega_2k) + a2.commutator(w) + w.commutator(x) * x


def phi_eval(a: KernelElement, verify: bool = True,
             modulus: IntLattice | None = None) -> CosetElement:
    """phi of a kernel element carrying witnesses.

    Evaluates the product of commutators directly; in verify mode (the
    default) also evaluates the expansion path and insists the two agree
    as exact matrices.  Raises DepthViolation when a witness fails its
    depth or coefficient claim.
    """
    n, k = a.n, a.half_degree
    if any(t.witness is None for t in a.terms):
        raise ValueError("phi_eval needs a witness on every term")
    precision = 2 * k + 2
    omega_mats = []
    for t in a.terms:
        m = burau_eval_trunc(t.witness, precision)
        if m.depth_bound() < 2 * k - 1:
            raise DepthViolation(
                f"witness for {t.pair} has depth {m.depth_bound()} < {2 * k - 1}")
        if m.coefficient(2 * k - 1) != t.w.matrix:
            raise DepthViolation(
                f"witness for {t.pair} has the wrong leading coefficient")
        omega_mats.append(m)

    word = concat(*[commutator(pure_gen(n, *t.pair), t.witness) for t in a.terms])
    value = burau_eval_trunc(word, precision)
    if value.depth_bound() < 2 * k + 1:
        raise DepthViolation("witnessed product is not deep enough; "
                             "kernel data and witnesses are inconsistent")
    rep = value.coefficient(2 * k + 1)

    if verify:
        total = IntMatrix.zero(n)
        for t, m in zip(a.terms, omega_mats):
            total = total + _expansion_term(n, t.pair, t.w.matrix,
                                            m.coefficient(2 * k), k)
        if total != rep:
            raise AssertionError("expansion path disagrees with direct path")

    mod = modulus if modulus is not None else coset_modulus(n, k)
    return CosetElement(GradedElement(2 * k + 1, rep), mod)


def phi_from_w(a: KernelElement, target_degree: int | None = None,
               modulus: IntLattice | None = None) -> CosetElement:
    """phi computed from the (pair, W) data alone, no witnesses.

    The witness-dependent part of the expansion enters only through the
    coefficient (omega)_2k, whose symmetric part, column sums, and
    fractional class are all forced by W; the remaining ambiguity lies in
    <G_1, G_2k> and drops out of the coset.  The assembled value is
    integral exactly when the kernel relation holds.

    target_degree names the degree of the RESULT (odd, >= 5); the input
    data is relabelled two below it.  Without it the result lands two
    degrees above the input.
    """
    if target_degree is not None:
        if target_degree % 2 == 0 or target_degree < 5:
            raise ValueError("phi lands in odd degree >= 5")
        if target_degree != a.degree + 2:
            a = a.relabel(target_degree - 2)
    n, k = a.n, a.half_degree
    total: FracRows = [[Fraction(0)] * n for _ in range(n)]
    for t in a.terms:
        x = _fr(gen_x(*t.pair, n).matrix)
        skew = _fadd(w_prime(t.w, k), _fractional_class_rep(t.w, k))
        a2 = _fr(burau_eval_trunc(pure_gen(n, *t.pair), 3).coefficient(2))
        wm = _fr(t.w.matrix)
        t1 = _fbracket(x, skew)
        t2 = _fbracket(a2, wm)
        t3_b = _fbracket(wm, x)
        t3 = [[sum(t3_b[i][p] * x[p][j] for p in range(n)) for j in range(n)]
              for i in range(n)]
        total = _fadd(total, t1, t2, t3)
    sym = [[Fraction(total[i][j] + total[j][i], 2) for j in range(n)]
           for i in range(n)]
    rep = _to_int(sym, "phi value")
    mod = modulus if modulus is not None else coset_modulus(n, k)
    return CosetElement(GradedElement(2 * k + 1, rep), mod)
