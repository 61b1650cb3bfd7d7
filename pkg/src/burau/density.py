"""Constructive approximation of unitary matrices by braid words.

The engine rests on a witness library: for each degree k up to a bound K,
a list of braid words whose leading coefficients span G_k over Z.  Given a
matrix gamma in the target group, `approximate` peels it degree by degree:
match the permutation first, then repeatedly read the lowest nonzero
coefficient of the residual, express it as an integer combination of
witness coefficients (coefficients add under products, because the graded
quotients are abelian), and divide the corresponding word back out.  After
K steps the residual agrees with the identity through degree K.

Library recipe, per degree:
  1        the band generators A_ij                       (images X_ij)
  2        [A_ij, A_ik]                                   (images Y_ijk)
  3        S_n-conjugates of the depth-3 seed word alpha  (orbit of X_24 - X_13)
  even >=4 [A_ij, degree-(k-1) witness]                   (images <G_1, G_{k-1}>)
  odd >=5  [A_25^2 A_45, inductor_{k-2}] and its S_n-conjugates, topped up
           with [A_ij, degree-(k-1) witness] commutators

where inductor_k is a stored depth-k word with leading coefficient exactly
X_24 - X_25.  The induction step's raw output only has that coefficient
modulo 2 G_k (an HNF-verified congruence); the build normalizes it by
dividing out a solve of the even part before storing.

Spanning of every degree is certified by HNF rank against the closed-form
basis; a miss raises SpanFailure, which for n < 5 is expected (the orbit
of X_24 - X_13 is too small) and otherwise indicates a bug.
"""

from __future__ import annotations

import json
import math
from typing import Iterator

from .liealg import GradedElement, g_basis, g_lattice, gen_x, sn_act
from .linalg import IntLattice, IntMatrix, LaurentMatrix
from .rep import GammaElement, burau_eval, burau_eval_trunc, gamma_check
from .words import (BraidWord, Perm, Power, all_perms, alpha_word, commutator,
                    concat, empty_word, flatten, gen, node_count, parse_word,
                    perm_lift, pure_gen, word_format)

MAX_N = 8
MAX_DEGREE = 6


class SpanFailure(Exception):
    """A degree's candidate list failed to span G_k.

    Expected for n < 5; otherwise a bug, since the candidates are chosen
    to realize surjections that hold for all n >= 5.
    """

    def __init__(self, degree: int, message: str = ""):
        self.degree = degree
        super().__init__(message or f"witness candidates do not span degree {degree}")


class NoSolution(Exception):
    """A target is not an integer combination of library coefficients."""


class NotInGamma(Exception):
    """The input matrix fails one of the group membership conditions."""

    def __init__(self, report):
        self.report = report
        super().__init__("matrix is not in the group: "
                         + ", ".join(report.violations))


class DepthRegression(Exception):
    """An approximation step failed to strictly increase residual depth."""


class LibraryIntegrityError(Exception):
    """A reloaded or freshly built library fails re-verification."""


class Witness:
    """A braid word together with its computed leading coefficient."""

    __slots__ = ("word", "element")

    def __init__(self, word: BraidWord, element: GradedElement):
        self.word = word
        self.element = element

    @property
    def degree(self) -> int:
        return self.element.degree

    def to_json(self) -> dict:
        return {"word": word_format(self.word), "element": self.element.to_json()}

    @staticmethod
    def from_json(data: dict, n: int) -> "Witness":
        element = GradedElement.from_json(data["element"])
        return Witness(parse_word(data["word"], n), element)

    def __repr__(self) -> str:
        return f"Witness(degree={self.degree}, word={word_format(self.word)!r})"


def _a25sq_a45(n: int) -> BraidWord:
    return concat(Power(n, pure_gen(n, 2, 5), 2), pure_gen(n, 4, 5))


def _conjugate(by: BraidWord, w: BraidWord) -> BraidWord:
    if not flatten(by):
        return w
    return concat(by, w, by.inverse())


def _verify_witness(word: BraidWord, k: int, expected: IntMatrix) -> None:
    m = burau_eval_trunc(word, k + 1)
    if m.depth_bound() < k:
        raise LibraryIntegrityError(
            f"stored degree-{k} word has depth {m.depth_bound()}")
    if m.coefficient(k) != expected:
        raise LibraryIntegrityError(
            f"stored degree-{k} word has a different coefficient than recorded")


class WitnessLibrary:
    """Per-degree witness lists with spanning certificates."""

    def __init__(self, n: int, max_degree: int,
                 per_degree: dict[int, list[Witness]],
                 inductors: dict[int, Witness]):
        self.n = n
        self.max_degree = max_degree
        self.per_degree = per_degree
        self.inductors = inductors

    def witnesses(self, k: int) -> list[Witness]:
        if not 1 <= k <= self.max_degree:
            raise ValueError(f"degree {k} outside library range 1..{self.max_degree}")
        return self.per_degree[k]

    def coefficient_lattice(self, k: int) -> IntLattice:
        return IntLattice(self.n * self.n,
                          [w.element.matrix.vec() for w in self.witnesses(k)])

    # -- verification ------------------------------------------------------

    def verify(self) -> None:
        """Recompute every stored coefficient and every spanning and
        induction certificate; raise LibraryIntegrityError on any miss."""
        for k in range(1, self.max_degree + 1):
            for w in self.per_degree[k]:
                if w.element.degree != k or w.element.n != self.n:
                    raise LibraryIntegrityError("degree or size mismatch in library")
                _verify_witness(w.word, k, w.element.matrix)
            if self.coefficient_lattice(k) != g_lattice(self.n, k):
                raise LibraryIntegrityError(f"degree {k} no longer spans")
        for k, ind in self.inductors.items():
            if ind.element.matrix != _induction_target(self.n):
                raise LibraryIntegrityError(f"inductor at degree {k} has the "
                                            "wrong coefficient")
            _verify_witness(ind.word, k, ind.element.matrix)
        self.verify_induction()

    def verify_induction(self) -> None:
        """Check the odd-degree step on every stored word it could consume:
        bracketing A_25^2 A_45 against a depth-k word with coefficient
        X_24 - X_25 must land on X_24 - X_25 modulo 2 G_{k+2}."""
        target = _induction_target(self.n)
        shift = _a25sq_a45(self.n)
        for k in (3, 5):
            if k > self.max_degree:
                continue
            pool = list(self.per_degree.get(k, []))
            if k in self.inductors:
                pool.append(self.inductors[k])
            seen: set = set()
            for w in pool:
                if w.element.matrix != target or id(w) in seen:
                    continue
                seen.add(id(w))
                out = burau_eval_trunc(commutator(shift, w.word), k + 3)
                if out.depth_bound() < k + 2:
                    raise LibraryIntegrityError(
                        f"induction from degree {k} lost depth")
                diff = out.coefficient(k + 2) - target
                if not _two_g_lattice(self.n, k + 2).contains(diff.vec()):
                    raise LibraryIntegrityError(
                        f"induction from degree {k} misses the congruence")

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "maxDegree": self.max_degree,
            "degrees": {str(k): [w.to_json() for w in self.per_degree[k]]
                        for k in range(1, self.max_degree + 1)},
            "inductors": {str(k): w.to_json() for k, w in self.inductors.items()},
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @staticmethod
    def from_json(data: dict, trust: bool = False) -> "WitnessLibrary":
        n = int(data["n"])
        max_degree = int(data["maxDegree"])
        per_degree = {k: [Witness.from_json(w, n) for w in data["degrees"][str(k)]]
                      for k in range(1, max_degree + 1)}
        inductors = {int(k): Witness.from_json(w, n)
                     for k, w in data.get("inductors", {}).items()}
        lib = WitnessLibrary(n, max_degree, per_degree, inductors)
        if not trust:
            lib.verify()
        return lib

    @staticmethod
    def load(path: str, trust: bool = False) -> "WitnessLibrary":
        with open(path, "r", encoding="utf-8") as fh:
            return WitnessLibrary.from_json(json.load(fh), trust=trust)

    def __repr__(self) -> str:
        sizes = {k: len(v) for k, v in self.per_degree.items()}
        return f"WitnessLibrary(n={self.n}, maxDegree={self.max_degree}, sizes={sizes})"


def _induction_target(n: int) -> IntMatrix:
    return (gen_x(2, 4, n) - gen_x(2, 5, n)).matrix


_TWO_G_CACHE: dict[tuple[int, int], IntLattice] = {}


def _two_g_lattice(n: int, k: int) -> IntLattice:
    key = (n, k)
    if key not in _TWO_G_CACHE:
        _TWO_G_CACHE[key] = IntLattice(
            n * n, [tuple(2 * v for v in b.matrix.vec()) for b in g_basis(n, k)])
    return _TWO_G_CACHE[key]


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def _alpha_seed(n: int) -> GradedElement:
    return GradedElement(3, (gen_x(2, 4, n) - gen_x(1, 3, n)).matrix)


def _degree_candidates(n: int, k: int, per_degree: dict[int, list[Witness]],
                       inductors: dict[int, Witness],
                       raw_inductor: Witness | None) -> Iterator[tuple[IntMatrix, BraidWord]]:
    """Deterministic candidate stream (predicted coefficient, word).

    Predictions cost no matrix evaluation: conjugates transform the leading
    coefficient by the permutation action exactly, and a commutator against
    a depth-1 word brackets the leading coefficients exactly.  Every
    accepted candidate is re-evaluated before storage.
    """
    if k == 1:
        for i, j in _pairs(n):
            yield gen_x(i, j, n).matrix, pure_gen(n, i, j)
    elif k == 2:
        pairs = _pairs(n)
        for a in pairs:
            for b in pairs:
                if a != b and len(set(a) & set(b)) == 1:
                    pred = gen_x(*a, n).matrix.commutator(gen_x(*b, n).matrix)
                    yield pred, commutator(pure_gen(n, *a), pure_gen(n, *b))
    elif k == 3:
        seed_word = alpha_word(n)
        seed = _alpha_seed(n)
        for pi in all_perms(n):
            pred = sn_act(pi, seed).matrix
            yield pred, _conjugate(perm_lift(pi), seed_word)
    else:
        if k % 2 == 1:
            assert raw_inductor is not None
            yield raw_inductor.element.matrix, raw_inductor.word
            for pi in all_perms(n):
                pred = sn_act(pi, raw_inductor.element).matrix
                yield pred, _conjugate(perm_lift(pi), raw_inductor.word)
        for w in per_degree[k - 1]:
            for i, j in _pairs(n):
                pred = gen_x(i, j, n).matrix.commutator(w.element.matrix)
                yield pred, commutator(pure_gen(n, i, j), w.word)


def build_witness_library(n: int, max_degree: int, *,
                          n_cap: int = MAX_N,
                          degree_cap: int = MAX_DEGREE) -> WitnessLibrary:
    """Build and certify a witness library for n strands up to max_degree.

    The caps are soft runtime guards, overridable per call.  Raises
    SpanFailure when a degree cannot be spanned (always the case for
    n < 5; degree 3 needs the full orbit of a two-pair difference).
    """
    if n < 2:
        raise ValueError("need at least 2 strands")
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if n > n_cap or max_degree > degree_cap:
        raise ValueError(f"n={n}, K={max_degree} exceeds caps ({n_cap}, "
                         f"{degree_cap}); raise n_cap/degree_cap to override")

    per_degree: dict[int, list[Witness]] = {}
    inductors: dict[int, Witness] = {}
    dim = n * n

    for k in range(1, max_degree + 1):
        if k == 3 and n < 4:
            raise SpanFailure(3, "the depth-3 seed word needs at least 4 strands")
        if k % 2 == 1 and k >= 5 and n < 5:
            raise SpanFailure(k, "the induction word needs at least 5 strands")

        raw_inductor = None
        if k % 2 == 1 and k >= 5:
            word = commutator(_a25sq_a45(n), inductors[k - 2].word)
            m = burau_eval_trunc(word, k + 1)
            if m.depth_bound() < k:
                raise LibraryIntegrityError(f"induction word at degree {k} "
                                            f"has depth {m.depth_bound()}")
            coeff = m.coefficient(k)
            diff = coeff - _induction_target(n)
            if not _two_g_lattice(n, k).contains(diff.vec()):
                raise LibraryIntegrityError(
                    f"induction congruence fails at degree {k}")
            raw_inductor = Witness(word, GradedElement(k, coeff))

        target = g_lattice(n, k)
        chosen: list[Witness] = []
        vecs: list[tuple[int, ...]] = []
        span = IntLattice(dim, [])
        for pred, word in _degree_candidates(n, k, per_degree, inductors,
                                             raw_inductor):
            if span == target:
                break
            if pred.is_zero() or span.contains(pred.vec()):
                continue
            _verify_witness(word, k, pred)
            chosen.append(Witness(word, GradedElement(k, pred)))
            vecs.append(pred.vec())
            span = IntLattice(dim, vecs)
        if span != target:
            raise SpanFailure(k)
        per_degree[k] = chosen

        if k == 3:
            word = commutator(alpha_word(n), gen(n, 4))
            m = burau_eval_trunc(word, 4)
            if m.depth_bound() != 3 or m.coefficient(3) != _induction_target(n):
                raise LibraryIntegrityError("depth-3 inductor has the wrong "
                                            "coefficient")
            ind = Witness(word, GradedElement(3, _induction_target(n)))
            inductors[3] = ind
            per_degree[3].append(ind)
        elif k % 2 == 1 and k >= 5:
            lib_sofar = WitnessLibrary(n, k, per_degree, {})
            diff = raw_inductor.element.matrix - _induction_target(n)
            corr = solve_in_degree(lib_sofar, GradedElement(k, diff))
            word = concat(raw_inductor.word, corr.inverse())
            _verify_witness(word, k, _induction_target(n))
            ind = Witness(word, GradedElement(k, _induction_target(n)))
            inductors[k] = ind
            per_degree[k].append(ind)

    lib = WitnessLibrary(n, max_degree, per_degree, inductors)
    lib.verify_induction()
    return lib


_LIBRARY_CACHE: dict[tuple[int, int], WitnessLibrary] = {}


def default_library(n: int, max_degree: int) -> WitnessLibrary:
    key = (n, max_degree)
    if key not in _LIBRARY_CACHE:
        _LIBRARY_CACHE[key] = build_witness_library(n, max_degree)
    return _LIBRARY_CACHE[key]


def solve_in_degree(lib: WitnessLibrary, t: GradedElement) -> BraidWord:
    """A braid word of depth >= k whose degree-k coefficient is t.

    Returns the product of witness powers for the canonical HNF solution.
    Valid because coefficients add under products of depth->=k elements.
    """
    k = t.degree
    if t.n != lib.n:
        raise ValueError("size mismatch between target and library")
    witnesses = lib.witnesses(k)
    if t.matrix.is_zero():
        return empty_word(lib.n)
    coeffs = IntLattice(lib.n * lib.n,
                        [w.element.matrix.vec() for w in witnesses]).solve(
                            t.matrix.vec())
    if coeffs is None:
        raise NoSolution(f"target is not in the degree-{k} coefficient lattice")
    parts: list[BraidWord] = []
    for c, w in zip(coeffs, witnesses):
        if c == 0:
            continue
        parts.append(w.word if c == 1 else Power(lib.n, w.word, c))
    return concat(*parts) if parts else empty_word(lib.n)


class StepRecord:
    """One degree of the approximation loop."""

    __slots__ = ("degree", "coefficients", "residual_depth")

    def __init__(self, degree: int, coefficients: tuple[int, ...],
                 residual_depth: int):
        self.degree = degree
        self.coefficients = coefficients
        self.residual_depth = residual_depth

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "coefficients": list(self.coefficients),
                "residualDepth": self.residual_depth}

    def __repr__(self) -> str:
        return (f"StepRecord(degree={self.degree}, "
                f"residual_depth={self.residual_depth})")


class ApproximationResult:
    __slots__ = ("word", "achieved_depth", "steps", "n", "precision")

    def __init__(self, word: BraidWord, achieved_depth: int | float,
                 steps: list[StepRecord], n: int, precision: int):
        self.word = word
        self.achieved_depth = achieved_depth
        self.steps = steps
        self.n = n
        self.precision = precision

    def residual_depth(self, gamma: LaurentMatrix, precision: int | None = None) -> int:
        """Recompute depth(gamma^-1 beta(word)) from scratch, truncated."""
        prec = precision if precision is not None else self.precision
        r = gamma.truncate(prec).inverse() * burau_eval_trunc(self.word, prec)
        return r.depth_bound()

    def to_json(self) -> dict:
        depth = ("infinity" if self.achieved_depth == math.inf
                 else self.achieved_depth)
        return {"word": word_format(self.word), "achievedDepth": depth,
                "perStep": [s.to_json() for s in self.steps]}

    def __repr__(self) -> str:
        return (f"ApproximationResult(achieved_depth={self.achieved_depth}, "
                f"steps={len(self.steps)})")


def approximate(gamma: GammaElement | LaurentMatrix, max_degree: int | None = None,
                library: WitnessLibrary | None = None,
                exact_check: bool | None = None) -> ApproximationResult:
    """A braid word whose image agrees with gamma through degree max_degree.

    Reads only the matrix of gamma, never any provenance word.  All
    residual arithmetic runs in the truncated ring at precision K+1.  The
    exact recheck (comparing beta(word) to gamma entrywise over the Laurent
    ring) defaults to on for K <= 4 and off above; it is the only path that
    can certify an infinite achieved depth.
    """
    matrix = gamma.matrix if isinstance(gamma, GammaElement) else gamma
    report = gamma_check(matrix)
    if not report:
        raise NotInGamma(report)
    n = matrix.n

    if library is None:
        if max_degree is None:
            raise ValueError("need max_degree when no library is given")
        library = default_library(n, max_degree)
    if max_degree is None:
        max_degree = library.max_degree
    if library.n != n:
        raise ValueError("library is for a different strand count")
    if max_degree > library.max_degree:
        raise ValueError(f"max_degree {max_degree} exceeds library degree "
                         f"{library.max_degree}")

    precision = max_degree + 1
    images = matrix.at_one().permutation_images()
    word: BraidWord = perm_lift(Perm(images))
    g_inv = matrix.truncate(precision).inverse()
    residual = g_inv * burau_eval_trunc(word, precision)
    if residual.depth_bound() < 1:
        raise DepthRegression("permutation step left a nonzero constant term")
    steps = [StepRecord(0, images, residual.depth_bound())]

    for k in range(1, max_degree + 1):
        if residual.depth_bound() < k:
            raise DepthRegression(f"entered degree {k} with depth "
                                  f"{residual.depth_bound()}")
        t = residual.coefficient(k)
        witnesses = library.witnesses(k)
        if t.is_zero():
            steps.append(StepRecord(k, (0,) * len(witnesses),
                                    residual.depth_bound()))
            continue
        coeffs = IntLattice(n * n,
                            [w.element.matrix.vec() for w in witnesses]).solve(
                                t.vec())
        if coeffs is None:
            raise NoSolution(f"residual coefficient at degree {k} is outside "
                             "the library span")
        parts = [w.word if c == 1 else Power(n, w.word, c)
                 for c, w in zip(coeffs, witnesses) if c != 0]
        correction = concat(*parts) if parts else empty_word(n)
        word = concat(word, correction.inverse())
        residual = residual * burau_eval_trunc(correction, precision).inverse()
        if residual.depth_bound() < k + 1:
            raise DepthRegression(f"degree-{k} step did not clear its "
                                  "coefficient")
        steps.append(StepRecord(k, tuple(coeffs), residual.depth_bound()))

    achieved: int | float = residual.depth_bound()
    assert achieved >= max_degree + 1

    run_exact = exact_check if exact_check is not None else max_degree <= 4
    if run_exact or node_count(word) <= 1:
        diff = burau_eval(word) - matrix
        exact_depth = min(diff[(i, j)].s_valuation()
                          for i in range(n) for j in range(n))
        if exact_depth == math.inf:
            achieved = math.inf
        elif exact_depth < max_degree + 1:
            raise DepthRegression("exact recheck contradicts the truncated "
                                  f"depth claim: {exact_depth}")
    return ApproximationResult(word, achieved, steps, n, precision)
