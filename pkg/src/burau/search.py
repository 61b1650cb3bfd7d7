"""Bounded search for braid words of large s-adic depth.

Candidates are products of iterated commutators of a fixed pool of words.
The enumeration order is part of the contract: candidates are grouped by
template size (total number of pool-word leaves) ascending, and within one
size the sequence of terms is ordered by (size of term, index of term)
position by position.  Terms of size 1 are the pool words in pool order;
terms of size s split as [L, R] with the size of L ascending, then the
index of L, then the index of R.  Structurally equal left and right halves
are skipped (the commutator is trivial), as are trees nested deeper than
the configured bound.

Evaluation runs in the truncated ring.  The hot path packs coefficient
matrices into int64 arrays and multiplies whole leaf batches at once; a
magnitude guard reruns any batch whose entries could overflow through the
exact integer path (the rerun is also what every reported hit gets anyway,
plus an exact Laurent evaluation for short words).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .liealg import GradedElement
from .linalg import IntMatrix, perm_matrix
from .rep import burau_eval, burau_eval_trunc
from .words import (BraidWord, all_perms, commutator, concat, letter_bound,
                    parse_word, word_format)

_OVERFLOW_GUARD = 1 << 40


class BudgetExhausted(Exception):
    """Raised nowhere; searches report exhaustion as a flag, but callers
    that want to treat it as an error can raise this themselves."""


class SearchConfig:
    __slots__ = ("n", "target_depth", "pool", "max_nesting", "max_terms",
                 "precision", "result_cap", "budget", "exact_cap")

    def __init__(self, n: int, target_depth: int, pool: Sequence[BraidWord],
                 max_nesting: int = 1, max_terms: int = 1,
                 precision: int | None = None, result_cap: int = 100,
                 budget: int | None = None, exact_cap: int = 4096):
        self.n = n
        self.target_depth = target_depth
        self.pool = tuple(pool)
        self.max_nesting = max_nesting
        self.max_terms = max_terms
        self.precision = precision if precision is not None else target_depth + 1
        self.result_cap = result_cap
        self.budget = budget
        self.exact_cap = exact_cap
        if not self.pool:
            raise ValueError("empty generator pool")
        if any(w.n != n for w in self.pool):
            raise ValueError("pool words disagree with n")
        if self.precision <= target_depth:
            raise ValueError("precision must exceed target_depth")
        if target_depth < 1 or max_terms < 1 or max_nesting < 0:
            raise ValueError("bounds must be positive")

    def to_json(self) -> dict:
        return {"n": self.n, "targetDepth": self.target_depth,
                "pool": [word_format(w) for w in self.pool],
                "maxNesting": self.max_nesting, "maxTerms": self.max_terms,
                "precision": self.precision, "resultCap": self.result_cap,
                "budget": self.budget, "exactCap": self.exact_cap}

    @staticmethod
    def from_json(data: dict, bindings=None) -> "SearchConfig":
        n = int(data["n"])
        pool = [parse_word(w, n, bindings) for w in data["pool"]]
        return SearchConfig(
            n, int(data["targetDepth"]), pool,
            max_nesting=int(data.get("maxNesting", 1)),
            max_terms=int(data.get("maxTerms", 1)),
            precision=data.get("precision"),
            result_cap=int(data.get("resultCap", 100)),
            budget=data.get("budget"),
            exact_cap=int(data.get("exactCap", 4096)))


class SearchHit:
    __slots__ = ("word", "depth", "leading", "index")

    def __init__(self, word: BraidWord, depth: int, leading: GradedElement,
                 index: int):
        self.word = word
        self.depth = depth
        self.leading = leading
        self.index = index

    def to_json(self) -> dict:
        return {"word": word_format(self.word), "depth": self.depth,
                "leading": self.leading.to_json(), "index": self.index}

    def __repr__(self) -> str:
        return f"SearchHit(depth={self.depth}, index={self.index})"


class SearchOutcome:
    __slots__ = ("hits", "candidates", "budget_exhausted")

    def __init__(self, hits: list[SearchHit], candidates: int,
                 budget_exhausted: bool):
        self.hits = hits
        self.candidates = candidates
        self.budget_exhausted = budget_exhausted

    def __iter__(self):
        return iter(self.hits)

    def __len__(self) -> int:
        return len(self.hits)

    def to_json(self) -> dict:
        return {"hits": [h.to_json() for h in self.hits],
                "candidates": self.candidates,
                "budgetExhausted": self.budget_exhausted}

    def __repr__(self) -> str:
        return (f"SearchOutcome(hits={len(self.hits)}, "
                f"candidates={self.candidates}, "
                f"budget_exhausted={self.budget_exhausted})")


# ---------------------------------------------------------------------------
# commutator templates

Tree = object  # int (pool index) or (Tree, Tree)


def _nesting(tree: Tree) -> int:
    if isinstance(tree, int):
        return 0
    return 1 + max(_nesting(tree[0]), _nesting(tree[1]))


def _terms_by_size(cfg: SearchConfig) -> list[list[Tree]]:
    """terms[s] = size-s commutator trees, in contract order; terms[0] unused."""
    max_size = 2 ** cfg.max_nesting
    terms: list[list[Tree]] = [[], list(range(len(cfg.pool)))]
    for s in range(2, max_size + 1):
        level: list[Tree] = []
        for ls in range(1, s):
            for left in terms[ls]:
                for right in terms[s - ls]:
                    if left == right:
                        continue
                    tree = (left, right)
                    if _nesting(tree) <= cfg.max_nesting:
                        level.append(tree)
        terms.append(level)
    return terms


def _tree_word(tree: Tree, cfg: SearchConfig) -> BraidWord:
    if isinstance(tree, int):
        return cfg.pool[tree]
    return commutator(_tree_word(tree[0], cfg), _tree_word(tree[1], cfg))


# ---------------------------------------------------------------------------
# truncated arithmetic on int64 stacks: shape (precision, n, n)


def _np_from_trunc(m) -> np.ndarray:
    p, n = m.precision, m.n
    out = np.zeros((p, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            out[:, i, j] = m.rows[i][j].coeffs()
    return out


def _np_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = a.shape[0]
    out = np.zeros_like(a)
    for i in range(p):
        for j in range(p - i):
            out[i + j] += a[i] @ b[j]
    return out


def _np_mul_batch(prefix: np.ndarray, batch: np.ndarray) -> np.ndarray:
    """prefix (p,n,n) times every element of batch (T,p,n,n)."""
    p = prefix.shape[0]
    out = np.zeros_like(batch)
    for i in range(p):
        for j in range(p - i):
            out[:, i + j] += prefix[i] @ batch[:, j]
    return out


# ---------------------------------------------------------------------------
# orbit-canonical deduplication


def _orbit_key(m: IntMatrix, perm_mats: list[IntMatrix]) -> tuple[int, ...]:
    best: tuple[int, ...] | None = None
    for p in perm_mats:
        conj = p * m * p.transpose()
        for cand in (conj.vec(), (-conj).vec()):
            if best is None or cand < best:
                best = cand
    return best


# ---------------------------------------------------------------------------
# search


def search_deep(cfg: SearchConfig) -> SearchOutcome:
    """Enumerate, evaluate, and verify candidates; see the module docstring
    for the ordering contract.  Results are deduplicated by the canonical
    representative of the leading coefficient under sign and the
    permutation action, keeping the earliest candidate."""
    n, precision, target = cfg.n, cfg.precision, cfg.target_depth
    terms = _terms_by_size(cfg)
    max_term_size = len(terms) - 1
    term_words = [[_tree_word(t, cfg) for t in level] for level in terms]
    term_arrays = [
        np.stack([_np_from_trunc(burau_eval_trunc(w, precision))
                  for w in level]) if level else None
        for level in term_words]

    ident = np.zeros((precision, n, n), dtype=np.int64)
    ident[0] = np.eye(n, dtype=np.int64)

    counter = 0
    exhausted = False
    raw_hits: list[tuple[int, tuple[Tree, ...], int]] = []
    threads = max(1, int(os.environ.get("BURAU_THREADS", "1") or 1))
    executor = (ThreadPoolExecutor(max_workers=threads) if threads > 1 else None)
    pending: list = []

    def _assemble(seq: tuple[Tree, ...]) -> BraidWord:
        return concat(*[_tree_word(t, cfg) for t in seq])

    def scan_batch(start: int, prefix_trees: tuple[Tree, ...], out: np.ndarray,
                   size: int, limit: int) -> None:
        if np.abs(out).max() >= _OVERFLOW_GUARD:
            for t in range(limit):
                seq = prefix_trees + (terms[size][t],)
                m = burau_eval_trunc(_assemble(seq), precision)
                d = m.depth_bound()
                if target <= d < precision:
                    raw_hits.append((start + t, seq, d))
            return
        const_ok = (out[:limit, 0] == ident[0]).all(axis=(1, 2))
        if target > 1:
            const_ok &= (out[:limit, 1:target] == 0).all(axis=(1, 2, 3))
        for t in np.nonzero(const_ok)[0]:
            depth = None
            for c in range(target, precision):
                if out[t, c].any():
                    depth = c
                    break
            if depth is not None:
                raw_hits.append((start + int(t), prefix_trees + (terms[size][t],),
                                 depth))

    def flush(everything: bool = True) -> None:
        # scan results in submission order so hit order never depends on the
        # worker schedule
        while pending and (everything or len(pending) > 4 * threads):
            fut, start, prefix_trees, size, limit = pending.pop(0)
            scan_batch(start, prefix_trees, fut.result(), size, limit)

    def emit(remaining: int, slots: int, prefix_trees: tuple[Tree, ...],
             prefix: np.ndarray) -> bool:
        """Enumerate continuations; returns False when the budget is hit."""
        nonlocal counter, exhausted
        for size in range(1, min(remaining, max_term_size) + 1):
            level = terms[size]
            if not level:
                continue
            if size == remaining:
                limit = len(level)
                if cfg.budget is not None and counter + limit > cfg.budget:
                    limit = cfg.budget - counter
                    exhausted = True
                if limit > 0:
                    if executor is None:
                        scan_batch(counter, prefix_trees,
                                   _np_mul_batch(prefix, term_arrays[size][:limit]),
                                   size, limit)
                    else:
                        pending.append((executor.submit(_np_mul_batch, prefix,
                                                        term_arrays[size][:limit]),
                                        counter, prefix_trees, size, limit))
                        flush(everything=False)
                    counter += limit
                if exhausted:
                    return False
            elif slots > 1:
                for idx in range(len(level)):
                    nxt = _np_mul(prefix, term_arrays[size][idx])
                    if np.abs(nxt).max() >= _OVERFLOW_GUARD:
                        nxt = _np_from_trunc(burau_eval_trunc(
                            _assemble(prefix_trees + (level[idx],)), precision))
                    if not emit(remaining - size, slots - 1,
                                prefix_trees + (level[idx],), nxt):
                        return False
        return True

    max_total = cfg.max_terms * max_term_size
    try:
        for total in range(1, max_total + 1):
            if not emit(total, cfg.max_terms, (), ident):
                break
        flush()
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    perm_mats = [perm_matrix(p) for p in all_perms(n)]
    hits: list[SearchHit] = []
    seen: set[tuple[int, ...]] = set()
    for index, seq, depth in raw_hits:
        word = _assemble(seq)
        m = burau_eval_trunc(word, precision)
        if m.depth_bound() != depth:
            raise AssertionError("batched evaluation disagrees with recheck")
        coeff = m.coefficient(depth)
        if letter_bound(word) <= cfg.exact_cap:
            if burau_eval(word).depth() != depth:
                raise AssertionError("exact depth disagrees with truncated")
        key = _orbit_key(coeff, perm_mats)
        if key in seen:
            continue
        seen.add(key)
        hits.append(SearchHit(word, depth, GradedElement(depth, coeff), index))
        if len(hits) >= cfg.result_cap:
            break
    return SearchOutcome(hits, counter, exhausted)


# ---------------------------------------------------------------------------
# the two published-element reconstruction configs


def alpha_search_config(budget: int = 10 ** 6) -> SearchConfig:
    """Products of up to four commutators of band generators on the first
    four strands; the depth-3 element alpha lives in this space."""
    from .words import pure_gen
    pool = [pure_gen(5, i, j)
            for i in range(1, 4) for j in range(i + 1, 5)]
    return SearchConfig(5, 3, pool, max_nesting=1, max_terms=4,
                        precision=4, budget=budget)


def delta_search_config(budget: int = 10 ** 5) -> SearchConfig:
    """Single commutator templates of nesting two over the three-word pool
    that produces the depth-5 element delta."""
    from .words import Power, alpha_word, gen, pure_gen
    a25sq_a45 = concat(Power(5, pure_gen(5, 2, 5), 2), pure_gen(5, 4, 5))
    pool = [alpha_word(5), gen(5, 4), a25sq_a45]
    return SearchConfig(5, 5, pool, max_nesting=2, max_terms=1,
                        precision=6, budget=budget)
