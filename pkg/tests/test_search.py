"""Commutator-template search: ordering, dedup, budgets, verification.

Hit indices are part of the enumeration contract, so they are frozen
literally; the leading coefficients are checked against the graded
generator combinations they must equal.
"""

import pytest

from burau.liealg import gen_x
from burau.search import (SearchConfig, alpha_search_config,
                          delta_search_config, search_deep)
from burau.words import (alpha_word, commutator, delta_word, flatten, gen,
                         pure_gen)


def test_single_word_pool_finds_itself():
    cfg = SearchConfig(5, 1, [pure_gen(5, 1, 2)], max_nesting=0,
                       max_terms=1, precision=2)
    out = search_deep(cfg)
    assert out.candidates == 1
    assert not out.budget_exhausted
    assert len(out.hits) == 1
    hit = out.hits[0]
    assert hit.index == 0
    assert hit.depth == 1
    assert flatten(hit.word) == flatten(pure_gen(5, 1, 2))
    assert hit.leading == gen_x(1, 2, 5)


def test_linked_pair_commutator_lands_at_depth_three():
    # A_13 and A_24 have disjoint index pairs, so the degree-2 bracket of
    # their coefficients vanishes and the commutator drops to depth 3
    cfg = SearchConfig(5, 3, [pure_gen(5, 1, 3), pure_gen(5, 2, 4)],
                       max_nesting=1, max_terms=1, precision=4)
    out = search_deep(cfg)
    # candidates: A_13, A_24, [A_13, A_24], [A_24, A_13]
    assert out.candidates == 4
    assert len(out.hits) == 1
    hit = out.hits[0]
    assert hit.index == 2
    assert hit.depth == 3
    rect = (gen_x(1, 2, 5) - gen_x(1, 4, 5)
            - gen_x(2, 3, 5) + gen_x(3, 4, 5)).matrix
    assert hit.leading.matrix == rect
    assert flatten(hit.word) == flatten(commutator(pure_gen(5, 1, 3),
                                                   pure_gen(5, 2, 4)))


def test_reversed_commutator_is_deduplicated():
    # [b, a] negates the leading coefficient of [a, b]; sign is part of the
    # orbit key, so only the earlier candidate is reported
    cfg = SearchConfig(5, 2, [pure_gen(5, 1, 2), pure_gen(5, 1, 3)],
                       max_nesting=1, max_terms=1, precision=3)
    out = search_deep(cfg)
    assert out.candidates == 4
    assert [h.index for h in out.hits] == [2]
    assert out.hits[0].depth == 2


def test_delta_configuration_reproduces_delta():
    out = search_deep(delta_search_config())
    assert out.candidates == 75
    assert not out.budget_exhausted
    assert [h.index for h in out.hits] == [21, 22, 47, 52]
    assert all(h.depth == 5 for h in out.hits)
    first = out.hits[0]
    assert flatten(first.word) == flatten(delta_word(5))
    d5 = first.leading.matrix
    assert d5.rows == ((0, 2, 0, 2, -4),
                       (2, -2, -2, 1, 1),
                       (0, -2, 0, -2, 4),
                       (2, 1, -2, 1, -2),
                       (-4, 1, 4, -2, 1))


def test_alpha_configuration_budget_exhaustion():
    out = search_deep(alpha_search_config(budget=2000))
    assert out.budget_exhausted
    assert out.candidates == 2000
    # the first depth-3 element in this enumeration is the linked-pair
    # commutator [A_13, A_24]
    assert [h.index for h in out.hits] == [50]
    assert flatten(out.hits[0].word) == flatten(
        commutator(pure_gen(5, 1, 3), pure_gen(5, 2, 4)))


def test_threaded_search_matches_single_threaded(monkeypatch):
    cfg = delta_search_config(budget=30)
    monkeypatch.delenv("BURAU_THREADS", raising=False)
    base = search_deep(cfg)
    monkeypatch.setenv("BURAU_THREADS", "3")
    threaded = search_deep(cfg)
    assert base.to_json() == threaded.to_json()
    assert base.budget_exhausted
    assert [h.index for h in base.hits] == [21, 22]


def test_exact_cap_zero_skips_nothing_visible():
    # with the cap at zero no hit gets the exact Laurent recheck; the
    # reported outcome must not change
    cfg = SearchConfig(5, 3, [pure_gen(5, 1, 3), pure_gen(5, 2, 4)],
                       max_nesting=1, max_terms=1, precision=4, exact_cap=0)
    out = search_deep(cfg)
    assert [h.index for h in out.hits] == [2]


def test_result_cap_truncates_hits():
    cfg = delta_search_config(budget=60)
    capped = SearchConfig.from_json({**cfg.to_json(), "resultCap": 1})
    out = search_deep(capped)
    assert [h.index for h in out.hits] == [21]


def test_outcome_iteration_and_json():
    out = search_deep(SearchConfig(5, 1, [pure_gen(5, 1, 2)],
                                   max_nesting=0, max_terms=1, precision=2))
    assert len(out) == 1
    assert [h.depth for h in out] == [1]
    data = out.to_json()
    assert data["candidates"] == 1
    assert data["budgetExhausted"] is False
    assert data["hits"][0]["index"] == 0
    assert data["hits"][0]["depth"] == 1


def test_config_json_round_trip():
    cfg = alpha_search_config(budget=12345)
    again = SearchConfig.from_json(cfg.to_json())
    assert again.n == cfg.n
    assert again.target_depth == cfg.target_depth
    assert again.max_nesting == cfg.max_nesting
    assert again.max_terms == cfg.max_terms
    assert again.precision == cfg.precision
    assert again.budget == 12345
    assert again.exact_cap == cfg.exact_cap
    assert [flatten(w) for w in again.pool] == [flatten(w) for w in cfg.pool]


def test_config_defaults_and_shapes():
    a = alpha_search_config()
    assert (a.n, a.target_depth, a.max_nesting, a.max_terms) == (5, 3, 1, 4)
    assert len(a.pool) == 6
    assert a.budget == 10 ** 6
    d = delta_search_config()
    assert (d.n, d.target_depth, d.max_nesting, d.max_terms) == (5, 5, 2, 1)
    assert len(d.pool) == 3
    assert flatten(d.pool[0]) == flatten(alpha_word(5))
    assert flatten(d.pool[1]) == flatten(gen(5, 4))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(5, 1, [])
    with pytest.raises(ValueError):
        SearchConfig(5, 1, [pure_gen(4, 1, 2)])
    with pytest.raises(ValueError):
        SearchConfig(5, 3, [pure_gen(5, 1, 2)], precision=3)
    with pytest.raises(ValueError):
        SearchConfig(5, 0, [pure_gen(5, 1, 2)])
