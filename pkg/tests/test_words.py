"""Word construction, the parser grammar, and permutation plumbing."""

import random

import pytest

from burau.rep import burau_eval
from burau.linalg import LaurentMatrix
from burau.words import (Commutator, IndexOutOfRange,
                         Literal, ParseError, Perm, Power, all_perms,
                         alpha_word, commutator, concat, delta_word,
                         empty_word, flatten, gen, letter_bound, node_count,
                         parse_word, perm_lift, pure_gen, word_format,
                         word_permutation)


def rand_word(rng, n, length):
    return concat(*(gen(n, rng.randint(1, n - 1), rng.choice((1, -1)))
                    for _ in range(length)))


def eval_equal(a, b):
    return burau_eval(a) == burau_eval(b)


# ---------------------------------------------------------------------------
# parsing


def test_parse_literal_sequence():
    w = parse_word("s1 s2^-1", 3, {})
    assert flatten(w) == ((1, 1), (2, -1))


def test_parse_capital_inverse():
    assert flatten(parse_word("S2", 3, {})) == ((2, -1),)


def test_precedence_power_binds_tightest():
    assert flatten(parse_word("s1 s2^2", 3, {})) == ((1, 1), (2, 1), (2, 1))
    assert flatten(parse_word("(s1 s2)^2", 3, {})) == ((1, 1), (2, 1),
                                                       (1, 1), (2, 1))


def test_parse_commutator_and_negative_power():
    w = parse_word("[s1,s2]^-1", 3, {})
    assert eval_equal(w, commutator(gen(3, 1), gen(3, 2)).inverse())


def test_parse_alpha_literal():
    text = "[A13,A23][A24,A14][A14,A34][A34,A24]"
    assert eval_equal(parse_word(text, 5, {}), alpha_word(5))


def test_parse_delta_with_binding():
    bindings = {"ALPHA": alpha_word(5)}
    w = parse_word("[A25^2 A45, [ALPHA, s4]]", 5, bindings)
    assert eval_equal(w, delta_word(5))


def test_parse_parenthesized_indices():
    w = parse_word("A(10)(12)", 13, {})
    assert eval_equal(w, pure_gen(13, 10, 12))
    assert flatten(parse_word("s(11)", 13, {})) == ((11, 1),)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_word("^2", 3, {})
    assert info.value.pos == 0
    with pytest.raises(ParseError):
        parse_word("[s1 s2", 3, {})
    with pytest.raises(ParseError):
        parse_word("s1 UNBOUND", 3, {})


def test_parse_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        parse_word("s5", 3, {})
    with pytest.raises(IndexOutOfRange):
        parse_word("A14", 3, {})


def test_format_parse_round_trip():
    rng = random.Random(301)
    for _ in range(15):
        base = rand_word(rng, 4, 3)
        w = Commutator(4, Power(4, base, rng.randint(-2, 3)),
                       concat(base, gen(4, 2)).inverse())
        again = parse_word(word_format(w), 4, {})
        assert eval_equal(w, again)


# ---------------------------------------------------------------------------
# constructors and group identities


def test_empty_word_is_identity():
    assert burau_eval(empty_word(4)) == LaurentMatrix.identity(4)
    assert flatten(empty_word(4)) == ()


def test_commutator_with_self_is_identity():
    rng = random.Random(302)
    w = rand_word(rng, 4, 5)
    assert burau_eval(commutator(w, w)) == LaurentMatrix.identity(4)


def test_inverse_reverses_letters():
    w = concat(gen(3, 1), gen(3, 2))
    assert flatten(w.inverse()) == ((2, -1), (1, -1))


def test_far_commutation():
    assert burau_eval(commutator(gen(4, 1), gen(4, 3))) == \
        LaurentMatrix.identity(4)


def test_strand_count_mismatch_rejected():
    with pytest.raises(ValueError):
        concat(gen(3, 1), gen(4, 1))


def test_power_matches_repetition():
    w = Power(3, gen(3, 1), 3)
    assert flatten(w) == ((1, 1),) * 3
    assert flatten(Power(3, gen(3, 1), -2)) == ((1, -1),) * 2
    assert flatten(Power(3, gen(3, 1), 0)) == ()


def test_free_reduction_at_flatten():
    w = concat(gen(3, 1), gen(3, 1, -1), gen(3, 2))
    assert flatten(w) == ((2, 1),)


def test_dag_eval_matches_flattened_eval():
    rng = random.Random(303)
    for _ in range(10):
        base = rand_word(rng, 4, 3)
        w = commutator(Power(4, base, 2), concat(base, gen(4, 3)))
        letters = [gen(4, i, s) for i, s in flatten(w)]
        literal = concat(*letters) if letters else empty_word(4)
        assert eval_equal(w, literal)


def test_node_and_letter_counts():
    base = gen(5, 1)
    w = Power(5, Power(5, base, 10), 10)
    assert node_count(w) <= 4
    assert letter_bound(w) == 100


# ---------------------------------------------------------------------------
# pure-braid generators


def test_pure_gen_convention():
    assert flatten(pure_gen(3, 1, 2)) == ((1, 1), (1, 1))
    assert flatten(pure_gen(3, 1, 3)) == ((2, 1), (1, 1), (1, 1), (2, -1))


def test_pure_gen_linear_coefficient_is_x():
    from burau.liealg import gen_x
    for n in range(2, 7):
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                coeffs = burau_eval(pure_gen(n, i, j)).s_expand(2)
                assert coeffs[1] == gen_x(i, j, n).matrix


def test_pure_gen_index_validation():
    with pytest.raises(ValueError):
        pure_gen(4, 3, 3)
    with pytest.raises(ValueError):
        pure_gen(4, 2, 5)


# ---------------------------------------------------------------------------
# permutations


def test_word_permutation_cases():
    assert word_permutation(gen(3, 1)) == Perm((2, 1, 3))
    assert word_permutation(pure_gen(4, 2, 4)).is_identity()
    # composition is left to right: first sigma1, then sigma2
    assert word_permutation(concat(gen(3, 1), gen(3, 2))).images == (3, 1, 2)


def test_word_permutation_homomorphism():
    rng = random.Random(304)
    for _ in range(20):
        u, v = rand_word(rng, 5, 4), rand_word(rng, 5, 4)
        assert word_permutation(concat(u, v)) == \
            word_permutation(u) * word_permutation(v)


def test_perm_lift_cases():
    assert flatten(perm_lift(Perm.identity(4))) == ()
    assert flatten(perm_lift(Perm((2, 1)))) == ((1, 1),)


def test_perm_lift_round_trip_all_of_s4():
    for pi in all_perms(4):
        lifted = perm_lift(pi)
        assert word_permutation(lifted) == pi
        assert all(s == 1 for _, s in flatten(lifted))


def test_perm_composition_convention():
    p = Perm((2, 1, 3))   # (1 2)
    q = Perm((1, 3, 2))   # (2 3)
    assert (p * q)(1) == q(p(1)) == 3
    assert (p * q).images == (3, 1, 2)
    assert p.inverse() * p == Perm.identity(3)
