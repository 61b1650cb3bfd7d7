import math
import random

import pytest

from burau.laurent import LaurentPoly, T, T_INV
from burau.liealg import gen_x
from burau.linalg import IntMatrix, LaurentMatrix, perm_matrix
from burau.rep import (GAMMA_CONDITIONS, DepthTooSmall, GammaElement,
                       burau_eval, burau_eval_trunc, burau_gamma, burau_gen,
                       form_j, gamma_check, gamma_coeff, ones_row, vector_v)
from burau.words import (alpha_word, commutator, concat, delta_word, gen,
                         pure_gen, word_permutation)

ZERO, ONE = LaurentPoly(0), LaurentPoly(1)

DELTA_COEFF = IntMatrix([[0, 2, 0, 2, -4],
                         [2, -2, -2, 1, 1],
                         [0, -2, 0, -2, 4],
                         [2, 1, -2, 1, -2],
                         [-4, 1, 4, -2, 1]])


def rand_word(rng, n, length):
    return concat(*(gen(n, rng.randint(1, n - 1), rng.choice((1, -1)))
                    for _ in range(length)))


# ---------------------------------------------------------------------------
# generators


def test_generator_block_n2():
    assert burau_gen(2, 1) == LaurentMatrix([[1 - T, ONE], [T, ZERO]])


def test_generator_block_n3_offset():
    expect = LaurentMatrix([[ONE, ZERO, ZERO],
                            [ZERO, 1 - T, ONE],
                            [ZERO, T, ZERO]])
    assert burau_gen(3, 2) == expect


def test_generator_inverse_block():
    assert burau_gen(2, 1, -1) == LaurentMatrix([[ZERO, T_INV],
                                                 [ONE, 1 - T_INV]])
    assert burau_gen(2, 1) * burau_gen(2, 1, -1) == LaurentMatrix.identity(2)


def test_generator_blocks_all_positions():
    for n in range(2, 7):
        for i in range(1, n):
            m = burau_gen(n, i)
            for r in range(n):
                for c in range(n):
                    if (r, c) == (i - 1, i - 1):
                        assert m[r, c] == 1 - T
                    elif (r, c) == (i - 1, i):
                        assert m[r, c] == ONE
                    elif (r, c) == (i, i - 1):
                        assert m[r, c] == T
                    elif (r, c) == (i, i):
                        assert m[r, c] == ZERO
                    else:
                        assert m[r, c] == (ONE if r == c else ZERO)


def test_generator_index_validation():
    with pytest.raises(ValueError):
        burau_gen(3, 3)
    with pytest.raises(ValueError):
        burau_gen(3, 0)


def test_braid_and_commutation_relations():
    for n in range(2, 7):
        for i in range(1, n - 1):
            lhs = burau_gen(n, i) * burau_gen(n, i + 1) * burau_gen(n, i)
            rhs = burau_gen(n, i + 1) * burau_gen(n, i) * burau_gen(n, i + 1)
            assert lhs == rhs
        for i in range(1, n):
            for j in range(i + 2, n):
                assert burau_gen(n, i) * burau_gen(n, j) == \
                    burau_gen(n, j) * burau_gen(n, i)


# ---------------------------------------------------------------------------
# evaluation


def test_empty_word_evaluates_to_identity():
    from burau.words import empty_word
    assert burau_eval(empty_word(5)) == LaurentMatrix.identity(5)


def test_eval_is_multiplicative():
    rng = random.Random(401)
    for _ in range(10):
        u, v = rand_word(rng, 4, 5), rand_word(rng, 4, 5)
        assert burau_eval(concat(u, v)) == burau_eval(u) * burau_eval(v)


def test_trunc_eval_matches_exact():
    rng = random.Random(402)
    for _ in range(8):
        w = rand_word(rng, 5, 6)
        assert burau_eval_trunc(w, 4) == burau_eval(w).truncate(4)


def test_eval_handles_negative_powers_of_composites():
    from burau.words import Power
    w = Power(4, concat(gen(4, 1), gen(4, 2)), -3)
    base_inv = (burau_eval(gen(4, 1)) * burau_eval(gen(4, 2))).inverse()
    assert burau_eval(w) == base_inv * base_inv * base_inv


def test_alpha_depth():
    assert burau_eval(alpha_word(5)).depth() == 3


def test_delta_depth():
    assert burau_eval_trunc(delta_word(5), 6).depth_bound() == 5


# ---------------------------------------------------------------------------
# invariant data


def test_vector_v():
    assert vector_v(3) == (T, T ** 2, T ** 3)


def test_form_j_n2():
    assert form_j(2) == LaurentMatrix([[ONE, -T_INV], [-T, ONE]])


def test_generators_fix_v_and_ones():
    for n in range(2, 7):
        v, ones = vector_v(n), ones_row(n)
        for i in range(1, n):
            m = burau_gen(n, i)
            assert m.mul_vec(v) == v
            assert m.vec_mul(ones) == ones


def test_generator_reduction_is_transposition():
    assert burau_gen(3, 1).at_one() == \
        perm_matrix(word_permutation(gen(3, 1)))


# ---------------------------------------------------------------------------
# membership


def test_gamma_conditions_names():
    assert GAMMA_CONDITIONS == ("fixes_v", "fixes_ones", "unitary",
                                "permutation_mod_s")


def test_gamma_check_passes_on_random_words():
    rng = random.Random(403)
    for _ in range(50):
        w = rand_word(rng, 5, rng.randint(1, 8))
        el = gamma_check(burau_eval(w))
        assert el
        assert isinstance(el, GammaElement)


def test_gamma_check_reports_broken_v():
    bad = LaurentMatrix([[T if i == j == 0 else (ONE if i == j else ZERO)
                          for j in range(3)] for i in range(3)])
    rng = random.Random(404)
    report = gamma_check(bad * burau_eval(rand_word(rng, 3, 4)))
    assert not report
    assert "fixes_v" in report.violations


def test_permutation_reduction_matches_word():
    rng = random.Random(405)
    for _ in range(20):
        w = rand_word(rng, 6, 6)
        assert burau_eval(w).at_one() == perm_matrix(word_permutation(w))


# ---------------------------------------------------------------------------
# coefficients


def test_pure_gen_coefficient():
    el = gamma_coeff(pure_gen(5, 1, 2), 1)
    assert el.degree == 1
    assert el.matrix == gen_x(1, 2, 5).matrix


def test_alpha_coefficient():
    el = gamma_coeff(alpha_word(5), 3)
    assert el.matrix == (gen_x(2, 4, 5) - gen_x(1, 3, 5)).matrix


def test_delta_coefficient():
    assert gamma_coeff(delta_word(5), 5).matrix == DELTA_COEFF


def test_delta_extends_by_zeroes():
    el = gamma_coeff(delta_word(6), 5)
    expect = [[0] * 6 for _ in range(6)]
    for i in range(5):
        for j in range(5):
            expect[i][j] = DELTA_COEFF[i, j]
    assert el.matrix == IntMatrix(expect)


def test_coeff_needs_enough_depth():
    with pytest.raises(DepthTooSmall):
        gamma_coeff(gen(5, 1), 1)          # not pure, depth 0
    with pytest.raises(DepthTooSmall):
        gamma_coeff(pure_gen(5, 1, 2), 2)  # depth exactly 1


def test_coeff_accepts_matrix_and_gamma_element():
    m = burau_eval(alpha_word(5))
    el = burau_gamma(alpha_word(5))
    k3 = gamma_coeff(m, 3)
    assert k3 == gamma_coeff(el, 3) == gamma_coeff(alpha_word(5), 3)


# ---------------------------------------------------------------------------
# GammaElement


def test_gamma_element_accessors():
    el = burau_gamma(concat(gen(4, 1), pure_gen(4, 2, 4)))
    assert el.permutation() == word_permutation(gen(4, 1))
    assert el.depth() == 0
    deep = burau_gamma(alpha_word(5))
    assert deep.depth() == 3
    assert deep.coeff(3) == gamma_coeff(alpha_word(5), 3).matrix


def test_gamma_element_identity_depth():
    el = burau_gamma(commutator(gen(4, 1), gen(4, 3)))
    assert el.depth() == math.inf


def test_gamma_element_json_round_trip():
    el = burau_gamma(pure_gen(4, 1, 3))
    again = GammaElement.from_json(el.to_json())
    assert again.matrix == el.matrix


def test_gamma_element_json_revalidates():
    el = burau_gamma(pure_gen(3, 1, 2))
    data = el.to_json()
    data["entries"][0][0] = {"t": {"0": "5"}}
    with pytest.raises(ValueError):
        GammaElement.from_json(data)


def test_gamma_element_rejects_non_member():
    with pytest.raises(ValueError):
        GammaElement(LaurentMatrix([[T, ZERO], [ZERO, ONE]]))
