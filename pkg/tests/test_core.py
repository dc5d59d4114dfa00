"""Scalars, linear solving, graded maps and Koszul signs."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ainfty import linalg
from ainfty.fields import GF, QQ, parse_field
from ainfty.graded import GradedMap, GradedSpace, MultiMap, identity_factor, koszul_eval, map_factor, suspension_sign


# -- scalars ---------------------------------------------------------------


def test_rationals_exact_and_collapse_integral():
    assert QQ("3/6") == Fraction(1, 2)
    assert QQ(Fraction(4, 2)) == 2 and type(QQ(Fraction(4, 2))) is int


def test_floats_rejected():
    with pytest.raises(TypeError):
        QQ(0.5)
    with pytest.raises(TypeError):
        GF(3)(1.0)


def test_prime_field_reduction():
    F = GF(5)
    assert F(7) == 2
    assert F("1/2") == 3
    assert F.inv(2) == 3


def test_non_prime_modulus():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        parse_field("Fp:9")


def test_parse_field():
    assert parse_field("Q") == QQ
    assert parse_field("Fp:7") == GF(7)
    with pytest.raises(ValueError):
        parse_field("R")


# -- solve_linear ----------------------------------------------------------


def test_solve_identity():
    sol = linalg.solve_linear(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [3, "1/2", -4])
    assert sol.particular == [3, Fraction(1, 2), -4]
    assert sol.nullspace == []


def test_solve_zero_map():
    sol = linalg.solve_linear(QQ, [[0]], [0])
    assert sol.particular == [0]
    assert sol.nullspace == [[1]]


def test_solve_f2_example():
    F = GF(2)
    sol = linalg.solve_linear(F, [[1, 1], [0, 0]], [1, 0])
    assert sol.particular == [1, 0]
    assert sol.nullspace == [[1, 1]]
    # independent check: enumerate F2^2
    sols = [v for v in itertools.product(range(2), repeat=2) if ((v[0] + v[1]) % 2, 0) == (1, 0)]
    assert sorted(sols) == [(0, 1), (1, 0)]
    kern = [v for v in itertools.product(range(2), repeat=2) if (v[0] + v[1]) % 2 == 0 and any(v)]
    assert kern == [(1, 1)]


def test_solve_inconsistent():
    assert linalg.solve_linear(QQ, [[1, 1], [2, 2]], [1, 3]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        linalg.solve_linear(QQ, [[1, 0]], [1, 2])
    with pytest.raises(ValueError):
        linalg.solve_sparse(QQ, [{5: 1}], 2, {})


def _matvec(F, M, x):
    return [F.red(sum(a * b for a, b in zip(row, x))) for row in M]


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from([0, 2, 3, 5]),
    shape=st.tuples(st.integers(1, 5), st.integers(1, 5)),
    seed=st.integers(0, 10**6),
)
def test_solution_and_kernel_exact(p, shape, seed):
    F = QQ if p == 0 else GF(p)
    rng = random.Random(seed)
    m, n = shape
    M = [[F(rng.randint(-2, 2)) if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(m)]
    x0 = [F(rng.randint(-2, 2)) for _ in range(n)]
    b = _matvec(F, M, x0)
    sol = linalg.solve_linear(F, M, b)
    assert sol is not None
    assert _matvec(F, M, sol.particular) == b
    for v in sol.nullspace:
        assert _matvec(F, M, v) == [0] * m
    assert len(sol.nullspace) == n - linalg.rank(F, [linalg.sparse(F, r) for r in M])


def test_solution_deterministic():
    M = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    a = linalg.solve_linear(QQ, M, [6, 12, 2])
    b = linalg.solve_linear(QQ, M, [6, 12, 2])
    assert a == b
    # free variable (the last one) is zero
    assert a.particular[2] == 0


# -- graded spaces and maps ------------------------------------------------


def test_graded_space_invariants():
    with pytest.raises(ValueError):
        GradedSpace(("x", "x"), (0, 1))
    S = GradedSpace(("x", "y", "z"), (-1, 0, 0))
    assert S.support == [-1, 0]
    assert S.dim_in(0) == 2
    with pytest.raises(ValueError):
        S.vector_degree({0: 1, 1: 1})


def test_graded_map_block_violation():
    S = GradedSpace(("x", "y"), (0, 0))
    with pytest.raises(ValueError, match="block violation"):
        GradedMap(S, S, 1, {0: {1: 1}})


def test_words_pruned_by_degree():
    S = GradedSpace(("p", "q", "r"), (0, 1, 2))
    got = set(S.words(3, [2]))
    want = {w for w in itertools.product(range(3), repeat=3) if S.word_degree(w) == 2}
    assert got == want
    assert len(list(S.words(2))) == 9


def test_multimap_degree_check():
    S = GradedSpace(("x", "y"), (0, 1))
    m = MultiMap(2, S, S, 0, {(0, 1): {0: 1}})
    with pytest.raises(ValueError):
        m.check_degrees()


# -- Koszul signs ------------------------------------------------------------


def _factors(deg_f, deg_g):
    return [(1, deg_f, lambda w: {("f", w[0]): 1}), (1, deg_g, lambda w: {("g", w[0]): 1})]


def test_koszul_even_g():
    out = koszul_eval(QQ, _factors(1, 2), (0, 1), [1, 1])
    assert out == {(("f", 0), ("g", 1)): 1}


def test_koszul_odd_transposition():
    out = koszul_eval(QQ, _factors(0, 1), (0, 1), [1, 0])
    assert out == {(("f", 0), ("g", 1)): -1}


def test_koszul_id_tensor_d_matches_leibniz_sign():
    # (id ⊗ d)(x ⊗ y) with |x| = 1 gives -x ⊗ dy, the sign in d(xy) = dx·y - x·dy
    S = GradedSpace(("x", "y", "dy"), (1, 0, 1))
    d = GradedMap(S, S, 1, {1: {2: 1}})
    out = koszul_eval(QQ, [identity_factor(), map_factor(d)], (0, 1), S.degrees)
    assert out == {(0, 2): -1}


def test_koszul_arity_mismatch():
    with pytest.raises(ValueError):
        koszul_eval(QQ, [identity_factor()], (0, 1), [0, 0])


def test_koszul_bilinear():
    rng = random.Random(3)
    S = GradedSpace(tuple("abcd"), (0, 1, 1, 2))
    F = QQ
    d = GradedMap(S, S, 1, {0: {1: 2, 2: -1}, 1: {3: 1}, 2: {3: 3}})
    for _ in range(20):
        x = {rng.randrange(4): rng.randint(1, 3) for _ in range(2)}
        y1 = {rng.randrange(4): rng.randint(1, 3)}
        y2 = {rng.randrange(4): rng.randint(1, 3)}
        # evaluate on a sum of words = sum of evaluations, slot by slot
        def ev(xv, yv):
            out = {}
            for i, a in xv.items():
                for j, b in yv.items():
                    r = koszul_eval(F, [identity_factor(), map_factor(d)], (i, j), S.degrees)
                    linalg.iadd(F, out, r, a * b)
            return out
        lhs = ev(x, linalg.add(F, y1, y2))
        rhs = linalg.add(F, ev(x, y1), ev(x, y2))
        assert lhs == rhs


def test_suspension_sign_values():
    assert suspension_sign(1) == 1
    assert suspension_sign(2) == -1
    assert suspension_sign(4) == 1
    with pytest.raises(ValueError):
        suspension_sign(0)


def test_suspension_sign_squares():
    for n in range(1, 21):
        assert suspension_sign(n) * suspension_sign(n) == 1
        assert suspension_sign(n) == (-1) ** (n * (n - 1) // 2)
