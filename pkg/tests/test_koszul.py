import pytest
from hypothesis import given, settings, strategies as st

from conftest import SMALL_LINKS
from khdetect.khovanov import module_action
from khdetect.koszul import KoszulComplex, khi_rank_bound, koszul_tensor_rank, two_term_rank
from khdetect.library import HOPF_MINUS_VARIANTS, HOPF_PLUS_VARIANTS, LIBRARY
from khdetect.homalg import BigradedGroup

ZERO2 = [[0, 0], [0, 0]]
NIL2 = [[0, 1], [0, 0]]


def test_small_examples():
    assert koszul_tensor_rank([ZERO2]) == 4
    assert koszul_tensor_rank([NIL2]) == 2
    assert koszul_tensor_rank([], None) == 0
    assert KoszulComplex([], dim=3).total_rank() == 3


def test_differential_squares_to_zero():
    x = [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]
    y = [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    k = KoszulComplex([x, y])
    d0, d1 = k.differential(0), k.differential(1)
    prod = [[sum(d1[i][l] * d0[l][j] for l in range(len(d0))) for j in range(len(d0[0]))]
            for i in range(len(d1))]
    assert all(v == 0 for row in prod for v in row)
    assert k.r_minus_1 == 2


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("dim", [1, 2, 3])
def test_trivial_action_doubles_per_variable(n, dim):
    zero = [[0] * dim for _ in range(dim)]
    assert koszul_tensor_rank([zero] * n) == 2 ** n * dim


square_zero = st.integers(1, 4).flatmap(
    lambda m: st.lists(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)),
                       max_size=3).map(lambda pairs: (m, pairs)))


def _strictly_upper(m, pairs, scale=1):
    # strictly upper triangular with entries only from the top half to the bottom half
    x = [[0] * m for _ in range(m)]
    half = m // 2
    for a, b in pairs:
        if a < half <= b:
            x[a][b] = scale
    return x


@given(square_zero)
@settings(max_examples=40, deadline=None)
def test_one_variable_matches_kernel_plus_cokernel(case):
    m, pairs = case
    x = _strictly_upper(m, pairs)
    from khdetect.homalg import field_rank
    assert koszul_tensor_rank([x]) == two_term_rank(m, field_rank(x))


@given(square_zero)
@settings(max_examples=40, deadline=None)
def test_zeroing_an_action_never_lowers_the_rank(case):
    m, pairs = case
    x = _strictly_upper(m, pairs)
    zero = [[0] * m for _ in range(m)]
    # x and 2x commute and square to zero
    two_x = _strictly_upper(m, pairs, 2)
    both = koszul_tensor_rank([x, two_x])
    assert koszul_tensor_rank([zero, two_x]) >= both
    assert koszul_tensor_rank([zero, zero]) >= koszul_tensor_rank([zero, two_x])


def test_trivial_variable_splits_off():
    # x_1 = 0 tensors the one-variable complex of x_2 with an exterior algebra
    assert koszul_tensor_rank([ZERO2, NIL2]) == 2 * koszul_tensor_rank([NIL2])


@pytest.mark.parametrize("name", HOPF_PLUS_VARIANTS + HOPF_MINUS_VARIANTS)
def test_hopf_bound_is_four(name):
    assert khi_rank_bound(LIBRARY[name]) == 4


def test_unlink_bounds():
    assert khi_rank_bound(LIBRARY["unlink-2"]) == 2
    assert khi_rank_bound(LIBRARY["unlink-3"]) == 4


@pytest.mark.parametrize("name", SMALL_LINKS)
def test_bound_is_independent_of_second_edge_check(name):
    d = LIBRARY[name]
    a = module_action(d)
    assert koszul_tensor_rank(a) == khi_rank_bound(d)


def test_dimension_mismatch_is_rejected():
    wrong = BigradedGroup.from_ranks({(0, 0): 3}, "Q")
    with pytest.raises(ValueError):
        koszul_tensor_rank([ZERO2], wrong)
    with pytest.raises(ValueError):
        KoszulComplex([ZERO2, [[0]]])
    with pytest.raises(ValueError):
        KoszulComplex([])
