import random

import pytest
from hypothesis import given, settings, strategies as st

from khdetect.homalg import (
    AbelianGroup,
    BigradedGroup,
    GradedComplex,
    NotAChainMap,
    SparseIntMatrix,
    field_rank,
    homology,
    homology_at,
    induced_map,
    invariant_factors,
    smith_normal_form,
)


def _check_snf(m):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    diag = [d.entries.get((i, i), 0) for i in range(min(m.rows, m.cols))]
    assert all(k == (i, i) for k in d.entries for i in [k[0]])
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == diag[:len(nz)]
    # unimodular: the transforms have determinant +-1
    for w in (u, v):
        _, dw, _ = smith_normal_form(w)
        assert all(dw.entries.get((i, i), 0) == 1 for i in range(w.rows))
    return diag


def test_snf_identity():
    assert _check_snf(SparseIntMatrix.identity(2)) == [1, 1]


def test_snf_hand_example():
    # gcd of entries is 2 and |det| = 4, so the factors are 2, 2
    assert _check_snf(SparseIntMatrix.from_dense([[2, 4], [6, 10]])) == [2, 2]


def test_snf_zero():
    assert _check_snf(SparseIntMatrix.zero(2, 3)) == [0, 0]


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_snf_random(rows):
    m = SparseIntMatrix.from_dense(rows)
    diag = _check_snf(m)
    # rank over Q equals the number of nonzero invariant factors
    assert field_rank(rows) == sum(1 for x in diag if x)
    assert invariant_factors(m) == [x for x in diag if x]


def test_abelian_group_validation():
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))
    with pytest.raises(ValueError):
        AbelianGroup(0, (1,))
    assert str(AbelianGroup(2, (2, 2, 6))) in ("Z^2 + (Z/2)^2 + Z/6",)


def _two_term(matrix):
    """Complex Z^cols --matrix--> Z^rows in degrees 0, 1 at q = 0."""
    m = SparseIntMatrix.from_dense(matrix)
    return GradedComplex({(0, 0): m.cols, (1, 0): m.rows}, {(0, 0): m})


def test_homology_of_multiplication_by_two():
    g = homology(_two_term([[2]]))
    assert g.groups == {(1, 0): AbelianGroup(0, (2,))}
    f2 = homology(_two_term([[2]]), "F2", direct=True)
    assert f2.ranks() == {(0, 0): 1, (1, 0): 1}
    assert homology(_two_term([[2]]), "F2") == f2
    assert homology(_two_term([[2]]), "Q").ranks() == {}


def test_homology_at_slices():
    cx = _two_term([[2, 4], [6, 10]])
    assert homology_at(cx, 1).groups == {(1, 0): AbelianGroup(0, (2, 2))}
    assert homology_at(cx, 0).groups == {}
    assert homology_at(cx, 5).groups == {}


def test_universal_coefficients_on_random_complexes():
    rnd = random.Random(7)
    for _ in range(40):
        a = [[rnd.randint(-3, 3) for _ in range(4)] for _ in range(3)]
        # d1 d0 = 0: pick d1 spanning a subspace of the left kernel
        cx = GradedComplex({(0, 0): 4, (1, 0): 3}, {(0, 0): SparseIntMatrix.from_dense(a)})
        z = homology(cx)
        for coeff in ("F2", "Q"):
            assert z.change_coefficients(coeff) == homology(cx, coeff, direct=True)


def test_induced_map_identity_and_zero():
    cx = _two_term([[0, 0], [1, 0]])
    ident = lambda h, q: SparseIntMatrix.identity(cx.dims(h).get(q, 0))
    zero = lambda h, q: SparseIntMatrix.zero(cx.dims(h).get(q, 0), cx.dims(h).get(q, 0))
    assert induced_map(ident, cx, 0, 0) == [[1]]
    assert induced_map(ident, cx, 1, 0) == [[1]]
    assert induced_map(zero, cx, 0, 0) == [[0]]


def test_induced_map_rejects_non_chain_maps():
    cx = _two_term([[1]])

    def bad(h, q):
        n = cx.dims(h).get(q, 0)
        return SparseIntMatrix.identity(n) if h == 0 else SparseIntMatrix.zero(n, n)

    with pytest.raises(NotAChainMap):
        induced_map(bad, cx, 0, 0)


def test_bigraded_json_round_trip():
    g = BigradedGroup({(0, 1): AbelianGroup(1, ()), (3, 7): AbelianGroup(0, (2,))}, "Z")
    assert BigradedGroup.from_json(g.to_json()) == g
    assert g.ell_ranks() == {-1: 1}
