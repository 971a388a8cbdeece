from itertools import product

import numpy as np
import pytest
import scipy.sparse as sp

from conftest import SMALL
from khdetect.cube import basepoint_chain_operator, build_complex, resolve
from khdetect.homalg import homology
from khdetect.library import LIBRARY, names
from khdetect.linkdiag import parse_pd
from reference import smoothing_circles

HOPF = parse_pd("PD[X[2,4,1,3],X[4,2,3,1]]")


def test_hopf_resolutions():
    # hand trace of the two-crossing diagram
    assert resolve(HOPF, (0, 0)).circle_count == 2
    assert resolve(HOPF, (1, 1)).circle_count == 2
    assert resolve(HOPF, (0, 1)).circle_count == 1
    assert resolve(HOPF, (1, 0)).circle_count == 1


def test_unknot_and_reduced_unknot():
    g = homology(build_complex(LIBRARY["unknot"]))
    assert g.ranks() == {(0, -1): 1, (0, 1): 1}
    u = LIBRARY["unknot"].with_component_basepoint(0)
    assert homology(build_complex(u, reduced=True)).ranks() == {(0, 0): 1}


def test_reduced_needs_basepoint():
    with pytest.raises(ValueError):
        build_complex(HOPF, reduced=True)


def _sparse(triplets, rows, cols):
    t = list(triplets)
    if not t:
        return sp.csr_matrix((rows, cols), dtype=np.int64)
    r, c, v = map(np.array, zip(*t))
    return sp.csr_matrix((v, (r, c)), shape=(rows, cols), dtype=np.int64)


@pytest.mark.parametrize("name", names())
def test_d_squared_is_zero_and_entries_are_units(name):
    cx = build_complex(LIBRARY[name])
    prev = None
    for h in cx.degrees:
        blocks = {}
        for q, trip in cx.block_triplets(h).items():
            m = _sparse(trip, cx.dims(h + 1).get(q, 0), cx.dims(h).get(q, 0))
            assert set(np.unique(m.data)) <= {-1, 1}
            blocks[q] = m
        if prev:
            for q, m in blocks.items():
                if q in prev:
                    assert (m @ prev[q]).count_nonzero() == 0
        prev = blocks


@pytest.mark.parametrize("name", SMALL)
def test_circle_counts_match_independent_trace(name):
    d = LIBRARY[name]
    n = len(d.crossings)
    counts = {}
    for state in product((0, 1), repeat=n):
        expected = len(smoothing_circles(d.crossings, state)) + d.free_loops
        got = resolve(d, state).circle_count
        assert got == expected
        counts[state] = got
    for state, c in counts.items():
        for i in range(n):
            if state[i] == 0:
                flipped = state[:i] + (1,) + state[i + 1:]
                assert abs(counts[flipped] - c) == 1


@pytest.mark.parametrize("name", ["hopf-plus", "trefoil-right", "figure-eight", "whitehead"])
def test_generator_counts_per_bidegree(name):
    # every labeling of every smoothing, graded by hand formula
    d = LIBRARY[name]
    n_plus, n_minus = d.signs.count(1), d.signs.count(-1)
    expected = {}
    for state in product((0, 1), repeat=len(d.crossings)):
        c = len(smoothing_circles(d.crossings, state)) + d.free_loops
        k = sum(state)
        for minus in range(c + 1):
            key = (k - n_minus, c - 2 * minus + k + n_plus - 2 * n_minus)
            expected[key] = expected.get(key, 0) + _binom(c, minus)
    cx = build_complex(d)
    got = {(h, q): m for h in cx.degrees for q, m in cx.dims(h).items()}
    assert got == expected
    assert sum(got.values()) == sum(2 ** len(smoothing_circles(d.crossings, s))
                                    for s in product((0, 1), repeat=len(d.crossings)))


def _binom(n, k):
    from math import comb
    return comb(n, k)


@pytest.mark.parametrize("name", ["hopf-plus", "trefoil-right", "borromean"])
def test_basis_is_ordered_by_vertex_then_labeling(name):
    cx = build_complex(LIBRARY[name])

    def key(g):
        bits, labels = g
        vertex = sum(b << i for i, b in enumerate(bits))
        mask = sum(1 << j for j, lab in enumerate(labels) if lab == "-")
        return vertex, mask

    for h in cx.degrees:
        for q, n in cx.dims(h).items():
            b = cx.basis(h, q)
            assert len(b) == n
            assert b == sorted(b, key=key)
            assert len(set(b)) == n


@pytest.mark.parametrize("name", ["hopf-plus", "unlink-2", "whitehead", "borromean",
                                  "hopf-plus-r2"])
def test_basepoint_operator_is_square_zero_chain_map(name):
    d = LIBRARY[name].with_component_basepoint(len(LIBRARY[name].components) - 1)
    cx = build_complex(d, reduced=True)
    for comp in range(len(d.components) - 1):
        x = basepoint_chain_operator(cx, comp)
        assert x.shift == -2
        sq = x.compose(x)
        for h in cx.degrees:
            for q in cx.dims(h):
                assert sq(h, q).is_zero()
                lhs = x(h + 1, q) @ cx.block(h, q)
                rhs = cx.block(h, q - 2) @ x(h, q)
                assert lhs == rhs


def test_basepoint_operator_errors():
    d = HOPF.with_component_basepoint(1)
    cx = build_complex(d, reduced=True)
    with pytest.raises(ValueError):
        basepoint_chain_operator(cx, 1)
    with pytest.raises(IndexError):
        basepoint_chain_operator(cx, 5)


def test_operator_on_unreduced_unknot_has_rank_one():
    cx = build_complex(LIBRARY["unknot"])
    x = basepoint_chain_operator(cx, 0)
    m = x(0, 1)
    assert m.to_dense() == [[1]]
    assert x(0, -1).rows == 0


def test_json_dump():
    cx = build_complex(HOPF)
    import json
    data = json.loads(cx.dump_json())
    assert set(data["degrees"]) == {"0", "1", "2"}
