"""End-to-end acceptance checks, one per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible even without
``-s``) and fails normally when its criterion is not met.
"""

import contextlib
import json
import subprocess
import sys
import time

import numpy as np
import pytest
import scipy.sparse as sp

from khdetect.alexander import (
    KhiShape,
    alexander_single,
    diagonal_multivariable,
    prop3_solver,
    torres_check,
)
from khdetect.cube import build_complex
from khdetect.detector import detect_hopf
from khdetect.homalg import AbelianGroup, homology
from khdetect.khovanov import (
    bs_check,
    component_homologies,
    jones_polynomial,
    kauffman_jones,
    kh,
    khr,
    shumakovitch_identity,
    total_linking,
)
from khdetect.koszul import khi_rank_bound
from khdetect.laurent import ONE, LaurentPoly
from khdetect.library import HOPF_MINUS_VARIANTS, HOPF_PLUS_VARIANTS, LIBRARY, names
from khdetect.linkdiag import linking_number, mirror

Z = AbelianGroup(1, ())


@pytest.fixture
def report(capsys):
    @contextlib.contextmanager
    def run(number, text):
        start = time.perf_counter()
        notes = []
        try:
            yield notes
        except BaseException as exc:
            with capsys.disabled():
                print(f"\nFAIL criterion {number}: {text} ({type(exc).__name__}: {exc})")
            raise
        with capsys.disabled():
            extra = f"; {'; '.join(notes)}" if notes else ""
            print(f"\nPASS criterion {number}: {text} [{time.perf_counter() - start:.2f}s{extra}]")
    return run


def _timed(fn, limit):
    start = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    return out


def test_criterion_1_hopf_tables(report):
    with report(1, "golden Hopf tables over Z, both signs, every reduced component"):
        def check():
            for sign, name in ((1, "hopf-plus"), (-1, "hopf-minus")):
                d = LIBRARY[name]
                want = {(0, 0): Z, (0, 2 * sign): Z, (2 * sign, 4 * sign): Z,
                        (2 * sign, 6 * sign): Z}
                assert kh(d, "Z").groups == want
                for c in (0, 1):
                    assert khr(d, c, "Z").groups == {(0, sign): Z, (2 * sign, 5 * sign): Z}
        _timed(check, 1.0)


def test_criterion_2_koszul_bound(report):
    with report(2, "Koszul rank bound of the positive Hopf link is 4"):
        assert _timed(lambda: khi_rank_bound(LIBRARY["hopf-plus"]), 1.0) == 4


def test_criterion_3_shape_uniqueness(report):
    with report(3, "unique Alexander-graded shape (1,2,1) with signs (+,-,+) for m_max 1..50"):
        want = KhiShape.from_signs({1: 1, 0: 2, -1: 1}, {1: 1, 0: -1, -1: 1})

        def sweep():
            for m in range(1, 51):
                got = _timed(lambda: prop3_solver(4, 1, m), 1.0)
                assert got == {want}, f"m_max={m}: {got}"
        _timed(sweep, 1.0)


def test_criterion_4_alexander_chain(report):
    with report(4, "Alexander polynomial, diagonal and Torres condition for both Hopf links"):
        sqrt_diff = LaurentPoly({1: 1, -1: -1})
        for name in ("hopf-plus", "hopf-minus"):
            d = LIBRARY[name]
            delta = alexander_single(d)
            assert delta in (sqrt_diff, -sqrt_diff)
            diag = diagonal_multivariable(delta)
            assert diag in (ONE, -ONE)
            lk = linking_number(d, 0, 1)
            assert abs(lk) == 1
            assert torres_check(diag, lk)


def test_criterion_5_detection(report):
    negatives = ["unknot", "unknot-kink", "trefoil-left", "trefoil-right", "figure-eight",
                 "torus-2-4", "unlink-2", "unlink-3", "whitehead"]
    with report(5, f"{len(HOPF_PLUS_VARIANTS)}+{len(HOPF_MINUS_VARIANTS)} Hopf diagrams "
                   f"recognized, {len(negatives)} others rejected"):
        assert len(HOPF_PLUS_VARIANTS) >= 3 and len(HOPF_MINUS_VARIANTS) >= 3
        assert any(len(LIBRARY[n].crossings) >= 6 for n in HOPF_PLUS_VARIANTS)
        assert any(len(LIBRARY[n].crossings) >= 6 for n in HOPF_MINUS_VARIANTS)

        def check():
            for name in HOPF_PLUS_VARIANTS:
                assert detect_hopf(LIBRARY[name]).verdict == "IsHopfPositive", name
            for name in HOPF_MINUS_VARIANTS:
                assert detect_hopf(LIBRARY[name]).verdict == "IsHopfNegative", name
            for name in negatives:
                v = detect_hopf(LIBRARY[name]).verdict
                assert v not in ("IsHopfPositive", "IsHopfNegative"), name
        _timed(check, 30.0)


def _d_squared_zero(cx):
    prev = None
    for h in cx.degrees:
        blocks = {}
        for q, trip in cx.block_triplets(h).items():
            t = list(trip)
            rows, cols = cx.dims(h + 1).get(q, 0), cx.dims(h).get(q, 0)
            if t:
                r, c, v = zip(*t)
                m = sp.csr_matrix((v, (r, c)), shape=(rows, cols), dtype=np.int64)
            else:
                m = sp.csr_matrix((rows, cols), dtype=np.int64)
            blocks[q] = m
            if prev and q in prev and (m @ prev[q]).count_nonzero():
                return False
        prev = blocks
    return True


def test_criterion_6_identities(report):
    lib = names()
    with report(6, f"d^2=0, Shumakovitch, UCT, mirror, Batson-Seed, Kauffman on {len(lib)} diagrams"):
        def check():
            for name in lib:
                d = LIBRARY[name]
                cx = build_complex(d)
                assert _d_squared_zero(cx), name
                kz = homology(cx, "Z")
                kf2 = kz.change_coefficients("F2")
                # universal coefficients against a direct reduction mod 2
                assert kf2 == homology(cx, "F2", direct=True), name
                assert shumakovitch_identity(kf2, khr(d, None, "F2")), name
                kq = kz.change_coefficients("Q").ranks()
                mq = kh(mirror(d), "Q").ranks()
                assert {(-h, -q): n for (h, q), n in kq.items() if n} == \
                    {k: n for k, n in mq.items() if n}, name
                if len(d.components) > 1:
                    total, graded = bs_check(kf2, component_homologies(d, "F2"),
                                             2 * total_linking(d))
                    assert total and graded, name
                assert jones_polynomial(kz) == kauffman_jones(d), name
        _timed(check, 300.0)


_PROBE = """
import json, resource, sys, time
from khdetect.khovanov import kh
from khdetect.library import LIBRARY
start = time.perf_counter()
g = kh(LIBRARY[sys.argv[1]], "Z")
elapsed = time.perf_counter() - start
# VmHWM belongs to the post-exec address space; ru_maxrss also counts the forking parent
try:
    with open("/proc/self/status") as fh:
        peak_kib = next(int(ln.split()[1]) for ln in fh if ln.startswith("VmHWM"))
except (OSError, StopIteration):
    peak_kib = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
print(json.dumps({"seconds": elapsed, "peak_kib": peak_kib, "rank": g.total_rank}))
"""


def test_criterion_7_performance(report):
    big = [n for n in names() if len(LIBRARY[n].crossings) == 12]
    with report(7, "12-crossing kh under 60 s and 1 GiB") as notes:
        assert big
        for name in big:
            out = subprocess.run([sys.executable, "-c", _PROBE, name], capture_output=True,
                                 text=True, check=True, timeout=120)
            stats = json.loads(out.stdout)
            notes.append(f"{name} {stats['seconds']:.1f}s {stats['peak_kib'] / 1024:.0f} MiB")
            assert stats["seconds"] < 60, (name, stats)
            assert stats["peak_kib"] < 1024 * 1024, (name, stats)
