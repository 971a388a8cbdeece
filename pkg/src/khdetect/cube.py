"""
Cube of resolutions and the Khovanov chain complex.

A vertex of the cube is an integer whose bit ``i`` is the smoothing of
crossing ``i``.  For a PD crossing ``X[a,b,c,d]`` the 0-smoothing joins
``a``-``b`` and ``c``-``d``; the 1-smoothing joins ``a``-``d`` and ``b``-``c``.
Circles at a vertex are numbered by their smallest edge label.

A generator is a pair ``(vertex, mask)``: bit ``k`` of ``mask`` set means
circle ``k`` carries ``v-``, clear means ``v+``.  Gradings are

    h = |v| - n_minus
    q = (#v+ - #v-) + |v| + n_plus - 2 n_minus   (+1 when reduced)

Within a bidegree, generators are ordered by ``(vertex, mask)``.  The
reduced complex is the subcomplex in which the basepoint circle is
pinned to ``v-``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .homalg import SparseIntMatrix
from .linkdiag import LinkDiagram

__all__ = [
    "Resolution",
    "KhovanovComplex",
    "ChainComplex",
    "ChainMap",
    "resolve",
    "build_complex",
    "basepoint_chain_operator",
]


@dataclass(frozen=True)
class Resolution:
    vertex: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]

    @property
    def circle_count(self) -> int:
        return len(self.circles)


def _vertex_int(vertex, n) -> int:
    if isinstance(vertex, int):
        if not 0 <= vertex < 1 << n:
            raise ValueError("vertex out of range")
        return vertex
    bits = tuple(int(b) for b in vertex)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"vertex must be {n} bits")
    return sum(b << i for i, b in enumerate(bits))


class _Cube:
    """Circle bookkeeping shared by the complexes of one diagram."""

    def __init__(self, d: LinkDiagram):
        self.d = d
        self.n = len(d.crossings)
        self.edges = d.edges
        self.index = {e: i for i, e in enumerate(self.edges)}
        self.xidx = [tuple(self.index[e] for e in x) for x in d.crossings]
        self._cache: dict[int, tuple[np.ndarray, int, list[int]]] = {}

    def circles(self, v: int):
        """(edge -> circle id array, circle count, representative edge per circle)."""
        got = self._cache.get(v)
        if got is not None:
            return got
        m = len(self.edges)
        parent = list(range(m))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, (a, b, c, dd) in enumerate(self.xidx):
            if v >> i & 1:
                pairs = ((a, dd), (b, c))
            else:
                pairs = ((a, b), (c, dd))
            for x, y in pairs:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
        roots = [find(i) for i in range(m)]
        ids: dict[int, int] = {}
        comp = np.empty(m, dtype=np.int64)
        reps = []
        for i, r in enumerate(roots):
            if r not in ids:
                ids[r] = len(ids)
                reps.append(i)
            comp[i] = ids[r]
        got = (comp, len(ids), reps)
        self._cache[v] = got
        return got


@lru_cache(maxsize=None)
def _popcounts(c: int) -> np.ndarray:
    masks = np.arange(1 << c, dtype=np.int64)
    pc = np.zeros_like(masks)
    for k in range(c):
        pc += (masks >> k) & 1
    pc.setflags(write=False)
    return pc


def _bitcount(x: int) -> int:
    return bin(x).count("1")


class KhovanovComplex:
    """Khovanov complex of a diagram, generated lazily per homological degree.

    Parameters
    ----------
    d : LinkDiagram
    reduced : bool
        Build the reduced complex; requires ``d.basepoint``.
    """

    def __init__(self, d: LinkDiagram, reduced: bool = False):
        if reduced and d.basepoint is None:
            raise ValueError("the reduced complex needs a basepoint")
        self.diagram = d
        self.reduced = reduced
        self._cube = _Cube(d)
        self.n = self._cube.n
        signs = d.signs
        self.n_plus = signs.count(1)
        self.n_minus = signs.count(-1)
        self._q_shift = self.n_plus - 2 * self.n_minus + (1 if reduced else 0)
        self._bp = self._cube.index[d.basepoint] if reduced else None
        self._deg_cache: dict[int, dict] = {}

    # -- basis ----------------------------------------------------------------

    @property
    def degrees(self) -> list[int]:
        return [k - self.n_minus for k in range(self.n + 1)]

    def _vertices(self, k):
        n = self.n
        return [v for v in range(1 << n) if _bitcount(v) == k]

    def _allowed(self, v):
        comp, c, _ = self._cube.circles(v)
        masks = np.arange(1 << c, dtype=np.int64)
        if self._bp is not None:
            masks = masks[(masks >> int(comp[self._bp])) & 1 == 1]
        return masks

    def _degree(self, k):
        """Per-vertex local index tables for cube level ``k`` (cached, small LRU)."""
        got = self._deg_cache.get(k)
        if got is not None:
            return got
        verts = self._vertices(k)
        offsets: dict[int, int] = {}
        loc = {}
        for v in verts:
            comp, c, _ = self._cube.circles(v)
            masks = self._allowed(v)
            pc = _popcounts(c)[masks]
            order = np.argsort(pc, kind="stable")
            table = np.full(1 << c, -1, dtype=np.int64)
            spc = pc[order]
            counts = np.bincount(spc, minlength=c + 1)
            starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
            rank = np.arange(len(order)) - starts[spc]
            base = np.empty(c + 1, dtype=np.int64)
            for p in range(c + 1):
                q = c - 2 * p + k + self._q_shift
                base[p] = offsets.get(q, 0)
                if counts[p]:
                    offsets[q] = offsets.get(q, 0) + int(counts[p])
            table[masks[order]] = base[spc] + rank
            loc[v] = table
        data = {"verts": verts, "loc": loc, "dims": offsets}
        if len(self._deg_cache) >= 3:
            far = max(self._deg_cache, key=lambda j: abs(j - k))
            del self._deg_cache[far]
        self._deg_cache[k] = data
        return data

    def q_of(self, v: int, mask: int) -> int:
        c = self._cube.circles(v)[1]
        return c - 2 * _bitcount(mask) + _bitcount(v) + self._q_shift

    def dims(self, h) -> dict[int, int]:
        k = h + self.n_minus
        if not 0 <= k <= self.n:
            return {}
        return dict(sorted(self._degree(k)["dims"].items()))

    def basis(self, h, q) -> list[tuple[tuple[int, ...], tuple[str, ...]]]:
        """Generators of C^{h,q} as (vertex bits, circle labels), in index order."""
        k = h + self.n_minus
        if not 0 <= k <= self.n:
            return []
        out = []
        for v in self._degree(k)["verts"]:
            c = self._cube.circles(v)[1]
            for mask in self._allowed(v).tolist():
                if self.q_of(v, mask) == q:
                    out.append((v, mask))
        out.sort(key=lambda g: (g[0], _bitcount(g[1]), g[1]))
        n, cube = self.n, self._cube
        return [(tuple(v >> i & 1 for i in range(n)),
                 tuple("-" if m >> j & 1 else "+" for j in range(cube.circles(v)[1])))
                for v, m in out]

    def generator_index(self, vertex: int, mask: int) -> tuple[int, int, int]:
        """(h, q, local index) of a generator."""
        k = _bitcount(vertex)
        idx = int(self._degree(k)["loc"][vertex][mask])
        if idx < 0:
            raise KeyError("labeling not in the complex")
        return k - self.n_minus, self.q_of(vertex, mask), idx

    # -- differential ---------------------------------------------------------

    def _edge_arrays(self, k):
        """Triplets (q, target, source, value) of d from cube level k to k+1."""
        if not 0 <= k < self.n:
            return None
        lo, hi = self._degree(k), self._degree(k + 1)
        cube = self._cube
        qs, rs, cs, vs = [], [], [], []
        for v in lo["verts"]:
            comp_v, c_v, reps_v = cube.circles(v)
            masks = self._allowed(v)
            loc_v = lo["loc"][v]
            src_idx = loc_v[masks]
            q_arr = c_v - 2 * _popcounts(c_v)[masks] + k + self._q_shift
            bits = [(masks >> j) & 1 for j in range(c_v)]
            for i in range(self.n):
                if v >> i & 1:
                    continue
                w = v | (1 << i)
                comp_w, _, _ = cube.circles(w)
                loc_w = hi["loc"][w]
                sign = -1 if _bitcount(v & ((1 << i) - 1)) & 1 else 1
                a, b, c, _d = cube.xidx[i]
                A, B = int(comp_v[a]), int(comp_v[c])
                base = np.zeros_like(masks)
                for j in range(c_v):
                    if j != A and j != B:
                        base |= bits[j] << int(comp_w[reps_v[j]])
                if A != B:
                    M = int(comp_w[a])
                    keep = (bits[A] & bits[B]) == 0
                    tgt = base[keep] | ((bits[A][keep] | bits[B][keep]) << M)
                    rs.append(loc_w[tgt])
                    cs.append(src_idx[keep])
                    qs.append(q_arr[keep])
                    vs.append(np.full(len(tgt), sign, dtype=np.int64))
                else:
                    A1, A2 = int(comp_w[a]), int(comp_w[b])
                    plus = bits[A] == 0
                    bp, bm = base[plus], base[~plus]
                    for tgt, src, qq in (
                            (bp | (1 << A2), src_idx[plus], q_arr[plus]),
                            (bp | (1 << A1), src_idx[plus], q_arr[plus]),
                            (bm | (1 << A1) | (1 << A2), src_idx[~plus], q_arr[~plus])):
                        rs.append(loc_w[tgt])
                        cs.append(src)
                        qs.append(qq)
                        vs.append(np.full(len(tgt), sign, dtype=np.int64))
        if not qs:
            return {}
        q = np.concatenate(qs)
        r = np.concatenate(rs)
        c = np.concatenate(cs)
        val = np.concatenate(vs)
        out = {}
        order = np.argsort(q, kind="stable")
        q, r, c, val = q[order], r[order], c[order], val[order]
        cuts = np.flatnonzero(np.diff(q)) + 1
        for qq, rr, cc, vv in zip(np.split(q, cuts), np.split(r, cuts),
                                  np.split(c, cuts), np.split(val, cuts)):
            if len(qq):
                out[int(qq[0])] = (rr, cc, vv)
        return out

    def block_triplets(self, h):
        """``{q: iterable of (row, col, value)}`` for ``d_h`` (rows = targets)."""
        arrs = self._edge_arrays(h + self.n_minus)
        if not arrs:
            return {}
        return {q: zip(r.tolist(), c.tolist(), v.tolist()) for q, (r, c, v) in arrs.items()}

    def block(self, h, q) -> SparseIntMatrix:
        """``d : C^{h,q} -> C^{h+1,q}`` as a sparse matrix."""
        rows = self.dims(h + 1).get(q, 0)
        cols = self.dims(h).get(q, 0)
        arrs = self._edge_arrays(h + self.n_minus) or {}
        if q not in arrs:
            return SparseIntMatrix.zero(rows, cols)
        r, c, v = arrs[q]
        return SparseIntMatrix(rows, cols, dict(zip(zip(r.tolist(), c.tolist()), v.tolist())))

    def to_json(self) -> dict:
        """Debug dump: basis sizes and sparse differentials."""
        out = {"reduced": self.reduced, "degrees": {}}
        for h in self.degrees:
            dims = self.dims(h)
            out["degrees"][str(h)] = {
                "dims": {str(q): n for q, n in dims.items()},
                "d": {str(q): self.block(h, q).triplets() for q in dims},
            }
        return out

    def dump_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


ChainComplex = KhovanovComplex


def resolve(d: LinkDiagram, vertex) -> Resolution:
    """Circles of the full smoothing at ``vertex`` (bit sequence or int)."""
    cube = _Cube(d)
    v = _vertex_int(vertex, cube.n)
    comp, c, _ = cube.circles(v)
    circles = [[] for _ in range(c)]
    for i, e in enumerate(cube.edges):
        circles[int(comp[i])].append(e)
    return Resolution(tuple(v >> i & 1 for i in range(cube.n)),
                      tuple(tuple(cl) for cl in circles))


def build_complex(d: LinkDiagram, reduced: bool = False) -> KhovanovComplex:
    return KhovanovComplex(d, reduced)


class ChainMap:
    """Bigraded chain map ``C^{h,q} -> C^{h,q+shift}`` given blockwise."""

    def __init__(self, complex: KhovanovComplex, shift: int, block_fn):
        self.complex = complex
        self.shift = shift
        self._fn = block_fn

    def __call__(self, h, q) -> SparseIntMatrix:
        return self._fn(h, q)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self`` after ``other``."""
        return ChainMap(self.complex, self.shift + other.shift,
                        lambda h, q: self(h, q + other.shift) @ other(h, q))


def basepoint_chain_operator(cx: KhovanovComplex, component: int, edge: int | None = None) -> ChainMap:
    """``x`` acting on the circle through a marked edge of ``component``.

    ``v+ -> v-``, ``v- -> 0`` on that circle, identity elsewhere; bidegree
    (0, -2).  The mark defaults to the smallest edge label of the
    component.
    """
    d = cx.diagram
    if not 0 <= component < len(d.components):
        raise IndexError(f"component {component} out of range")
    if cx.reduced and component == d.distinguished:
        raise ValueError("the distinguished component carries no action on the reduced complex")
    if edge is None:
        edge = min(d.components[component])
    elif d.edge_component.get(edge) != component:
        raise ValueError(f"edge {edge} is not on component {component}")
    ei = cx._cube.index[edge]

    def block(h, q):
        k = h + cx.n_minus
        rows = cx.dims(h).get(q - 2, 0)
        cols = cx.dims(h).get(q, 0)
        entries = {}
        if 0 <= k <= cx.n and cols and rows:
            deg = cx._degree(k)
            for v in deg["verts"]:
                comp, c, _ = cx._cube.circles(v)
                K = int(comp[ei])
                loc = deg["loc"][v]
                for mask in cx._allowed(v).tolist():
                    if mask >> K & 1 or cx.q_of(v, mask) != q:
                        continue
                    entries[(int(loc[mask | (1 << K)]), int(loc[mask]))] = 1
        return SparseIntMatrix(rows, cols, entries)

    return ChainMap(cx, -2, block)
