"""
Exact linear algebra for bigraded chain complexes.

Integer homology is computed in two phases.  Unit entries of each
differential are cancelled by Gaussian elimination (a chain homotopy
equivalence, so nothing is lost over Z); what survives has no unit
entries left and is small, and its invariant factors come from a sparse
Smith normal form.  Field homology uses the same elimination with every
nonzero entry available as a pivot.

Complexes are cohomologically graded: ``d_h : C^h -> C^{h+1}``, and each
differential preserves the quantum grading ``q``.  Anything passed to
:func:`homology` only needs the small protocol implemented by
:class:`GradedComplex`: ``degrees``, ``dims(h)`` and ``block_triplets(h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

__all__ = [
    "COEFFS",
    "SparseIntMatrix",
    "AbelianGroup",
    "BigradedGroup",
    "GradedComplex",
    "smith_normal_form",
    "invariant_factors",
    "homology",
    "homology_at",
    "field_reduction",
    "induced_map",
    "map_on_homology",
    "field_rank",
    "NotAChainMap",
]

COEFFS = ("Z", "F2", "Q")


class NotAChainMap(ValueError):
    """Raised when a map handed to :func:`induced_map` does not commute with d."""


# -- matrices -----------------------------------------------------------------


@dataclass(frozen=True)
class SparseIntMatrix:
    """Integer matrix keeping only its nonzero entries."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in dict(self.entries).items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            v = int(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls(n, m, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, {})

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __getitem__(self, rc):
        return self.entries.get(rc, 0)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, int]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, {})[c] = v
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, {}).items():
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return SparseIntMatrix(self.rows, other.cols, acc)

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    @property
    def T(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def is_zero(self):
        return not self.entries

    def triplets(self):
        return [(r, c, v) for (r, c), v in sorted(self.entries.items())]


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


class _SNFWork:
    """Sparse working copy for Smith reduction, optionally tracking U and V."""

    def __init__(self, M: SparseIntMatrix, track: bool):
        self.m, self.n = M.rows, M.cols
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, dict[int, int]] = {}
        for (r, c), v in M.entries.items():
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, {})[r] = v
        self.track = track
        if track:
            # U kept by rows, V kept by columns: row ops act on U rows, column ops on V columns
            self.U = {i: {i: 1} for i in range(self.m)}
            self.V = {j: {j: 1} for j in range(self.n)}

    def _set(self, r, c, v):
        if v:
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, {})[r] = v
        else:
            row = self.rows.get(r)
            if row is not None and c in row:
                del row[c]
                if not row:
                    del self.rows[r]
                col = self.cols[c]
                del col[r]
                if not col:
                    del self.cols[c]

    @staticmethod
    def _axpy(target: dict, src: dict, k):
        for key, v in src.items():
            nv = target.get(key, 0) + k * v
            if nv:
                target[key] = nv
            else:
                target.pop(key, None)

    def add_row(self, dst, src, k):
        """row[dst] += k * row[src]"""
        for c, v in list(self.rows.get(src, {}).items()):
            self._set(dst, c, self.rows.get(dst, {}).get(c, 0) + k * v)
        if self.track:
            self._axpy(self.U[dst], self.U[src], k)

    def add_col(self, dst, src, k):
        """col[dst] += k * col[src]"""
        for r, v in list(self.cols.get(src, {}).items()):
            self._set(r, dst, self.rows.get(r, {}).get(dst, 0) + k * v)
        if self.track:
            self._axpy(self.V[dst], self.V[src], k)

    def pick_pivot(self):
        best, best_key = None, None
        for r, row in self.rows.items():
            lr = len(row) - 1
            for c, v in row.items():
                key = (abs(v), lr * (len(self.cols[c]) - 1), r, c)
                if best_key is None or key < best_key:
                    best, best_key = (r, c), key
                    if key[0] == 1 and key[1] == 0:
                        return best
        return best

    def reduce(self):
        """Diagonalize; returns list of (row, col, value) pivots."""
        pivots = []
        while self.rows:
            r, c = self.pick_pivot()
            while True:
                p = self.rows[r][c]
                dirty = False
                for r2, v in list(self.cols[c].items()):
                    if r2 == r:
                        continue
                    q = v // p
                    self.add_row(r2, r, -q)
                    if self.rows.get(r2, {}).get(c, 0):
                        dirty = True
                for c2, v in list(self.rows[r].items()):
                    if c2 == c:
                        continue
                    q = v // p
                    self.add_col(c2, c, -q)
                    if self.rows[r].get(c2, 0):
                        dirty = True
                if not dirty:
                    break
                # a smaller remainder appeared in row r or column c; pivot on it
                cand = [(abs(v), r2, c) for r2, v in self.cols[c].items()]
                cand += [(abs(v), r, c2) for c2, v in self.rows[r].items()]
                _, r, c = min(cand)
            p = self.rows[r][c]
            pivots.append((r, c, p))
            self._set(r, c, 0)
        return pivots


def _fix_divisibility(diag):
    """Turn a list of nonzero ints into an invariant-factor chain (values only)."""
    vals = sorted(abs(v) for v in diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                a, b = vals[i], vals[j]
                if b % a:
                    g = gcd(a, b)
                    vals[i], vals[j] = g, a // g * b
                    changed = True
        vals.sort()
    return vals


def invariant_factors(M: SparseIntMatrix) -> list[int]:
    """Nonzero invariant factors of ``M`` in divisibility order."""
    work = _SNFWork(M, track=False)
    return _fix_divisibility([p for _, _, p in work.reduce()])


def smith_normal_form(M: SparseIntMatrix):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` and U, V unimodular.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    Pivots are chosen by smallest absolute value, ties broken by the
    Markowitz fill-in estimate.

    >>> U, D, V = smith_normal_form(SparseIntMatrix.from_dense([[2, 4], [6, 10]]))
    >>> D.to_dense()
    [[2, 0], [0, 2]]
    """
    work = _SNFWork(M, track=True)
    pivots = work.reduce()
    m, n = M.rows, M.cols
    U = work.U
    V = work.V
    k = len(pivots)
    # permute pivots onto the leading diagonal
    prow = [r for r, _, _ in pivots]
    pcol = [c for _, c, _ in pivots]
    row_order = prow + [i for i in range(m) if i not in set(prow)]
    col_order = pcol + [j for j in range(n) if j not in set(pcol)]
    U = [U[i] for i in row_order]
    V = [V[j] for j in col_order]
    diag = [p for _, _, p in pivots]
    for i in range(k):
        if diag[i] < 0:
            diag[i] = -diag[i]
            U[i] = {key: -v for key, v in U[i].items()}

    def comb(vecs, i, j, a, b, c, d):
        # (vec_i, vec_j) <- (a vec_i + b vec_j, c vec_i + d vec_j)
        vi, vj = vecs[i], vecs[j]
        ni, nj = {}, {}
        for key in set(vi) | set(vj):
            x, y = vi.get(key, 0), vj.get(key, 0)
            s, t = a * x + b * y, c * x + d * y
            if s:
                ni[key] = s
            if t:
                nj[key] = t
        vecs[i], vecs[j] = ni, nj

    # gcd/lcm sweeps; each 2x2 step is unimodular on both sides
    changed = True
    while changed:
        changed = False
        for i in range(k):
            for j in range(i + 1, k):
                a, b = diag[i], diag[j]
                if b % a == 0:
                    continue
                g, s, t = _xgcd(a, b)
                comb(U, i, j, s, t, -b // g, a // g)
                # V columns: new_i = V_i + V_j, new_j = -t*b/g V_i + s*a/g V_j
                comb(V, i, j, 1, 1, -t * b // g, s * a // g)
                diag[i], diag[j] = g, a // g * b
                changed = True
    # keep the chain ordered by size
    order = sorted(range(k), key=lambda i: diag[i])
    if order != list(range(k)):
        U = [U[i] for i in order] + U[k:]
        V = [V[i] for i in order] + V[k:]
        diag = [diag[i] for i in order]
    Umat = SparseIntMatrix(m, m, {(i, c): v for i, row in enumerate(U) for c, v in row.items()})
    Vmat = SparseIntMatrix(n, n, {(r, j): v for j, col in enumerate(V) for r, v in col.items()})
    Dmat = SparseIntMatrix(m, n, {(i, i): diag[i] for i in range(k)})
    return Umat, Dmat, Vmat


# -- groups -------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank`` plus cyclic torsion in invariant-factor form."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in t):
            raise ValueError("torsion orders must be >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not an invariant-factor chain")
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for t in sorted(set(self.torsion)):
            k = self.torsion.count(t)
            parts.append(f"Z/{t}" if k == 1 else f"(Z/{t})^{k}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class BigradedGroup:
    """Finitely supported map ``(h, q) -> AbelianGroup`` with a coefficient tag.

    Over a field only ``free_rank`` (the dimension) is meaningful.
    """

    groups: Mapping[tuple[int, int], AbelianGroup]
    coeff: str = "Z"

    def __post_init__(self):
        if self.coeff not in COEFFS:
            raise ValueError(f"unknown coefficients {self.coeff!r}")
        clean = {(int(h), int(q)): g for (h, q), g in dict(self.groups).items() if not g.is_zero()}
        if self.coeff != "Z" and any(g.torsion for g in clean.values()):
            raise ValueError("field coefficients cannot carry torsion")
        object.__setattr__(self, "groups", dict(sorted(clean.items())))

    @classmethod
    def from_ranks(cls, ranks: Mapping[tuple[int, int], int], coeff="Z"):
        return cls({k: AbelianGroup(v) for k, v in ranks.items()}, coeff)

    def __getitem__(self, hq) -> AbelianGroup:
        return self.groups.get(tuple(hq), AbelianGroup())

    def __eq__(self, other):
        if not isinstance(other, BigradedGroup):
            return NotImplemented
        return self.coeff == other.coeff and self.groups == other.groups

    def __hash__(self):
        return hash((self.coeff, tuple(self.groups.items())))

    def __iter__(self):
        return iter(self.groups.items())

    def rank(self, h, q) -> int:
        return self[(h, q)].free_rank

    @property
    def support(self):
        return list(self.groups)

    @property
    def total_rank(self) -> int:
        return sum(g.free_rank for g in self.groups.values())

    def ranks(self) -> dict[tuple[int, int], int]:
        return {k: g.free_rank for k, g in self.groups.items() if g.free_rank}

    def ell_ranks(self) -> dict[int, int]:
        """Ranks collected along ``ell = h - q``."""
        out: dict[int, int] = {}
        for (h, q), g in self.groups.items():
            if g.free_rank:
                out[h - q] = out.get(h - q, 0) + g.free_rank
        return out

    def slice(self, h) -> "BigradedGroup":
        return BigradedGroup({k: g for k, g in self.groups.items() if k[0] == h}, self.coeff)

    def change_coefficients(self, coeff: str) -> "BigradedGroup":
        """Universal-coefficient conversion of an integral group."""
        if coeff == self.coeff:
            return self
        if self.coeff != "Z":
            raise ValueError("can only change coefficients starting from Z")
        if coeff == "Q":
            return BigradedGroup.from_ranks(self.ranks(), "Q")
        if coeff == "F2":
            dims: dict[tuple[int, int], int] = {}
            for (h, q), g in self.groups.items():
                even = sum(1 for t in g.torsion if t % 2 == 0)
                dims[(h, q)] = dims.get((h, q), 0) + g.free_rank + even
                # Tor(H^{h+1}, F2) lands in degree h
                if even:
                    dims[(h - 1, q)] = dims.get((h - 1, q), 0) + even
            return BigradedGroup.from_ranks(dims, "F2")
        raise ValueError(f"unknown coefficients {coeff!r}")

    def to_json(self) -> list[dict]:
        return [{"h": h, "q": q, "rank": g.free_rank, "torsion": list(g.torsion)}
                for (h, q), g in self.groups.items()]

    @classmethod
    def from_json(cls, items, coeff="Z"):
        return cls({(d["h"], d["q"]): AbelianGroup(d["rank"], tuple(d.get("torsion", ())))
                    for d in items}, coeff)

    def table(self) -> str:
        if not self.groups:
            return "0"
        return "\n".join(f"({h:>3},{q:>4})  {g}" for (h, q), g in self.groups.items())

    def __str__(self):
        field = {"F2": "F", "Q": "Q"}.get(self.coeff)
        out = []
        for (h, q), g in self.groups.items():
            if field:
                s = field if g.free_rank == 1 else f"{field}^{g.free_rank}"
            else:
                s = str(g)
                if "+" in s:
                    s = f"[{s}]"
            out.append(f"{s}_({h},{q})")
        return " + ".join(out) or "0"


# -- complexes ----------------------------------------------------------------


class GradedComplex:
    """A bigraded complex given by explicit blocks.

    Parameters
    ----------
    dims : mapping (h, q) -> int
        Ranks of the chain groups.
    blocks : mapping (h, q) -> SparseIntMatrix
        ``d : C^{h,q} -> C^{h+1,q}`` with rows indexing the target.
    """

    def __init__(self, dims: Mapping[tuple[int, int], int],
                 blocks: Mapping[tuple[int, int], SparseIntMatrix] | None = None):
        self._dims = {k: v for k, v in dims.items() if v}
        self._blocks = dict(blocks or {})
        for (h, q), M in self._blocks.items():
            if (M.cols, M.rows) != (self._dims.get((h, q), 0), self._dims.get((h + 1, q), 0)):
                raise ValueError(f"block at {(h, q)} has the wrong shape")

    @property
    def degrees(self) -> list[int]:
        return sorted({h for h, _ in self._dims})

    def dims(self, h) -> dict[int, int]:
        return {q: n for (hh, q), n in self._dims.items() if hh == h}

    def block(self, h, q) -> SparseIntMatrix:
        M = self._blocks.get((h, q))
        if M is None:
            return SparseIntMatrix.zero(self._dims.get((h + 1, q), 0), self._dims.get((h, q), 0))
        return M

    def block_triplets(self, h) -> dict[int, Iterable[tuple[int, int, int]]]:
        return {q: [(r, c, v) for (r, c), v in M.entries.items()]
                for (hh, q), M in self._blocks.items() if hh == h}


class _Elim:
    """One differential ``C^{h,q} -> C^{h+1,q}`` under Gaussian elimination.

    ``cols[x] = {y: c}`` means ``d(x)`` has coefficient ``c`` on ``y``.
    """

    __slots__ = ("rows", "cols", "mod")

    def __init__(self, mod=None):
        self.rows: dict[int, dict[int, object]] = {}
        self.cols: dict[int, dict[int, object]] = {}
        self.mod = mod

    def add(self, y, x, v):
        self.rows.setdefault(y, {})[x] = v
        self.cols.setdefault(x, {})[y] = v

    def drop_source(self, x):
        col = self.cols.pop(x, None)
        if col:
            for y in col:
                row = self.rows[y]
                del row[x]
                if not row:
                    del self.rows[y]

    def drop_target(self, y):
        row = self.rows.pop(y, None)
        if row:
            for x in row:
                col = self.cols[x]
                del col[y]
                if not col:
                    del self.cols[x]

    def cancel(self, x0, y0, inv, log=None):
        """Cancel the invertible entry at ``(y0, x0)``; ``inv`` is its inverse."""
        rows, cols, mod = self.rows, self.cols, self.mod
        gamma = cols.pop(x0)
        delta = rows.pop(y0)
        del gamma[y0]
        del delta[x0]
        for y in gamma:
            row = rows[y]
            del row[x0]
        for x in delta:
            col = cols[x]
            del col[y0]
        for x, dx in delta.items():
            k = dx * inv
            col = cols[x]
            for y, gy in gamma.items():
                row = rows[y]
                nv = col.get(y, 0) - gy * k
                if mod:
                    nv %= mod
                if nv:
                    col[y] = nv
                    row[x] = nv
                else:
                    col.pop(y, None)
                    row.pop(x, None)
        for y in gamma:
            if not rows[y]:
                del rows[y]
        for x in delta:
            if not cols[x]:
                del cols[x]
        if log is not None:
            log.append((x0, y0, inv, gamma, delta))

    def eliminate(self, pivot_ok, inverse, log=None):
        """Cancel pivots until none qualify; return cancelled (x, y) pairs."""
        done = []
        progress = True
        while progress:
            progress = False
            for x in list(self.cols):
                col = self.cols.get(x)
                if not col:
                    continue
                best, best_len = None, None
                for y, v in col.items():
                    if pivot_ok(v):
                        ly = len(self.rows[y])
                        if best is None or ly < best_len:
                            best, best_len = y, ly
                            if ly == 1:
                                break
                if best is None:
                    continue
                self.cancel(x, best, inverse(col[best]), log)
                done.append((x, best))
                progress = True
        return done

    def to_matrix(self, src, tgt):
        """Surviving entries as a SparseIntMatrix on the given index lists."""
        si = {x: i for i, x in enumerate(src)}
        ti = {y: i for i, y in enumerate(tgt)}
        return SparseIntMatrix(len(tgt), len(src), {
            (ti[y], si[x]): v for x, col in self.cols.items() for y, v in col.items()})


def _is_unit(v):
    return v == 1 or v == -1


def _field_ops(coeff):
    if coeff == "Z":
        return _is_unit, (lambda v: v), (lambda v: v)
    if coeff == "F2":
        return (lambda v: v % 2 != 0), (lambda v: 1), (lambda v: v % 2)
    if coeff == "Q":
        def inv(v):
            if v == 1 or v == -1:
                return v
            f = Fraction(1) / v
            return f.numerator if f.denominator == 1 else f
        return (lambda v: v != 0), inv, (lambda v: v)
    raise ValueError(f"unknown coefficients {coeff!r}")


def _load(e: _Elim, triplets, dead_src, dead_tgt, conv):
    for y, x, v in triplets:
        if x in dead_src or y in dead_tgt:
            continue
        v = conv(int(v))
        if v:
            e.add(y, x, v)


def _matrix_info(e: _Elim, coeff) -> tuple[int, list[int]]:
    """(rank, invariant factors > 1) of a fully unit-reduced differential."""
    if not e.cols:
        return 0, []
    if coeff != "Z":
        # a field elimination leaves nothing behind
        raise AssertionError("field elimination left entries")
    src = sorted(e.cols)
    tgt = sorted(e.rows)
    facs = invariant_factors(e.to_matrix(src, tgt))
    return len(facs), [f for f in facs if f > 1]


def homology(complex, coeff: str = "Z", direct: bool = False) -> BigradedGroup:
    """Homology of a bigraded complex in every bidegree.

    With ``direct=False`` field coefficients are obtained from the
    integral answer by the universal coefficient theorem; ``direct=True``
    reduces the complex over the field itself (used to cross-check).

    Differentials are loaded one homological degree at a time, so at
    most two of them are alive at once.
    """
    if coeff != "Z" and not direct:
        return homology(complex, "Z").change_coefficients(coeff)
    pivot_ok, inverse, conv = _field_ops(coeff)
    mod = 2 if coeff == "F2" else None
    degrees = complex.degrees
    groups: dict[tuple[int, int], AbelianGroup] = {}
    if not degrees:
        return BigradedGroup({}, coeff)
    dead_in: dict[int, set] = {}      # C^h generators cancelled by d_{h-1}
    prev_e: dict[int, _Elim] = {}     # d_{h-1}, not yet final
    prev_alive: dict[int, int] = {}   # surviving rank of C^{h-1}
    before: dict[int, tuple[int, list[int]]] = {}  # (rank, torsion) of d_{h-2}
    for h in range(degrees[0], degrees[-1] + 2):
        dims = complex.dims(h)
        trip = complex.block_triplets(h) if dims else {}
        cur_e: dict[int, _Elim] = {}
        alive: dict[int, int] = {}
        next_dead: dict[int, set] = {}
        for q, n in dims.items():
            e = _Elim(mod)
            dead = dead_in.get(q, set())
            _load(e, trip.get(q, ()), dead, set(), conv)
            pairs = e.eliminate(pivot_ok, inverse)
            cur_e[q] = e
            next_dead[q] = {y for _, y in pairs}
            alive[q] = n - len(dead) - len(pairs)
            if q in prev_e:
                for x, _ in pairs:
                    prev_e[q].drop_target(x)
        # d_{h-1} is final now: emit H^{h-1}
        info = {q: _matrix_info(e, coeff) for q, e in prev_e.items()}
        for q in set(prev_alive) | set(before):
            r_out, _ = info.get(q, (0, []))
            r_in, tors = before.get(q, (0, []))
            free = prev_alive.get(q, 0) - r_out - r_in
            if free or tors:
                groups[(h - 1, q)] = AbelianGroup(free, tuple(tors))
        before, prev_e, prev_alive, dead_in = info, cur_e, alive, next_dead
    return BigradedGroup(groups, coeff)


def homology_at(complex, h: int, coeff: str = "Z") -> BigradedGroup:
    """Homology in the single homological degree ``h``.

    Only ``d_{h-1}`` and ``d_h`` are built and reduced.
    """
    if coeff != "Z":
        full = homology_at(complex, h, "Z")
        above = homology_at(complex, h + 1, "Z") if coeff == "F2" else BigradedGroup({}, "Z")
        merged = BigradedGroup({**full.groups, **above.groups}, "Z")
        return merged.change_coefficients(coeff).slice(h)
    pivot_ok, inverse, conv = _field_ops("Z")
    dims = complex.dims(h)
    if not dims:
        return BigradedGroup({}, "Z")
    lower = complex.block_triplets(h - 1)
    upper = complex.block_triplets(h)
    groups = {}
    for q, n in dims.items():
        e_in, e_out = _Elim(), _Elim()
        _load(e_in, lower.get(q, ()), set(), set(), conv)
        pairs_in = e_in.eliminate(pivot_ok, inverse)
        dead = {y for _, y in pairs_in}
        _load(e_out, upper.get(q, ()), dead, set(), conv)
        pairs_out = e_out.eliminate(pivot_ok, inverse)
        for x, _ in pairs_out:
            e_in.drop_target(x)
        r_in, tors = _matrix_info(e_in, "Z")
        r_out, _ = _matrix_info(e_out, "Z")
        free = n - len(dead) - len(pairs_out) - r_in - r_out
        if free or tors:
            groups[(h, q)] = AbelianGroup(free, tuple(tors))
    return BigradedGroup(groups, "Z")


# -- field reductions with homotopy data --------------------------------------


class FieldReduction:
    """Result of reducing one q-slice over Q with explicit homotopy data.

    ``survivors[h]`` lists the generators of C^{h,q} that span homology;
    :meth:`include` sends a survivor to a cycle of the original complex
    and :meth:`project` sends a cycle to its homology coordinates.
    """

    def __init__(self, survivors, reps, logs):
        self.survivors = survivors
        self._reps = reps
        self._logs = logs

    def include(self, h, g) -> dict:
        return dict(self._reps[h].get(g, {g: 1}))

    def project(self, h, vec: Mapping) -> dict:
        v = {k: c for k, c in vec.items() if c}
        # substitutions for cancelled generators of degree h, in order
        for kind, x0, y0, inv, gamma in self._logs.get(h, ()):
            if kind == "src":
                v.pop(x0, None)
            else:
                c = v.pop(y0, 0)
                if c:
                    k = c * inv
                    for e, ge in gamma.items():
                        nv = v.get(e, 0) - ge * k
                        if nv:
                            v[e] = nv
                        else:
                            v.pop(e, None)
        return v


def field_reduction(complex, q: int, coeff: str = "Q") -> FieldReduction:
    """Fully reduce the ``q`` slice over a field, keeping representatives."""
    pivot_ok, inverse, conv = _field_ops(coeff)
    mod = 2 if coeff == "F2" else None
    degrees = complex.degrees
    survivors: dict[int, list] = {}
    reps: dict[int, dict] = {}
    logs: dict[int, list] = {}
    dead_in: set = set()
    for h in range(degrees[0], degrees[-1] + 1) if degrees else ():
        n = complex.dims(h).get(q, 0)
        e = _Elim(mod)
        _load(e, complex.block_triplets(h).get(q, ()), dead_in, set(), conv)
        log: list = []
        pairs = e.eliminate(pivot_ok, inverse, log)
        rep_h = reps.setdefault(h, {})
        for x0, y0, inv, gamma, delta in log:
            # inclusion: x -> x - inv * delta(x) * x0 for every other source x
            src_rep = rep_h.get(x0, {x0: 1})
            for x, dx in delta.items():
                r = rep_h.setdefault(x, {x: 1})
                k = dx * inv
                for g, cg in src_rep.items():
                    nv = r.get(g, 0) - k * cg
                    if nv:
                        r[g] = nv
                    else:
                        r.pop(g, None)
            logs.setdefault(h, []).append(("src", x0, y0, inv, gamma))
            logs.setdefault(h + 1, []).append(("tgt", x0, y0, inv, gamma))
        dead_src = {x for x, _ in pairs}
        survivors[h] = [g for g in range(n) if g not in dead_in and g not in dead_src]
        dead_in = {y for _, y in pairs}
    return FieldReduction(survivors, reps, logs)


def _apply(f_block, vec):
    out: dict = {}
    for (r, c), v in f_block.entries.items():
        if c in vec:
            nv = out.get(r, 0) + v * vec[c]
            if nv:
                out[r] = nv
            else:
                out.pop(r, None)
    return out


def _check_chain_map(complex, f, h, q, qt):
    """f_{h+1} d_h == d_h f_h on the q slice (f maps q to qt)."""
    lhs = f(h + 1, q) @ complex.block(h, q)
    rhs = complex.block(h, qt) @ f(h, q)
    if lhs != rhs:
        raise NotAChainMap(f"map does not commute with d at {(h, q)}")


def induced_map(f, complex, h: int, q: int, shift: int = 0, coeff: str = "Q"):
    """Matrix of the map induced on ``H^{h,q} -> H^{h,q+shift}`` over a field.

    ``f(h, q)`` must return the SparseIntMatrix of the chain map on
    ``C^{h,q} -> C^{h,q+shift}``.  Homology bases are the survivors of
    :func:`field_reduction`, in generator order.  Returns a list of rows
    (target coordinates) with one column per source basis vector.
    """
    if coeff not in ("Q", "F2"):
        raise ValueError("induced_map needs field coefficients")
    qt = q + shift
    for hh in (h - 1, h):
        _check_chain_map(complex, f, hh, q, qt)
    src = field_reduction(complex, q, coeff)
    tgt = src if shift == 0 else field_reduction(complex, qt, coeff)
    return map_on_homology(f(h, q), src, tgt, h, coeff)


def map_on_homology(block: SparseIntMatrix, src: FieldReduction, tgt: FieldReduction,
                    h: int, coeff: str = "Q"):
    """Matrix of a chain-map block between two reduced slices, without checks.

    Columns follow ``src.survivors[h]`` and rows ``tgt.survivors[h]``.
    """
    s_basis = src.survivors.get(h, [])
    t_basis = tgt.survivors.get(h, [])
    t_index = {g: i for i, g in enumerate(t_basis)}
    mat = [[0] * len(s_basis) for _ in t_basis]
    for j, g in enumerate(s_basis):
        image = _apply(block, src.include(h, g))
        for k, c in tgt.project(h, image).items():
            if coeff == "F2":
                c %= 2
            if c:
                mat[t_index[k]][j] = c
    return mat


def field_rank(rows, coeff: str = "Q") -> int:
    """Rank of a dense matrix (list of rows) over Q or F2."""
    p = 2 if coeff == "F2" else None
    work = [[Fraction(v) if p is None else int(v) % p for v in r] for r in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        top = work[rank]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                k = work[i][c] / top[c] if p is None else work[i][c]
                work[i] = [a - k * b if p is None else (a - k * b) % p
                           for a, b in zip(work[i], top)]
        rank += 1
    return rank
