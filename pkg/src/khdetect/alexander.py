"""
Alexander polynomials from Fox calculus, and the Alexander-graded shapes
compatible with a given linking number.

All abelianized meridians are sent to a single variable ``t``.  For a
two-component link the result is ``Δ_L(t) = ±(t^{1/2} - t^{-1/2}) Δ~_L(t, t)``,
so the diagonal of the two-variable polynomial is recovered by exact
division instead of a two-variable gcd.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import accumulate, combinations_with_replacement, product

import numpy as np

from .laurent import ONE, ZERO, LaurentPoly, NotDivisible
from .linkdiag import LinkDiagram

__all__ = [
    "WirtingerPresentation",
    "wirtinger",
    "fox_matrix",
    "alexander_single",
    "diagonal_multivariable",
    "torres_check",
    "KhiShape",
    "khi_euler_divisibility",
    "prop3_solver",
    "second_derivative_identity",
    "euler_series_of_alexander",
    "T_MINUS_2_PLUS_T_INV",
    "SQRT_T_DIFF",
]

T = LaurentPoly({2: 1})
T_MINUS_2_PLUS_T_INV = LaurentPoly({2: 1, 0: -2, -2: 1})
SQRT_T_DIFF = LaurentPoly({1: 1, -1: -1})


@dataclass(frozen=True)
class WirtingerPresentation:
    """Arcs as generators, one conjugation relation per crossing.

    Attributes
    ----------
    generators : tuple of tuple of int
        Each arc as the edge labels it covers.
    relations : tuple of (over, under_in, under_out, sign)
        Arc indices at each crossing and its sign.
    component : tuple of int
        Link component of each arc (the abelianization map).
    """

    generators: tuple
    relations: tuple
    component: tuple

    def words(self) -> list[list[tuple[int, int]]]:
        """Relations as words in (generator, ±1) letters.

        Positive crossings give ``o a o^-1 b^-1`` and negative ones
        ``o^-1 a o b^-1`` with ``o`` over, ``a`` incoming under and ``b``
        outgoing under.
        """
        out = []
        for o, a, b, s in self.relations:
            if s > 0:
                out.append([(o, 1), (a, 1), (o, -1), (b, -1)])
            else:
                out.append([(o, -1), (a, 1), (o, 1), (b, -1)])
        return out


def wirtinger(d: LinkDiagram) -> WirtingerPresentation:
    """Wirtinger presentation read off the PD code."""
    parent = {e: e for e in d.edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in d.crossings:
        parent[find(x[1])] = find(x[3])
    roots: dict[int, list[int]] = {}
    for e in d.edges:
        roots.setdefault(find(e), []).append(e)
    arcs = sorted(roots.values(), key=min)
    arc_of = {e: i for i, arc in enumerate(arcs) for e in arc}
    rels = tuple((arc_of[x[1]], arc_of[x[0]], arc_of[x[2]], s)
                 for x, s in zip(d.crossings, d.signs))
    comp = tuple(d.edge_component[arc[0]] for arc in arcs)
    return WirtingerPresentation(tuple(tuple(a) for a in arcs), rels, comp)


def fox_matrix(p: WirtingerPresentation) -> list[list[LaurentPoly]]:
    """Abelianized Fox Jacobian with every meridian sent to ``t``.

    Negative rows are multiplied by ``t`` to stay polynomial.
    """
    n = len(p.generators)
    rows = []
    for o, a, b, s in p.relations:
        row = [ZERO] * n
        if s > 0:
            entries = ((o, ONE - T), (a, T), (b, LaurentPoly({0: -1})))
        else:
            entries = ((o, T - ONE), (a, ONE), (b, -T))
        for g, v in entries:
            row[g] = row[g] + v
        rows.append(row)
    return rows


def _bareiss(m: list[list[LaurentPoly]]) -> LaurentPoly:
    """Determinant by fraction-free elimination with exact Laurent division."""
    m = [list(r) for r in m]
    n = len(m)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * piv - m[i][k] * m[k][j]).divide_exact(prev)
            m[i][k] = ZERO
        prev = piv
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def alexander_single(d: LinkDiagram) -> LaurentPoly:
    """Single-variable Alexander polynomial, symmetrized.

    One row and one column of the Fox matrix are deleted.  The result is
    centred at exponent 0 (half-integer exponents for an even number of
    components), positive at ``t = 1`` or else with positive leading
    coefficient.  Split diagrams give 0.
    """
    r = len(d.components)
    if not d.crossings:
        return ONE if d.free_loops == 1 else ZERO
    if d.free_loops:
        return ZERO
    p = wirtinger(d)
    if len(p.generators) != len(p.relations):
        # a component that never passes under lifts off the rest
        return ZERO if r > 1 else ONE
    fm = fox_matrix(p)
    minor = [row[1:] for row in fm[1:]]
    return _bareiss(minor).symmetrized()


def diagonal_multivariable(delta: LaurentPoly) -> LaurentPoly:
    """``Δ~_L(t, t) = Δ_L(t) / (t^{1/2} - t^{-1/2})`` for a two-component link.

    Raises
    ------
    NotDivisible
        If ``delta`` is not a multiple of ``t^{1/2} - t^{-1/2}``.
    """
    if delta.is_zero():
        return ZERO
    return delta.divide_exact(SQRT_T_DIFF)


def torres_check(delta_diag: LaurentPoly, lk: int) -> bool:
    """``|Δ~(1, 1)| == |lk|``."""
    return abs(delta_diag.evaluate_at_1()) == abs(lk)


def euler_series_of_alexander(delta: LaurentPoly, components: int) -> LaurentPoly:
    """``-(t^{1/2} - t^{-1/2})^{r-1} Δ_L(t)``, the graded Euler characteristic of KHI."""
    return -(SQRT_T_DIFF ** (components - 1)) * delta


# -- Alexander-graded shapes --------------------------------------------------


@dataclass(frozen=True)
class KhiShape:
    """Ranks per Alexander grading, with optional Euler characteristics.

    ``euler[j]`` has the parity of ``gradings[j]`` and absolute value at most
    it; when it equals ``±gradings[j]`` the grading carries a single sign.
    """

    gradings: dict
    euler: dict = field(default_factory=dict)

    def __post_init__(self):
        for j, n in self.gradings.items():
            if n < 0:
                raise ValueError("ranks are non-negative")
            if self.gradings.get(-j, 0) != n:
                raise ValueError(f"shape is not symmetric at grading {j}")
        for j, c in self.euler.items():
            n = self.gradings.get(j, 0)
            if abs(c) > n or (n - c) % 2:
                raise ValueError(f"Euler characteristic {c} impossible in rank {n}")

    @classmethod
    def from_signs(cls, gradings: dict, signs: dict) -> "KhiShape":
        return cls(dict(gradings), {j: signs[j] * n for j, n in gradings.items()})

    @property
    def total_rank(self) -> int:
        return sum(self.gradings.values())

    @property
    def support(self) -> list[int]:
        return sorted((j for j, n in self.gradings.items() if n), reverse=True)

    @property
    def signs(self) -> dict | None:
        """``ε_j`` for every nonzero grading, or None if some grading is mixed."""
        out = {}
        for j in self.support:
            c, n = self.euler.get(j, 0), self.gradings[j]
            if abs(c) != n:
                return None
            out[j] = 1 if c > 0 else -1
        return out

    def series(self) -> LaurentPoly:
        return LaurentPoly({2 * j: c for j, c in self.euler.items()})

    def negated(self) -> "KhiShape":
        return KhiShape(dict(self.gradings), {j: -c for j, c in self.euler.items()})

    def key(self):
        return (tuple(sorted(self.gradings.items())), tuple(sorted(self.euler.items())))

    def __eq__(self, other):
        return isinstance(other, KhiShape) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self) -> dict:
        out = {"gradings": {str(j): self.gradings[j] for j in self.support}}
        signs = self.signs
        if signs is not None:
            out["signs"] = {str(j): signs[j] for j in self.support}
        else:
            out["euler"] = {str(j): self.euler.get(j, 0) for j in self.support}
        return out


def khi_euler_divisibility(shape: KhiShape) -> tuple[LaurentPoly, bool]:
    """Divide the signed Euler series by ``t - 2 + t^{-1}``.

    Returns ``(quotient, ok)``; the quotient is zero when ``ok`` is False.
    """
    got = _quotient_coeffs(shape.euler)
    if got is None:
        return ZERO, False
    lo, coeffs = got
    return LaurentPoly({2 * (lo + i): c for i, c in enumerate(coeffs)}), True


def _quotient_coeffs(euler: dict):
    """Dense coefficients ``(lowest exponent, list)`` of the quotient, or None."""
    if not any(euler.values()):
        return 0, []
    lo, hi = min(euler), max(euler)
    coeffs = [euler.get(j, 0) for j in range(lo, hi + 1)]
    # t - 2 + t^-1 = (t - 1)^2 / t: divide by t - 1 twice, then multiply by t
    for _ in range(2):
        sums = list(accumulate(coeffs))
        if sums[-1]:
            return None
        coeffs = [-v for v in sums[:-1]]
    return lo + 1, coeffs


def _rank_shapes(budget: int, m_max: int):
    """Symmetric rank vectors ``{j: n}`` with total rank in ``1..budget``."""
    for r0 in range(budget + 1):
        half = (budget - r0) // 2
        for size in range(half + 1):
            # multiset of positive gradings, one entry per unit of rank
            for js in combinations_with_replacement(range(1, m_max + 1), size):
                if r0 == 0 and size == 0:
                    continue
                ranks = {0: r0} if r0 else {}
                for j in js:
                    ranks[j] = ranks.get(j, 0) + 1
                    ranks[-j] = ranks.get(-j, 0) + 1
                yield ranks


def _euler_choices(n: int):
    return range(-n, n + 1, 2)


def _canonical(shape: KhiShape) -> KhiShape:
    for j in shape.support:
        c = shape.euler.get(j, 0)
        if c:
            return shape if c > 0 else shape.negated()
    return shape


def prop3_solver(rank_budget: int = 4, lk_abs: int = 1, m_max: int = 50,
                 min_gradings: int = 3) -> set[KhiShape]:
    """All Alexander-graded shapes compatible with the linking number.

    Enumerates symmetric rank vectors of total rank at most ``rank_budget``
    in gradings ``|j| <= m_max`` with at least ``min_gradings`` nonzero
    gradings, together with every admissible Euler characteristic per
    grading.  A shape survives when ``t - 2 + t^{-1}`` divides its Euler
    series and the quotient has ``|value at 1| == lk_abs``.  Shapes are
    returned up to a global sign (first nonzero Euler characteristic
    positive).
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    out = set()
    for ranks in _rank_shapes(rank_budget, m_max):
        if len(ranks) < min_gradings:
            continue
        js = sorted(ranks)
        chis = _balanced_choices(tuple(ranks[j] for j in js))
        if not len(chis):
            continue
        # a double root at t = 1 needs the first moment to vanish as well;
        # then q(1) = p''(1) / 2 = sum(j^2 chi_j) / 2
        j = np.array(js)
        chis = chis[chis @ j == 0]
        keep = np.abs(chis @ (j * j)) == 2 * lk_abs
        for row in chis[keep].tolist():
            euler = {j: c for j, c in zip(js, row) if c}
            out.add(_canonical(KhiShape(dict(ranks), euler)))
    return out


@lru_cache(maxsize=None)
def _balanced_choices(ranks: tuple[int, ...]) -> np.ndarray:
    """Euler characteristic vectors for these ranks that sum to zero."""
    rows = [c for c in product(*(_euler_choices(n) for n in ranks)) if sum(c) == 0]
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(ranks))


def second_derivative_identity(p: LaurentPoly) -> int:
    """``q(1)`` for ``p = (t - 2 + t^{-1}) q``, computed as ``p''(1) / 2``.

    Raises
    ------
    ValueError
        If ``p`` is zero or lacks a double root at ``t = 1``.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no well-defined quotient value")
    if p.evaluate_at_1() or p.derivative_at_1():
        raise ValueError("polynomial is not divisible by (t - 1)^2")
    v = p.second_derivative_at_1() / 2
    if v.denominator != 1:
        raise ValueError("second derivative identity gave a non-integer")
    return int(v)
