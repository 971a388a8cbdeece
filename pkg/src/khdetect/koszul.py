"""
Koszul complex of a module over ``Q[x_1..x_n]/(x_i^2)`` and its total rank.

A module is given by a vector space ``V = Q^m`` and commuting square-zero
matrices ``x_1..x_n``.  The complex has ``V ⊗ Λ^k Q^n`` in degree ``k`` and
differential ``v ⊗ e_S -> sum_i x_i v ⊗ e_i ∧ e_S``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .homalg import BigradedGroup, field_rank
from .khovanov import ModuleAction, khr, module_action
from .linkdiag import LinkDiagram

__all__ = [
    "KoszulComplex",
    "koszul_tensor_rank",
    "two_term_rank",
    "khi_rank_bound",
]


def _wedge_sign(i: int, subset: tuple[int, ...]) -> int:
    """Sign of moving ``e_i`` into sorted position inside ``e_S``."""
    return -1 if sum(1 for j in subset if j < i) % 2 else 1


class KoszulComplex:
    """The complex ``V ⊗ Λ^* Q^n`` with the wedge-with-``x`` differential.

    Parameters
    ----------
    matrices : sequence of square matrices
        The actions ``x_1..x_n`` on ``V`` (lists of rows, all the same size).
    dim : int, optional
        ``dim V``; only needed when ``matrices`` is empty.
    """

    def __init__(self, matrices, dim: int | None = None):
        self.matrices = [[[Fraction(v) for v in row] for row in m] for m in matrices]
        if dim is None:
            if not self.matrices:
                raise ValueError("dim is required when there are no matrices")
            dim = len(self.matrices[0])
        for m in self.matrices:
            if len(m) != dim or any(len(row) != dim for row in m):
                raise ValueError(f"action matrix is not {dim}x{dim}")
        self.dim = dim
        self.n = len(self.matrices)
        self.terms = [list(combinations(range(self.n), k)) for k in range(self.n + 1)]

    @property
    def r_minus_1(self) -> int:
        return self.n

    def differential(self, k: int):
        """Dense matrix of ``d: C^k -> C^{k+1}`` (rows index the target)."""
        m = self.dim
        src, tgt = self.terms[k], self.terms[k + 1]
        t_index = {s: i for i, s in enumerate(tgt)}
        out = [[Fraction(0)] * (m * len(src)) for _ in range(m * len(tgt))]
        for si, s in enumerate(src):
            for i in range(self.n):
                if i in s:
                    continue
                ti = t_index[tuple(sorted(s + (i,)))]
                sign = _wedge_sign(i, s)
                x = self.matrices[i]
                for a in range(m):
                    for b in range(m):
                        if x[a][b]:
                            out[ti * m + a][si * m + b] += sign * x[a][b]
        return out

    def cohomology_ranks(self) -> list[int]:
        ranks = [field_rank(self.differential(k)) if self.dim and self.terms[k + 1] else 0
                 for k in range(self.n)]
        out = []
        for k in range(self.n + 1):
            size = self.dim * len(self.terms[k])
            out.append(size - (ranks[k] if k < self.n else 0) - (ranks[k - 1] if k else 0))
        return out

    def total_rank(self) -> int:
        return sum(self.cohomology_ranks())


def two_term_rank(dim: int, rank_x: int) -> int:
    """Total rank of ``V --x--> V``: kernel plus cokernel."""
    return 2 * dim - 2 * rank_x


def koszul_tensor_rank(action: ModuleAction | list, khr_q: BigradedGroup | None = None) -> int:
    """Total rank over Q of the homology of ``Khr ⊗ K(x_1..x_{r-1})``.

    Parameters
    ----------
    action : ModuleAction or list of matrices
    khr_q : BigradedGroup, optional
        Reduced homology over a field; when given its total rank must equal
        the size of the matrices.
    """
    if isinstance(action, ModuleAction):
        mats = [action.matrices[c] for c in sorted(action.matrices)]
        dim = action.dim
    else:
        mats = list(action)
        dim = len(mats[0]) if mats else 0
    if khr_q is not None:
        expected = sum(khr_q.ranks().values())
        if expected != dim:
            raise ValueError(f"action is {dim}-dimensional but Khr has rank {expected}")
    if dim == 0:
        return 0
    return KoszulComplex(mats, dim).total_rank()


def khi_rank_bound(d: LinkDiagram, distinguished: int | None = None) -> int:
    """Upper bound on the instanton rank: Koszul total rank of ``Khr(L;Q)``."""
    act = module_action(d, distinguished, check_second_edge=False)
    return koszul_tensor_rank(act, khr(d, act.distinguished, "Q"))
