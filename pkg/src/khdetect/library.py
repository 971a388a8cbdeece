"""Built-in diagram library used by the CLI and the test-suite."""

from __future__ import annotations

from .linkdiag import LinkDiagram, parse_pd

__all__ = ["LIBRARY", "get_diagram", "names", "HOPF_PLUS_VARIANTS", "HOPF_MINUS_VARIANTS"]


def _braid_closure(word, strands, name=None):
    """PD code of the closure of a braid word (``+i`` = sigma_i, ``-i`` its inverse).

    Strands run upward; ``sigma_i`` is a positive crossing.  Only used to
    populate the library, not exposed as an input format.
    """
    current = list(range(1, strands + 1))
    nxt = strands + 1
    raw = []
    for g in word:
        i = abs(g) - 1
        left, right = current[i], current[i + 1]
        new_left, new_right = nxt, nxt + 1
        nxt += 2
        if g > 0:
            # under: bottom-right -> top-left, over: bottom-left -> top-right
            raw.append((right, new_right, new_left, left))
        else:
            # under: bottom-left -> top-right, over: bottom-right -> top-left
            raw.append((left, right, new_right, new_left))
        current[i], current[i + 1] = new_left, new_right
    ident = {top: bottom for bottom, top in zip(range(1, strands + 1), current)}
    loops = sum(1 for p in range(1, strands + 1) if ident.get(p) == p
                and all(p not in x for x in raw))
    relabel: dict[int, int] = {}
    out = []
    for x in raw:
        row = []
        for e in x:
            e = ident.get(e, e)
            if e not in relabel:
                relabel[e] = len(relabel) + 1
            row.append(relabel[e])
        out.append(tuple(row))
    return LinkDiagram(tuple(out), loops, None, name)


def _pd(text, name, free_loops=0):
    return parse_pd(text, free_loops=free_loops, name=name)


def _build():
    lib = {
        "unknot": LinkDiagram((), 1, None, "unknot"),
        "unknot-kink": _pd("PD[X[1,1,2,2]]", "unknot-kink"),
        "unlink-2": LinkDiagram((), 2, None, "unlink-2"),
        "unlink-3": LinkDiagram((), 3, None, "unlink-3"),
        "hopf-plus": _pd("PD[X[2,4,1,3],X[4,2,3,1]]", "hopf-plus"),
        "hopf-minus": _braid_closure([-1, -1], 2, "hopf-minus"),
        "hopf-plus-r2": _braid_closure([1, 2, -2, 1, 2, 1, -1], 3, "hopf-plus-r2"),
        "hopf-minus-r2": _braid_closure([-1, -2, 2, -1, -2, -1, 1], 3, "hopf-minus-r2"),
        "hopf-plus-stab": _braid_closure([1, 1, 2], 3, "hopf-plus-stab"),
        "hopf-minus-stab": _braid_closure([-1, -1, -2], 3, "hopf-minus-stab"),
        "hopf-plus-r2b": _braid_closure([1, 1, 2, 3, -2, 2, -1, 1], 4, "hopf-plus-r2b"),
        "hopf-minus-r2b": _braid_closure([-1, -1, -2, -3, 2, -2, 1, -1], 4,
                                         "hopf-minus-r2b"),
        "trefoil-left": _pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]", "trefoil-left"),
        "trefoil-right": _braid_closure([1, 1, 1], 2, "trefoil-right"),
        "figure-eight": _pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]",
                            "figure-eight"),
        "torus-2-4": _braid_closure([1, 1, 1, 1], 2, "torus-2-4"),
        "whitehead": _braid_closure([1, 1, -2, 1, -2], 3, "whitehead"),
        "borromean": _braid_closure([1, -2] * 3, 3, "borromean"),
        "hopf-split-unknot": _braid_closure([1, 1], 3, "hopf-split-unknot"),
        "torus-3-4": _braid_closure([1, 2] * 4, 3, "torus-3-4"),
        "cinquefoil": _braid_closure([1] * 5, 2, "cinquefoil"),
        "knot-12": _braid_closure([1, -2] * 5 + [1, 1], 3, "knot-12"),
        "torus-2-12": _braid_closure([1] * 12, 2, "torus-2-12"),
        "link-12": _braid_closure([1, -2] * 6, 3, "link-12"),
    }
    return lib


LIBRARY: dict[str, LinkDiagram] = _build()

HOPF_PLUS_VARIANTS = ("hopf-plus", "hopf-plus-stab", "hopf-plus-r2", "hopf-plus-r2b")
HOPF_MINUS_VARIANTS = ("hopf-minus", "hopf-minus-stab", "hopf-minus-r2", "hopf-minus-r2b")


def names() -> list[str]:
    return list(LIBRARY)


def get_diagram(name: str) -> LinkDiagram:
    try:
        return LIBRARY[name]
    except KeyError:
        raise KeyError(f"unknown diagram {name!r}; try one of: {', '.join(LIBRARY)}") from None
