"""
Oriented link diagrams in planar-diagram (PD) notation.

Each crossing is a 4-tuple of edge labels listed counterclockwise,
starting from the incoming under-strand.  The under-strand therefore
runs from position 0 to position 2 and the over-strand joins
positions 1 and 3, in a direction recovered by walking each component.

Unknotted components with no crossings cannot be written in PD form;
they are carried as ``free_loops`` and receive virtual edge labels
``max_label + 1, max_label + 2, ...`` so that a basepoint can sit on
them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "DiagramError",
    "LinkDiagram",
    "CrossingData",
    "parse_pd",
    "parse_json",
    "load_diagram",
    "component_count",
    "linking_number",
    "mirror",
    "crossing_signs",
    "sublink",
]


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagram input."""


_PD_RE = re.compile(r"^\s*PD\s*\[(.*)\]\s*$", re.S)
_X_RE = re.compile(r"X\s*\[\s*([^\]]*)\]")


@dataclass(frozen=True)
class CrossingData:
    signs: tuple[int, ...]
    n_plus: int
    n_minus: int


@dataclass(frozen=True, eq=False)
class LinkDiagram:
    """A validated, oriented link diagram.

    Parameters
    ----------
    crossings : sequence of 4-tuples of positive ints
        PD crossings, counterclockwise from the incoming under-strand.
    free_loops : int
        Number of crossingless unknotted components.
    basepoint : int, optional
        Edge label on the distinguished component.
    name : str, optional
        Human-readable label; not part of equality.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    free_loops: int = 0
    basepoint: int | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        xs = tuple(tuple(int(e) for e in x) for x in self.crossings)
        for x in xs:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have four entries")
            if any(e <= 0 for e in x):
                raise DiagramError(f"crossing {x} has a non-positive edge label")
        object.__setattr__(self, "crossings", xs)
        if self.free_loops < 0:
            raise DiagramError("free_loops must be non-negative")
        occ: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(xs):
            for pos, e in enumerate(x):
                occ.setdefault(e, []).append((ci, pos))
        bad = sorted(e for e, o in occ.items() if len(o) != 2)
        if bad:
            raise DiagramError(f"edge labels must occur exactly twice; offending: {bad}")
        object.__setattr__(self, "_occ", occ)
        self._orient()
        self._check_planar()
        if self.basepoint is not None and self.basepoint not in self.edges:
            raise DiagramError(f"basepoint {self.basepoint} is not an edge label")

    # -- construction helpers -------------------------------------------------

    def _other(self, e, dart):
        a, b = self._occ[e]
        return b if a == dart else a

    def _orient(self):
        xs, occ = self.crossings, self._occ
        head: dict[int, tuple[int, int]] = {}
        # undirected components first, so orientation can be seeded from
        # an under-strand occurrence whenever one exists
        seen: set[int] = set()
        groups: list[list[int]] = []
        for e0 in sorted(occ):
            if e0 in seen:
                continue
            group, stack = [], [e0]
            seen.add(e0)
            while stack:
                e = stack.pop()
                group.append(e)
                for ci, pos in occ[e]:
                    nxt = xs[ci][(pos + 2) % 4]
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            groups.append(sorted(group))

        for group in groups:
            start = None
            for e in group:
                for dart in occ[e]:
                    if dart[1] == 0:
                        start = (e, dart)
                        break
                    if dart[1] == 2:
                        start = (e, self._other(e, dart))
                        break
                if start:
                    break
            if start is None:
                # over-strands only: head of the smallest edge is its first occurrence
                e = group[0]
                start = (e, min(occ[e]))
            e, dart = start
            walked = 0
            while True:
                if e in head:
                    if head[e] != dart:
                        raise DiagramError(f"traversal reaches edge {e} from both ends")
                    break
                ci, pos = dart
                if pos == 2:
                    raise DiagramError(
                        f"edge {e} enters crossing {ci + 1} through the outgoing under slot")
                head[e] = dart
                walked += 1
                out_pos = (pos + 2) % 4
                nxt = xs[ci][out_pos]
                tail = (ci, out_pos)
                if out_pos == 0:
                    raise DiagramError(
                        f"edge {nxt} leaves crossing {ci + 1} through the incoming under slot")
                dart = self._other(nxt, tail)
                e = nxt
            if walked != len(group):
                raise DiagramError("traversal does not close up over its component")

        object.__setattr__(self, "_head", head)

    def _check_planar(self):
        xs = self.crossings
        if not xs:
            return
        # crossing-connectivity pieces
        parent = list(range(len(xs)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for e, ((c1, _), (c2, _)) in self._occ.items():
            parent[find(c1)] = find(c2)
        pieces = len({find(i) for i in range(len(xs))})
        seen = set()
        faces = 0
        for ci in range(len(xs)):
            for pos in range(4):
                if (ci, pos) in seen:
                    continue
                faces += 1
                dart = (ci, pos)
                while dart not in seen:
                    seen.add(dart)
                    e = xs[dart[0]][dart[1]]
                    c2, p2 = self._other(e, dart)
                    dart = (c2, (p2 + 1) % 4)
        if faces != len(xs) + 2 * pieces:
            raise DiagramError("crossing data does not describe a planar diagram")

    # -- derived data ---------------------------------------------------------

    @cached_property
    def max_label(self) -> int:
        return max(self._occ, default=0)

    @cached_property
    def edges(self) -> tuple[int, ...]:
        """All edge labels, including virtual labels of free loops."""
        return tuple(sorted(self._occ)) + tuple(
            self.max_label + k for k in range(1, self.free_loops + 1))

    @cached_property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edge labels of each component in traversal order.

        Components are sorted by smallest edge label, except that the
        basepointed component (if any) is moved to the end.
        """
        comps = []
        seen = set()
        for e0 in sorted(self._occ):
            if e0 in seen:
                continue
            walk, e = [], e0
            while e not in seen:
                seen.add(e)
                walk.append(e)
                ci, pos = self._head[e]
                e = self.crossings[ci][(pos + 2) % 4]
            comps.append(tuple(walk))
        comps.extend((self.max_label + k,) for k in range(1, self.free_loops + 1))
        comps.sort(key=min)
        if self.basepoint is not None:
            i = next(i for i, c in enumerate(comps) if self.basepoint in c)
            comps.append(comps.pop(i))
        return tuple(comps)

    @cached_property
    def edge_component(self) -> dict[int, int]:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    @property
    def distinguished(self) -> int | None:
        if self.basepoint is None:
            return None
        return self.edge_component[self.basepoint]

    @cached_property
    def signs(self) -> tuple[int, ...]:
        out = []
        for ci, x in enumerate(self.crossings):
            # over-strand entering at position 1 runs b -> d: negative
            out.append(-1 if self._head[x[1]] == (ci, 1) else 1)
        return tuple(out)

    def strand_components(self, ci: int) -> tuple[int, int]:
        """(under component, over component) at crossing ``ci``."""
        x = self.crossings[ci]
        return self.edge_component[x[0]], self.edge_component[x[1]]

    def over_direction(self, ci: int) -> tuple[int, int]:
        """(incoming, outgoing) edge labels of the over-strand at ``ci``."""
        x = self.crossings[ci]
        if self._head[x[1]] == (ci, 1):
            return x[1], x[3]
        return x[3], x[1]

    def with_basepoint(self, basepoint: int | None) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.free_loops, basepoint, self.name)

    def with_component_basepoint(self, component: int) -> "LinkDiagram":
        """Same diagram, basepointed on the smallest edge of ``component``."""
        if not 0 <= component < len(self.components):
            raise IndexError(f"component {component} out of range")
        return self.with_basepoint(min(self.components[component]))

    # -- serialization --------------------------------------------------------

    def to_pd(self) -> str:
        return "PD[" + ",".join("X[%d,%d,%d,%d]" % x for x in self.crossings) + "]"

    def to_json(self) -> dict:
        out = {"crossings": [list(x) for x in self.crossings], "free_loops": self.free_loops}
        if self.basepoint is not None:
            out["basepoint"] = self.basepoint
        if self.name is not None:
            out["name"] = self.name
        return out

    def __eq__(self, other):
        if not isinstance(other, LinkDiagram):
            return NotImplemented
        return (self.crossings, self.free_loops, self.basepoint) == (
            other.crossings, other.free_loops, other.basepoint)

    def __hash__(self):
        return hash((self.crossings, self.free_loops, self.basepoint))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return (f"<LinkDiagram{label}: {len(self.crossings)} crossings, "
                f"{len(self.components)} components>")


def parse_pd(text: str, free_loops: int = 0, basepoint: int | None = None,
             name: str | None = None) -> LinkDiagram:
    """Parse ``PD[X[a,b,c,d],...]`` into a validated :class:`LinkDiagram`.

    >>> parse_pd("PD[X[2,4,1,3],X[4,2,3,1]]").components
    ((1, 2), (3, 4))
    """
    m = _PD_RE.match(text)
    if not m:
        raise DiagramError(f"not a PD code: {text!r}")
    body = m.group(1).strip()
    crossings = []
    rest = _X_RE.sub("", body)
    if rest.replace(",", "").strip():
        raise DiagramError(f"unexpected text in PD code: {rest.strip()!r}")
    for entries in _X_RE.findall(body):
        try:
            vals = [int(v) for v in entries.split(",")]
        except ValueError:
            raise DiagramError(f"non-integer edge label in X[{entries}]") from None
        crossings.append(tuple(vals))
    return LinkDiagram(tuple(crossings), free_loops, basepoint, name)


def parse_json(obj) -> LinkDiagram:
    """Build a diagram from the JSON form (a dict or its string encoding)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"invalid JSON diagram: {exc}") from None
    if not isinstance(obj, dict) or "crossings" not in obj:
        raise DiagramError("JSON diagram needs a 'crossings' list")
    try:
        crossings = tuple(tuple(x) for x in obj["crossings"])
    except TypeError:
        raise DiagramError("'crossings' must be a list of 4-element lists") from None
    return LinkDiagram(crossings, int(obj.get("free_loops", 0)),
                       obj.get("basepoint"), obj.get("name"))


def load_diagram(text: str) -> LinkDiagram:
    """Parse either the PD grammar or the JSON form."""
    s = text.strip()
    if s.startswith("{"):
        return parse_json(s)
    return parse_pd(s)


def component_count(d: LinkDiagram) -> int:
    return len(d.components)


def linking_number(d: LinkDiagram, i: int, j: int) -> int:
    """Half the signed count of crossings between components ``i`` and ``j``."""
    r = len(d.components)
    if not (0 <= i < r and 0 <= j < r):
        raise IndexError(f"component index out of range for {r} components")
    if i == j:
        raise ValueError("linking number needs two distinct components")
    total = 0
    for ci, s in enumerate(d.signs):
        if {*d.strand_components(ci)} == {i, j}:
            total += s
    return total // 2


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; edge labels and orientation are kept."""
    out = []
    for ci, (a, b, c, e) in enumerate(d.crossings):
        if d.over_direction(ci)[0] == e:
            out.append((e, a, b, c))
        else:
            out.append((b, c, e, a))
    name = None if d.name is None else f"mirror({d.name})"
    return LinkDiagram(tuple(out), d.free_loops, d.basepoint, name)


def crossing_signs(d: LinkDiagram) -> CrossingData:
    s = d.signs
    return CrossingData(s, s.count(1), s.count(-1))


def sublink(d: LinkDiagram, keep) -> LinkDiagram:
    """The diagram of the components in ``keep``, other strands erased.

    Crossings between a kept and an erased strand are smoothed away by
    joining the two edges of the kept strand.  Kept components left
    without crossings become free loops.
    """
    keep = set(keep)
    comp = d.edge_component
    parent = {e: e for e in d.edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    kept = []
    for ci, x in enumerate(d.crossings):
        under, over = d.strand_components(ci)
        if under in keep and over in keep:
            kept.append(x)
        elif under in keep:
            parent[find(x[0])] = find(x[2])
        elif over in keep:
            parent[find(x[1])] = find(x[3])
    relabel = {}
    new = []
    for x in kept:
        row = []
        for e in x:
            root = find(e)
            if root not in relabel:
                relabel[root] = len(relabel) + 1
            row.append(relabel[root])
        new.append(tuple(row))
    loops = 0
    bp = None
    for i in sorted(keep):
        roots = {find(e) for e in d.components[i]}
        if not roots & relabel.keys():
            loops += 1
    sub = LinkDiagram(tuple(new), loops, None)
    if d.basepoint is not None and comp[d.basepoint] in keep:
        root = find(d.basepoint)
        if root in relabel:
            bp = relabel[root]
        else:
            # free loops are numbered in component order after the PD edges
            dist = comp[d.basepoint]
            idx = sum(1 for i in sorted(keep) if i <= dist
                      and not {find(e) for e in d.components[i]} & relabel.keys())
            bp = sub.max_label + idx
        sub = sub.with_basepoint(bp)
    return sub
