"""Weighted plumbing graphs and their exact intersection forms.

A graph is an immutable value.  Vertices are kept sorted by id (plain string
order), edges are unordered pairs kept in a multiset, and arrows mark strict
transforms of curves.  All arithmetic is on Python integers, so determinants
are exact however large they get.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

from .errors import (
    InvalidGraph,
    ParseError,
    UnknownEulerNumber,
    UnknownVertex,
)

__all__ = [
    "Vertex",
    "Edge",
    "Arrow",
    "PlumbingGraph",
    "chain_graph",
    "intersection_matrix",
    "determinant",
    "matrix_determinant",
    "leading_minors",
    "is_negative_definite",
    "is_bamboo",
    "is_rupture_vertex",
    "is_connected",
    "is_tree",
    "connected_components",
    "cycle_rank",
    "graph_to_dict",
    "graph_from_dict",
    "dumps",
    "loads",
    "to_dot",
]


def _check_int(value, what, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidGraph(f"{what} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InvalidGraph(f"{what} must be >= {minimum}, got {value}")


@dataclass(frozen=True)
class Vertex:
    """One component of the divisor.

    ``euler`` is the self-intersection number, ``None`` when unknown.  ``mult``
    is the multiplicity along this component of a designated function.
    """

    id: str
    genus: int = 0
    euler: Optional[int] = None
    mult: Optional[int] = None
    name: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise InvalidGraph(f"vertex id must be a non-empty string, got {self.id!r}")
        _check_int(self.genus, f"genus of {self.id}", 0)
        if self.euler is not None:
            _check_int(self.euler, f"euler of {self.id}")
        if self.mult is not None:
            _check_int(self.mult, f"mult of {self.id}", 1)


@dataclass(frozen=True, order=True)
class Edge:
    """Unordered pair of vertex ids; stored with ``a <= b``."""

    a: str
    b: str

    def __post_init__(self):
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def is_loop(self):
        return self.a == self.b

    def other(self, v):
        if v == self.a:
            return self.b
        if v == self.b:
            return self.a
        raise UnknownVertex(f"{v} is not an end of {self.a}-{self.b}", vertex=v)

    def __iter__(self):
        return iter((self.a, self.b))


@dataclass(frozen=True)
class Arrow:
    """Strict transform of a curve meeting the divisor at vertex ``at``.

    ``at`` is ``None`` for a free arrow, i.e. a smooth curve on a smooth germ
    after everything has been blown down.  ``mult`` 0 marks a curve that is
    tracked for its position only and is not a factor of the function.
    """

    at: Optional[str]
    label: str = ""
    mult: Optional[int] = None

    def __post_init__(self):
        if self.mult is not None:
            _check_int(self.mult, f"mult of arrow {self.label!r}", 0)

    def sort_key(self):
        return (self.at is None, self.at or "", self.label, -1 if self.mult is None else self.mult)


def _edge_key(e):
    return (e.a, e.b)


def _as_edge(e):
    if isinstance(e, Edge):
        return e
    u, v = e
    return Edge(u, v)


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: tuple = ()
    edges: tuple = ()
    arrows: tuple = ()

    def __post_init__(self):
        verts = tuple(sorted(self.vertices, key=lambda x: x.id))
        ids = [x.id for x in verts]
        if len(set(ids)) != len(ids):
            dup = sorted(k for k, c in Counter(ids).items() if c > 1)
            raise InvalidGraph(f"duplicate vertex ids {dup}")
        known = set(ids)
        edges = tuple(sorted((_as_edge(e) for e in self.edges), key=_edge_key))
        for e in edges:
            for end in e:
                if end not in known:
                    raise InvalidGraph(f"edge {e.a}-{e.b} references unknown vertex {end}")
        arrows = tuple(sorted(self.arrows, key=Arrow.sort_key))
        for a in arrows:
            if a.at is not None and a.at not in known:
                raise InvalidGraph(f"arrow {a.label!r} references unknown vertex {a.at}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "arrows", arrows)

    # lookups

    @cached_property
    def _by_id(self):
        return {v.id: v for v in self.vertices}

    @cached_property
    def _incidence(self):
        inc = {v.id: [] for v in self.vertices}
        for e in self.edges:
            inc[e.a].append(e)
            if not e.is_loop:
                inc[e.b].append(e)
        return inc

    @property
    def ids(self):
        return tuple(v.id for v in self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, vid):
        return vid in self._by_id

    def vertex(self, vid) -> Vertex:
        try:
            return self._by_id[vid]
        except KeyError:
            raise UnknownVertex(f"no vertex {vid!r}", vertex=vid) from None

    def incident_edges(self, vid):
        self.vertex(vid)
        return list(self._incidence[vid])

    def neighbors(self, vid):
        """Edge-neighbours of ``vid`` listed with edge multiplicity.

        A self-loop contributes ``vid`` twice.
        """
        out = []
        for e in self.incident_edges(vid):
            if e.is_loop:
                out += [vid, vid]
            else:
                out.append(e.other(vid))
        return out

    def degree(self, vid):
        return len(self.neighbors(vid))

    def edge_multiplicity(self, u, v):
        return sum(1 for e in self.edges if e == Edge(u, v))

    def self_loops(self, vid):
        return sum(1 for e in self.incident_edges(vid) if e.is_loop)

    def arrows_at(self, vid):
        return [a for a in self.arrows if a.at == vid]

    @property
    def free_arrows(self):
        return [a for a in self.arrows if a.at is None]

    @property
    def has_self_loops(self):
        return any(e.is_loop for e in self.edges)

    # functional updates

    def replace_vertex(self, vid, **changes):
        self.vertex(vid)
        verts = [replace(v, **changes) if v.id == vid else v for v in self.vertices]
        return PlumbingGraph(verts, self.edges, self.arrows)

    def with_eulers(self, eulers):
        verts = [replace(v, euler=eulers[v.id]) if v.id in eulers else v for v in self.vertices]
        return PlumbingGraph(verts, self.edges, self.arrows)

    def without_arrows(self):
        return PlumbingGraph(self.vertices, self.edges, ())

    def relabel(self, mapping):
        """Rename vertices by ``mapping``; ids not in the mapping are kept."""
        m = lambda x: mapping.get(x, x)  # noqa: E731
        verts = [replace(v, id=m(v.id)) for v in self.vertices]
        edges = [Edge(m(e.a), m(e.b)) for e in self.edges]
        arrows = [replace(a, at=None if a.at is None else m(a.at)) for a in self.arrows]
        return PlumbingGraph(verts, edges, arrows)

    def fresh_id(self, prefix="E"):
        """Smallest ``prefix<k>`` (k >= 1) not already used as an id."""
        k = 1
        while f"{prefix}{k}" in self._by_id:
            k += 1
        return f"{prefix}{k}"


def chain_graph(eulers, genus=0, prefix="E"):
    """Linear graph E1 - E2 - ... with the given Euler numbers."""
    ids = [f"{prefix}{i + 1}" for i in range(len(eulers))]
    verts = [Vertex(i, genus, e) for i, e in zip(ids, eulers)]
    return PlumbingGraph(verts, list(zip(ids, ids[1:])), ())


# linear algebra


def intersection_matrix(g: PlumbingGraph):
    """Intersection matrix in the (sorted) vertex order of ``g``.

    Diagonal entries are Euler numbers, plus 2 per self-loop.  Off-diagonal
    entries count edges.
    """
    index = {}
    for i, v in enumerate(g.vertices):
        if v.euler is None:
            raise UnknownEulerNumber(f"vertex {v.id} has no Euler number", vertex=v.id)
        index[v.id] = i
    n = len(index)
    m = [[0] * n for _ in range(n)]
    for i, v in enumerate(g.vertices):
        m[i][i] = v.euler
    for e in g.edges:
        i, j = index[e.a], index[e.b]
        if i == j:
            m[i][i] += 2
        else:
            m[i][j] += 1
            m[j][i] += 1
    return m


def _eliminate(a, k, p, prev):
    """One Bareiss step below pivot ``a[k][k] = p``; columns <= k are left stale."""
    tail_k = a[k][k + 1:]
    for i in range(k + 1, len(a)):
        row = a[i]
        aik = row[k]
        if aik:
            row[k + 1:] = [(x * p - aik * y) // prev for x, y in zip(row[k + 1:], tail_k)]
        elif p != prev:
            row[k + 1:] = [x * p // prev for x in row[k + 1:]]


def matrix_determinant(m):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        p = a[k][k]
        _eliminate(a, k, p, prev)
        prev = p
    return sign * a[n - 1][n - 1]


def leading_minors(m):
    """Leading principal minors, by elimination without pivoting.

    Stops early (returning a shorter list ending in 0) when a minor vanishes.
    """
    n = len(m)
    a = [list(row) for row in m]
    out = []
    prev = 1
    for k in range(n):
        p = a[k][k]
        out.append(p)
        if p == 0:
            break
        _eliminate(a, k, p, prev)
        prev = p
    return out


def determinant(g: PlumbingGraph):
    return matrix_determinant(intersection_matrix(g))


def is_negative_definite(g: PlumbingGraph):
    # Sylvester: the k-th leading minor must have sign (-1)^k.
    minors = leading_minors(intersection_matrix(g))
    if len(minors) < len(g):
        return False
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(minors))


# shape predicates


def connected_components(g: PlumbingGraph):
    seen, comps = set(), []
    for v in g.ids:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g):
    return len(connected_components(g)) == 1


def cycle_rank(g):
    """First Betti number of the underlying graph."""
    return len(g.edges) - len(g) + len(connected_components(g))


def is_tree(g):
    return is_connected(g) and cycle_rank(g) == 0


def is_bamboo(g: PlumbingGraph):
    """Connected, acyclic, every vertex of degree at most 2, all genera 0.

    Arrows are ignored.  The empty graph is not a bamboo.
    """
    if not is_tree(g):
        return False
    return all(v.genus == 0 and g.degree(v.id) <= 2 for v in g.vertices)


def chain_order(g: PlumbingGraph):
    """Vertex ids of a bamboo in path order, starting from the smaller end id."""
    if not is_bamboo(g):
        raise InvalidGraph("graph is not a bamboo")
    if len(g) == 1:
        return [g.ids[0]]
    start = min(v for v in g.ids if g.degree(v) == 1)
    path, prev = [start], None
    while len(path) < len(g):
        nxt = [u for u in g.neighbors(path[-1]) if u != prev]
        prev = path[-1]
        path.append(nxt[0])
    return path


def is_rupture_vertex(g: PlumbingGraph, vid):
    v = g.vertex(vid)
    return v.genus > 0 or g.degree(vid) + len(g.arrows_at(vid)) >= 3


# serialization

_SAFE_INT = 2**53


def json_int(x):
    """Integers beyond double precision are written as strings."""
    if x is None:
        return None
    return x if abs(x) < _SAFE_INT else str(x)


def parse_int(x, what, allow_none=True):
    if x is None and allow_none:
        return None
    if isinstance(x, bool):
        raise ParseError(f"{what}: expected integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ParseError(f"{what}: expected integer, got {x!r}")


def graph_to_dict(g: PlumbingGraph):
    return {
        "vertices": [
            {"id": v.id, "genus": v.genus, "euler": json_int(v.euler),
             "mult": json_int(v.mult), "name": v.name}
            for v in g.vertices
        ],
        "edges": [[e.a, e.b] for e in g.edges],
        "arrows": [{"at": a.at, "label": a.label, "mult": json_int(a.mult)} for a in g.arrows],
    }


def graph_from_dict(d):
    if not isinstance(d, dict):
        raise ParseError("graph must be a JSON object")
    try:
        verts = []
        for item in d.get("vertices", []):
            verts.append(Vertex(
                id=str(item["id"]),
                genus=parse_int(item.get("genus", 0), "genus", allow_none=False),
                euler=parse_int(item.get("euler"), "euler"),
                mult=parse_int(item.get("mult"), "mult"),
                name=item.get("name"),
            ))
        edges = []
        for e in d.get("edges", []):
            if len(e) != 2:
                raise ParseError(f"edge {e!r} must have two ends")
            edges.append(Edge(str(e[0]), str(e[1])))
        arrows = [
            Arrow(at=None if a.get("at") is None else str(a["at"]),
                  label=str(a.get("label", "")),
                  mult=parse_int(a.get("mult"), "arrow mult"))
            for a in d.get("arrows", [])
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph: {exc}") from None
    except InvalidGraph as exc:
        raise ParseError(str(exc)) from None
    try:
        return PlumbingGraph(verts, edges, arrows)
    except InvalidGraph as exc:
        raise ParseError(str(exc)) from None


def dumps(g, **kw):
    return json.dumps(graph_to_dict(g), **kw)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return graph_from_dict(data)


def _dot_quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: PlumbingGraph, title="G"):
    """Graphviz rendering, meant for people; the layout is not a stable format."""
    lines = [
        "// Rendering for inspection only; use the JSON form for machine exchange.",
        f"graph {_dot_quote(title)} {{",
    ]
    for v in g.vertices:
        e = "?" if v.euler is None else str(v.euler)
        label = f"{v.id} ({e})" if v.genus == 0 else f"{v.id} ({e},{v.genus})"
        lines.append(f"  {_dot_quote(v.id)} [label={_dot_quote(label)}];")
    for e in g.edges:
        lines.append(f"  {_dot_quote(e.a)} -- {_dot_quote(e.b)};")
    for i, a in enumerate(g.arrows):
        node = f"arrow{i}"
        lines.append(f"  {_dot_quote(node)} [shape=box,label={_dot_quote(a.label)}];")
        if a.at is not None:
            lines.append(f"  {_dot_quote(a.at)} -- {_dot_quote(node)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
