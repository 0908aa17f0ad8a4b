"""Blow-up and blow-down moves, minimization, and graph isomorphism.

Moves never mutate their input; each returns a new graph.  A blow-down
also returns a certificate from which the move can be replayed and audited.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from .errors import (
    NotContractible,
    ParseError,
    SelfLoopUnsupported,
    SelfLoopWouldForm,
    TangencyWouldForm,
    TooLarge,
    UnknownArrow,
    UnknownEdge,
    UnknownEulerNumber,
)
from .graph import Arrow, Edge, PlumbingGraph, Vertex, json_int, parse_int


def _known_euler(g, vid):
    v = g.vertex(vid)
    if v.euler is None:
        raise UnknownEulerNumber(f"vertex {vid} has no Euler number", vertex=vid)
    return v


def _add(a, b):
    return None if a is None or b is None else a + b


def blow_up_vertex(g: PlumbingGraph, v, new_id=None) -> PlumbingGraph:
    """Blow up a generic point of component ``v``."""
    old = _known_euler(g, v)
    w = new_id or g.fresh_id()
    verts = [replace(x, euler=x.euler - 1) if x.id == v else x for x in g.vertices]
    verts.append(Vertex(w, 0, -1, old.mult))
    return PlumbingGraph(verts, list(g.edges) + [Edge(v, w)], g.arrows)


def blow_up_edge(g: PlumbingGraph, edge, new_id=None) -> PlumbingGraph:
    """Blow up the double point represented by ``edge``."""
    e = edge if isinstance(edge, Edge) else Edge(*edge)
    edges = list(g.edges)
    if e not in edges:
        raise UnknownEdge(f"no edge {e.a}-{e.b}", edge=[e.a, e.b])
    if e.is_loop:
        raise SelfLoopUnsupported(f"cannot blow up the self-loop at {e.a}", vertex=e.a)
    u, v = _known_euler(g, e.a), _known_euler(g, e.b)
    edges.remove(e)
    w = new_id or g.fresh_id()
    verts = [replace(x, euler=x.euler - 1) if x.id in (u.id, v.id) else x for x in g.vertices]
    verts.append(Vertex(w, 0, -1, _add(u.mult, v.mult)))
    return PlumbingGraph(verts, edges + [Edge(u.id, w), Edge(w, v.id)], g.arrows)


def _find_arrow(g, arrow):
    if isinstance(arrow, int):
        if not 0 <= arrow < len(g.arrows):
            raise UnknownArrow(f"no arrow with index {arrow}", arrow=arrow)
        return arrow
    if isinstance(arrow, Arrow):
        for i, a in enumerate(g.arrows):
            if a == arrow:
                return i
        raise UnknownArrow(f"no arrow {arrow!r}", arrow=str(arrow))
    hits = [i for i, a in enumerate(g.arrows) if a.label == arrow]
    if len(hits) != 1:
        raise UnknownArrow(f"no unique arrow labelled {arrow!r}", arrow=arrow)
    return hits[0]


def blow_up_arrow(g: PlumbingGraph, arrow, new_id=None) -> PlumbingGraph:
    """Blow up the point where an arrow meets its component.

    ``arrow`` is an :class:`Arrow`, an index into ``g.arrows`` or a unique
    label.  A free arrow yields a lone (-1)-vertex carrying it.
    """
    i = _find_arrow(g, arrow)
    a = g.arrows[i]
    w = new_id or g.fresh_id()
    arrows = list(g.arrows)
    arrows[i] = replace(a, at=w)
    if a.at is None:
        new = Vertex(w, 0, -1, a.mult)
        return PlumbingGraph(list(g.vertices) + [new], g.edges, arrows)
    v = _known_euler(g, a.at)
    verts = [replace(x, euler=x.euler - 1) if x.id == v.id else x for x in g.vertices]
    verts.append(Vertex(w, 0, -1, _add(v.mult, a.mult)))
    return PlumbingGraph(verts, list(g.edges) + [Edge(v.id, w)], arrows)


@dataclass(frozen=True)
class BlowDownCertificate:
    removed: str
    neighbor_updates: tuple = ()
    added_edge: Optional[Edge] = None

    def to_json(self):
        return {
            "removed": self.removed,
            "neighbor_updates": [[u, json_int(e)] for u, e in self.neighbor_updates],
            "added_edge": None if self.added_edge is None else [self.added_edge.a, self.added_edge.b],
        }

    @classmethod
    def from_json(cls, d):
        try:
            updates = tuple((str(u), parse_int(e, "euler")) for u, e in d["neighbor_updates"])
            added = d.get("added_edge")
            return cls(str(d["removed"]), updates, None if added is None else Edge(*map(str, added)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from None


def _contraction_check(g, vid):
    v = g.vertex(vid)
    if v.genus != 0:
        raise NotContractible(f"{vid} has genus {v.genus}", vertex=vid)
    if v.euler is None:
        raise UnknownEulerNumber(f"vertex {vid} has no Euler number", vertex=vid)
    if v.euler != -1:
        raise NotContractible(f"{vid} has Euler number {v.euler}, not -1", vertex=vid)
    if g.self_loops(vid):
        raise NotContractible(f"{vid} carries a self-loop", vertex=vid)
    nbrs = g.neighbors(vid)
    arrows = g.arrows_at(vid)
    if len(nbrs) + len(arrows) > 2:
        raise NotContractible(f"{vid} meets {len(nbrs)} components and {len(arrows)} arrows", vertex=vid)
    if len(arrows) == 2:
        raise TangencyWouldForm(f"contracting {vid} would make two curves tangent", vertex=vid)
    if len(nbrs) == 2 and nbrs[0] == nbrs[1]:
        raise SelfLoopWouldForm(f"contracting {vid} would create a self-loop at {nbrs[0]}", vertex=vid)
    return nbrs


def is_contractible(g: PlumbingGraph, vid) -> bool:
    """True when :func:`blow_down` would succeed on ``vid``."""
    v = g.vertex(vid)
    if v.genus != 0 or v.euler != -1:
        return False
    try:
        _contraction_check(g, vid)
    except (NotContractible, TangencyWouldForm, SelfLoopWouldForm):
        return False
    return True


def _apply_blow_down(g, vid, nbrs):
    bumped = {u: _add(g.vertex(u).euler, 1) for u in nbrs}
    verts = [replace(x, euler=bumped[x.id]) if x.id in bumped else x for x in g.vertices if x.id != vid]
    edges = [e for e in g.edges if vid not in (e.a, e.b)]
    added = None
    if len(nbrs) == 2:
        added = Edge(*nbrs)
        edges.append(added)
    target = nbrs[0] if nbrs else None
    arrows = [replace(a, at=target) if a.at == vid else a for a in g.arrows]
    cert = BlowDownCertificate(vid, tuple((u, bumped[u]) for u in sorted(nbrs)), added)
    return PlumbingGraph(verts, edges, arrows), cert


def blow_down(g: PlumbingGraph, vid):
    """Contract a smooth rational (-1)-component.

    Returns ``(graph, certificate)``.  An arrow on the contracted vertex
    moves to its unique neighbour, or becomes free when there is none.
    Unknown Euler numbers on neighbours stay unknown.
    """
    nbrs = _contraction_check(g, vid)
    return _apply_blow_down(g, vid, nbrs)


def replay(g: PlumbingGraph, cert: BlowDownCertificate) -> PlumbingGraph:
    """Re-execute a recorded blow-down, checking it matches ``g``."""
    nbrs = _contraction_check(g, cert.removed)
    out, mine = _apply_blow_down(g, cert.removed, nbrs)
    if mine != cert:
        raise NotContractible(f"certificate for {cert.removed} does not match this graph", vertex=cert.removed)
    return out


def minimize(g: PlumbingGraph, choose: Optional[Callable[[Sequence[str]], str]] = None, strict=True):
    """Blow down contractible vertices until none is left.

    ``choose`` picks the next vertex among the eligible ones (default: the
    lowest id).  With ``strict=False`` vertices of unknown Euler number are
    allowed and simply never contracted.
    """
    if strict:
        for v in g.vertices:
            if v.euler is None:
                raise UnknownEulerNumber(f"vertex {v.id} has no Euler number", vertex=v.id)
    certs = []
    while True:
        eligible = [v for v in g.ids if is_contractible(g, v)]
        if not eligible:
            return g, certs
        pick = choose(eligible) if choose else eligible[0]
        g, cert = blow_down(g, pick)
        certs.append(cert)


# isomorphism

DEFAULT_MAX_VERTICES = 16


def _initial_colors(g, compare_weights, compare_labels, arrow_label):
    colors = {}
    for v in g.vertices:
        arrows = g.arrows_at(v.id)
        arrow_sig = tuple(sorted(arrow_label(a) for a in arrows)) if compare_labels else len(arrows)
        colors[v.id] = (v.genus, v.euler if compare_weights else None, g.degree(v.id), g.self_loops(v.id), arrow_sig)
    return colors


def _refine(g1, g2, c1, c2):
    """Colour refinement run jointly on both graphs so colours stay comparable."""
    for _ in range(max(len(g1), 1)):
        n1 = {v: (c1[v], tuple(sorted(c1[u] for u in g1.neighbors(v)))) for v in g1.ids}
        n2 = {v: (c2[v], tuple(sorted(c2[u] for u in g2.neighbors(v)))) for v in g2.ids}
        table = {sig: i for i, sig in enumerate(sorted(set(n1.values()) | set(n2.values()), key=repr))}
        r1 = {v: table[s] for v, s in n1.items()}
        r2 = {v: table[s] for v, s in n2.items()}
        stable = len(set(r1.values())) == len(set(c1.values()))
        c1, c2 = r1, r2
        if stable:
            break
    return c1, c2


def are_isomorphic(g1: PlumbingGraph, g2: PlumbingGraph, compare_weights=False,
                   compare_arrow_labels=False, max_vertices=DEFAULT_MAX_VERTICES,
                   arrow_label=lambda a: a.label):
    """Brute-force isomorphism test with colour-refinement pruning.

    Genus, edge multiplicities and arrow counts per vertex are always
    compared; Euler numbers only with ``compare_weights``; arrow labels (as
    mapped by ``arrow_label``) only with ``compare_arrow_labels``.
    """
    for g in (g1, g2):
        if len(g) > max_vertices:
            raise TooLarge(f"graph has {len(g)} vertices, bound is {max_vertices}", vertices=len(g))
    if len(g1) != len(g2) or len(g1.edges) != len(g2.edges) or len(g1.arrows) != len(g2.arrows):
        return False
    free1, free2 = g1.free_arrows, g2.free_arrows
    if len(free1) != len(free2):
        return False
    if compare_arrow_labels and Counter(map(arrow_label, free1)) != Counter(map(arrow_label, free2)):
        return False
    c1 = _initial_colors(g1, compare_weights, compare_arrow_labels, arrow_label)
    c2 = _initial_colors(g2, compare_weights, compare_arrow_labels, arrow_label)
    c1, c2 = _refine(g1, g2, c1, c2)
    if Counter(c1.values()) != Counter(c2.values()):
        return False

    # visit g1 in BFS order so each new vertex is usually adjacent to mapped ones
    order, seen = [], set()
    for start in sorted(g1.ids, key=lambda v: (sum(1 for x in c1.values() if x == c1[v]), v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(set(g1.neighbors(x))):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)

    mult1 = Counter(g1.edges)
    mult2 = Counter(g2.edges)
    mapping, used = {}, set()

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in g2.ids:
            if y in used or c2[y] != c1[x]:
                continue
            ok = all(mult1[Edge(x, px)] == mult2[Edge(y, py)] for px, py in mapping.items())
            if not ok:
                continue
            mapping[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return extend(0)
