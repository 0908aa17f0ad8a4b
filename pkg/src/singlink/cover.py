"""Resolution graphs of cyclic covers ``z^d = f(x, y)``.

Pipeline: embedded resolution of ``{f = 0}`` -> graph covering over it ->
Hirzebruch-Jung chains spliced in at the singular points of the normalized
pull-back -> Euler numbers by balancing the divisor of ``f`` -> blow-downs.

Covering rules.  Let ``m_v`` be the multiplicity of ``f`` along ``E_v`` and
``k_v = gcd(d, m_v)``.  Near a generic point of ``E_v`` the normalized cover
has ``k_v`` local sheets, permuted by the loop around each puncture ``w`` of
``E_v`` (a neighbour or an arrow) through translation by ``m_w`` in
``Z/k_v``.  Because ``E_v`` is a sphere, the puncture loops generate its
fundamental group, so the sheets fall into ``s_v = gcd(k_v, m_w ...)``
components, each a cyclic cover of degree ``k_v / s_v``.  Genus then follows
from Riemann-Hurwitz.  Over a double point ``x^a y^b`` the normalization has
``gcd(d, a, b)`` local components, each a cyclic quotient singularity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from .calculus import minimize as _minimize
from .curve import CurveResolution, branches_to_json, resolve_curve
from .errors import (
    InvalidCoveringData,
    InvalidHJParams,
    MissingMultiplicity,
    NonIntegralSolution,
    NonPositiveDegree,
    ParseError,
)
from .graph import (
    Arrow,
    Edge,
    PlumbingGraph,
    Vertex,
    cycle_rank,
    graph_from_dict,
    graph_to_dict,
    is_negative_definite,
    json_int,
    parse_int,
)
from .lens import hj_expand


@dataclass(frozen=True)
class Sheet:
    """A component of the cover over base vertex ``base``.

    ``degree`` is the degree of the map onto the base component and
    ``punctures`` the number of points over the punctures of the base
    component (kept for Euler characteristic bookkeeping).
    """

    id: str
    base: str
    genus: int = 0
    degree: int = 1
    mult: Optional[int] = None
    punctures: Optional[int] = None
    euler: Optional[int] = None


@dataclass(frozen=True)
class CoverEdge:
    """Cover of the double point of base edge ``base``.

    ``hj`` is ``None`` for a smooth point, otherwise ``(n, q)``: a cyclic
    quotient singularity whose resolution read from ``ends[0]`` towards
    ``ends[1]`` is ``hj_expand(n, q)``.
    """

    base: Edge
    ends: tuple
    hj: Optional[tuple] = None


@dataclass(frozen=True)
class CoverArrow:
    """Lift of base arrow number ``base`` (index into ``base.arrows``).

    ``hj`` is read from the vertex ``at`` towards the arrow.
    """

    base: int
    at: str
    label: str
    mult: Optional[int] = None
    hj: Optional[tuple] = None


@dataclass(frozen=True)
class CoveringGraph:
    base: PlumbingGraph
    sheets: tuple
    edges: tuple
    arrows: tuple
    d: Optional[int] = None

    def sheets_over(self, v):
        return [s for s in self.sheets if s.base == v]

    def sheet(self, sid):
        for s in self.sheets:
            if s.id == sid:
                return s
        raise InvalidCoveringData(f"no cover vertex {sid!r}", vertex=sid)


@dataclass(frozen=True)
class PipelineReport:
    base_resolution: Optional[CurveResolution]
    covering: CoveringGraph
    resolved: PlumbingGraph
    minimal: PlumbingGraph
    certificates: tuple = field(default=())


# local models


def local_hj(d, a, b):
    """Normalization of ``z^d = x^a y^b`` at the origin.

    Returns ``(g, hj)``: ``g`` local components, each smooth (``hj`` None) or
    the cyclic quotient ``hj = (n, q)`` whose chain, starting next to the
    curve ``{x = 0}``, is ``hj_expand(n, q)``.
    """
    g = gcd(d, a, b)
    n, a, b = d // g, a // g, b // g
    alpha, beta = gcd(n, a), gcd(n, b)
    big_n = n // (alpha * beta)
    if big_n == 1:
        return g, None
    a2, b2 = a // alpha, b // beta
    q = (-b2 * pow(a2, -1, big_n)) % big_n
    return g, (big_n, q)


def _check_hj(hj):
    if hj is None:
        return
    try:
        n, q = hj
    except (TypeError, ValueError):
        raise InvalidHJParams(f"HJ data must be a pair (n, q), got {hj!r}") from None
    if not (isinstance(n, int) and isinstance(q, int)) or n < 2 or not 0 < q < n or gcd(n, q) != 1:
        raise InvalidHJParams(f"invalid HJ parameters {hj!r}: need n >= 2, 0 < q < n, gcd(n, q) = 1")


# covering


def _base_graph(base):
    g = base.graph if isinstance(base, CurveResolution) else base
    for v in g.vertices:
        if v.mult is None:
            raise MissingMultiplicity(f"base vertex {v.id} has no multiplicity", vertex=v.id)
        if v.genus != 0:
            raise InvalidCoveringData(f"base vertex {v.id} has genus {v.genus}; rational components required")
    for a in g.arrows:
        if a.mult is None:
            raise MissingMultiplicity(f"arrow {a.label!r} has no multiplicity", arrow=a.label)
        if a.at is None:
            raise InvalidCoveringData(f"arrow {a.label!r} is not attached to the divisor")
    if g.has_self_loops or cycle_rank(g) != 0:
        raise InvalidCoveringData("the base graph must be a forest")
    return g


def _sheet_id(v, i, count):
    return v if count == 1 else f"{v}({i + 1})"


def cover_graph(base, d) -> CoveringGraph:
    """Graph of the normalized ``d``-fold cyclic cover branched along ``f``.

    ``base`` is a :class:`CurveResolution` or a forest-shaped graph carrying
    multiplicities of ``f`` on every vertex and arrow.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise NonPositiveDegree(f"cover degree must be a positive integer, got {d!r}", d=d)
    g = _base_graph(base)

    k, s = {}, {}
    for v in g.vertices:
        k[v.id] = gcd(d, v.mult)
        around = [g.vertex(u).mult for u in g.neighbors(v.id)] + [a.mult for a in g.arrows_at(v.id)]
        s[v.id] = gcd(k[v.id], *around)

    sheets = []
    for v in g.vertices:
        kv, sv = k[v.id], s[v.id]
        delta = kv // sv
        around = [g.vertex(u).mult for u in g.neighbors(v.id)] + [a.mult for a in g.arrows_at(v.id)]
        # each puncture loop acts on the delta points of a fibre with cycles
        # of length kv / gcd(kv, m_w)
        punct = sum(delta * gcd(kv, m) // kv for m in around)
        chi = delta * (2 - len(around)) + punct
        genus = Fraction(2 - chi, 2)
        if genus.denominator != 1 or genus < 0:
            raise AssertionError(f"non-integral genus over {v.id}")
        for i in range(sv):
            sheets.append(Sheet(_sheet_id(v.id, i, sv), v.id, int(genus), delta,
                                v.mult * d // kv, punct))

    edges = []
    for e in g.edges:
        mu, mv = g.vertex(e.a).mult, g.vertex(e.b).mult
        count, hj = local_hj(d, mu, mv)
        for i in range(count):
            ends = (_sheet_id(e.a, i % s[e.a], s[e.a]), _sheet_id(e.b, i % s[e.b], s[e.b]))
            edges.append(CoverEdge(e, ends, hj))

    arrows = []
    for idx, a in enumerate(g.arrows):
        mv = g.vertex(a.at).mult
        count, hj = local_hj(d, mv, a.mult)
        lifted = a.mult * d // gcd(d, a.mult)
        for i in range(count):
            label = a.label if count == 1 else f"{a.label}({i + 1})"
            at = _sheet_id(a.at, i % s[a.at], s[a.at])
            arrows.append(CoverArrow(idx, at, label, lifted, hj))

    cov = CoveringGraph(g, tuple(sheets), tuple(edges), tuple(arrows), d)
    validate_covering(cov)
    return cov


def validate_covering(cov: CoveringGraph):
    """Check the graph-covering conditions; raise InvalidCoveringData."""
    base = cov.base
    if cov.d is not None and (not isinstance(cov.d, int) or cov.d < 1):
        raise NonPositiveDegree(f"cover degree must be a positive integer, got {cov.d!r}")
    ids = [s.id for s in cov.sheets]
    if len(set(ids)) != len(ids):
        raise InvalidCoveringData("duplicate cover vertex ids")
    over = {}
    for s in cov.sheets:
        if s.base not in base:
            raise InvalidCoveringData(f"cover vertex {s.id} lies over unknown vertex {s.base}")
        if s.degree < 1 or s.genus < 0:
            raise InvalidCoveringData(f"cover vertex {s.id} has degree {s.degree}, genus {s.genus}")
        over.setdefault(s.base, []).append(s)
    where = {s.id: s.base for s in cov.sheets}
    for v in base.vertices:
        group = over.get(v.id)
        if not group:
            raise InvalidCoveringData(f"no cover vertex over {v.id}")
        if cov.d is not None and v.mult is not None:
            if len({s.degree for s in group}) != 1 or len(group) * group[0].degree != gcd(cov.d, v.mult):
                raise InvalidCoveringData(f"sheet count times degree over {v.id} is not gcd(d, m)")

    seen = {}
    for ce in cov.edges:
        if ce.base not in base.edges:
            raise InvalidCoveringData(f"cover edge over unknown edge {ce.base.a}-{ce.base.b}")
        if len(ce.ends) != 2 or any(x not in where for x in ce.ends):
            raise InvalidCoveringData(f"cover edge {ce.ends!r} has unknown ends")
        if sorted(where[x] for x in ce.ends) != sorted((ce.base.a, ce.base.b)):
            raise InvalidCoveringData(f"cover edge {ce.ends!r} does not lie over {ce.base.a}-{ce.base.b}")
        _check_hj(ce.hj)
        seen.setdefault(ce.base, []).append(ce)
    for e in set(base.edges):
        lifts = seen.get(e, [])
        if not lifts:
            raise InvalidCoveringData(f"no cover edge over {e.a}-{e.b}")
        if cov.d is not None:
            mu, mv = base.vertex(e.a).mult, base.vertex(e.b).mult
            if mu is not None and mv is not None and len(lifts) != gcd(cov.d, mu, mv) * base.edge_multiplicity(e.a, e.b):
                raise InvalidCoveringData(f"cover edge count over {e.a}-{e.b} is not gcd(d, m_u, m_v)")
        # every sheet over an end meets some lift of the edge
        for end in (e.a, e.b):
            touched = {x for ce in lifts for x in ce.ends if where[x] == end}
            if touched != {s.id for s in over[end]}:
                raise InvalidCoveringData(f"some sheet over {end} misses every lift of {e.a}-{e.b}")

    lifted = {}
    for ca in cov.arrows:
        if not 0 <= ca.base < len(base.arrows):
            raise InvalidCoveringData(f"cover arrow {ca.label!r} refers to unknown base arrow {ca.base}")
        ba = base.arrows[ca.base]
        if ca.at not in where or where[ca.at] != ba.at:
            raise InvalidCoveringData(f"cover arrow {ca.label!r} does not lie over {ba.at}")
        _check_hj(ca.hj)
        lifted.setdefault(ca.base, set()).add(ca.at)
    for i, ba in enumerate(base.arrows):
        if ba.at is None:
            continue
        if lifted.get(i) != {s.id for s in over[ba.at]}:
            raise InvalidCoveringData(f"base arrow {ba.label!r} is not lifted to every sheet over {ba.at}")


# splicing and Euler numbers


def _chain_mults(weights, m_a, m_b):
    """Multiplicities along a chain with ends of multiplicity m_a and m_b.

    The chain is read from the ``m_a`` end.  With ``n/q`` the continued
    fraction of ``weights`` the first inner value is ``(m_b + q m_a)/n`` and
    the rest follow from ``m_{i+1} = b_i m_i - m_{i-1}``.
    """
    n, q = 1, 0
    for b in reversed(weights):
        n, q = b * n - q, n
    first = Fraction(m_b + q * m_a, n)
    if first.denominator != 1:
        raise NonIntegralSolution(f"multiplicities {m_a}, {m_b} do not extend over chain {list(weights)}")
    out = [m_a, int(first)]
    for b in weights:
        out.append(b * out[-1] - out[-2])
    if out[-1] != m_b:
        raise NonIntegralSolution(f"chain {list(weights)} does not close up on multiplicity {m_b}")
    return out[1:-1]


def splice_bamboos(cov: CoveringGraph) -> PlumbingGraph:
    """Replace every singular point of the cover by its Hirzebruch-Jung chain.

    Chain vertices are named ``E<k>`` continuing past the largest number in
    use; cover vertices keep their sheet ids.
    """
    verts = [Vertex(s.id, s.genus, s.euler, s.mult) for s in cov.sheets]
    mult = {s.id: s.mult for s in cov.sheets}
    used = {s.id for s in cov.sheets} | set(cov.base.ids)
    counter = [0]
    for x in used:
        if x.startswith("E") and x[1:].isdigit():
            counter[0] = max(counter[0], int(x[1:]))

    def fresh():
        counter[0] += 1
        while f"E{counter[0]}" in used:
            counter[0] += 1
        used.add(f"E{counter[0]}")
        return f"E{counter[0]}"

    def chain(hj, m_a, m_b):
        weights = hj_expand(*hj).weights
        mults = [None] * len(weights)
        if m_a is not None and m_b is not None:
            mults = _chain_mults(weights, m_a, m_b)
        ids = []
        for b, m in zip(weights, mults):
            vid = fresh()
            verts.append(Vertex(vid, 0, -b, m))
            ids.append(vid)
        return ids

    edges, arrows = [], []
    for ce in cov.edges:
        a, b = ce.ends
        if ce.hj is None:
            edges.append(Edge(a, b))
            continue
        _check_hj(ce.hj)
        path = [a] + chain(ce.hj, mult[a], mult[b]) + [b]
        edges += [Edge(x, y) for x, y in zip(path, path[1:])]
    for ca in cov.arrows:
        if ca.hj is None:
            arrows.append(Arrow(ca.at, ca.label, ca.mult))
            continue
        _check_hj(ca.hj)
        path = [ca.at] + chain(ca.hj, mult[ca.at], ca.mult)
        edges += [Edge(x, y) for x, y in zip(path, path[1:])]
        arrows.append(Arrow(path[-1], ca.label, ca.mult))
    return PlumbingGraph(verts, edges, arrows)


def assign_euler_numbers(g: PlumbingGraph) -> PlumbingGraph:
    """Euler numbers from ``m_w e_w + sum of neighbour and arrow mults = 0``.

    Euler numbers already present must agree with the solution.
    """
    for v in g.vertices:
        if v.mult is None:
            raise MissingMultiplicity(f"vertex {v.id} has no multiplicity", vertex=v.id)
    for a in g.arrows:
        if a.at is not None and a.mult is None:
            raise MissingMultiplicity(f"arrow {a.label!r} has no multiplicity", arrow=a.label)
    eulers = {}
    for v in g.vertices:
        around = sum(g.vertex(u).mult for u in g.neighbors(v.id)) + sum(a.mult for a in g.arrows_at(v.id))
        e = Fraction(-around, v.mult)
        if e.denominator != 1:
            raise NonIntegralSolution(f"Euler number of {v.id} would be {e}", vertex=v.id)
        if v.euler is not None and v.euler != e:
            raise NonIntegralSolution(
                f"balancing gives {e} at {v.id} but the chain predicts {v.euler}", vertex=v.id
            )
        eulers[v.id] = int(e)
    return g.with_eulers(eulers)


# pipeline


def _finish(base_res, cov, minimize):
    spliced = splice_bamboos(cov)
    complete = all(v.mult is not None for v in spliced.vertices) and all(
        a.mult is not None for a in spliced.arrows
    )
    resolved = assign_euler_numbers(spliced) if complete else spliced
    known = all(v.euler is not None for v in resolved.vertices)
    if known and not is_negative_definite(resolved):
        raise AssertionError("resolution graph is not negative definite")
    if minimize:
        minimal, certs = _minimize(resolved, strict=False)
    else:
        minimal, certs = resolved, []
    if known and minimal.vertices and not is_negative_definite(minimal):
        raise AssertionError("minimal graph is not negative definite")
    return PipelineReport(base_res, cov, resolved, minimal, tuple(certs))


def resolve_cyclic(branches, d, minimize=True, budget=None) -> PipelineReport:
    """Resolution graph of ``z^d = f`` where ``f`` is the product of the
    (weighted) branches."""
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise NonPositiveDegree(f"cover degree must be a positive integer, got {d!r}", d=d)
    base = resolve_curve(branches, budget=budget)
    return _finish(base, cover_graph(base, d), minimize)


def resolve_from_covering(cov: CoveringGraph, minimize=True) -> PipelineReport:
    """Splice, balance (when multiplicities are complete) and minimize a
    user-supplied covering."""
    validate_covering(cov)
    return _finish(None, cov, minimize)


# JSON


def _hj_json(hj):
    return None if hj is None else [hj[0], hj[1]]


def covering_to_dict(cov: CoveringGraph):
    return {
        "d": cov.d,
        "base": graph_to_dict(cov.base),
        "sheets": [
            {"id": s.id, "base": s.base, "genus": s.genus, "degree": s.degree,
             "mult": json_int(s.mult), "punctures": s.punctures, "euler": json_int(s.euler)}
            for s in cov.sheets
        ],
        "edges": [{"base": [e.base.a, e.base.b], "ends": list(e.ends), "hj": _hj_json(e.hj)} for e in cov.edges],
        "arrows": [
            {"base": a.base, "at": a.at, "label": a.label, "mult": json_int(a.mult), "hj": _hj_json(a.hj)}
            for a in cov.arrows
        ],
    }


def _read_hj(x):
    if x is None:
        return None
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise ParseError(f"hj must be null or [n, q], got {x!r}")
    return (parse_int(x[0], "hj n", False), parse_int(x[1], "hj q", False))


def covering_from_dict(d) -> CoveringGraph:
    if not isinstance(d, dict):
        raise ParseError("covering must be a JSON object")
    try:
        base = graph_from_dict(d["base"])
        sheets = tuple(
            Sheet(str(s["id"]), str(s["base"]), parse_int(s.get("genus", 0), "genus", False),
                  parse_int(s.get("degree", 1), "degree", False), parse_int(s.get("mult"), "mult"),
                  parse_int(s.get("punctures"), "punctures"), parse_int(s.get("euler"), "euler"))
            for s in d["sheets"]
        )
        edges = tuple(
            CoverEdge(Edge(*map(str, e["base"])), tuple(map(str, e["ends"])), _read_hj(e.get("hj")))
            for e in d.get("edges", [])
        )
        arrows = tuple(
            CoverArrow(parse_int(a["base"], "arrow base", False), str(a["at"]), str(a.get("label", "")),
                       parse_int(a.get("mult"), "mult"), _read_hj(a.get("hj")))
            for a in d.get("arrows", [])
        )
        deg = d.get("d")
        deg = None if deg is None else parse_int(deg, "d", False)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed covering: {exc}") from None
    return CoveringGraph(base, sheets, edges, arrows, deg)


def report_to_dict(r: PipelineReport):
    out = {}
    if r.base_resolution is not None:
        out["branches"] = branches_to_json(r.base_resolution.branches)["branches"]
        out["curve_resolution"] = graph_to_dict(r.base_resolution.graph)
    out["covering"] = covering_to_dict(r.covering)
    out["resolved"] = graph_to_dict(r.resolved)
    out["minimal"] = graph_to_dict(r.minimal)
    out["certificates"] = [c.to_json() for c in r.certificates]
    return out


def covering_loads(text) -> CoveringGraph:
    try:
        return covering_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
