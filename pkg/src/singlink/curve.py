"""Embedded resolution of plane curve germs from Puiseux data.

Each branch ``x = sum c_i y^(e_i)`` is parametrized exactly by
``y = t^N, x = sum c_i t^(N e_i)`` where ``N`` is the common denominator of
the exponents.  Blowing up a point rewrites the local coordinates of every
branch through it by the chart substitutions ``u = u1 v`` or ``v = v1 u``.
Coordinates are kept as exact rational functions of ``t`` so that "this
branch is now the coordinate axis" is decided exactly, not up to some
truncation order.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, lcm
from typing import Optional

from .calculus import is_contractible
from .errors import (
    BlowupBudgetExceeded,
    InsufficientTruncation,
    InvalidBranch,
    NotReduced,
    ParseError,
)
from .graph import Arrow, Edge, PlumbingGraph, Vertex, determinant, is_negative_definite, is_tree

BUDGET_ENV = "SINGLINK_BLOWUP_BUDGET"


# exact rational functions in one variable


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _psub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def _order(p):
    for i, a in enumerate(p):
        if a:
            return i
    return None


class _RatFun:
    """``num/den`` with ``den(0) == 1``; read as a power series in t."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _trim([Fraction(a) for a in num])
        den = [Fraction(1)] if den is None else _trim([Fraction(a) for a in den])
        c = den[0]
        if c != 1:
            num = [a / c for a in num]
            den = [a / c for a in den]
        self.num, self.den = num, den

    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    def order(self):
        return _order(self.num)

    def is_zero(self):
        return not self.num

    def leading(self):
        return self.num[self.order()]

    def minus_const(self, c):
        return _RatFun(_psub(self.num, [c * a for a in self.den]), self.den)

    def div(self, other):
        """Quotient, assuming ``ord(self) >= ord(other)`` and other nonzero."""
        k = other.order()
        num = _pmul(self.num, other.den)[k:]
        den = _pmul(self.den, other.num[k:])
        return _RatFun(num, den)


# branch data


@dataclass(frozen=True)
class PuiseuxBranch:
    """One branch of a plane curve germ.

    Either ``terms`` (pairs ``(exponent, coefficient)`` of ``x`` as a series in
    ``y``, exponents >= 1 and strictly increasing) or ``axis`` ``"x"`` for
    ``{x = 0}`` / ``"y"`` for ``{y = 0}``.  A ``tracked`` branch is carried
    along to place its arrow but is not part of the divisor, and never
    causes a blow-up by itself.
    """

    terms: tuple = ()
    axis: Optional[str] = None
    weight: int = 1
    label: Optional[str] = None
    tracked: bool = False
    ramification: Optional[int] = None

    def __post_init__(self):
        terms = tuple((Fraction(e), Fraction(c)) for e, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if self.axis is not None:
            if self.axis not in ("x", "y"):
                raise InvalidBranch(f"axis must be 'x' or 'y', got {self.axis!r}")
            if terms:
                raise InvalidBranch("an axis branch carries no terms")
        elif not terms:
            raise InvalidBranch("a branch needs terms or an axis")
        if isinstance(self.weight, bool) or not isinstance(self.weight, int) or self.weight < 1:
            raise InvalidBranch(f"weight must be a positive integer, got {self.weight!r}")
        prev = None
        for e, c in terms:
            if e < 1:
                raise InvalidBranch(f"exponents must be >= 1, got {e}")
            if c == 0:
                raise InvalidBranch("coefficients must be nonzero")
            if prev is not None and e <= prev:
                raise InvalidBranch("exponents must be strictly increasing")
            prev = e
        if self.ramification is not None and self.ramification % self.ramification_index:
            raise InvalidBranch(
                f"declared ramification {self.ramification} is not a multiple of the exponent denominators"
            )

    @classmethod
    def axis_x(cls, **kw):
        return cls(axis="x", **kw)

    @classmethod
    def axis_y(cls, **kw):
        return cls(axis="y", **kw)

    @property
    def ramification_index(self):
        return lcm(*(e.denominator for e, _ in self.terms)) if self.terms else 1

    @property
    def divisor_weight(self):
        return 0 if self.tracked else self.weight

    def display_label(self, index):
        if self.label is not None:
            return self.label
        if self.axis is not None:
            return f"{self.axis}=0"
        return f"branch{index + 1}"

    def parametrization(self):
        if self.axis == "x":
            return _RatFun([]), _RatFun.monomial(1)
        if self.axis == "y":
            return _RatFun.monomial(1), _RatFun([])
        n = self.ramification_index
        top = int(self.terms[-1][0] * n)
        x = [Fraction(0)] * (top + 1)
        for e, c in self.terms:
            x[int(e * n)] = c
        return _RatFun(x), _RatFun.monomial(n)


def _conjugate_match(short, long):
    """Whether the terms of ``short`` agree with the first terms of ``long``
    after some substitution ``y^(1/N) -> w y^(1/N)``, ``w^N = 1``."""
    if len(short.terms) > len(long.terms):
        return False
    pairs = list(zip(short.terms, long.terms))
    if any(es != el for (es, _), (el, _) in pairs):
        return False
    n = lcm(short.ramification_index, long.ramification_index)
    for k in range(n):
        ok = True
        for (e, c1), (_, c2) in pairs:
            p = int(e * n)
            # w^p with w = exp(2 pi i k / n) is real iff 2kp = 0 mod n
            if (2 * k * p) % n:
                ok = False
                break
            sign = -1 if (2 * k * p // n) % 2 else 1
            if c2 != sign * c1:
                ok = False
                break
        if ok:
            return True
    return False


def _same_germ(a, b):
    if a.axis or b.axis:
        return a.axis == b.axis
    return len(a.terms) == len(b.terms) and _conjugate_match(a, b)


def validate_branches(branches, merge_duplicates=False):
    """Check the branches are distinct germs and separated by their truncations.

    Returns the branch list, with duplicate branches merged (weights added)
    when ``merge_duplicates`` is set.
    """
    out = []
    for b in branches:
        for i, prev in enumerate(out):
            if _same_germ(prev, b):
                if not merge_duplicates or prev.tracked != b.tracked:
                    raise NotReduced(
                        f"branches {prev.display_label(i)!r} and {b.display_label(len(out))!r} are the same germ"
                    )
                out[i] = PuiseuxBranch(prev.terms, prev.axis, prev.weight + b.weight, prev.label,
                                       prev.tracked, prev.ramification)
                break
        else:
            out.append(b)
    for (i, a), (j, b) in combinations(enumerate(out), 2):
        if a.axis or b.axis:
            continue
        short, long = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
        if _conjugate_match(short, long):
            raise InsufficientTruncation(
                f"branches {a.display_label(i)!r} and {b.display_label(j)!r} agree on every given term"
            )
    return out


def default_budget(branches):
    real = [b for b in branches if not b.tracked]
    pairs = max(1, len(real) * (len(real) - 1) // 2)
    ram = sum(b.ramification_index for b in branches)
    top = max((ceil(b.terms[-1][0]) for b in branches if b.terms), default=1)
    return 10 * ram * pairs * max(1, top)


# resolution


@dataclass
class _Track:
    index: int
    u: _RatFun
    v: _RatFun
    weight: int

    def orders(self):
        return self.u.order(), self.v.order()

    def multiplicity(self):
        a, b = self.orders()
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)


@dataclass
class _Point:
    cu: Optional[str]
    cv: Optional[str]
    tracks: list
    origin: bool = False

    def components(self):
        return [c for c in (self.cu, self.cv) if c is not None]


@dataclass(frozen=True)
class CurveResolution:
    """Dual graph of an embedded resolution.

    ``graph`` has Euler number and multiplicity on every vertex; it carries
    one arrow per branch, labelled by the branch label.  ``transverse[i]``
    records whether branch ``i`` ends smooth and transverse at a smooth point
    of the divisor.  ``arrow_of[i]`` is the arrow belonging to branch ``i``.
    """

    graph: PlumbingGraph
    branches: tuple
    arrow_of: tuple
    transverse: tuple
    blowups: int = 0
    notes: tuple = field(default=())


def resolve_curve(branches, budget=None, merge_duplicates=False) -> CurveResolution:
    """Minimal embedded resolution of the union of ``branches``.

    The origin is always blown up; afterwards a point is blown up unless it
    is already normal crossings with every real branch smooth and
    transverse to a single component.  ``budget`` caps the number of
    blow-ups (default: environment variable ``SINGLINK_BLOWUP_BUDGET``, else
    :func:`default_budget`).
    """
    branches = validate_branches(list(branches), merge_duplicates)
    if not branches:
        raise InvalidBranch("no branches given")
    if budget is None:
        env = os.environ.get(BUDGET_ENV)
        if env:
            try:
                budget = int(env)
            except ValueError:
                raise ParseError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
        else:
            budget = default_budget(branches)

    euler, mult, order = {}, {}, []
    edges = []
    at = [None] * len(branches)
    transverse = [False] * len(branches)
    created = 0

    tracks = []
    for i, b in enumerate(branches):
        u, v = b.parametrization()
        tracks.append(_Track(i, u, v, b.divisor_weight))

    stack = [_Point(None, None, tracks, origin=True)]
    while stack:
        p = stack.pop()
        comps = p.components()
        real = [t for t in p.tracks if t.weight > 0]
        if not p.origin:
            if not real:
                _attach(p, p.tracks, at, transverse, order)
                continue
            if len(comps) == 1 and len(real) == 1 and _smooth_transverse(p, real[0]):
                _attach(p, p.tracks, at, transverse, order)
                continue

        created += 1
        if created > budget:
            raise BlowupBudgetExceeded(
                f"more than {budget} blow-ups needed; truncations may be too short or the budget too low",
                budget=budget,
            )
        e = f"E{created}"
        order.append(e)
        euler[e] = -1
        mult[e] = sum(mult[c] for c in comps) + sum(t.weight * t.multiplicity() for t in p.tracks)
        for c in comps:
            euler[c] -= 1
            edges.append(Edge(e, c))
        if p.cu is not None and p.cv is not None:
            edges.remove(Edge(p.cu, p.cv))

        groups = {}
        for t in p.tracks:
            key, nt = _chart(t)
            groups.setdefault(key, []).append(nt)
        children = []
        for key in sorted(groups, key=lambda k: (k[0], k[1])):
            if key[0] == "A":
                cu = None if key[1] != 0 else p.cu
                children.append(_Point(cu, e, groups[key]))
            else:
                children.append(_Point(e, p.cv, groups[key]))
        stack.extend(reversed(children))

    verts = [Vertex(v, 0, euler[v], mult[v]) for v in order]
    arrows = [
        Arrow(at[i], b.display_label(i), b.divisor_weight) for i, b in enumerate(branches)
    ]
    graph = PlumbingGraph(verts, edges, arrows)
    res = CurveResolution(graph, tuple(branches), tuple(arrows), tuple(transverse), created)
    _check_output(res)
    return res


def _chart(t):
    """Key of the infinitely near point the branch passes to, and its new coordinates."""
    a, b = t.orders()
    if b is None:
        return ("B", 0), _Track(t.index, t.u, t.v, t.weight)
    if a is None or a > b:
        return ("A", Fraction(0)), _Track(t.index, t.u.div(t.v), t.v, t.weight)
    if a == b:
        c = t.u.leading() / t.v.leading()
        return ("A", c), _Track(t.index, t.u.div(t.v).minus_const(c), t.v, t.weight)
    return ("B", 0), _Track(t.index, t.u, t.v.div(t.u), t.weight)


def _smooth_transverse(p, t):
    a, b = t.orders()
    if p.cv is not None:
        return b == 1
    return a == 1


def _attach(p, tracks, at, transverse, order):
    comps = p.components()
    # at a corner the arrow goes to the newer component
    target = max(comps, key=order.index)
    for t in tracks:
        at[t.index] = target
        transverse[t.index] = len(comps) == 1 and _smooth_transverse(p, t)


def _check_output(res):
    g = res.graph
    ok = is_tree(g) and all(v.genus == 0 for v in g.vertices)
    ok = ok and abs(determinant(g)) == 1 and is_negative_definite(g)
    if not ok:
        raise AssertionError("curve resolution is not a unimodular negative definite tree")
    for v in g.vertices:
        balance = v.euler * v.mult + sum(g.vertex(u).mult for u in g.neighbors(v.id))
        balance += sum(a.mult for a in g.arrows_at(v.id))
        if balance:
            raise AssertionError(f"multiplicities do not balance at {v.id}")
    lone_origin = len(g) == 1 and len(g.arrows) == 1
    if not lone_origin and any(is_contractible(g, v) for v in g.ids):
        raise AssertionError("curve resolution is not minimal")


# JSON input


def _parse_rational(x, what):
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"{what}: use an integer or an exact rational string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            pass
    raise ParseError(f"{what}: cannot read {x!r} as a rational number")


def branch_from_dict(d):
    if not isinstance(d, dict):
        raise ParseError("each branch must be a JSON object")
    terms = []
    for t in d.get("terms", []):
        if not isinstance(t, (list, tuple)) or len(t) != 2:
            raise ParseError(f"term {t!r} must be [exponent, coefficient]")
        terms.append((_parse_rational(t[0], "exponent"), _parse_rational(t[1], "coefficient")))
    weight = d.get("weight", 1)
    if isinstance(weight, bool) or not isinstance(weight, int):
        raise ParseError(f"weight must be an integer, got {weight!r}")
    try:
        return PuiseuxBranch(
            terms=tuple(terms),
            axis=d.get("axis"),
            weight=weight,
            label=d.get("label"),
            tracked=bool(d.get("tracked", False)),
            ramification=d.get("ramification"),
        )
    except InvalidBranch as exc:
        raise ParseError(str(exc)) from None


def branch_to_dict(b: PuiseuxBranch):
    d = {}
    if b.axis is not None:
        d["axis"] = b.axis
    else:
        d["terms"] = [[str(e), str(c)] for e, c in b.terms]
    d["weight"] = b.weight
    if b.label is not None:
        d["label"] = b.label
    if b.tracked:
        d["tracked"] = True
    if b.ramification is not None:
        d["ramification"] = b.ramification
    return d


def branches_from_json(data):
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("branches"), list):
        raise ParseError('expected an object with a "branches" list')
    return [branch_from_dict(b) for b in data["branches"]]


def branches_to_json(branches):
    return {"branches": [branch_to_dict(b) for b in branches]}
