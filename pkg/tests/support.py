"""Independent oracles and generators shared by the test modules."""

from fractions import Fraction
from itertools import combinations
from math import gcd

from singlink.calculus import blow_up_arrow, blow_up_edge, blow_up_vertex
from singlink.curve import PuiseuxBranch
from singlink.graph import Arrow, Edge, PlumbingGraph, Vertex, intersection_matrix, is_negative_definite


# linear algebra


def cofactor_det(m):
    """Laplace expansion along the first row."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def negative_definite_by_all_minors(m):
    """Every principal minor of order k has sign (-1)^k."""
    n = len(m)
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            sub = [[m[i][j] for j in rows] for i in rows]
            d = cofactor_det(sub)
            if d == 0 or (d > 0) != (k % 2 == 0):
                return False
    return True


def inverse(m):
    """Exact inverse by Gauss-Jordan over the rationals."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


# cyclic quotient type of z^d = x^a y^b, from the lattice of monomial orders


def klein_chain(d, a, b):
    """Self-intersections (as positive weights) of the minimal resolution of
    the normalization of ``z^d = x^a y^b``, one local component, read from
    the side of ``{x = 0}``.

    Brute force: the valuations of the normalization form the lattice
    ``{(u1, u2) : a u1 + b u2 = 0 mod d'}`` in the positive quadrant; the
    resolution chain is the boundary of the convex hull of its nonzero
    points, and consecutive boundary points satisfy
    ``v_(i-1) + v_(i+1) = w_i v_i``.
    """
    g = gcd(d, a, b)
    n, a, b = d // g, a // g, b // g
    p1 = (n // gcd(n, a), 0)
    p2 = (0, n // gcd(n, b))
    pts = sorted(
        (i, j)
        for i in range(p1[0] + 1)
        for j in range(p2[1] + 1)
        if (i, j) != (0, 0) and (a * i + b * j) % n == 0
    )

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    hull = []
    for p in pts:
        while len(hull) >= 2 and cross(hull[-2], hull[-1], p) < 0:
            hull.pop()
        hull.append(p)
    chain = hull[: hull.index(p1) + 1][::-1]
    assert chain[0] == p1 and chain[-1] == p2
    weights = []
    for prev, cur, nxt in zip(chain, chain[1:], chain[2:]):
        s = (prev[0] + nxt[0], prev[1] + nxt[1])
        w = s[0] // cur[0] if cur[0] else s[1] // cur[1]
        assert (w * cur[0], w * cur[1]) == s
        weights.append(w)
    return weights


# intersection multiplicities straight from Puiseux data


def _root_sign(k, n):
    """exp(2 pi i k / n) if it is +-1, else None."""
    k %= n
    if k == 0:
        return 1
    if 2 * k == n:
        return -1
    return None


def _first_difference(ta, tb, shift, nb):
    """Smallest exponent where x_A and the conjugate ``shift`` of x_B differ."""
    ca = dict(ta)
    cb = dict(tb)
    for e in sorted(set(ca) | set(cb)):
        x = ca.get(e, 0)
        y = cb.get(e, 0)
        if y:
            s = _root_sign(shift * int(e * nb), nb)
            if s is None or x != s * y:
                return e
        elif x:
            return e
    return None


def puiseux_intersection(A: PuiseuxBranch, B: PuiseuxBranch):
    if A.axis and B.axis:
        return 1 if A.axis != B.axis else None
    if B.axis and not A.axis:
        A, B = B, A
    if A.axis == "x":
        return B.terms[0][0] * B.ramification_index
    if A.axis == "y":
        return B.ramification_index
    na, nb = A.ramification_index, B.ramification_index
    total = Fraction(0)
    for j in range(nb):
        e = _first_difference(A.terms, B.terms, j, nb)
        assert e is not None
        total += e * na
    assert total.denominator == 1
    return int(total)


def graph_intersection(res, i, j):
    """``-(M^-1)_{ab}`` for the vertices carrying branches i and j."""
    g = res.graph
    inv = inverse(intersection_matrix(g))
    ids = list(g.ids)
    a, b = res.arrow_of[i].at, res.arrow_of[j].at
    return -inv[ids.index(a)][ids.index(b)]


# random data


def random_graph(rng, max_vertices=8, euler_range=(-4, 1), loops=False):
    n = rng.randint(1, max_vertices)
    ids = [f"V{i}" for i in range(n)]
    verts = [Vertex(v, rng.choice([0, 0, 0, 1]), rng.randint(*euler_range)) for v in ids]
    edges = []
    for _ in range(rng.randint(0, 2 * n)):
        u, v = rng.choice(ids), rng.choice(ids)
        if u == v and not loops:
            continue
        edges.append(Edge(u, v))
    arrows = [Arrow(rng.choice(ids), f"a{k}") for k in range(rng.randint(0, 3))]
    return PlumbingGraph(verts, edges, arrows)


def random_definite_tree(rng, max_vertices=6):
    """A tree with e_v <= -max(2, deg v); irreducibly diagonally dominant,
    hence negative definite."""
    n = rng.randint(1, max_vertices)
    ids = [f"V{i}" for i in range(n)]
    edges = [Edge(ids[i], ids[rng.randrange(i)]) for i in range(1, n)]
    deg = {v: 0 for v in ids}
    for e in edges:
        deg[e.a] += 1
        deg[e.b] += 1
    verts = [Vertex(v, 0, -max(2, deg[v]) - rng.randint(0, 2)) for v in ids]
    arrows = [Arrow(rng.choice(ids), f"a{k}") for k in range(rng.randint(0, 2))]
    g = PlumbingGraph(verts, edges, arrows)
    assert is_negative_definite(g)
    return g


def random_blowups(rng, g, count):
    for _ in range(count):
        kind = rng.choice(["vertex", "edge", "arrow"])
        if kind == "edge" and g.edges:
            g = blow_up_edge(g, rng.choice(g.edges))
        elif kind == "arrow" and g.arrows:
            g = blow_up_arrow(g, rng.randrange(len(g.arrows)))
        else:
            g = blow_up_vertex(g, rng.choice(g.ids))
    return g


def random_branch(rng, max_ram=4):
    roll = rng.random()
    if roll < 0.12:
        return PuiseuxBranch.axis_x(weight=rng.randint(1, 3))
    if roll < 0.22:
        return PuiseuxBranch.axis_y(weight=rng.randint(1, 3))
    n = rng.randint(1, max_ram)
    exps = sorted(rng.sample(range(n, 4 * n + 1), rng.randint(1, 3)))
    terms = [(Fraction(p, n), rng.choice([-2, -1, 1, 2, 3])) for p in exps]
    return PuiseuxBranch(tuple(terms), weight=rng.randint(1, 3))


# shapes from the worked example


def example_curve_shape():
    """Chain E1..E8; the tracked {x=0} arrow on E1, branch stars on E2, E5, E8."""
    ids = [f"E{i}" for i in range(1, 9)]
    arrows = [Arrow("E1", "axis"), Arrow("E2", "star"), Arrow("E5", "star"), Arrow("E8", "star")]
    return PlumbingGraph([Vertex(v) for v in ids], list(zip(ids, ids[1:])), arrows)


def example_cover_shape():
    """Cover graph with one 6-cycle: 11 vertices."""
    ids = ["E1'", "E2'", "E3(1)'", "E3(2)'", "E4(1)'", "E4(2)'", "E5'", "E6'", "E7'", "E8'", "E9'"]
    edges = [
        ("E1'", "E2'"), ("E2'", "E3(1)'"), ("E2'", "E3(2)'"), ("E3(1)'", "E4(1)'"),
        ("E3(2)'", "E4(2)'"), ("E4(1)'", "E5'"), ("E4(2)'", "E5'"), ("E5'", "E6'"),
        ("E6'", "E7'"), ("E7'", "E8'"), ("E8'", "E9'"),
    ]
    return PlumbingGraph([Vertex(v) for v in ids], edges)


def example_minimal_shape():
    """The previous shape with E6' contracted: 10 vertices."""
    ids = ["E1'", "E2'", "E3(1)'", "E3(2)'", "E4(1)'", "E4(2)'", "E5'", "E7'", "E8'", "E9'"]
    edges = [
        ("E1'", "E2'"), ("E2'", "E3(1)'"), ("E2'", "E3(2)'"), ("E3(1)'", "E4(1)'"),
        ("E3(2)'", "E4(2)'"), ("E4(1)'", "E5'"), ("E4(2)'", "E5'"), ("E5'", "E7'"),
        ("E7'", "E8'"), ("E8'", "E9'"),
    ]
    return PlumbingGraph([Vertex(v) for v in ids], edges)


def example_branches():
    """x = y - y^2, x = y - y^3, x = y + y^(34/13), and {x=0} tracked."""
    return [
        PuiseuxBranch(((1, 1), (2, -1)), label="delta_1"),
        PuiseuxBranch(((1, 1), (3, -1)), label="delta_2"),
        PuiseuxBranch(((1, 1), (Fraction(34, 13), 1)), label="delta_3"),
        PuiseuxBranch.axis_x(tracked=True, label="x=0"),
    ]


def star_or_axis(arrow):
    return "axis" if arrow.mult == 0 or arrow.label in ("axis", "x=0") else "star"
