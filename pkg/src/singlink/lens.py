"""Negative continued fractions, lens spaces and quasi-ordinary bamboos.

Convention: the boundary of the linear plumbing with Euler numbers
``-b_1, ..., -b_k`` is the lens space ``L(n, q)`` where ``n/q`` is the
negative continued fraction ``[b_1, ..., b_k]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NonIntegralSolution, NotCoprime, OutOfRange, ParseError, WeightTooSmall
from .graph import chain_graph


@dataclass(frozen=True)
class HJBamboo:
    """Weights ``b_i >= 2`` of a Hirzebruch-Jung chain.  Empty means smooth."""

    weights: tuple = ()

    def __post_init__(self):
        w = tuple(self.weights)
        for b in w:
            if isinstance(b, bool) or not isinstance(b, int) or b < 2:
                raise WeightTooSmall(f"bamboo weights must be integers >= 2, got {b!r}", weights=list(w))
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __eq__(self, other):
        if isinstance(other, HJBamboo):
            return self.weights == other.weights
        if isinstance(other, (list, tuple)):
            return self.weights == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.weights)

    def __str__(self):
        return "[" + ",".join(map(str, self.weights)) + "]"

    def reversed(self):
        return HJBamboo(self.weights[::-1])

    def as_graph(self, prefix="E"):
        return chain_graph([-b for b in self.weights], prefix=prefix)


@dataclass(frozen=True)
class LensParams:
    """``L(n, q)``.  ``n = 0`` is S^1 x S^2 (stored with q = 1), ``(1, 0)`` is S^3."""

    n: int
    q: int

    def __post_init__(self):
        n, q = self.n, self.q
        if n < 0:
            raise OutOfRange(f"lens parameter n must be >= 0, got {n}")
        if n == 0:
            if q not in (1, -1):
                raise NotCoprime(f"L(0,q) needs q = +-1, got {q}")
            object.__setattr__(self, "q", 1)
        elif not 0 <= q < n:
            raise OutOfRange(f"lens parameter q must satisfy 0 <= q < n, got L({n},{q})")
        elif gcd(n, q) != 1:
            raise NotCoprime(f"L({n},{q}) needs gcd(n, q) = 1")

    @classmethod
    def of(cls, n, q):
        """Build from any representative of q modulo n."""
        if n > 0:
            q %= n
        return cls(n, q)

    def __str__(self):
        return f"L({self.n},{self.q})"


def _check_pair(n, q):
    if not (0 < q < n):
        raise OutOfRange(f"need 0 < q < n, got n={n}, q={q}")
    if gcd(n, q) != 1:
        raise NotCoprime(f"need gcd(n, q) = 1, got n={n}, q={q}")


def hj_expand(n, q) -> HJBamboo:
    """Weights of ``n/q = b_1 - 1/(b_2 - 1/(...))`` with every ``b_i >= 2``."""
    _check_pair(n, q)
    out = []
    while q:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return HJBamboo(tuple(out))


def hj_evaluate(bamboo) -> tuple:
    if not isinstance(bamboo, HJBamboo):
        bamboo = HJBamboo(tuple(bamboo))
    n, q = 1, 0
    for b in reversed(bamboo.weights):
        n, q = b * n - q, n
    return n, q


def resolve_quasi_ordinary(n, q) -> HJBamboo:
    """Bamboo resolving ``z^n = x y^q``; the first vertex meets ``{x = 0}``."""
    _check_pair(n, q)
    return hj_expand(n, n - q)


def resolve_quasi_ordinary_by_line_blowups(n, q) -> HJBamboo:
    """Resolve ``z^n = x y^q`` by blowing up the singular line repeatedly.

    Independent of ``hj_expand``.  Each round either blows up the line
    ``y = z = 0`` (when the exponent of z exceeds that of y), producing one
    exceptional curve, or changes chart without producing one.  The
    monomials expressing the original coordinates are carried along; their
    orders along the new curves give the divisors of ``x`` and ``y``, and the
    self-intersections follow by balancing those divisors.
    """
    _check_pair(n, q)
    N, Q = n, q
    # exponent vectors over the current coordinates (x, y, z)
    x0, y0 = (1, 0, 0), (0, 1, 0)
    nu_x, nu_y = [], []
    while N > 1:
        if N > Q:
            # y = v z ; the new curve is {x = z = 0} on z^(N-Q) = x v^Q
            x0 = (x0[0], x0[1], x0[2] + x0[1])
            y0 = (y0[0], y0[1], y0[2] + y0[1])
            N -= Q
            nu_x.append(x0[0] * N + x0[2])
            nu_y.append(y0[0] * N + y0[2])
        else:
            # z = w y ; w^N = x y^(Q-N), no new curve
            x0 = (x0[0], x0[1] + x0[2], x0[2])
            y0 = (y0[0], y0[1] + y0[2], y0[2])
            Q -= N
    k = len(nu_x)
    weights = []
    for i in range(k):
        # strict transforms: {x=0} meets the first curve, {y=0} the last,
        # each with multiplicity n in the divisor of its coordinate
        side_x = (nu_x[i - 1] if i > 0 else 0) + (nu_x[i + 1] if i + 1 < k else 0) + (n if i == 0 else 0)
        side_y = (nu_y[i - 1] if i > 0 else 0) + (nu_y[i + 1] if i + 1 < k else 0) + (n if i == k - 1 else 0)
        e = Fraction(-side_x, nu_x[i])
        if e.denominator != 1 or Fraction(-side_y, nu_y[i]) != e:
            raise NonIntegralSolution(f"inconsistent balancing at curve {i + 1} for n={n}, q={q}")
        weights.append(-int(e))
    return HJBamboo(tuple(weights))


def lens_of_quasi_ordinary(n, q) -> LensParams:
    _check_pair(n, q)
    return LensParams.of(n, n - q)


def lens_of_bamboo(bamboo) -> LensParams:
    n, q = hj_evaluate(bamboo)
    return LensParams.of(n, q)


def lens_equivalent(l1: LensParams, l2: LensParams, oriented=True):
    """Homeomorphism test for lens spaces.

    Oriented: same n and ``q2 = q1^{+-1} mod n``.  Unoriented additionally
    allows ``q2 = -q1^{+-1} mod n``.
    """
    if l1.n != l2.n:
        return False
    n = l1.n
    if n <= 2:
        return True
    q1, q2 = l1.q, l2.q
    signs = (1,) if oriented else (1, -1)
    for s in signs:
        if (q2 - s * q1) % n == 0 or (q1 * q2 - s) % n == 0:
            return True
    return False


def is_S3(lens: LensParams):
    return lens.n == 1


def is_S1xS2(lens: LensParams):
    return lens.n == 0


_FRACTION = re.compile(r"^\s*(-?\d+)\s*/\s*(-?\d+)\s*$")
_LENS = re.compile(r"^\s*L\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_fraction(text):
    """``"12/5"`` -> ``(12, 5)``; no reduction is performed."""
    m = _FRACTION.match(text)
    if not m:
        raise ParseError(f"expected n/q, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def parse_lens(text) -> LensParams:
    m = _LENS.match(text)
    if not m:
        raise ParseError(f"expected L(n,q), got {text!r}")
    return LensParams.of(int(m.group(1)), int(m.group(2)))
