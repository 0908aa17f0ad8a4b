"""Pinched solid tori along a one-dimensional singular locus.

Over one branch of the singular locus, the preimage under normalization
splits into curves mapping with degrees ``d_1, ..., d_n``.  The link near
that branch is a singular pinched solid torus whose complete invariant is
the number ``k = sum d_j`` of pinched discs together with the cycle type
``{d_1, ..., d_n}`` of the monodromy permutation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange, ParseError


@dataclass(frozen=True)
class BranchCoverData:
    degrees: tuple

    def __post_init__(self):
        degs = tuple(self.degrees)
        if not degs:
            raise OutOfRange("at least one degree is required")
        for d in degs:
            if isinstance(d, bool) or not isinstance(d, int) or d < 1:
                raise OutOfRange(f"degrees must be positive integers, got {d!r}")
        object.__setattr__(self, "degrees", degs)


@dataclass(frozen=True)
class PinchedTorusModel:
    k: int
    cycle_type: tuple

    def __post_init__(self):
        ct = tuple(sorted(self.cycle_type))
        if not ct or any(c < 1 for c in ct):
            raise OutOfRange(f"cycle type must be a nonempty list of positive integers, got {ct}")
        if sum(ct) != self.k:
            raise OutOfRange(f"cycle type {ct} does not sum to k={self.k}")
        object.__setattr__(self, "cycle_type", ct)


@dataclass(frozen=True)
class Step:
    kind: str  # "curling" or "identify"
    size: int

    @property
    def trivial(self):
        return self.size == 1

    def __str__(self):
        if self.kind == "curling":
            return f"curling({self.size})"
        return f"identify {self.size} cores"


@dataclass(frozen=True)
class Decomposition:
    """A curling per component, then one identification of all the cores."""

    steps: tuple
    k: int

    @property
    def nontrivial_steps(self):
        return tuple(s for s in self.steps if not s.trivial)


def _data(x):
    return x if isinstance(x, BranchCoverData) else BranchCoverData(tuple(x))


def hyperplane_branch_count(data) -> int:
    return sum(_data(data).degrees)


def pinched_model(data) -> PinchedTorusModel:
    degs = _data(data).degrees
    return PinchedTorusModel(sum(degs), degs)


def models_homeomorphic(m1: PinchedTorusModel, m2: PinchedTorusModel) -> bool:
    # conjugacy classes of permutations are determined by cycle type
    return m1.k == m2.k and m1.cycle_type == m2.cycle_type


def is_manifold_link(branches) -> bool:
    return all(hyperplane_branch_count(b) == 1 for b in branches)


def compose_curlings_and_identifications(data) -> Decomposition:
    degs = _data(data).degrees
    steps = [Step("curling", d) for d in degs]
    if len(degs) > 1:
        steps.append(Step("identify", len(degs)))
    return Decomposition(tuple(steps), sum(degs))


def parse_branch_list(text):
    """``"2,1,3;1"`` -> two branches with degrees (2, 1, 3) and (1,)."""
    text = text.strip()
    if not text:
        return []
    out = []
    for chunk in text.split(";"):
        try:
            degs = tuple(int(x) for x in chunk.split(","))
        except ValueError:
            raise ParseError(f"cannot read degrees from {chunk!r}") from None
        try:
            out.append(BranchCoverData(degs))
        except OutOfRange as exc:
            raise ParseError(str(exc)) from None
    return out
