"""Spatial relations over axis-aligned boxes.

Relations are conjunctions of primitive literals (axis order, axis
alignment, vertical adjacency, horizontal overlap, containment, distance
bands). Prepositions are learned by collecting every qualitative literal
that holds of a demonstrated pair; repeated demonstrations shrink the
conjunction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

EPS = 1e-9
AXES = {"x": 0, "y": 1, "z": 2}
AXIS_NAMES = ("x", "y", "z")

ALIGN_TOL = 0.05     # meters, axis alignment of centers
ADJACENT_TOL = 0.01  # meters, resting contact along z


class UnknownEntity(KeyError):
    """Entity id not present in the queried state."""


class NoLiteralHolds(ValueError):
    """A demonstration pair satisfies no primitive literal."""


class NoFreePose(ValueError):
    """No collision-free pose satisfies the composition."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned box: inclusive lo/hi corners in meters."""

    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def __post_init__(self):
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"box has non-positive extent: {self.lo}..{self.hi}")

    @staticmethod
    def from_center(center: Iterable[float], extent: Iterable[float]) -> "Box":
        c = tuple(float(v) for v in center)
        e = tuple(float(v) for v in extent)
        return Box(
            tuple(ci - ei / 2.0 for ci, ei in zip(c, e)),
            tuple(ci + ei / 2.0 for ci, ei in zip(c, e)),
        )

    @property
    def center(self) -> tuple[float, float, float]:
        return tuple((l + h) / 2.0 for l, h in zip(self.lo, self.hi))

    @property
    def extent(self) -> tuple[float, float, float]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def overlaps(self, other: "Box") -> bool:
        return all(
            min(self.hi[i], other.hi[i]) - max(self.lo[i], other.lo[i]) > EPS
            for i in range(3)
        )


@dataclass(frozen=True)
class Literal:
    """One primitive spatial predicate over an ordered pair (a, b)."""

    kind: str
    axis: str | None = None
    value: float | None = None

    def __post_init__(self):
        if self.kind in ("within-distance", "beyond-distance") and (
            self.value is None or self.value <= 0
        ):
            raise ValueError("distance literals need a positive threshold")
        if self.kind in ("axis-aligned", "vertically-adjacent") and (
            self.value is None or self.value <= 0
        ):
            raise ValueError("tolerance literals need a positive tolerance")


def axis_greater(axis: str) -> Literal:
    return Literal("axis-greater", axis=axis)


def axis_less(axis: str) -> Literal:
    return Literal("axis-less", axis=axis)


def axis_aligned(axis: str, tol: float = ALIGN_TOL) -> Literal:
    return Literal("axis-aligned", axis=axis, value=tol)


def vertically_adjacent(tol: float = ADJACENT_TOL) -> Literal:
    return Literal("vertically-adjacent", value=tol)


def horizontally_overlapping() -> Literal:
    return Literal("horizontally-overlapping")


def contained_in() -> Literal:
    return Literal("contained-in")


def within_distance(d: float) -> Literal:
    return Literal("within-distance", value=d)


def beyond_distance(d: float) -> Literal:
    return Literal("beyond-distance", value=d)


def literal_holds(lit: Literal, a: Box, b: Box) -> bool:
    """True iff the literal holds of a relative to b."""
    if lit.kind == "axis-greater":
        i = AXES[lit.axis]
        return a.lo[i] >= b.hi[i] - EPS
    if lit.kind == "axis-less":
        i = AXES[lit.axis]
        return a.hi[i] <= b.lo[i] + EPS
    if lit.kind == "axis-aligned":
        i = AXES[lit.axis]
        return abs(a.center[i] - b.center[i]) <= lit.value + EPS
    if lit.kind == "vertically-adjacent":
        return abs(a.lo[2] - b.hi[2]) <= lit.value + EPS
    if lit.kind == "horizontally-overlapping":
        return all(
            min(a.hi[i], b.hi[i]) - max(a.lo[i], b.lo[i]) > EPS for i in (0, 1)
        )
    if lit.kind == "contained-in":
        return all(
            a.lo[i] >= b.lo[i] - EPS and a.hi[i] <= b.hi[i] + EPS for i in range(3)
        )
    if lit.kind == "within-distance":
        return _center_dist(a, b) <= lit.value + EPS
    if lit.kind == "beyond-distance":
        return _center_dist(a, b) > lit.value - EPS
    raise ValueError(f"unknown literal kind {lit.kind!r}")


def _center_dist(a: Box, b: Box) -> float:
    return float(np.linalg.norm(np.array(a.center) - np.array(b.center)))


# Qualitative kinds enumerated when learning from a demonstration.  The
# distance bands are kept out of learning: a single example pins them to an
# arbitrary threshold, so they are only used in hand-built compositions.
def _learnable_literals() -> list[Literal]:
    lits: list[Literal] = []
    for ax in AXIS_NAMES:
        lits.append(axis_greater(ax))
        lits.append(axis_less(ax))
        lits.append(axis_aligned(ax))
    lits.append(vertically_adjacent())
    lits.append(horizontally_overlapping())
    lits.append(contained_in())
    return lits


@dataclass(frozen=True)
class SpatialComposition:
    """Named conjunction of literals; the meaning of one preposition."""

    id: str
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("composition needs at least one literal")

    def holds_boxes(self, a: Box, b: Box) -> bool:
        return all(literal_holds(lit, a, b) for lit in self.literals)


def composition_from_example(comp_id: str, a: Box, b: Box) -> SpatialComposition:
    """Conjunction of every learnable literal the demonstrated pair satisfies."""
    if all(abs(x - y) <= EPS for x, y in zip(a.lo + a.hi, b.lo + b.hi)):
        # A coincident pair satisfies only the trivial literals; it carries
        # no spatial information to learn from.
        raise NoLiteralHolds(f"degenerate demonstration for {comp_id!r}")
    lits = tuple(l for l in _learnable_literals() if literal_holds(l, a, b))
    if not lits:
        raise NoLiteralHolds(f"no primitive literal holds for {comp_id!r}")
    return SpatialComposition(comp_id, lits)


class SpatialStore:
    """Registry of known compositions, keyed by id."""

    def __init__(self):
        self._comps: dict[str, SpatialComposition] = {}
        self._fresh = itertools.count()

    def add(self, comp: SpatialComposition) -> SpatialComposition:
        self._comps[comp.id] = comp
        return comp

    def get(self, comp_id: str) -> SpatialComposition:
        if comp_id not in self._comps:
            raise UnknownEntity(comp_id)
        return self._comps[comp_id]

    def __contains__(self, comp_id: str) -> bool:
        return comp_id in self._comps

    def ids(self) -> list[str]:
        return sorted(self._comps)

    def compositions(self) -> list[SpatialComposition]:
        return [self._comps[k] for k in self.ids()]

    def mint_id(self, word: str) -> str:
        cid = word
        while cid in self._comps:
            cid = f"{word}-{next(self._fresh)}"
        return cid

    def learn_from_example(
        self, comp_id: str, a: str, b: str, boxes: Mapping[str, Box]
    ) -> SpatialComposition:
        """Learn or refine a composition from one demonstrated pair.

        A repeated demonstration intersects the stored conjunction with the
        literals holding now, generalizing the preposition.
        """
        if a == b:
            raise ValueError("demonstration pair must be distinct")
        for key in (a, b):
            if key not in boxes:
                raise UnknownEntity(key)
        fresh = composition_from_example(comp_id, boxes[a], boxes[b])
        if comp_id in self._comps:
            kept = tuple(
                l for l in self._comps[comp_id].literals if l in fresh.literals
            )
            if not kept:
                raise NoLiteralHolds(
                    f"demonstration contradicts every stored literal of {comp_id!r}"
                )
            fresh = SpatialComposition(comp_id, kept)
        return self.add(fresh)

    def holds(self, comp_id: str, a: str, b: str, boxes: Mapping[str, Box]) -> bool:
        if a == b:
            raise ValueError("relation arguments must be distinct")
        for key in (a, b):
            if key not in boxes:
                raise UnknownEntity(key)
        return self.get(comp_id).holds_boxes(boxes[a], boxes[b])

    def extract_relations(
        self, boxes: Mapping[str, Box], comp_ids: Iterable[str] | None = None
    ) -> set[tuple[str, str, str]]:
        """All (composition, a, b) triples holding over ordered pairs."""
        ids = sorted(comp_ids) if comp_ids is not None else self.ids()
        found = set()
        for cid in ids:
            comp = self.get(cid)
            for a, b in itertools.permutations(sorted(boxes), 2):
                if comp.holds_boxes(boxes[a], boxes[b]):
                    found.add((cid, a, b))
        return found


# Pose search lattice pitch, meters.
POSE_STEP = 0.05


def canonical_pose(
    comp: SpatialComposition,
    target: Box,
    extent: tuple[float, float, float],
    obstacles: Iterable[Box],
    hover: tuple[float, float, float],
    bounds: Box,
) -> tuple[float, float, float]:
    """Center position for a box of `extent` satisfying `comp` w.r.t. target.

    Searches a lattice over the workspace (augmented with the exact
    alignment coordinates of the target) for poses that satisfy every
    literal and overlap no obstacle, preferring minimal displacement from
    the arm hover point; remaining ties break lexicographically.
    """
    ext = np.asarray(extent, dtype=float)
    half = ext / 2.0
    cand_axes = []
    for i in range(3):
        lo = bounds.lo[i] + half[i]
        hi = bounds.hi[i] - half[i]
        vals = set(np.arange(lo, hi + EPS, POSE_STEP).round(6).tolist())
        vals.add(round(target.center[i], 6))
        if i == 2:
            vals.add(round(target.hi[2] + half[2], 6))  # resting atop target
            vals.add(round(half[2], 6))                 # resting on the z=0 plane
        cand_axes.append(sorted(v for v in vals if lo - EPS <= v <= hi + EPS))
    if any(not vals for vals in cand_axes):
        raise NoFreePose(comp.id)

    grid = np.array(
        np.meshgrid(*cand_axes, indexing="ij"), dtype=float
    ).reshape(3, -1).T
    lo = grid - half
    hi = grid + half

    ok = np.ones(len(grid), dtype=bool)
    for lit in comp.literals:
        ok &= _literal_mask(lit, lo, hi, grid, target)
        if not ok.any():
            raise NoFreePose(comp.id)

    for obs in obstacles:
        obs_lo = np.asarray(obs.lo)
        obs_hi = np.asarray(obs.hi)
        sep = (np.minimum(hi, obs_hi) - np.maximum(lo, obs_lo)) > EPS
        ok &= ~sep.all(axis=1)
        if not ok.any():
            raise NoFreePose(comp.id)

    centers = grid[ok]
    d2 = ((centers - np.asarray(hover)) ** 2).sum(axis=1)
    order = np.lexsort((centers[:, 2], centers[:, 1], centers[:, 0], d2.round(9)))
    best = centers[order[0]]
    return (float(best[0]), float(best[1]), float(best[2]))


def _literal_mask(lit, lo, hi, centers, b: Box):
    """Vectorized literal_holds over candidate boxes (lo, hi, centers)."""
    if lit.kind == "axis-greater":
        i = AXES[lit.axis]
        return lo[:, i] >= b.hi[i] - EPS
    if lit.kind == "axis-less":
        i = AXES[lit.axis]
        return hi[:, i] <= b.lo[i] + EPS
    if lit.kind == "axis-aligned":
        i = AXES[lit.axis]
        return np.abs(centers[:, i] - b.center[i]) <= lit.value + EPS
    if lit.kind == "vertically-adjacent":
        return np.abs(lo[:, 2] - b.hi[2]) <= lit.value + EPS
    if lit.kind == "horizontally-overlapping":
        m = np.ones(len(centers), dtype=bool)
        for i in (0, 1):
            m &= (np.minimum(hi[:, i], b.hi[i]) - np.maximum(lo[:, i], b.lo[i])) > EPS
        return m
    if lit.kind == "contained-in":
        m = np.ones(len(centers), dtype=bool)
        for i in range(3):
            m &= (lo[:, i] >= b.lo[i] - EPS) & (hi[:, i] <= b.hi[i] + EPS)
        return m
    if lit.kind == "within-distance":
        d = np.linalg.norm(centers - np.asarray(b.center), axis=1)
        return d <= lit.value + EPS
    if lit.kind == "beyond-distance":
        d = np.linalg.norm(centers - np.asarray(b.center), axis=1)
        return d > lit.value - EPS
    raise ValueError(f"unknown literal kind {lit.kind!r}")


def literal_to_dict(lit: Literal) -> dict:
    d: dict = {"kind": lit.kind}
    if lit.axis is not None:
        d["axis"] = lit.axis
    if lit.value is not None:
        d["value"] = lit.value
    return d


def literal_from_dict(d: Mapping) -> Literal:
    return Literal(d["kind"], axis=d.get("axis"), value=d.get("value"))


def composition_to_dict(comp: SpatialComposition) -> dict:
    return {"id": comp.id, "literals": [literal_to_dict(l) for l in comp.literals]}


def composition_from_dict(d: Mapping) -> SpatialComposition:
    return SpatialComposition(
        d["id"], tuple(literal_from_dict(l) for l in d["literals"])
    )


def builtin_compositions() -> list[SpatialComposition]:
    """Compositions every session starts with: on, in."""
    return [
        SpatialComposition(
            "on", (vertically_adjacent(), horizontally_overlapping())
        ),
        SpatialComposition("in", (contained_in(),)),
    ]
