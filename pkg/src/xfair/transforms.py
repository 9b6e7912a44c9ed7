"""Fixed transformations and minimal counterfactual search.

A transformation picks a set of feature indices and target bits and
overwrites any world on exactly those indices.  Given a classifier, a focal
world, and a desired target label, a transformation is graded on four
nested properties:

* appropriate - its image carries the target label;
* minimally appropriate - no world that agrees with the image on the
  transformation's own indices reaches the target label any closer to the
  focal world (on Boolean spaces this clause is always satisfied by an
  appropriate transformation, a collapse the test suite checks rather than
  assumes);
* sufficiently appropriate - no transformation over a proper subset of the
  indices is appropriate, whatever its targets;
* sufficiently minimally appropriate - both of the above.

The sufficiently-minimal transformations with flip sets of size at most d
form an antichain of minimal flip sets; they are the counterfactual
explanations this workbench reports, and the set of their images is the
decision boundary the structure module builds regions from.  When two or
more exist the focal decision is overdetermined: several independent minimal
edits each flip the prediction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import PreconditionError, ValidationError
from .model import Classifier, FeatureSpace, World, hamming


@dataclass(frozen=True)
class Transformation:
    """Overwrite fixed indices with fixed bits; idempotent by construction."""

    assignments: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        indices = [i for i, _ in self.assignments]
        if len(set(indices)) != len(indices):
            raise ValidationError("transformation assigns a feature twice")
        if sorted(self.assignments) != list(self.assignments):
            raise ValidationError("transformation assignments must be index-sorted")
        for i, bit in self.assignments:
            if bit not in (0, 1):
                raise ValidationError(f"target bit for index {i} must be 0 or 1")

    @classmethod
    def flip(cls, world: World, indices: Iterable[int]) -> "Transformation":
        """The transformation complementing ``world`` on ``indices``."""
        return cls(tuple(sorted((i, 1 - world.bit(i)) for i in indices)))

    @classmethod
    def setting(cls, assignments: Mapping[int, int]) -> "Transformation":
        return cls(tuple(sorted((i, 1 if b else 0) for i, b in assignments.items())))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.assignments)

    def apply(self, world: World) -> World:
        return world.overwrite(dict(self.assignments))

    def to_dict(self, space: FeatureSpace) -> dict:
        return {"set": {space.features[i]: bool(b) for i, b in self.assignments}}

    @classmethod
    def from_dict(cls, doc: Mapping, space: FeatureSpace) -> "Transformation":
        if not isinstance(doc, Mapping) or "set" not in doc:
            raise ValidationError("transformation document needs a set field")
        body = doc["set"]
        if not isinstance(body, Mapping) or not body:
            raise ValidationError("transformation set must be a nonempty object")
        return cls.setting({space.index(name): 1 if b else 0 for name, b in body.items()})


@dataclass(frozen=True)
class Appropriateness:
    """The four grading flags; anything above `appropriate` implies it."""

    appropriate: bool
    minimally_appropriate: bool
    sufficiently_appropriate: bool
    sufficiently_minimally_appropriate: bool

    def __post_init__(self) -> None:
        if not self.appropriate and (
            self.minimally_appropriate
            or self.sufficiently_appropriate
            or self.sufficiently_minimally_appropriate
        ):
            raise ValidationError("non-appropriate transformations grade all-false")
        if self.sufficiently_minimally_appropriate != (
            self.minimally_appropriate and self.sufficiently_appropriate
        ):
            raise ValidationError("joint flag must equal the conjunction")


def _check_focal(c: Classifier, focal: World, target: str) -> None:
    if target not in c.labels:
        raise ValidationError(f"unknown target label {target!r}")
    if c.evaluate(focal) == target:
        raise PreconditionError(
            f"focal world {focal.bits} already carries label {target!r}"
        )


def _check_radius(c: Classifier, d: int | None) -> int:
    n = c.space.n
    if d is None:
        return n
    if not isinstance(d, int) or d < 0 or d > n:
        raise ValidationError(f"radius must lie in 0..{n}, got {d!r}")
    return d


def classify(
    t: Transformation, c: Classifier, focal: World, target: str
) -> Appropriateness:
    """Grade one transformation against focal world and target label."""
    _check_focal(c, focal, target)
    if not t.assignments:
        raise ValidationError("cannot grade the empty transformation")
    image = t.apply(focal)
    appropriate = c.evaluate(image) == target
    if not appropriate:
        return Appropriateness(False, False, False, False)

    # minimality: among worlds agreeing with the image on t's own indices,
    # none carrying the target label is strictly closer to the focal world
    dist = hamming(image, focal)
    minimal = True
    fixed = dict(t.assignments)
    free = [i for i in range(c.space.n) if i not in fixed]
    for combo in range(1 << len(free)):
        assignment = dict(fixed)
        for k, i in enumerate(free):
            assignment[i] = (combo >> k) & 1
        other = focal.overwrite(assignment)
        if c.evaluate(other) == target and hamming(other, focal) < dist:
            minimal = False
            break

    # sufficiency: no transformation over a proper index subset is
    # appropriate.  Any such transformation's image is the focal world
    # flipped on some proper subset of the indices (targets agreeing with
    # the focal world only shrink the effective flip set), so checking all
    # proper sub-flips is exhaustive.  This also rejects appropriate
    # transformations that are not genuine flips of all their indices.
    sufficient = True
    idx = t.indices
    for size in range(1, len(idx)):
        for sub in combinations(idx, size):
            if c.evaluate(focal.flipped(sub)) == target:
                sufficient = False
                break
        if not sufficient:
            break
    if sufficient and len(image.diff(focal)) < len(idx):
        sufficient = False

    return Appropriateness(True, minimal, sufficient, minimal and sufficient)


def iter_index_sets(n: int, max_size: int) -> Iterator[tuple[int, ...]]:
    """Nonempty index sets, ascending size then lexicographic."""
    for size in range(1, max_size + 1):
        yield from combinations(range(n), size)


@dataclass(frozen=True)
class OverdeterminationSet:
    """All sufficiently-minimal counterfactual transformations within d."""

    focal: World
    target: str
    radius: int
    deltas: tuple[Transformation, ...]

    @property
    def overdetermined(self) -> bool:
        return len(self.deltas) >= 2


def minimal_counterfactuals(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> OverdeterminationSet:
    """The antichain of minimal flip sets reaching ``target`` within ``d``.

    Enumerates flip sets by ascending size then lexicographic index order,
    pruning supersets of already-found members: any appropriate proper
    subset disqualifies a set, and every appropriate set dominates some
    antichain member, so checking found members is exhaustive.
    """
    _check_focal(c, focal, target)
    radius = _check_radius(c, d)
    found: list[tuple[int, ...]] = []
    deltas: list[Transformation] = []
    for idx in iter_index_sets(c.space.n, radius):
        members = set(idx)
        if any(set(prev) < members for prev in found):
            continue
        if c.evaluate(focal.flipped(idx)) == target:
            found.append(idx)
            deltas.append(Transformation.flip(focal, idx))
    return OverdeterminationSet(focal, target, radius, tuple(deltas))


def appropriate_flips(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> tuple[Transformation, ...]:
    """Every appropriate flip transformation within ``d``, canonical order."""
    _check_focal(c, focal, target)
    radius = _check_radius(c, d)
    return tuple(
        Transformation.flip(focal, idx)
        for idx in iter_index_sets(c.space.n, radius)
        if c.evaluate(focal.flipped(idx)) == target
    )


def boundary(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> tuple[World, ...]:
    """Images of the minimal counterfactual transformations within ``d``.

    This is the transformation-side construction of the decision boundary;
    the conditional-semantics module derives the same set from closest-world
    witnesses of minimal true antecedents, and the two are asserted equal in
    tests.  Canonical world order.  A zero radius yields the empty boundary.
    """
    deltas = minimal_counterfactuals(c, focal, target, d).deltas
    return tuple(sorted(t.apply(focal) for t in deltas))
