"""Closest-world evaluation of counterfactual conditionals.

A counterfactual ``antecedent => consequent`` is evaluated at a focal world
by ordering all worlds by Hamming distance from it: the conditional holds
when every closest antecedent-world satisfies the consequent.  An
unsatisfiable antecedent makes the conditional vacuously true, and a focal
world that itself satisfies the antecedent is its own unique closest world
(weak centering), so the conditional then degrades to the material reading.

Two independent constructions are cross-checked against the transformation
module:

* ``correspondence_check`` compares, for every literal-conjunction
  antecedent, the closest-world verdict with the existence of a minimally
  appropriate transformation over the antecedent's own dimensions whose
  image satisfies the antecedent and carries the target label;
* ``boundary_via_closest_worlds`` rebuilds the decision boundary from the
  closest-world witnesses of subset-minimal true antecedents, which must
  coincide with the images of the minimal counterfactual transformations.

``complete_explanation`` collects every true counterfactual with the target
label as consequent whose antecedent is a nonempty literal conjunction (or,
for tiny spaces, an arbitrary Boolean function given in disjunctive normal
form) with closest witnesses inside the search radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import PreconditionError, ValidationError
from .formulas import (
    Formula,
    PredictionAtom,
    literal_conjunction,
    satisfies,
)
from .model import Classifier, World, enumerate_worlds, hamming
from .transforms import Transformation, boundary, classify

FULL_BOOLEAN_MAX_N = 4


def closest_worlds(
    focal: World, formula: Formula, classifier: Classifier
) -> tuple[World, ...]:
    """All antecedent-worlds at minimal Hamming distance from ``focal``.

    Empty when the formula is unsatisfiable; canonical world order.
    """
    best: list[World] = []
    best_dist: int | None = None
    for world in enumerate_worlds(classifier.space):
        if not satisfies(world, formula, classifier):
            continue
        dist = hamming(world, focal)
        if best_dist is None or dist < best_dist:
            best = [world]
            best_dist = dist
        elif dist == best_dist:
            best.append(world)
    return tuple(best)


@dataclass(frozen=True)
class Counterfactual:
    antecedent: Formula
    consequent: Formula


def eval_counterfactual(
    focal: World, conditional: Counterfactual, classifier: Classifier
) -> bool:
    """True iff every closest antecedent-world satisfies the consequent."""
    witnesses = closest_worlds(focal, conditional.antecedent, classifier)
    return all(
        satisfies(w, conditional.consequent, classifier) for w in witnesses
    )


@dataclass(frozen=True)
class CompleteExplanation:
    focal: World
    target: str
    radius: int
    members: tuple[Counterfactual, ...]


def _check_focal(c: Classifier, focal: World, target: str) -> None:
    if target not in c.labels:
        raise ValidationError(f"unknown target label {target!r}")
    if c.evaluate(focal) == target:
        raise PreconditionError(
            f"focal world {focal.bits} already carries label {target!r}"
        )


def _radius(c: Classifier, d: int | None) -> int:
    n = c.space.n
    if d is None:
        return n
    if not isinstance(d, int) or d < 0 or d > n:
        raise ValidationError(f"radius must lie in 0..{n}, got {d!r}")
    return d


def _true_conjunction_antecedents(
    c: Classifier, focal: World, target: str, radius: int
) -> list[dict[int, bool]]:
    """Index->bit maps of true literal-conjunction antecedents within radius.

    For a literal conjunction the unique closest world is the focal world
    overwritten by the literals, so truth of the counterfactual reduces to
    that world's label; the general evaluator is reserved for tests that
    assert this very collapse.
    """
    from .formulas import iter_literal_conjunctions

    members = []
    for assignment in iter_literal_conjunctions(c.space.n):
        witness = focal.overwrite({i: int(b) for i, b in assignment.items()})
        if hamming(witness, focal) > radius:
            continue
        if c.evaluate(witness) == target:
            members.append(assignment)
    return members


def complete_explanation(
    c: Classifier,
    focal: World,
    target: str,
    d: int | None = None,
    antecedent_mode: str = "conjunctions",
) -> CompleteExplanation:
    """Every true counterfactual toward ``target`` within radius ``d``."""
    _check_focal(c, focal, target)
    radius = _radius(c, d)
    consequent = PredictionAtom(target)
    if antecedent_mode == "conjunctions":
        members = tuple(
            Counterfactual(literal_conjunction(a), consequent)
            for a in _true_conjunction_antecedents(c, focal, target, radius)
        )
        return CompleteExplanation(focal, target, radius, members)
    if antecedent_mode == "full_boolean":
        n = c.space.n
        if n > FULL_BOOLEAN_MAX_N:
            raise ValidationError(
                f"full_boolean mode enumerates 2^(2^n) antecedents and is "
                f"refused for n > {FULL_BOOLEAN_MAX_N}"
            )
        worlds = list(enumerate_worlds(c.space))
        members = []
        for extension in range(1, 1 << (1 << n)):
            chosen = [w for k, w in enumerate(worlds) if (extension >> k) & 1]
            best = min(hamming(w, focal) for w in chosen)
            if best > radius:
                continue
            closest = [w for w in chosen if hamming(w, focal) == best]
            if all(c.evaluate(w) == target for w in closest):
                antecedent = _dnf_for(chosen, n)
                members.append(Counterfactual(antecedent, consequent))
        return CompleteExplanation(focal, target, radius, tuple(members))
    raise ValidationError(f"unknown antecedent mode {antecedent_mode!r}")


def _dnf_for(worlds: Iterable[World], n: int) -> Formula:
    """Disjunctive normal form listing the given worlds as minterms."""
    from .formulas import Or

    terms = [
        literal_conjunction({i: bool(w.bit(i)) for i in range(n)}) for w in worlds
    ]
    return terms[0] if len(terms) == 1 else Or(tuple(terms))


# --------------------------------------------------------------------------
# cross-checks against the transformation picture


@dataclass(frozen=True)
class Mismatch:
    antecedent_assignment: tuple[tuple[int, bool], ...]
    closest_world_verdict: bool
    transformation_verdict: bool


@dataclass(frozen=True)
class CorrespondenceReport:
    focal: World
    target: str
    checked: int
    mismatches: tuple[Mismatch, ...]

    @property
    def agreements(self) -> int:
        return self.checked - len(self.mismatches)


def correspondence_check(
    c: Classifier, focal: World, target: str
) -> CorrespondenceReport:
    """Compare the two readings of counterfactual support.

    For each literal-conjunction antecedent A the closest-world semantics
    says the counterfactual A => target holds when every closest A-world
    carries the target label.  The transformation reading says there is a
    minimally appropriate transformation over A's own dimensions whose image
    satisfies A and the target.  Both verdicts are computed through their
    own code paths and any disagreement is reported with its antecedent.
    """
    from .formulas import iter_literal_conjunctions

    _check_focal(c, focal, target)
    consequent = PredictionAtom(target)
    mismatches = []
    checked = 0
    for assignment in iter_literal_conjunctions(c.space.n):
        checked += 1
        antecedent = literal_conjunction(assignment)
        lewis = eval_counterfactual(
            focal, Counterfactual(antecedent, consequent), c
        )
        # the only transformation over A's dimensions whose image can
        # satisfy A is the one writing A's own polarities
        t = Transformation.setting({i: int(b) for i, b in assignment.items()})
        image = t.apply(focal)
        if satisfies(image, antecedent, c) and c.evaluate(image) == target:
            via_transformation = classify(t, c, focal, target).minimally_appropriate
        else:
            via_transformation = False
        if lewis != via_transformation:
            mismatches.append(
                Mismatch(
                    tuple(sorted(assignment.items())), lewis, via_transformation
                )
            )
    return CorrespondenceReport(focal, target, checked, tuple(mismatches))


def boundary_via_closest_worlds(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> tuple[World, ...]:
    """Decision boundary rebuilt on the conditional side.

    Collects the closest-world witnesses of subset-minimal true
    literal-conjunction antecedents: antecedents supporting the target
    counterfactual none of whose proper sub-conjunctions already support
    it.  Must equal the transformation-side ``boundary``.
    """
    _check_focal(c, focal, target)
    radius = _radius(c, d)
    consequent = PredictionAtom(target)
    true_antecedents = {
        tuple(sorted(a.items())): a
        for a in _true_conjunction_antecedents(c, focal, target, radius)
    }
    from itertools import combinations

    witnesses: set[World] = set()
    for key, assignment in true_antecedents.items():
        # support is not monotone under adding literals, so minimality must
        # inspect every proper nonempty sub-conjunction, not just one-drops
        minimal = True
        for size in range(1, len(key)):
            for sub in combinations(key, size):
                if sub in true_antecedents:
                    minimal = False
                    break
            if not minimal:
                break
        if not minimal:
            continue
        conditional = Counterfactual(literal_conjunction(assignment), consequent)
        for w in closest_worlds(focal, conditional.antecedent, c):
            if satisfies(w, consequent, c):
                witnesses.add(w)
    return tuple(sorted(witnesses))


def boundary_both_ways(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> tuple[tuple[World, ...], tuple[World, ...]]:
    """Both boundary constructions, for equality assertions."""
    return (
        boundary(c, focal, target, d),
        boundary_via_closest_worlds(c, focal, target, d),
    )
