"""Prejudicial factors, conundrum checks, and fair-and-adequate sets.

A prejudicial factor is an idempotent value-setting map: it writes fixed
bits into fixed features (say, `privileged := 1`) and leaves the rest of a
world alone.  A classifier exhibits a biased dependency on a factor when
two worlds it treats alike are pushed by the factor to worlds it also
treats alike, but with the opposite outcome: the factor alone separates
the focal decision from the counterfactual one.

An explainee's conundrum is the mismatch between her expectations and the
prediction, classified as one of

* CI (incompleteness) - she attends only to dimensions d1 while the
  classifier also uses the complement d2; resolved by a counterfactual
  transformation that changes d2 dimensions only and flips the prediction;
* CM (mistake) - she holds mistaken beliefs about the required values on
  dimensions m; resolved by a transformation confined to m that flips the
  prediction, exhibiting the values actually required.

Independently of the conundrum kind, every declared prejudicial factor must
be witnessed protected (CB): some admissible transformation must reach the
target label at a world the factor leaves fixed, demonstrating the decision
can be corrected without the factor's interference.

A fair-and-adequate explanation set is a smallest set of appropriate
transformations within the search radius that discharges the conundrum
check and every factor's CB obligation.  It is found greedily (most
uncovered obligations first, canonical order on ties) and then pruned to
set-minimality; each obligation is returned with the member discharging it
as a certificate.  When some obligation has no possible witness at all the
request is infeasible and the failing obligation is named.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InfeasibleError, ValidationError
from .formulas import And, FeatureAtom, Formula, Not, Or, satisfies
from .model import Classifier, FeatureSpace, World
from .transforms import (
    OverdeterminationSet,
    Transformation,
    appropriate_flips,
    iter_index_sets,
    minimal_counterfactuals,
)


@dataclass(frozen=True)
class PrejudicialFactor:
    """An idempotent value-setting map over a nonempty set of features."""

    name: str
    setter: Transformation

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("prejudicial factor needs a name")
        if not self.setter.assignments:
            raise ValidationError("prejudicial factor must set at least one feature")

    def apply(self, world: World) -> World:
        return self.setter.apply(world)

    def fixes(self, world: World) -> bool:
        """True when the factor leaves ``world`` unchanged."""
        return self.apply(world) == world

    def to_dict(self, space: FeatureSpace) -> dict:
        return {"name": self.name, **self.setter.to_dict(space)}

    @classmethod
    def from_dict(cls, doc: Mapping, space: FeatureSpace) -> "PrejudicialFactor":
        if not isinstance(doc, Mapping) or "name" not in doc:
            raise ValidationError("factor document needs a name")
        return cls(str(doc["name"]), Transformation.from_dict(doc, space))


@dataclass(frozen=True)
class ConundrumSpec:
    """CI(attended dims) or CM(mistaken dims with believed values)."""

    kind: str
    dims: tuple[int, ...]
    believed: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("CI", "CM"):
            raise ValidationError(f"unknown conundrum kind {self.kind!r}")
        if sorted(set(self.dims)) != list(self.dims):
            raise ValidationError("conundrum dims must be sorted and unique")
        if self.kind == "CM" and not self.dims:
            raise ValidationError("CM needs at least one mistaken dimension")
        if self.believed:
            if self.kind != "CM":
                raise ValidationError("believed values only apply to CM")
            if {i for i, _ in self.believed} - set(self.dims):
                raise ValidationError("believed values must live on mistaken dims")

    def complement(self, n: int) -> tuple[int, ...]:
        return tuple(i for i in range(n) if i not in self.dims)

    def to_dict(self, space: FeatureSpace) -> dict:
        if self.kind == "CI":
            return {"kind": "CI", "attended": [space.features[i] for i in self.dims]}
        doc: dict = {"kind": "CM", "mistaken": [space.features[i] for i in self.dims]}
        if self.believed:
            doc["believed"] = {
                space.features[i]: bool(b) for i, b in self.believed
            }
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping, space: FeatureSpace) -> "ConundrumSpec":
        if not isinstance(doc, Mapping) or "kind" not in doc:
            raise ValidationError("conundrum document needs a kind")
        kind = doc["kind"]
        if kind == "CI":
            names = doc.get("attended")
            if not isinstance(names, list):
                raise ValidationError("CI conundrum needs an attended list")
            dims = tuple(sorted(space.index(n) for n in names))
            if len(dims) >= space.n:
                raise ValidationError(
                    "CI requires at least one unattended dimension"
                )
            return cls("CI", dims)
        if kind == "CM":
            names = doc.get("mistaken")
            if not isinstance(names, list) or not names:
                raise ValidationError("CM conundrum needs a nonempty mistaken list")
            dims = tuple(sorted(space.index(n) for n in names))
            believed_doc = doc.get("believed", {})
            if not isinstance(believed_doc, Mapping):
                raise ValidationError("believed must be an object")
            believed = tuple(
                sorted((space.index(n), 1 if b else 0) for n, b in believed_doc.items())
            )
            return cls("CM", dims, believed)
        raise ValidationError(f"unknown conundrum kind {kind!r}")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Transformation | None = None
    diagnostic: str | None = None


@dataclass(frozen=True)
class BiasWitness:
    """A biased dependency: the factor alone separates the two outcomes."""

    indices: tuple[int, ...]
    transformation: Transformation
    base_label: str
    factored_label: str


def biased_dependency(
    c: Classifier,
    factor: PrejudicialFactor,
    focal: World,
    d: int | None = None,
) -> BiasWitness | None:
    """First flip (canonical order) exposing a biased dependency.

    Searches for indices i with: the classifier gives focal and its i-flip
    the same label, and gives their factor-images the same *other* label.
    """
    n = c.space.n
    radius = n if d is None else d
    if not 0 <= radius <= n:
        raise ValidationError(f"radius must lie in 0..{n}, got {d!r}")
    eta = c.evaluate(focal)
    factored_label = c.evaluate(factor.apply(focal))
    if factored_label == eta:
        return None
    for idx in iter_index_sets(n, radius):
        moved = focal.flipped(idx)
        if c.evaluate(moved) != eta:
            continue
        if c.evaluate(factor.apply(moved)) == factored_label:
            return BiasWitness(
                idx, Transformation.flip(focal, idx), eta, factored_label
            )
    return None


def implicitly_definable(
    factor: PrejudicialFactor,
    population: Sequence[World],
    max_literals: int = 4,
) -> Formula | None:
    """Smallest pure literal conjunction/disjunction matching fixed-point
    membership over the population, or None.

    Candidates are enumerated by literal count; within one size, feature
    combinations lexicographically, polarity vectors positive-first, and
    conjunctions before disjunctions.  Value-setting factors have subcube
    fixed-point sets, so conjunctions always suffice over full populations;
    tiny populations may be matched degenerately by a single literal.
    """
    if not population:
        raise ValidationError("population must be nonempty")
    width = population[0].width
    membership = [factor.fixes(w) for w in population]

    from itertools import combinations, product

    def literal(i: int, polarity: bool) -> Formula:
        return FeatureAtom(i) if polarity else Not(FeatureAtom(i))

    for size in range(1, min(width, max_literals) + 1):
        for idx in combinations(range(width), size):
            for bits in product((True, False), repeat=size):
                literals = [literal(i, b) for i, b in zip(idx, bits)]
                shapes: list[Formula]
                if size == 1:
                    shapes = [literals[0]]
                else:
                    shapes = [And(tuple(literals)), Or(tuple(literals))]
                for candidate in shapes:
                    if all(
                        _feature_satisfies(w, candidate) == member
                        for w, member in zip(population, membership)
                    ):
                        return candidate
    return None


def _feature_satisfies(world: World, formula: Formula) -> bool:
    """Satisfaction for feature-only formulas (no classifier involved)."""
    if isinstance(formula, FeatureAtom):
        return world.bit(formula.index) == 1
    if isinstance(formula, Not):
        return not _feature_satisfies(world, formula.child)
    if isinstance(formula, And):
        return all(_feature_satisfies(world, f) for f in formula.children)
    if isinstance(formula, Or):
        return any(_feature_satisfies(world, f) for f in formula.children)
    raise ValidationError("implicit definitions use feature atoms only")


# --------------------------------------------------------------------------
# conundrum and bias checks


def _changes_within(t: Transformation, focal: World, dims: Iterable[int]) -> bool:
    """The transformation's effective change is nonempty and confined to dims."""
    moved = t.apply(focal).diff(focal)
    return bool(moved) and set(moved).issubset(set(dims))


def check_CI(
    c: Classifier,
    focal: World,
    spec: ConundrumSpec,
    deltas: Sequence[Transformation],
    target: str,
) -> Verdict:
    """Some delta changes only unattended dimensions and flips to target."""
    if spec.kind != "CI":
        raise ValidationError("check_CI needs a CI conundrum")
    unattended = spec.complement(c.space.n)
    for t in deltas:
        if _changes_within(t, focal, unattended) and c.evaluate(t.apply(focal)) == target:
            return Verdict(True, t)
    return Verdict(False, None, "no offered change confined to unattended dimensions")


def check_CM(
    c: Classifier,
    focal: World,
    spec: ConundrumSpec,
    deltas: Sequence[Transformation],
    target: str,
) -> Verdict:
    """Some delta confined to the mistaken dimensions flips to target."""
    if spec.kind != "CM":
        raise ValidationError("check_CM needs a CM conundrum")
    for t in deltas:
        if _changes_within(t, focal, spec.dims) and c.evaluate(t.apply(focal)) == target:
            return Verdict(True, t)
    # diagnose: is the belief confirmable at all on these dimensions?
    confirmable = any(
        c.evaluate(focal.flipped(sub)) == target
        for size in range(1, len(spec.dims) + 1)
        for sub in _subsets(spec.dims, size)
    )
    if not confirmable:
        return Verdict(False, None, "belief unconfirmable")
    return Verdict(False, None, "no offered change confined to mistaken dimensions")


def _subsets(dims: tuple[int, ...], size: int):
    from itertools import combinations

    return combinations(dims, size)


def check_CB(
    c: Classifier,
    focal: World,
    factors: Sequence[PrejudicialFactor],
    deltas: Sequence[Transformation],
    target: str,
) -> Verdict:
    """Every factor has a delta reaching target at a factor-fixed world."""
    for factor in factors:
        witness = None
        for t in deltas:
            image = t.apply(focal)
            if c.evaluate(image) == target and factor.fixes(image):
                witness = t
                break
        if witness is None:
            return Verdict(False, None, f"factor {factor.name!r} unprotected")
    return Verdict(True)


# --------------------------------------------------------------------------
# fair-and-adequate sets


@dataclass(frozen=True)
class Obligation:
    """One named check a fair set must discharge."""

    identifier: str
    kind: str
    factor: PrejudicialFactor | None = None


@dataclass(frozen=True)
class FairAdequateSet:
    focal: World
    target: str
    radius: int
    deltas: tuple[Transformation, ...]
    certificates: tuple[tuple[str, Transformation], ...]
    overdetermination: OverdeterminationSet


def _obligations(
    spec: ConundrumSpec | None, factors: Sequence[PrejudicialFactor]
) -> list[Obligation]:
    out = []
    if spec is not None:
        out.append(Obligation(spec.kind, spec.kind))
    for factor in factors:
        out.append(Obligation(f"CB:{factor.name}", "CB", factor))
    return out


def _discharges(
    c: Classifier,
    focal: World,
    target: str,
    spec: ConundrumSpec | None,
    obligation: Obligation,
    t: Transformation,
) -> bool:
    image = t.apply(focal)
    if c.evaluate(image) != target:
        return False
    if obligation.kind == "CI":
        assert spec is not None
        return _changes_within(t, focal, spec.complement(c.space.n))
    if obligation.kind == "CM":
        assert spec is not None
        return _changes_within(t, focal, spec.dims)
    assert obligation.factor is not None
    return obligation.factor.fixes(image)


def fair_adequate_set(
    c: Classifier,
    focal: World,
    target: str,
    d: int | None,
    spec: ConundrumSpec | None,
    factors: Sequence[PrejudicialFactor],
) -> FairAdequateSet:
    """Smallest set of appropriate flips discharging every obligation.

    Greedy cover (most newly-discharged obligations first, canonical order
    on ties) followed by a reverse-order prune pass; certificates are
    reassigned canonical-first afterwards.  Raises ``InfeasibleError``
    naming the first obligation with no witness among the candidates.
    """
    if spec is None and not factors:
        raise ValidationError("nothing to discharge: no conundrum and no factors")
    obligations = _obligations(spec, factors)
    candidates = appropriate_flips(c, focal, target, d)
    radius = d if d is not None else c.space.n

    coverage = {
        ob.identifier: [
            t for t in candidates if _discharges(c, focal, target, spec, ob, t)
        ]
        for ob in obligations
    }
    for ob in obligations:
        if not coverage[ob.identifier]:
            raise InfeasibleError(
                f"obligation {ob.identifier} has no witness within radius {radius}",
                constraint=ob.identifier,
            )

    chosen: list[Transformation] = []
    uncovered = {ob.identifier for ob in obligations}
    while uncovered:
        best_t = None
        best_gain: set[str] = set()
        for t in candidates:
            if t in chosen:
                continue
            gain = {
                ob.identifier
                for ob in obligations
                if ob.identifier in uncovered
                and _discharges(c, focal, target, spec, ob, t)
            }
            if len(gain) > len(best_gain):
                best_t, best_gain = t, gain
        assert best_t is not None  # every obligation had a witness
        chosen.append(best_t)
        uncovered -= best_gain

    # prune: drop members whose removal keeps everything covered
    for t in list(reversed(chosen)):
        trial = [x for x in chosen if x != t]
        if trial and all(
            any(_discharges(c, focal, target, spec, ob, x) for x in trial)
            for ob in obligations
        ):
            chosen = trial

    chosen_canonical = [t for t in candidates if t in chosen]
    certificates = []
    for ob in obligations:
        for t in chosen_canonical:
            if _discharges(c, focal, target, spec, ob, t):
                certificates.append((ob.identifier, t))
                break
    return FairAdequateSet(
        focal,
        target,
        radius,
        tuple(chosen_canonical),
        tuple(certificates),
        minimal_counterfactuals(c, focal, target, d),
    )


def verify_fair_set(
    c: Classifier,
    focal: World,
    target: str,
    result: FairAdequateSet,
    spec: ConundrumSpec | None,
    factors: Sequence[PrejudicialFactor],
) -> bool:
    """Independent re-verification: every obligation discharged by members."""
    obligations = _obligations(spec, factors)
    return all(
        any(
            _discharges(c, focal, target, spec, ob, t) for t in result.deltas
        )
        for ob in obligations
    )
