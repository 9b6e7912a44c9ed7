"""Abductive explanations: minimal literal sets entailing a prediction.

A literal set is a partial assignment of features.  It entails a label when
every world extending it receives that label from the classifier; an
abductive explanation of a prediction is a subset-minimal entailing subset
of the focal world's own literals.  Because entailment is monotone in the
literal set, a single deletion pass in descending feature-index order
produces a subset-minimal result in exactly n oracle calls: each literal is
dropped, the oracle is consulted, and the literal is restored when the
remainder stops entailing.

Two oracle backends answer the same entailment question.  ``exhaustive``
enumerates every extension of the partial assignment.  ``rule_prune`` walks
the classifier representation instead: reachable leaves for decision trees,
first-match resolution with branching confined to mentioned features for
rule lists, and a direct index scan for truth tables.  Both count calls so
call-budget claims can be tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .errors import PreconditionError, ValidationError
from .model import (
    Classifier,
    DecisionTree,
    FeatureSpace,
    LabelRules,
    Leaf,
    World,
)
from .transforms import Transformation, classify

BACKENDS = ("exhaustive", "rule_prune")


@dataclass(frozen=True)
class LiteralSet:
    """A consistent partial assignment, index-sorted."""

    assignments: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        indices = [i for i, _ in self.assignments]
        if len(set(indices)) != len(indices):
            raise ValidationError("literal set assigns a feature twice")
        if sorted(self.assignments) != list(self.assignments):
            raise ValidationError("literal set must be index-sorted")
        for i, bit in self.assignments:
            if bit not in (0, 1):
                raise ValidationError(f"literal bit for index {i} must be 0 or 1")

    @classmethod
    def of(cls, assignments: Mapping[int, int]) -> "LiteralSet":
        return cls(tuple(sorted((i, 1 if b else 0) for i, b in assignments.items())))

    @classmethod
    def describing(cls, world: World) -> "LiteralSet":
        return cls(tuple((i, world.bit(i)) for i in range(world.width)))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.assignments)

    def without(self, index: int) -> "LiteralSet":
        return LiteralSet(tuple(a for a in self.assignments if a[0] != index))

    def to_dict(self, space: FeatureSpace) -> dict:
        return {"literals": {space.features[i]: bool(b) for i, b in self.assignments}}

    @classmethod
    def from_dict(cls, doc: Mapping, space: FeatureSpace) -> "LiteralSet":
        if not isinstance(doc, Mapping) or "literals" not in doc:
            raise ValidationError("literal set document needs a literals field")
        body = doc["literals"]
        if not isinstance(body, Mapping):
            raise ValidationError("literals must be an object")
        return cls.of({space.index(name): 1 if b else 0 for name, b in body.items()})


class EntailmentOracle:
    """Answers `does this literal set force this label?` and counts calls."""

    def __init__(self, backend: str = "exhaustive") -> None:
        if backend not in BACKENDS:
            raise ValidationError(f"unknown oracle backend {backend!r}")
        self.backend = backend
        self.calls = 0

    def entails(self, c: Classifier, literals: LiteralSet, target: str) -> bool:
        if target not in c.labels:
            raise ValidationError(f"unknown target label {target!r}")
        for i, _ in literals.assignments:
            if not 0 <= i < c.space.n:
                raise ValidationError(f"literal index {i} out of range")
        self.calls += 1
        if self.backend == "exhaustive":
            return self._exhaustive(c, literals, target)
        return self._rule_prune(c, literals, target)

    # -- backends -----------------------------------------------------------

    @staticmethod
    def _exhaustive(c: Classifier, literals: LiteralSet, target: str) -> bool:
        fixed = dict(literals.assignments)
        free = [i for i in range(c.space.n) if i not in fixed]
        base = World(c.space.n, 0).overwrite(fixed)
        for bits in product((0, 1), repeat=len(free)):
            world = base.overwrite(dict(zip(free, bits)))
            if c.evaluate(world) != target:
                return False
        return True

    def _rule_prune(self, c: Classifier, literals: LiteralSet, target: str) -> bool:
        rep = c.rep
        fixed = dict(literals.assignments)
        if isinstance(rep, DecisionTree):
            return self._tree_entails(rep.root, fixed, target)
        if isinstance(rep, LabelRules):
            return self._rules_entails(rep, c.space.n, fixed, target)
        # truth tables hold no structure to prune; scan matching indices
        n = c.space.n
        free = [i for i in range(n) if i not in fixed]
        base = 0
        for i, bit in fixed.items():
            if bit:
                base |= 1 << (n - 1 - i)
        for combo in range(1 << len(free)):
            value = base
            for k, i in enumerate(free):
                if (combo >> k) & 1:
                    value |= 1 << (n - 1 - i)
            if rep.entries[value] != target:
                return False
        return True

    def _tree_entails(self, node, fixed: dict[int, int], target: str) -> bool:
        """Every leaf reachable under the partial assignment carries target."""
        if isinstance(node, Leaf):
            return node.label == target
        if node.feature in fixed:
            branch = node.if_true if fixed[node.feature] else node.if_false
            return self._tree_entails(branch, fixed, target)
        return self._tree_entails(node.if_true, fixed, target) and self._tree_entails(
            node.if_false, fixed, target
        )

    def _rules_entails(
        self, rep: LabelRules, n: int, fixed: dict[int, int], target: str
    ) -> bool:
        """Branch only on features the rule list actually mentions."""

        def resolve(assignment: dict[int, int]) -> bool:
            for rule in rep.rules:
                for term in rule.terms:
                    status = "satisfied"
                    undecided: int | None = None
                    for i, bit in term:
                        have = assignment.get(i)
                        if have is None:
                            status = "undecided"
                            undecided = i if undecided is None else undecided
                        elif have != int(bit):
                            status = "violated"
                            break
                    if status == "violated":
                        continue
                    if status == "satisfied":
                        return rule.label == target
                    # branch on the first undecided feature of this term
                    assert undecided is not None
                    with_true = dict(assignment)
                    with_true[undecided] = 1
                    with_false = dict(assignment)
                    with_false[undecided] = 0
                    return resolve(with_true) and resolve(with_false)
            return rep.default == target

        return resolve(dict(fixed))


def abductive_explanation(
    oracle: EntailmentOracle,
    c: Classifier,
    world: World,
    mode: str = "for_actual_label",
) -> LiteralSet:
    """Subset-minimal literal subset of ``world`` entailing its own label.

    Deletion-based minimization in descending feature-index order; exactly n
    oracle calls, which stays within the documented 2n budget.
    """
    if mode != "for_actual_label":
        raise ValidationError(f"unknown abduction mode {mode!r}")
    label = c.evaluate(world)
    current = LiteralSet.describing(world)
    for index in reversed(range(world.width)):
        candidate = current.without(index)
        if oracle.entails(c, candidate, label):
            current = candidate
    return current


def cf_to_valid_explanation(
    oracle: EntailmentOracle,
    c: Classifier,
    t: Transformation,
    focal: World,
    target: str,
) -> LiteralSet:
    """Minimal literal set carried by an appropriate transformation's image.

    Bridges counterfactual and abductive views: the transformed world is an
    instance of the target label, and its abductive explanation is the
    literal core the transformation actually relies on.
    """
    grading = classify(t, c, focal, target)
    if not grading.appropriate:
        raise PreconditionError("transformation is not appropriate for the target")
    return abductive_explanation(oracle, c, t.apply(focal))
