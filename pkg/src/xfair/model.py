"""Feature spaces, worlds, and classifier representations.

The workbench operates on finite Boolean feature spaces: a world assigns a
bit to each named feature, and a classifier maps every world to one of at
least two labels.  Three interchangeable classifier representations are
supported:

* ``TruthTable``  - one label per world, in canonical world order;
* ``DecisionTree`` - binary tests on single features with labelled leaves;
* ``LabelRules``  - an ordered list of (label, literal-conjunction terms)
  pairs with first-match-wins semantics and a default label.

Canonical world order is the unsigned integer value of the bit vector with
feature 0 as the most significant bit; the bit-string form ``"0110"`` lists
features left to right in declaration order.  Distance between worlds is the
Hamming metric (number of differing bits), which is the norm every other
module measures closeness by.

The feature count is capped (default 24, overridable through the
``XFAIR_MAX_N`` environment variable) so exhaustive constructions refuse
early instead of hanging.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from .errors import ParseError, ValidationError

DEFAULT_MAX_FEATURES = 24


def max_features() -> int:
    """Feature-count cap; ``XFAIR_MAX_N`` overrides the default of 24."""
    raw = os.environ.get("XFAIR_MAX_N")
    if raw is None:
        return DEFAULT_MAX_FEATURES
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"XFAIR_MAX_N must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValidationError(f"XFAIR_MAX_N must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class FeatureSpace:
    """An ordered tuple of named Boolean features."""

    features: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.features:
            raise ValidationError("a feature space needs at least one feature")
        if len(set(self.features)) != len(self.features):
            raise ValidationError("feature names must be unique")
        for name in self.features:
            if not name or not isinstance(name, str):
                raise ValidationError(f"bad feature name: {name!r}")
        cap = max_features()
        if len(self.features) > cap:
            raise ValidationError(
                f"{len(self.features)} features exceed the cap of {cap}"
            )

    @property
    def n(self) -> int:
        return len(self.features)

    def index(self, name: str) -> int:
        try:
            return self.features.index(name)
        except ValueError as exc:
            raise ValidationError(f"unknown feature {name!r}") from exc

    def world(self, source: Union[str, int, Mapping[str, bool]]) -> "World":
        """Build a world from a bit string, an integer, or a name->bit map."""
        if isinstance(source, str):
            return World.from_bits(source, self.n)
        if isinstance(source, int):
            return World(self.n, source)
        value = 0
        seen = set()
        for name, bit in source.items():
            i = self.index(name)
            seen.add(name)
            if bit not in (0, 1, True, False):
                raise ValidationError(f"feature {name!r} must be Boolean, got {bit!r}")
            if bit:
                value |= 1 << (self.n - 1 - i)
        missing = [f for f in self.features if f not in seen]
        if missing:
            raise ValidationError(f"instance is missing features: {missing}")
        return World(self.n, value)


@dataclass(frozen=True, order=True)
class World:
    """A point of the feature space, stored as a width-tagged bit vector."""

    width: int
    value: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValidationError("world width must be positive")
        if not 0 <= self.value < (1 << self.width):
            raise ValidationError(
                f"value {self.value} out of range for width {self.width}"
            )

    @classmethod
    def from_bits(cls, bits: str, width: int | None = None) -> "World":
        if not bits or any(ch not in "01" for ch in bits):
            raise ParseError(f"bit string must be nonempty over 0/1, got {bits!r}")
        if width is not None and len(bits) != width:
            raise ValidationError(
                f"bit string {bits!r} has width {len(bits)}, expected {width}"
            )
        return cls(len(bits), int(bits, 2))

    def bit(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise ValidationError(f"feature index {i} out of range")
        return (self.value >> (self.width - 1 - i)) & 1

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.width}b")

    def flipped(self, indices) -> "World":
        mask = 0
        for i in indices:
            if not 0 <= i < self.width:
                raise ValidationError(f"feature index {i} out of range")
            mask |= 1 << (self.width - 1 - i)
        return World(self.width, self.value ^ mask)

    def overwrite(self, assignments: Mapping[int, int]) -> "World":
        """Set the given feature indices to the given bits, keep the rest."""
        value = self.value
        for i, bit in assignments.items():
            if not 0 <= i < self.width:
                raise ValidationError(f"feature index {i} out of range")
            pos = self.width - 1 - i
            value = (value & ~(1 << pos)) | ((1 if bit else 0) << pos)
        return World(self.width, value)

    def diff(self, other: "World") -> tuple[int, ...]:
        """Indices at which the two worlds disagree, ascending."""
        if other.width != self.width:
            raise ValidationError("worlds live in different spaces")
        x = self.value ^ other.value
        return tuple(i for i in range(self.width) if (x >> (self.width - 1 - i)) & 1)

    def __str__(self) -> str:  # pragma: no cover - convenience only
        return self.bits


def hamming(a: World, b: World) -> int:
    """Hamming distance; the only norm used on Boolean feature spaces."""
    if a.width != b.width:
        raise ValidationError("worlds live in different spaces")
    return (a.value ^ b.value).bit_count()


def enumerate_worlds(space: FeatureSpace) -> Iterator[World]:
    """All worlds in canonical order.  Refuses spaces over the cap."""
    if space.n > max_features():
        raise ValidationError(f"refusing to enumerate 2^{space.n} worlds")
    for value in range(1 << space.n):
        yield World(space.n, value)


# --------------------------------------------------------------------------
# classifier representations


@dataclass(frozen=True)
class TruthTable:
    """Explicit label per world, canonical order, length 2^n."""

    entries: tuple[str, ...]


@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class Split:
    feature: int
    if_true: "Leaf | Split"
    if_false: "Leaf | Split"


@dataclass(frozen=True)
class DecisionTree:
    root: Leaf | Split


# a term is a conjunction of (feature index, required bit) literals
Term = tuple[tuple[int, bool], ...]


@dataclass(frozen=True)
class Rule:
    label: str
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class LabelRules:
    """Ordered first-match-wins rules plus a default label."""

    rules: tuple[Rule, ...]
    default: str


Representation = Union[TruthTable, DecisionTree, LabelRules]


@dataclass(frozen=True)
class Classifier:
    """A total map from worlds to labels over a fixed feature space."""

    space: FeatureSpace
    labels: tuple[str, ...]
    rep: Representation
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.labels) < 2:
            raise ValidationError("a classifier needs at least two labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("labels must be unique")
        self._validate_rep()

    def _validate_rep(self) -> None:
        rep = self.rep
        if isinstance(rep, TruthTable):
            if len(rep.entries) != (1 << self.space.n):
                raise ValidationError(
                    f"truth table must have {1 << self.space.n} entries, "
                    f"got {len(rep.entries)}"
                )
            for label in rep.entries:
                self._check_label(label)
        elif isinstance(rep, DecisionTree):
            self._validate_node(rep.root)
        elif isinstance(rep, LabelRules):
            self._check_label(rep.default)
            for rule in rep.rules:
                self._check_label(rule.label)
                for term in rule.terms:
                    for i, bit in term:
                        self._check_index(i)
                        if not isinstance(bit, bool):
                            raise ValidationError("rule literal bit must be Boolean")
        else:
            raise ValidationError(f"unknown representation {type(rep).__name__}")

    def _validate_node(self, node) -> None:
        if isinstance(node, Leaf):
            self._check_label(node.label)
        elif isinstance(node, Split):
            self._check_index(node.feature)
            self._validate_node(node.if_true)
            self._validate_node(node.if_false)
        else:
            raise ValidationError(f"bad tree node {node!r}")

    def _check_label(self, label: str) -> None:
        if label not in self.labels:
            raise ValidationError(f"label {label!r} not among {list(self.labels)}")

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < self.space.n:
            raise ValidationError(f"feature index {i!r} out of range")

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, world: World) -> str:
        """The label assigned to ``world``; pure and total."""
        if world.width != self.space.n:
            raise ValidationError("world does not belong to this classifier's space")
        rep = self.rep
        if isinstance(rep, TruthTable):
            return rep.entries[world.value]
        if isinstance(rep, DecisionTree):
            node = rep.root
            while isinstance(node, Split):
                node = node.if_true if world.bit(node.feature) else node.if_false
            return node.label
        # ordered rules, first matching term wins
        for rule in rep.rules:
            for term in rule.terms:
                if all(world.bit(i) == int(bit) for i, bit in term):
                    return rule.label
        return rep.default

    def as_truth_table(self) -> "Classifier":
        """The same function re-expressed as an explicit truth table."""
        if isinstance(self.rep, TruthTable):
            return self
        entries = tuple(self.evaluate(w) for w in enumerate_worlds(self.space))
        return Classifier(self.space, self.labels, TruthTable(entries), self.name)


@dataclass(frozen=True)
class GroundTruthSet:
    """Labelled sample points, independent of any classifier."""

    points: tuple[tuple[World, str], ...]


# --------------------------------------------------------------------------
# JSON (de)serialization


def classifier_from_dict(doc: Mapping) -> Classifier:
    if not isinstance(doc, Mapping):
        raise ValidationError("classifier document must be a JSON object")
    for key in ("features", "labels", "repr"):
        if key not in doc:
            raise ValidationError(f"classifier document lacks {key!r}")
    features = doc["features"]
    labels = doc["labels"]
    if not isinstance(features, list) or not all(isinstance(f, str) for f in features):
        raise ValidationError("features must be a list of strings")
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise ValidationError("labels must be a list of strings")
    space = FeatureSpace(tuple(features))
    rep_doc = doc["repr"]
    if not isinstance(rep_doc, Mapping) or "type" not in rep_doc:
        raise ValidationError("repr must be an object with a type field")
    kind = rep_doc["type"]
    if kind == "truth_table":
        entries = rep_doc.get("entries")
        if not isinstance(entries, list):
            raise ValidationError("truth_table repr needs an entries list")
        rep: Representation = TruthTable(tuple(entries))
    elif kind == "tree":
        rep = DecisionTree(_node_from_dict(rep_doc.get("root"), space))
    elif kind == "rules":
        rules_doc = rep_doc.get("rules")
        default = rep_doc.get("default")
        if not isinstance(rules_doc, list) or not isinstance(default, str):
            raise ValidationError("rules repr needs a rules list and a default label")
        rules = tuple(_rule_from_dict(r, space) for r in rules_doc)
        rep = LabelRules(rules, default)
    else:
        raise ValidationError(f"unknown repr type {kind!r}")
    return Classifier(space, tuple(labels), rep, name=str(doc.get("name", "")))


def _node_from_dict(doc, space: FeatureSpace):
    if not isinstance(doc, Mapping):
        raise ValidationError(f"bad tree node {doc!r}")
    if "label" in doc:
        return Leaf(doc["label"])
    if "test" not in doc or "if_true" not in doc or "if_false" not in doc:
        raise ValidationError("tree split needs test/if_true/if_false")
    return Split(
        space.index(doc["test"]),
        _node_from_dict(doc["if_true"], space),
        _node_from_dict(doc["if_false"], space),
    )


def _rule_from_dict(doc, space: FeatureSpace) -> Rule:
    if not isinstance(doc, Mapping) or "label" not in doc or "terms" not in doc:
        raise ValidationError("rule needs label and terms")
    terms = []
    for term_doc in doc["terms"]:
        if not isinstance(term_doc, list):
            raise ValidationError("rule term must be a list of literals")
        term = []
        for lit in term_doc:
            if not isinstance(lit, str) or not lit:
                raise ValidationError(f"bad literal {lit!r}")
            if lit.startswith("!"):
                term.append((space.index(lit[1:]), False))
            else:
                term.append((space.index(lit), True))
        terms.append(tuple(term))
    return Rule(doc["label"], tuple(terms))


def classifier_to_dict(c: Classifier) -> dict:
    doc: dict = {
        "features": list(c.space.features),
        "labels": list(c.labels),
    }
    if c.name:
        doc["name"] = c.name
    rep = c.rep
    if isinstance(rep, TruthTable):
        doc["repr"] = {"type": "truth_table", "entries": list(rep.entries)}
    elif isinstance(rep, DecisionTree):
        doc["repr"] = {"type": "tree", "root": _node_to_dict(rep.root, c.space)}
    else:
        doc["repr"] = {
            "type": "rules",
            "rules": [
                {
                    "label": rule.label,
                    "terms": [
                        [
                            (c.space.features[i] if bit else "!" + c.space.features[i])
                            for i, bit in term
                        ]
                        for term in rule.terms
                    ],
                }
                for rule in rep.rules
            ],
            "default": rep.default,
        }
    return doc


def _node_to_dict(node, space: FeatureSpace) -> dict:
    if isinstance(node, Leaf):
        return {"label": node.label}
    return {
        "test": space.features[node.feature],
        "if_true": _node_to_dict(node.if_true, space),
        "if_false": _node_to_dict(node.if_false, space),
    }


def load_classifier(text: str) -> Classifier:
    """Parse a classifier JSON document; parse and validation errors differ."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"classifier document is not valid JSON: {exc}") from exc
    return classifier_from_dict(doc)


def parse_instance(source, space: FeatureSpace) -> World:
    """Accept ``"0100"``, ``{"bits": "0100"}``, or ``{"values": {...}}``."""
    if isinstance(source, str):
        text = source.strip()
        if text.startswith("{"):
            try:
                source = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(f"instance document is not valid JSON: {exc}") from exc
        else:
            return World.from_bits(text, space.n)
    if isinstance(source, Mapping):
        if "bits" in source:
            if not isinstance(source["bits"], str):
                raise ValidationError("instance bits must be a string")
            return World.from_bits(source["bits"], space.n)
        if "values" in source:
            if not isinstance(source["values"], Mapping):
                raise ValidationError("instance values must be an object")
            return space.world(source["values"])
        raise ValidationError("instance object needs a bits or values field")
    raise ValidationError(f"cannot interpret instance {source!r}")


def ground_truth_from_dict(doc, space: FeatureSpace) -> GroundTruthSet:
    if not isinstance(doc, Mapping) or "points" not in doc:
        raise ValidationError("ground truth document needs a points list")
    points = []
    for entry in doc["points"]:
        if not isinstance(entry, Mapping) or "label" not in entry:
            raise ValidationError("ground truth point needs instance and label")
        points.append((parse_instance(entry, space), entry["label"]))
    if not points:
        raise ValidationError("ground truth set must be nonempty")
    return GroundTruthSet(tuple(points))
