"""Boolean formulas over feature atoms and prediction atoms.

Formulas describe sets of worlds.  A feature atom holds at a world when that
feature's bit is set; a prediction atom holds when the classifier assigns
the named label.  Combinations use negation, conjunction, and disjunction.
The concrete syntax used by the command line is minimal: atom names, ``!``,
``&``, ``|``, and parentheses, with ``&`` binding tighter than ``|``; the
arrow ``=>`` is not a connective but splits a conditional into antecedent
and consequent, and may appear only once (conditionals do not nest).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping, Union

from .errors import ParseError, ValidationError
from .model import Classifier, FeatureSpace, World


@dataclass(frozen=True)
class FeatureAtom:
    index: int


@dataclass(frozen=True)
class PredictionAtom:
    label: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]


Formula = Union[FeatureAtom, PredictionAtom, Not, And, Or]


def satisfies(world: World, formula: Formula, classifier: Classifier) -> bool:
    """Truth of ``formula`` at ``world``; prediction atoms consult the classifier."""
    if isinstance(formula, FeatureAtom):
        return world.bit(formula.index) == 1
    if isinstance(formula, PredictionAtom):
        return classifier.evaluate(world) == formula.label
    if isinstance(formula, Not):
        return not satisfies(world, formula.child, classifier)
    if isinstance(formula, And):
        return all(satisfies(world, f, classifier) for f in formula.children)
    if isinstance(formula, Or):
        return any(satisfies(world, f, classifier) for f in formula.children)
    raise ValidationError(f"unknown formula node {formula!r}")


def literal_conjunction(assignments: Mapping[int, bool] | tuple) -> Formula:
    """The conjunction of single-feature literals given as index->bit."""
    items = sorted(dict(assignments).items()) if isinstance(assignments, Mapping) else sorted(assignments)
    if not items:
        raise ValidationError("literal conjunction must be nonempty")
    parts: list[Formula] = [
        FeatureAtom(i) if bit else Not(FeatureAtom(i)) for i, bit in items
    ]
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def conjunction_assignments(formula: Formula) -> dict[int, bool] | None:
    """Invert ``literal_conjunction``; None when the formula has other shape."""
    parts = formula.children if isinstance(formula, And) else (formula,)
    out: dict[int, bool] = {}
    for part in parts:
        if isinstance(part, FeatureAtom):
            i, bit = part.index, True
        elif isinstance(part, Not) and isinstance(part.child, FeatureAtom):
            i, bit = part.child.index, False
        else:
            return None
        if i in out and out[i] != bit:
            return None
        out[i] = bit
    return out


def iter_literal_conjunctions(
    n: int, max_size: int | None = None
) -> Iterator[dict[int, bool]]:
    """All nonempty literal conjunctions as index->bit maps, canonical order.

    Ordered by literal count, then lexicographic feature combination, then
    polarity vector with positive before negative.
    """
    cap = n if max_size is None else max_size
    for size in range(1, cap + 1):
        for idx in combinations(range(n), size):
            for bits in product((True, False), repeat=size):
                yield dict(zip(idx, bits))


def formula_to_text(formula: Formula, space: FeatureSpace) -> str:
    """Render back to the CLI syntax (fully parenthesized where needed)."""
    if isinstance(formula, FeatureAtom):
        return space.features[formula.index]
    if isinstance(formula, PredictionAtom):
        return formula.label
    if isinstance(formula, Not):
        inner = formula_to_text(formula.child, space)
        if isinstance(formula.child, (And, Or)):
            inner = f"({inner})"
        return f"!{inner}"
    if isinstance(formula, And):
        parts = []
        for child in formula.children:
            text = formula_to_text(child, space)
            if isinstance(child, Or):
                text = f"({text})"
            parts.append(text)
        return " & ".join(parts)
    if isinstance(formula, Or):
        return " | ".join(formula_to_text(child, space) for child in formula.children)
    raise ValidationError(f"unknown formula node {formula!r}")


# --------------------------------------------------------------------------
# parsing


class _Tokens:
    def __init__(self, text: str) -> None:
        self.items: list[str] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "()&|!":
                self.items.append(ch)
                i += 1
            elif ch.isalnum() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(text[i:j])
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r} in formula")
        self.pos = 0

    def peek(self) -> str | None:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("formula ended unexpectedly")
        self.pos += 1
        return tok


def parse_formula(text: str, space: FeatureSpace, labels: tuple[str, ...]) -> Formula:
    """Parse the CLI formula syntax into an AST."""
    if "=>" in text:
        raise ParseError("conditionals do not nest; => may not appear here")
    tokens = _Tokens(text)
    formula = _parse_or(tokens, space, labels)
    if tokens.peek() is not None:
        raise ParseError(f"trailing input after formula: {tokens.peek()!r}")
    return formula


def _parse_or(tokens: _Tokens, space, labels) -> Formula:
    parts = [_parse_and(tokens, space, labels)]
    while tokens.peek() == "|":
        tokens.take()
        parts.append(_parse_and(tokens, space, labels))
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _parse_and(tokens: _Tokens, space, labels) -> Formula:
    parts = [_parse_unary(tokens, space, labels)]
    while tokens.peek() == "&":
        tokens.take()
        parts.append(_parse_unary(tokens, space, labels))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def _parse_unary(tokens: _Tokens, space, labels) -> Formula:
    tok = tokens.take()
    if tok == "!":
        return Not(_parse_unary(tokens, space, labels))
    if tok == "(":
        inner = _parse_or(tokens, space, labels)
        if tokens.take() != ")":
            raise ParseError("unbalanced parentheses in formula")
        return inner
    if tok in ("&", "|", ")"):
        raise ParseError(f"unexpected {tok!r} in formula")
    if tok in space.features:
        return FeatureAtom(space.index(tok))
    if tok in labels:
        return PredictionAtom(tok)
    raise ParseError(f"unknown atom {tok!r} (neither feature nor label)")


def parse_conditional(
    text: str, space: FeatureSpace, labels: tuple[str, ...]
) -> tuple[Formula, Formula]:
    """Split ``antecedent => consequent`` and parse both sides."""
    if text.count("=>") != 1:
        raise ParseError("a conditional needs exactly one =>")
    left, right = text.split("=>")
    if not left.strip() or not right.strip():
        raise ParseError("both sides of => must be nonempty")
    return (
        parse_formula(left, space, labels),
        parse_formula(right, space, labels),
    )
