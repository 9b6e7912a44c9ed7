"""Local geometry of a decision around a focal world.

The central quantity is the flip degree: walk a refinement chain of
antecedents, starting from the empty conjunction and adding one fresh
literal per step, and watch the supported prediction at the focal world.
The empty antecedent never supports the target (its closest world is the
focal world itself), and each added literal moves the closest witness one
step further.  The flip degree is the maximum number of support changes
along any such chain of length at most the search radius; a decision whose
degree is 1 is `nearly constant` (once the target region is entered by a
minimal edit, no further edit leaves it), anything higher is `n-shifting`.

Around the focal world a region is built: the interior is every world
within the radius that shares the focal label, the border is the decision
boundary (images of the minimal counterfactual transformations).  Three
convexity notions of that region are *measured*, never asserted:

* interval  - every geodesic between any two region points stays inside;
* star      - every geodesic from the focal world to a region point stays
  inside;
* monotone_geodesic - every interior point is reachable from the focal
  world by at least one geodesic inside the region.

The implications interval => star => monotone_geodesic hold by definition
and are exercised in tests; the converse directions fail on concrete
classifiers, and ``shape_sweep`` tabulates how flip degree co-occurs with
each notion across exhaustive or sampled families, serializing every
counterexample so the relationship can be audited offline.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations
from random import Random
from typing import Iterable, Iterator

from .errors import PreconditionError, ValidationError
from .model import (
    Classifier,
    FeatureSpace,
    GroundTruthSet,
    TruthTable,
    World,
    enumerate_worlds,
    hamming,
)
from .transforms import boundary, minimal_counterfactuals

CONVEXITY_NOTIONS = ("interval", "star", "monotone_geodesic")


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


# --------------------------------------------------------------------------
# flip degree


@dataclass(frozen=True)
class RefinementChain:
    """Antecedent chain: each step adds one fresh literal (index, polarity).

    ``supports`` has one entry per chain prefix, starting with the empty
    antecedent (always False: the focal world itself is the closest world
    and carries the non-target label).
    """

    steps: tuple[tuple[int, bool], ...]
    supports: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.supports) != len(self.steps) + 1:
            raise ValidationError("chain needs one support entry per prefix")
        seen = set()
        for i, _ in self.steps:
            if i in seen:
                raise ValidationError("chain adds a feature twice")
            seen.add(i)

    @property
    def flips(self) -> int:
        return sum(
            1 for a, b in zip(self.supports, self.supports[1:]) if a != b
        )


def _support(c: Classifier, focal: World, target: str, assignment: dict) -> bool:
    """Counterfactual support of a literal-conjunction antecedent.

    The unique closest antecedent-world is the focal world overwritten by
    the literals; the semantics module's general evaluator agrees (tested).
    """
    witness = focal.overwrite({i: int(b) for i, b in assignment.items()})
    return c.evaluate(witness) == target


def flip_degree(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> tuple[int, RefinementChain]:
    """Maximum support alternations over refinement chains within ``d``.

    Dynamic program over partial assignments (support depends on the set of
    literals, not their order), then a canonical-order depth-first search
    reconstructs the first witness chain: shortest attaining chains first,
    ties broken by step sequence (feature index ascending, positive literal
    before negative).
    """
    _check_focal(c, focal, target)
    radius = _radius(c, d)
    limit = min(radius, c.space.n)
    n = c.space.n

    support_cache: dict[tuple, bool] = {(): False}
    best_from: dict[tuple, int] = {}

    def key_of(assignment: dict) -> tuple:
        return tuple(sorted(assignment.items()))

    def support(key: tuple) -> bool:
        cached = support_cache.get(key)
        if cached is None:
            cached = _support(c, focal, target, dict(key))
            support_cache[key] = cached
        return cached

    def best(key: tuple) -> int:
        """Max alternations achievable by extending the chain at ``key``."""
        cached = best_from.get(key)
        if cached is not None:
            return cached
        here = support(key)
        used = {i for i, _ in key}
        result = 0
        if len(key) < limit:
            for i in range(n):
                if i in used:
                    continue
                for polarity in (True, False):
                    nxt = tuple(sorted(key + ((i, polarity),)))
                    gain = (support(nxt) != here) + best(nxt)
                    if gain > result:
                        result = gain
        best_from[key] = result
        return result

    degree = best(())

    # canonical witness: iterative deepening on length, lexicographic steps
    def dfs(key: tuple, steps: list, flips: int, length: int) -> list | None:
        if flips == degree:
            return list(steps)
        if len(steps) == length:
            return None
        here = support(key)
        used = {i for i, _ in key}
        budget = length - len(steps)
        for i in range(n):
            if i in used:
                continue
            for polarity in (True, False):
                nxt = tuple(sorted(key + ((i, polarity),)))
                gained = flips + (support(nxt) != here)
                if gained + min(best(nxt), budget - 1) < degree:
                    continue
                steps.append((i, polarity))
                hit = dfs(nxt, steps, gained, length)
                if hit is not None:
                    return hit
                steps.pop()
        return None

    witness_steps: list = []
    if degree > 0:
        for length in range(1, limit + 1):
            hit = dfs((), [], 0, length)
            if hit is not None:
                witness_steps = hit
                break

    supports = [False]
    acc: dict[int, bool] = {}
    for i, polarity in witness_steps:
        acc[i] = polarity
        supports.append(_support(c, focal, target, acc))
    chain = RefinementChain(tuple(witness_steps), tuple(supports))
    return degree, chain


@dataclass(frozen=True)
class Shape:
    """nearly_constant or n_shifting(degree)."""

    kind: str
    degree: int

    def __post_init__(self) -> None:
        if self.kind not in ("nearly_constant", "n_shifting"):
            raise ValidationError(f"unknown shape kind {self.kind!r}")


def classify_shape(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> Shape:
    """nearly_constant iff every minimal counterfactual's supersets agree.

    A decision is nearly constant when, for every sufficiently-minimal flip
    set reaching the target, every superset flip within the radius still
    carries the target label; with no appropriate transformation at all the
    condition holds vacuously.  Otherwise the shape is n-shifting with the
    measured flip degree.
    """
    _check_focal(c, focal, target)
    radius = _radius(c, d)
    minimal = minimal_counterfactuals(c, focal, target, radius)
    nearly_constant = True
    n = c.space.n
    for delta in minimal.deltas:
        base = set(delta.indices)
        others = [i for i in range(n) if i not in base]
        room = radius - len(base)
        for extra_size in range(1, room + 1):
            for extra in combinations(others, extra_size):
                superset = tuple(sorted(base.union(extra)))
                if c.evaluate(focal.flipped(superset)) != target:
                    nearly_constant = False
                    break
            if not nearly_constant:
                break
        if not nearly_constant:
            break
    if nearly_constant:
        degree = 1 if minimal.deltas else 0
        return Shape("nearly_constant", degree)
    degree, _ = flip_degree(c, focal, target, radius)
    return Shape("n_shifting", degree)


# --------------------------------------------------------------------------
# regions and convexity


@dataclass(frozen=True)
class Region:
    """Interior (focal-label worlds within radius) plus decision boundary."""

    focal: World
    radius: int
    interior: frozenset[World]
    border: frozenset[World]

    @property
    def members(self) -> frozenset[World]:
        return self.interior | self.border


def build_region(
    c: Classifier,
    focal: World,
    target: str,
    d: int | None = None,
    interior_mode: str = "all_same_label",
) -> Region:
    """The region around the focal world used by the convexity checks.

    ``interior_mode`` selects between every same-label world within the
    radius (default) and only the focal world's same-label connected
    component, a stricter alternative kept for sweep experiments.
    """
    _check_focal(c, focal, target)
    radius = _radius(c, d)
    label = c.evaluate(focal)
    within = [
        w
        for w in enumerate_worlds(c.space)
        if hamming(w, focal) <= radius and c.evaluate(w) == label
    ]
    if interior_mode == "all_same_label":
        interior = frozenset(within)
    elif interior_mode == "connected_component":
        allowed = set(within)
        component = {focal}
        frontier = [focal]
        while frontier:
            current = frontier.pop()
            for i in range(c.space.n):
                neighbor = current.flipped((i,))
                if neighbor in allowed and neighbor not in component:
                    component.add(neighbor)
                    frontier.append(neighbor)
        interior = frozenset(component)
    else:
        raise ValidationError(f"unknown interior mode {interior_mode!r}")
    border = frozenset(boundary(c, focal, target, radius))
    return Region(focal, radius, interior, border)


def _interval_contains(u: World, v: World, w: World) -> bool:
    """w lies on some geodesic between u and v."""
    agree = ~(u.value ^ v.value)
    return (w.value ^ u.value) & agree == 0


def interval_worlds(u: World, v: World) -> Iterator[World]:
    """All worlds on geodesics between u and v, canonical order."""
    diff = u.diff(v)
    for size in range(len(diff) + 1):
        for idx in combinations(diff, size):
            yield u.flipped(idx)


@dataclass(frozen=True)
class ConvexityVerdict:
    notion: str
    holds: bool
    witness: tuple[World, ...] | None


def convexity_check(
    c: Classifier,
    focal: World,
    target: str,
    notion: str,
    d: int | None = None,
    interior_mode: str = "all_same_label",
) -> ConvexityVerdict:
    """Check one convexity notion empirically; witness on failure.

    Witnesses: for interval and star a triple (u, w, v) with w on a
    geodesic between region points u and v but outside the region; for
    monotone_geodesic the unreachable interior point.
    """
    if notion not in CONVEXITY_NOTIONS:
        raise ValidationError(f"unknown convexity notion {notion!r}")
    region = build_region(c, focal, target, d, interior_mode)
    members = region.members
    ordered = sorted(members)

    if notion == "interval":
        for u, v in combinations(ordered, 2):
            for w in sorted(interval_worlds(u, v)):
                if w not in members:
                    return ConvexityVerdict(notion, False, (u, w, v))
        return ConvexityVerdict(notion, True, None)

    if notion == "star":
        for v in ordered:
            for w in sorted(interval_worlds(focal, v)):
                if w not in members:
                    return ConvexityVerdict(notion, False, (focal, w, v))
        return ConvexityVerdict(notion, True, None)

    # monotone_geodesic: each interior point reachable along some geodesic
    for v in sorted(region.interior):
        diff = set(focal.diff(v))
        reached = {focal}
        frontier = [focal]
        found = focal == v
        while frontier and not found:
            current = frontier.pop()
            remaining = diff.intersection(current.diff(v))
            for i in sorted(remaining):
                nxt = current.flipped((i,))
                if nxt in reached or nxt not in members:
                    continue
                if nxt == v:
                    found = True
                    break
                reached.add(nxt)
                frontier.append(nxt)
        if not found:
            return ConvexityVerdict(notion, False, (v,))
    return ConvexityVerdict(notion, True, None)


# --------------------------------------------------------------------------
# aggregate report and sweep harness


@dataclass(frozen=True)
class LocalStructureReport:
    focal: World
    target: str
    radius: int
    flip_degree: int
    witness: RefinementChain
    shape: Shape
    region: Region
    verdicts: tuple[ConvexityVerdict, ...]


def local_structure_report(
    c: Classifier, focal: World, target: str, d: int | None = None
) -> LocalStructureReport:
    radius = _radius(c, d)
    degree, witness = flip_degree(c, focal, target, radius)
    shape = classify_shape(c, focal, target, radius)
    region = build_region(c, focal, target, radius)
    verdicts = tuple(
        convexity_check(c, focal, target, notion, radius)
        for notion in CONVEXITY_NOTIONS
    )
    return LocalStructureReport(
        focal, target, radius, degree, witness, shape, region, verdicts
    )


def classifier_digest(c: Classifier) -> str:
    """Stable hash of the classified function (representation-independent)."""
    table = c.as_truth_table()
    assert isinstance(table.rep, TruthTable)
    payload = json.dumps(
        {
            "features": list(c.space.features),
            "labels": list(c.labels),
            "entries": list(table.rep.entries),
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SweepRow:
    digest: str
    focal: World
    target: str
    flip_degree: int
    verdicts: dict

    def to_json(self) -> str:
        doc = {
            "classifier": self.digest,
            "focal": self.focal.bits,
            "target": self.target,
            "flip_degree": self.flip_degree,
        }
        for notion in CONVEXITY_NOTIONS:
            holds, witness = self.verdicts[notion]
            doc[notion] = holds
            if witness is not None:
                doc[notion + "_witness"] = [w.bits for w in witness]
        return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    matrix: dict

    def to_jsonl(self) -> str:
        return "".join(row.to_json() + "\n" for row in self.rows)

    def matrix_json(self) -> str:
        return json.dumps(self.matrix, sort_keys=True, indent=2) + "\n"


def shape_sweep(
    instances: Iterable[tuple[Classifier, World, str]], d: int | None = None
) -> SweepReport:
    """Tabulate flip degree against the three convexity notions.

    Pure reporting: emits one row per instance with all verdicts and
    counterexamples, plus a co-occurrence matrix of (degree <= 2) against
    each notion.  No convexity claim is asserted.
    """
    rows = []
    matrix = {
        notion: {
            "degree_le2_holds": 0,
            "degree_le2_fails": 0,
            "degree_gt2_holds": 0,
            "degree_gt2_fails": 0,
        }
        for notion in CONVEXITY_NOTIONS
    }
    for c, focal, target in instances:
        degree, _ = flip_degree(c, focal, target, d)
        verdicts = {}
        for notion in CONVEXITY_NOTIONS:
            verdict = convexity_check(c, focal, target, notion, d)
            verdicts[notion] = (verdict.holds, verdict.witness)
            low = degree <= 2
            key = (
                ("degree_le2_" if low else "degree_gt2_")
                + ("holds" if verdict.holds else "fails")
            )
            matrix[notion][key] += 1
        rows.append(
            SweepRow(classifier_digest(c), focal, target, degree, verdicts)
        )
    return SweepReport(tuple(rows), matrix)


def all_binary_function_instances(
    n: int = 3, labels: tuple[str, str] = ("deny", "grant")
) -> Iterator[tuple[Classifier, World, str]]:
    """Every non-constant binary-label function on n features, every focal.

    Every world is a valid focal point with the opposite label as target;
    constant functions are excluded (no focal/target pair survives the
    preconditions with a live counterfactual on the other side).
    """
    space = FeatureSpace(tuple(f"f{i}" for i in range(n)))
    size = 1 << n
    eta, pi = labels
    other = {eta: pi, pi: eta}
    for code in range(1 << size):
        entries = tuple(pi if (code >> k) & 1 else eta for k in range(size))
        if all(e == eta for e in entries) or all(e == pi for e in entries):
            continue
        c = Classifier(space, labels, TruthTable(entries))
        for value in range(size):
            yield c, World(n, value), other[entries[value]]


# --------------------------------------------------------------------------
# specificity of antecedent chains


@dataclass(frozen=True)
class SpecificityReport:
    sampled: int
    usable: int
    vacuous: int
    distance_violations: int
    off_path_witnesses: int


def specificity_check(
    c: Classifier,
    focal: World,
    target: str,
    samples: int = 100,
    seed: int = 0,
    d: int | None = None,
) -> SpecificityReport:
    """Sample refinement chains with alternating support and verify geometry.

    For each sampled chain of strictly growing literal conjunctions whose
    support alternates at every step, the closest witnesses must sit at
    strictly increasing Hamming distance from the focal world, and it must
    be possible to choose them on one common monotone path (each witness's
    difference set containing the previous one's).  Refinements that would
    contradict an existing literal are unsatisfiable and counted vacuous.
    """
    _check_focal(c, focal, target)
    radius = _radius(c, d)
    rng = Random(seed)
    n = c.space.n
    usable = vacuous = distance_violations = off_path = 0
    for _ in range(samples):
        assignment: dict[int, bool] = {}
        witnesses: list[World] = []
        support = False
        contradicted = False
        while len(assignment) < min(radius, n):
            candidates = []
            for i in range(n):
                for polarity in (True, False):
                    if i in assignment:
                        if assignment[i] != polarity and rng.random() < 0.05:
                            candidates.append((i, polarity, True))
                        continue
                    trial = dict(assignment)
                    trial[i] = polarity
                    if _support(c, focal, target, trial) != support:
                        candidates.append((i, polarity, False))
            if not candidates:
                break
            i, polarity, contradiction = rng.choice(candidates)
            if contradiction:
                contradicted = True
                break
            assignment[i] = polarity
            support = not support
            witnesses.append(
                focal.overwrite({j: int(b) for j, b in assignment.items()})
            )
        if contradicted:
            vacuous += 1
            continue
        if len(witnesses) < 2:
            continue
        usable += 1
        distances = [hamming(w, focal) for w in witnesses]
        if any(b <= a for a, b in zip(distances, distances[1:])):
            distance_violations += 1
        diffs = [set(focal.diff(w)) for w in witnesses]
        if any(not a.issubset(b) for a, b in zip(diffs, diffs[1:])):
            off_path += 1
    return SpecificityReport(
        samples, usable, vacuous, distance_violations, off_path
    )


# --------------------------------------------------------------------------
# ground-truth justification


def justified(
    c: Classifier, world: World, gt: GroundTruthSet
) -> tuple[bool, tuple[World, ...] | None]:
    """Is the prediction anchored to a correctly-predicted sample point?

    True iff some ground-truth point whose recorded label matches both its
    own prediction and the prediction at ``world`` is reachable from
    ``world`` through Hamming-adjacent worlds all sharing that label.
    Returns the connecting path as witness.
    """
    if not gt.points:
        raise ValidationError("ground truth set must be nonempty")
    label = c.evaluate(world)
    targets = {
        p
        for p, recorded in gt.points
        if recorded == label and c.evaluate(p) == label
    }
    if not targets:
        return False, None
    if world in targets:
        return True, (world,)
    parents: dict[World, World] = {world: world}
    queue = [world]
    while queue:
        current = queue.pop(0)
        for i in range(c.space.n):
            neighbor = current.flipped((i,))
            if neighbor in parents or c.evaluate(neighbor) != label:
                continue
            parents[neighbor] = current
            if neighbor in targets:
                path = [neighbor]
                while path[-1] != world:
                    path.append(parents[path[-1]])
                return True, tuple(reversed(path))
            queue.append(neighbor)
    return False, None
