"""Two-player explanation games over a fixed classifier.

The explainee knows her own world, the prediction she received, the target
label she contests toward, her conundrum, and the prejudicial factors she
cares about; the classifier itself is the adversary's private knowledge.
Moves and replies strictly alternate:

* ``N_REQUEST``  - ask for any new counterfactual: the adversary PROPOSEs a
  previously unoffered appropriate transformation within the radius (his
  policy decides which: cooperative policies discharge as many outstanding
  obligations as possible, adversarial ones as few), or declares the
  candidate pool EXHAUSTED;
* ``P_REQUEST``  - ask for a specific flip set: the adversary PROPOSEs
  exactly that transformation together with its resulting label (Forcing
  variant only);
* ``CHALLENGE``  - claim that a literal set entails the target: a correct
  claim is CONFIRMed (and the implied transformation to the claim's closest
  world is recorded as observed evidence), an incorrect one is answered by
  CORRECT carrying a canonical minimal completion of the claim toward the
  target plus its deletion-minimized literal core (Challenge variant only);
* ``ACCEPT``     - adopt everything proposed so far: the game closes as won
  when the adopted evidence discharges the conundrum check and every
  factor's protection obligation, and stays open otherwise (the ACK reply
  carries the resolution snapshot either way).

Variants gate the move set: Restriction games allow ACCEPT and N_REQUEST
only, Forcing adds P_REQUEST, Challenge swaps in CHALLENGE instead.  The
difference is complexity, not truth: the scripted policies in this module
reproduce an exponential blow-up for Restriction games against adversarial
proposal order, a polynomial bound for Forcing games played as a directed
probe, and a linear bound for Challenge games, where every answered
challenge hands the explainee an obligation-discharging transformation.

``flip_local_search`` is the standalone local-search baseline those bounds
are compared against: it ranks the minimal counterfactual images, assigns
cost m-j to the j-th of the first m and m to everything else, and descends
single-bit flips from seeded restarts, so every accepted step strictly
decreases cost and every endpoint is a verified local minimum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum
from random import Random
from typing import Iterable, Sequence

from .abduction import EntailmentOracle, LiteralSet, abductive_explanation
from .errors import InfeasibleError, PreconditionError, ValidationError
from .fairness import (
    ConundrumSpec,
    PrejudicialFactor,
    check_CB,
    check_CI,
    check_CM,
    fair_adequate_set,
)
from .model import Classifier, World, hamming
from .transforms import (
    Transformation,
    appropriate_flips,
    minimal_counterfactuals,
)

VARIANTS = ("restriction", "forcing", "challenge")


class MoveKind(str, Enum):
    ACCEPT = "ACCEPT"
    N_REQUEST = "N_REQUEST"
    P_REQUEST = "P_REQUEST"
    CHALLENGE = "CHALLENGE"


class ReplyKind(str, Enum):
    PROPOSE = "PROPOSE"
    CORRECT = "CORRECT"
    CONFIRM = "CONFIRM"
    EXHAUSTED = "EXHAUSTED"
    ACK = "ACK"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    indices: tuple[int, ...] = ()
    literals: LiteralSet | None = None

    def __post_init__(self) -> None:
        if self.kind == MoveKind.P_REQUEST and not self.indices:
            raise ValidationError("P_REQUEST needs a nonempty index set")
        if self.kind == MoveKind.CHALLENGE and self.literals is None:
            raise ValidationError("CHALLENGE needs a literal set")
        if self.kind not in (MoveKind.P_REQUEST,) and self.indices:
            raise ValidationError(f"{self.kind.value} takes no indices")
        if self.kind != MoveKind.CHALLENGE and self.literals is not None:
            raise ValidationError(f"{self.kind.value} takes no literals")


@dataclass(frozen=True)
class Reply:
    kind: ReplyKind
    transformation: Transformation | None = None
    label: str | None = None
    literals: LiteralSet | None = None
    note: str | None = None


@dataclass(frozen=True)
class GameConfig:
    classifier: Classifier
    focal: World
    target: str
    radius: int
    variant: str
    conundrum: ConundrumSpec | None
    factors: tuple[PrejudicialFactor, ...]
    adversary_policy: str = "adversarial"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValidationError(
                f"variant must be one of {VARIANTS}, got {self.variant!r}"
            )
        if self.adversary_policy not in ("adversarial", "cooperative"):
            raise ValidationError(
                f"unknown adversary policy {self.adversary_policy!r}"
            )
        if self.target not in self.classifier.labels:
            raise ValidationError(f"unknown target label {self.target!r}")
        if not 0 <= self.radius <= self.classifier.space.n:
            raise ValidationError("radius out of range")
        if self.conundrum is None and not self.factors:
            raise ValidationError("a game needs a conundrum or factors to resolve")


@dataclass(frozen=True)
class GameState:
    """Immutable game state; ``play`` returns a successor.

    ``target_set`` is the adversary-side fair-and-adequate set computed at
    game creation.  It exists to certify feasibility and to price the
    local-search baseline; it is never disclosed to the explainee and the
    service layer must not serialize it.
    """

    config: GameConfig
    transcript: tuple[tuple[Move, Reply], ...] = ()
    proposed: tuple[Transformation, ...] = ()
    accepted: tuple[Transformation, ...] = ()
    status: str = "open"
    explainee_moves: int = 0
    adversary_oracle_calls: int = 0
    target_set: tuple[Transformation, ...] = ()
    candidate_pool: tuple[Transformation, ...] = ()

    @property
    def resolved(self) -> dict[str, bool]:
        return _resolution(self.config, self.accepted)


def _resolution(
    config: GameConfig, evidence: Sequence[Transformation]
) -> dict[str, bool]:
    """Which obligations the given evidence discharges (fairness checks)."""
    c, focal, target = config.classifier, config.focal, config.target
    out: dict[str, bool] = {}
    if config.conundrum is not None:
        if config.conundrum.kind == "CI":
            out["CI"] = check_CI(c, focal, config.conundrum, evidence, target).ok
        else:
            out["CM"] = check_CM(c, focal, config.conundrum, evidence, target).ok
    for factor in config.factors:
        out[f"CB:{factor.name}"] = check_CB(
            c, focal, (factor,), evidence, target
        ).ok
    return out


def winning_check(state: GameState) -> bool:
    """Independent verification that the accepted evidence resolves all."""
    resolution = _resolution(state.config, state.accepted)
    return bool(resolution) and all(resolution.values())


def new_game(config: GameConfig) -> GameState:
    """Open a game after certifying feasibility.

    Raises ``InfeasibleError`` (naming the failing obligation) when no
    fair-and-adequate set exists within the radius; the computed set stays
    on the adversary's side of the state.
    """
    fair = fair_adequate_set(
        config.classifier,
        config.focal,
        config.target,
        config.radius,
        config.conundrum,
        config.factors,
    )
    pool = appropriate_flips(
        config.classifier, config.focal, config.target, config.radius
    )
    return GameState(
        config=config,
        target_set=fair.deltas,
        candidate_pool=pool,
    )


def legal_moves(state: GameState) -> tuple[MoveKind, ...]:
    """Move kinds the variant admits now; ACCEPT needs prior proposals."""
    if state.status != "open":
        return ()
    kinds = [MoveKind.N_REQUEST]
    if state.config.variant == "forcing":
        kinds.append(MoveKind.P_REQUEST)
    if state.config.variant == "challenge":
        kinds.append(MoveKind.CHALLENGE)
    if state.proposed:
        kinds.insert(0, MoveKind.ACCEPT)
    return tuple(kinds)


# --------------------------------------------------------------------------
# adversary replies


def _obligation_ids(config: GameConfig) -> tuple[str, ...]:
    ids: list[str] = []
    if config.conundrum is not None:
        ids.append(config.conundrum.kind)
    ids.extend(f"CB:{factor.name}" for factor in config.factors)
    return tuple(ids)


def _discharges_one(config: GameConfig, t: Transformation, identifier: str) -> bool:
    """Whether a single transformation discharges one obligation.

    Same predicates as the fairness checks, minus their diagnostics; kept
    lightweight because the adversary scores every candidate each move.
    """
    c, focal = config.classifier, config.focal
    image = t.apply(focal)
    if c.evaluate(image) != config.target:
        return False
    if identifier in ("CI", "CM"):
        spec = config.conundrum
        assert spec is not None
        dims = spec.complement(c.space.n) if identifier == "CI" else spec.dims
        moved = image.diff(focal)
        return bool(moved) and set(moved).issubset(set(dims))
    name = identifier.removeprefix("CB:")
    factor = next(f for f in config.factors if f.name == name)
    return factor.fixes(image)


def _uncovered(
    config: GameConfig, evidence: Sequence[Transformation]
) -> set[str]:
    return {
        ob
        for ob in _obligation_ids(config)
        if not any(_discharges_one(config, t, ob) for t in evidence)
    }


def _answer_n_request(state: GameState) -> tuple[Reply, int]:
    config = state.config
    offered = set(state.proposed)
    fresh = [t for t in state.candidate_pool if t not in offered]
    if not fresh:
        return Reply(ReplyKind.EXHAUSTED, note="no unproposed candidates remain"), 0
    uncovered = [
        ob
        for ob in _obligation_ids(config)
        if not any(_discharges_one(config, t, ob) for t in state.proposed)
    ]
    gains = [
        sum(1 for ob in uncovered if _discharges_one(config, t, ob)) for t in fresh
    ]
    if config.adversary_policy == "adversarial":
        # discharge as few obligations as possible; canonical order breaks
        # ties, so irrelevant candidates drain out before relevant ones
        best = min(gains)
    else:
        best = max(gains)
    choice = fresh[gains.index(best)]
    label = config.classifier.evaluate(choice.apply(config.focal))
    return Reply(ReplyKind.PROPOSE, choice, label), 1


def _answer_p_request(state: GameState, move: Move) -> tuple[Reply, int]:
    config = state.config
    for i in move.indices:
        if not 0 <= i < config.classifier.space.n:
            raise ValidationError(f"feature index {i} out of range")
    if len(move.indices) > config.radius:
        raise ValidationError(
            f"requested flip set exceeds the radius {config.radius}"
        )
    t = Transformation.flip(config.focal, sorted(move.indices))
    label = config.classifier.evaluate(t.apply(config.focal))
    return Reply(ReplyKind.PROPOSE, t, label), 1


def _answer_challenge(state: GameState, move: Move) -> tuple[Reply, int]:
    """CONFIRM a true claim, else CORRECT with a minimal completion.

    Completions (flips avoiding the claimed features, measured from the
    claim's closest world) are preferred over corrections (arbitrary
    flips), both in canonical order; the reply carries the transformation
    anchored at the focal world and the deletion-minimized literal core of
    its image.
    """
    config = state.config
    assert move.literals is not None
    c, focal, target = config.classifier, config.focal, config.target
    oracle = EntailmentOracle("exhaustive")
    if oracle.entails(c, move.literals, target):
        claim_world = focal.overwrite(dict(move.literals.assignments))
        reply = Reply(
            ReplyKind.CONFIRM,
            transformation=(
                Transformation.setting(
                    {i: claim_world.bit(i) for i in claim_world.diff(focal)}
                )
                if claim_world != focal and hamming(claim_world, focal) <= config.radius
                else None
            ),
            label=target,
            literals=move.literals,
            note="every completion of the claim carries the target label",
        )
        return reply, oracle.calls
    claim_world = focal.overwrite(dict(move.literals.assignments))
    claimed = set(move.literals.indices)
    n = c.space.n
    candidate: World | None = None
    evaluations = 0
    for avoid_claimed in (True, False):
        pool = (
            [i for i in range(n) if i not in claimed] if avoid_claimed else range(n)
        )
        for idx in _index_sets_with_empty(tuple(pool)):
            image = claim_world.flipped(idx)
            if hamming(image, focal) > config.radius:
                continue
            evaluations += 1
            if c.evaluate(image) == target:
                candidate = image
                break
        if candidate is not None:
            break
    if candidate is None:
        raise InfeasibleError(
            "no correction reaches the target label within the radius"
        )
    correction = Transformation.setting(
        {i: candidate.bit(i) for i in candidate.diff(focal)}
    )
    core = abductive_explanation(oracle, c, candidate)
    return (
        Reply(
            ReplyKind.CORRECT,
            correction,
            target,
            core,
            note="claim completed toward the target label",
        ),
        oracle.calls + evaluations,
    )


def _index_sets_with_empty(pool: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    from itertools import combinations

    yield ()
    for size in range(1, len(pool) + 1):
        yield from combinations(pool, size)


def play(state: GameState, move: Move) -> GameState:
    """Apply one explainee move and the adversary's reply."""
    if state.status != "open":
        raise PreconditionError(f"game is {state.status}; no further moves")
    if move.kind not in legal_moves(state):
        raise ValidationError(
            f"{move.kind.value} is not legal in a {state.config.variant} game now"
        )
    calls = 0
    proposed = list(state.proposed)
    accepted = list(state.accepted)
    status = state.status

    if move.kind == MoveKind.ACCEPT:
        accepted = list(proposed)
        resolution = _resolution(state.config, accepted)
        if resolution and all(resolution.values()):
            status = "won"
            note = "accepted evidence resolves every obligation"
        else:
            missing = sorted(k for k, ok in resolution.items() if not ok)
            note = "unresolved: " + ", ".join(missing)
        reply = Reply(ReplyKind.ACK, note=note)
    elif move.kind == MoveKind.N_REQUEST:
        reply, calls = _answer_n_request(state)
        if reply.kind == ReplyKind.PROPOSE:
            assert reply.transformation is not None
            proposed.append(reply.transformation)
    elif move.kind == MoveKind.P_REQUEST:
        reply, calls = _answer_p_request(state, move)
        assert reply.transformation is not None
        if reply.transformation not in proposed:
            proposed.append(reply.transformation)
    else:  # CHALLENGE
        reply, calls = _answer_challenge(state, move)
        if reply.transformation is not None and reply.transformation not in proposed:
            proposed.append(reply.transformation)

    return replace(
        state,
        transcript=state.transcript + ((move, reply),),
        proposed=tuple(proposed),
        accepted=tuple(accepted),
        status=status,
        explainee_moves=state.explainee_moves + 1,
        adversary_oracle_calls=state.adversary_oracle_calls + calls,
    )


# --------------------------------------------------------------------------
# wire format


def move_to_doc(move: Move, space) -> dict:
    """JSON-ready move document (feature names, not indices)."""
    doc: dict = {"kind": move.kind.value}
    if move.kind == MoveKind.P_REQUEST:
        doc["features"] = [space.features[i] for i in move.indices]
    if move.kind == MoveKind.CHALLENGE and move.literals is not None:
        doc["literals"] = {
            space.features[i]: bool(b) for i, b in move.literals.assignments
        }
    return doc


def reply_to_doc(reply: Reply, space) -> dict:
    """JSON-ready reply document; absent fields are omitted."""
    doc: dict = {"kind": reply.kind.value}
    if reply.transformation is not None:
        doc["transformation"] = reply.transformation.to_dict(space)
    if reply.label is not None:
        doc["label"] = reply.label
    if reply.literals is not None:
        doc["literals"] = {
            space.features[i]: bool(b) for i, b in reply.literals.assignments
        }
    if reply.note is not None:
        doc["note"] = reply.note
    return doc


# --------------------------------------------------------------------------
# explainee policies


@dataclass(frozen=True)
class ExplaineeView:
    """Everything the explainee may legitimately consult.

    Notably absent: the classifier and the adversary's target set.  The
    resolution snapshot is recomputable from her own conundrum, factors,
    and the labels the adversary disclosed, so exposing it leaks nothing.
    """

    focal: World
    focal_label: str
    target: str
    radius: int
    variant: str
    conundrum: ConundrumSpec | None
    factors: tuple[PrejudicialFactor, ...]
    transcript: tuple[tuple[Move, Reply], ...]
    proposed: tuple[Transformation, ...]
    legal: tuple[MoveKind, ...]


def explainee_view(state: GameState) -> ExplaineeView:
    config = state.config
    return ExplaineeView(
        focal=config.focal,
        focal_label=config.classifier.evaluate(config.focal),
        target=config.target,
        radius=config.radius,
        variant=config.variant,
        conundrum=config.conundrum,
        factors=config.factors,
        transcript=state.transcript,
        proposed=state.proposed,
        legal=legal_moves(state),
    )


def _observed_labels(view: ExplaineeView) -> dict[Transformation, str]:
    """Labels the adversary has disclosed for proposed transformations."""
    out: dict[Transformation, str] = {}
    for _, reply in view.transcript:
        if reply.transformation is not None and reply.label is not None:
            out[reply.transformation] = reply.label
    return out


def open_obligations(view: ExplaineeView) -> set[str]:
    """Obligations not yet discharged by disclosed evidence.

    Computed purely from the view: membership tests use the factor maps and
    conundrum dimensions (explainee knowledge) plus disclosed labels.
    """
    labels = _observed_labels(view)
    uncovered: set[str] = set()
    if view.conundrum is not None:
        dims = (
            view.conundrum.complement(view.focal.width)
            if view.conundrum.kind == "CI"
            else view.conundrum.dims
        )
        ok = any(
            label == view.target
            and set(t.apply(view.focal).diff(view.focal)).issubset(dims)
            and t.apply(view.focal) != view.focal
            for t, label in labels.items()
        )
        if not ok:
            uncovered.add(view.conundrum.kind)
    for factor in view.factors:
        ok = any(
            label == view.target and factor.fixes(t.apply(view.focal))
            for t, label in labels.items()
        )
        if not ok:
            uncovered.add(f"CB:{factor.name}")
    return uncovered


class ExplaineePolicy:
    """Deterministic move chooser; None abandons the game."""

    name = "abstract"

    def next_move(self, view: ExplaineeView) -> Move | None:
        raise NotImplementedError


class ExhaustivePolicy(ExplaineePolicy):
    """Pull new counterfactuals until the disclosed evidence suffices."""

    name = "exhaustive"

    def next_move(self, view: ExplaineeView) -> Move | None:
        if not open_obligations(view):
            return Move(MoveKind.ACCEPT)
        if view.transcript and view.transcript[-1][1].kind == ReplyKind.EXHAUSTED:
            return None
        return Move(MoveKind.N_REQUEST)


class DirectedLocalSearchPolicy(ExplaineePolicy):
    """Probe obligation-relevant flip sets directly (Forcing only).

    For the open obligation the policy enumerates flip sets confined to the
    dimensions that could possibly discharge it (mistaken dims for CM,
    unattended dims for CI, factor-fixing supersets for CB), ascending size
    and canonical order, requesting each unseen one in turn.  The count of
    open obligations is its descent cost: it never increases, and the
    policy accepts exactly when it reaches zero.
    """

    name = "directed_local_search"

    def next_move(self, view: ExplaineeView) -> Move | None:
        if view.variant != "forcing":
            raise ValidationError("directed_local_search requires a forcing game")
        uncovered = open_obligations(view)
        if not uncovered:
            return Move(MoveKind.ACCEPT)
        asked = {
            move.indices
            for move, _ in view.transcript
            if move.kind == MoveKind.P_REQUEST
        }
        n = view.focal.width
        for identifier in sorted(uncovered):
            for idx in self._probe_sets(view, identifier, n):
                if idx not in asked and 0 < len(idx) <= view.radius:
                    return Move(MoveKind.P_REQUEST, idx)
        return None

    def _probe_sets(
        self, view: ExplaineeView, identifier: str, n: int
    ) -> Iterable[tuple[int, ...]]:
        if identifier in ("CI", "CM"):
            assert view.conundrum is not None
            dims = (
                view.conundrum.complement(n)
                if identifier == "CI"
                else view.conundrum.dims
            )
            for size in range(1, len(dims) + 1):
                from itertools import combinations

                yield from combinations(dims, size)
            return
        factor = next(
            f for f in view.factors if f"CB:{f.name}" == identifier
        )
        # a factor-fixed image must carry the factor's own values, so every
        # probe contains the bits the factor would rewrite
        base = tuple(view.focal.diff(factor.apply(view.focal)))
        rest = [i for i in range(n) if i not in set(base)]
        from itertools import combinations

        for extra_size in range(0, len(rest) + 1):
            for extra in combinations(rest, extra_size):
                idx = tuple(sorted(set(base).union(extra)))
                if idx:
                    yield idx


class ConundrumChallengerPolicy(ExplaineePolicy):
    """One challenge per open obligation, then accept (Challenge only).

    The claims are engineered so any answer helps: claiming the focal
    world's values on the dimensions that may NOT change forces a
    completion confined to the allowed dimensions (discharging CI or CM),
    and claiming a factor's own values forces either a factor-fixed
    completion or a confirmation whose implied transformation is already
    factor-fixed (discharging CB).
    """

    name = "conundrum_challenger"

    def next_move(self, view: ExplaineeView) -> Move | None:
        if view.variant != "challenge":
            raise ValidationError("conundrum_challenger requires a challenge game")
        uncovered = open_obligations(view)
        if not uncovered:
            return Move(MoveKind.ACCEPT)
        issued = {
            move.literals
            for move, _ in view.transcript
            if move.kind == MoveKind.CHALLENGE
        }
        n = view.focal.width
        claims: list[tuple[str, LiteralSet]] = []
        if view.conundrum is not None and view.conundrum.kind in uncovered:
            frozen_dims = (
                view.conundrum.dims
                if view.conundrum.kind == "CI"
                else view.conundrum.complement(n)
            )
            claims.append(
                (
                    view.conundrum.kind,
                    LiteralSet.of({i: view.focal.bit(i) for i in frozen_dims}),
                )
            )
        for factor in view.factors:
            if f"CB:{factor.name}" in uncovered:
                claims.append(
                    (
                        f"CB:{factor.name}",
                        LiteralSet(factor.setter.assignments),
                    )
                )
        for _, claim in claims:
            if claim not in issued:
                return Move(MoveKind.CHALLENGE, literals=claim)
        return None


POLICIES: dict[str, type[ExplaineePolicy]] = {
    "exhaustive": ExhaustivePolicy,
    "directed_local_search": DirectedLocalSearchPolicy,
    "conundrum_challenger": ConundrumChallengerPolicy,
}


@dataclass(frozen=True)
class SimulationMetrics:
    explainee_moves: int
    adversary_oracle_calls: int
    wall_time: float
    won: bool
    status: str
    cost_trace: tuple[int, ...]


def simulate(
    config: GameConfig,
    explainee_policy: str,
    max_moves: int = 10_000,
) -> tuple[GameState, SimulationMetrics]:
    """Run one game to completion under a named explainee policy.

    Deterministic for a fixed (config, seed, policy); the cost trace is the
    number of open obligations after each explainee move.
    """
    if explainee_policy not in POLICIES:
        raise ValidationError(f"unknown explainee policy {explainee_policy!r}")
    policy = POLICIES[explainee_policy]()
    if explainee_policy == "directed_local_search" and config.variant != "forcing":
        raise ValidationError("directed_local_search requires the forcing variant")
    if explainee_policy == "conundrum_challenger" and config.variant != "challenge":
        raise ValidationError("conundrum_challenger requires the challenge variant")
    started = time.perf_counter()
    state = new_game(config)
    trace: list[int] = []
    while state.status == "open" and state.explainee_moves < max_moves:
        move = policy.next_move(explainee_view(state))
        if move is None:
            state = replace(state, status="abandoned")
            break
        state = play(state, move)
        trace.append(len(open_obligations(explainee_view(state))))
    if state.status == "open":
        state = replace(state, status="abandoned")
    metrics = SimulationMetrics(
        explainee_moves=state.explainee_moves,
        adversary_oracle_calls=state.adversary_oracle_calls,
        wall_time=time.perf_counter() - started,
        won=state.status == "won",
        status=state.status,
        cost_trace=tuple(trace),
    )
    return state, metrics


# --------------------------------------------------------------------------
# local-search baseline


@dataclass(frozen=True)
class Descent:
    start: World
    path: tuple[World, ...]
    costs: tuple[int, ...]


@dataclass(frozen=True)
class LocalSearchResult:
    solutions: tuple[World, ...]
    descents: tuple[Descent, ...]
    target_images: tuple[World, ...]


def flip_local_search(
    c: Classifier,
    focal: World,
    target: str,
    m: int,
    seed: int = 0,
) -> LocalSearchResult:
    """Collect up to ``m`` ranked minimal-counterfactual images by descent.

    Cost of a world: m-j when it is the j-th (1-based, canonical order) of
    the first m minimal counterfactual images, m otherwise.  Restarts run
    from the focal world first and then a seeded shuffle of the remaining
    worlds; each descent takes the first improving single-bit flip in
    canonical order, so accepted steps strictly decrease cost and the final
    world of every descent has no cheaper neighbor.  On an all-plateau
    landscape (no minimal counterfactuals) the first restart is returned
    as the immediate local minimum.
    """
    if m < 1:
        raise ValidationError("solution count must be at least 1")
    ranked = [
        t.apply(focal) for t in minimal_counterfactuals(c, focal, target).deltas
    ][:m]
    cost = {w: m - j for j, w in enumerate(ranked, start=1)}

    def cost_of(w: World) -> int:
        return cost.get(w, m)

    n = c.space.n
    others = [
        World(n, value) for value in range(1 << n) if World(n, value) != focal
    ]
    Random(seed).shuffle(others)
    starts = [focal] + others

    solutions: list[World] = []
    descents: list[Descent] = []
    wanted = min(m, len(ranked)) if ranked else 0
    for start in starts:
        current = start
        path = [current]
        costs = [cost_of(current)]
        while True:
            improved = None
            for i in range(n):
                neighbor = current.flipped((i,))
                if cost_of(neighbor) < cost_of(current):
                    improved = neighbor
                    break
            if improved is None:
                break
            current = improved
            path.append(current)
            costs.append(cost_of(current))
        descents.append(Descent(start, tuple(path), tuple(costs)))
        if current in cost and current not in solutions:
            solutions.append(current)
        if not ranked:
            solutions.append(current)
            break
        if len(solutions) >= wanted:
            break
    return LocalSearchResult(tuple(solutions), tuple(descents), tuple(ranked))
