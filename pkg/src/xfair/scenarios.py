"""Bundled classifiers and ready-to-run game scenarios.

The four-feature loan fixture is the package's running example: a bank
grants when the applicant is not flagged for fraud and has either high
income or privileged status, savings never matter, and the focal applicant
(all features false) was denied.  Every named scenario below pairs that
classifier (or a synthetic scaling instance) with a focal world, a target
label, a conundrum, and prejudicial factors, so the command line and the
service can start games from a single registry key.

``separation_instance`` builds the family used to measure how move counts
scale across game variants: one decisive feature the classifier actually
reads plus ``k`` padding features it ignores, with a conundrum naming the
decisive dimension.  Against an adversarial proposer a Restriction game
must drain all padding counterfactuals before the useful one appears,
while a Forcing game requests the decisive flip directly.

``random_acceptance_instance`` draws seeded random classifiers and keeps
only feasible games carrying at most one prejudicial factor, which is the
regime where a single challenge per obligation is guaranteed to suffice.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Callable, Mapping

from .errors import InfeasibleError, ValidationError
from .fairness import ConundrumSpec, PrejudicialFactor
from .game import GameConfig, new_game
from .model import (
    Classifier,
    FeatureSpace,
    LabelRules,
    Rule,
    TruthTable,
    World,
)
from .transforms import Transformation

BANKLOAN_FEATURES = ("income_high", "privileged", "fraud", "savings")
BANKLOAN_LABELS = ("deny", "grant")


def bankloan4() -> Classifier:
    """Grant iff no fraud and (high income or privileged); savings inert."""
    space = FeatureSpace(BANKLOAN_FEATURES)
    rules = LabelRules(
        rules=(
            Rule(
                "grant",
                (
                    ((0, True), (2, False)),
                    ((1, True), (2, False)),
                ),
            ),
        ),
        default="deny",
    )
    return Classifier(space, BANKLOAN_LABELS, rules, name="bankloan4")


def privileged_factor(space: FeatureSpace) -> PrejudicialFactor:
    """The factor that forces privileged status on."""
    return PrejudicialFactor(
        "P_priv", Transformation.setting({space.index("privileged"): 1})
    )


@dataclass(frozen=True)
class Scenario:
    """A named, fully specified game setup."""

    name: str
    summary: str
    build: Callable[[], GameConfig]
    suggested_policy: str

    def config(self) -> GameConfig:
        return self.build()


def _bankloan(variant: str) -> GameConfig:
    """One epistemic situation, three dialogue protocols.

    The applicant attends only to income, so the conundrum is ignorance of
    the other dimensions, and privilege is declared prejudicial.  The same
    instance is winnable in every variant; only the move budget differs.
    """
    c = bankloan4()
    return GameConfig(
        classifier=c,
        focal=c.space.world("0000"),
        target="grant",
        radius=c.space.n,
        variant=variant,
        conundrum=ConundrumSpec("CI", (c.space.index("income_high"),)),
        factors=(privileged_factor(c.space),),
        adversary_policy="adversarial",
    )


def _bankloan_restriction() -> GameConfig:
    return _bankloan("restriction")


def _bankloan_forcing() -> GameConfig:
    return _bankloan("forcing")


def _bankloan_challenge() -> GameConfig:
    return _bankloan("challenge")


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            "bankloan4_restriction",
            "loan denial contested by pulling counterfactuals one at a time",
            _bankloan_restriction,
            "exhaustive",
        ),
        Scenario(
            "bankloan4_forcing",
            "loan denial probed with directly requested flip sets",
            _bankloan_forcing,
            "directed_local_search",
        ),
        Scenario(
            "bankloan4_challenge",
            "loan denial contested by challenging sufficient-reason claims",
            _bankloan_challenge,
            "conundrum_challenger",
        ),
    )
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValidationError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(SCENARIOS))}"
        ) from None


# --------------------------------------------------------------------------
# scaling family


def separation_classifier(k: int) -> Classifier:
    """One decisive feature plus ``k`` ignored padding features."""
    if k < 1:
        raise ValidationError("padding count must be at least 1")
    features = ("decisive",) + tuple(f"pad{i}" for i in range(k))
    space = FeatureSpace(features)
    rules = LabelRules(rules=(Rule("grant", (((0, True),),)),), default="deny")
    return Classifier(space, ("deny", "grant"), rules, name=f"separation_k{k}")


def separation_instance(k: int, variant: str) -> GameConfig:
    """The scaling game: focal all-false, mistaken about the decisive bit."""
    c = separation_classifier(k)
    return GameConfig(
        classifier=c,
        focal=World(c.space.n, 0),
        target="grant",
        radius=c.space.n,
        variant=variant,
        conundrum=ConundrumSpec("CM", (0,)),
        factors=(),
        adversary_policy="adversarial",
    )


# --------------------------------------------------------------------------
# seeded random acceptance instances


def _random_classifier(rng: Random, n: int) -> Classifier:
    space = FeatureSpace(tuple(f"f{i}" for i in range(n)))
    labels = ("deny", "grant")
    entries = tuple(rng.choice(labels) for _ in range(1 << n))
    return Classifier(space, labels, TruthTable(entries), name="random")


def random_acceptance_instance(
    seed: int, n: int = 4, max_draws: int = 200
) -> GameConfig:
    """A seeded feasible challenge game with at most one prejudicial factor.

    Draws random truth tables, focal worlds, conundrums, and an optional
    single factor until ``new_game`` certifies feasibility.  With at most
    one factor no two obligations can silently share a witness the scripted
    challenger fails to claim, so one challenge per obligation suffices.
    """
    rng = Random(seed)
    for _ in range(max_draws):
        c = _random_classifier(rng, n)
        focal = World(n, rng.randrange(1 << n))
        eta = c.evaluate(focal)
        target = "grant" if eta == "deny" else "deny"
        if rng.random() < 0.5:
            dims = tuple(sorted(rng.sample(range(n), rng.randint(1, n - 1))))
            conundrum = ConundrumSpec("CM", dims)
        else:
            dims = tuple(sorted(rng.sample(range(n), rng.randint(0, n - 1))))
            conundrum = ConundrumSpec("CI", dims)
        factors: tuple[PrejudicialFactor, ...] = ()
        if rng.random() < 0.5:
            i = rng.randrange(n)
            factors = (
                PrejudicialFactor(f"P_f{i}", Transformation.setting({i: rng.randint(0, 1)})),
            )
        config = GameConfig(
            classifier=c,
            focal=focal,
            target=target,
            radius=n,
            variant="challenge",
            conundrum=conundrum,
            factors=factors,
            adversary_policy="adversarial",
            seed=seed,
        )
        try:
            new_game(config)
        except InfeasibleError:
            continue
        return config
    raise InfeasibleError(
        f"no feasible challenge instance found for seed {seed} in {max_draws} draws"
    )


def scenario_catalog() -> list[Mapping[str, str]]:
    """Registry listing for the command line and the service."""
    return [
        {
            "name": s.name,
            "summary": s.summary,
            "suggested_policy": s.suggested_policy,
        }
        for s in SCENARIOS.values()
    ]
