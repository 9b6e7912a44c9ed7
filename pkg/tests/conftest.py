"""Shared fixtures: the loan classifier and common instances."""

from pathlib import Path

import pytest
from hypothesis import settings

from xfair.fairness import ConundrumSpec
from xfair.model import FeatureSpace
from xfair.scenarios import bankloan4, privileged_factor

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def loan():
    return bankloan4()


@pytest.fixture(scope="session")
def space(loan):
    return loan.space


@pytest.fixture(scope="session")
def focal(space):
    return space.world("0000")


@pytest.fixture(scope="session")
def p_priv(space):
    return privileged_factor(space)


@pytest.fixture(scope="session")
def ci_income(space):
    return ConundrumSpec("CI", (space.index("income_high"),))


@pytest.fixture(scope="session")
def cm_income(space):
    return ConundrumSpec("CM", (space.index("income_high"),))


@pytest.fixture(scope="session")
def model_path():
    return str(DATA / "bankloan4.json")


def grant_iff_income() -> "Classifier":
    """A one-relevant-feature comparison classifier used across tests."""
    from xfair.model import Classifier, LabelRules, Rule

    space = FeatureSpace(("income_high", "privileged", "fraud", "savings"))
    rules = LabelRules(rules=(Rule("grant", (((0, True),),)),), default="deny")
    return Classifier(space, ("deny", "grant"), rules, name="grant_iff_income")


def constant(label: str, n: int = 4) -> "Classifier":
    from xfair.model import Classifier, TruthTable

    space = FeatureSpace(tuple(f"f{i}" for i in range(n)))
    return Classifier(
        space, ("deny", "grant"), TruthTable((label,) * (1 << n)), name=f"const_{label}"
    )


def random_table(rng, n: int, labels=("deny", "grant")):
    from xfair.model import Classifier, TruthTable

    space = FeatureSpace(tuple(f"f{i}" for i in range(n)))
    entries = tuple(rng.choice(labels) for _ in range(1 << n))
    return Classifier(space, labels, TruthTable(entries), name="random")
