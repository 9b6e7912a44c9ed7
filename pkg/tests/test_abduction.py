"""Entailment oracle and deletion-based minimal abductive explanations."""

from random import Random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import constant, random_table
from xfair.abduction import (
    EntailmentOracle,
    LiteralSet,
    abductive_explanation,
    cf_to_valid_explanation,
)
from xfair.errors import PreconditionError, ValidationError
from xfair.model import World
from xfair.transforms import Transformation


class TestOracle:
    def test_loan_denial_core_entails(self, loan):
        o = EntailmentOracle()
        assert o.entails(loan, LiteralSet.of({0: 0, 1: 0}), "deny")

    def test_single_literal_does_not(self, loan):
        o = EntailmentOracle()
        assert not o.entails(loan, LiteralSet.of({0: 0}), "deny")

    def test_full_world_description(self, loan, space):
        o = EntailmentOracle()
        w = space.world("1010")
        assert o.entails(loan, LiteralSet.describing(w), loan.evaluate(w))

    def test_counter_increments_once_per_query(self, loan):
        o = EntailmentOracle()
        o.entails(loan, LiteralSet.of({0: 0}), "deny")
        o.entails(loan, LiteralSet.of({2: 1}), "deny")
        assert o.calls == 2

    def test_inconsistent_literals_rejected(self):
        with pytest.raises(ValidationError):
            LiteralSet(((0, 1), (0, 0)))

    def test_backends_agree(self, loan):
        rng = Random(3)
        for n in (3, 4, 5, 6):
            c = random_table(rng, n)
            for _ in range(40):
                lits = LiteralSet.of(
                    {i: rng.randint(0, 1) for i in rng.sample(range(n), rng.randint(0, n))}
                )
                target = rng.choice(("deny", "grant"))
                assert (
                    EntailmentOracle("exhaustive").entails(c, lits, target)
                    == EntailmentOracle("rule_prune").entails(c, lits, target)
                )

    def test_rule_prune_agrees_on_rules_classifier(self, loan):
        rng = Random(5)
        for _ in range(80):
            lits = LiteralSet.of(
                {i: rng.randint(0, 1) for i in rng.sample(range(4), rng.randint(0, 4))}
            )
            target = rng.choice(("deny", "grant"))
            assert (
                EntailmentOracle("exhaustive").entails(loan, lits, target)
                == EntailmentOracle("rule_prune").entails(loan, lits, target)
            )


class TestAbductiveExplanation:
    def test_loan_denial(self, loan, focal, space):
        o = EntailmentOracle()
        lits = abductive_explanation(o, loan, focal)
        assert lits.to_dict(space) == {
            "literals": {"income_high": False, "privileged": False}
        }

    def test_fraud_singleton(self, loan, space):
        o = EntailmentOracle()
        lits = abductive_explanation(o, loan, space.world("1010"))
        assert lits.to_dict(space) == {"literals": {"fraud": True}}

    def test_constant_gives_empty(self):
        c = constant("deny")
        lits = abductive_explanation(EntailmentOracle(), c, World(4, 0))
        assert lits.assignments == ()

    def test_call_budget_linear(self, loan, focal):
        o = EntailmentOracle()
        abductive_explanation(o, loan, focal)
        assert o.calls <= 2 * loan.space.n

    def test_deterministic(self, loan, focal):
        a = abductive_explanation(EntailmentOracle(), loan, focal)
        b = abductive_explanation(EntailmentOracle(), loan, focal)
        assert a == b

    @given(st.integers(0, 2**16 - 1), st.integers(0, 15))
    def test_sound_and_subset_minimal(self, mask, value):
        from xfair.model import Classifier, TruthTable

        labels = ("deny", "grant")
        entries = tuple(labels[(mask >> i) & 1] for i in range(16))
        c = Classifier(random_table(Random(0), 4).space, labels, TruthTable(entries))
        w = World(4, value)
        o = EntailmentOracle()
        lits = abductive_explanation(o, c, w)
        label = c.evaluate(w)
        check = EntailmentOracle()
        assert check.entails(c, lits, label)
        for idx, _ in lits.assignments:
            assert not check.entails(c, lits.without(idx), label)
        assert o.calls <= 2 * 4


class TestCfToValidExplanation:
    def test_income_route(self, loan, focal, space):
        t = Transformation.flip(focal, (0,))
        lits = cf_to_valid_explanation(EntailmentOracle(), loan, t, focal, "grant")
        assert lits.to_dict(space) == {
            "literals": {"income_high": True, "fraud": False}
        }

    def test_privilege_route(self, loan, focal, space):
        t = Transformation.flip(focal, (1,))
        lits = cf_to_valid_explanation(EntailmentOracle(), loan, t, focal, "grant")
        assert lits.to_dict(space) == {
            "literals": {"privileged": True, "fraud": False}
        }

    def test_inappropriate_transformation_rejected(self, loan, focal):
        t = Transformation.flip(focal, (2,))
        with pytest.raises(PreconditionError):
            cf_to_valid_explanation(EntailmentOracle(), loan, t, focal, "grant")

    def test_result_subset_of_image_literals(self, loan, focal):
        t = Transformation.flip(focal, (0, 3))
        lits = cf_to_valid_explanation(EntailmentOracle(), loan, t, focal, "grant")
        image = t.apply(focal)
        for idx, bit in lits.assignments:
            assert image.bit(idx) == bit
