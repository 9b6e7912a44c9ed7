"""Lewis closest-world evaluation, complete explanations, and the
correspondence between counterfactual support and transformation existence.

closest_worlds gets an independent oracle here: sort the whole cube by
Hamming distance and keep the nearest satisfying stratum.
"""

from random import Random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import constant, random_table
from xfair.errors import ValidationError
from xfair.formulas import (
    And,
    FeatureAtom,
    Not,
    PredictionAtom,
    formula_to_text,
    literal_conjunction,
    parse_conditional,
    parse_formula,
    satisfies,
)
from xfair.model import World, enumerate_worlds, hamming
from xfair.semantics import (
    Counterfactual,
    boundary_both_ways,
    closest_worlds,
    complete_explanation,
    correspondence_check,
    eval_counterfactual,
)


def brute_closest(focal, formula, c):
    sat = [w for w in enumerate_worlds(c.space) if satisfies(w, formula, c)]
    if not sat:
        return ()
    best = min(hamming(focal, w) for w in sat)
    return tuple(w for w in sat if hamming(focal, w) == best)


class TestFormulas:
    def test_parse_and_print(self, loan, space):
        f = parse_formula("income_high & !fraud", space, loan.labels)
        assert satisfies(space.world("1000"), f, loan)
        assert not satisfies(space.world("1010"), f, loan)
        assert formula_to_text(f, space) == "income_high & !fraud"

    def test_prediction_atom(self, loan, space):
        f = parse_formula("grant", space, loan.labels)
        assert not satisfies(space.world("0000"), f, loan)
        assert satisfies(space.world("0100"), f, loan)

    def test_tautology(self, loan, space):
        f = parse_formula("savings | !savings", space, loan.labels)
        assert all(satisfies(w, f, loan) for w in enumerate_worlds(space))

    def test_parse_conditional(self, loan, space):
        ante, cons = parse_conditional("income_high & !fraud => grant", space, loan.labels)
        assert isinstance(cons, PredictionAtom)
        assert satisfies(space.world("1000"), ante, loan)

    def test_unknown_atom_rejected(self, loan, space):
        from xfair.errors import ParseError

        with pytest.raises(ParseError):
            parse_formula("mystery", space, loan.labels)

    def test_literal_conjunction_builder(self, loan, space):
        f = literal_conjunction({0: True, 2: False})
        assert satisfies(space.world("1000"), f, loan)
        assert not satisfies(space.world("1010"), f, loan)


class TestClosestWorlds:
    def test_distance_one_unique(self, loan, focal):
        got = closest_worlds(focal, FeatureAtom(0), loan)
        assert [w.bits for w in got] == ["1000"]

    def test_distance_two_unique(self, loan, focal):
        f = And((FeatureAtom(0), FeatureAtom(2)))
        got = closest_worlds(focal, f, loan)
        assert [w.bits for w in got] == ["1010"]

    def test_unsatisfiable_empty(self, loan, focal):
        f = And((FeatureAtom(0), Not(FeatureAtom(0))))
        assert closest_worlds(focal, f, loan) == ()

    def test_ties_are_all_kept(self, loan, focal):
        got = closest_worlds(focal, parse_formula("grant", loan.space, loan.labels), loan)
        assert sorted(w.bits for w in got) == ["0100", "1000"]

    @given(st.integers(0, 15), st.integers(0, 2**16 - 1), st.data())
    def test_matches_brute_force(self, value, mask, data):
        from xfair.model import Classifier, TruthTable

        labels = ("deny", "grant")
        entries = tuple(labels[(mask >> i) & 1] for i in range(16))
        c = Classifier(random_table(Random(0), 4).space, labels, TruthTable(entries))
        focal = World(4, value)
        lits = data.draw(
            st.dictionaries(st.integers(0, 3), st.booleans(), min_size=1, max_size=4)
        )
        f = literal_conjunction(lits)
        assert closest_worlds(focal, f, c) == brute_closest(focal, f, c)


class TestEvalCounterfactual:
    def test_income_implies_grant(self, loan, focal):
        cf = Counterfactual(FeatureAtom(0), PredictionAtom("grant"))
        assert eval_counterfactual(focal, cf, loan)

    def test_strengthening_fails(self, loan, focal):
        cf = Counterfactual(And((FeatureAtom(0), FeatureAtom(2))), PredictionAtom("grant"))
        assert not eval_counterfactual(focal, cf, loan)

    def test_vacuous_antecedent_true(self, loan, focal):
        cf = Counterfactual(
            And((FeatureAtom(0), Not(FeatureAtom(0)))), PredictionAtom("grant")
        )
        assert eval_counterfactual(focal, cf, loan)

    @given(st.integers(0, 15), st.integers(0, 2**16 - 1))
    def test_weak_centering(self, value, mask):
        """When the focal point satisfies the antecedent, the counterfactual
        agrees with the consequent evaluated right there."""
        from xfair.model import Classifier, TruthTable

        labels = ("deny", "grant")
        entries = tuple(labels[(mask >> i) & 1] for i in range(16))
        c = Classifier(random_table(Random(0), 4).space, labels, TruthTable(entries))
        focal = World(4, value)
        lits = {i: bool(focal.bit(i)) for i in range(2)}
        cf = Counterfactual(literal_conjunction(lits), PredictionAtom("grant"))
        assert eval_counterfactual(focal, cf, c) == (c.evaluate(focal) == "grant")


class TestCompleteExplanation:
    def test_radius_one_members(self, loan, focal):
        s = complete_explanation(loan, focal, "grant", 1)
        antecedents = {formula_to_text(m.antecedent, loan.space) for m in s.members}
        assert "income_high" in antecedents
        assert "privileged" in antecedents
        assert "fraud" not in antecedents

    def test_radius_two_gains_savings_conjunction(self, loan, focal):
        s = complete_explanation(loan, focal, "grant", 2)
        antecedents = {formula_to_text(m.antecedent, loan.space) for m in s.members}
        assert "income_high & savings" in antecedents

    def test_constant_has_no_members(self):
        c = constant("deny")
        s = complete_explanation(c, World(4, 0), "grant", 4)
        assert s.members == ()

    def test_members_all_true_at_focal(self, loan, focal):
        s = complete_explanation(loan, focal, "grant", 4)
        assert s.members
        for m in s.members:
            assert eval_counterfactual(focal, m, loan)

    def test_full_boolean_refused_for_large_n(self):
        c = constant("deny", n=5)
        with pytest.raises(ValidationError):
            complete_explanation(c, World(5, 0), "grant", 5, antecedent_mode="full_boolean")


class TestCorrespondence:
    def test_loan_no_mismatches(self, loan, focal):
        rep = correspondence_check(loan, focal, "grant")
        assert rep.checked == 3**4 - 1
        assert rep.mismatches == ()

    def test_constant_no_mismatches(self):
        c = constant("deny")
        rep = correspondence_check(c, World(4, 0), "grant")
        assert rep.mismatches == ()

    @given(st.integers(0, 2**16 - 1), st.integers(0, 15))
    def test_random_tables_no_mismatches(self, mask, value):
        from xfair.model import Classifier, TruthTable

        labels = ("deny", "grant")
        entries = tuple(labels[(mask >> i) & 1] for i in range(16))
        c = Classifier(random_table(Random(0), 4).space, labels, TruthTable(entries))
        focal = World(4, value)
        target = "grant" if c.evaluate(focal) == "deny" else "deny"
        assert correspondence_check(c, focal, target).mismatches == ()


class TestBoundaryBothWays:
    def test_loan_agrees(self, loan, focal):
        via_t, via_cw = boundary_both_ways(loan, focal, "grant", 4)
        assert via_t == via_cw
        assert sorted(w.bits for w in via_t) == ["0100", "1000"]

    @given(st.integers(0, 2**16 - 1), st.integers(0, 15), st.integers(1, 4))
    def test_random_agreement(self, mask, value, d):
        from xfair.model import Classifier, TruthTable

        labels = ("deny", "grant")
        entries = tuple(labels[(mask >> i) & 1] for i in range(16))
        c = Classifier(random_table(Random(0), 4).space, labels, TruthTable(entries))
        focal = World(4, value)
        target = "grant" if c.evaluate(focal) == "deny" else "deny"
        via_t, via_cw = boundary_both_ways(c, focal, target, d)
        assert via_t == via_cw
