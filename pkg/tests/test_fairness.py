"""Prejudicial factors, bias witnesses, conundrum checks, and assembly of
fair and adequate explanation sets."""

from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import grant_iff_income, random_table
from xfair.errors import InfeasibleError, ValidationError
from xfair.fairness import (
    ConundrumSpec,
    PrejudicialFactor,
    biased_dependency,
    check_CB,
    check_CI,
    check_CM,
    fair_adequate_set,
    implicitly_definable,
    verify_fair_set,
)
from xfair.formulas import formula_to_text
from xfair.model import World, enumerate_worlds
from xfair.transforms import Transformation


class TestPrejudicialFactor:
    def test_apply_and_fixes(self, p_priv, space):
        assert p_priv.apply(space.world("0000")) == space.world("0100")
        assert p_priv.fixes(space.world("0100"))
        assert not p_priv.fixes(space.world("0000"))

    def test_idempotent(self, p_priv, space):
        for w in enumerate_worlds(space):
            once = p_priv.apply(w)
            assert p_priv.apply(once) == once

    def test_empty_setter_rejected(self):
        with pytest.raises(ValidationError):
            PrejudicialFactor("P", Transformation(()))

    def test_serialization(self, p_priv, space):
        assert p_priv.to_dict(space) == {"name": "P_priv", "set": {"privileged": True}}


class TestBiasedDependency:
    def test_loan_savings_witness(self, loan, focal, p_priv, space):
        w = biased_dependency(loan, p_priv, focal, 4)
        assert w is not None
        assert w.indices == (space.index("savings"),)
        assert w.base_label == "deny" and w.factored_label == "grant"

    def test_witness_equalities_hold(self, loan, focal, p_priv):
        """The four evaluations underlying the witness, re-run from scratch."""
        w = biased_dependency(loan, p_priv, focal, 4)
        flipped = w.transformation.apply(focal)
        assert loan.evaluate(focal) == loan.evaluate(flipped) == w.base_label
        assert (
            loan.evaluate(p_priv.apply(focal))
            == loan.evaluate(p_priv.apply(flipped))
            == w.factored_label
        )
        assert w.base_label != w.factored_label

    def test_irrelevant_factor_has_no_witness(self):
        c = grant_iff_income()
        p = PrejudicialFactor(
            "P_priv", Transformation.setting({c.space.index("privileged"): 1})
        )
        assert biased_dependency(c, p, c.space.world("0000"), 4) is None

    def test_canonical_first_witness(self, loan, focal, p_priv):
        """Brute force in canonical order must find the same first witness."""
        from xfair.transforms import iter_index_sets

        expected = None
        for idxs in iter_index_sets(4, 4):
            if not idxs:
                continue
            flipped = focal.flipped(idxs)
            eta = loan.evaluate(focal)
            if loan.evaluate(flipped) != eta:
                continue
            pi = loan.evaluate(p_priv.apply(focal))
            if pi == eta:
                continue
            if loan.evaluate(p_priv.apply(flipped)) == pi:
                expected = idxs
                break
        got = biased_dependency(loan, p_priv, focal, 4)
        assert got.indices == expected


class TestImplicitDefinability:
    def test_priv_factor_defined_by_its_atom(self, p_priv, space, loan):
        population = tuple(enumerate_worlds(space))
        formula = implicitly_definable(p_priv, population)
        assert formula is not None
        assert formula_to_text(formula, space) == "privileged"

    def test_two_dim_setter_needs_conjunction(self, space):
        p = PrejudicialFactor("P2", Transformation.setting({1: 1, 3: 1}))
        population = tuple(enumerate_worlds(space))
        formula = implicitly_definable(p, population)
        assert formula_to_text(formula, space) == "privileged & savings"

    def test_formula_separates_fixed_points(self, p_priv, space, loan):
        from xfair.formulas import satisfies

        population = tuple(enumerate_worlds(space))
        formula = implicitly_definable(p_priv, population)
        for w in population:
            assert satisfies(w, formula, loan) == p_priv.fixes(w)

    def test_single_world_population_degenerate(self, p_priv, space):
        formula = implicitly_definable(p_priv, (space.world("0100"),))
        assert formula is not None


class TestConundrumSpec:
    def test_ci_attending_everything_is_unsatisfiable(self, loan, focal):
        spec = ConundrumSpec("CI", (0, 1, 2, 3))
        assert spec.complement(4) == ()
        with pytest.raises(InfeasibleError) as exc:
            fair_adequate_set(loan, focal, "grant", 4, spec, ())
        assert exc.value.constraint == "CI"

    def test_cm_needs_dims(self):
        with pytest.raises(ValidationError):
            ConundrumSpec("CM", ())

    def test_complement(self, ci_income):
        assert ci_income.complement(4) == (1, 2, 3)

    def test_round_trip(self, space, ci_income, cm_income):
        for spec in (ci_income, cm_income):
            doc = spec.to_dict(space)
            assert ConundrumSpec.from_dict(doc, space) == spec


class TestChecks:
    def test_ci_discharged_by_privilege(self, loan, focal, ci_income):
        deltas = [Transformation.flip(focal, (1,))]
        assert check_CI(loan, focal, ci_income, deltas, "grant").ok

    def test_ci_not_discharged_by_income(self, loan, focal, ci_income):
        deltas = [Transformation.flip(focal, (0,))]
        assert not check_CI(loan, focal, ci_income, deltas, "grant").ok

    def test_ci_empty_deltas(self, loan, focal, ci_income):
        assert not check_CI(loan, focal, ci_income, [], "grant").ok

    def test_cm_discharged_by_income(self, loan, focal, cm_income):
        deltas = [Transformation.flip(focal, (0,))]
        assert check_CM(loan, focal, cm_income, deltas, "grant").ok

    def test_cm_not_discharged_by_privilege(self, loan, focal, cm_income):
        deltas = [Transformation.flip(focal, (1,))]
        assert not check_CM(loan, focal, cm_income, deltas, "grant").ok

    def test_cm_unconfirmable_diagnostic(self, focal):
        c = grant_iff_income()
        spec = ConundrumSpec("CM", (c.space.index("savings"),))
        verdict = check_CM(c, focal, spec, [Transformation.flip(focal, (3,))], "grant")
        assert not verdict.ok
        assert verdict.diagnostic == "belief unconfirmable"

    def test_cb_fixed_point_required(self, loan, focal, p_priv):
        priv = [Transformation.flip(focal, (1,))]
        income = [Transformation.flip(focal, (0,))]
        assert check_CB(loan, focal, [p_priv], priv, "grant").ok
        assert not check_CB(loan, focal, [p_priv], income, "grant").ok

    def test_cb_vacuous_without_factors(self, loan, focal):
        assert check_CB(loan, focal, [], [], "grant").ok


class TestFairAdequateSet:
    def test_ci_single_delta(self, loan, focal, ci_income, p_priv, space):
        fs = fair_adequate_set(loan, focal, "grant", 4, ci_income, (p_priv,))
        assert [t.to_dict(space) for t in fs.deltas] == [{"set": {"privileged": True}}]
        certs = dict(fs.certificates)
        assert set(certs) == {"CI", "CB:P_priv"}

    def test_cm_needs_two(self, loan, focal, cm_income, p_priv, space):
        fs = fair_adequate_set(loan, focal, "grant", 4, cm_income, (p_priv,))
        images = sorted(t.apply(focal).bits for t in fs.deltas)
        assert images == ["0100", "1000"]

    def test_zero_radius_infeasible(self, loan, focal, ci_income, p_priv):
        with pytest.raises(InfeasibleError) as exc:
            fair_adequate_set(loan, focal, "grant", 0, ci_income, (p_priv,))
        assert exc.value.constraint

    def test_infeasible_names_constraint(self, loan, focal, ci_income):
        p_fraud = PrejudicialFactor(
            "P_fraud", Transformation.setting({loan.space.index("fraud"): 1})
        )
        with pytest.raises(InfeasibleError) as exc:
            fair_adequate_set(loan, focal, "grant", 4, ci_income, (p_fraud,))
        assert exc.value.constraint == "CB:P_fraud"

    def test_overdetermination_attached(self, loan, focal, ci_income, p_priv):
        fs = fair_adequate_set(loan, focal, "grant", 4, ci_income, (p_priv,))
        assert fs.overdetermination.overdetermined
        assert len(fs.overdetermination.deltas) == 2

    def test_verify_round_trip(self, loan, focal, ci_income, cm_income, p_priv):
        for spec in (ci_income, cm_income):
            fs = fair_adequate_set(loan, focal, "grant", 4, spec, (p_priv,))
            assert verify_fair_set(loan, focal, "grant", fs, spec, (p_priv,))

    def test_factors_only(self, loan, focal, p_priv):
        fs = fair_adequate_set(loan, focal, "grant", 4, None, (p_priv,))
        assert len(fs.deltas) == 1
        assert check_CB(loan, focal, [p_priv], fs.deltas, "grant").ok

    @given(st.integers(0, 10_000))
    @settings(max_examples=80)
    def test_random_feasible_sets_verify_and_prune_minimal(self, seed):
        rng = Random(seed)
        n = rng.randint(3, 5)
        c = random_table(rng, n)
        focal = World(n, rng.randrange(1 << n))
        target = "grant" if c.evaluate(focal) == "deny" else "deny"
        if rng.random() < 0.5:
            spec = ConundrumSpec(
                "CM", tuple(sorted(rng.sample(range(n), rng.randint(1, n - 1))))
            )
        else:
            spec = ConundrumSpec(
                "CI", tuple(sorted(rng.sample(range(n), rng.randint(0, n - 1))))
            )
        factors = ()
        if rng.random() < 0.6:
            factors = (
                PrejudicialFactor(
                    "P", Transformation.setting({rng.randrange(n): rng.randint(0, 1)})
                ),
            )
        try:
            fs = fair_adequate_set(c, focal, target, n, spec, factors)
        except InfeasibleError as exc:
            assert exc.constraint
            return
        assert verify_fair_set(c, focal, target, fs, spec, factors)
        for i in range(len(fs.deltas)):
            sub = fs.deltas[:i] + fs.deltas[i + 1 :]
            assert not verify_fair_set(
                c, focal, target,
                type(fs)(
                    focal=fs.focal, target=fs.target, radius=fs.radius,
                    deltas=sub, certificates=fs.certificates,
                    overdetermination=fs.overdetermination,
                ),
                spec, factors,
            ), "dropping a delta should break some obligation"
