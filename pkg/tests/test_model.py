"""Feature spaces, worlds, classifier representations, and serialization.

The oracle for representation equivalence is pointwise evaluation over the
full cube, which is cheap at the widths used here.
"""

import json
from random import Random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import constant, grant_iff_income, random_table
from xfair.errors import ParseError, ValidationError
from xfair.model import (
    Classifier,
    DecisionTree,
    FeatureSpace,
    LabelRules,
    Leaf,
    Rule,
    Split,
    TruthTable,
    World,
    classifier_from_dict,
    classifier_to_dict,
    enumerate_worlds,
    ground_truth_from_dict,
    hamming,
    load_classifier,
    max_features,
    parse_instance,
)


class TestFeatureSpace:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSpace(("a", "a"))

    def test_empty_name_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSpace(("a", ""))

    def test_index_lookup(self, space):
        assert space.index("income_high") == 0
        assert space.index("savings") == 3
        with pytest.raises(ValidationError):
            space.index("nope")

    def test_world_from_bits_mapping_and_int(self, space):
        by_bits = space.world("0100")
        by_map = space.world(
            {"income_high": False, "privileged": True, "fraud": False, "savings": False}
        )
        by_int = space.world(4)
        assert by_bits == by_map == by_int

    def test_partial_mapping_rejected(self, space):
        with pytest.raises(ValidationError):
            space.world({"privileged": True})

    def test_feature_zero_is_most_significant(self, space):
        w = space.world("1000")
        assert w.value == 8
        assert w.bit(0) == 1


class TestWorld:
    def test_bits_round_trip(self):
        w = World.from_bits("0101")
        assert w.bits == "0101"
        assert w.width == 4 and w.value == 5

    def test_flipped_and_diff(self):
        w = World.from_bits("0000")
        v = w.flipped((0, 2))
        assert v.bits == "1010"
        assert v.diff(w) == (0, 2)
        assert hamming(w, v) == 2

    def test_overwrite(self):
        w = World.from_bits("0000")
        assert w.overwrite({1: 1, 3: 1}).bits == "0101"

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            hamming(World.from_bits("00"), World.from_bits("000"))

    @given(st.integers(0, 255), st.sets(st.integers(0, 7)))
    def test_flipped_is_involution(self, value, idxs):
        w = World(8, value)
        assert w.flipped(tuple(idxs)).flipped(tuple(idxs)) == w

    @given(
        st.integers(0, 255),
        st.dictionaries(st.integers(0, 7), st.integers(0, 1)),
    )
    def test_overwrite_idempotent(self, value, assignment):
        w = World(8, value)
        once = w.overwrite(assignment)
        assert once.overwrite(assignment) == once

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_hamming_is_a_metric(self, a, b, c):
        wa, wb, wc = World(8, a), World(8, b), World(8, c)
        assert hamming(wa, wb) == hamming(wb, wa)
        assert (hamming(wa, wb) == 0) == (wa == wb)
        assert hamming(wa, wc) <= hamming(wa, wb) + hamming(wb, wc)


class TestEnumeration:
    def test_small_orders(self):
        s1 = FeatureSpace(("a",))
        assert [w.bits for w in enumerate_worlds(s1)] == ["0", "1"]
        s2 = FeatureSpace(("a", "b"))
        assert [w.bits for w in enumerate_worlds(s2)] == ["00", "01", "10", "11"]

    def test_count_n10(self):
        s = FeatureSpace(tuple(f"f{i}" for i in range(10)))
        seen = {w.value for w in enumerate_worlds(s)}
        assert len(seen) == 1024

    def test_feature_cap(self, monkeypatch):
        assert max_features() == 24
        with pytest.raises(ValidationError):
            FeatureSpace(tuple(f"f{i}" for i in range(25)))
        monkeypatch.setenv("XFAIR_MAX_N", "30")
        assert max_features() == 30
        FeatureSpace(tuple(f"f{i}" for i in range(25)))


class TestEvaluation:
    def test_loan_narrative_points(self, loan, space):
        assert loan.evaluate(space.world("0000")) == "deny"
        assert loan.evaluate(space.world("1000")) == "grant"
        assert loan.evaluate(space.world("1010")) == "deny"
        assert loan.evaluate(space.world("0100")) == "grant"

    def test_constant(self):
        c = constant("deny")
        for w in enumerate_worlds(c.space):
            assert c.evaluate(w) == "deny"

    def test_representations_agree_pointwise(self, loan):
        table = loan.as_truth_table()
        tree = Classifier(
            loan.space,
            loan.labels,
            DecisionTree(
                Split(
                    2,
                    Leaf("deny"),
                    Split(0, Leaf("grant"), Split(1, Leaf("grant"), Leaf("deny"))),
                )
            ),
            name="loan_tree",
        )
        for w in enumerate_worlds(loan.space):
            assert loan.evaluate(w) == table.evaluate(w) == tree.evaluate(w)

    @given(st.integers(0, 2**16 - 1))
    def test_truth_table_reads_entry(self, mask):
        labels = ("deny", "grant")
        entries = tuple(labels[(mask >> i) & 1] for i in range(16))
        c = random_table(Random(0), 4)
        c = Classifier(c.space, labels, TruthTable(entries), name="mask")
        for w in enumerate_worlds(c.space):
            assert c.evaluate(w) == entries[w.value]


class TestValidation:
    def test_truth_table_length(self):
        space = FeatureSpace(("a", "b", "c"))
        with pytest.raises(ValidationError):
            Classifier(space, ("deny", "grant"), TruthTable(("deny",) * 7))

    def test_fewer_than_two_labels(self):
        space = FeatureSpace(("a",))
        with pytest.raises(ValidationError):
            Classifier(space, ("deny",), TruthTable(("deny", "deny")))

    def test_rules_unknown_label(self):
        space = FeatureSpace(("a",))
        with pytest.raises(ValidationError):
            Classifier(
                space,
                ("deny", "grant"),
                LabelRules(rules=(Rule("approve", (((0, True),),)),), default="deny"),
            )

    def test_tree_feature_out_of_range(self):
        space = FeatureSpace(("a",))
        with pytest.raises(ValidationError):
            Classifier(
                space,
                ("deny", "grant"),
                DecisionTree(Split(3, Leaf("deny"), Leaf("grant"))),
            )


class TestSerialization:
    def test_fixture_loads(self, model_path, loan):
        with open(model_path) as fh:
            c = load_classifier(fh.read())
        assert c.space.features == loan.space.features
        for w in enumerate_worlds(c.space):
            assert c.evaluate(w) == loan.evaluate(w)

    def test_malformed_json_is_parse_error(self):
        with pytest.raises(ParseError):
            load_classifier("{not json")

    def test_round_trip_all_representations(self, loan):
        tree = Classifier(
            loan.space,
            loan.labels,
            DecisionTree(Split(2, Leaf("deny"), Leaf("grant"))),
            name="t",
        )
        for c in (loan, loan.as_truth_table(), tree):
            again = classifier_from_dict(classifier_to_dict(c))
            for w in enumerate_worlds(c.space):
                assert again.evaluate(w) == c.evaluate(w)

    @given(st.integers(0, 2**8 - 1))
    def test_round_trip_random_tables(self, mask):
        labels = ("deny", "grant")
        space = FeatureSpace(("a", "b", "c"))
        entries = tuple(labels[(mask >> i) & 1] for i in range(8))
        c = Classifier(space, labels, TruthTable(entries))
        again = classifier_from_dict(classifier_to_dict(c))
        assert all(again.evaluate(w) == c.evaluate(w) for w in enumerate_worlds(space))

    def test_parse_instance_forms(self, space):
        assert parse_instance("0100", space) == space.world("0100")
        assert parse_instance({"bits": "0100"}, space) == space.world("0100")
        full = {"income_high": False, "privileged": True, "fraud": False, "savings": False}
        assert parse_instance({"values": full}, space) == space.world("0100")
        with pytest.raises(ValidationError):
            parse_instance("01", space)
        with pytest.raises(ValidationError):
            parse_instance({"values": {"nope": True}}, space)

    def test_ground_truth_from_dict(self, space):
        gt = ground_truth_from_dict(
            {"points": [{"bits": "1100", "label": "grant"}]}, space
        )
        world, label = gt.points[0]
        assert world == space.world("1100") and label == "grant"


def test_grant_iff_income_shape():
    c = grant_iff_income()
    assert c.evaluate(c.space.world("1000")) == "grant"
    assert c.evaluate(c.space.world("0111")) == "deny"
