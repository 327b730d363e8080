import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from breakrisk.errors import BranchKeyError, EmptySnapshotError, SnapshotBuildError
from breakrisk.model import (
    BranchKey,
    OperationId,
    SnapshotWarning,
    build_snapshot,
    caller_of,
    coefficient,
    infer_operation,
    merge_snapshots,
    parse_branch_key,
    snapshot_warnings,
)
from breakrisk.fixtures import builtin_fixture


def key(text):
    return parse_branch_key(text)


class TestOperationId:
    def test_compact_label(self):
        assert OperationId("B", "2").label == "OPB2"

    def test_generic_label(self):
        assert OperationId("cart", "GET /cart").label == "cart.GET /cart"

    def test_nonempty_fields(self):
        with pytest.raises(BranchKeyError):
            OperationId("", "1")
        with pytest.raises(BranchKeyError):
            OperationId("A", "")

    def test_no_dot_in_service(self):
        with pytest.raises(BranchKeyError):
            OperationId("svc.prod", "x")

    def test_no_separator_in_label(self):
        with pytest.raises(BranchKeyError):
            OperationId("A", "a;b")
        with pytest.raises(BranchKeyError):
            OperationId("A", "a:b")

    def test_infer_compact(self):
        assert infer_operation("OPB2") == OperationId("B", "2")
        assert infer_operation("OPAB12") == OperationId("AB", "12")

    def test_infer_dotted(self):
        assert infer_operation("cart.checkout") == OperationId("cart", "checkout")
        # name keeps any further dots
        assert infer_operation("api.users.list") == OperationId("api", "users.list")

    def test_infer_rejects_garbage(self):
        for label in ("", "OP1", "plainword", ".leading"):
            with pytest.raises(BranchKeyError):
                infer_operation(label)


class TestParseBranchKey:
    def test_semicolon(self):
        assert key("OPD1;OPB2").labels == ("OPD1", "OPB2")

    def test_colon_accepted(self):
        assert key("OPA1:OPB1:OPC1").labels == ("OPA1", "OPB1", "OPC1")

    def test_single(self):
        assert key("OPA1").labels == ("OPA1",)

    def test_empty_segment(self):
        with pytest.raises(BranchKeyError):
            key("OPA1;;OPB1")
        with pytest.raises(BranchKeyError):
            key("OPA1;")

    def test_empty_text(self):
        with pytest.raises(BranchKeyError):
            key("")

    def test_loop_rejected(self):
        with pytest.raises(BranchKeyError):
            key("OPA1;OPB1;OPA1")

    def test_registry_resolution(self):
        registry = {"checkout": OperationId("shop", "checkout")}
        parsed = parse_branch_key("checkout", registry, auto_register=False)
        assert parsed.ops[0].service == "shop"

    def test_unresolvable_without_auto_register(self):
        with pytest.raises(BranchKeyError):
            parse_branch_key("OPA1", registry={}, auto_register=False)

    def test_auto_register_fills_registry(self):
        registry = {}
        parse_branch_key("OPA1;OPB1", registry)
        assert registry["OPB1"] == OperationId("B", "1")

    @given(
        st.lists(
            st.tuples(
                st.text(alphabet="ABCDEFGH", min_size=1, max_size=2),
                st.integers(min_value=1, max_value=99),
            ),
            min_size=1,
            max_size=5,
            unique=True,
        )
    )
    def test_render_parse_round_trip(self, pairs):
        ops = [OperationId(service, str(number)) for service, number in pairs]
        labels = [op.label for op in ops]
        if len(set(labels)) != len(labels):
            return
        original = BranchKey(tuple(ops))
        assert parse_branch_key(original.render()) == original


class TestCallerOf:
    def test_two_level(self):
        assert caller_of(key("OPD1;OPB2")) == "D"

    def test_root_is_entry(self):
        assert caller_of(key("OPA1")) == "ENTRY"

    def test_three_level(self):
        assert caller_of(key("OPD1;OPB2;OPE1")) == "B"

    def test_custom_entry_label(self):
        assert caller_of(key("OPA1"), entry_label="GATEWAY") == "GATEWAY"


class TestBuildSnapshot:
    def test_mce0_grand_total(self, mce0):
        assert mce0.grand_total == 385

    def test_mce1_grand_total(self, mce1):
        assert mce1.grand_total == 424

    def test_empty(self):
        snapshot = build_snapshot([])
        assert snapshot.grand_total == 0
        assert snapshot.paths == ()

    def test_duplicate_root_rejected(self):
        rows = [(1, key("OPA1"), 1), (2, key("OPA1;OPB1"), 1)]
        with pytest.raises(SnapshotBuildError):
            build_snapshot(rows)

    def test_duplicate_key_rejected(self):
        rows = [(1, key("OPA1"), 1), (1, key("OPA1"), 2)]
        with pytest.raises(SnapshotBuildError):
            build_snapshot(rows)

    def test_mixed_roots_in_one_path_rejected(self):
        rows = [(1, key("OPA1"), 1), (1, key("OPB1"), 1)]
        with pytest.raises(SnapshotBuildError):
            build_snapshot(rows)

    def test_negative_count_rejected(self):
        with pytest.raises(SnapshotBuildError):
            build_snapshot([(1, key("OPA1"), -1)])

    def test_bad_path_id_rejected(self):
        with pytest.raises(SnapshotBuildError):
            build_snapshot([(0, key("OPA1"), 1)])

    def test_prefix_materialized_with_warning(self):
        with pytest.warns(SnapshotWarning):
            snapshot = build_snapshot([(1, key("OPA1;OPB1"), 5)])
        assert snapshot.branch_counts == {"OPA1": 0, "OPA1;OPB1": 5}
        assert snapshot.grand_total == 5

    def test_entry_label_collision_rejected(self):
        op = OperationId("ENTRY", "x")
        with pytest.raises(SnapshotBuildError):
            build_snapshot([(1, BranchKey((op,)), 1)])

    def test_row_order_irrelevant(self, mce0):
        rows = [
            (path.id, entry.key, entry.count)
            for path in mce0.paths
            for entry in path.branches
        ]
        for seed in (1, 2, 3):
            shuffled = rows[:]
            random.Random(seed).shuffle(shuffled)
            assert build_snapshot(shuffled) == mce0

    def test_caller_totals(self, mce0):
        assert mce0.caller_totals == {"ENTRY": 172, "A": 20, "B": 74, "D": 76, "F": 43}
        assert sum(mce0.caller_totals.values()) == mce0.grand_total

    def test_child_heavier_than_parent_only_warns(self):
        snapshot = build_snapshot([(1, key("OPA1"), 1), (1, key("OPA1;OPB1"), 10)])
        assert snapshot.grand_total == 11
        assert snapshot_warnings(snapshot)


class TestCoefficient:
    def test_entry_share(self, mce0):
        assert coefficient(mce0, "ENTRY") == pytest.approx(172 / 385, abs=1e-12)

    def test_leaf_service_is_zero(self, mce0):
        assert coefficient(mce0, "C") == 0.0

    def test_sums_to_one(self, mce0, mce1, mce2):
        for snapshot in (mce0, mce1, mce2):
            total = sum(coefficient(snapshot, caller) for caller in snapshot.caller_totals)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_empty_snapshot_undefined(self):
        with pytest.raises(EmptySnapshotError):
            coefficient(build_snapshot([]), "ENTRY")


class TestMergeSnapshots:
    def test_identity(self, mce0):
        assert merge_snapshots(mce0, build_snapshot([])) == mce0

    def test_doubling(self, mce0):
        doubled = merge_snapshots(mce0, mce0)
        assert doubled.grand_total == 770
        for path in doubled.paths:
            original = mce0.path_by_id(path.id)
            for rendered, count in path.counts.items():
                assert count == 2 * original.counts[rendered]

    def test_mixed_windows(self, mce0, mce1):
        assert merge_snapshots(mce0, mce1).grand_total == 809

    def test_entry_label_mismatch(self, mce0):
        other = build_snapshot([], entry_label="GATEWAY")
        with pytest.raises(SnapshotBuildError):
            merge_snapshots(mce0, other)

    def test_conflicting_ids_renumbered_by_root(self):
        a = build_snapshot([(1, key("OPA1"), 1)])
        b = build_snapshot([(1, key("OPF1"), 2)])
        merged = merge_snapshots(a, b)
        assert [(p.id, p.root.label) for p in merged.paths] == [(1, "OPA1"), (2, "OPF1")]

    def test_compatible_ids_kept(self, mce0, mce1):
        merged = merge_snapshots(mce0, mce1)
        assert [(p.id, p.root.label) for p in merged.paths] == [
            (1, "OPA1"),
            (2, "OPD2"),
            (3, "OPD1"),
            (4, "OPF1"),
        ]


def test_fixture_snapshots_are_value_equal():
    assert builtin_fixture("mce0") == builtin_fixture("mce0")
    assert builtin_fixture("mce0") != builtin_fixture("mce1")
