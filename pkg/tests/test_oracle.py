import math
import random

import pytest

from breakrisk.errors import EmptySnapshotError
from breakrisk.model import build_snapshot
from breakrisk.oracle import oracle_risk
from breakrisk.risk import BreakingSet, RiskMode, risk
from breakrisk.simulate import random_breaking_set, random_snapshot


def test_spot_values(mce0):
    assert oracle_risk(mce0, BreakingSet(["OPA1"]), "affected-paths") == pytest.approx(
        70 / 385, abs=1e-12
    )
    assert oracle_risk(mce0, BreakingSet(["OPE1"]), "literal") == pytest.approx(
        153 / 385, abs=1e-12
    )


def test_empty_set_scores_zero(mce0, mce2):
    for snapshot in (mce0, mce2):
        for mode in RiskMode:
            assert oracle_risk(snapshot, BreakingSet(), mode) == 0.0


def test_empty_snapshot_is_an_error():
    with pytest.raises(EmptySnapshotError):
        oracle_risk(build_snapshot([]), BreakingSet(["OPA1"]))


def test_matches_engine_on_fixtures(mce0, mce1, mce2, p3_prose):
    sets = [
        BreakingSet(["OPA1"]),
        BreakingSet(["OPE1"]),
        BreakingSet(["OPB1", "OPE1"]),
        BreakingSet(["OPC1", "OPE1"]),
        BreakingSet(["OPZ9"]),
    ]
    for snapshot in (mce0, mce1, mce2, p3_prose):
        sets.append(BreakingSet(snapshot.operations))
        for s in sets:
            for mode in RiskMode:
                expected = oracle_risk(snapshot, s, mode)
                actual = risk(snapshot, s, mode).total
                assert math.isclose(actual, expected, abs_tol=1e-12)


def test_matches_engine_on_random_cases():
    rng = random.Random(777)
    for _ in range(150):
        snapshot = random_snapshot(rng)
        s = random_breaking_set(rng, snapshot)
        mode = rng.choice(list(RiskMode))
        assert math.isclose(
            risk(snapshot, s, mode).total, oracle_risk(snapshot, s, mode), abs_tol=1e-12
        )
