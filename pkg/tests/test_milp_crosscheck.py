"""Exact solver versus a direct big-M MIP at full clinic scale."""

import importlib.util
import pathlib

import pytest

pytest.importorskip("scipy")

from cohortcap.capacity import optimize
from cohortcap.domain import ClinicConfig, CohortPolicy, PenaltyWeights
from cohortcap.ingest import full_week
from cohortcap.scenario import realized_scenario

_spec = importlib.util.spec_from_file_location(
    "milp_crosscheck", pathlib.Path(__file__).resolve().parents[1] / "scripts" / "milp_crosscheck.py")
mc = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(mc)


@pytest.mark.parametrize("policy,week", [(CohortPolicy.THREE_UNIT, 1), (CohortPolicy.TWO_UNIT, 1),
                                         (CohortPolicy.TWO_UNIT, 2)])
def test_week_optimum_matches_mip(history, policy, week):
    cfg = ClinicConfig.for_policy(policy)
    w = PenaltyWeights()
    model, R = mc.week_model(policy, [d.as_tuple() for d in full_week(history, week)], w, cfg)
    res = model.solve()
    assert res.success
    ours = optimize(policy, cfg, w, realized_scenario(history, week, cfg))
    assert round(res.fun) == ours.expected_cost
