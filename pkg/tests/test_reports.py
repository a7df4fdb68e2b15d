import json
import math

import pytest

from ltbounds.reports import BoundReport


class TestBoundReport:
    def test_ratio_and_pass(self):
        rep = BoundReport.build(1.0, 2.0, constant_used=0.5)
        assert rep.ratio == 0.5 and rep.passed

    def test_both_zero(self):
        rep = BoundReport.build(0.0, 0.0, constant_used=1.0)
        assert rep.ratio == 0.0 and rep.passed

    def test_zero_rhs_positive_lhs_fails(self):
        rep = BoundReport.build(1.0, 0.0, constant_used=1.0)
        assert rep.ratio == math.inf and not rep.passed

    def test_round_off_slack(self):
        rep = BoundReport.build(1.0 + 5e-13, 1.0, constant_used=1.0)
        assert rep.passed
        rep = BoundReport.build(1.0 + 5e-12, 1.0, constant_used=1.0)
        assert not rep.passed

    def test_negative_sides_rejected(self):
        with pytest.raises(ValueError):
            BoundReport.build(-1.0, 1.0, constant_used=1.0)

    def test_rhs_scaling(self):
        rep = BoundReport.build(1.0, 2.0, constant_used=0.5, seed=7)
        scaled = rep.with_rhs_scaled(0.01)
        assert scaled.rhs == pytest.approx(0.02)
        assert not scaled.passed
        assert scaled.metadata["rhs_scale"] == 0.01
        assert scaled.metadata["seed"] == 7
        with pytest.raises(ValueError):
            rep.with_rhs_scaled(0.0)

    def test_json_pass_key(self):
        rep = BoundReport.build(1.0, 2.0, constant_used=0.5, gamma=1.5)
        payload = json.loads(rep.to_json())
        assert payload["pass"] is True
        assert payload["gamma"] == 1.5
