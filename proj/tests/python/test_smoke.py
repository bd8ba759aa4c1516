import json
import math

import numpy as np
import pytest

import rmtdec


def test_weights():
    g = rmtdec.Weight.gauss()
    assert g.family == "gauss"
    assert g.theta() == pytest.approx(math.sqrt(math.pi / 2))
    j = rmtdec.Weight.jacobi(0.0)
    assert j.theta() == pytest.approx(1.0)
    assert j.omega == 1.0
    with pytest.raises(rmtdec.Error):
        rmtdec.Weight.jacobi(-2.0)


def test_sample_shape_and_determinism():
    a = rmtdec.sample("oe", 3, 200, seed=5)
    b = rmtdec.sample("oe", 3, 200, seed=5)
    assert a.shape == (200, 3)
    assert np.array_equal(a, b)
    assert np.all(np.diff(a, axis=1) >= 0)


def test_decimation():
    sv = rmtdec.singular_values([-3.0, 1.0, 2.0, -0.5])
    assert sv == [0.5, 1.0, 2.0, 3.0]
    even, odd = rmtdec.decimate(sv)
    assert even == [0.5, 2.0]
    assert odd == [1.0, 3.0]
    assert rmtdec.superpose(even, odd) == sv


def test_gap_engines():
    g = rmtdec.Weight.gauss()
    r = rmtdec.gap_ue(g, 1, -1.0, 1.0)
    assert r["E"][0] == pytest.approx(1 - math.erf(1.0), rel=1e-12)
    odd = rmtdec.gap_oe_odd(g, 3, 1.0)
    assert sum(odd["E"]) == pytest.approx(1.0, abs=1e-8)
    cue = rmtdec.gap_cue(2, 1.0)
    plus = rmtdec.gap_orthogonal(1, 2, 1.0)
    minus = rmtdec.gap_orthogonal(-1, 2, 1.0)
    # E_CUE(0) equals the product of the two orthogonal-group gap probabilities.
    assert cue["E"][0] == pytest.approx(plus["E"][0] * minus["E"][0], abs=1e-12)
    mc = rmtdec.gap_mc("ue", 1, -1.0, 1.0, count=20000, seed=3)
    assert abs(mc["E"][0] - r["E"][0]) < 5 * mc["stderr"][0]


def test_identity_and_cli():
    assert "thm1" in rmtdec.identity_names()
    rep = json.loads(rmtdec.run_identity("recurrence"))
    assert rep["pass"]
    code, out, _ = rmtdec.run_cli(["gap", "--kind", "cue", "--n", "2", "--theta", "1.0"])
    assert code == 0
    assert json.loads(out)["E"][0] == pytest.approx(rmtdec.gap_cue(2, 1.0)["E"][0])
    code, _, _ = rmtdec.run_cli(["sample", "--kind", "nope"])
    assert code == 2
